// svshg: run SV / SHG scenarios and write plot-ready CSV.
//
// Exit codes: 0 ok, 1 config or input error, 2 solver error, 3 oracle failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "svshg/analysis.hpp"
#include "svshg/config.hpp"
#include "svshg/csv.hpp"
#include "svshg/errors.hpp"
#include "svshg/experiments.hpp"
#include "svshg/oracle_suite.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kSolver = 2, kOracle = 3 };

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::optional<std::uint64_t> seed;
  int verbosity = 0;
  unsigned threads = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw svshg::IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

svshg::ExperimentConfig load(const Common& c, svshg::Scenario scenario) {
  std::vector<std::string> overrides = c.overrides;
  if (c.seed) overrides.push_back("sweep.seed=" + std::to_string(*c.seed));
  if (!c.output.empty()) overrides.push_back("sweep.output=" + c.output);
  const std::string text = c.config_path.empty()
                               ? svshg::serialize_config(svshg::default_config(scenario))
                               : read_file(c.config_path);
  return svshg::parse_config(text, scenario, overrides);
}

void print_summary(const svshg::Summary& s, std::FILE* out) {
  for (const auto& [k, v] : s.entries()) std::fprintf(out, "%s = %.9g\n", k.c_str(), v);
}

void write_table(const svshg::ExperimentConfig& cfg, const std::vector<svshg::SweepRow>& rows,
                 svshg::Table table, const svshg::Summary& summary, int verbosity) {
  if (cfg.sweep.output.empty()) {
    std::fputs(svshg::format_csv(rows, table).c_str(), stdout);
    print_summary(summary, stderr);
    return;
  }
  svshg::emit_csv(rows, table, cfg.sweep.output, cfg);
  print_summary(summary, stdout);
  if (verbosity > 0) {
    std::fprintf(stderr, "wrote %zu rows to %s (%s)\n", rows.size(), cfg.sweep.output.c_str(),
                 std::string(svshg::table_name(table)).c_str());
  }
}

int run_table(const Common& c, svshg::Scenario scenario, svshg::Table table,
              bool extraction = false) {
  const svshg::ExperimentConfig cfg = load(c, scenario);
  if (c.verbosity > 0) {
    std::fprintf(stderr, "scenario %s, %d points, config hash %016llx\n",
                 std::string(svshg::scenario_name(scenario)).c_str(), cfg.sweep.points,
                 static_cast<unsigned long long>(svshg::config_hash(cfg)));
  }
  const svshg::ScenarioResult r = svshg::run_scenario(cfg, {c.threads});
  write_table(cfg, extraction ? r.extraction : r.rows, table, r.summary, c.verbosity);
  return kOk;
}

struct CsvData {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  const std::vector<double>* column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return &columns[i];
    }
    return nullptr;
  }
};

CsvData read_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  CsvData d;
  std::string line;
  if (!std::getline(in, line)) throw svshg::IoError("'" + path + "' is empty");
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) d.header.push_back(cell);
  d.columns.resize(d.header.size());
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    for (std::string cell; std::getline(ls, cell, ','); ++i) {
      if (i >= d.header.size()) break;
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        throw svshg::IoError(path + " line " + std::to_string(line_no) + ": bad number '" +
                             cell + "'");
      }
      d.columns[i].push_back(v);
    }
    if (i != d.header.size()) {
      throw svshg::IoError(path + " line " + std::to_string(line_no) + ": wrong column count");
    }
  }
  return d;
}

int run_fit(const std::string& data, const std::string& model_name, const std::string& xcol,
            const std::string& ycol, const std::string& scol) {
  svshg::FitModel model;
  if (model_name == "linear") {
    model = svshg::FitModel::Linear;
  } else if (model_name == "linear-quadratic") {
    model = svshg::FitModel::LinearPlusQuadratic;
  } else if (model_name == "quadratic") {
    model = svshg::FitModel::PureQuadratic;
  } else {
    throw svshg::ConfigError("model must be linear, linear-quadratic or quadratic", 0, "--model");
  }
  const CsvData d = read_csv(data);
  const auto* x = d.column(xcol);
  const auto* y = d.column(ycol);
  if (!x || !y) throw svshg::ConfigError("column not found in " + data, 0, x ? ycol : xcol);
  const auto* s = scol.empty() ? nullptr : d.column(scol);
  if (!scol.empty() && !s) throw svshg::ConfigError("column not found in " + data, 0, scol);
  const bool weighted = s && std::all_of(s->begin(), s->end(), [](double v) { return v > 0.0; });
  const svshg::FitResult f = weighted ? svshg::fit(*x, *y, *s, model) : svshg::fit(*x, *y, model);
  std::printf("model = %s\nweighted = %s\npoints = %zu\n", svshg::to_string(model),
              weighted ? "true" : "false", x->size());
  std::printf("a = %.9g\nsigma_a = %.9g\nb = %.9g\nsigma_b = %.9g\n", f.a, f.sigma_a, f.b,
              f.sigma_b);
  std::printf("chi_square = %.9g\nreduced_chi_square = %.9g\nr_squared = %.12g\n", f.chi_square,
              f.reduced_chi_square, f.r_squared);
  if (model != svshg::FitModel::PureQuadratic) {
    const svshg::Efficiency e = svshg::efficiency_from_fit(f);
    std::printf("eta = %.9g\nsigma_eta = %.9g\n", e.value, e.sigma);
  }
  return kOk;
}

int run_calibrate(const Common& c) {
  Common quiet = c;
  quiet.output.clear();
  svshg::ExperimentConfig cfg = load(quiet, svshg::Scenario::Calibrate);
  const svshg::CalibrationResult r = svshg::calibrate(cfg);
  std::printf("beta = %.9g\nnonlinearity_scale = %.9g\npath_efficiency = %.9g\n", r.beta,
              r.nonlinearity_scale, r.path_efficiency);
  std::printf("crossover_n = %.9g\neta_pre_path = %.9g\neta_post_path = %.9g\n", r.crossover_n,
              r.eta_pre_path, r.eta_post_path);
  const std::string text = svshg::serialize_config(svshg::apply_calibration(cfg, r));
  if (!c.output.empty()) {
    std::ofstream f(c.output, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) throw svshg::IoError("cannot write '" + c.output + "'");
    if (c.verbosity > 0) std::fprintf(stderr, "wrote calibrated config to %s\n", c.output.c_str());
  }
  return kOk;
}

int run_oracle_cmd() {
  const svshg::OracleReport report = svshg::run_oracle();
  for (const auto& check : report.checks) {
    std::printf("%s  %-45s err=%.3e tol=%.1e\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.error, check.tolerance);
  }
  return report.passed() ? kOk : kOracle;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Squeezed-vacuum SHG model: sweeps, fits, calibration, oracle checks"};
  app.require_subcommand(1);
  Common c;

  const auto add_common = [&c](CLI::App* sub) {
    sub->add_option("-c,--config", c.config_path, "Config file")->check(CLI::ExistingFile);
    sub->add_option("-s,--set", c.overrides, "Override, section.key=value (repeatable)");
    sub->add_option("-o,--output", c.output, "Output CSV path (stdout if omitted)");
    sub->add_option("--seed", c.seed, "Noise seed");
    sub->add_option("-j,--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 256u));
    sub->add_flag("-v,--verbose", c.verbosity, "More diagnostics on stderr");
  };

  auto* pdc = app.add_subcommand("pdc-sweep", "SV photons vs pump (pdc_sweep table)");
  auto* size = app.add_subcommand("size-sweep", "SV beam size and duration vs pump");
  auto* loss_flux = app.add_subcommand("loss-fixed-flux", "SHG vs flux with losses");
  std::string regime = "low";
  loss_flux->add_option("--regime", regime, "low (fig3a) or high (fig3b)")
      ->check(CLI::IsMember({"low", "high"}));
  auto* loss_gain = app.add_subcommand("loss-fixed-gain", "Fixed-gain loss scan");
  auto* classical = app.add_subcommand("classical-compare", "SV vs classical SHG yields");
  auto* enhancement = app.add_subcommand("enhancement", "SV / classical enhancement ratios");
  auto* calibrate = app.add_subcommand("calibrate", "Solve beta; -o writes calibrated config");
  for (auto* sub : {pdc, size, loss_flux, loss_gain, classical, enhancement, calibrate}) {
    add_common(sub);
  }

  auto* fit = app.add_subcommand("fit", "Least-squares fit of a CSV column pair");
  std::string data, model = "linear", xcol = "flux", ycol = "measured", scol = "measured_std";
  fit->add_option("--data", data, "CSV file")->required()->check(CLI::ExistingFile);
  fit->add_option("--model", model, "linear | linear-quadratic | quadratic");
  fit->add_option("--x", xcol, "x column");
  fit->add_option("--y", ycol, "y column");
  fit->add_option("--sigma", scol, "sigma column (empty: unweighted)");

  auto* oracle = app.add_subcommand("oracle", "Run the moment oracle checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    using svshg::Scenario;
    using svshg::Table;
    if (*pdc) return run_table(c, Scenario::Fig2a, Table::PdcSweep);
    if (*size) return run_table(c, Scenario::Fig2b, Table::SizeSweep);
    if (*loss_flux) {
      return run_table(c, regime == "low" ? Scenario::Fig3a : Scenario::Fig3b, Table::LossSweep);
    }
    if (*loss_gain) return run_table(c, Scenario::Fig3a, Table::LossFixedGain, true);
    if (*classical) return run_table(c, Scenario::Fig4, Table::ClassicalCompare);
    if (*enhancement) return run_table(c, Scenario::Fig4, Table::Enhancement);
    if (*calibrate) return run_calibrate(c);
    if (*fit) return run_fit(data, model, xcol, ycol, scol);
    if (*oracle) return run_oracle_cmd();
  } catch (const svshg::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const svshg::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const svshg::Error& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolver;
  }
  return kOk;
}
