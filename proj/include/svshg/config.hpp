#pragma once

// Sectioned key = value config files.
//
//   [crystal]     length, d_eff, n_pump, n_sv, lambda_pump, lambda_sv
//   [pump]        pulse_energy, beam_fwhm, duration_fwhm, rep_rate
//   [window]      temporal_bandwidth, angular_bandwidth
//   [coupling]    beta, nonlinearity_scale, path_efficiency,
//                 target_crossover, target_eta_n_per_mode
//   [detection]   pmt_qe, aperture_diameter, farfield_diameter, background_rate,
//                 rep_rate, acquisition_time
//   [sweep]       scenario, axis, start, stop, points, spacing, losses, seed,
//                 noise, output, grid_points
//
// Every section must appear (it may be empty); omitted keys keep their
// defaults. Values are SI unless a unit suffix is given ("185 fs", "2mm",
// "1.65 pm/V", "300 mm^-1"). '#' and ';' start comments.

#include <cctype>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svshg/errors.hpp"
#include "svshg/experiments.hpp"

namespace svshg {

namespace config_detail {

enum class Dim { None, Length, Time, Energy, Frequency, InvLength, Nonlinearity, SweepValue };

inline const char* dim_name(Dim d) {
  switch (d) {
    case Dim::None: return "dimensionless";
    case Dim::Length: return "length";
    case Dim::Time: return "time";
    case Dim::Energy: return "energy";
    case Dim::Frequency: return "frequency";
    case Dim::InvLength: return "inverse length";
    case Dim::Nonlinearity: return "nonlinearity (m/V)";
    case Dim::SweepValue: return "sweep value";
  }
  return "?";
}

struct Unit {
  const char* suffix;
  Dim dim;
  double factor;
};

inline constexpr Unit kUnits[] = {
    {"m", Dim::Length, 1.0},          {"mm", Dim::Length, 1e-3},
    {"um", Dim::Length, 1e-6},        {"\xC2\xB5m", Dim::Length, 1e-6},
    {"nm", Dim::Length, 1e-9},        {"s", Dim::Time, 1.0},
    {"ms", Dim::Time, 1e-3},          {"us", Dim::Time, 1e-6},
    {"\xC2\xB5s", Dim::Time, 1e-6},   {"ns", Dim::Time, 1e-9},
    {"ps", Dim::Time, 1e-12},         {"fs", Dim::Time, 1e-15},
    {"min", Dim::Time, 60.0},         {"J", Dim::Energy, 1.0},
    {"mJ", Dim::Energy, 1e-3},        {"uJ", Dim::Energy, 1e-6},
    {"\xC2\xB5J", Dim::Energy, 1e-6}, {"nJ", Dim::Energy, 1e-9},
    {"Hz", Dim::Frequency, 1.0},      {"kHz", Dim::Frequency, 1e3},
    {"MHz", Dim::Frequency, 1e6},     {"GHz", Dim::Frequency, 1e9},
    {"THz", Dim::Frequency, 1e12},    {"1/m", Dim::InvLength, 1.0},
    {"m^-1", Dim::InvLength, 1.0},    {"1/mm", Dim::InvLength, 1e3},
    {"mm^-1", Dim::InvLength, 1e3},   {"1/um", Dim::InvLength, 1e6},
    {"um^-1", Dim::InvLength, 1e6},   {"m/V", Dim::Nonlinearity, 1.0},
    {"pm/V", Dim::Nonlinearity, 1e-12},
};

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

[[noreturn]] inline void fail(const Entry& e, const std::string& message) {
  throw ConfigError(message, e.line, e.section + "." + e.key);
}

inline double parse_number(const Entry& e, Dim dim) {
  const std::string text = e.value;
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) fail(e, "expected a number, got '" + text + "'");
  const std::string suffix = trim(std::string_view(end));
  if (suffix.empty()) return v;
  for (const Unit& u : kUnits) {
    if (suffix == u.suffix) {
      if (u.dim != dim) {
        fail(e, "unit '" + suffix + "' is not a " + dim_name(dim) + " unit");
      }
      return v * u.factor;
    }
  }
  fail(e, "unknown unit '" + suffix + "'");
}

inline bool parse_bool(const Entry& e) {
  const std::string& v = e.value;
  if (v == "true" || v == "on" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "off" || v == "no" || v == "0") return false;
  fail(e, "expected true/false, got '" + v + "'");
}

inline std::uint64_t parse_uint(const Entry& e) {
  if (e.value.empty() || !std::isdigit(static_cast<unsigned char>(e.value[0]))) {
    fail(e, "expected a non-negative integer, got '" + e.value + "'");
  }
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(e.value.c_str(), &end, 10);
  if (errno == ERANGE || !trim(std::string_view(end)).empty()) {
    fail(e, "expected a non-negative integer, got '" + e.value + "'");
  }
  return v;
}

/// Field bindings: each key knows its dimension, how to store a number, how
/// to read it back for serialization, and its admissible range.
struct NumericKey {
  const char* section;
  const char* key;
  Dim dim;
  std::function<double&(ExperimentConfig&)> ref;
  std::function<bool(double)> valid;
  const char* range;
};

inline bool positive(double v) { return v > 0.0 && std::isfinite(v); }
inline bool non_negative(double v) { return v >= 0.0 && std::isfinite(v); }
inline bool unit_interval(double v) { return v >= 0.0 && v <= 1.0; }
inline bool open_unit_upper(double v) { return v > 0.0 && v <= 1.0; }

inline const std::vector<NumericKey>& numeric_keys() {
  using C = ExperimentConfig;
  static const std::vector<NumericKey> keys = {
      {"crystal", "length", Dim::Length, [](C& c) -> double& { return c.crystal.length; },
       positive, "> 0"},
      {"crystal", "d_eff", Dim::Nonlinearity, [](C& c) -> double& { return c.crystal.d_eff; },
       positive, "> 0"},
      {"crystal", "n_pump", Dim::None, [](C& c) -> double& { return c.crystal.n_pump; },
       [](double v) { return v >= 1.0 && std::isfinite(v); }, ">= 1"},
      {"crystal", "n_sv", Dim::None, [](C& c) -> double& { return c.crystal.n_sv; },
       [](double v) { return v >= 1.0 && std::isfinite(v); }, ">= 1"},
      {"crystal", "lambda_pump", Dim::Length,
       [](C& c) -> double& { return c.crystal.lambda_pump; }, positive, "> 0"},
      {"crystal", "lambda_sv", Dim::Length, [](C& c) -> double& { return c.crystal.lambda_sv; },
       positive, "> 0"},
      {"pump", "pulse_energy", Dim::Energy, [](C& c) -> double& { return c.pump.pulse_energy; },
       non_negative, ">= 0"},
      {"pump", "beam_fwhm", Dim::Length, [](C& c) -> double& { return c.pump.beam_fwhm; },
       positive, "> 0"},
      {"pump", "duration_fwhm", Dim::Time, [](C& c) -> double& { return c.pump.duration_fwhm; },
       positive, "> 0"},
      {"pump", "rep_rate", Dim::Frequency, [](C& c) -> double& { return c.pump.rep_rate; },
       positive, "> 0"},
      {"window", "temporal_bandwidth", Dim::Frequency,
       [](C& c) -> double& { return c.window.temporal_bandwidth; }, positive, "> 0"},
      {"window", "angular_bandwidth", Dim::InvLength,
       [](C& c) -> double& { return c.window.angular_bandwidth; }, positive, "> 0"},
      {"coupling", "beta", Dim::None, [](C& c) -> double& { return c.coupling.beta; },
       positive, "> 0"},
      {"coupling", "nonlinearity_scale", Dim::None,
       [](C& c) -> double& { return c.coupling.nonlinearity_scale; }, positive, "> 0"},
      {"coupling", "path_efficiency", Dim::None,
       [](C& c) -> double& { return c.coupling.path_efficiency; }, open_unit_upper, "in (0, 1]"},
      {"coupling", "target_crossover", Dim::None,
       [](C& c) -> double& { return c.targets.crossover_n; },
       [](double v) { return v > 1.0 && std::isfinite(v); }, "> 1"},
      {"coupling", "target_eta_n_per_mode", Dim::None,
       [](C& c) -> double& { return c.targets.eta_n_per_mode; }, positive, "> 0"},
      {"detection", "pmt_qe", Dim::None, [](C& c) -> double& { return c.detection.pmt_qe; },
       unit_interval, "in [0, 1]"},
      {"detection", "aperture_diameter", Dim::Length,
       [](C& c) -> double& { return c.detection.aperture_diameter; }, positive, "> 0"},
      {"detection", "farfield_diameter", Dim::Length,
       [](C& c) -> double& { return c.detection.incoherent_farfield_diameter; }, positive,
       "> 0"},
      {"detection", "background_rate", Dim::None,
       [](C& c) -> double& { return c.detection.background_rate; }, non_negative, ">= 0"},
      {"detection", "rep_rate", Dim::Frequency,
       [](C& c) -> double& { return c.detection.rep_rate; }, positive, "> 0"},
      {"detection", "acquisition_time", Dim::Time,
       [](C& c) -> double& { return c.detection.acquisition_time; }, positive, "> 0"},
      {"sweep", "start", Dim::SweepValue, [](C& c) -> double& { return c.sweep.start; },
       positive, "> 0"},
      {"sweep", "stop", Dim::SweepValue, [](C& c) -> double& { return c.sweep.stop; }, positive,
       "> 0"},
  };
  return keys;
}

inline const std::vector<std::string>& other_sweep_keys() {
  static const std::vector<std::string> keys = {"scenario", "axis",   "points", "spacing",
                                                "losses",   "seed",   "noise",  "output",
                                                "grid_points"};
  return keys;
}

inline const std::vector<std::string>& sections() {
  static const std::vector<std::string> s = {"crystal",  "pump",      "window",
                                             "coupling", "detection", "sweep"};
  return s;
}

inline const NumericKey* find_numeric(const std::string& section, const std::string& key) {
  for (const NumericKey& k : numeric_keys()) {
    if (section == k.section && key == k.key) return &k;
  }
  return nullptr;
}

inline bool known_key(const std::string& section, const std::string& key) {
  if (find_numeric(section, key)) return true;
  if (section != "sweep") return false;
  for (const auto& k : other_sweep_keys()) {
    if (k == key) return true;
  }
  return false;
}

inline std::vector<double> parse_losses(const Entry& e) {
  std::vector<double> out;
  if (trim(e.value).empty()) return out;
  std::size_t pos = 0;
  while (pos <= e.value.size()) {
    const std::size_t comma = e.value.find(',', pos);
    const std::string item =
        trim(std::string_view(e.value).substr(pos, comma == std::string::npos
                                                       ? std::string::npos
                                                       : comma - pos));
    Entry sub = e;
    sub.value = item;
    const double v = parse_number(sub, Dim::None);
    if (!(v > 0.0 && v < 1.0)) fail(e, "loss " + item + " outside (0, 1)");
    out.push_back(v);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline void apply_entry(ExperimentConfig& cfg, const Entry& e) {
  if (const NumericKey* k = find_numeric(e.section, e.key)) {
    Dim dim = k->dim;
    if (dim == Dim::SweepValue) {
      dim = cfg.sweep.axis == SweepAxis::PumpEnergy ? Dim::Energy : Dim::None;
    }
    const double v = parse_number(e, dim);
    if (!k->valid(v)) fail(e, "value " + e.value + " out of range (must be " + k->range + ")");
    k->ref(cfg) = v;
    return;
  }
  SweepSpec& s = cfg.sweep;
  if (e.key == "scenario" || e.key == "axis") return;  // resolved first
  if (e.key == "points") {
    const std::uint64_t n = parse_uint(e);
    if (n < 3 || n > 100000) fail(e, "points must lie in [3, 100000]");
    s.points = static_cast<int>(n);
  } else if (e.key == "spacing") {
    if (e.value == "log") {
      s.log_spacing = true;
    } else if (e.value == "linear") {
      s.log_spacing = false;
    } else {
      fail(e, "spacing must be 'log' or 'linear'");
    }
  } else if (e.key == "losses") {
    s.losses = parse_losses(e);
  } else if (e.key == "seed") {
    s.seed = parse_uint(e);
  } else if (e.key == "noise") {
    s.noise = parse_bool(e);
  } else if (e.key == "output") {
    s.output = e.value;
  } else if (e.key == "grid_points") {
    const std::uint64_t n = parse_uint(e);
    if (n < 9 || n > 1025 || n % 2 == 0) fail(e, "grid_points must be odd in [9, 1025]");
    cfg.grid.points = static_cast<int>(n);
  }
}

/// "section.key=value" from the command line; line number 0.
inline Entry parse_override(const std::string& text) {
  const std::size_t eq = text.find('=');
  const std::size_t dot = text.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError("override must look like section.key=value", 0, text);
  }
  Entry e;
  e.section = trim(std::string_view(text).substr(0, dot));
  e.key = trim(std::string_view(text).substr(dot + 1, eq - dot - 1));
  e.value = trim(std::string_view(text).substr(eq + 1));
  e.line = 0;
  return e;
}

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace config_detail

/// Parses config text. `forced` is the scenario implied by the CLI
/// subcommand; a different scenario in the file is an error. `overrides` are
/// "section.key=value" strings applied after the file.
inline ExperimentConfig parse_config(std::string_view text,
                                     std::optional<Scenario> forced = std::nullopt,
                                     const std::vector<std::string>& overrides = {}) {
  using namespace config_detail;
  std::vector<Entry> entries;
  std::map<std::string, int> seen_sections;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view raw =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::size_t hash = raw.find_first_of("#;");
    std::string line = trim(raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("malformed section header", line_no, line);
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      bool known = false;
      for (const auto& s : sections()) known = known || s == section;
      if (!known) throw ConfigError("unknown section [" + section + "]", line_no, section);
      if (seen_sections.count(section)) {
        throw ConfigError("duplicate section [" + section + "]", line_no, section);
      }
      seen_sections[section] = line_no;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no, line);
    Entry e;
    e.section = section;
    e.key = trim(std::string_view(line).substr(0, eq));
    e.value = trim(std::string_view(line).substr(eq + 1));
    e.line = line_no;
    if (section.empty()) throw ConfigError("key outside any section", line_no, e.key);
    entries.push_back(std::move(e));
  }
  for (const auto& s : sections()) {
    if (!seen_sections.count(s)) throw ConfigError("missing section [" + s + "]", 0, s);
  }
  for (const std::string& o : overrides) entries.push_back(parse_override(o));

  std::map<std::string, int> seen_keys;
  for (const Entry& e : entries) {
    if (!known_key(e.section, e.key)) fail(e, "unknown key");
    const std::string full = e.section + "." + e.key;
    if (e.line > 0 && seen_keys.count(full)) fail(e, "duplicate key");
    seen_keys[full] = e.line;
  }

  // Scenario and axis first: they select defaults and the units of start/stop.
  std::optional<Scenario> scenario = forced;
  const Entry* scenario_entry = nullptr;
  const Entry* axis_entry = nullptr;
  for (const Entry& e : entries) {
    if (e.section != "sweep") continue;
    if (e.key == "scenario") scenario_entry = &e;
    if (e.key == "axis") axis_entry = &e;
  }
  if (scenario_entry) {
    const auto parsed = parse_scenario(scenario_entry->value);
    if (!parsed) fail(*scenario_entry, "unknown scenario '" + scenario_entry->value + "'");
    if (forced && *forced != *parsed) {
      fail(*scenario_entry, "scenario '" + scenario_entry->value + "' does not match command '" +
                                std::string(scenario_name(*forced)) + "'");
    }
    scenario = parsed;
  }
  if (!scenario) throw ConfigError("no scenario given", 0, "sweep.scenario");

  ExperimentConfig cfg = default_config(*scenario);
  if (axis_entry) {
    if (axis_entry->value == "pump_energy") {
      cfg.sweep.axis = SweepAxis::PumpEnergy;
    } else if (axis_entry->value == "flux") {
      cfg.sweep.axis = SweepAxis::Flux;
    } else {
      fail(*axis_entry, "axis must be 'pump_energy' or 'flux'");
    }
  }
  for (const Entry& e : entries) apply_entry(cfg, e);
  cfg.coupling.crystal = cfg.crystal;

  try {
    cfg.window = SpectralWindow::from_bandwidths(cfg.window.temporal_bandwidth,
                                                 cfg.window.angular_bandwidth);
    cfg.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what(), 0, "");
  }
  return cfg;
}

/// SI, %.17g: parse(serialize(c)) == c.
inline std::string serialize_config(const ExperimentConfig& config) {
  using namespace config_detail;
  ExperimentConfig cfg = config;
  std::string out;
  for (const std::string& section : sections()) {
    out += "[" + section + "]\n";
    if (section == "sweep") {
      out += "scenario = " + std::string(scenario_name(cfg.sweep.scenario)) + "\n";
      out += "axis = " + std::string(axis_name(cfg.sweep.axis)) + "\n";
    }
    for (const NumericKey& k : numeric_keys()) {
      if (section == k.section) {
        out += std::string(k.key) + " = " + format_double(k.ref(cfg)) + "\n";
      }
    }
    if (section == "sweep") {
      const SweepSpec& s = cfg.sweep;
      out += "points = " + std::to_string(s.points) + "\n";
      out += std::string("spacing = ") + (s.log_spacing ? "log" : "linear") + "\n";
      out += "losses = ";
      for (std::size_t i = 0; i < s.losses.size(); ++i) {
        out += (i ? ", " : "") + format_double(s.losses[i]);
      }
      out += "\n";
      out += "seed = " + std::to_string(s.seed) + "\n";
      out += std::string("noise = ") + (s.noise ? "true" : "false") + "\n";
      out += "output = " + s.output + "\n";
      out += "grid_points = " + std::to_string(cfg.grid.points) + "\n";
    }
    out += "\n";
  }
  return out;
}

/// FNV-1a over the serialized config.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_config(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace svshg
