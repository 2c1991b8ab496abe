#pragma once

// Plot-ready CSV tables. Headers are part of the versioned schema: changing
// a column means bumping kCsvSchema and the golden header file.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "svshg/config.hpp"
#include "svshg/errors.hpp"
#include "svshg/experiments.hpp"

namespace svshg {

inline constexpr std::string_view kCsvSchema = "svshg-csv/1";

enum class Table { PdcSweep, SizeSweep, LossSweep, LossFixedGain, ClassicalCompare, Enhancement };

struct Column {
  const char* name;
  double SweepRow::*field;
};

inline std::string_view table_name(Table t) {
  switch (t) {
    case Table::PdcSweep: return "pdc_sweep";
    case Table::SizeSweep: return "size_sweep";
    case Table::LossSweep: return "loss_sweep";
    case Table::LossFixedGain: return "loss_fixed_gain";
    case Table::ClassicalCompare: return "classical_compare";
    case Table::Enhancement: return "enhancement";
  }
  return "?";
}

inline constexpr Table kAllTables[] = {Table::PdcSweep,      Table::SizeSweep,
                                       Table::LossSweep,     Table::LossFixedGain,
                                       Table::ClassicalCompare, Table::Enhancement};

inline std::vector<Column> table_columns(Table t) {
  using R = SweepRow;
  switch (t) {
    case Table::PdcSweep:
      return {{"pump_energy", &R::pump_energy}, {"pump_photons", &R::pump_photons},
              {"peak_gain", &R::peak_gain},     {"n_sv", &R::n_sv},
              {"n_per_mode", &R::n_per_mode},   {"k_m", &R::k_m}};
    case Table::SizeSweep:
      return {{"pump_energy", &R::pump_energy}, {"n_sv", &R::n_sv},
              {"n_per_mode", &R::n_per_mode},   {"k_m", &R::k_m},
              {"beam_fwhm", &R::beam_fwhm},     {"duration_fwhm", &R::duration_fwhm}};
    case Table::LossSweep:
      return {{"transmission", &R::transmission},
              {"flux", &R::flux},
              {"n_sv", &R::n_sv},
              {"n_per_mode", &R::n_per_mode},
              {"peak_gain", &R::peak_gain},
              {"coh_linear", &R::coh_linear},
              {"coh_quadratic", &R::coh_quadratic},
              {"incoherent_total", &R::incoherent_total},
              {"incoherent_in_aperture", &R::incoherent_in_aperture},
              {"shg_detectable", &R::shg_detectable},
              {"counts", &R::counts},
              {"measured", &R::measured},
              {"measured_std", &R::measured_std}};
    case Table::LossFixedGain:
      return {{"transmission", &R::transmission}, {"flux", &R::flux},
              {"n_per_mode", &R::n_per_mode},     {"peak_gain", &R::peak_gain},
              {"shg_detectable", &R::shg_detectable}};
    case Table::ClassicalCompare:
      return {{"pump_energy", &R::pump_energy},   {"n_sv", &R::n_sv},
              {"beam_fwhm", &R::beam_fwhm},       {"duration_fwhm", &R::duration_fwhm},
              {"shg_sv", &R::shg_sv},             {"shg_classical", &R::shg_classical}};
    case Table::Enhancement:
      return {{"pump_energy", &R::pump_energy},
              {"n_sv", &R::n_sv},
              {"n_per_mode", &R::n_per_mode},
              {"shg_sv", &R::shg_sv},
              {"shg_sv_total", &R::shg_sv_total},
              {"shg_classical", &R::shg_classical},
              {"enhancement_coherent", &R::enhancement_coherent},
              {"enhancement_total", &R::enhancement_total}};
  }
  return {};
}

inline Table default_table(Scenario s) {
  switch (s) {
    case Scenario::Fig2a: return Table::PdcSweep;
    case Scenario::Fig2b: return Table::SizeSweep;
    case Scenario::Fig3a:
    case Scenario::Fig3b: return Table::LossSweep;
    case Scenario::Fig4:
    case Scenario::Calibrate: return Table::Enhancement;
  }
  return Table::PdcSweep;
}

inline std::string csv_header(Table t) {
  std::string out;
  for (const Column& c : table_columns(t)) {
    if (!out.empty()) out += ',';
    out += c.name;
  }
  return out;
}

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

inline std::string format_csv(std::span<const SweepRow> rows, Table t) {
  const auto columns = table_columns(t);
  std::string out = csv_header(t) + "\n";
  for (const SweepRow& row : rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ',';
      out += format_value(row.*(columns[i].field));
    }
    out += '\n';
  }
  return out;
}

inline std::string format_meta(Table t, const ExperimentConfig& cfg) {
  char hash[24];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  std::string out;
  out += "schema=" + std::string(kCsvSchema) + "\n";
  out += "table=" + std::string(table_name(t)) + "\n";
  out += "scenario=" + std::string(scenario_name(cfg.sweep.scenario)) + "\n";
  out += "config_hash=" + std::string(hash) + "\n";
  out += "seed=" + std::to_string(cfg.sweep.seed) + "\n";
  return out;
}

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace detail

/// Writes `path` and `path.meta`.
inline void emit_csv(std::span<const SweepRow> rows, Table t, const std::string& path,
                     const ExperimentConfig& cfg) {
  if (rows.empty()) throw ShapeError("emit_csv: empty table");
  detail::write_file(path, format_csv(rows, t));
  detail::write_file(path + ".meta", format_meta(t, cfg));
}

}  // namespace svshg
