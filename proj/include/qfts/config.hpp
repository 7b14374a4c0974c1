#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "qfts/fts.hpp"
#include "qfts/interferogram.hpp"
#include "qfts/linelist.hpp"
#include "qfts/optics.hpp"

namespace qfts {

struct GasSpec {
  std::string name;
  double concentration = 0.0;
  std::filesystem::path linelist_path;   // resolved against the config file
  std::optional<Interval> fit_band;      // cm^-1
};

/// Whole-instrument configuration read from flat `key = value` text.
///
/// Keys carry their units (`_cm1`, `_mw`, `_um`, ...); unknown keys are
/// rejected. Defaults reproduce the published instrument: finesse 290,
/// E ~ 55, 100 mW pump, 2 cm cell, 50 averaged 7.6 s scans.
struct RunConfig {
  CavityConfig cavity;
  SpdcConfig spdc;
  double detection_efficiency = 0.03;
  double grid_min = 1800.0;   // cm^-1, simulation grid
  double grid_max = 4000.0;
  double grid_step = 0.01;
  ScanConfig scan;
  DispersionConfig dispersion;
  NoiseConfig noise;
  double cell_length = 2.0;   // cm
  GasConditions cell;
  AbsorptionOptions absorption;
  std::vector<GasSpec> gases;
  std::optional<Interval> fit_band;  // fallback for species without their own
  ApodizationWindow apodization;
  int zero_fill = 4;
  double threshold = 0.1;
  Interval snr_window{3150.0, 3250.0};
  std::filesystem::path base_dir;

  [[nodiscard]] Axis grid() const { return Axis::from_range(grid_min, grid_max, grid_step); }
  [[nodiscard]] const GasSpec& gas(const std::string& name) const;
  void validate() const;
};

/// Parses config text; relative paths resolve against `base_dir`. Errors
/// (Errc::ConfigError) name the offending key and line.
RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

/// `key = value` lines for every setting, in the parser's syntax.
std::string format_config(const RunConfig& cfg);

}  // namespace qfts
