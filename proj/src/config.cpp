#include "qfts/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "qfts/textio.hpp"

namespace qfts {

namespace {

constexpr double kDefaultScanDuration = 7.6;  // s per scan

[[noreturn]] void config_error(const std::string& key, std::size_t line, const std::string& why) {
  throw Error(Errc::ConfigError, "config line " + std::to_string(line) + ", key '" + key + "': " + why);
}

double to_number(const std::string& key, const std::string& value, std::size_t line) {
  double v = 0.0;
  if (!textio::parse_double(value, v) || !std::isfinite(v)) config_error(key, line, "'" + value + "' is not a number");
  return v;
}

bool to_bool(const std::string& key, const std::string& value, std::size_t line) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  config_error(key, line, "'" + value + "' is not a boolean");
}

Interval to_interval(const std::string& key, std::string value, std::size_t line) {
  for (char& ch : value) {
    if (ch == ',' || ch == ':') ch = ' ';
  }
  std::istringstream in(value);
  std::string a;
  std::string b;
  std::string extra;
  if (!(in >> a >> b) || (in >> extra)) config_error(key, line, "expected two numbers 'lo hi'");
  Interval out{to_number(key, a, line), to_number(key, b, line)};
  if (!(out.hi > out.lo)) config_error(key, line, "interval upper bound must exceed lower bound");
  return out;
}

std::string format_interval(const Interval& iv) {
  return textio::format_double(iv.lo) + " " + textio::format_double(iv.hi);
}

GasSpec& gas_entry(RunConfig& cfg, const std::string& name) {
  for (auto& g : cfg.gases) {
    if (g.name == name) return g;
  }
  cfg.gases.push_back(GasSpec{name, 0.0, {}, std::nullopt});
  return cfg.gases.back();
}

}  // namespace

const GasSpec& RunConfig::gas(const std::string& name) const {
  for (const auto& g : gases) {
    if (g.name == name) return g;
  }
  throw Error(Errc::ConfigError, "no gas '" + name + "' configured");
}

void RunConfig::validate() const {
  auto check = [](bool ok, const std::string& what) {
    if (!ok) throw Error(Errc::ConfigError, what);
  };
  try {
    cavity.validate();
    spdc.validate();
    scan.validate();
    cell.validate();
    apodization.validate();
  } catch (const Error& e) {
    throw Error(Errc::ConfigError, e.what());
  }
  check(detection_efficiency > 0.0 && detection_efficiency <= 1.0, "detector.efficiency must lie in (0, 1]");
  check(grid_step > 0.0 && grid_max > grid_min && grid_min > 0.0, "grid.* must describe a positive, increasing range");
  check(cell_length > 0.0, "cell.length_cm must be positive");
  check(absorption.cutoff > 0.0, "absorption.cutoff_cm1 must be positive");
  check(zero_fill >= 1, "spectrum.zero_fill must be >= 1");
  check(threshold > 0.0 && threshold < 1.0, "transmission.threshold must lie in (0, 1)");
  double total = 0.0;
  for (const auto& g : gases) {
    check(g.concentration >= 0.0, "gas." + g.name + ".concentration must be non-negative");
    check(!g.linelist_path.empty(), "gas." + g.name + ".linelist_path is missing");
    total += g.concentration;
  }
  check(total <= 1.0, "gas concentrations sum above 1");
}

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  RunConfig cfg;
  cfg.base_dir = base_dir;
  std::optional<double> dwell;
  std::optional<double> duration;

  using Setter = std::function<void(const std::string& key, const std::string& value, std::size_t line)>;
  auto number = [](double& target) -> Setter {
    return [&target](const std::string& k, const std::string& v, std::size_t l) { target = to_number(k, v, l); };
  };
  auto flag = [](bool& target) -> Setter {
    return [&target](const std::string& k, const std::string& v, std::size_t l) { target = to_bool(k, v, l); };
  };
  auto scaled = [](double& target, double factor) -> Setter {
    return [&target, factor](const std::string& k, const std::string& v, std::size_t l) {
      target = to_number(k, v, l) * factor;
    };
  };

  const std::map<std::string, Setter> fixed = {
      {"cavity.finesse", number(cfg.cavity.finesse)},
      {"cavity.coupling_efficiency", number(cfg.cavity.coupling_efficiency)},
      {"cavity.pump_power_mw", scaled(cfg.cavity.pump_power_in, 1.0e-3)},
      {"spdc.pump_cm1", number(cfg.spdc.pump_wavenumber)},
      {"spdc.center_cm1", number(cfg.spdc.idler_center_wavenumber)},
      {"spdc.fwhm_cm1", number(cfg.spdc.phase_matching_bandwidth)},
      {"spdc.shape",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) {
         if (v == "gaussian") {
           cfg.spdc.spectral_shape = SpectralShape::gaussian;
         } else if (v == "sinc_squared") {
           cfg.spdc.spectral_shape = SpectralShape::sinc_squared;
         } else {
           config_error(k, l, "expected 'gaussian' or 'sinc_squared'");
         }
       }},
      {"spdc.max_visibility", number(cfg.spdc.max_visibility)},
      {"spdc.base_pair_rate", number(cfg.spdc.base_pair_rate)},
      {"detector.efficiency", number(cfg.detection_efficiency)},
      {"grid.min_cm1", number(cfg.grid_min)},
      {"grid.max_cm1", number(cfg.grid_max)},
      {"grid.step_cm1", number(cfg.grid_step)},
      {"scan.opd_max_cm", number(cfg.scan.opd_max)},
      {"scan.opd_step_um", scaled(cfg.scan.opd_step, 1.0e-4)},
      {"scan.dwell_s", [&dwell](const std::string& k, const std::string& v, std::size_t l) { dwell = to_number(k, v, l); }},
      {"scan.duration_s",
       [&duration](const std::string& k, const std::string& v, std::size_t l) { duration = to_number(k, v, l); }},
      {"scan.averages",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) {
         const double n = to_number(k, v, l);
         if (n < 1.0 || n != std::floor(n)) config_error(k, l, "expected a positive integer");
         cfg.scan.scans_to_average = static_cast<int>(n);
       }},
      {"dispersion.beta2", number(cfg.dispersion.beta2)},
      {"dispersion.center_cm1", number(cfg.dispersion.center)},
      {"noise.seed",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) {
         std::uint64_t seed = 0;
         const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), seed);
         if (ec != std::errc{} || ptr != v.data() + v.size()) config_error(k, l, "expected an unsigned 64-bit integer");
         cfg.noise.rng_seed = seed;
       }},
      {"noise.enabled", flag(cfg.noise.enabled)},
      {"noise.background_cps", number(cfg.noise.detector_background)},
      {"cell.length_cm", number(cfg.cell_length)},
      {"cell.temperature_k", number(cfg.cell.temperature)},
      {"cell.pressure_atm", number(cfg.cell.pressure)},
      {"absorption.cutoff_cm1", number(cfg.absorption.cutoff)},
      {"absorption.pressure_shift", flag(cfg.absorption.pressure_shift)},
      {"absorption.self_broadening", flag(cfg.absorption.self_broadening)},
      {"apodization.kind",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) {
         if (v == "gaussian") {
           cfg.apodization.kind = WindowKind::gaussian;
         } else if (v == "boxcar") {
           cfg.apodization.kind = WindowKind::boxcar;
         } else {
           config_error(k, l, "expected 'gaussian' or 'boxcar'");
         }
       }},
      {"apodization.fwhm_mm_opd", scaled(cfg.apodization.fwhm, 0.1)},
      {"spectrum.zero_fill",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) {
         const double n = to_number(k, v, l);
         if (n < 1.0 || n != std::floor(n)) config_error(k, l, "expected a positive integer");
         cfg.zero_fill = static_cast<int>(n);
       }},
      {"transmission.threshold", number(cfg.threshold)},
      {"fit.band_cm1",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) { cfg.fit_band = to_interval(k, v, l); }},
      {"snr.window_cm1",
       [&cfg](const std::string& k, const std::string& v, std::size_t l) { cfg.snr_window = to_interval(k, v, l); }},
  };

  std::string raw;
  std::size_t line_number = 0;
  while (std::getline(in, raw)) {
    ++line_number;
    auto text = textio::trim(raw);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = textio::trim(text.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) config_error(std::string(text), line_number, "expected 'key = value'");
    const std::string key(textio::trim(text.substr(0, eq)));
    const std::string value(textio::trim(text.substr(eq + 1)));
    if (value.empty()) config_error(key, line_number, "empty value");

    if (const auto it = fixed.find(key); it != fixed.end()) {
      it->second(key, value, line_number);
      continue;
    }
    // gas.<species>.<field> and fit.<species>.band_cm1
    const auto first_dot = key.find('.');
    const auto last_dot = key.rfind('.');
    if (first_dot != std::string::npos && last_dot > first_dot + 1) {
      const std::string scope = key.substr(0, first_dot);
      const std::string species = key.substr(first_dot + 1, last_dot - first_dot - 1);
      const std::string field = key.substr(last_dot + 1);
      if (scope == "gas" && field == "concentration") {
        gas_entry(cfg, species).concentration = to_number(key, value, line_number);
        continue;
      }
      if (scope == "gas" && field == "linelist_path") {
        const std::filesystem::path p(value);
        gas_entry(cfg, species).linelist_path = p.is_absolute() ? p : base_dir / p;
        continue;
      }
      if (scope == "fit" && field == "band_cm1") {
        gas_entry(cfg, species).fit_band = to_interval(key, value, line_number);
        continue;
      }
    }
    config_error(key, line_number, "unknown key");
  }

  if (dwell && duration) config_error("scan.dwell_s", line_number, "set either scan.dwell_s or scan.duration_s");
  const auto samples = 2 * cfg.scan.half_samples() + 1;
  if (dwell) {
    cfg.scan.dwell_time = *dwell;
  } else {
    cfg.scan.dwell_time = duration.value_or(kDefaultScanDuration) / double(samples);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open config '" + path.string() + "'");
  return parse_config(in, path.parent_path());
}

std::string format_config(const RunConfig& cfg) {
  using textio::format_double;
  std::ostringstream out;
  out << "cavity.finesse = " << format_double(cfg.cavity.finesse) << '\n'
      << "cavity.coupling_efficiency = " << format_double(cfg.cavity.coupling_efficiency) << '\n'
      << "cavity.pump_power_mw = " << format_double(cfg.cavity.pump_power_in * 1.0e3) << '\n'
      << "spdc.pump_cm1 = " << format_double(cfg.spdc.pump_wavenumber) << '\n'
      << "spdc.center_cm1 = " << format_double(cfg.spdc.idler_center_wavenumber) << '\n'
      << "spdc.fwhm_cm1 = " << format_double(cfg.spdc.phase_matching_bandwidth) << '\n'
      << "spdc.shape = " << (cfg.spdc.spectral_shape == SpectralShape::gaussian ? "gaussian" : "sinc_squared") << '\n'
      << "spdc.max_visibility = " << format_double(cfg.spdc.max_visibility) << '\n'
      << "spdc.base_pair_rate = " << format_double(cfg.spdc.base_pair_rate) << '\n'
      << "detector.efficiency = " << format_double(cfg.detection_efficiency) << '\n'
      << "grid.min_cm1 = " << format_double(cfg.grid_min) << '\n'
      << "grid.max_cm1 = " << format_double(cfg.grid_max) << '\n'
      << "grid.step_cm1 = " << format_double(cfg.grid_step) << '\n'
      << "scan.opd_max_cm = " << format_double(cfg.scan.opd_max) << '\n'
      << "scan.opd_step_um = " << format_double(cfg.scan.opd_step * 1.0e4) << '\n'
      << "scan.dwell_s = " << format_double(cfg.scan.dwell_time) << '\n'
      << "scan.averages = " << cfg.scan.scans_to_average << '\n'
      << "dispersion.beta2 = " << format_double(cfg.dispersion.beta2) << '\n'
      << "dispersion.center_cm1 = " << format_double(cfg.dispersion.center) << '\n'
      << "noise.seed = " << cfg.noise.rng_seed << '\n'
      << "noise.enabled = " << (cfg.noise.enabled ? "true" : "false") << '\n'
      << "noise.background_cps = " << format_double(cfg.noise.detector_background) << '\n'
      << "cell.length_cm = " << format_double(cfg.cell_length) << '\n'
      << "cell.temperature_k = " << format_double(cfg.cell.temperature) << '\n'
      << "cell.pressure_atm = " << format_double(cfg.cell.pressure) << '\n'
      << "absorption.cutoff_cm1 = " << format_double(cfg.absorption.cutoff) << '\n'
      << "absorption.pressure_shift = " << (cfg.absorption.pressure_shift ? "true" : "false") << '\n'
      << "absorption.self_broadening = " << (cfg.absorption.self_broadening ? "true" : "false") << '\n';
  for (const auto& g : cfg.gases) {
    out << "gas." << g.name << ".concentration = " << format_double(g.concentration) << '\n'
        << "gas." << g.name << ".linelist_path = " << g.linelist_path.string() << '\n';
    if (g.fit_band) out << "fit." << g.name << ".band_cm1 = " << format_interval(*g.fit_band) << '\n';
  }
  if (cfg.fit_band) out << "fit.band_cm1 = " << format_interval(*cfg.fit_band) << '\n';
  out << "apodization.kind = " << (cfg.apodization.kind == WindowKind::gaussian ? "gaussian" : "boxcar") << '\n'
      << "apodization.fwhm_mm_opd = " << format_double(cfg.apodization.fwhm * 10.0) << '\n'
      << "spectrum.zero_fill = " << cfg.zero_fill << '\n'
      << "transmission.threshold = " << format_double(cfg.threshold) << '\n'
      << "snr.window_cm1 = " << format_interval(cfg.snr_window) << '\n';
  return out.str();
}

}  // namespace qfts
