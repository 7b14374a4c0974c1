#include <doctest.h>

#include <random>
#include <sstream>

#include "qfts/config.hpp"
#include "support/oracles.hpp"

using namespace qfts;

namespace {

RunConfig parse(const std::string& text, const std::filesystem::path& base = "/base") {
  std::istringstream in(text);
  return parse_config(in, base);
}

std::string error_text(const std::string& text) {
  try {
    (void)parse(text);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ConfigError);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty text gives the instrument defaults") {
    const RunConfig cfg = parse("# nothing here\n\n");
    CHECK(cfg.cavity.finesse == 290.0);
    CHECK(cfg.cavity.pump_power_in == doctest::Approx(0.1));
    CHECK(cfg.spdc.phase_matching_bandwidth == 700.0);
    CHECK(cfg.cell_length == 2.0);
    CHECK(cfg.cell.temperature == 296.0);
    CHECK(cfg.cell.pressure == 1.0);
    CHECK(cfg.scan.scans_to_average == 50);
    CHECK(cfg.scan.dwell_time * double(2 * cfg.scan.half_samples() + 1) == doctest::Approx(7.6).epsilon(1e-12));
    CHECK(cfg.gases.empty());
  }

  TEST_CASE("values, units and comments") {
    const RunConfig cfg = parse(
        "cavity.pump_power_mw = 250   # trailing comment\n"
        "scan.opd_step_um = 2\n"
        "apodization.fwhm_mm_opd = 5\n"
        "apodization.kind = boxcar\n"
        "noise.seed = 18446744073709551615\n"
        "snr.window_cm1 = 3100, 3200\n"
        "gas.CH4.concentration = 0.003\n"
        "gas.CH4.linelist_path = lines/ch4.par\n"
        "fit.CH4.band_cm1 = 2850:3150\n");
    CHECK(cfg.cavity.pump_power_in == doctest::Approx(0.25));
    CHECK(cfg.scan.opd_step == doctest::Approx(2e-4));
    CHECK(cfg.apodization.fwhm == doctest::Approx(0.5));
    CHECK(cfg.apodization.kind == WindowKind::boxcar);
    CHECK(cfg.noise.rng_seed == 18446744073709551615ULL);
    CHECK(cfg.snr_window.lo == 3100.0);
    CHECK(cfg.snr_window.hi == 3200.0);
    REQUIRE(cfg.gases.size() == 1);
    CHECK(cfg.gas("CH4").concentration == 0.003);
    CHECK(cfg.gas("CH4").linelist_path == std::filesystem::path("/base/lines/ch4.par"));
    REQUIRE(cfg.gas("CH4").fit_band.has_value());
    CHECK(cfg.gas("CH4").fit_band->lo == 2850.0);
  }

  TEST_CASE("absolute line list paths stay put") {
    const RunConfig cfg = parse("gas.N2O.concentration = 0.009\ngas.N2O.linelist_path = /data/n2o.par\n");
    CHECK(cfg.gas("N2O").linelist_path == std::filesystem::path("/data/n2o.par"));
  }

  TEST_CASE("errors name the key and line") {
    const std::string unknown = error_text("cavity.finesse = 290\ncavity.finess = 10\n");
    CHECK(unknown.find("line 2") != std::string::npos);
    CHECK(unknown.find("cavity.finess") != std::string::npos);
    CHECK(error_text("cavity.finesse = abc\n").find("cavity.finesse") != std::string::npos);
    CHECK(error_text("scan.averages = 2.5\n").find("scan.averages") != std::string::npos);
    CHECK(error_text("noise.seed = -1\n").find("noise.seed") != std::string::npos);
    CHECK(error_text("just words\n").find("line 1") != std::string::npos);
    CHECK(error_text("spdc.shape = square\n").find("spdc.shape") != std::string::npos);
    CHECK_FALSE(error_text("scan.dwell_s = 1e-4\nscan.duration_s = 7.6\n").empty());
  }

  TEST_CASE("dwell and duration are two spellings of the scan speed") {
    const RunConfig a = parse("scan.duration_s = 3.2\n");
    const RunConfig b = parse("scan.dwell_s = " + std::to_string(3.2 / 32001.0) + "\n");
    CHECK(a.scan.dwell_time == doctest::Approx(b.scan.dwell_time).epsilon(1e-6));
  }

  TEST_CASE("unknown species lookup") { CHECK_THROWS_AS((void)parse("").gas("CO2"), Error); }

  TEST_CASE("property: format then parse reproduces the configuration") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
      RunConfig cfg;
      cfg.cavity.finesse = 10.0 + 1000.0 * unit(rng);
      cfg.cavity.coupling_efficiency = 0.05 + 0.9 * unit(rng);
      cfg.cavity.pump_power_in = 0.001 + unit(rng);
      cfg.spdc.phase_matching_bandwidth = 200.0 + 800.0 * unit(rng);
      cfg.spdc.spectral_shape = unit(rng) < 0.5 ? SpectralShape::gaussian : SpectralShape::sinc_squared;
      cfg.dispersion.beta2 = 1e-5 * unit(rng);
      cfg.noise.rng_seed = rng();
      cfg.noise.enabled = unit(rng) < 0.5;
      cfg.cell.temperature = 200.0 + 100.0 * unit(rng);
      cfg.apodization.fwhm = 0.2 + unit(rng);
      cfg.zero_fill = 1 + int(4.0 * unit(rng));
      cfg.gases.push_back({"CH4", 0.01 * unit(rng), "/x/ch4.par", Interval{2850.0, 3150.0}});
      if (unit(rng) < 0.5) cfg.gases.push_back({"N2O", 0.01 * unit(rng), "/x/n2o.par", std::nullopt});
      if (unit(rng) < 0.5) cfg.fit_band = Interval{2500.0 + unit(rng), 2600.0};
      const std::string once = format_config(cfg);
      const std::string twice = format_config(parse(once));
      // Keys in scaled units (mW, um, mm) may move by an ulp on the way back.
      std::istringstream a(once);
      std::istringstream b(twice);
      std::string la;
      std::string lb;
      while (std::getline(a, la)) {
        REQUIRE(std::getline(b, lb));
        const auto ka = la.substr(0, la.find('='));
        REQUIRE(ka == lb.substr(0, lb.find('=')));
        if (la == lb) continue;
        const double va = std::stod(la.substr(la.find('=') + 1));
        const double vb = std::stod(lb.substr(lb.find('=') + 1));
        CAPTURE(la);
        REQUIRE(std::abs(va - vb) <= 4e-16 * std::abs(va));
      }
      CHECK_FALSE(std::getline(b, lb));
    }
  }

  TEST_CASE("shipped configuration loads") {
    const RunConfig cfg = load_config(oracle::source_dir() / "configs/default.cfg");
    CHECK(cfg.gases.size() == 2);
    CHECK(std::filesystem::exists(cfg.gas("CH4").linelist_path));
    CHECK(std::filesystem::exists(cfg.gas("N2O").linelist_path));
    CHECK(cfg.gas("CH4").concentration == 0.003);
  }

  TEST_CASE("missing file") {
    try {
      (void)load_config("/nonexistent/run.cfg");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::IoError);
    }
  }
}
