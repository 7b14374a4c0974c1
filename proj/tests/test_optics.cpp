#include <doctest.h>

#include <random>

#include "qfts/optics.hpp"
#include "support/oracles.hpp"

using namespace qfts;

namespace {

AbsorptionSpectrum flat_alpha(const Axis& grid, double value) {
  return {grid, Eigen::VectorXd::Constant(grid.size(), value)};
}

}  // namespace

TEST_SUITE("idler") {
  TEST_CASE("energy conservation examples") {
    const double pump = 1.0e7 / 775.0;
    CHECK(pump == doctest::Approx(12903.2).epsilon(1e-5));
    CHECK(idler_wavenumber(pump, 10000.0) == doctest::Approx(2903.2).epsilon(1e-5));
    CHECK(1.0e4 / idler_wavenumber(pump, 10000.0) == doctest::Approx(3.44).epsilon(1e-3));
    CHECK(idler_wavenumber(pump, pump / 2.0) == pump / 2.0);
    const double signal = pump - 2777.8;
    CHECK(signal == doctest::Approx(10125.4).epsilon(1e-5));
    CHECK(1.0e7 / signal == doctest::Approx(987.6).epsilon(1e-4));
    CHECK(idler_wavenumber(pump, signal) == doctest::Approx(2777.8).epsilon(1e-12));
  }

  TEST_CASE("property: signal -> idler -> signal is the identity") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> unit(0.01, 0.99);
    const double pump = 1.0e7 / 775.0;
    for (int i = 0; i < 1000; ++i) {
      const double signal = pump * unit(rng);
      const double idler = idler_wavenumber(pump, signal);
      CHECK(idler == pump - signal);
      CHECK(idler_wavenumber(pump, idler) == doctest::Approx(signal).epsilon(1e-14));
    }
  }

  TEST_CASE("signal outside (0, pump)") {
    CHECK_THROWS_AS((void)idler_wavenumber(10000.0, 10000.0), Error);
    CHECK_THROWS_AS((void)idler_wavenumber(10000.0, -1.0), Error);
  }
}

TEST_SUITE("cavity") {
  TEST_CASE("enhancement examples") {
    CHECK(cavity_enhancement({std::numbers::pi, 1.0, 0.1}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cavity_enhancement({290.0, 0.596, 0.1}) == doctest::Approx(55.0).epsilon(0.5 / 55.0));
    CHECK(cavity_enhancement({290.0, 1.0, 0.1}) == doctest::Approx(92.3).epsilon(1e-3));
    CHECK(intracavity_power({290.0, 0.596, 0.1}) == doctest::Approx(5.50).epsilon(2e-3));
  }

  TEST_CASE("property: monotone in finesse and coupling") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> f(1.0, 2000.0);
    std::uniform_real_distribution<double> c(0.01, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double f1 = f(rng);
      const double f2 = f(rng);
      const double c1 = c(rng);
      const double c2 = c(rng);
      CHECK((cavity_enhancement({f1, c1, 0.1}) < cavity_enhancement({f2, c1, 0.1})) == (f1 < f2));
      CHECK((cavity_enhancement({f1, c1, 0.1}) < cavity_enhancement({f1, c2, 0.1})) == (c1 < c2));
    }
  }
}

TEST_SUITE("spdc") {
  const Axis grid = Axis::from_range(1800.0, 4000.0, 0.01);

  TEST_CASE("zero pump gives no light") {
    const Spectrum s = spdc_spectral_density(SpdcConfig{}, 0.0, grid);
    CHECK(s.values.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("gaussian half maximum at +-350 cm^-1") {
    const SpdcConfig cfg;
    const double peak = spdc_shape(cfg, 2900.0);
    CHECK(spdc_shape(cfg, 2550.0) == doctest::Approx(0.5 * peak).epsilon(1e-12));
    CHECK(spdc_shape(cfg, 3250.0) == doctest::Approx(0.5 * peak).epsilon(1e-12));
  }

  TEST_CASE("sinc squared shape keeps its FWHM") {
    SpdcConfig cfg;
    cfg.spectral_shape = SpectralShape::sinc_squared;
    const double peak = spdc_shape(cfg, 2900.0);
    CHECK(spdc_shape(cfg, 2550.0) == doctest::Approx(0.5 * peak).epsilon(1e-9));
    CHECK(spdc_shape(cfg, 3250.0) == doctest::Approx(0.5 * peak).epsilon(1e-9));
  }

  TEST_CASE("shape is area-normalised") {
    const SpdcConfig cfg;
    const Axis wide = Axis::from_range(100.0, 6000.0, 0.05);
    double area = 0.0;
    for (Eigen::Index i = 0; i < wide.size(); ++i) area += spdc_shape(cfg, wide[i]) * wide.step();
    CHECK(area == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("idler power near 60 nW at the default operating point") {
    const CavityConfig cav;
    const Spectrum s = spdc_spectral_density(SpdcConfig{}, intracavity_power(cav), grid);
    CHECK(idler_power(s) == doctest::Approx(60e-9).epsilon(0.02));
  }

  TEST_CASE("property: homogeneous in pump power") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const Axis coarse = Axis::from_range(1800.0, 4000.0, 0.5);
    const Spectrum base = spdc_spectral_density(SpdcConfig{}, 1.0, coarse);
    for (int i = 0; i < 50; ++i) {
      const double p = std::pow(10.0, -3.0 + 4.0 * unit(rng));
      const double a = 100.0 * unit(rng);
      const Spectrum s1 = spdc_spectral_density(SpdcConfig{}, p, coarse);
      const Spectrum s2 = spdc_spectral_density(SpdcConfig{}, a * p, coarse);
      CHECK(((s2.values - a * s1.values).cwiseAbs().array() <= 1e-12 * (a * s1.values).cwiseAbs().array()).all());
      CHECK(((s1.values - p * base.values).cwiseAbs().array() <= 1e-12 * s1.values.cwiseAbs().array()).all());
    }
  }

  TEST_CASE("grid missing most of the band") {
    CHECK_THROWS_AS((void)spdc_spectral_density(SpdcConfig{}, 1.0, Axis::from_range(3000.0, 3100.0, 0.1)), Error);
  }
}

TEST_SUITE("visibility and transmission") {
  TEST_CASE("visibility examples") {
    const SpdcConfig cfg;
    CHECK(visibility(0.0, cfg) == 0.0);
    CHECK(visibility(1.0, cfg) == cfg.max_visibility);
    CHECK(visibility(0.5, cfg) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_THROWS_AS((void)visibility(1.5, cfg), Error);
  }

  TEST_CASE("property: visibility is linear") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const SpdcConfig cfg;
    for (int i = 0; i < 1000; ++i) {
      const double tau = unit(rng);
      const double a = unit(rng);
      CHECK(visibility(a * tau, cfg) == doctest::Approx(a * visibility(tau, cfg)).epsilon(1e-15));
    }
  }

  const Axis grid = Axis::from_range(2400.0, 3100.0, 0.5);

  TEST_CASE("zero concentration gives unit transmission") {
    const auto a = flat_alpha(grid, 3.0);
    const AbsorberComponent mix[] = {{&a, 0.0}};
    const auto tau = roundtrip_transmission(mix, 2.0);
    CHECK((tau.tau_roundtrip.array() == 1.0).all());
  }

  TEST_CASE("exponent ln 2 halves the amplitude") {
    const double c = 0.01;
    const double length = 2.0;
    const auto a = flat_alpha(grid, std::numbers::ln2 / (c * length));
    const AbsorberComponent mix[] = {{&a, c}};
    const auto tau = roundtrip_transmission(mix, length);
    CHECK(tau.tau_roundtrip[10] == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("property: mixture equals product of its species") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
      AbsorptionSpectrum a1{grid, Eigen::VectorXd(grid.size())};
      AbsorptionSpectrum a2{grid, Eigen::VectorXd(grid.size())};
      for (Eigen::Index i = 0; i < grid.size(); ++i) {
        a1.alpha[i] = 50.0 * unit(rng);
        a2.alpha[i] = 50.0 * unit(rng);
      }
      const double c1 = 0.02 * unit(rng);
      const double c2 = 0.02 * unit(rng);
      const AbsorberComponent both[] = {{&a1, c1}, {&a2, c2}};
      const AbsorberComponent only1[] = {{&a1, c1}};
      const AbsorberComponent only2[] = {{&a2, c2}};
      const auto t = roundtrip_transmission(both, 2.0).tau_roundtrip;
      const Eigen::VectorXd p =
          roundtrip_transmission(only1, 2.0).tau_roundtrip.cwiseProduct(roundtrip_transmission(only2, 2.0).tau_roundtrip);
      CHECK(((t - p).cwiseAbs().array() <= 1e-12 * p.array()).all());
    }
  }

  TEST_CASE("two-gas mixture from line lists shows both bands") {
    const auto dir = oracle::source_dir() / "data";
    std::vector<GasComponent> mix{{load_linelist_file((dir / "CH4_synthetic.par").string(), "CH4"), 0.003},
                                  {load_linelist_file((dir / "N2O_synthetic.par").string(), "N2O"), 0.009}};
    const Axis fine = Axis::from_range(2400.0, 3100.0, 0.01);
    const auto tau = roundtrip_transmission(mix, 2.0, GasConditions{}, fine);
    auto min_in = [&](double lo, double hi) {
      return tau.tau_roundtrip.segment(fine.lower_index(lo), fine.upper_index(hi) - fine.lower_index(lo)).minCoeff();
    };
    CHECK(min_in(2850.0, 3150.0) < 0.8);   // methane: strong lines
    CHECK(min_in(2500.0, 2630.0) < 0.98);  // nitrous oxide: a weak but clear band
    CHECK(min_in(2500.0, 2630.0) > 0.8);
    CHECK(min_in(2680.0, 2820.0) > 0.99);  // gap between the bands
  }

  TEST_CASE("concentrations must stay physical") {
    const auto a = flat_alpha(grid, 1.0);
    const AbsorberComponent negative[] = {{&a, -0.1}};
    CHECK_THROWS_AS((void)roundtrip_transmission(negative, 2.0), Error);
    const AbsorberComponent over[] = {{&a, 0.7}, {&a, 0.7}};
    CHECK_THROWS_AS((void)roundtrip_transmission(over, 2.0), Error);
  }
}
