#include <doctest.h>

#include <random>
#include <sstream>

#include "qfts/fft.hpp"
#include "qfts/fts.hpp"
#include "support/oracles.hpp"

using namespace qfts;

namespace {

const Axis kGrid = Axis::from_range(1800.0, 4000.0, 0.01);

Interferogram cosine_record(double nu0, double opd_max, double step = 1.0e-4) {
  ScanConfig scan;
  scan.opd_max = opd_max;
  scan.opd_step = step;
  Interferogram ifg;
  ifg.scan = scan;
  ifg.opd = scan.opd_axis();
  ifg.counts.resize(ifg.opd.size());
  for (Eigen::Index i = 0; i < ifg.opd.size(); ++i) {
    ifg.counts[i] = 1000.0 + 500.0 * std::cos(2.0 * std::numbers::pi * nu0 * ifg.opd[i]);
  }
  return ifg;
}

Interferogram reference_record(double beta2) {
  DispersionConfig disp;
  disp.beta2 = beta2;
  NoiseConfig noise;
  noise.enabled = false;
  const Spectrum s = spdc_spectral_density(SpdcConfig{}, 5.5, kGrid);
  return synthesize(s, {kGrid, Eigen::VectorXd::Ones(kGrid.size())}, disp, ScanConfig{}, noise, SpdcConfig{});
}

ApodizationWindow boxcar() { return {WindowKind::boxcar, 0.0}; }

double centroid(const AmplitudeSpectrum& s, Interval band) {
  double num = 0.0;
  double den = 0.0;
  for (Eigen::Index i = 0; i < s.grid.size(); ++i) {
    if (!band.contains(s.grid[i])) continue;
    num += s.grid[i] * s.amplitude[i];
    den += s.amplitude[i];
  }
  return num / den;
}

}  // namespace

TEST_SUITE("apodization") {
  TEST_CASE("boxcar only removes the mean") {
    const auto ifg = cosine_record(2900.0, 0.1);
    const auto out = apodize(ifg, boxcar());
    CHECK((out.counts - (ifg.counts.array() - ifg.counts.mean()).matrix()).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("gaussian weight is 1 at the centre and 1/2 at half the FWHM") {
    Interferogram ifg;
    ifg.opd = Axis(-0.34, 0.34, 3);
    ifg.counts = Eigen::Vector3d(4.0, 10.0, 7.0);
    const auto out = apodize(ifg, ApodizationWindow{WindowKind::gaussian, 0.68});
    const double mean = 7.0;
    CHECK(out.counts[1] == doctest::Approx(10.0 - mean).epsilon(1e-15));
    CHECK(out.counts[0] == doctest::Approx(0.5 * (4.0 - mean)).epsilon(1e-14));
    CHECK(out.counts[2] == doctest::Approx(0.0));
    CHECK(out.provenance.at("apodization.kind") == "gaussian");
  }

  TEST_CASE("non-positive gaussian width") {
    CHECK_THROWS_AS((void)apodize(cosine_record(2900.0, 0.01), ApodizationWindow{WindowKind::gaussian, 0.0}), Error);
  }
}

TEST_SUITE("transform") {
  TEST_CASE("pure cosine gives a single peak at its wavenumber") {
    const auto spec = to_spectrum(apodize(cosine_record(2900.0, 0.8), boxcar()), 1);
    Eigen::Index peak = 0;
    spec.amplitude.maxCoeff(&peak);
    const double bin = spec.grid.step();
    CHECK(std::abs(spec.grid[peak] - 2900.0) <= bin);
    CHECK(std::abs(centroid(spec, {2900.0 - 5 * bin, 2900.0 + 5 * bin}) - 2900.0) <= bin);
    // Nothing else of comparable size.
    Eigen::VectorXd rest = spec.amplitude;
    rest.segment(peak - 5, 11).setZero();
    CHECK(rest.maxCoeff() < 0.25 * spec.amplitude[peak]);
  }

  TEST_CASE("Parseval on the one-sided power spectrum") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> normal;
    Interferogram ifg;
    ifg.opd = Axis(-0.0150, 1e-4, 301);
    ifg.counts.resize(301);
    for (auto& c : ifg.counts) c = normal(rng);
    const auto spec = to_spectrum(ifg, 1);
    // Odd length: full spectrum power = psd[0] + 2 * sum of the rest, and
    // sum x^2 = (1/N) sum |X_k|^2 for the unnormalised forward transform.
    const double power = spec.psd[0] + 2.0 * spec.psd.tail(spec.psd.size() - 1).sum();
    CHECK(ifg.counts.squaredNorm() == doctest::Approx(power / 301.0).epsilon(1e-10));
  }

  TEST_CASE("FFT agrees with a naive DFT") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> normal;
    for (Eigen::Index n : {1, 2, 7, 64, 105, 211}) {
      Eigen::VectorXd x(n);
      for (auto& v : x) v = normal(rng);
      const Eigen::VectorXcd a = dft(x);
      const Eigen::VectorXcd b = oracle::naive_dft(x);
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-11 * (1.0 + b.cwiseAbs().maxCoeff()));
      CHECK((idft(a) - x.cast<std::complex<double>>()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("property: complex transform is linear") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 10; ++trial) {
      Interferogram a;
      a.opd = Axis(-0.01, 1e-4, 201);
      a.counts.resize(201);
      Interferogram b = a;
      for (auto& c : a.counts) c = normal(rng);
      for (auto& c : b.counts) c = normal(rng);
      const double p = normal(rng);
      const double q = normal(rng);
      Interferogram mix = a;
      mix.counts = p * a.counts + q * b.counts;
      const Eigen::VectorXcd lhs = complex_transform(mix, 3);
      const Eigen::VectorXcd rhs = p * complex_transform(a, 3) + q * complex_transform(b, 3);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * rhs.cwiseAbs().maxCoeff());
    }
  }

  TEST_CASE("zero filling keeps centroid and band area") {
    const auto ifg = apodize(cosine_record(2901.37, 1.6), ApodizationWindow{});
    const auto plain = to_spectrum(ifg, 1);
    const double bin = plain.grid.step();
    const Interval band{2880.0, 2920.0};
    auto area = [&](const AmplitudeSpectrum& s) {
      double sum = 0.0;
      for (Eigen::Index i = 0; i < s.grid.size(); ++i) sum += band.contains(s.grid[i]) ? s.amplitude[i] : 0.0;
      return sum * s.grid.step();
    };
    for (int zf : {2, 4, 8}) {
      const auto filled = to_spectrum(ifg, zf);
      CAPTURE(zf);
      CHECK(filled.grid.step() == doctest::Approx(bin / zf).epsilon(1e-12));
      CHECK(std::abs(centroid(filled, band) - centroid(plain, band)) <= bin);
      CHECK(area(filled) == doctest::Approx(area(plain)).epsilon(1e-3));
    }
  }

  TEST_CASE("recovered emission matches the synthesized Gaussian") {
    const ApodizationWindow win;
    const auto spec = analyze(reference_record(0.0), win, 4);
    const double ils = ils_fwhm(win, 1.6);
    CHECK(spec.meta.at("ils_fwhm_cm1") == textio::format_double(ils));
    const double measured = peak_fwhm(spec.grid, spec.amplitude);
    CHECK(std::sqrt(measured * measured - ils * ils) == doctest::Approx(700.0).epsilon(0.03));
    CHECK(std::abs(centroid(spec, {2000.0, 3800.0}) - 2900.0) <= 2.0);
  }

  TEST_CASE("amplitude spectrum ignores the crystal phase") {
    const ApodizationWindow win;
    const auto flat = analyze(reference_record(0.0), win, 4);
    const auto chirped = analyze(reference_record(2.0e-5), win, 4);
    const double floor = 0.1 * flat.amplitude.maxCoeff();
    double worst = 0.0;
    for (Eigen::Index i = 0; i < flat.grid.size(); ++i) {
      if (flat.amplitude[i] < floor) continue;
      worst = std::max(worst, std::abs(chirped.amplitude[i] / flat.amplitude[i] - 1.0));
    }
    CHECK(worst <= 0.01);
  }

  TEST_CASE("spectrum file round trip") {
    const auto spec = analyze(cosine_record(2900.0, 0.01), ApodizationWindow{}, 2);
    std::stringstream text;
    write_spectrum(text, spec);
    const auto back = read_spectrum(text);
    CHECK(back.amplitude == spec.amplitude);
    CHECK(back.psd == spec.psd);
    CHECK(back.grid.matches(spec.grid));
    CHECK(back.meta == spec.meta);
  }
}

TEST_SUITE("instrument line shape") {
  TEST_CASE("analytic widths") {
    const double g = ils_fwhm(ApodizationWindow{WindowKind::gaussian, 0.68}, 1.6);
    CHECK(g == doctest::Approx(4.0 * std::numbers::ln2 / (std::numbers::pi * 0.68)).epsilon(1e-15));
    CHECK(g == doctest::Approx(1.30).epsilon(2e-3));
    CHECK(ils_fwhm(boxcar(), 1.207) == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("property: gaussian ILS narrows as the window widens") {
    double last = std::numeric_limits<double>::infinity();
    for (double w = 0.01; w < 1e4; w *= 1.7) {
      const double now = ils_fwhm(ApodizationWindow{WindowKind::gaussian, w}, 1.6);
      CHECK(now < last);
      last = now;
    }
    CHECK(last < 1e-3);
  }

  TEST_CASE("measured width of the transformed window") {
    ScanConfig scan;
    const Axis opd = scan.opd_axis();
    const ApodizationWindow gauss{WindowKind::gaussian, 0.68};
    CHECK(measured_ils_fwhm(gauss, opd) == doctest::Approx(ils_fwhm(gauss, opd.back())).epsilon(0.01));
    scan.opd_max = 1.207;
    const Axis short_opd = scan.opd_axis();
    CHECK(measured_ils_fwhm(boxcar(), short_opd) == doctest::Approx(ils_fwhm(boxcar(), short_opd.back())).epsilon(0.01));
  }

  TEST_CASE("kernel has unit area and is symmetric") {
    const Axis opd = ScanConfig{}.opd_axis();
    const auto k = ils_kernel(ApodizationWindow{}, opd, 0.01, 6.5);
    CHECK(k.size() == 1301);
    CHECK(k.sum() * 0.01 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((k - k.reverse()).cwiseAbs().maxCoeff() <= 1e-12 * k.maxCoeff());
  }

  TEST_CASE("noise correlation is the transform of the squared window") {
    const Axis opd = ScanConfig{}.opd_axis();
    const double f = 0.68;
    const double step = 0.0781;
    const auto rho = noise_correlation(ApodizationWindow{WindowKind::gaussian, f}, opd, step, 40);
    CHECK(rho[0] == 1.0);
    for (Eigen::Index m = 1; m <= 40; ++m) {
      const double d = double(m) * step;
      const double expected = std::exp(-std::pow(std::numbers::pi * d * f, 2) / (8.0 * std::numbers::ln2));
      CHECK(rho[m] == doctest::Approx(expected).epsilon(1e-6).scale(1e-12));
    }
  }
}

TEST_SUITE("envelope") {
  TEST_CASE("width of a known gaussian burst") {
    Interferogram ifg;
    ifg.opd = Axis(-0.05, 1e-4, 1001);
    ifg.counts.resize(1001);
    const double fwhm = 0.004;
    for (Eigen::Index i = 0; i < 1001; ++i) {
      const double x = ifg.opd[i];
      ifg.counts[i] = 100.0 + std::exp(-4.0 * std::numbers::ln2 * x * x / (fwhm * fwhm)) *
                                  std::cos(2.0 * std::numbers::pi * 2900.0 * x);
    }
    CHECK(peak_fwhm(ifg.opd, envelope(ifg)) == doctest::Approx(fwhm).epsilon(1e-3));
  }
}
