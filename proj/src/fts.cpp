#include "qfts/fts.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "qfts/fft.hpp"

namespace qfts {

namespace {

constexpr double kBoxcarIlsFactor = 1.207;

std::string kind_text(WindowKind kind) { return kind == WindowKind::gaussian ? "gaussian" : "boxcar"; }

// sum_n g(x_n) cos(2 pi d x_n) over a symmetric axis, via a unit rotation
// recurrence from the centre sample outwards.
template <typename Weight>
double symmetric_cosine_sum(const Axis& opd, double detuning, Weight&& weight) {
  const auto half = (opd.size() - 1) / 2;
  const double theta = 2.0 * std::numbers::pi * detuning * opd.step();
  const std::complex<double> step(std::cos(theta), std::sin(theta));
  std::complex<double> phasor(1.0, 0.0);
  double acc = weight(0.0);
  for (Eigen::Index n = 1; n <= half; ++n) {
    // Re-anchor periodically so rounding in the recurrence stays ~1e-15.
    phasor = (n % 256 == 0) ? std::polar(1.0, theta * double(n)) : phasor * step;
    acc += 2.0 * weight(double(n) * opd.step()) * phasor.real();
  }
  return acc;
}

void require_symmetric(const Axis& opd) {
  if (opd.size() % 2 == 0 || std::abs(opd.start() + opd.back()) > 1e-6 * opd.step()) {
    throw Error(Errc::NonUniformAxis, "OPD axis must be symmetric about zero");
  }
}

}  // namespace

void ApodizationWindow::validate() const {
  if (kind == WindowKind::gaussian && !(fwhm > 0.0)) throw Error(Errc::DomainError, "Gaussian window FWHM must be positive");
}

double ApodizationWindow::operator()(double x) const noexcept {
  if (kind == WindowKind::boxcar) return 1.0;
  return std::exp(-4.0 * std::numbers::ln2 * x * x / (fwhm * fwhm));
}

Interferogram apodize(const Interferogram& ifg, const ApodizationWindow& win) {
  win.validate();
  Interferogram out = ifg;
  const double mean = ifg.counts.mean();
  for (Eigen::Index i = 0; i < out.counts.size(); ++i) out.counts[i] = (ifg.counts[i] - mean) * win(ifg.opd[i]);
  out.provenance["apodization.kind"] = kind_text(win.kind);
  if (win.kind == WindowKind::gaussian) out.provenance["apodization.fwhm_mm_opd"] = textio::format_double(win.fwhm * 10.0);
  return out;
}

Eigen::VectorXcd complex_transform(const Interferogram& ifg, int zero_fill_factor) {
  if (zero_fill_factor < 1) throw Error(Errc::DomainError, "zero-fill factor must be >= 1");
  if (ifg.counts.size() != ifg.opd.size() || ifg.counts.size() < 2) {
    throw Error(Errc::NonUniformAxis, "interferogram axis and counts disagree");
  }
  const Eigen::Index n = ifg.counts.size();
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(n * zero_fill_factor);
  padded.head(n) = ifg.counts;
  return dft(padded);
}

AmplitudeSpectrum to_spectrum(const Interferogram& ifg, int zero_fill_factor) {
  const Eigen::VectorXcd full = complex_transform(ifg, zero_fill_factor);
  const Eigen::Index padded = full.size();
  const Eigen::Index bins = padded / 2 + 1;
  AmplitudeSpectrum out;
  out.grid = Axis(0.0, 1.0 / (double(padded) * ifg.opd.step()), bins);
  out.amplitude = full.head(bins).cwiseAbs();
  out.psd = out.amplitude.cwiseAbs2();
  out.meta = ifg.provenance;
  out.meta["zero_fill"] = std::to_string(zero_fill_factor);
  out.meta["scan.opd_max_cm"] = textio::format_double(ifg.opd.back());
  out.meta["scan.opd_step_um"] = textio::format_double(ifg.opd.step() * 1.0e4);
  return out;
}

AmplitudeSpectrum analyze(const Interferogram& ifg, const ApodizationWindow& win, int zero_fill_factor) {
  AmplitudeSpectrum out = to_spectrum(apodize(ifg, win), zero_fill_factor);
  out.meta["ils_fwhm_cm1"] = textio::format_double(ils_fwhm(win, ifg.opd.back()));
  return out;
}

double ils_fwhm(const ApodizationWindow& win, double opd_max) {
  win.validate();
  if (win.kind == WindowKind::gaussian) return 4.0 * std::numbers::ln2 / (std::numbers::pi * win.fwhm);
  if (!(opd_max > 0.0)) throw Error(Errc::DomainError, "opd_max must be positive");
  return kBoxcarIlsFactor / (2.0 * opd_max);
}

double ils_value(const ApodizationWindow& win, const Axis& opd, double detuning) {
  require_symmetric(opd);
  return symmetric_cosine_sum(opd, detuning, win);
}

double measured_ils_fwhm(const ApodizationWindow& win, const Axis& opd) {
  const double peak = ils_value(win, opd, 0.0);
  // Bracket the first half-maximum crossing, then bisect.
  double lo = 0.0;
  double hi = 0.25 * ils_fwhm(win, opd.back());
  while (ils_value(win, opd, hi) > 0.5 * peak) {
    lo = hi;
    hi *= 1.5;
  }
  for (int it = 0; it < 80 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ils_value(win, opd, mid) > 0.5 * peak ? lo : hi) = mid;
  }
  return lo + hi;  // twice the half width
}

Eigen::VectorXd ils_kernel(const ApodizationWindow& win, const Axis& opd, double step, double half_width) {
  if (!(step > 0.0) || !(half_width >= 0.0)) throw Error(Errc::DomainError, "kernel step and half width must be positive");
  const auto half = static_cast<Eigen::Index>(std::floor(half_width / step + 1e-9));
  Eigen::VectorXd kernel(2 * half + 1);
  for (Eigen::Index m = 0; m <= half; ++m) {
    const double v = ils_value(win, opd, double(m) * step);
    kernel[half + m] = v;
    kernel[half - m] = v;
  }
  const double area = kernel.sum() * step;
  if (!(area > 0.0)) throw Error(Errc::DomainError, "instrument line shape has no positive area");
  return kernel / area;
}

Eigen::VectorXd noise_correlation(const ApodizationWindow& win, const Axis& opd, double step, Eigen::Index max_lag) {
  require_symmetric(opd);
  auto squared = [&win](double x) {
    const double w = win(x);
    return w * w;
  };
  Eigen::VectorXd rho(max_lag + 1);
  const double zero = symmetric_cosine_sum(opd, 0.0, squared);
  for (Eigen::Index m = 0; m <= max_lag; ++m) rho[m] = symmetric_cosine_sum(opd, double(m) * step, squared) / zero;
  return rho;
}

Eigen::VectorXd envelope(const Interferogram& ifg) {
  const Eigen::Index n = ifg.counts.size();
  const double mean = ifg.counts.mean();
  Eigen::VectorXcd spectrum = dft(Eigen::VectorXd(ifg.counts.array() - mean));
  // Analytic signal: keep DC, double positive frequencies, drop negative ones.
  for (Eigen::Index k = 1; k < n; ++k) {
    if (2 * k < n) {
      spectrum[k] *= 2.0;
    } else if (2 * k > n) {
      spectrum[k] = 0.0;
    }
  }
  return idft(spectrum).cwiseAbs();
}

double peak_fwhm(const Axis& axis, const Eigen::VectorXd& values) {
  Eigen::Index peak = 0;
  const double top = values.maxCoeff(&peak);
  const double half = 0.5 * top;
  auto crossing = [&](Eigen::Index inside, Eigen::Index outside) {
    const double t = (values[inside] - half) / (values[inside] - values[outside]);
    return axis[inside] + t * (axis[outside] - axis[inside]);
  };
  Eigen::Index right = peak;
  while (right + 1 < values.size() && values[right + 1] > half) ++right;
  Eigen::Index left = peak;
  while (left > 0 && values[left - 1] > half) --left;
  if (right + 1 >= values.size() || left == 0) throw Error(Errc::DomainError, "peak extends past the axis ends");
  return crossing(right, right + 1) - crossing(left, left - 1);
}

void write_spectrum(std::ostream& out, const AmplitudeSpectrum& spectrum) {
  out << "# wavenumber_cm-1 amplitude psd\n";
  for (const auto& [key, value] : spectrum.meta) out << "# " << key << " = " << value << '\n';
  for (Eigen::Index i = 0; i < spectrum.grid.size(); ++i) {
    out << textio::format_double(spectrum.grid[i]) << ' ' << textio::format_double(spectrum.amplitude[i]) << ' '
        << textio::format_double(spectrum.psd[i]) << '\n';
  }
}

AmplitudeSpectrum read_spectrum(std::istream& in) {
  AmplitudeSpectrum out;
  std::vector<double> nu;
  std::vector<double> amp;
  std::vector<double> psd;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto text = textio::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      textio::parse_metadata_line(text, out.meta);
      continue;
    }
    double cols[3] = {0.0, 0.0, 0.0};
    std::string_view rest = text;
    for (int c = 0; c < 3; ++c) {
      rest = textio::trim(rest);
      const auto end = rest.find_first_of(" \t,");
      if (!textio::parse_double(rest.substr(0, end), cols[c])) {
        throw Error(Errc::IoError, "spectrum line " + std::to_string(line_number) + " is not 'nu amplitude psd'");
      }
      rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end + 1);
    }
    nu.push_back(cols[0]);
    amp.push_back(cols[1]);
    psd.push_back(cols[2]);
  }
  out.grid = Axis::from_samples(nu, Errc::NonUniformAxis);
  out.amplitude = Eigen::Map<const Eigen::VectorXd>(amp.data(), static_cast<Eigen::Index>(amp.size()));
  out.psd = Eigen::Map<const Eigen::VectorXd>(psd.data(), static_cast<Eigen::Index>(psd.size()));
  return out;
}

}  // namespace qfts
