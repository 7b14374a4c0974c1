#include "qfts/interferogram.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include "qfts/fft.hpp"
#include "qfts/random.hpp"

namespace qfts {

namespace {

constexpr Eigen::Index kMaxFftLength = Eigen::Index{1} << 26;

// Cosine sum sum_k Re[a_k exp(2 pi i nu_k x_j)] over the OPD axis.
Eigen::VectorXd fft_cosine_sum(const Axis& grid, const Eigen::VectorXcd& weights, const Axis& opd,
                               Eigen::Index length, Eigen::Index first_bin) {
  // Place conj(a_k) at bin nu_k / dnu (mod M); Re of its forward DFT equals
  // the wanted sum at x_j = j dx because dnu * dx = 1 / M.
  Eigen::VectorXcd bins = Eigen::VectorXcd::Zero(length);
  for (Eigen::Index k = 0; k < grid.size(); ++k) bins[(first_bin + k) % length] += std::conj(weights[k]);
  const Eigen::VectorXcd transformed = dft(bins);
  Eigen::VectorXd out(opd.size());
  const auto half = (opd.size() - 1) / 2;
  for (Eigen::Index n = 0; n < opd.size(); ++n) {
    const Eigen::Index j = n - half;
    out[n] = transformed[((j % length) + length) % length].real();
  }
  return out;
}

Eigen::VectorXd direct_cosine_sum(const Axis& grid, const Eigen::VectorXcd& weights, const Axis& opd) {
  Eigen::VectorXd out(opd.size());
  const double two_pi = 2.0 * std::numbers::pi;
  for (Eigen::Index n = 0; n < opd.size(); ++n) {
    const double x = opd[n];
    double acc = 0.0;
    for (Eigen::Index k = 0; k < grid.size(); ++k) {
      const double theta = two_pi * grid[k] * x;
      acc += weights[k].real() * std::cos(theta) - weights[k].imag() * std::sin(theta);
    }
    out[n] = acc;
  }
  return out;
}

// AC part of the signal for complex spectral weights (magnitude and phase).
Eigen::VectorXd modulation(const Axis& grid, const Eigen::VectorXcd& weights, const Axis& opd, SynthesisRoute route) {
  const double product = grid.step() * opd.step();
  const auto length = static_cast<Eigen::Index>(std::llround(1.0 / product));
  const auto first_bin = static_cast<Eigen::Index>(std::llround(grid.start() / grid.step()));
  const bool commensurate = length >= opd.size() && length <= kMaxFftLength &&
                            std::abs(double(length) * product - 1.0) < 1e-9 && first_bin >= 0 &&
                            std::abs(double(first_bin) * grid.step() - grid.start()) < 1e-6 * grid.step();
  if (route == SynthesisRoute::fft && !commensurate) {
    throw Error(Errc::GridMismatch, "spectral step and OPD step are not commensurate for the FFT route");
  }
  if (route != SynthesisRoute::direct && commensurate) return fft_cosine_sum(grid, weights, opd, length, first_bin);
  return direct_cosine_sum(grid, weights, opd);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

void ScanConfig::validate() const {
  if (!(opd_max > 0.0)) throw Error(Errc::DomainError, "scan opd_max must be positive");
  if (!(opd_step > 0.0) || opd_step > opd_max) throw Error(Errc::DomainError, "scan opd_step must lie in (0, opd_max]");
  if (!(dwell_time > 0.0)) throw Error(Errc::DomainError, "dwell time must be positive");
  if (scans_to_average < 1) throw Error(Errc::DomainError, "scans_to_average must be >= 1");
}

Eigen::Index ScanConfig::half_samples() const {
  return static_cast<Eigen::Index>(std::floor(opd_max / opd_step + 1e-9));
}

Axis ScanConfig::opd_axis() const {
  validate();
  const auto half = half_samples();
  return Axis(-double(half) * opd_step, opd_step, 2 * half + 1);
}

Interferogram synthesize(const Spectrum& spdc, const TransmissionCurve& tau, const DispersionConfig& disp,
                         const ScanConfig& scan, const NoiseConfig& noise, const SpdcConfig& cfg,
                         const SynthesisOptions& options) {
  if (!spdc.grid.matches(tau.grid)) throw Error(Errc::GridMismatch, "SPDC density and transmission grids differ");
  scan.validate();
  cfg.validate();
  if (!(options.detection_efficiency > 0.0)) throw Error(Errc::DomainError, "detection efficiency must be positive");
  if (!(noise.detector_background >= 0.0)) throw Error(Errc::DomainError, "detector background must be >= 0");
  const double nu_max = spdc.grid.back();
  if (scan.opd_step > (1.0 + 1e-12) / (2.0 * nu_max)) {
    throw Error(Errc::NyquistViolation, "OPD step " + std::to_string(scan.opd_step) + " cm undersamples " +
                                            std::to_string(nu_max) + " cm^-1");
  }

  const Axis& grid = spdc.grid;
  const Axis opd = scan.opd_axis();
  const double exposure = scan.dwell_time * double(scan.scans_to_average);
  const double eta = options.detection_efficiency;

  // Half of each pair's photon flux reaches the detector on average; the
  // other half rides on the interference term.
  double dc = 0.0;
  Eigen::VectorXcd weights(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) {
    const double flux = 0.5 * eta * spdc.values[k] * grid.step();
    dc += flux;
    const double v = visibility(std::clamp(tau.tau_roundtrip[k], 0.0, 1.0), cfg);
    weights[k] = std::polar(flux * v, disp.phase(grid[k]));
  }
  const Eigen::VectorXd ac = modulation(grid, weights, opd, options.route);

  Interferogram out;
  out.opd = opd;
  out.scan = scan;
  out.noise = noise;
  out.counts = (exposure * (ac.array() + dc + noise.detector_background)).matrix();
  out.counts = out.counts.cwiseMax(0.0);

  if (noise.enabled) {
    const auto n = out.counts.size();
    const unsigned threads = std::max(1u, options.threads);
    auto draw = [&](Eigen::Index begin, Eigen::Index end) {
      for (Eigen::Index i = begin; i < end; ++i) {
        CounterEngine engine(noise.rng_seed, noise.stream, static_cast<std::uint64_t>(i));
        std::poisson_distribution<long long> poisson(out.counts[i]);
        out.counts[i] = out.counts[i] > 0.0 ? static_cast<double>(poisson(engine)) : 0.0;
      }
    };
    if (threads == 1) {
      draw(0, n);
    } else {
      std::vector<std::jthread> pool;
      const Eigen::Index chunk = (n + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        const Eigen::Index begin = std::min<Eigen::Index>(n, t * chunk);
        const Eigen::Index end = std::min<Eigen::Index>(n, begin + chunk);
        if (begin < end) pool.emplace_back(draw, begin, end);
      }
    }
  }
  return out;
}

Interferogram average(std::span<const Interferogram> scans) {
  if (scans.empty()) throw Error(Errc::AxisMismatch, "nothing to average");
  const auto& first = scans.front();
  Interferogram out = first;
  out.counts = Eigen::VectorXd::Zero(first.counts.size());
  int records = 0;
  for (const auto& s : scans) {
    const bool same_scan = s.scan.opd_max == first.scan.opd_max && s.scan.opd_step == first.scan.opd_step &&
                           s.scan.dwell_time == first.scan.dwell_time &&
                           s.scan.scans_to_average == first.scan.scans_to_average;
    if (!s.opd.matches(first.opd) || !same_scan || s.counts.size() != first.counts.size()) {
      throw Error(Errc::AxisMismatch, "interferograms to average differ in axis or scan settings");
    }
    out.counts += s.counts;
    records += s.averaged_records;
  }
  out.counts /= double(scans.size());
  out.averaged_records = records;
  return out;
}

Eigen::VectorXd modulation_template(const Spectrum& spdc, const DispersionConfig& disp, const ScanConfig& scan) {
  const Axis& grid = spdc.grid;
  const double total = spdc.values.sum();
  if (!(total > 0.0)) throw Error(Errc::DomainError, "emission spectrum is empty");
  Eigen::VectorXcd weights(grid.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) weights[k] = std::polar(spdc.values[k] / total, disp.phase(grid[k]));
  return modulation(grid, weights, scan.opd_axis(), SynthesisRoute::automatic);
}

double fringe_contrast(const Interferogram& ifg, const Eigen::VectorXd& modulation) {
  if (modulation.size() != ifg.counts.size()) throw Error(Errc::AxisMismatch, "template length differs from record");
  Eigen::MatrixXd design(ifg.counts.size(), 2);
  design.col(0).setOnes();
  design.col(1) = modulation;
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(ifg.counts);
  if (!(coef[0] > 0.0)) throw Error(Errc::DomainError, "record has no positive mean level");
  return coef[1] / coef[0];
}

void write_interferogram(std::ostream& out, const Interferogram& ifg, OpdColumn column) {
  using textio::format_double;
  const bool displacement = column == OpdColumn::displacement;
  out << (displacement ? "# displacement_cm counts\n" : "# opd_cm counts\n");
  out << "# scan.opd_max_cm = " << format_double(ifg.scan.opd_max) << '\n'
      << "# scan.opd_step_um = " << format_double(ifg.scan.opd_step * 1.0e4) << '\n'
      << "# scan.dwell_s = " << format_double(ifg.scan.dwell_time) << '\n'
      << "# scan.averages = " << ifg.scan.scans_to_average << '\n'
      << "# noise.enabled = " << bool_text(ifg.noise.enabled) << '\n'
      << "# noise.seed = " << ifg.noise.rng_seed << '\n'
      << "# noise.stream = " << ifg.noise.stream << '\n'
      << "# noise.background_cps = " << format_double(ifg.noise.detector_background) << '\n'
      << "# averaged_records = " << ifg.averaged_records << '\n';
  for (const auto& [key, value] : ifg.provenance) out << "# " << key << " = " << value << '\n';
  const double scale = displacement ? 0.5 : 1.0;
  for (Eigen::Index i = 0; i < ifg.counts.size(); ++i) {
    out << format_double(ifg.opd[i] * scale) << ' ' << format_double(ifg.counts[i]) << '\n';
  }
}

Interferogram read_interferogram(std::istream& in) {
  textio::Metadata meta;
  std::vector<double> axis;
  std::vector<double> counts;
  double scale = 1.0;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto text = textio::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (text.find("displacement_cm") != std::string_view::npos) scale = 2.0;
      textio::parse_metadata_line(text, meta);
      continue;
    }
    const auto space = text.find_first_of(" \t,");
    double x = 0.0;
    double c = 0.0;
    if (space == std::string_view::npos || !textio::parse_double(text.substr(0, space), x) ||
        !textio::parse_double(text.substr(space + 1), c)) {
      throw Error(Errc::IoError, "interferogram line " + std::to_string(line_number) + " is not 'opd counts'");
    }
    axis.push_back(x * scale);
    counts.push_back(c);
  }
  Interferogram ifg;
  ifg.opd = Axis::from_samples(axis, Errc::NonUniformAxis);
  ifg.counts = Eigen::Map<const Eigen::VectorXd>(counts.data(), static_cast<Eigen::Index>(counts.size()));

  auto number = [&](const std::string& key, double fallback) {
    const auto it = meta.find(key);
    if (it == meta.end()) return fallback;
    double v = 0.0;
    if (!textio::parse_double(it->second, v)) throw Error(Errc::IoError, "metadata '" + key + "' is not a number");
    meta.erase(it);
    return v;
  };
  ifg.scan.opd_step = ifg.opd.step();
  ifg.scan.opd_max = number("scan.opd_max_cm", ifg.opd.back());
  number("scan.opd_step_um", 0.0);
  ifg.scan.dwell_time = number("scan.dwell_s", ifg.scan.dwell_time);
  ifg.scan.scans_to_average = static_cast<int>(number("scan.averages", 1.0));
  auto integer = [&](const std::string& key) -> std::uint64_t {
    const auto it = meta.find(key);
    if (it == meta.end()) return 0;
    std::uint64_t v = 0;
    const auto& text = it->second;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw Error(Errc::IoError, "metadata '" + key + "' is not an unsigned integer");
    }
    meta.erase(it);
    return v;
  };
  ifg.noise.rng_seed = integer("noise.seed");
  ifg.noise.stream = integer("noise.stream");
  ifg.noise.detector_background = number("noise.background_cps", 0.0);
  ifg.averaged_records = static_cast<int>(number("averaged_records", 1.0));
  if (const auto it = meta.find("noise.enabled"); it != meta.end()) {
    ifg.noise.enabled = it->second == "true";
    meta.erase(it);
  }
  ifg.provenance = std::move(meta);
  return ifg;
}

}  // namespace qfts
