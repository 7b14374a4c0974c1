#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <vector>

#include "qfts/axis.hpp"
#include "qfts/optics.hpp"
#include "qfts/textio.hpp"

namespace qfts {

/// Mirror scan. All axes are optical path difference, OPD = 2 x mirror
/// displacement; the scan samples OPD in [-opd_max, +opd_max].
struct ScanConfig {
  double opd_max = 1.6;                  // cm
  double opd_step = 1.0e-4;              // cm
  double dwell_time = 7.6 / 32001.0;     // s per sample
  int scans_to_average = 50;

  void validate() const;
  [[nodiscard]] Eigen::Index half_samples() const;  // samples on each side of zero
  [[nodiscard]] Axis opd_axis() const;
};

/// Quadratic spectral phase phi(nu) = beta2 (nu - center)^2 from the crystal.
struct DispersionConfig {
  double beta2 = 2.0e-5;    // rad cm^2
  double center = 2900.0;   // cm^-1

  [[nodiscard]] double phase(double wavenumber) const noexcept {
    const double d = wavenumber - center;
    return beta2 * d * d;
  }
};

struct NoiseConfig {
  bool enabled = true;
  std::uint64_t rng_seed = 1;
  std::uint64_t stream = 0;          // separates records drawn from one seed
  double detector_background = 0.0;  // counts / s
};

enum class SynthesisRoute { automatic, fft, direct };

struct SynthesisOptions {
  double detection_efficiency = 1.0;  // detected signal photons per emitted pair
  unsigned threads = 1;
  SynthesisRoute route = SynthesisRoute::automatic;
};

struct Interferogram {
  Axis opd;                 // cm
  Eigen::VectorXd counts;   // detected photons per sample
  ScanConfig scan;
  NoiseConfig noise;
  int averaged_records = 1;
  textio::Metadata provenance;
};

/// Expected (and, with noise enabled, Poisson-drawn) signal counts
///
///   N(x) = T * eta * sum_nu S(nu) dnu / 2 [1 + V(nu) cos(2 pi nu x + phi(nu))] + T * background,
///
/// T = dwell * scans, V = V_max tau. When the spectral grid is commensurate
/// with the OPD step the cosine sum is evaluated with one FFT; otherwise (or
/// on request) by direct summation.
Interferogram synthesize(const Spectrum& spdc, const TransmissionCurve& tau, const DispersionConfig& disp,
                         const ScanConfig& scan, const NoiseConfig& noise, const SpdcConfig& cfg,
                         const SynthesisOptions& options = {});

/// Pointwise mean of records sharing axis and scan settings.
Interferogram average(std::span<const Interferogram> scans);

/// Normalised modulation g(x) of a unit-visibility, unit-transmission record:
/// noiseless counts are D (1 + V g(x)) for spectrally flat visibility V.
Eigen::VectorXd modulation_template(const Spectrum& spdc, const DispersionConfig& disp, const ScanConfig& scan);

/// Fringe contrast b/a from the least-squares fit counts ~ a + b g(x).
double fringe_contrast(const Interferogram& ifg, const Eigen::VectorXd& modulation);

enum class OpdColumn { opd, displacement };

/// Delimited text: header `# opd_cm counts` (or `# displacement_cm counts`),
/// then `# key = value` metadata, then one sample per line.
void write_interferogram(std::ostream& out, const Interferogram& ifg, OpdColumn column = OpdColumn::opd);
Interferogram read_interferogram(std::istream& in);

}  // namespace qfts
