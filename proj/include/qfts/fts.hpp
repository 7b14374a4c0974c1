#pragma once

#include <Eigen/Core>

#include <istream>
#include <ostream>

#include "qfts/axis.hpp"
#include "qfts/interferogram.hpp"
#include "qfts/textio.hpp"

namespace qfts {

enum class WindowKind { gaussian, boxcar };

struct ApodizationWindow {
  WindowKind kind = WindowKind::gaussian;
  double fwhm = 0.68;  // cm of OPD, gaussian only

  void validate() const;
  /// Window weight at OPD x (cm); 1 at the centre.
  [[nodiscard]] double operator()(double x) const noexcept;
};

/// Magnitude spectrum of a (windowed) interferogram on bins
/// k / (N_padded * opd_step), k = 0 .. N_padded / 2.
struct AmplitudeSpectrum {
  Axis grid;
  Eigen::VectorXd amplitude;
  Eigen::VectorXd psd;  // amplitude^2
  textio::Metadata meta;
};

/// Subtracts the mean count, then weights by the window centred at OPD 0.
Interferogram apodize(const Interferogram& ifg, const ApodizationWindow& win);

/// Complex DFT of the counts zero-filled to zero_fill_factor x length,
/// bins 0 .. N_padded - 1.
Eigen::VectorXcd complex_transform(const Interferogram& ifg, int zero_fill_factor);

/// |DFT| and its square on the non-negative frequency bins. No phase
/// correction: the magnitude is blind to instrument and dispersion phase.
AmplitudeSpectrum to_spectrum(const Interferogram& ifg, int zero_fill_factor = 4);

/// apodize + to_spectrum; the metadata also records the analytic ILS FWHM
/// (`ils_fwhm_cm1`).
AmplitudeSpectrum analyze(const Interferogram& ifg, const ApodizationWindow& win, int zero_fill_factor = 4);

/// Analytic FWHM of the instrument line shape, cm^-1: 4 ln2 / (pi fwhm) for
/// the Gaussian window, 1.207 / (2 opd_max) for the boxcar.
double ils_fwhm(const ApodizationWindow& win, double opd_max);

/// Discrete line shape f(d) = sum_n w(x_n) cos(2 pi d x_n) of the window
/// sampled on `opd` (not normalised).
double ils_value(const ApodizationWindow& win, const Axis& opd, double detuning);

/// FWHM of `ils_value` found by bisection of the half-maximum crossing.
double measured_ils_fwhm(const ApodizationWindow& win, const Axis& opd);

/// Line shape sampled at m * step for |m| <= half_width / step, area-normalised
/// on that lattice (sum * step = 1).
Eigen::VectorXd ils_kernel(const ApodizationWindow& win, const Axis& opd, double step, double half_width);

/// Correlation coefficient of spectral noise between bins m * step apart,
/// m = 0 .. max_lag, for white interferogram noise through the window.
Eigen::VectorXd noise_correlation(const ApodizationWindow& win, const Axis& opd, double step, Eigen::Index max_lag);

/// Magnitude of the analytic signal of the mean-removed counts.
Eigen::VectorXd envelope(const Interferogram& ifg);

/// Full width at half maximum of the highest peak of `values` on `axis`,
/// with linear interpolation of the crossings.
double peak_fwhm(const Axis& axis, const Eigen::VectorXd& values);

/// Delimited text: header `# wavenumber_cm-1 amplitude psd`, `# key = value`
/// metadata, one bin per line.
void write_spectrum(std::ostream& out, const AmplitudeSpectrum& spectrum);
AmplitudeSpectrum read_spectrum(std::istream& in);

}  // namespace qfts
