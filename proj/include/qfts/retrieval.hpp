#pragma once

#include <Eigen/Core>

#include <ostream>
#include <string>
#include <vector>

#include "qfts/axis.hpp"
#include "qfts/fts.hpp"
#include "qfts/linelist.hpp"

namespace qfts {

/// Sample / reference amplitude quotient. Bins outside `valid_band` hold NaN.
struct TransmissionSpectrum {
  Axis grid;
  Eigen::VectorXd t;
  Interval valid_band;
  textio::Metadata meta;

  [[nodiscard]] bool valid(Eigen::Index i) const noexcept { return valid_band.contains(grid[i]); }
};

/// Everything the transmission model needs besides the concentrations.
struct ModelContext {
  std::vector<std::string> species;
  std::vector<AbsorptionSpectrum> absorbers;  // pure-species alpha, one common fine grid
  double cell_length = 2.0;                   // cm
  Eigen::VectorXd ils;                        // line shape on the fine step, odd length, sum * step == 1

  void validate() const;
  [[nodiscard]] const Axis& grid() const { return absorbers.front().grid; }
};

struct FitOptions {
  int max_iterations = 100;
  double relative_step_tolerance = 1e-8;
  /// Expected per-bin noise of t; when positive, reduced_chi2 is scaled by it.
  double noise_sigma = 0.0;
  /// Noise correlation between measurement bins m apart (m = 0 .. size-1).
  /// Empty: bins are treated as independent.
  Eigen::VectorXd noise_correlation;
};

struct FitResult {
  std::vector<std::string> species;
  Eigen::VectorXd concentrations;
  Eigen::VectorXd sigmas;           // 1 standard error from the linearised covariance
  Eigen::VectorXd wavenumbers;      // fitted bins
  Eigen::VectorXd measured;
  Eigen::VectorXd model;
  Eigen::VectorXd residuals;        // measured - model
  double reduced_chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  Interval band;
};

/// t = |sample| / |reference| where the reference reaches `threshold` of its
/// peak (contiguous band around the peak).
///
/// Amplitudes, not power: the visibility follows the round-trip amplitude
/// transmission exp(-c alpha L), the transform amplitude follows the
/// visibility, so the amplitude quotient is the transmission model itself.
/// A PSD quotient would square it and double the fitted concentrations.
TransmissionSpectrum transmission(const AmplitudeSpectrum& sample, const AmplitudeSpectrum& reference,
                                  double threshold = 0.1);

inline constexpr double kSnrCap = 1.0e12;

/// 1 / sample standard deviation of t inside `window` (capped at kSnrCap).
/// The window must avoid absorption lines; that is not checked.
double snr_100line(const TransmissionSpectrum& t, Interval window);

/// Shot-noise scaling SNR ~ sqrt(E).
double snr_scaling(double snr_ref, double enhancement_ref, double enhancement_new);

/// T(nu) = [exp(-L sum_k c_k alpha_k) * f](nu), convolved on the fine grid
/// with edge replication and interpolated (cubic) onto `grid`.
Eigen::VectorXd model_transmission(const Eigen::VectorXd& concentrations, const ModelContext& ctx, const Axis& grid);

/// Sum of squared residuals over a band and its gradient; the pieces the
/// damped least-squares fit iterates on.
class BandObjective {
 public:
  BandObjective(const TransmissionSpectrum& t, const ModelContext& ctx, Interval band);

  [[nodiscard]] Eigen::Index bins() const noexcept { return target_.size(); }
  [[nodiscard]] const Eigen::VectorXd& wavenumbers() const noexcept { return nu_; }
  [[nodiscard]] const Eigen::VectorXd& target() const noexcept { return target_; }

  /// Model on the fitted bins; `jacobian` (bins x species) when non-null.
  Eigen::VectorXd model(const Eigen::VectorXd& c, Eigen::MatrixXd* jacobian = nullptr) const;
  double value(const Eigen::VectorXd& c) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& c) const;

 private:
  const ModelContext& ctx_;
  Eigen::Index first_ = 0;  // fine-grid sub-range feeding the band
  Eigen::Index last_ = 0;
  Eigen::VectorXd nu_;
  Eigen::VectorXd target_;
};

/// Levenberg-Marquardt fit of the concentrations over `band`.
FitResult fit_concentration(const TransmissionSpectrum& t, const ModelContext& ctx, const Eigen::VectorXd& initial,
                            Interval band, const FitOptions& options = {});

/// `# wavenumber_cm-1 transmission valid` text.
void write_transmission(std::ostream& out, const TransmissionSpectrum& t);
TransmissionSpectrum read_transmission(std::istream& in);

/// Key-value report: species, c, sigma, reduced_chi2, iterations, band.
void write_fit_report(std::ostream& out, const FitResult& fit);
/// `# wavenumber_cm-1 measured model residual` text.
void write_fit_residuals(std::ostream& out, const FitResult& fit);

/// "0.3001(11) %": value in percent, uncertainty in units of the last digits.
std::string percent_with_uncertainty(double value, double sigma);

}  // namespace qfts
