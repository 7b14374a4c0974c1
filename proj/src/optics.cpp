#include "qfts/optics.hpp"

#include <cmath>
#include <numbers>

namespace qfts {

namespace {

constexpr double kPlanck = 6.62607015e-34;         // J s
constexpr double kSpeedOfLightCm = 2.99792458e10;  // cm / s

// sinc^2(x) = (sin x / x)^2 drops to one half at x = 1.3915573...
constexpr double kSincHalfPoint = 1.39155737723;

}  // namespace

void CavityConfig::validate() const {
  if (!(finesse >= 1.0)) throw Error(Errc::DomainError, "cavity finesse must be >= 1");
  if (!(coupling_efficiency > 0.0 && coupling_efficiency <= 1.0)) {
    throw Error(Errc::DomainError, "cavity coupling efficiency must lie in (0, 1]");
  }
  if (!(pump_power_in >= 0.0)) throw Error(Errc::DomainError, "pump power must be non-negative");
}

void SpdcConfig::validate() const {
  if (!(idler_center_wavenumber > 0.0 && idler_center_wavenumber < pump_wavenumber)) {
    throw Error(Errc::DomainError, "idler centre must lie between 0 and the pump wavenumber");
  }
  if (!(phase_matching_bandwidth > 0.0)) throw Error(Errc::DomainError, "phase-matching bandwidth must be positive");
  if (!(base_pair_rate > 0.0)) throw Error(Errc::DomainError, "base pair rate must be positive");
  if (!(max_visibility > 0.0 && max_visibility <= 1.0)) {
    throw Error(Errc::DomainError, "maximum visibility must lie in (0, 1]");
  }
}

double idler_wavenumber(double pump_wavenumber, double signal_wavenumber) {
  if (!(signal_wavenumber > 0.0 && signal_wavenumber < pump_wavenumber)) {
    throw Error(Errc::DomainError, "signal wavenumber must lie strictly between 0 and the pump wavenumber");
  }
  return pump_wavenumber - signal_wavenumber;
}

double cavity_enhancement(const CavityConfig& cfg) {
  cfg.validate();
  return cfg.finesse / std::numbers::pi * cfg.coupling_efficiency;
}

double intracavity_power(const CavityConfig& cfg) { return cavity_enhancement(cfg) * cfg.pump_power_in; }

double spdc_shape(const SpdcConfig& cfg, double wavenumber) {
  const double d = wavenumber - cfg.idler_center_wavenumber;
  const double fwhm = cfg.phase_matching_bandwidth;
  switch (cfg.spectral_shape) {
    case SpectralShape::gaussian: {
      const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
      return std::exp(-0.5 * d * d / (sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
    }
    case SpectralShape::sinc_squared: {
      const double a = 2.0 * kSincHalfPoint / fwhm;
      const double x = a * d;
      const double s = x == 0.0 ? 1.0 : std::sin(x) / x;
      return a / std::numbers::pi * s * s;
    }
  }
  return 0.0;
}

Spectrum spdc_spectral_density(const SpdcConfig& cfg, double pump_intracavity_power, const Axis& grid) {
  cfg.validate();
  if (!(pump_intracavity_power >= 0.0)) throw Error(Errc::DomainError, "pump power must be non-negative");
  Eigen::VectorXd shape(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) shape[i] = spdc_shape(cfg, grid[i]);
  const double covered = shape.sum() * grid.step();
  if (!(covered >= 0.999)) {
    throw Error(Errc::GridOutsideSupport, "grid holds only " + std::to_string(100.0 * covered) +
                                              " % of the emission spectrum, need 99.9 %");
  }
  return Spectrum{grid, (cfg.base_pair_rate * pump_intracavity_power) * shape};
}

double idler_power(const Spectrum& density) {
  double energy_rate = 0.0;
  for (Eigen::Index i = 0; i < density.grid.size(); ++i) energy_rate += density.values[i] * density.grid[i];
  return energy_rate * density.grid.step() * kPlanck * kSpeedOfLightCm;
}

double visibility(double tau_roundtrip, const SpdcConfig& cfg) {
  if (!(tau_roundtrip >= 0.0 && tau_roundtrip <= 1.0)) {
    throw Error(Errc::DomainError, "amplitude transmission must lie in [0, 1]");
  }
  return cfg.max_visibility * tau_roundtrip;
}

TransmissionCurve roundtrip_transmission(std::span<const AbsorberComponent> mixture, double cell_length) {
  if (mixture.empty()) throw Error(Errc::EmptyLineList, "mixture has no components");
  if (!(cell_length > 0.0)) throw Error(Errc::DomainError, "cell length must be positive");
  double total = 0.0;
  const Axis& grid = mixture.front().alpha->grid;
  Eigen::VectorXd exponent = Eigen::VectorXd::Zero(grid.size());
  for (const auto& component : mixture) {
    if (!(component.concentration >= 0.0)) throw Error(Errc::DomainError, "concentrations must be non-negative");
    if (!component.alpha->grid.matches(grid)) throw Error(Errc::GridMismatch, "absorbers use different grids");
    total += component.concentration;
    exponent += component.concentration * component.alpha->alpha;
  }
  if (total > 1.0 + 1e-12) throw Error(Errc::DomainError, "concentrations sum above 1");
  return TransmissionCurve{grid, (-cell_length * exponent).array().exp().matrix()};
}

TransmissionCurve roundtrip_transmission(std::span<const GasComponent> mixture, double cell_length,
                                         const GasConditions& cond, const Axis& grid,
                                         const AbsorptionOptions& options) {
  std::vector<AbsorptionSpectrum> alphas;
  alphas.reserve(mixture.size());
  std::vector<AbsorberComponent> absorbers;
  for (const auto& component : mixture) {
    GasConditions own = cond;
    own.self_fraction = component.concentration;
    alphas.push_back(absorption_coefficient(component.lines, grid, own, options));
  }
  for (std::size_t k = 0; k < mixture.size(); ++k) absorbers.push_back({&alphas[k], mixture[k].concentration});
  return roundtrip_transmission(absorbers, cell_length);
}

TransmissionCurve unit_transmission(const Axis& grid) { return {grid, Eigen::VectorXd::Ones(grid.size())}; }

}  // namespace qfts
