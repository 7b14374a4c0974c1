#pragma once

#include <Eigen/Core>

#include <span>
#include <vector>

#include "qfts/axis.hpp"
#include "qfts/linelist.hpp"

namespace qfts {

/// Passive pump build-up cavity around the SPDC crystal.
struct CavityConfig {
  double finesse = 290.0;
  double coupling_efficiency = 0.596;  // folds mode matching and impedance mismatch into one factor
  double pump_power_in = 0.100;        // W

  void validate() const;
};

enum class SpectralShape { gaussian, sinc_squared };

struct SpdcConfig {
  double pump_wavenumber = 1.0e7 / 775.0;      // cm^-1
  double idler_center_wavenumber = 2900.0;     // cm^-1
  double phase_matching_bandwidth = 700.0;     // cm^-1, FWHM of the density
  SpectralShape spectral_shape = SpectralShape::gaussian;
  double base_pair_rate = 1.894e11;            // pairs s^-1 W^-1 of intracavity pump
  double max_visibility = 0.8;

  void validate() const;
};

/// Round-trip amplitude transmission of the idler arm.
struct TransmissionCurve {
  Axis grid;
  Eigen::VectorXd tau_roundtrip;
};

/// One absorber of a gas mixture, by line list.
struct GasComponent {
  LineList lines;
  double concentration = 0.0;  // mole fraction
};

/// One absorber of a gas mixture with its absorption already evaluated.
struct AbsorberComponent {
  const AbsorptionSpectrum* alpha = nullptr;
  double concentration = 0.0;
};

/// Energy conservation of down-conversion: pump = signal + idler.
double idler_wavenumber(double pump_wavenumber, double signal_wavenumber);

/// E = (finesse / pi) * coupling_efficiency.
double cavity_enhancement(const CavityConfig& cfg);

double intracavity_power(const CavityConfig& cfg);

/// Area-normalised spectral shape (1/cm^-1) of the idler emission.
double spdc_shape(const SpdcConfig& cfg, double wavenumber);

/// Pair emission density (pairs s^-1 per cm^-1). Strictly proportional to
/// pump power: the source is modelled in the spontaneous, low-gain regime.
Spectrum spdc_spectral_density(const SpdcConfig& cfg, double pump_intracavity_power, const Axis& grid);

/// Idler optical power (W) carried by a pair-density spectrum.
double idler_power(const Spectrum& density);

/// Interference contrast of the signal light, V = V_max * tau.
double visibility(double tau_roundtrip, const SpdcConfig& cfg);

/// tau(nu) = exp(-sum_k c_k alpha_k(nu) L).
///
/// The idler crosses the cell twice. Per pass the amplitude transmission is
/// exp(-c alpha L / 2) (half the intensity exponent), so the round trip
/// amplitude is exp(-c alpha L): numerically the single-pass intensity
/// Beer-Lambert factor, and the quantity the transmission model fits.
TransmissionCurve roundtrip_transmission(std::span<const AbsorberComponent> mixture, double cell_length);

TransmissionCurve roundtrip_transmission(std::span<const GasComponent> mixture, double cell_length,
                                         const GasConditions& cond, const Axis& grid,
                                         const AbsorptionOptions& options = {});

/// tau == 1 everywhere (reference measurement, cell filled with nitrogen).
TransmissionCurve unit_transmission(const Axis& grid);

}  // namespace qfts
