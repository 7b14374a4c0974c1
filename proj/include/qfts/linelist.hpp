#pragma once

#include <Eigen/Core>

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qfts/axis.hpp"

namespace qfts {

/// One transition from a HITRAN 2016 `.par` record.
struct SpectralLine {
  int molec_id = 0;
  int local_iso_id = 0;
  double nu0 = 0.0;         // cm^-1
  double sw = 0.0;          // cm^-1 / (molecule cm^-2) at 296 K
  double gamma_air = 0.0;   // HWHM, cm^-1 / atm
  double gamma_self = 0.0;  // HWHM, cm^-1 / atm
  double elower = 0.0;      // cm^-1
  double n_air = 0.0;
  double delta_air = 0.0;   // cm^-1 / atm
};

struct LineList {
  std::string species_tag;
  std::vector<SpectralLine> lines;  // ascending nu0
};

struct GasConditions {
  double temperature = 296.0;  // K
  double pressure = 1.0;       // atm
  double self_fraction = 0.0;  // mole fraction used for self broadening

  void validate() const;
};

struct AbsorptionOptions {
  double cutoff = 25.0;          // cm^-1, line wing cutoff
  bool pressure_shift = true;    // apply delta_air * p
  bool self_broadening = true;   // mix gamma_self by mole fraction; off = gamma_air only
};

/// Pure-species absorption coefficient alpha(nu), cm^-1, such that
/// exp(-c * alpha * L) is the Beer-Lambert intensity transmission at mole
/// fraction c through L cm.
struct AbsorptionSpectrum {
  Axis grid;
  Eigen::VectorXd alpha;
};

inline constexpr std::size_t kParRecordLength = 160;

/// Parses the retained fields of one fixed-width record. `record_index`
/// is only used to label errors.
SpectralLine parse_par_record(std::string_view record, std::size_t record_index = 0);

/// Writes the retained fields back in their fixed-width columns (1-67)
/// using the HITRAN Fortran edit descriptors, padded to 160 characters.
std::string format_par_record(const SpectralLine& line);

/// Reads all non-blank records; errors carry 1-based line numbers.
LineList load_linelist(std::istream& source, std::string species_tag);
LineList load_linelist_file(const std::string& path, std::string species_tag);

/// Molecular mass (atomic mass units) for a HITRAN (molec_id, local_iso_id).
double isotopologue_mass(int molec_id, int local_iso_id);

/// Total number density p/(k_B T) in molecule/cm^3.
double number_density(const GasConditions& cond);

/// Doppler HWHM, cm^-1.
double doppler_hwhm(double nu0, double temperature, double mass_amu);

/// Line-by-line Voigt sum on `grid`. Lines are visited in list order for
/// every grid point, so results do not depend on how the grid is chunked.
AbsorptionSpectrum absorption_coefficient(const LineList& list, const Axis& grid, const GasConditions& cond,
                                          const AbsorptionOptions& options = {});

/// Two-column text, header `# wavenumber_cm-1 alpha_cm-1`.
void write_absorption(std::ostream& out, const AbsorptionSpectrum& spectrum);

}  // namespace qfts
