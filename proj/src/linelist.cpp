#include "qfts/linelist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "qfts/faddeeva.hpp"
#include "qfts/textio.hpp"

namespace qfts {

namespace {

constexpr double kBoltzmann = 1.380649e-16;    // erg / K
constexpr double kAtmosphere = 1.01325e6;      // dyn / cm^2
constexpr double kAtomicMass = 1.66053906660e-24;  // g
constexpr double kSpeedOfLight = 2.99792458e10;    // cm / s
constexpr double kReferenceTemperature = 296.0;

// 1-based inclusive column ranges of the retained fields.
struct Columns {
  std::size_t first;
  std::size_t last;
};
constexpr Columns kMolecId{1, 2};
constexpr Columns kIsoId{3, 3};
constexpr Columns kNu{4, 15};
constexpr Columns kSw{16, 25};
constexpr Columns kGammaAir{36, 40};
constexpr Columns kGammaSelf{41, 45};
constexpr Columns kElower{46, 55};
constexpr Columns kNAir{56, 59};
constexpr Columns kDeltaAir{60, 67};

[[noreturn]] void field_error(Columns cols, std::size_t record_index, std::string_view text) {
  throw Error(Errc::FieldParseError, "record " + std::to_string(record_index) + ": columns " +
                                         std::to_string(cols.first) + "-" + std::to_string(cols.last) +
                                         " ('" + std::string(text) + "') are not a number");
}

std::string_view field(std::string_view record, Columns cols) {
  return record.substr(cols.first - 1, cols.last - cols.first + 1);
}

double real_field(std::string_view record, Columns cols, std::size_t record_index) {
  const auto text = field(record, cols);
  double value = 0.0;
  if (!textio::parse_double(text, value) || !std::isfinite(value)) field_error(cols, record_index, text);
  return value;
}

int int_field(std::string_view record, Columns cols, std::size_t record_index) {
  const auto text = textio::trim(field(record, cols));
  if (text.empty()) field_error(cols, record_index, text);
  int value = 0;
  for (char ch : text) {
    if (ch < '0' || ch > '9') field_error(cols, record_index, text);
    value = value * 10 + (ch - '0');
  }
  return value;
}

// HITRAN numbers the 10th and later isotopologues 0, A, B, ...
int iso_field(std::string_view record, std::size_t record_index) {
  const char ch = record[kIsoId.first - 1];
  if (ch == '0') return 10;
  if (ch >= '1' && ch <= '9') return ch - '0';
  if (ch >= 'A' && ch <= 'Z') return 11 + (ch - 'A');
  field_error(kIsoId, record_index, field(record, kIsoId));
}

// Fortran Fw.d: drop the leading zero when the value would not fit.
std::string fortran_fixed(double value, int width, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%*.*f", width, decimals, value);
  std::string text(buf);
  if (static_cast<int>(text.size()) > width) {
    const auto pos = text.find("0.");
    if (pos != std::string::npos) text.erase(pos, 1);
  }
  if (static_cast<int>(text.size()) != width) text.assign(static_cast<std::size_t>(width), '*');
  return text;
}

}  // namespace

void GasConditions::validate() const {
  if (!(temperature > 0.0)) throw Error(Errc::DomainError, "temperature must be positive");
  if (!(pressure > 0.0)) throw Error(Errc::DomainError, "pressure must be positive");
  if (!(self_fraction >= 0.0 && self_fraction <= 1.0)) {
    throw Error(Errc::DomainError, "self-broadening mole fraction must lie in [0, 1]");
  }
}

SpectralLine parse_par_record(std::string_view record, std::size_t record_index) {
  if (record.size() < kParRecordLength) {
    throw Error(Errc::RecordTooShort, "record " + std::to_string(record_index) + " has " +
                                          std::to_string(record.size()) + " characters, need " +
                                          std::to_string(kParRecordLength));
  }
  SpectralLine line;
  line.molec_id = int_field(record, kMolecId, record_index);
  line.local_iso_id = iso_field(record, record_index);
  line.nu0 = real_field(record, kNu, record_index);
  line.sw = real_field(record, kSw, record_index);
  line.gamma_air = real_field(record, kGammaAir, record_index);
  line.gamma_self = real_field(record, kGammaSelf, record_index);
  line.elower = real_field(record, kElower, record_index);
  line.n_air = real_field(record, kNAir, record_index);
  line.delta_air = real_field(record, kDeltaAir, record_index);
  if (!(line.nu0 > 0.0)) field_error(kNu, record_index, field(record, kNu));
  if (line.sw < 0.0) field_error(kSw, record_index, field(record, kSw));
  if (line.gamma_air < 0.0) field_error(kGammaAir, record_index, field(record, kGammaAir));
  if (line.gamma_self < 0.0) field_error(kGammaSelf, record_index, field(record, kGammaSelf));
  return line;
}

std::string format_par_record(const SpectralLine& line) {
  char head[8];
  const char iso = line.local_iso_id == 10  ? '0'
                   : line.local_iso_id > 10 ? static_cast<char>('A' + line.local_iso_id - 11)
                                            : static_cast<char>('0' + line.local_iso_id);
  std::snprintf(head, sizeof head, "%2d%c", line.molec_id, iso);
  char sw[16];
  std::snprintf(sw, sizeof sw, "%10.3E", line.sw);
  std::string out = head;
  out += fortran_fixed(line.nu0, 12, 6);
  out += sw;
  out += std::string(10, ' ');  // Einstein A, not retained
  out += fortran_fixed(line.gamma_air, 5, 4);
  out += fortran_fixed(line.gamma_self, 5, 3);
  out += fortran_fixed(line.elower, 10, 4);
  out += fortran_fixed(line.n_air, 4, 2);
  out += fortran_fixed(line.delta_air, 8, 6);
  out.resize(kParRecordLength, ' ');
  return out;
}

LineList load_linelist(std::istream& source, std::string species_tag) {
  LineList list{std::move(species_tag), {}};
  std::string text;
  std::size_t line_number = 0;
  while (std::getline(source, text)) {
    ++line_number;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (textio::trim(text).empty()) continue;
    list.lines.push_back(parse_par_record(text, line_number));
  }
  if (list.lines.empty()) throw Error(Errc::EmptyLineList, "line list '" + list.species_tag + "' has no records");
  std::stable_sort(list.lines.begin(), list.lines.end(),
                   [](const SpectralLine& a, const SpectralLine& b) { return a.nu0 < b.nu0; });
  return list;
}

LineList load_linelist_file(const std::string& path, std::string species_tag) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open line list '" + path + "'");
  try {
    return load_linelist(in, std::move(species_tag));
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

double isotopologue_mass(int molec_id, int local_iso_id) {
  struct Entry {
    int molec;
    int iso;
    double mass;
  };
  static constexpr Entry table[] = {
      {1, 1, 18.010565}, {1, 2, 20.014811}, {1, 3, 19.014780}, {1, 4, 19.016740},
      {2, 1, 43.989830}, {2, 2, 44.993185}, {2, 3, 45.994076},
      {4, 1, 44.001062}, {4, 2, 44.998096}, {4, 3, 44.998096}, {4, 4, 46.005308},
      {5, 1, 27.994915}, {5, 2, 28.998270}, {5, 3, 29.999161},
      {6, 1, 16.031300}, {6, 2, 17.034655}, {6, 3, 17.037475}, {6, 4, 18.043930},
  };
  for (const auto& e : table) {
    if (e.molec == molec_id && e.iso == local_iso_id) return e.mass;
  }
  throw Error(Errc::DomainError, "no mass tabulated for molecule " + std::to_string(molec_id) + " isotopologue " +
                                     std::to_string(local_iso_id));
}

double number_density(const GasConditions& cond) {
  return cond.pressure * kAtmosphere / (kBoltzmann * cond.temperature);
}

double doppler_hwhm(double nu0, double temperature, double mass_amu) {
  const double mc2 = mass_amu * kAtomicMass * kSpeedOfLight * kSpeedOfLight;
  return nu0 * std::sqrt(2.0 * std::numbers::ln2 * kBoltzmann * temperature / mc2);
}

AbsorptionSpectrum absorption_coefficient(const LineList& list, const Axis& grid, const GasConditions& cond,
                                          const AbsorptionOptions& options) {
  if (list.lines.empty()) throw Error(Errc::EmptyLineList, "line list '" + list.species_tag + "' is empty");
  if (!(grid.step() > 0.0) || grid.size() < 1) throw Error(Errc::GridNotUniform, "absorption grid is not uniform");
  cond.validate();
  if (!(options.cutoff > 0.0)) throw Error(Errc::DomainError, "line cutoff must be positive");

  AbsorptionSpectrum out{grid, Eigen::VectorXd::Zero(grid.size())};
  const double n_tot = number_density(cond);
  const double x_self = options.self_broadening ? cond.self_fraction : 0.0;
  const double t_ratio = kReferenceTemperature / cond.temperature;

  for (const auto& line : list.lines) {
    if (line.sw == 0.0) continue;
    const double center = line.nu0 + (options.pressure_shift ? line.delta_air * cond.pressure : 0.0);
    const auto begin = grid.lower_index(center - options.cutoff);
    const auto end = grid.upper_index(center + options.cutoff);
    if (begin >= end) continue;
    const double gamma_d = doppler_hwhm(line.nu0, cond.temperature, isotopologue_mass(line.molec_id, line.local_iso_id));
    const double gamma_l = std::pow(t_ratio, line.n_air) * cond.pressure *
                           ((1.0 - x_self) * line.gamma_air + x_self * line.gamma_self);
    const double strength = n_tot * line.sw;
    for (auto i = begin; i < end; ++i) {
      out.alpha[i] += strength * voigt_profile(grid[i] - center, gamma_d, gamma_l);
    }
  }
  return out;
}

void write_absorption(std::ostream& out, const AbsorptionSpectrum& spectrum) {
  out << "# wavenumber_cm-1 alpha_cm-1\n";
  for (Eigen::Index i = 0; i < spectrum.grid.size(); ++i) {
    out << textio::format_double(spectrum.grid[i]) << ' ' << textio::format_double(spectrum.alpha[i]) << '\n';
  }
}

}  // namespace qfts
