#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "qfts/config.hpp"
#include "qfts/fts.hpp"
#include "qfts/interferogram.hpp"
#include "qfts/retrieval.hpp"

namespace qfts {

/// Reference and sample records of one measurement.
struct RecordPair {
  Interferogram reference;
  Interferogram sample;
};

/// The instrument described by a RunConfig: owns the line lists and caches
/// the absorption spectra on the simulation grid.
class Experiment {
 public:
  explicit Experiment(RunConfig cfg);

  [[nodiscard]] const RunConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const Axis& grid() const noexcept { return grid_; }
  [[nodiscard]] double enhancement() const;

  /// Pure-species absorption coefficient (cm^-1) on the simulation grid.
  const AbsorptionSpectrum& absorption(const std::string& species) const;

  [[nodiscard]] Spectrum spdc_density() const;
  [[nodiscard]] TransmissionCurve sample_transmission() const;

  /// Reference (nitrogen, stream 0) and sample (stream 1) records; `seed`
  /// replaces noise.seed when given.
  [[nodiscard]] RecordPair simulate(unsigned threads = 1, std::optional<std::uint64_t> seed = {}) const;

  [[nodiscard]] AmplitudeSpectrum spectrum(const Interferogram& ifg) const;
  [[nodiscard]] TransmissionSpectrum transmission(const AmplitudeSpectrum& sample,
                                                  const AmplitudeSpectrum& reference) const;
  [[nodiscard]] double snr(const TransmissionSpectrum& t) const;

  /// Model pieces for the given species, ILS matched to `t`'s scan.
  [[nodiscard]] ModelContext model_context(const std::vector<std::string>& species, const Axis& opd) const;

  /// Fits one species over its configured band (errors if none is set).
  [[nodiscard]] FitResult fit(const TransmissionSpectrum& t, const std::string& species) const;

 private:
  [[nodiscard]] GasConditions conditions_for(const GasSpec& gas) const;

  RunConfig cfg_;
  Axis grid_;
  std::map<std::string, LineList> lines_;
  mutable std::mutex cache_mutex_;
  mutable std::map<std::string, std::unique_ptr<AbsorptionSpectrum>> alpha_;
};

/// OPD axis described by the scan metadata of a spectrum or transmission.
Axis opd_axis_from_meta(const textio::Metadata& meta);

}  // namespace qfts
