#include "qfts/pipeline.hpp"

#include <cmath>

namespace qfts {

namespace {

constexpr double kKernelHalfWidths = 5.0;   // ILS kernel spans +-5 FWHM
constexpr double kCorrelationWidths = 4.0;  // noise correlation lags kept
constexpr double kInitialConcentration = 1.0e-3;

double meta_number(const textio::Metadata& meta, const std::string& key) {
  const auto it = meta.find(key);
  double v = 0.0;
  if (it == meta.end() || !textio::parse_double(it->second, v)) {
    throw Error(Errc::IoError, "metadata key '" + key + "' is missing or malformed");
  }
  return v;
}

}  // namespace

Axis opd_axis_from_meta(const textio::Metadata& meta) {
  ScanConfig scan;
  scan.opd_max = meta_number(meta, "scan.opd_max_cm");
  scan.opd_step = meta_number(meta, "scan.opd_step_um") * 1.0e-4;
  return scan.opd_axis();
}

Experiment::Experiment(RunConfig cfg) : cfg_(std::move(cfg)), grid_(cfg_.grid()) {
  cfg_.validate();
  for (const auto& gas : cfg_.gases) lines_.emplace(gas.name, load_linelist_file(gas.linelist_path.string(), gas.name));
}

double Experiment::enhancement() const { return cavity_enhancement(cfg_.cavity); }

GasConditions Experiment::conditions_for(const GasSpec& gas) const {
  GasConditions cond = cfg_.cell;
  cond.self_fraction = gas.concentration;
  return cond;
}

const AbsorptionSpectrum& Experiment::absorption(const std::string& species) const {
  const std::lock_guard lock(cache_mutex_);
  auto& slot = alpha_[species];
  if (!slot) {
    const GasSpec& gas = cfg_.gas(species);
    slot = std::make_unique<AbsorptionSpectrum>(
        absorption_coefficient(lines_.at(species), grid_, conditions_for(gas), cfg_.absorption));
  }
  return *slot;
}

Spectrum Experiment::spdc_density() const {
  return spdc_spectral_density(cfg_.spdc, intracavity_power(cfg_.cavity), grid_);
}

TransmissionCurve Experiment::sample_transmission() const {
  std::vector<AbsorberComponent> mixture;
  for (const auto& gas : cfg_.gases) mixture.push_back({&absorption(gas.name), gas.concentration});
  if (mixture.empty()) return unit_transmission(grid_);
  return roundtrip_transmission(mixture, cfg_.cell_length);
}

RecordPair Experiment::simulate(unsigned threads, std::optional<std::uint64_t> seed) const {
  const Spectrum density = spdc_density();
  SynthesisOptions options;
  options.detection_efficiency = cfg_.detection_efficiency;
  options.threads = threads;
  NoiseConfig noise = cfg_.noise;
  if (seed) noise.rng_seed = *seed;
  noise.stream = 0;
  RecordPair out{synthesize(density, unit_transmission(grid_), cfg_.dispersion, cfg_.scan, noise, cfg_.spdc, options),
                 {}};
  noise.stream = 1;
  out.sample = synthesize(density, sample_transmission(), cfg_.dispersion, cfg_.scan, noise, cfg_.spdc, options);
  out.reference.provenance["record"] = "reference";
  out.sample.provenance["record"] = "sample";
  return out;
}

AmplitudeSpectrum Experiment::spectrum(const Interferogram& ifg) const {
  return analyze(ifg, cfg_.apodization, cfg_.zero_fill);
}

TransmissionSpectrum Experiment::transmission(const AmplitudeSpectrum& sample,
                                              const AmplitudeSpectrum& reference) const {
  return qfts::transmission(sample, reference, cfg_.threshold);
}

double Experiment::snr(const TransmissionSpectrum& t) const { return snr_100line(t, cfg_.snr_window); }

ModelContext Experiment::model_context(const std::vector<std::string>& species, const Axis& opd) const {
  ModelContext ctx;
  ctx.cell_length = cfg_.cell_length;
  for (const auto& name : species) {
    ctx.species.push_back(name);
    ctx.absorbers.push_back(absorption(name));
  }
  const double half_width = kKernelHalfWidths * ils_fwhm(cfg_.apodization, opd.back());
  ctx.ils = ils_kernel(cfg_.apodization, opd, grid_.step(), half_width);
  ctx.validate();
  return ctx;
}

FitResult Experiment::fit(const TransmissionSpectrum& t, const std::string& species) const {
  const GasSpec& gas = cfg_.gas(species);
  const auto band = gas.fit_band ? gas.fit_band : cfg_.fit_band;
  if (!band) throw Error(Errc::ConfigError, "fit." + species + ".band_cm1 is not set");
  const Axis opd = opd_axis_from_meta(t.meta);
  const ModelContext ctx = model_context({species}, opd);

  FitOptions options;
  const double lags = kCorrelationWidths * ils_fwhm(cfg_.apodization, opd.back()) / t.grid.step();
  options.noise_correlation =
      noise_correlation(cfg_.apodization, opd, t.grid.step(), static_cast<Eigen::Index>(std::ceil(lags)));
  if (t.valid_band.contains(cfg_.snr_window)) {
    const double snr_value = snr_100line(t, cfg_.snr_window);
    if (snr_value < kSnrCap) options.noise_sigma = 1.0 / snr_value;
  }

  const Eigen::VectorXd initial = Eigen::VectorXd::Constant(1, kInitialConcentration);
  return fit_concentration(t, ctx, initial, *band, options);
}

}  // namespace qfts
