// qfts: simulate, transform, and evaluate SPDC Fourier-transform spectra.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qfts/config.hpp"
#include "qfts/error.hpp"
#include "qfts/pipeline.hpp"

namespace fs = std::filesystem;
using namespace qfts;

namespace {

RunConfig read_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream file(path);
  if (!file) throw Error(Errc::IoError, "cannot open config '" + path + "'");
  std::stringstream text;
  text << file.rdbuf() << '\n';
  for (const auto& o : overrides) text << o << '\n';
  return parse_config(text, fs::path(path).parent_path());
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  return in;
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write '" + path + "'");
  writer(out);
  out.flush();
  if (!out) throw Error(Errc::IoError, "write to '" + path + "' failed");
}

Interval interval_from(const std::vector<double>& v, const char* flag) {
  if (v.size() != 2 || !(v[1] > v[0])) throw Error(Errc::ConfigError, std::string(flag) + " expects 'lo hi' with hi > lo");
  return Interval{v[0], v[1]};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate and analyse cavity-enhanced SPDC Fourier-transform spectra"};
  app.require_subcommand(1);

  // simulate
  std::string config_path;
  std::string out_prefix;
  std::vector<std::string> overrides;
  std::string axis_name = "opd";
  unsigned threads = 1;
  auto* simulate = app.add_subcommand("simulate", "write <out>.ref.ifg and <out>.smp.ifg");
  simulate->add_option("-c,--config", config_path, "run configuration")->required();
  simulate->add_option("-o,--out", out_prefix, "output prefix")->required();
  simulate->add_option("--set", overrides, "extra 'key = value' line (repeatable)");
  simulate->add_option("--axis", axis_name, "abscissa written: opd or displacement")
      ->check(CLI::IsMember({"opd", "displacement"}));
  simulate->add_option("--threads", threads, "noise worker threads")->check(CLI::PositiveNumber);

  // spectrum
  std::string in_path;
  std::string out_path;
  std::string window_kind;
  double window_fwhm_mm = 0.0;
  int zero_fill = 0;
  auto* spectrum = app.add_subcommand("spectrum", "apodize and transform an interferogram");
  spectrum->add_option("-i,--in", in_path, "interferogram file")->required();
  spectrum->add_option("-o,--out", out_path, "spectrum file")->required();
  spectrum->add_option("-c,--config", config_path, "take window settings from a configuration");
  spectrum->add_option("--set", overrides, "extra 'key = value' line (repeatable)");
  spectrum->add_option("--window", window_kind, "gaussian or boxcar")->check(CLI::IsMember({"gaussian", "boxcar"}));
  spectrum->add_option("--fwhm-mm", window_fwhm_mm, "Gaussian window FWHM, mm of OPD")->check(CLI::PositiveNumber);
  spectrum->add_option("--zero-fill", zero_fill, "zero-fill factor")->check(CLI::PositiveNumber);

  // transmit
  std::string sample_path;
  std::string reference_path;
  double threshold = 0.1;
  auto* transmit = app.add_subcommand("transmit", "sample / reference amplitude quotient");
  transmit->add_option("-s,--sample", sample_path, "sample spectrum")->required();
  transmit->add_option("-r,--reference", reference_path, "reference spectrum")->required();
  transmit->add_option("-o,--out", out_path, "transmission file")->required();
  transmit->add_option("--threshold", threshold, "fraction of the reference peak bounding the band")
      ->check(CLI::Range(0.0, 1.0));

  // snr
  std::vector<double> window{3150.0, 3250.0};
  auto* snr = app.add_subcommand("snr", "100 %-line signal-to-noise ratio");
  snr->add_option("-i,--in", in_path, "transmission file")->required();
  snr->add_option("--window", window, "line-free window 'lo hi' in cm^-1")->expected(2);

  // fit
  std::vector<std::string> species;
  std::vector<double> band;
  std::string residual_path;
  auto* fit = app.add_subcommand("fit", "fit concentrations to a transmission spectrum");
  fit->add_option("-c,--config", config_path, "run configuration")->required();
  fit->add_option("-i,--in", in_path, "transmission file")->required();
  fit->add_option("-o,--out", out_path, "fit report (key = value)");
  fit->add_option("--residuals", residual_path, "per-bin measured/model/residual table");
  fit->add_option("--species", species, "species to fit (default: all configured)");
  fit->add_option("--band", band, "fit band 'lo hi' in cm^-1 for every species")->expected(2);
  fit->add_option("--set", overrides, "extra 'key = value' line (repeatable)");

  // absorb
  std::string absorb_species;
  auto* absorb = app.add_subcommand("absorb", "pure-species absorption coefficient on the simulation grid");
  absorb->add_option("-c,--config", config_path, "run configuration")->required();
  absorb->add_option("--species", absorb_species, "configured species")->required();
  absorb->add_option("-o,--out", out_path, "output file")->required();
  absorb->add_option("--set", overrides, "extra 'key = value' line (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*simulate) {
      const Experiment experiment(read_config(config_path, overrides));
      const RecordPair records = experiment.simulate(threads);
      const OpdColumn column = axis_name == "displacement" ? OpdColumn::displacement : OpdColumn::opd;
      write_file(out_prefix + ".ref.ifg", [&](std::ostream& o) { write_interferogram(o, records.reference, column); });
      write_file(out_prefix + ".smp.ifg", [&](std::ostream& o) { write_interferogram(o, records.sample, column); });
    } else if (*spectrum) {
      ApodizationWindow win;
      int zf = 4;
      if (!config_path.empty()) {
        const RunConfig cfg = read_config(config_path, overrides);
        win = cfg.apodization;
        zf = cfg.zero_fill;
      }
      if (!window_kind.empty()) win.kind = window_kind == "boxcar" ? WindowKind::boxcar : WindowKind::gaussian;
      if (window_fwhm_mm > 0.0) win.fwhm = window_fwhm_mm * 0.1;
      if (zero_fill > 0) zf = zero_fill;
      auto in = open_in(in_path);
      const AmplitudeSpectrum result = analyze(read_interferogram(in), win, zf);
      write_file(out_path, [&](std::ostream& o) { write_spectrum(o, result); });
    } else if (*transmit) {
      auto s_in = open_in(sample_path);
      auto r_in = open_in(reference_path);
      const AmplitudeSpectrum s = read_spectrum(s_in);
      const AmplitudeSpectrum r = read_spectrum(r_in);
      const TransmissionSpectrum t = transmission(s, r, threshold);
      write_file(out_path, [&](std::ostream& o) { write_transmission(o, t); });
    } else if (*snr) {
      auto in = open_in(in_path);
      const Interval w = interval_from(window, "--window");
      const double value = snr_100line(read_transmission(in), w);
      std::cout << "snr = " << textio::format_double(value) << '\n'
                << "window_cm1 = " << textio::format_double(w.lo) << ' ' << textio::format_double(w.hi) << '\n';
    } else if (*fit) {
      RunConfig cfg = read_config(config_path, overrides);
      if (!band.empty()) {
        const Interval b = interval_from(band, "--band");
        for (auto& g : cfg.gases) g.fit_band = b;
      }
      if (species.empty()) {
        for (const auto& g : cfg.gases) species.push_back(g.name);
      }
      const Experiment experiment(cfg);
      auto in = open_in(in_path);
      const TransmissionSpectrum t = read_transmission(in);
      std::ostringstream report;
      std::ostringstream residuals;
      for (const auto& name : species) {
        const FitResult result = experiment.fit(t, name);
        std::printf("%s = %s (c = %.4g +- %.4g %%)%s\n", name.c_str(),
                    percent_with_uncertainty(result.concentrations[0], result.sigmas[0]).c_str(),
                    result.concentrations[0] * 100.0, result.sigmas[0] * 100.0,
                    result.converged ? "" : " [not converged]");
        write_fit_report(report, result);
        write_fit_residuals(residuals, result);
      }
      if (!out_path.empty()) write_file(out_path, [&](std::ostream& o) { o << report.str(); });
      if (!residual_path.empty()) write_file(residual_path, [&](std::ostream& o) { o << residuals.str(); });
    } else if (*absorb) {
      const Experiment experiment(read_config(config_path, overrides));
      write_file(out_path, [&](std::ostream& o) { write_absorption(o, experiment.absorption(absorb_species)); });
    }
  } catch (const Error& e) {
    std::cerr << "qfts: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "qfts: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
