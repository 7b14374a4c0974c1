#include "qfts/retrieval.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace qfts {

namespace {

// Cubic Lagrange interpolation from the fine model grid onto arbitrary
// wavenumbers, together with the fine-grid index range it reads.
struct FineSampler {
  Eigen::Index first = 0;
  Eigen::Index last = 0;
  std::vector<Eigen::Index> base;  // fine index of the second stencil point
  Eigen::MatrixX4d weights;

  FineSampler(const Axis& fine, const Eigen::VectorXd& nu) : base(static_cast<std::size_t>(nu.size())), weights(nu.size(), 4) {
    first = fine.size();
    for (Eigen::Index b = 0; b < nu.size(); ++b) {
      const double f = (nu[b] - fine.start()) / fine.step();
      auto i0 = static_cast<Eigen::Index>(std::floor(f));
      if (i0 == fine.size() - 1 && f - double(i0) < 1e-9) --i0;
      if (i0 < 1 || i0 + 2 > fine.size() - 1) {
        throw Error(Errc::GridMismatch, "wavenumber " + std::to_string(nu[b]) + " lies outside the model grid");
      }
      const double u = f - double(i0);
      weights(b, 0) = -u * (u - 1.0) * (u - 2.0) / 6.0;
      weights(b, 1) = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
      weights(b, 2) = -(u + 1.0) * u * (u - 2.0) / 2.0;
      weights(b, 3) = (u + 1.0) * u * (u - 1.0) / 6.0;
      base[static_cast<std::size_t>(b)] = i0;
      first = std::min(first, i0 - 1);
      last = std::max(last, i0 + 3);
    }
  }

  // `fine_values` holds samples for fine indices [first, last).
  [[nodiscard]] Eigen::VectorXd sample(const Eigen::VectorXd& fine_values) const {
    Eigen::VectorXd out(weights.rows());
    for (Eigen::Index b = 0; b < weights.rows(); ++b) {
      const Eigen::Index j = base[static_cast<std::size_t>(b)] - 1 - first;
      out[b] = weights.row(b).dot(fine_values.segment<4>(j));
    }
    return out;
  }
};

// exp(-L sum_k c_k alpha_k) at fine indices [lo, hi), edge-replicated.
Eigen::VectorXd transmission_curve(const ModelContext& ctx, const Eigen::VectorXd& c, Eigen::Index lo, Eigen::Index hi) {
  const Eigen::Index n = ctx.grid().size();
  Eigen::VectorXd y(hi - lo);
  for (Eigen::Index i = lo; i < hi; ++i) {
    const Eigen::Index src = std::clamp<Eigen::Index>(i, 0, n - 1);
    double exponent = 0.0;
    for (std::size_t k = 0; k < ctx.absorbers.size(); ++k) {
      exponent += c[static_cast<Eigen::Index>(k)] * ctx.absorbers[k].alpha[src];
    }
    y[i - lo] = std::exp(-ctx.cell_length * exponent);
  }
  return y;
}

// Discrete convolution with the line shape: for y sampled on [first - h,
// last + h) returns the convolved values on [first, last).
Eigen::VectorXd convolve(const Eigen::VectorXd& y, const Eigen::VectorXd& kernel, double step, Eigen::Index count) {
  Eigen::VectorXd out(count);
  const Eigen::Index k = kernel.size();
  for (Eigen::Index j = 0; j < count; ++j) out[j] = step * kernel.dot(y.segment(j, k));
  return out;
}

// Model (and optionally its concentration derivatives) at the sampler's bins.
Eigen::VectorXd evaluate(const ModelContext& ctx, const FineSampler& sampler, const Eigen::VectorXd& c,
                         Eigen::MatrixXd* jacobian) {
  const Eigen::Index h = (ctx.ils.size() - 1) / 2;
  const Eigen::Index lo = sampler.first - h;
  const Eigen::Index hi = sampler.last + h;
  const Eigen::Index count = sampler.last - sampler.first;
  const double step = ctx.grid().step();
  const Eigen::VectorXd y = transmission_curve(ctx, c, lo, hi);
  if (jacobian != nullptr) {
    const auto species = static_cast<Eigen::Index>(ctx.absorbers.size());
    jacobian->resize(static_cast<Eigen::Index>(sampler.base.size()), species);
    const Eigen::Index n = ctx.grid().size();
    for (Eigen::Index k = 0; k < species; ++k) {
      Eigen::VectorXd dy(hi - lo);
      const auto& alpha = ctx.absorbers[static_cast<std::size_t>(k)].alpha;
      for (Eigen::Index i = lo; i < hi; ++i) {
        dy[i - lo] = -ctx.cell_length * alpha[std::clamp<Eigen::Index>(i, 0, n - 1)] * y[i - lo];
      }
      jacobian->col(k) = sampler.sample(convolve(dy, ctx.ils, step, count));
    }
  }
  return sampler.sample(convolve(y, ctx.ils, step, count));
}

double residual_sum(const Eigen::VectorXd& r) { return r.squaredNorm(); }

// R J for a banded Toeplitz correlation R with coefficients rho[0..m].
Eigen::MatrixXd correlate(const Eigen::MatrixXd& j, const Eigen::VectorXd& rho) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(j.rows(), j.cols());
  const Eigen::Index n = j.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    out.row(i) += rho[0] * j.row(i);
    for (Eigen::Index m = 1; m < rho.size(); ++m) {
      if (i + m < n) out.row(i) += rho[m] * j.row(i + m);
      if (i - m >= 0) out.row(i) += rho[m] * j.row(i - m);
    }
  }
  return out;
}

std::string join_doubles(const Eigen::VectorXd& v, int precision) {
  std::string out;
  char buf[48];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v[i]);
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

}  // namespace

void ModelContext::validate() const {
  if (absorbers.empty()) throw Error(Errc::EmptyLineList, "model has no absorbers");
  if (species.size() != absorbers.size()) throw Error(Errc::DomainError, "species names and absorbers differ in count");
  for (const auto& a : absorbers) {
    if (!a.grid.matches(absorbers.front().grid)) throw Error(Errc::GridMismatch, "absorbers use different grids");
  }
  if (!(cell_length > 0.0)) throw Error(Errc::DomainError, "cell length must be positive");
  if (ils.size() % 2 == 0 || ils.size() == 0) throw Error(Errc::DomainError, "line-shape kernel must have odd length");
  if (std::abs(ils.sum() * grid().step() - 1.0) > 1e-9) throw Error(Errc::DomainError, "line-shape kernel is not area-normalised");
  if (ils.size() > grid().size()) {
    throw Error(Errc::KernelWiderThanBand, "line-shape kernel spans more than the model grid");
  }
}

TransmissionSpectrum transmission(const AmplitudeSpectrum& sample, const AmplitudeSpectrum& reference, double threshold) {
  if (!sample.grid.matches(reference.grid) || sample.amplitude.size() != reference.amplitude.size()) {
    throw Error(Errc::GridMismatch, "sample and reference spectra use different grids");
  }
  if (!(threshold > 0.0 && threshold < 1.0)) throw Error(Errc::DomainError, "threshold must lie in (0, 1)");
  Eigen::Index peak = 0;
  const double top = reference.amplitude.maxCoeff(&peak);
  if (!(top > 0.0)) throw Error(Errc::EmptyValidBand, "reference spectrum is empty");
  Eigen::Index lo = peak;
  Eigen::Index hi = peak;
  const double floor = threshold * top;
  while (lo > 0 && reference.amplitude[lo - 1] >= floor) --lo;
  while (hi + 1 < reference.amplitude.size() && reference.amplitude[hi + 1] >= floor) ++hi;
  if (hi <= lo) throw Error(Errc::EmptyValidBand, "reference exceeds the threshold in a single bin only");

  TransmissionSpectrum out;
  out.grid = sample.grid;
  out.valid_band = {sample.grid[lo], sample.grid[hi]};
  out.t = Eigen::VectorXd::Constant(sample.amplitude.size(), std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = lo; i <= hi; ++i) out.t[i] = sample.amplitude[i] / reference.amplitude[i];
  out.meta = reference.meta;
  out.meta["threshold"] = textio::format_double(threshold);
  return out;
}

double snr_100line(const TransmissionSpectrum& t, Interval window) {
  if (!(window.hi > window.lo) || !t.valid_band.contains(window)) {
    throw Error(Errc::WindowOutsideBand, "SNR window lies outside the valid band");
  }
  const auto lo = t.grid.lower_index(window.lo);
  const auto hi = t.grid.upper_index(window.hi);
  if (hi - lo < 2) throw Error(Errc::WindowOutsideBand, "SNR window holds fewer than two bins");
  const Eigen::VectorXd values = t.t.segment(lo, hi - lo);
  const double mean = values.mean();
  const double sigma = std::sqrt((values.array() - mean).square().sum() / double(values.size() - 1));
  if (!(sigma > 0.0)) return kSnrCap;
  return std::min(1.0 / sigma, kSnrCap);
}

double snr_scaling(double snr_ref, double enhancement_ref, double enhancement_new) {
  if (!(snr_ref > 0.0 && enhancement_ref > 0.0 && enhancement_new > 0.0)) {
    throw Error(Errc::DomainError, "SNR and enhancement factors must be positive");
  }
  return snr_ref * std::sqrt(enhancement_new / enhancement_ref);
}

Eigen::VectorXd model_transmission(const Eigen::VectorXd& concentrations, const ModelContext& ctx, const Axis& grid) {
  ctx.validate();
  if (concentrations.size() != static_cast<Eigen::Index>(ctx.absorbers.size())) {
    throw Error(Errc::DomainError, "one concentration per absorber expected");
  }
  if ((concentrations.array() < 0.0).any()) throw Error(Errc::DomainError, "concentrations must be non-negative");
  const FineSampler sampler(ctx.grid(), grid.values());
  return evaluate(ctx, sampler, concentrations, nullptr);
}

BandObjective::BandObjective(const TransmissionSpectrum& t, const ModelContext& ctx, Interval band) : ctx_(ctx) {
  ctx.validate();
  if (!t.valid_band.contains(band)) throw Error(Errc::WindowOutsideBand, "fit band lies outside the valid band");
  std::vector<double> nu;
  std::vector<double> target;
  for (Eigen::Index i = t.grid.lower_index(band.lo); i < t.grid.upper_index(band.hi); ++i) {
    if (!t.valid(i) || !std::isfinite(t.t[i])) continue;
    nu.push_back(t.grid[i]);
    target.push_back(t.t[i]);
  }
  if (nu.size() < 2) throw Error(Errc::WindowOutsideBand, "fit band holds fewer than two bins");
  nu_ = Eigen::Map<Eigen::VectorXd>(nu.data(), static_cast<Eigen::Index>(nu.size()));
  target_ = Eigen::Map<Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
  const FineSampler sampler(ctx.grid(), nu_);
  first_ = sampler.first;
  last_ = sampler.last;
}

Eigen::VectorXd BandObjective::model(const Eigen::VectorXd& c, Eigen::MatrixXd* jacobian) const {
  const FineSampler sampler(ctx_.grid(), nu_);
  return evaluate(ctx_, sampler, c, jacobian);
}

double BandObjective::value(const Eigen::VectorXd& c) const { return residual_sum(target_ - model(c)); }

Eigen::VectorXd BandObjective::gradient(const Eigen::VectorXd& c) const {
  Eigen::MatrixXd jac;
  const Eigen::VectorXd r = target_ - model(c, &jac);
  return -2.0 * jac.transpose() * r;
}

FitResult fit_concentration(const TransmissionSpectrum& t, const ModelContext& ctx, const Eigen::VectorXd& initial,
                            Interval band, const FitOptions& options) {
  const auto p = static_cast<Eigen::Index>(ctx.absorbers.size());
  if (initial.size() != p) throw Error(Errc::DomainError, "one initial concentration per absorber expected");
  if ((initial.array() < 0.0).any()) throw Error(Errc::DomainError, "initial concentrations must be non-negative");
  const BandObjective objective(t, ctx, band);
  const FineSampler sampler(ctx.grid(), objective.wavenumbers());
  const Eigen::VectorXd& target = objective.target();
  const Eigen::Index n = target.size();
  if (n <= p) throw Error(Errc::WindowOutsideBand, "fit band holds too few bins");

  Eigen::VectorXd c = initial;
  Eigen::MatrixXd jac;
  Eigen::VectorXd model = evaluate(ctx, sampler, c, &jac);
  double rss = residual_sum(target - model);
  double lambda = 1e-3;

  FitResult fit;
  fit.species = ctx.species;
  fit.band = band;
  for (int it = 1; it <= options.max_iterations; ++it) {
    fit.iterations = it;
    const Eigen::MatrixXd h = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * (target - model);
    if (!h.allFinite() || (h.diagonal().array() <= 0.0).any()) {
      throw Error(Errc::SingularNormalMatrix, "model does not depend on every concentration in the band");
    }
    Eigen::MatrixXd damped = h;
    damped.diagonal() *= (1.0 + lambda);
    const Eigen::LDLT<Eigen::MatrixXd> solver(damped);
    if (solver.info() != Eigen::Success || !solver.isPositive()) {
      throw Error(Errc::SingularNormalMatrix, "normal matrix is singular");
    }
    const Eigen::VectorXd delta = solver.solve(g);
    const Eigen::VectorXd trial = (c + delta).cwiseMax(0.0);
    Eigen::MatrixXd trial_jac;
    const Eigen::VectorXd trial_model = evaluate(ctx, sampler, trial, &trial_jac);
    const double trial_rss = residual_sum(target - trial_model);
    const double rel_step =
        ((trial - c).array().abs() / c.array().abs().max(std::numeric_limits<double>::min())).maxCoeff();
    if (trial_rss <= rss) {
      c = trial;
      model = trial_model;
      jac = std::move(trial_jac);
      rss = trial_rss;
      lambda = std::max(lambda * 0.1, 1e-12);
      if (rel_step < options.relative_step_tolerance) {
        fit.converged = true;
        break;
      }
    } else {
      lambda *= 10.0;
      if (rel_step < options.relative_step_tolerance || lambda > 1e16) {
        fit.converged = rel_step < options.relative_step_tolerance;
        break;
      }
    }
  }

  const double dof = double(n - p);
  const double s2 = rss / dof;
  const Eigen::MatrixXd h = jac.transpose() * jac;
  const Eigen::LDLT<Eigen::MatrixXd> normal(h);
  if (normal.info() != Eigen::Success || !normal.isPositive()) {
    throw Error(Errc::SingularNormalMatrix, "normal matrix is singular at the solution");
  }
  const Eigen::MatrixXd h_inv = normal.solve(Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd covariance = s2 * h_inv;
  if (options.noise_correlation.size() > 0) {
    const Eigen::MatrixXd meat = jac.transpose() * correlate(jac, options.noise_correlation);
    covariance = s2 * h_inv * meat * h_inv;
  }

  fit.concentrations = c;
  fit.sigmas = covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
  fit.wavenumbers = objective.wavenumbers();
  fit.measured = target;
  fit.model = model;
  fit.residuals = target - model;
  fit.reduced_chi2 = options.noise_sigma > 0.0 ? s2 / (options.noise_sigma * options.noise_sigma) : s2;
  return fit;
}

void write_transmission(std::ostream& out, const TransmissionSpectrum& t) {
  out << "# wavenumber_cm-1 transmission valid\n";
  out << "# valid_band_cm1 = " << textio::format_double(t.valid_band.lo) << ' '
      << textio::format_double(t.valid_band.hi) << '\n';
  for (const auto& [key, value] : t.meta) {
    if (key != "valid_band_cm1") out << "# " << key << " = " << value << '\n';
  }
  for (Eigen::Index i = 0; i < t.grid.size(); ++i) {
    const bool ok = t.valid(i);
    out << textio::format_double(t.grid[i]) << ' ' << (ok ? textio::format_double(t.t[i]) : std::string("nan")) << ' '
        << (ok ? 1 : 0) << '\n';
  }
}

TransmissionSpectrum read_transmission(std::istream& in) {
  TransmissionSpectrum out;
  std::vector<double> nu;
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto text = textio::trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      textio::parse_metadata_line(text, out.meta);
      continue;
    }
    const auto a = text.find(' ');
    const auto b = text.find(' ', a + 1);
    double x = 0.0;
    double v = std::numeric_limits<double>::quiet_NaN();
    const auto value_text = text.substr(a + 1, b - a - 1);
    if (a == std::string_view::npos || b == std::string_view::npos || !textio::parse_double(text.substr(0, a), x) ||
        (value_text != "nan" && !textio::parse_double(value_text, v))) {
      throw Error(Errc::IoError, "transmission line " + std::to_string(line_number) + " is malformed");
    }
    nu.push_back(x);
    values.push_back(v);
  }
  out.grid = Axis::from_samples(nu, Errc::NonUniformAxis);
  out.t = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  const auto band = out.meta.find("valid_band_cm1");
  if (band == out.meta.end()) throw Error(Errc::IoError, "transmission file lacks valid_band_cm1");
  const auto space = band->second.find(' ');
  if (space == std::string::npos || !textio::parse_double(std::string_view(band->second).substr(0, space), out.valid_band.lo) ||
      !textio::parse_double(std::string_view(band->second).substr(space + 1), out.valid_band.hi)) {
    throw Error(Errc::IoError, "valid_band_cm1 is malformed");
  }
  out.meta.erase(band);
  return out;
}

std::string percent_with_uncertainty(double value, double sigma) {
  const double v = 100.0 * value;
  const double s = 100.0 * sigma;
  char buf[64];
  if (!(s > 0.0) || !std::isfinite(s)) {
    std::snprintf(buf, sizeof buf, "%.4g %%", v);
    return buf;
  }
  // Two significant digits of the uncertainty fix the number of decimals.
  const int decimals = std::max(0, 1 - static_cast<int>(std::floor(std::log10(s))));
  const double scale = std::pow(10.0, decimals);
  const auto digits = static_cast<long long>(std::llround(s * scale));
  std::snprintf(buf, sizeof buf, "%.*f(%lld) %%", decimals, v, digits);
  return buf;
}

void write_fit_report(std::ostream& out, const FitResult& fit) {
  char buf[64];
  for (std::size_t k = 0; k < fit.species.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    out << "species = " << fit.species[k] << '\n';
    out << "concentration = " << textio::format_double(fit.concentrations[i]) << '\n';
    out << "sigma = " << textio::format_double(fit.sigmas[i]) << '\n';
    std::snprintf(buf, sizeof buf, "%.4g %% +/- %.4g %%", 100.0 * fit.concentrations[i], 100.0 * fit.sigmas[i]);
    out << "concentration_percent = " << buf << '\n';
    out << "compact = " << percent_with_uncertainty(fit.concentrations[i], fit.sigmas[i]) << '\n';
  }
  out << "reduced_chi2 = " << textio::format_double(fit.reduced_chi2) << '\n';
  out << "iterations = " << fit.iterations << '\n';
  out << "converged = " << (fit.converged ? "true" : "false") << '\n';
  out << "band_cm1 = " << join_doubles(Eigen::Vector2d(fit.band.lo, fit.band.hi), 10) << '\n';
  out << "bins = " << fit.residuals.size() << '\n';
}

void write_fit_residuals(std::ostream& out, const FitResult& fit) {
  out << "# wavenumber_cm-1 measured model residual\n";
  for (Eigen::Index i = 0; i < fit.residuals.size(); ++i) {
    out << textio::format_double(fit.wavenumbers[i]) << ' ' << textio::format_double(fit.measured[i]) << ' '
        << textio::format_double(fit.model[i]) << ' ' << textio::format_double(fit.residuals[i]) << '\n';
  }
}

}  // namespace qfts
