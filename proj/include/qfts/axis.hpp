#pragma once

#include <Eigen/Core>

#include <cmath>
#include <span>
#include <string>

#include "qfts/error.hpp"

namespace qfts {

/// Uniformly sampled axis `start + i * step`, i = 0 .. size-1.
///
/// Used both for wavenumber grids (cm^-1) and optical path difference axes
/// (cm). Storage is three numbers; sample values are generated on demand so
/// that every consumer sees exactly the same abscissae.
template <typename Scalar>
class UniformAxis {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  UniformAxis() = default;
  UniformAxis(Scalar start, Scalar step, Eigen::Index size) : start_(start), step_(step), size_(size) {
    if (!(step > Scalar(0)) || size < 1 || !std::isfinite(start)) {
      throw Error(Errc::GridNotUniform, "axis needs a positive step and at least one sample");
    }
  }

  /// Samples `lo, lo + step, ...` up to and including `hi` (within 1e-9 step).
  static UniformAxis from_range(Scalar lo, Scalar hi, Scalar step) {
    if (!(hi >= lo)) throw Error(Errc::GridNotUniform, "axis range is empty");
    const auto n = static_cast<Eigen::Index>(std::floor((hi - lo) / step + Scalar(1e-9))) + 1;
    return UniformAxis(lo, step, n);
  }

  /// Validates that `samples` are strictly increasing with a constant step
  /// (relative tolerance `rtol` of the step) and returns the matching axis.
  static UniformAxis from_samples(std::span<const Scalar> samples, Errc on_failure, Scalar rtol = Scalar(1e-6)) {
    if (samples.size() < 2) throw Error(on_failure, "axis needs at least two samples");
    const auto n = static_cast<Eigen::Index>(samples.size());
    const Scalar step = (samples.back() - samples.front()) / Scalar(n - 1);
    if (!(step > Scalar(0))) throw Error(on_failure, "axis is not strictly increasing");
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar expected = samples.front() + step * Scalar(i);
      if (std::abs(samples[static_cast<std::size_t>(i)] - expected) > rtol * step) {
        throw Error(on_failure, "axis sample " + std::to_string(i) + " departs from a uniform step");
      }
    }
    return UniformAxis(samples.front(), step, n);
  }

  [[nodiscard]] Scalar start() const noexcept { return start_; }
  [[nodiscard]] Scalar step() const noexcept { return step_; }
  [[nodiscard]] Eigen::Index size() const noexcept { return size_; }
  [[nodiscard]] Scalar back() const noexcept { return (*this)[size_ - 1]; }
  [[nodiscard]] Scalar operator[](Eigen::Index i) const noexcept { return start_ + step_ * Scalar(i); }

  [[nodiscard]] Vector values() const {
    Vector v(size_);
    for (Eigen::Index i = 0; i < size_; ++i) v[i] = (*this)[i];
    return v;
  }

  /// Index of the first sample >= x, clamped to [0, size].
  [[nodiscard]] Eigen::Index lower_index(Scalar x) const noexcept {
    const Scalar f = std::ceil((x - start_) / step_ - Scalar(1e-9));
    if (f <= Scalar(0)) return 0;
    if (f >= Scalar(size_)) return size_;
    return static_cast<Eigen::Index>(f);
  }

  /// Index one past the last sample <= x, clamped to [0, size].
  [[nodiscard]] Eigen::Index upper_index(Scalar x) const noexcept {
    const Scalar f = std::floor((x - start_) / step_ + Scalar(1e-9)) + Scalar(1);
    if (f <= Scalar(0)) return 0;
    if (f >= Scalar(size_)) return size_;
    return static_cast<Eigen::Index>(f);
  }

  /// Same sample positions within `rtol` of the step.
  [[nodiscard]] bool matches(const UniformAxis& other, Scalar rtol = Scalar(1e-9)) const noexcept {
    return size_ == other.size_ && std::abs(step_ - other.step_) <= rtol * step_ &&
           std::abs(start_ - other.start_) <= rtol * step_ &&
           std::abs(back() - other.back()) <= Scalar(1e-6) * step_;
  }

 private:
  Scalar start_ = Scalar(0);
  Scalar step_ = Scalar(1);
  Eigen::Index size_ = 0;
};

using Axis = UniformAxis<double>;

/// Values on a uniform wavenumber grid.
template <typename Scalar>
struct SampledSpectrum {
  UniformAxis<Scalar> grid;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;
};

using Spectrum = SampledSpectrum<double>;

/// Closed wavenumber (or OPD) interval.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  [[nodiscard]] bool contains(double x) const noexcept { return x >= lo && x <= hi; }
  [[nodiscard]] bool contains(const Interval& other) const noexcept { return other.lo >= lo && other.hi <= hi; }
  [[nodiscard]] double width() const noexcept { return hi - lo; }
};

}  // namespace qfts
