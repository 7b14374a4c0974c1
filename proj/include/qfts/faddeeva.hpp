#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "qfts/error.hpp"

namespace qfts {

namespace detail {

inline constexpr int kWeidemanTerms = 40;

// Expansion coefficients a_1..a_N of Weideman's rational series, from a
// 4N-point DFT of exp(-t^2)(L^2 + t^2) sampled at t = L tan(theta/2).
template <typename Scalar>
const std::array<Scalar, kWeidemanTerms>& weideman_coefficients() {
  static const auto table = [] {
    constexpr int n_terms = kWeidemanTerms;
    constexpr int m = 2 * n_terms;
    constexpr int m2 = 2 * m;
    const double l = std::sqrt(n_terms / std::sqrt(2.0));
    std::array<double, m2> f{};
    // f[0] = 0 corresponds to theta = -pi; f[j] for k = j - m.
    for (int j = 1; j < m2; ++j) {
      const int k = j - m;
      const double t = l * std::tan(k * std::numbers::pi / m2);
      f[j] = std::exp(-t * t) * (l * l + t * t);
    }
    std::array<double, m2> shifted{};
    for (int i = 0; i < m2; ++i) shifted[i] = f[(i + m) % m2];
    std::array<Scalar, kWeidemanTerms> a{};
    for (int n = 1; n <= n_terms; ++n) {
      double re = 0.0;
      for (int i = 0; i < m2; ++i) re += shifted[i] * std::cos(2.0 * std::numbers::pi * n * i / m2);
      a[n - 1] = static_cast<Scalar>(re / m2);
    }
    return a;
  }();
  return table;
}

// Laplace continued fraction i/sqrt(pi) / (z - (1/2)/(z - 1/(z - ...))) with
// `levels` levels, in real arithmetic.
template <typename Scalar>
std::complex<Scalar> laplace_fraction(Scalar x, Scalar y, int levels) {
  Scalar rr = 0;
  Scalar ri = 0;
  for (int k = levels; k >= 1; --k) {
    const Scalar dr = x - rr;
    const Scalar di = y - ri;
    const Scalar f = (Scalar(k) / Scalar(2)) / (dr * dr + di * di);
    rr = f * dr;
    ri = -f * di;
  }
  const Scalar dr = x - rr;
  const Scalar di = y - ri;
  const Scalar f = (Scalar(1) / std::sqrt(std::numbers::pi_v<Scalar>)) / (dr * dr + di * di);
  return {f * di, f * dr};
}

}  // namespace detail

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz) for Im z >= 0.
///
/// Weideman's 40-term rational approximation near the origin and a Laplace
/// continued fraction for |z| >= 15, shortened further out (8 levels, then 4
/// beyond |z| = 40, 2 beyond 200). Relative error of Re w stays below ~1e-10
/// over the upper half plane except where Re w underflows.
template <typename Scalar>
std::complex<Scalar> faddeeva(std::complex<Scalar> z) {
  using C = std::complex<Scalar>;
  const Scalar inv_sqrt_pi = Scalar(1) / std::sqrt(std::numbers::pi_v<Scalar>);
  const Scalar r2 = std::norm(z);
  if (r2 >= Scalar(225)) {
    const int levels = r2 >= Scalar(40000) ? 2 : (r2 >= Scalar(1600) ? 4 : 8);
    return detail::laplace_fraction(z.real(), z.imag(), levels);
  }
  const auto& a = detail::weideman_coefficients<Scalar>();
  const Scalar l = std::sqrt(Scalar(detail::kWeidemanTerms) / std::sqrt(Scalar(2)));
  const C i_z = C(0, 1) * z;
  const C denom = l - i_z;
  const C big_z = (l + i_z) / denom;
  C p(0);
  for (int n = detail::kWeidemanTerms - 1; n >= 0; --n) p = p * big_z + a[n];
  return Scalar(2) * p / (denom * denom) + inv_sqrt_pi / denom;
}

/// Area-normalised Voigt profile (1/cm) at `detuning` for Doppler and
/// Lorentz half widths (HWHM, cm^-1). The pure limits use closed forms.
template <typename Scalar>
Scalar voigt_profile(Scalar detuning, Scalar doppler_hwhm, Scalar lorentz_hwhm) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar ln2 = std::numbers::ln2_v<Scalar>;
  if (doppler_hwhm < Scalar(0) || lorentz_hwhm < Scalar(0)) {
    throw Error(Errc::DomainError, "Voigt widths must be non-negative");
  }
  if (doppler_hwhm == Scalar(0) && lorentz_hwhm == Scalar(0)) {
    throw Error(Errc::DegenerateWidths, "Voigt profile needs a non-zero Doppler or Lorentz width");
  }
  if (doppler_hwhm == Scalar(0)) {
    return lorentz_hwhm / (pi * (detuning * detuning + lorentz_hwhm * lorentz_hwhm));
  }
  const Scalar scale = std::sqrt(ln2) / doppler_hwhm;
  const Scalar x = std::abs(detuning) * scale;
  if (lorentz_hwhm == Scalar(0)) {
    return scale / std::sqrt(pi) * std::exp(-x * x);
  }
  const Scalar y = lorentz_hwhm * scale;
  return scale / std::sqrt(pi) * faddeeva(std::complex<Scalar>(x, y)).real();
}

}  // namespace qfts
