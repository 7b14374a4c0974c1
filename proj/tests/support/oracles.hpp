#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's numerical code.

#include <Eigen/Core>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

inline double gaussian(double d, double hwhm) {
  return std::sqrt(kLn2 / kPi) / hwhm * std::exp(-kLn2 * d * d / (hwhm * hwhm));
}

inline double lorentzian(double d, double hwhm) { return hwhm / (kPi * (d * d + hwhm * hwhm)); }

/// (G * L)(d) by adaptive Gauss-Kronrod over the Gaussian's support,
/// split where the Lorentzian peaks so each piece is smooth.
inline double voigt_by_quadrature(double d, double gd, double gl) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double t) { return gaussian(t, gd) * lorentzian(d - t, gl); };
  const double reach = 9.0 * gd;  // exp(-ln2 * 81) ~ 4e-25
  double total = 0.0;
  double lo = -reach;
  const double breaks[] = {std::clamp(d - 3.0 * gl, -reach, reach), std::clamp(d, -reach, reach),
                           std::clamp(d + 3.0 * gl, -reach, reach), reach};
  for (double hi : breaks) {
    if (hi > lo) total += gauss_kronrod<double, 61>::integrate(f, lo, hi, 15, 1e-12);
    lo = std::max(lo, hi);
  }
  return total;
}

/// O(N^2) forward DFT.
inline Eigen::VectorXcd naive_dft(const Eigen::VectorXd& x) {
  const auto n = x.size();
  Eigen::VectorXcd out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto m = (k * j) % n;
      acc += x[j] * std::polar(1.0, -2.0 * kPi * double(m) / double(n));
    }
    out[k] = acc;
  }
  return out;
}

/// sum_k flux_k [1 + v_k cos(2 pi nu_k x + phase_k)] at each x.
inline Eigen::VectorXd cosine_synthesis(const Eigen::VectorXd& nu, const Eigen::VectorXd& flux,
                                        const Eigen::VectorXd& vis, const Eigen::VectorXd& phase,
                                        const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    for (Eigen::Index k = 0; k < nu.size(); ++k) {
      out[j] += flux[k] * (1.0 + vis[k] * std::cos(2.0 * kPi * nu[k] * x[j] + phase[k]));
    }
  }
  return out;
}

/// Builds a 160-column record field by field (blank Einstein-A and tail).
inline std::string par_record(int molec, char iso, const char* nu0, const char* sw, const char* gamma_air,
                              const char* gamma_self, const char* elower, const char* n_air,
                              const char* delta_air) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%2d%c%12s%10s%10s%5s%5s%10s%4s%8s", molec, iso, nu0, sw, "", gamma_air, gamma_self,
                elower, n_air, delta_air);
  std::string rec(buf);
  rec.resize(160, ' ');
  return rec;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path source_dir() { return QFTS_SOURCE_DIR; }

}  // namespace oracle
