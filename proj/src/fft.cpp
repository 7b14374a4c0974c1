#include "qfts/fft.hpp"

// Eigen's FFT front end on the FFTW back end: kissfft degrades to O(N^2)
// on the large prime factors that odd, zero-filled interferograms produce.
#define EIGEN_FFTW_DEFAULT
#include <unsupported/Eigen/FFT>

#include <mutex>

namespace qfts {

namespace {

// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Eigen::VectorXcd dft(const Eigen::VectorXcd& x) {
  Eigen::VectorXcd out(x.size());
  if (x.size() == 0) return out;
  std::lock_guard lock(planner_mutex());
  Eigen::FFT<double> fft;
  fft.fwd(out, x);
  return out;
}

Eigen::VectorXcd dft(const Eigen::VectorXd& x) { return dft(Eigen::VectorXcd(x.cast<std::complex<double>>())); }

Eigen::VectorXcd idft(const Eigen::VectorXcd& spectrum) {
  Eigen::VectorXcd out(spectrum.size());
  if (spectrum.size() == 0) return out;
  std::lock_guard lock(planner_mutex());
  Eigen::FFT<double> fft;
  fft.inv(out, spectrum);
  return out;
}

}  // namespace qfts
