#pragma once

#include <Eigen/Core>

namespace qfts {

/// Forward DFT, X_k = sum_n x_n exp(-2 pi i k n / N), any length N.
Eigen::VectorXcd dft(const Eigen::VectorXcd& x);
Eigen::VectorXcd dft(const Eigen::VectorXd& x);

/// Inverse DFT including the 1/N factor.
Eigen::VectorXcd idft(const Eigen::VectorXcd& spectrum);

}  // namespace qfts
