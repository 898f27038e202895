#pragma once

#include <Eigen/Dense>

namespace qftn::detail {

// m = u * diag(s) * v with u, v having orthonormal columns / rows, s descending.
inline void thin_svd(const Eigen::MatrixXcd& m, Eigen::MatrixXcd& u, Eigen::VectorXd& s,
                     Eigen::MatrixXcd& v) {
  const auto n = std::min(m.rows(), m.cols());
  if (n == 0) {
    u.resize(m.rows(), 0);
    v.resize(0, m.cols());
    s.resize(0);
    return;
  }
  if (n <= 16) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    v = svd.matrixV().adjoint();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    s = svd.singularValues();
    v = svd.matrixV().adjoint();
  }
}

}  // namespace qftn::detail
