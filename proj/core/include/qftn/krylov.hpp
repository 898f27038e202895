#pragma once

// Krylov-space solvers on packed local vectors.

#include <functional>

#include <Eigen/Dense>

namespace qftn {

using LinearMap = std::function<void(const Eigen::VectorXcd&, Eigen::VectorXcd&)>;

struct LanczosSettings {
  double tol = 1e-10;   ///< relative residual
  int max_iter = 200;   ///< total matrix-vector products
  int max_basis = 40;   ///< restart length
};

struct EigResult {
  double value = 0.0;
  Eigen::VectorXcd vector;
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Lowest eigenpair of a Hermitian map, seeded with x0.
EigResult lanczos_ground(const LinearMap& h, const Eigen::VectorXcd& x0, const LanczosSettings& s = {});

struct ExpResult {
  Eigen::VectorXcd vector;
  int iterations = 0;
  double error = 0.0;
  bool converged = false;
};

/// exp(z H) x for Hermitian H and complex z (z = -i dt for real time).
ExpResult krylov_expm(const LinearMap& h, const Eigen::VectorXcd& x, std::complex<double> z,
                      double tol = 1e-10, int max_basis = 60);

}  // namespace qftn
