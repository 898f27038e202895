#include "qftn/krylov.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace qftn {

namespace {

void reorthogonalize(const std::vector<Eigen::VectorXcd>& basis, Eigen::VectorXcd& w) {
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& v : basis) w -= v * v.dot(w);
}

Eigen::MatrixXd tridiagonal(const std::vector<double>& a, const std::vector<double>& b) {
  const int k = static_cast<int>(a.size());
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < k; ++i) {
    t(i, i) = a[i];
    if (i + 1 < k) t(i, i + 1) = t(i + 1, i) = b[i];
  }
  return t;
}

}  // namespace

EigResult lanczos_ground(const LinearMap& h, const Eigen::VectorXcd& x0, const LanczosSettings& s) {
  EigResult res;
  const Eigen::Index n = x0.size();
  if (n == 0) throw std::invalid_argument("lanczos_ground: empty vector");
  Eigen::VectorXcd x = x0;
  if (x.norm() == 0.0) x.setOnes();
  x.normalize();
  if (n == 1) {
    Eigen::VectorXcd y;
    h(x, y);
    res.value = x.dot(y).real();
    res.vector = x;
    res.iterations = 1;
    res.converged = true;
    return res;
  }
  int count = 0;
  while (true) {
    std::vector<Eigen::VectorXcd> basis{x};
    std::vector<double> alpha, beta;
    Eigen::VectorXcd w;
    const int kmax = static_cast<int>(std::min<Eigen::Index>(s.max_basis, n));
    double theta = 0.0, resid = 0.0;
    Eigen::VectorXd y;
    for (int k = 0; k < kmax; ++k) {
      h(basis[k], w);
      ++count;
      const double a = basis[k].dot(w).real();
      alpha.push_back(a);
      w -= a * basis[k];
      if (k > 0) w -= beta[k - 1] * basis[k - 1];
      reorthogonalize(basis, w);
      const double b = w.norm();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(alpha, beta));
      theta = es.eigenvalues()[0];
      y = es.eigenvectors().col(0);
      resid = b * std::abs(y[k]);
      const bool done = resid <= s.tol * std::max(1.0, std::abs(theta)) || b <= 1e-14 * std::max(1.0, std::abs(theta));
      if (done || count >= s.max_iter || k + 1 == kmax) {
        res.converged = done;
        break;
      }
      beta.push_back(b);
      basis.push_back(w / b);
    }
    Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < y.size(); ++i) ritz += y[i] * basis[i];
    ritz.normalize();
    res.value = theta;
    res.vector = ritz;
    res.iterations = count;
    res.residual = resid;
    if (res.converged || count >= s.max_iter) return res;
    x = ritz;
  }
}

namespace {

ExpResult expm_once(const LinearMap& h, const Eigen::VectorXcd& x, std::complex<double> z, double tol, int max_basis) {
  ExpResult res;
  const double b0 = x.norm();
  const Eigen::Index n = x.size();
  if (b0 == 0.0) {
    res.vector = x;
    res.converged = true;
    return res;
  }
  std::vector<Eigen::VectorXcd> basis{x / b0};
  std::vector<double> alpha, beta;
  Eigen::VectorXcd w;
  const int kmax = static_cast<int>(std::min<Eigen::Index>(max_basis, n));
  Eigen::VectorXcd c;
  for (int k = 0; k < kmax; ++k) {
    h(basis[k], w);
    ++res.iterations;
    const double a = basis[k].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[k];
    if (k > 0) w -= beta[k - 1] * basis[k - 1];
    reorthogonalize(basis, w);
    const double b = w.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiagonal(alpha, beta));
    const Eigen::MatrixXd& q = es.eigenvectors();
    Eigen::VectorXcd ev(q.rows());
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev[i] = std::exp(z * es.eigenvalues()[i]) * q(0, i);
    c = q.cast<std::complex<double>>() * ev;
    res.error = b * std::abs(c[k]);
    if (b <= 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()) || res.error <= tol) {
      res.converged = true;
      break;
    }
    if (k + 1 == kmax) break;
    beta.push_back(b);
    basis.push_back(w / b);
  }
  res.vector = Eigen::VectorXcd::Zero(n);
  for (Eigen::Index i = 0; i < c.size(); ++i) res.vector += (b0 * c[i]) * basis[i];
  return res;
}

}  // namespace

ExpResult krylov_expm(const LinearMap& h, const Eigen::VectorXcd& x, std::complex<double> z, double tol, int max_basis) {
  ExpResult r = expm_once(h, x, z, tol, max_basis);
  if (r.converged || x.size() <= max_basis) return r;
  // split the step until each half converges
  int pieces = 2;
  for (int depth = 0; depth < 12; ++depth, pieces *= 2) {
    Eigen::VectorXcd v = x;
    bool ok = true;
    int iters = r.iterations;
    double err = 0.0;
    for (int p = 0; p < pieces && ok; ++p) {
      ExpResult q = expm_once(h, v, z / double(pieces), tol / pieces, max_basis);
      iters += q.iterations;
      err += q.error;
      ok = q.converged;
      v = q.vector;
    }
    if (ok) {
      r.vector = v;
      r.iterations = iters;
      r.error = err;
      r.converged = true;
      return r;
    }
    r.iterations = iters;
  }
  return r;
}

}  // namespace qftn
