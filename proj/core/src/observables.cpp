#include "qftn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qftn/vertex_elements.hpp"

namespace qftn {

namespace {
constexpr double pi = std::numbers::pi;

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return x;
}

// Fourier weights exp(sign i x_a k_i) * dk for a uniform k grid with trapezoid ends
Eigen::MatrixXcd fourier_matrix(const std::vector<double>& x, const std::vector<double>& k, double sign) {
  const double dk = k.size() > 1 ? k[1] - k[0] : 1.0;
  Eigen::MatrixXcd f(x.size(), k.size());
  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t i = 0; i < k.size(); ++i) {
      const double w = (i == 0 || i + 1 == k.size()) ? 0.5 * dk : dk;
      f(a, i) = w * std::exp(cplx(0.0, sign * x[a] * k[i]));
    }
  return f;
}
}  // namespace

Eigen::MatrixXcd displacement_matrix(int dim, cplx alpha) {
  // D = exp(-|a|^2/2) exp(alpha A^dag) exp(-conj(alpha) A)
  const double pre = std::exp(-0.5 * std::norm(alpha));
  Eigen::MatrixXcd d(dim, dim);
  for (int m = 0; m < dim; ++m)
    for (int n = 0; n < dim; ++n) d(m, n) = pre * f_series(m, n, alpha, -std::conj(alpha));
  return d;
}

cplx wigner_characteristic(const Eigen::MatrixXcd& rho, double omega, double u, double v) {
  const cplx alpha(v * std::sqrt(omega / 2.0), -u / std::sqrt(2.0 * omega));
  const Eigen::MatrixXcd d = displacement_matrix(static_cast<int>(rho.rows()), alpha);
  return (rho * d).trace();
}

WignerGrid wigner_single_mode(const Eigen::MatrixXcd& rho, double omega, const GridSpec& g) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("wigner: rdm must be square");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8) throw std::invalid_argument("wigner: rdm not Hermitian");
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw std::invalid_argument("wigner: rdm trace differs from 1");
  if (!(omega > 0.0)) throw std::invalid_argument("wigner: omega must be positive");
  if (g.samples < 8 || g.phi_points < 1 || g.pi_points < 1) throw std::invalid_argument("wigner: grid too small");
  const int dim = static_cast<int>(rho.rows());
  const int n = g.samples;

  // |alpha| radius on the axes of the sampled box; grow until the edge is negligible
  double a0 = 3.0;
  auto edge_max = [&](double a) {
    const double u = a * std::sqrt(2.0 * omega), v = a * std::sqrt(2.0 / omega);
    double m = 0.0;
    for (double t : linspace(-1.0, 1.0, 33)) {
      m = std::max(m, std::abs(wigner_characteristic(rho, omega, u, t * v)));
      m = std::max(m, std::abs(wigner_characteristic(rho, omega, t * u, v)));
    }
    return m;
  };
  while (edge_max(a0) > g.boundary_tol) {
    a0 += 0.5;
    if (a0 > 60.0) throw std::domain_error("wigner: characteristic function does not decay");
  }
  const double umax = a0 * std::sqrt(2.0 * omega), vmax = a0 * std::sqrt(2.0 / omega);
  const auto us = linspace(-umax, umax, n), vs = linspace(-vmax, vmax, n);

  // aliasing: the reconstruction repeats with period 2 pi / du in phi
  const double period_q = 2.0 * pi / (us[1] - us[0]), period_p = 2.0 * pi / (vs[1] - vs[0]);
  const double reach = std::sqrt(2.0 * dim + 1.0) + 3.0;
  const double need_q = std::max({reach / std::sqrt(omega), std::abs(g.phi_min), std::abs(g.phi_max)});
  const double need_p = std::max({reach * std::sqrt(omega), std::abs(g.pi_min), std::abs(g.pi_max)});
  if (2.0 * need_q >= period_q || 2.0 * need_p >= period_p)
    throw std::domain_error("wigner: grid too coarse for the state or the requested range");

  Eigen::MatrixXcd chi(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) chi(i, j) = wigner_characteristic(rho, omega, us[i], vs[j]);

  WignerGrid out;
  out.phi = linspace(g.phi_min, g.phi_max, g.phi_points);
  out.pi = linspace(g.pi_min, g.pi_max, g.pi_points);
  out.omega = omega;
  out.u_extent = umax;
  out.v_extent = vmax;
  const Eigen::MatrixXcd fq = fourier_matrix(out.phi, us, +1.0), fp = fourier_matrix(out.pi, vs, +1.0);
  out.values = (fq * chi * fp.transpose()).real() / (4.0 * pi * pi);
  return out;
}

double mode_frequency(const ModeLayout& layout, int k, const ModelParams& p) {
  if (k == 0 && layout.model() == ModelKind::SineGordon)
    throw std::invalid_argument("mode_frequency: the sine-Gordon zero mode is not an oscillator");
  return dispersion(layout.model(), k, layout.length(), p);
}

double free_field_variance(const ModeLayout& layout, const ModelParams& p) {
  double s = 0.0;
  for (int k = -layout.k_max(); k <= layout.k_max(); ++k) {
    if (k == 0 && layout.model() == ModelKind::SineGordon) continue;
    s += 1.0 / (2.0 * dispersion(layout.model(), k, layout.length(), p) * layout.length());
  }
  return s;
}

cplx fcs_characteristic(const MpsState& psi, const ModelParams& p, double s) {
  const auto& lay = psi.layout;
  if (lay.model() != ModelKind::MassiveSchwinger)
    throw std::invalid_argument("fcs: only defined for the non-compact Schwinger boson");
  if (s == 0.0) return 1.0;
  // e^{i s Phi} = :e^{i s Phi}: e^{-s^2 <Phi^2>_0 / 2}
  const cplx v = expectation(psi, vertex_mpo(lay, s, p)) / lay.length();
  return v * std::exp(-0.5 * s * s * free_field_variance(lay, p));
}

FcsResult fcs_field(const MpsState& psi, const ModelParams& p, const FcsSpec& spec) {
  if (psi.layout.model() != ModelKind::MassiveSchwinger)
    throw std::invalid_argument("fcs: only defined for the non-compact Schwinger boson");
  if (psi.sector != 0) throw std::invalid_argument("fcs: state must lie in sector 0");
  if (spec.s_points < 5 || spec.s_points % 2 == 0) throw std::invalid_argument("fcs: s_points must be odd and >= 5");
  FcsResult out;
  out.sigma2_free = free_field_variance(psi.layout, p);
  double smax = std::sqrt(2.0 * std::log(1.0 / spec.boundary_tol) / out.sigma2_free);
  for (int guard = 0; std::abs(fcs_characteristic(psi, p, smax)) > spec.boundary_tol; ++guard) {
    if (guard > 20) throw std::domain_error("fcs: characteristic function does not decay");
    smax *= 1.25;
  }
  const int half = spec.s_points / 2;
  const double ds = smax / half;
  if (2.0 * std::max(std::abs(spec.x_min), std::abs(spec.x_max)) >= 2.0 * pi / ds)
    throw std::domain_error("fcs: s grid too coarse for the requested range");
  out.s.resize(spec.s_points);
  out.chi.resize(spec.s_points);
  for (int i = 0; i <= half; ++i) {
    const double s = i * ds;
    const cplx c = fcs_characteristic(psi, p, s);
    out.s[half + i] = s;
    out.s[half - i] = -s;
    out.chi[half + i] = c;
    out.chi[half - i] = std::conj(c);
  }
  // Richardson combination of the slopes at h and 2 h
  const double h = 1e-3 / std::sqrt(out.sigma2_free);
  out.mean = (4.0 * fcs_characteristic(psi, p, h).imag() / h - fcs_characteristic(psi, p, 2.0 * h).imag() / (2.0 * h)) / 3.0;
  out.x = linspace(spec.x_min, spec.x_max, spec.x_points);
  const Eigen::MatrixXcd f = fourier_matrix(out.x, out.s, -1.0);
  const Eigen::VectorXcd c = Eigen::Map<const Eigen::VectorXcd>(out.chi.data(), spec.s_points);
  const Eigen::VectorXcd px = f * c / (2.0 * pi);
  out.p.resize(spec.x_points);
  for (int a = 0; a < spec.x_points; ++a) out.p[a] = px[a].real();
  return out;
}

double local_trig_expectation(const MpsState& psi, const ModelParams& p, TrigKind kind) {
  return expectation(psi, trig_mpo(psi.layout, p, kind)).real();
}

}  // namespace qftn
