#pragma once

// Single-mode Wigner functions, full counting statistics of the field and
// space-averaged trig expectations.

#include <vector>

#include <Eigen/Dense>

#include "qftn/hamiltonian.hpp"
#include "qftn/mps.hpp"

namespace qftn {

struct GridSpec {
  double phi_min = -4.0, phi_max = 4.0;
  double pi_min = -4.0, pi_max = 4.0;
  int phi_points = 101, pi_points = 101;
  int samples = 128;          ///< characteristic-function samples per axis
  double boundary_tol = 1e-8;  ///< |chi| allowed on the edge of the sampled box
};

struct WignerGrid {
  std::vector<double> phi, pi;
  Eigen::MatrixXd values;  ///< values(i, j) = W(phi[i], pi[j])
  double omega = 1.0;
  double u_extent = 0.0, v_extent = 0.0;
};

/// <m| D(alpha) |n> for m, n < dim.
Eigen::MatrixXcd displacement_matrix(int dim, cplx alpha);

/// Tr{rho exp(-i u q - i v p)} for an oscillator of frequency omega.
cplx wigner_characteristic(const Eigen::MatrixXcd& rho, double omega, double u, double v);

/// Throws std::invalid_argument for a non-Hermitian or non-unit-trace rdm and
/// std::domain_error when the sample spacing cannot resolve the state or the
/// requested range (aliasing).
WignerGrid wigner_single_mode(const Eigen::MatrixXcd& rho, double omega, const GridSpec& grid = {});

/// Oscillator frequency of mode k (the Schwinger zero mode oscillates at M).
/// Throws for the compact sine-Gordon zero mode.
double mode_frequency(const ModeLayout& layout, int k, const ModelParams& p);

struct FcsSpec {
  int s_points = 257;         ///< odd, symmetric around s = 0
  double boundary_tol = 1e-8;
  double x_min = -3.0, x_max = 3.0;
  int x_points = 241;
};

struct FcsResult {
  std::vector<double> s;
  std::vector<cplx> chi;  ///< Tr{rho exp(i Phi(0) s)}
  std::vector<double> x;
  std::vector<double> p;  ///< P(phi) on x
  double sigma2_free = 0.0;
  double mean = 0.0;  ///< <Phi> from the slope of chi at 0
};

/// Vacuum variance of Phi(0) carried by the truncated modes, sum 1 / (2 omega_k L).
double free_field_variance(const ModeLayout& layout, const ModelParams& p);

/// Tr{rho exp(i Phi(0) s)} of a zero-momentum state (Schwinger model only).
cplx fcs_characteristic(const MpsState& psi, const ModelParams& p, double s);

/// Full counting statistics of Phi(0). Throws std::invalid_argument for the
/// sine-Gordon model or a state outside sector 0.
FcsResult fcs_field(const MpsState& psi, const ModelParams& p, const FcsSpec& spec = {});

/// Re <(e^{-i theta} V+ +- e^{i theta} V-) / 2 or / (2i)> / L.
double local_trig_expectation(const MpsState& psi, const ModelParams& p, TrigKind kind);

}  // namespace qftn
