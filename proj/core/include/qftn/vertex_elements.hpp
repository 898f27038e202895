#pragma once

// Single-mode matrix elements of normal-ordered exponentials
//   :exp(i alpha Phi): restricted to one harmonic mode,
// i.e. <n'| exp(z' A^dag) exp(z A) |n> with z = z' = i alpha / sqrt(2 omega L).

#include <Eigen/Dense>

#include "qftn/graded_tensor.hpp"

namespace qftn {

/// Associated Laguerre polynomial L_n^{(a)}(x) by upward recurrence.
double laguerre(int n, int a, double x);

/// <n_bra| exp(z_bra A^dag) exp(z_ket A) |n_ket>, evaluated as the finite sum
/// over intermediate levels.
cplx f_series(int n_bra, int n_ket, cplx z_bra, cplx z_ket);

/// Closed form of f_series at z = z' = i sqrt(rho) (positive alpha):
///   sqrt(min!/max!) i^|dn| rho^(|dn|/2) L_min^(|dn|)(rho).
/// sign < 0 gives the element for -alpha, which picks up (-1)^|dn|.
cplx g_element(int n_bra, int n_ket, double rho, int sign = +1);

struct VertexArg {
  double alpha = 0.0;
  double omega = 1.0;
  double length = 1.0;
  double rho() const { return alpha * alpha / (2.0 * omega * length); }
  int sign() const { return alpha < 0 ? -1 : +1; }
};

/// (cap+1) x (cap+1) matrix M(n', n) = g_element(n', n, rho, sign).
Eigen::MatrixXcd mode_vertex_matrix(int cap, const VertexArg& arg);

/// Three-index tensor (bra level Out, ket level In, transfer Out). Entry
/// (n', n) sits at transfer k (n - n'). The transfer space is
/// {-k cap, ..., k cap} in steps of k (only {0} for k = 0). For k = 0 the
/// level spaces are a single charge-0 sector of dimension cap+1.
BlockTensor mode_vertex_tensor(int k, const VertexArg& arg, int cap);

/// Transfer space of mode k with cap levels, incoming arrow.
GradedSpace transfer_space(int k, int cap, Direction dir = Direction::In);

/// Shift of the compact zero-mode label, |l> -> |l + sign>, truncated to
/// l in [-n_zm, n_zm]. Row index l' + n_zm, column index l + n_zm.
Eigen::MatrixXd zero_mode_shift(int sign, int n_zm);

}  // namespace qftn
