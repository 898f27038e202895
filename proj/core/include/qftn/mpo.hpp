#pragma once

// Matrix product operators. Site tensors are (left In, bra Out, ket In,
// right Out); the virtual charge is the accumulated (ket - bra) momentum
// transfer. Boundary vectors are folded into the first and last tensors, so
// the outer virtual spaces are one-dimensional.

#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "qftn/graded_tensor.hpp"

namespace qftn {

struct MpoOperator {
  std::vector<BlockTensor> sites;

  int num_sites() const { return static_cast<int>(sites.size()); }
  /// Dimension of bond b (b = 0 .. num_sites), bond b sits left of site b.
  int bond_dim(int b) const;
  int max_bond_dim() const;
  const GradedSpace& bond_space(int b) const;
};

/// Virtual-space direct sum sum_i c_i O_i with the coefficients folded into
/// the first site. Operands must act on identical physical spaces.
MpoOperator mpo_direct_sum(const std::vector<std::pair<cplx, const MpoOperator*>>& terms);

/// Hermitian conjugate (virtual charges are negated).
MpoOperator mpo_adjoint(const MpoOperator& op);

MpoOperator mpo_scaled(MpoOperator op, cplx s);

/// Identity on the given physical spaces (outgoing arrows).
MpoOperator identity_mpo(const std::vector<GradedSpace>& phys);

/// Single-site operator (dense matrix in the site's dense ordering) padded
/// with identities. The matrix must conserve charge.
MpoOperator site_operator_mpo(const std::vector<GradedSpace>& phys, int site,
                              const Eigen::MatrixXcd& op);

/// Dense expansion as a sparse matrix; row = bra, column = ket, each in the
/// row-major product of the per-site dense orderings.
Eigen::SparseMatrix<cplx, Eigen::RowMajor> mpo_to_sparse(const MpoOperator& op);

/// Sparse view of one site tensor used by the contraction kernels.
struct MpoTerm {
  int wl, wr, bra, ket;  ///< flat virtual / flat physical indices
  cplx v;
};

struct FlatMpoSite {
  std::vector<Charge> wl_charge, wr_charge;
  std::vector<MpoTerm> terms;  ///< sorted by (wl, ket)
  int num_wl() const { return static_cast<int>(wl_charge.size()); }
  int num_wr() const { return static_cast<int>(wr_charge.size()); }
};

FlatMpoSite flatten_site(const BlockTensor& w);

}  // namespace qftn
