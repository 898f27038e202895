#pragma once

// Matrix product states in a fixed total-momentum sector.
//
// Site tensors are (left Out, phys Out, right In): the right bond charge is
// the left bond charge plus the level charge, so the left boundary carries 0
// and the right boundary carries the sector P.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qftn/basis_layout.hpp"
#include "qftn/graded_tensor.hpp"
#include "qftn/mpo.hpp"

namespace qftn {

struct MpsState {
  ModeLayout layout;
  std::vector<BlockTensor> sites;
  int center = 0;
  Charge sector = 0;

  int num_sites() const { return static_cast<int>(sites.size()); }
  /// Bond b sits left of site b; b = num_sites() is the right boundary.
  const GradedSpace& bond_space(int b) const;
  int bond_dim(int b) const { return bond_space(b).dim(); }
  int max_bond_dim() const;
  std::vector<int> bond_dims() const;
};

/// Product state with one level per site (levels in layout numbering).
MpsState product_state(const ModeLayout& layout, const std::vector<int>& levels);

/// Random state of bond dimension <= chi0 in sector P, normalized, center 0.
/// Throws std::invalid_argument when P is unreachable.
MpsState random_sector_mps(const ModeLayout& layout, Charge sector, int chi0, std::mt19937_64& rng);

/// Charges reachable at every bond for sector P (empty sets when unreachable).
std::vector<std::vector<Charge>> allowed_bond_charges(const ModeLayout& layout, Charge sector);

/// Two-site split theta(l, p1, p2, r) -> A(l, p1, b) B(b, p2, r). The singular
/// values go into B when absorb_right, else into A.
struct SplitResult {
  BlockTensor a, b;
  std::vector<double> singular_values;  ///< all kept values, unsorted
  double discarded_weight = 0.0;
  double kept_norm = 0.0;
};
SplitResult split_two_site(const BlockTensor& theta, const TruncationPolicy& policy, bool absorb_right);

/// theta = A_i A_{i+1}
BlockTensor merge_two_site(const BlockTensor& a, const BlockTensor& b);

/// Moves the orthogonality center with exact (untruncated) decompositions.
void move_center(MpsState& psi, int site);
/// Left-orthonormalizes sites < center and right-orthonormalizes sites > center.
void canonicalize(MpsState& psi, int center);
/// Right-to-left truncating sweep; leaves the center at 0. Returns the summed
/// discarded weight.
double compress(MpsState& psi, const TruncationPolicy& policy);

/// <a|b>
cplx overlap(const MpsState& a, const MpsState& b);
double norm(const MpsState& psi);
void normalize(MpsState& psi);
/// Multiplies the center tensor by s.
void scale(MpsState& psi, cplx s);

/// Dense vector in the row-major product of site dense orderings (tiny layouts).
Eigen::VectorXcd to_dense(const MpsState& psi);

/// Exact MPS of a dense vector restricted to sector P (tiny layouts); the
/// center ends on the last site.
MpsState mps_from_dense(const ModeLayout& layout, Charge sector, const Eigen::VectorXcd& v);

/// Zip-up application followed by a compressing sweep. The returned state is
/// not normalized; its center is site 0.
MpsState apply_mpo(const MpoOperator& op, const MpsState& psi, const TruncationPolicy& policy,
                   double* discarded = nullptr);

/// <psi|O|psi> / <psi|psi>
cplx expectation(const MpsState& psi, const MpoOperator& op);

/// <H psi|H psi> - E^2 for normalized psi, with H psi built at eps = 1e-10.
double variance(const MpsState& psi, const MpoOperator& h, int chi_max = 100000);

/// Von Neumann entropy (natural log) at bond b, 1 <= b < num_sites.
double bond_entropy(const MpsState& psi, int bond);
/// All inner-bond entropies in one sweep, index b - 1 for bond b.
std::vector<double> bond_entropies(const MpsState& psi);

/// Reduced density matrix of mode k indexed by level (the occupation for k != 0).
Eigen::MatrixXcd single_mode_rdm(const MpsState& psi, int mode_k);

/// Enlarges the bond bases of psi (made right-canonical with center 0) by the
/// right bases of the given states, keeping psi itself unchanged: new
/// directions enter with zero amplitude. Directions with singular weight
/// below eps are dropped and no bond grows past chi_max.
MpsState expand_basis(const MpsState& psi, const std::vector<MpsState>& extra, double eps, int chi_max);

/// Binary checkpoint: magic, version, layout hash, sector, center, then per
/// site the index spaces, block table and raw little-endian doubles.
void save_checkpoint(const MpsState& psi, std::ostream& os);
MpsState load_checkpoint(const ModeLayout& layout, std::istream& is);
void save_checkpoint(const MpsState& psi, const std::string& path);
MpsState load_checkpoint(const ModeLayout& layout, const std::string& path);

}  // namespace qftn
