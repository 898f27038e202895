#pragma once

// Environments and effective local operators for sweeping algorithms.
//
// Left environments are (bra Out, mpo Out, ket In), right environments are
// (bra In, mpo In, ket Out); in both the bra charge equals the ket charge
// minus the MPO bond charge. Overlap environments drop the MPO leg.

#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "qftn/graded_tensor.hpp"
#include "qftn/mpo.hpp"

namespace qftn {

BlockTensor left_env_boundary();
BlockTensor right_env_boundary(Charge sector);
BlockTensor extend_left(const BlockTensor& env, const BlockTensor& a, const BlockTensor& w);
BlockTensor extend_right(const BlockTensor& env, const BlockTensor& a, const BlockTensor& w);

/// <bra|ket> environments, (bra Out, ket In) on the left, (bra In, ket Out) on the right.
BlockTensor overlap_left_boundary();
BlockTensor overlap_right_boundary(Charge sector);
BlockTensor extend_overlap_left(const BlockTensor& env, const BlockTensor& bra, const BlockTensor& ket);
BlockTensor extend_overlap_right(const BlockTensor& env, const BlockTensor& bra, const BlockTensor& ket);

/// Projection of the ket's local tensor (sites i..i+s-1, given as a merged
/// tensor) onto the bra's local basis.
BlockTensor project_local(const BlockTensor& left_ov, const BlockTensor& ket_local, const BlockTensor& right_ov);

/// Effective operator on one or two neighbouring sites, acting on the packed
/// coefficient vector of the local tensor (left Out, phys Out..., right In).
class LocalOperator {
 public:
  LocalOperator(const BlockTensor& left_env, std::vector<const BlockTensor*> mpo_sites,
                const BlockTensor& right_env, const GradedSpace& left, std::vector<GradedSpace> phys,
                const GradedSpace& right);

  Eigen::Index size() const { return size_; }
  Eigen::VectorXcd pack(const BlockTensor& t) const;
  BlockTensor unpack(const Eigen::VectorXcd& v) const;

  /// y = P H P x with P the projector orthogonal to the added vectors.
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;
  /// Vectors are orthonormalized against the ones already present; returns
  /// false when a vector is (numerically) in their span.
  bool add_orthogonal(const Eigen::VectorXcd& v);
  void project(Eigen::VectorXcd& x) const;
  std::size_t num_orthogonal() const { return ortho_.size(); }

  /// Number of multiply-adds of one application (for cost models).
  double flop_estimate() const { return flops_; }

 private:
  struct Layout {
    std::vector<std::unordered_map<Charge, std::vector<int>>> offsets;  // level j, mid charge -> prefix widths
    std::vector<std::vector<Charge>> phys_charge;
    std::unordered_map<Charge, int> right_dim;
    int width(int j, Charge m) const;
    int sub_offset(int j, Charge m, int n) const;
  };
  using EnvMats = std::vector<std::unordered_map<Charge, Eigen::MatrixXcd>>;  // w -> bra charge -> (bra x ket)

  static EnvMats flatten_env(const BlockTensor& env, std::vector<Charge>& w_charge);
  void build_layout(Charge m, int j);
  void apply_raw(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const;

  GradedSpace left_, right_;
  std::vector<GradedSpace> phys_;
  std::vector<FlatMpoSite> w_;
  std::vector<std::vector<std::pair<int, int>>> wl_range_;  // per site, per wl: [begin, end) in terms
  EnvMats lenv_, renv_;
  std::vector<Charge> lw_charge_, rw_charge_;
  Layout lay_;
  struct Slab {
    Charge q;
    int rows, cols;
    Eigen::Index offset;
  };
  std::vector<Slab> slabs_;
  std::unordered_map<Charge, int> slab_of_;
  Eigen::Index size_ = 0;
  std::vector<Eigen::VectorXcd> ortho_;
  mutable double flops_ = 0.0;
};

}  // namespace qftn
