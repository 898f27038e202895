#pragma once

// Tensor train whose amplitude is 1 exactly when the local momentum transfers
// add up to a target and 0 otherwise.
//
// Two representations are kept. The cyclic one uses K x K permutation slices
// ("plus" tensors) with labels 0..K-1 and the zero transfer at (K-1)/2. The
// pruned one labels every virtual state by its accumulated transfer and keeps
// only charges reachable from the left boundary that can still reach the
// target at the right boundary; every block is a single 1.

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qftn/basis_layout.hpp"
#include "qftn/graded_tensor.hpp"

namespace qftn {

struct Capacity {
  int K = 1;      ///< 1 + 2 sum_j |k_j| n(k_j)
  int bound = 1;  ///< 4 k_max n_max + 1
};

Capacity capacity(const ModeLayout& layout);

/// Allowed local transfers of a mode: {-|k| cap, ..., |k| cap} step |k|; {0} for k = 0.
std::vector<int> transfer_alphabet(int k, int cap);

/// Slice i of the cyclic plus tensor: P_i(beta, alpha) = [beta == (alpha + i) mod K].
Eigen::MatrixXi plus_slice(int i, int K);

/// All slices for the alphabet, keyed by transfer.
std::map<int, Eigen::MatrixXi> plus_tensor(const std::vector<int>& alphabet, int K);

struct DeltaMPS {
  std::vector<int> modes;                     ///< chain order
  std::vector<std::vector<int>> alphabets;    ///< B_j
  std::vector<std::vector<Charge>> bonds;     ///< pruned charges, size modes+1
  std::vector<BlockTensor> tensors;           ///< (left In, transfer In, right Out)
  int K = 1;
  int target = 0;

  int num_sites() const { return static_cast<int>(modes.size()); }
  int bond_dim(int b) const { return static_cast<int>(bonds[b].size()); }
  int max_bond() const;
};

/// modes[j] with caps[j] (cap of the zero mode is irrelevant: alphabet {0}).
DeltaMPS build_delta_mps(const std::vector<int>& modes, const std::vector<int>& caps, int target);
DeltaMPS build_delta_mps(const ModeLayout& layout, int target = 0);

/// Pruned evaluation. Throws when a transfer is not in its alphabet.
int delta_amplitude(const DeltaMPS& d, const std::vector<int>& config);

/// Cyclic evaluation v^T P^(1) ... P^(l) w with v = |z>, w = |z + target>.
int delta_amplitude_cyclic(const DeltaMPS& d, const std::vector<int>& config);

}  // namespace qftn
