#pragma once

// Charge-graded block-sparse complex tensors.
//
// Every index carries a GradedSpace: an ordered list of (charge, degeneracy)
// sectors together with an arrow. A BlockTensor stores one dense row-major
// block per allowed charge assignment; a block is allowed when the incoming
// charges sum to the outgoing charges. Absent blocks are exactly zero.

#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace qftn {

using cplx = std::complex<double>;

/// Momentum quantum number in units of 2*pi/L.
using Charge = int;

enum class Direction : std::uint8_t { In, Out };

constexpr Direction flip(Direction d) {
  return d == Direction::In ? Direction::Out : Direction::In;
}

/// +1 for incoming, -1 for outgoing legs.
constexpr int flux_sign(Direction d) { return d == Direction::In ? 1 : -1; }

struct Sector {
  Charge charge = 0;
  int dim = 1;
  bool operator==(const Sector&) const = default;
};

class GradedSpace {
 public:
  GradedSpace() = default;
  /// Sectors are sorted by charge. Throws on duplicate charges or dims < 1.
  GradedSpace(std::vector<Sector> sectors, Direction dir);

  static GradedSpace trivial(Charge c = 0, Direction dir = Direction::In) {
    return GradedSpace({{c, 1}}, dir);
  }

  const std::vector<Sector>& sectors() const { return sectors_; }
  std::size_t num_sectors() const { return sectors_.size(); }
  Direction direction() const { return dir_; }
  int dim() const { return total_dim_; }

  /// Degeneracy of charge c, 0 when absent.
  int degeneracy(Charge c) const;
  bool contains(Charge c) const { return find(c) >= 0; }
  /// Sector index of charge c or -1.
  int find(Charge c) const;
  /// Offset of sector c in the dense ordering. Throws when absent.
  int offset(Charge c) const;
  int offset_of_sector(std::size_t s) const { return offsets_[s]; }
  std::vector<Charge> charges() const;

  GradedSpace dual() const { return GradedSpace(sectors_, flip(dir_)); }
  GradedSpace with_direction(Direction d) const { return GradedSpace(sectors_, d); }
  bool same_sectors(const GradedSpace& o) const { return sectors_ == o.sectors_; }
  bool operator==(const GradedSpace& o) const {
    return dir_ == o.dir_ && sectors_ == o.sectors_;
  }

 private:
  std::vector<Sector> sectors_;
  std::vector<int> offsets_;
  int total_dim_ = 0;
  Direction dir_ = Direction::In;
};

/// Tensor-product space. Charges of `b` enter negated when its arrow differs
/// from `a`'s. With strip_degeneracy every resulting charge has degeneracy 1.
GradedSpace fuse(const GradedSpace& a, const GradedSpace& b, bool strip_degeneracy = false);

using BlockKey = std::vector<Charge>;

struct Block {
  std::vector<int> shape;
  std::vector<cplx> data;

  std::size_t size() const { return data.size(); }
};

class BlockTensor {
 public:
  BlockTensor() = default;
  explicit BlockTensor(std::vector<GradedSpace> indices);

  std::size_t rank() const { return indices_.size(); }
  const GradedSpace& index(std::size_t i) const { return indices_[i]; }
  const std::vector<GradedSpace>& indices() const { return indices_; }

  const std::map<BlockKey, Block>& blocks() const { return blocks_; }
  std::map<BlockKey, Block>& mutable_blocks() { return blocks_; }
  std::size_t num_blocks() const { return blocks_.size(); }
  std::size_t num_elements() const;

  /// True when `key` names existing sectors and has zero net flux.
  bool allowed(const BlockKey& key) const;
  /// Returns the block for `key`, inserting a zero block when absent.
  Block& block(const BlockKey& key);
  const Block* find(const BlockKey& key) const;
  void erase(const BlockKey& key) { blocks_.erase(key); }
  /// Removes blocks whose max-abs entry is <= tol.
  void prune(double tol = 0.0);

  /// Value of a rank-0 tensor (0 when it has no block).
  cplx scalar() const;

  double norm() const;
  BlockTensor& operator*=(cplx s);
  BlockTensor& operator+=(const BlockTensor& o);
  BlockTensor& operator-=(const BlockTensor& o);
  friend BlockTensor operator*(cplx s, BlockTensor t) { return t *= s; }
  friend BlockTensor operator+(BlockTensor a, const BlockTensor& b) { return a += b; }
  friend BlockTensor operator-(BlockTensor a, const BlockTensor& b) { return a -= b; }

  BlockTensor conj() const;
  BlockTensor permuted(std::span<const int> perm) const;
  BlockTensor permuted(std::initializer_list<int> perm) const {
    return permuted(std::span<const int>(perm.begin(), perm.size()));
  }
  /// Same data with index arrows replaced. Flux must still balance.
  BlockTensor with_directions(std::span<const Direction> dirs) const;

  /// Row-major dense array over the full index dimensions.
  std::vector<cplx> to_dense() const;
  /// Fills every allowed block from a dense row-major array.
  static BlockTensor from_dense(std::vector<GradedSpace> indices, std::span<const cplx> dense);

  /// Max |net flux| over stored blocks; 0 for a well-formed tensor.
  int max_flux_violation() const;

 private:
  std::vector<GradedSpace> indices_;
  std::map<BlockKey, Block> blocks_;
};

/// Contracts index pairs (i of a, j of b). Paired indices must have equal
/// sectors and opposite arrows. Result indices: free of a, then free of b.
BlockTensor contract(const BlockTensor& a, const BlockTensor& b,
                     std::span<const std::pair<int, int>> pairs);

inline BlockTensor contract(const BlockTensor& a, const BlockTensor& b,
                            std::initializer_list<std::pair<int, int>> pairs) {
  return contract(a, b, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
}

/// Complex conjugate with all arrows flipped.
BlockTensor adjoint(const BlockTensor& t);

/// Sum of squared discarded singular values must stay below eps^2 and at most
/// chi_max values survive.
struct TruncationPolicy {
  double eps = 0.0;
  int chi_max = std::numeric_limits<int>::max();
};

struct SvdResult {
  BlockTensor u;  ///< (left indices..., bond out)
  BlockTensor s;  ///< diagonal (bond in, bond out), real entries
  BlockTensor v;  ///< (bond in, right indices...)
  std::map<Charge, std::vector<double>> singular_values;
  double discarded_weight = 0.0;  ///< sqrt of the discarded squared singular values
  double kept_norm = 0.0;         ///< sqrt of the retained squared singular values
  int bond_dim() const;
};

/// Block-wise SVD over the left/right bipartition of the indices, with
/// singular values ranked globally across sectors.
SvdResult svd_truncate(const BlockTensor& t, std::span<const int> left_indices,
                       const TruncationPolicy& policy);

inline SvdResult svd_truncate(const BlockTensor& t, std::initializer_list<int> left,
                              const TruncationPolicy& policy) {
  return svd_truncate(t, std::span<const int>(left.begin(), left.size()), policy);
}

/// Flips the arrow of index `idx` and negates its charges. The stored data
/// and the flux balance are unchanged.
BlockTensor reversed_index(const BlockTensor& t, int idx);

/// Drops index `idx`, which must be one-dimensional with charge 0.
BlockTensor squeeze(const BlockTensor& t, int idx);

/// Multiplies a diagonal (bond in, bond out) tensor into index `idx` of `t`.
BlockTensor scale_index(const BlockTensor& t, int idx, const BlockTensor& diag);

}  // namespace qftn
