#include "qftn/graded_tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "qftn/detail/dense.hpp"

namespace qftn {

namespace {

std::size_t product(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

std::vector<std::size_t> row_major_strides(const std::vector<int>& shape) {
  std::vector<std::size_t> st(shape.size(), 1);
  for (int i = static_cast<int>(shape.size()) - 2; i >= 0; --i) st[i] = st[i + 1] * shape[i + 1];
  return st;
}

// out[perm-ordered] = in. Output axis i is input axis perm[i].
Block permute_block(const Block& in, std::span<const int> perm) {
  const std::size_t r = in.shape.size();
  Block out;
  out.shape.resize(r);
  for (std::size_t i = 0; i < r; ++i) out.shape[i] = in.shape[perm[i]];
  out.data.resize(in.data.size());
  if (in.data.empty()) return out;
  bool identity = true;
  for (std::size_t i = 0; i < r; ++i) identity &= perm[i] == static_cast<int>(i);
  if (identity) {
    out.data = in.data;
    return out;
  }
  const auto in_st = row_major_strides(in.shape);
  std::vector<std::size_t> src_st(r);
  for (std::size_t i = 0; i < r; ++i) src_st[i] = in_st[perm[i]];
  // innermost output axis handled in a tight loop
  const std::size_t inner = r ? static_cast<std::size_t>(out.shape[r - 1]) : 1;
  const std::size_t inner_st = r ? src_st[r - 1] : 1;
  std::vector<int> idx(r, 0);
  std::size_t src = 0;
  const std::size_t n = out.data.size();
  for (std::size_t dst = 0; dst < n; dst += inner) {
    for (std::size_t j = 0; j < inner; ++j) out.data[dst + j] = in.data[src + j * inner_st];
    // advance outer multi-index
    for (int ax = static_cast<int>(r) - 2; ax >= 0; --ax) {
      src += src_st[ax];
      if (++idx[ax] < out.shape[ax]) break;
      src -= src_st[ax] * out.shape[ax];
      idx[ax] = 0;
    }
  }
  return out;
}

struct KeyHash {
  std::size_t operator()(const BlockKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (Charge c : k) h = (h ^ static_cast<std::size_t>(c + 0x9e3779b9)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

// ---------------------------------------------------------------- GradedSpace

GradedSpace::GradedSpace(std::vector<Sector> sectors, Direction dir)
    : sectors_(std::move(sectors)), dir_(dir) {
  std::sort(sectors_.begin(), sectors_.end(),
            [](const Sector& a, const Sector& b) { return a.charge < b.charge; });
  offsets_.reserve(sectors_.size());
  for (std::size_t i = 0; i < sectors_.size(); ++i) {
    if (sectors_[i].dim < 1) throw std::invalid_argument("GradedSpace: sector dim < 1");
    if (i && sectors_[i].charge == sectors_[i - 1].charge)
      throw std::invalid_argument("GradedSpace: duplicate charge");
    offsets_.push_back(total_dim_);
    total_dim_ += sectors_[i].dim;
  }
}

int GradedSpace::find(Charge c) const {
  auto it = std::lower_bound(sectors_.begin(), sectors_.end(), c,
                             [](const Sector& s, Charge v) { return s.charge < v; });
  if (it == sectors_.end() || it->charge != c) return -1;
  return static_cast<int>(it - sectors_.begin());
}

int GradedSpace::degeneracy(Charge c) const {
  int i = find(c);
  return i < 0 ? 0 : sectors_[i].dim;
}

int GradedSpace::offset(Charge c) const {
  int i = find(c);
  if (i < 0) throw std::out_of_range("GradedSpace: charge not present");
  return offsets_[i];
}

std::vector<Charge> GradedSpace::charges() const {
  std::vector<Charge> out;
  out.reserve(sectors_.size());
  for (const auto& s : sectors_) out.push_back(s.charge);
  return out;
}

GradedSpace fuse(const GradedSpace& a, const GradedSpace& b, bool strip_degeneracy) {
  const int sb = a.direction() == b.direction() ? 1 : -1;
  std::map<Charge, int> acc;
  for (const auto& x : a.sectors())
    for (const auto& y : b.sectors()) {
      int& d = acc[x.charge + sb * y.charge];
      d = strip_degeneracy ? 1 : d + x.dim * y.dim;
    }
  std::vector<Sector> s;
  s.reserve(acc.size());
  for (auto [c, d] : acc) s.push_back({c, d});
  return GradedSpace(std::move(s), a.direction());
}

// ---------------------------------------------------------------- BlockTensor

BlockTensor::BlockTensor(std::vector<GradedSpace> indices) : indices_(std::move(indices)) {}

std::size_t BlockTensor::num_elements() const {
  std::size_t n = 0;
  for (const auto& [k, b] : blocks_) n += b.data.size();
  return n;
}

bool BlockTensor::allowed(const BlockKey& key) const {
  if (key.size() != indices_.size()) return false;
  long flux = 0;
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (!indices_[i].contains(key[i])) return false;
    flux += flux_sign(indices_[i].direction()) * key[i];
  }
  return flux == 0;
}

Block& BlockTensor::block(const BlockKey& key) {
  auto it = blocks_.find(key);
  if (it != blocks_.end()) return it->second;
  if (!allowed(key)) throw std::invalid_argument("BlockTensor: block key violates flux or sectors");
  Block b;
  b.shape.resize(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) b.shape[i] = indices_[i].degeneracy(key[i]);
  b.data.assign(product(b.shape), cplx{0.0, 0.0});
  return blocks_.emplace(key, std::move(b)).first->second;
}

const Block* BlockTensor::find(const BlockKey& key) const {
  auto it = blocks_.find(key);
  return it == blocks_.end() ? nullptr : &it->second;
}

void BlockTensor::prune(double tol) {
  for (auto it = blocks_.begin(); it != blocks_.end();) {
    double m = 0.0;
    for (const auto& v : it->second.data) m = std::max(m, std::abs(v));
    it = m <= tol ? blocks_.erase(it) : std::next(it);
  }
}

cplx BlockTensor::scalar() const {
  if (!indices_.empty()) throw std::logic_error("BlockTensor::scalar on non-scalar tensor");
  auto it = blocks_.find(BlockKey{});
  return it == blocks_.end() ? cplx{} : it->second.data.at(0);
}

double BlockTensor::norm() const {
  double s = 0.0;
  for (const auto& [k, b] : blocks_)
    for (const auto& v : b.data) s += std::norm(v);
  return std::sqrt(s);
}

BlockTensor& BlockTensor::operator*=(cplx s) {
  for (auto& [k, b] : blocks_)
    for (auto& v : b.data) v *= s;
  return *this;
}

BlockTensor& BlockTensor::operator+=(const BlockTensor& o) {
  if (o.rank() != rank()) throw std::invalid_argument("BlockTensor +=: rank mismatch");
  for (std::size_t i = 0; i < rank(); ++i)
    if (!(indices_[i] == o.indices_[i])) throw std::invalid_argument("BlockTensor +=: index mismatch");
  for (const auto& [k, b] : o.blocks_) {
    Block& mine = block(k);
    for (std::size_t i = 0; i < b.data.size(); ++i) mine.data[i] += b.data[i];
  }
  return *this;
}

BlockTensor& BlockTensor::operator-=(const BlockTensor& o) {
  BlockTensor neg = o;
  neg *= -1.0;
  return *this += neg;
}

BlockTensor BlockTensor::conj() const {
  BlockTensor out = *this;
  for (auto& [k, b] : out.blocks_)
    for (auto& v : b.data) v = std::conj(v);
  return out;
}

BlockTensor BlockTensor::permuted(std::span<const int> perm) const {
  if (perm.size() != rank()) throw std::invalid_argument("permuted: wrong permutation size");
  std::vector<GradedSpace> idx(rank());
  for (std::size_t i = 0; i < rank(); ++i) idx[i] = indices_.at(perm[i]);
  BlockTensor out(std::move(idx));
  for (const auto& [k, b] : blocks_) {
    BlockKey nk(rank());
    for (std::size_t i = 0; i < rank(); ++i) nk[i] = k[perm[i]];
    out.blocks_.emplace(std::move(nk), permute_block(b, perm));
  }
  return out;
}

BlockTensor BlockTensor::with_directions(std::span<const Direction> dirs) const {
  if (dirs.size() != rank()) throw std::invalid_argument("with_directions: size mismatch");
  std::vector<GradedSpace> idx(rank());
  for (std::size_t i = 0; i < rank(); ++i) idx[i] = indices_[i].with_direction(dirs[i]);
  BlockTensor out(std::move(idx));
  for (const auto& [k, b] : blocks_) {
    if (!out.allowed(k)) throw std::invalid_argument("with_directions: flux no longer balances");
    out.blocks_.emplace(k, b);
  }
  return out;
}

std::vector<cplx> BlockTensor::to_dense() const {
  std::vector<int> shape(rank());
  for (std::size_t i = 0; i < rank(); ++i) shape[i] = indices_[i].dim();
  const auto st = row_major_strides(shape);
  std::vector<cplx> out(product(shape), cplx{});
  for (const auto& [k, b] : blocks_) {
    std::size_t base = 0;
    for (std::size_t i = 0; i < rank(); ++i) base += st[i] * indices_[i].offset(k[i]);
    const auto bst = row_major_strides(b.shape);
    for (std::size_t e = 0; e < b.data.size(); ++e) {
      std::size_t rem = e, pos = base;
      for (std::size_t i = 0; i < rank(); ++i) {
        pos += st[i] * (rem / bst[i]);
        rem %= bst[i];
      }
      out[pos] = b.data[e];
    }
  }
  return out;
}

BlockTensor BlockTensor::from_dense(std::vector<GradedSpace> indices, std::span<const cplx> dense) {
  BlockTensor t(std::move(indices));
  const std::size_t r = t.rank();
  std::vector<int> shape(r);
  for (std::size_t i = 0; i < r; ++i) shape[i] = t.indices_[i].dim();
  if (dense.size() != product(shape)) throw std::invalid_argument("from_dense: size mismatch");
  const auto st = row_major_strides(shape);
  // enumerate all sector assignments
  std::vector<std::size_t> sec(r, 0);
  if (r == 0) {
    t.block({}).data[0] = dense[0];
    return t;
  }
  for (bool done = false; !done;) {
    BlockKey key(r);
    for (std::size_t i = 0; i < r; ++i) key[i] = t.indices_[i].sectors()[sec[i]].charge;
    if (t.allowed(key)) {
      Block& b = t.block(key);
      const auto bst = row_major_strides(b.shape);
      std::size_t base = 0;
      for (std::size_t i = 0; i < r; ++i) base += st[i] * t.indices_[i].offset_of_sector(sec[i]);
      for (std::size_t e = 0; e < b.data.size(); ++e) {
        std::size_t rem = e, pos = base;
        for (std::size_t i = 0; i < r; ++i) {
          pos += st[i] * (rem / bst[i]);
          rem %= bst[i];
        }
        b.data[e] = dense[pos];
      }
    }
    for (int i = static_cast<int>(r) - 1; i >= 0; --i) {
      if (++sec[i] < t.indices_[i].num_sectors()) break;
      sec[i] = 0;
      if (i == 0) done = true;
    }
  }
  return t;
}

int BlockTensor::max_flux_violation() const {
  int worst = 0;
  for (const auto& [k, b] : blocks_) {
    int flux = 0;
    for (std::size_t i = 0; i < k.size(); ++i) flux += flux_sign(indices_[i].direction()) * k[i];
    worst = std::max(worst, std::abs(flux));
  }
  return worst;
}

// ------------------------------------------------------------------- contract

BlockTensor contract(const BlockTensor& a, const BlockTensor& b,
                     std::span<const std::pair<int, int>> pairs) {
  const int ra = static_cast<int>(a.rank()), rb = static_cast<int>(b.rank());
  std::vector<char> used_a(ra, 0), used_b(rb, 0);
  for (auto [i, j] : pairs) {
    if (i < 0 || i >= ra || j < 0 || j >= rb || used_a[i] || used_b[j])
      throw std::invalid_argument("contract: bad index pair");
    used_a[i] = used_b[j] = 1;
    if (!a.index(i).same_sectors(b.index(j)) || a.index(i).direction() == b.index(j).direction())
      throw std::invalid_argument("contract: incompatible index pair");
  }
  std::vector<int> free_a, free_b, con_a, con_b;
  for (int i = 0; i < ra; ++i)
    if (!used_a[i]) free_a.push_back(i);
  for (int j = 0; j < rb; ++j)
    if (!used_b[j]) free_b.push_back(j);
  for (auto [i, j] : pairs) {
    con_a.push_back(i);
    con_b.push_back(j);
  }
  std::vector<GradedSpace> out_idx;
  for (int i : free_a) out_idx.push_back(a.index(i));
  for (int j : free_b) out_idx.push_back(b.index(j));
  BlockTensor out(std::move(out_idx));

  std::vector<int> perm_a = free_a, perm_b = con_b;
  perm_a.insert(perm_a.end(), con_a.begin(), con_a.end());
  perm_b.insert(perm_b.end(), free_b.begin(), free_b.end());

  struct Prepared {
    BlockKey free;
    Block mat;
    std::size_t rows, cols;
  };
  // b grouped by contracted charges
  std::unordered_map<BlockKey, std::vector<Prepared>, KeyHash> bgroups;
  for (const auto& [k, blk] : b.blocks()) {
    BlockKey ck(con_b.size()), fk(free_b.size());
    std::size_t rows = 1, cols = 1;
    for (std::size_t t = 0; t < con_b.size(); ++t) {
      ck[t] = k[con_b[t]];
      rows *= blk.shape[con_b[t]];
    }
    for (std::size_t t = 0; t < free_b.size(); ++t) {
      fk[t] = k[free_b[t]];
      cols *= blk.shape[free_b[t]];
    }
    bgroups[ck].push_back({std::move(fk), permute_block(blk, perm_b), rows, cols});
  }

  using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  for (const auto& [k, blk] : a.blocks()) {
    BlockKey ck(con_a.size());
    for (std::size_t t = 0; t < con_a.size(); ++t) ck[t] = k[con_a[t]];
    auto g = bgroups.find(ck);
    if (g == bgroups.end()) continue;
    std::size_t rows = 1, inner = 1;
    BlockKey fk(free_a.size());
    for (std::size_t t = 0; t < free_a.size(); ++t) {
      fk[t] = k[free_a[t]];
      rows *= blk.shape[free_a[t]];
    }
    for (int i : con_a) inner *= blk.shape[i];
    const Block pa = permute_block(blk, perm_a);
    Eigen::Map<const RowMat> A(pa.data.data(), rows, inner);
    for (const auto& pb : g->second) {
      BlockKey rk = fk;
      rk.insert(rk.end(), pb.free.begin(), pb.free.end());
      Block& dst = out.block(rk);
      Eigen::Map<const RowMat> B(pb.mat.data.data(), pb.rows, pb.cols);
      Eigen::Map<RowMat> C(dst.data.data(), rows, pb.cols);
      C.noalias() += A * B;
    }
  }
  return out;
}

BlockTensor adjoint(const BlockTensor& t) {
  std::vector<Direction> dirs(t.rank());
  for (std::size_t i = 0; i < t.rank(); ++i) dirs[i] = flip(t.index(i).direction());
  return t.conj().with_directions(dirs);
}

// ---------------------------------------------------------------------- SVD

int SvdResult::bond_dim() const {
  return u.rank() ? u.index(u.rank() - 1).dim() : 0;
}

SvdResult svd_truncate(const BlockTensor& t, std::span<const int> left_indices,
                       const TruncationPolicy& policy) {
  const int r = static_cast<int>(t.rank());
  std::vector<char> is_left(r, 0);
  for (int i : left_indices) {
    if (i < 0 || i >= r || is_left[i]) throw std::invalid_argument("svd_truncate: bad left indices");
    is_left[i] = 1;
  }
  std::vector<int> left(left_indices.begin(), left_indices.end()), right;
  for (int i = 0; i < r; ++i)
    if (!is_left[i]) right.push_back(i);
  if (t.num_blocks() == 0) throw std::invalid_argument("svd_truncate: empty tensor");

  // group blocks by bond charge = signed flux of the left part
  struct Group {
    std::map<BlockKey, std::pair<int, int>> rows, cols;  // key -> (offset, size)
    int nrows = 0, ncols = 0;
    std::vector<std::pair<const BlockKey*, const Block*>> blocks;
  };
  std::map<Charge, Group> groups;
  for (const auto& [k, blk] : t.blocks()) {
    Charge q = 0;
    BlockKey lk, rk;
    int lsz = 1, rsz = 1;
    for (int i : left) {
      q += flux_sign(t.index(i).direction()) * k[i];
      lk.push_back(k[i]);
      lsz *= blk.shape[i];
    }
    for (int i : right) {
      rk.push_back(k[i]);
      rsz *= blk.shape[i];
    }
    Group& g = groups[q];
    if (!g.rows.count(lk)) {
      g.rows[lk] = {g.nrows, lsz};
      g.nrows += lsz;
    }
    if (!g.cols.count(rk)) {
      g.cols[rk] = {g.ncols, rsz};
      g.ncols += rsz;
    }
    g.blocks.push_back({&k, &blk});
  }

  std::vector<int> perm = left;
  perm.insert(perm.end(), right.begin(), right.end());

  struct Dec {
    Eigen::MatrixXcd u, v;  // u: rows x s, v: s x cols (already V^dagger)
    Eigen::VectorXd s;
  };
  std::map<Charge, Dec> decs;
  std::vector<std::pair<double, Charge>> all;
  double total2 = 0.0;
  for (auto& [q, g] : groups) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(g.nrows, g.ncols);
    for (auto [kp, bp] : g.blocks) {
      BlockKey lk, rk;
      for (int i : left) lk.push_back((*kp)[i]);
      for (int i : right) rk.push_back((*kp)[i]);
      auto [ro, rs] = g.rows[lk];
      auto [co, cs] = g.cols[rk];
      Block pb = permute_block(*bp, perm);
      for (int i = 0; i < rs; ++i)
        for (int j = 0; j < cs; ++j) m(ro + i, co + j) = pb.data[static_cast<std::size_t>(i) * cs + j];
    }
    Dec d;
    detail::thin_svd(m, d.u, d.s, d.v);
    for (Eigen::Index i = 0; i < d.s.size(); ++i) {
      all.push_back({d.s[i], q});
      total2 += d.s[i] * d.s[i];
    }
    decs.emplace(q, std::move(d));
  }

  std::stable_sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  const double smax = all.empty() ? 0.0 : all.front().first;
  const double zero_cut = 1e-14 * smax;
  std::size_t keep = 0;
  {
    // smallest count whose tail obeys eps
    double tail2 = total2;
    const double eps2 = policy.eps * policy.eps;
    while (keep < all.size() && tail2 > eps2) {
      tail2 -= all[keep].first * all[keep].first;
      ++keep;
    }
    keep = std::max<std::size_t>(keep, 1);
    if (policy.chi_max > 0) keep = std::min<std::size_t>(keep, static_cast<std::size_t>(policy.chi_max));
    // ties at the boundary
    while (keep < all.size() && std::abs(all[keep].first - all[keep - 1].first) <= 1e-14 * smax) ++keep;
    // numerical zeros never survive (but keep at least one value)
    while (keep > 1 && all[keep - 1].first <= zero_cut) --keep;
  }
  std::map<Charge, int> kept_count;
  double kept2 = 0.0, disc2 = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (i < keep) {
      ++kept_count[all[i].second];
      kept2 += all[i].first * all[i].first;
    } else {
      disc2 += all[i].first * all[i].first;
    }
  }

  std::vector<Sector> bond_sectors;
  for (auto [q, n] : kept_count) bond_sectors.push_back({q, n});
  GradedSpace bond_out(bond_sectors, Direction::Out), bond_in(bond_sectors, Direction::In);

  std::vector<GradedSpace> uidx, vidx;
  for (int i : left) uidx.push_back(t.index(i));
  uidx.push_back(bond_out);
  vidx.push_back(bond_in);
  for (int i : right) vidx.push_back(t.index(i));

  SvdResult res;
  res.u = BlockTensor(uidx);
  res.v = BlockTensor(vidx);
  res.s = BlockTensor({bond_in, bond_out});
  for (auto [q, n] : kept_count) {
    const Dec& d = decs.at(q);
    const Group& g = groups.at(q);
    auto& sv = res.singular_values[q];
    sv.assign(d.s.data(), d.s.data() + n);
    Block& sb = res.s.block({q, q});
    for (int i = 0; i < n; ++i) sb.data[static_cast<std::size_t>(i) * n + i] = d.s[i];
    for (const auto& [lk, off] : g.rows) {
      BlockKey key = lk;
      key.push_back(q);
      Block& ub = res.u.block(key);
      auto [ro, rs] = off;
      for (int i = 0; i < rs; ++i)
        for (int j = 0; j < n; ++j) ub.data[static_cast<std::size_t>(i) * n + j] = d.u(ro + i, j);
    }
    for (const auto& [rk, off] : g.cols) {
      BlockKey key{q};
      key.insert(key.end(), rk.begin(), rk.end());
      Block& vb = res.v.block(key);
      auto [co, cs] = off;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < cs; ++j) vb.data[static_cast<std::size_t>(i) * cs + j] = d.v(i, co + j);
    }
  }
  res.discarded_weight = std::sqrt(std::max(0.0, disc2));
  res.kept_norm = std::sqrt(kept2);
  return res;
}

BlockTensor scale_index(const BlockTensor& t, int idx, const BlockTensor& diag) {
  BlockTensor out = t;
  std::map<Charge, std::vector<cplx>> d;
  for (const auto& [k, b] : diag.blocks()) {
    auto& v = d[k[0]];
    const int n = b.shape[0];
    v.resize(n);
    for (int i = 0; i < n; ++i) v[i] = b.data[static_cast<std::size_t>(i) * n + i];
  }
  std::vector<BlockKey> dead;
  for (auto& [k, b] : out.mutable_blocks()) {
    auto it = d.find(k[idx]);
    if (it == d.end()) {
      dead.push_back(k);
      continue;
    }
    const auto st = row_major_strides(b.shape);
    const std::size_t s = st[idx];
    const int n = b.shape[idx];
    for (std::size_t e = 0; e < b.data.size(); ++e) b.data[e] *= it->second[(e / s) % n];
  }
  for (const auto& k : dead) out.erase(k);
  return out;
}

BlockTensor reversed_index(const BlockTensor& t, int idx) {
  std::vector<GradedSpace> idx_spaces = t.indices();
  std::vector<Sector> sec;
  for (const auto& s : t.index(idx).sectors()) sec.push_back({-s.charge, s.dim});
  idx_spaces[idx] = GradedSpace(std::move(sec), flip(t.index(idx).direction()));
  BlockTensor out(std::move(idx_spaces));
  for (const auto& [k, b] : t.blocks()) {
    BlockKey nk = k;
    nk[idx] = -nk[idx];
    out.mutable_blocks().emplace(std::move(nk), b);
  }
  return out;
}

BlockTensor squeeze(const BlockTensor& t, int idx) {
  const GradedSpace& g = t.index(idx);
  if (g.dim() != 1 || g.sectors()[0].charge != 0) throw std::invalid_argument("squeeze: index is not trivial");
  std::vector<GradedSpace> sp = t.indices();
  sp.erase(sp.begin() + idx);
  BlockTensor out(std::move(sp));
  for (const auto& [k, b] : t.blocks()) {
    BlockKey nk = k;
    nk.erase(nk.begin() + idx);
    Block nb = b;
    nb.shape.erase(nb.shape.begin() + idx);
    out.mutable_blocks().emplace(std::move(nk), std::move(nb));
  }
  return out;
}

}  // namespace qftn
