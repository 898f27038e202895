#include "qftn/mps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>

#include "qftn/effective.hpp"

namespace qftn {

const GradedSpace& MpsState::bond_space(int b) const {
  if (b < 0 || b > num_sites()) throw std::out_of_range("MpsState::bond_space");
  return b < num_sites() ? sites[b].index(0) : sites.back().index(2);
}

int MpsState::max_bond_dim() const {
  int m = 0;
  for (int b = 0; b <= num_sites(); ++b) m = std::max(m, bond_dim(b));
  return m;
}

std::vector<int> MpsState::bond_dims() const {
  std::vector<int> d;
  for (int b = 0; b <= num_sites(); ++b) d.push_back(bond_dim(b));
  return d;
}

MpsState product_state(const ModeLayout& layout, const std::vector<int>& levels) {
  if (static_cast<int>(levels.size()) != layout.num_sites()) throw std::invalid_argument("product_state: wrong length");
  MpsState psi;
  psi.layout = layout;
  Charge q = 0;
  for (int s = 0; s < layout.num_sites(); ++s) {
    const GradedSpace& ps = layout.space(s);
    if (levels[s] < 0 || levels[s] >= layout.local_dim(s)) throw std::invalid_argument("product_state: level out of range");
    const Charge c = layout.level_charge(s, levels[s]);
    BlockTensor t({GradedSpace::trivial(q, Direction::Out), ps, GradedSpace::trivial(q + c, Direction::In)});
    t.block({q, c, q + c}).data[layout.dense_position(s, levels[s]) - ps.offset(c)] = 1.0;
    psi.sites.push_back(std::move(t));
    q += c;
  }
  psi.sector = q;
  psi.center = 0;
  return psi;
}

std::vector<std::vector<Charge>> allowed_bond_charges(const ModeLayout& layout, Charge sector) {
  const int n = layout.num_sites();
  std::vector<std::set<Charge>> fwd(n + 1), bwd(n + 1);
  fwd[0] = {0};
  for (int s = 0; s < n; ++s)
    for (Charge q : fwd[s])
      for (Charge c : layout.space(s).charges()) fwd[s + 1].insert(q + c);
  bwd[n] = {sector};
  for (int s = n - 1; s >= 0; --s)
    for (Charge q : bwd[s + 1])
      for (Charge c : layout.space(s).charges()) bwd[s].insert(q - c);
  std::vector<std::vector<Charge>> out(n + 1);
  for (int b = 0; b <= n; ++b)
    std::set_intersection(fwd[b].begin(), fwd[b].end(), bwd[b].begin(), bwd[b].end(), std::back_inserter(out[b]));
  return out;
}

MpsState random_sector_mps(const ModeLayout& layout, Charge sector, int chi0, std::mt19937_64& rng) {
  if (chi0 < 1) throw std::invalid_argument("random_sector_mps: chi0 < 1");
  const auto bonds = allowed_bond_charges(layout, sector);
  for (const auto& b : bonds)
    if (b.empty()) throw std::invalid_argument("random_sector_mps: sector is unreachable");
  std::normal_distribution<double> g;
  MpsState psi;
  psi.layout = layout;
  psi.sector = sector;
  auto space = [](const std::vector<Charge>& cs, Direction d) {
    std::vector<Sector> s;
    for (Charge c : cs) s.push_back({c, 1});
    return GradedSpace(std::move(s), d);
  };
  for (int s = 0; s < layout.num_sites(); ++s) {
    BlockTensor t({space(bonds[s], Direction::Out), layout.space(s), space(bonds[s + 1], Direction::In)});
    for (Charge ql : bonds[s])
      for (Charge c : layout.space(s).charges()) {
        if (!std::binary_search(bonds[s + 1].begin(), bonds[s + 1].end(), ql + c)) continue;
        for (auto& v : t.block({ql, c, ql + c}).data) v = {g(rng), g(rng)};
      }
    psi.sites.push_back(std::move(t));
  }
  psi.center = psi.num_sites() - 1;
  compress(psi, {0.0, chi0});
  normalize(psi);
  return psi;
}

SplitResult split_two_site(const BlockTensor& theta, const TruncationPolicy& policy, bool absorb_right) {
  SvdResult r = svd_truncate(theta, {0, 1}, policy);
  SplitResult out;
  if (absorb_right) {
    out.a = reversed_index(r.u, 2);
    out.b = reversed_index(scale_index(r.v, 0, r.s), 0);
  } else {
    out.a = reversed_index(scale_index(r.u, 2, r.s), 2);
    out.b = reversed_index(r.v, 0);
  }
  for (const auto& [q, v] : r.singular_values) out.singular_values.insert(out.singular_values.end(), v.begin(), v.end());
  out.discarded_weight = r.discarded_weight;
  out.kept_norm = r.kept_norm;
  return out;
}

BlockTensor merge_two_site(const BlockTensor& a, const BlockTensor& b) { return contract(a, b, {{2, 0}}); }

namespace {

// moves the center from s to s + 1
void shift_right(MpsState& psi, int s, const TruncationPolicy& pol = {}) {
  SvdResult r = svd_truncate(psi.sites[s], {0, 1}, pol);
  psi.sites[s] = reversed_index(r.u, 2);
  auto carry = reversed_index(scale_index(r.v, 0, r.s), 0);
  psi.sites[s + 1] = contract(carry, psi.sites[s + 1], {{1, 0}});
}

double shift_left(MpsState& psi, int s, const TruncationPolicy& pol = {}) {
  SvdResult r = svd_truncate(psi.sites[s], {0}, pol);
  psi.sites[s] = reversed_index(r.v, 0);
  auto carry = reversed_index(scale_index(r.u, 1, r.s), 1);
  psi.sites[s - 1] = contract(psi.sites[s - 1], carry, {{2, 0}});
  return r.discarded_weight;
}

}  // namespace

void move_center(MpsState& psi, int site) {
  if (site < 0 || site >= psi.num_sites()) throw std::out_of_range("move_center");
  while (psi.center < site) {
    shift_right(psi, psi.center);
    ++psi.center;
  }
  while (psi.center > site) {
    shift_left(psi, psi.center);
    --psi.center;
  }
}

void canonicalize(MpsState& psi, int center) {
  const int n = psi.num_sites();
  for (int s = 0; s < center; ++s) shift_right(psi, s);
  for (int s = n - 1; s > center; --s) shift_left(psi, s);
  psi.center = center;
}

double compress(MpsState& psi, const TruncationPolicy& policy) {
  move_center(psi, psi.num_sites() - 1);
  double d2 = 0.0;
  for (int s = psi.num_sites() - 1; s > 0; --s) {
    const double d = shift_left(psi, s, policy);
    d2 += d * d;
  }
  psi.center = 0;
  return std::sqrt(d2);
}

cplx overlap(const MpsState& a, const MpsState& b) {
  if (a.num_sites() != b.num_sites()) throw std::invalid_argument("overlap: site count mismatch");
  if (a.sector != b.sector) return 0.0;
  BlockTensor e = overlap_left_boundary();
  for (int s = 0; s < a.num_sites(); ++s) e = extend_overlap_left(e, a.sites[s], b.sites[s]);
  const Block* blk = e.find({a.sector, a.sector});
  return blk ? blk->data[0] : cplx{};
}

double norm(const MpsState& psi) { return psi.sites[psi.center].norm(); }

void normalize(MpsState& psi) {
  const double n = norm(psi);
  if (n == 0.0) throw std::runtime_error("normalize: zero state");
  psi.sites[psi.center] *= 1.0 / n;
}

void scale(MpsState& psi, cplx s) { psi.sites[psi.center] *= s; }

Eigen::VectorXcd to_dense(const MpsState& psi) {
  BlockTensor t = squeeze(psi.sites[0], 0);
  for (int s = 1; s < psi.num_sites(); ++s) t = contract(t, psi.sites[s], {{static_cast<int>(t.rank()) - 1, 0}});
  const auto d = t.to_dense();
  return Eigen::Map<const Eigen::VectorXcd>(d.data(), static_cast<Eigen::Index>(d.size()));
}

MpsState mps_from_dense(const ModeLayout& layout, Charge sector, const Eigen::VectorXcd& v) {
  const int n = layout.num_sites();
  std::vector<GradedSpace> idx{GradedSpace::trivial(0, Direction::Out)};
  for (int s = 0; s < n; ++s) idx.push_back(layout.space(s));
  idx.push_back(GradedSpace::trivial(sector, Direction::In));
  BlockTensor rest = BlockTensor::from_dense(idx, std::span<const cplx>(v.data(), static_cast<std::size_t>(v.size())));
  MpsState psi;
  psi.layout = layout;
  psi.sector = sector;
  for (int s = 0; s + 1 < n; ++s) {
    SvdResult r = svd_truncate(rest, {0, 1}, {});
    psi.sites.push_back(reversed_index(r.u, 2));
    rest = reversed_index(scale_index(r.v, 0, r.s), 0);
  }
  psi.sites.push_back(std::move(rest));
  psi.center = n - 1;
  return psi;
}

MpsState apply_mpo(const MpoOperator& op, const MpsState& psi_in, const TruncationPolicy& policy, double* discarded) {
  const int n = psi_in.num_sites();
  if (op.num_sites() != n) throw std::invalid_argument("apply_mpo: layout mismatch");
  for (int s = 0; s < n; ++s)
    if (!op.sites[s].index(2).same_sectors(psi_in.sites[s].index(1)))
      throw std::invalid_argument("apply_mpo: physical spaces differ");
  MpsState psi = psi_in;
  move_center(psi, 0);
  MpsState out;
  out.layout = psi.layout;
  out.sector = psi.sector;
  out.sites.resize(n);
  double d2 = 0.0;
  BlockTensor carry;  // (new bond Out, old bond In, mpo bond Out)
  for (int s = 0; s < n; ++s) {
    BlockTensor t;
    if (s == 0) {
      t = contract(psi.sites[0], op.sites[0], {{1, 2}});  // al, ar, wl, wbra, wr
      t = squeeze(t, 2).permuted({0, 2, 1, 3});
    } else {
      t = contract(carry, psi.sites[s], {{1, 0}});      // b, wr, p, r
      t = contract(t, op.sites[s], {{1, 0}, {2, 2}});  // b, r, wbra, wr
      t = t.permuted({0, 2, 1, 3});
    }
    if (s == n - 1) {
      out.sites[s] = squeeze(t, 3);
      break;
    }
    SvdResult r = svd_truncate(t, {0, 1}, policy);
    d2 += r.discarded_weight * r.discarded_weight;
    out.sites[s] = reversed_index(r.u, 2);
    carry = reversed_index(scale_index(r.v, 0, r.s), 0);
  }
  out.center = n - 1;
  const double c = compress(out, policy);
  d2 += c * c;
  if (discarded) *discarded = std::sqrt(d2);
  return out;
}

cplx expectation(const MpsState& psi, const MpoOperator& op) {
  BlockTensor e = left_env_boundary();
  for (int s = 0; s < psi.num_sites(); ++s) e = extend_left(e, psi.sites[s], op.sites[s]);
  const Block* blk = e.find({psi.sector, 0, psi.sector});
  const double n = norm(psi);
  return blk ? blk->data[0] / (n * n) : cplx{};
}

double variance(const MpsState& psi, const MpoOperator& h, int chi_max) {
  const double n2 = std::pow(norm(psi), 2);
  const double e = expectation(psi, h).real();
  MpsState hp = apply_mpo(h, psi, {1e-10, chi_max});
  const double hh = overlap(hp, hp).real() / n2;
  const double ph = overlap(psi, hp).real() / n2;
  return hh - 2.0 * e * ph + e * e;
}

namespace {

double entropy_of(const std::vector<double>& sv) {
  double tot = 0.0;
  for (double s : sv) tot += s * s;
  double h = 0.0;
  for (double s : sv) {
    const double p = s * s / tot;
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

}  // namespace

std::vector<double> bond_entropies(const MpsState& psi_in) {
  MpsState psi = psi_in;
  move_center(psi, 0);
  std::vector<double> out;
  for (int s = 0; s + 1 < psi.num_sites(); ++s) {
    SvdResult r = svd_truncate(psi.sites[s], {0, 1}, {});
    std::vector<double> sv;
    for (const auto& [q, v] : r.singular_values) sv.insert(sv.end(), v.begin(), v.end());
    out.push_back(entropy_of(sv));
    psi.sites[s] = reversed_index(r.u, 2);
    psi.sites[s + 1] = contract(reversed_index(scale_index(r.v, 0, r.s), 0), psi.sites[s + 1], {{1, 0}});
  }
  return out;
}

double bond_entropy(const MpsState& psi_in, int bond) {
  if (bond < 1 || bond >= psi_in.num_sites()) throw std::out_of_range("bond_entropy");
  MpsState psi = psi_in;
  move_center(psi, bond - 1);
  SvdResult r = svd_truncate(psi.sites[bond - 1], {0, 1}, {});
  std::vector<double> sv;
  for (const auto& [q, v] : r.singular_values) sv.insert(sv.end(), v.begin(), v.end());
  return entropy_of(sv);
}

Eigen::MatrixXcd single_mode_rdm(const MpsState& psi_in, int mode_k) {
  MpsState psi = psi_in;
  const int site = psi.layout.site_of(mode_k);
  move_center(psi, site);
  const BlockTensor& a = psi.sites[site];
  const auto rho = contract(a, adjoint(a), {{0, 0}, {2, 2}}).to_dense();  // (ket, bra)
  const int d = a.index(1).dim();
  // dense positions run against the occupation for k < 0
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const int pi = psi.layout.dense_position(site, i), pj = psi.layout.dense_position(site, j);
      m(i, j) = rho[static_cast<std::size_t>(pi) * d + pj];
    }
  m /= m.trace().real();
  return 0.5 * (m + m.adjoint());
}

// --- basis expansion --------------------------------------------------------

namespace {

// column layout of a (left | phys, right) matricization at left charge q
struct Cols {
  std::vector<std::pair<Charge, int>> parts;  // phys charge, offset
  int n = 0;
};

Cols columns(const GradedSpace& phys, const GradedSpace& right, Charge q) {
  Cols c;
  for (const auto& s : phys.sectors()) {
    const int dr = right.degeneracy(q + s.charge);
    if (dr == 0) continue;
    c.parts.push_back({s.charge, c.n});
    c.n += s.dim * dr;
  }
  return c;
}

Eigen::MatrixXcd rows_of(const BlockTensor& t, Charge q, const Cols& cols) {
  const int nr = t.index(0).degeneracy(q);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(nr, cols.n);
  if (nr == 0) return m;
  for (auto [c, off] : cols.parts) {
    const Block* b = t.find({q, c, q + c});
    if (!b) continue;
    const int w = b->shape[1] * b->shape[2];
    for (int i = 0; i < nr; ++i)
      for (int j = 0; j < w; ++j) m(i, off + j) = b->data[static_cast<std::size_t>(i) * w + j];
  }
  return m;
}

// copies t with index `idx` replaced by a larger space holding the old sectors
BlockTensor pad_index(const BlockTensor& t, int idx, const GradedSpace& bigger) {
  std::vector<GradedSpace> sp = t.indices();
  sp[idx] = bigger;
  BlockTensor out(std::move(sp));
  for (const auto& [k, b] : t.blocks()) {
    Block& nb = out.block(k);
    std::size_t outer = 1, inner = 1;
    for (int i = 0; i < idx; ++i) outer *= b.shape[i];
    for (std::size_t i = idx + 1; i < b.shape.size(); ++i) inner *= b.shape[i];
    const std::size_t oldd = b.shape[idx], newd = nb.shape[idx];
    for (std::size_t o = 0; o < outer; ++o)
      std::copy_n(b.data.begin() + o * oldd * inner, oldd * inner, nb.data.begin() + o * newd * inner);
  }
  return out;
}

}  // namespace

MpsState expand_basis(const MpsState& psi_in, const std::vector<MpsState>& extra, double eps, int chi_max) {
  MpsState psi = psi_in;
  move_center(psi, 0);
  const int n = psi.num_sites();
  std::vector<MpsState> ks;
  for (const auto& k : extra) {
    if (k.sector != psi.sector) continue;
    MpsState c = k;
    move_center(c, n - 1);
    if (norm(c) == 0.0) continue;
    normalize(c);
    ks.push_back(std::move(c));
  }
  std::vector<BlockTensor> ro(ks.size(), overlap_right_boundary(psi.sector));
  for (int s = n - 1; s >= 1; --s) {
    const BlockTensor& b = psi.sites[s];
    const GradedSpace& phys = b.index(1);
    const GradedSpace& right = b.index(2);
    std::vector<BlockTensor> proj;
    std::set<Charge> qs;
    for (const auto& sec : b.index(0).sectors()) qs.insert(sec.charge);
    for (std::size_t j = 0; j < ks.size(); ++j) {
      proj.push_back(contract(ks[j].sites[s], ro[j], {{2, 1}}));  // kl, p, psi right
      for (const auto& sec : proj.back().index(0).sectors()) qs.insert(sec.charge);
    }
    struct Cand {
      double s;
      Charge q;
      Eigen::VectorXcd row;
    };
    std::vector<Cand> cand;
    std::map<Charge, Eigen::MatrixXcd> old_rows;
    std::map<Charge, Cols> layout;
    for (Charge q : qs) {
      Cols cols = columns(phys, right, q);
      if (cols.n == 0) continue;
      Eigen::MatrixXcd bm = rows_of(b, q, cols);
      Eigen::MatrixXcd mm(0, cols.n);
      for (const auto& p : proj) {
        Eigen::MatrixXcd r = rows_of(p, q, cols);
        if (r.rows() == 0) continue;
        Eigen::MatrixXcd t(mm.rows() + r.rows(), cols.n);
        t << mm, r;
        mm = std::move(t);
      }
      if (mm.rows() > 0) {
        if (bm.rows() > 0) mm -= (mm * bm.adjoint()) * bm;
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(mm, Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        for (Eigen::Index i = 0; i < sv.size(); ++i)
          if (sv[i] > eps) cand.push_back({sv[i], q, svd.matrixV().col(i).conjugate()});
      }
      old_rows.emplace(q, std::move(bm));
      layout.emplace(q, std::move(cols));
    }
    std::stable_sort(cand.begin(), cand.end(), [](const Cand& x, const Cand& y) { return x.s > y.s; });
    const int room = std::max(0, chi_max - b.index(0).dim());
    if (static_cast<int>(cand.size()) > room) cand.resize(room);
    std::map<Charge, std::vector<const Eigen::VectorXcd*>> added;
    for (const auto& c : cand) added[c.q].push_back(&c.row);

    // new rows are orthonormalized against the old ones and each other
    std::vector<Sector> secs;
    std::map<Charge, Eigen::MatrixXcd> new_rows;
    for (auto& [q, bm] : old_rows) {
      Eigen::MatrixXcd rows = bm;
      auto it = added.find(q);
      if (it != added.end()) {
        for (const auto* v : it->second) {
          Eigen::RowVectorXcd r = v->transpose();
          for (int pass = 0; pass < 2; ++pass)
            if (rows.rows() > 0) r -= (r * rows.adjoint()) * rows;
          const double nr = r.norm();
          if (nr < 1e-8) continue;
          Eigen::MatrixXcd t(rows.rows() + 1, rows.cols());
          t << rows, r / nr;
          rows = std::move(t);
        }
      }
      if (rows.rows() == 0) continue;
      secs.push_back({q, static_cast<int>(rows.rows())});
      new_rows.emplace(q, std::move(rows));
    }
    GradedSpace left(secs, Direction::Out);
    BlockTensor nb({left, phys, right});
    for (const auto& [q, rows] : new_rows) {
      const Cols& cols = layout.at(q);
      for (auto [c, off] : cols.parts) {
        Block& blk = nb.block({q, c, q + c});
        const int w = blk.shape[1] * blk.shape[2];
        for (int i = 0; i < rows.rows(); ++i)
          for (int j = 0; j < w; ++j) blk.data[static_cast<std::size_t>(i) * w + j] = rows(i, off + j);
      }
    }
    nb.prune();
    psi.sites[s] = std::move(nb);
    psi.sites[s - 1] = pad_index(psi.sites[s - 1], 2, left.dual());
    for (std::size_t j = 0; j < ks.size(); ++j) {
      move_center(ks[j], s - 1);
      ro[j] = extend_overlap_right(ro[j], psi.sites[s], ks[j].sites[s]);
    }
  }
  psi.center = 0;
  return psi;
}

// --- checkpoints -------------------------------------------------------------

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

constexpr char kMagic[8] = {'Q', 'F', 'T', 'N', 'M', 'P', 'S', '1'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, T v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("checkpoint: truncated stream");
  return v;
}

}  // namespace

void save_checkpoint(const MpsState& psi, std::ostream& os) {
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, kVersion);
  put<std::uint64_t>(os, psi.layout.hash());
  put<std::int32_t>(os, psi.sector);
  put<std::int32_t>(os, psi.center);
  put<std::int32_t>(os, psi.num_sites());
  for (const auto& t : psi.sites) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(t.rank()));
    for (const auto& g : t.indices()) {
      put<std::uint8_t>(os, g.direction() == Direction::In ? 0 : 1);
      put<std::uint32_t>(os, static_cast<std::uint32_t>(g.num_sectors()));
      for (const auto& s : g.sectors()) {
        put<std::int32_t>(os, s.charge);
        put<std::int32_t>(os, s.dim);
      }
    }
    put<std::uint32_t>(os, static_cast<std::uint32_t>(t.num_blocks()));
    for (const auto& [k, b] : t.blocks()) {
      for (Charge c : k) put<std::int32_t>(os, c);
      put<std::uint64_t>(os, b.data.size());
    }
    for (const auto& [k, b] : t.blocks())
      os.write(reinterpret_cast<const char*>(b.data.data()), static_cast<std::streamsize>(b.data.size() * sizeof(cplx)));
  }
  if (!os) throw std::runtime_error("checkpoint: write failed");
}

MpsState load_checkpoint(const ModeLayout& layout, std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0) throw std::runtime_error("checkpoint: bad magic");
  if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("checkpoint: unsupported version");
  if (get<std::uint64_t>(is) != layout.hash()) throw std::runtime_error("checkpoint: layout hash mismatch");
  MpsState psi;
  psi.layout = layout;
  psi.sector = get<std::int32_t>(is);
  psi.center = get<std::int32_t>(is);
  const int n = get<std::int32_t>(is);
  if (n != layout.num_sites()) throw std::runtime_error("checkpoint: site count mismatch");
  for (int s = 0; s < n; ++s) {
    const auto rank = get<std::uint32_t>(is);
    std::vector<GradedSpace> idx;
    for (std::uint32_t i = 0; i < rank; ++i) {
      const Direction d = get<std::uint8_t>(is) == 0 ? Direction::In : Direction::Out;
      const auto ns = get<std::uint32_t>(is);
      std::vector<Sector> secs;
      for (std::uint32_t j = 0; j < ns; ++j) {
        const Charge c = get<std::int32_t>(is);
        secs.push_back({c, get<std::int32_t>(is)});
      }
      idx.emplace_back(std::move(secs), d);
    }
    BlockTensor t(std::move(idx));
    const auto nb = get<std::uint32_t>(is);
    std::vector<BlockKey> keys;
    for (std::uint32_t j = 0; j < nb; ++j) {
      BlockKey k(rank);
      for (auto& c : k) c = get<std::int32_t>(is);
      const auto sz = get<std::uint64_t>(is);
      if (t.block(k).data.size() != sz) throw std::runtime_error("checkpoint: block size mismatch");
      keys.push_back(std::move(k));
    }
    for (const auto& k : keys) {
      auto& data = t.block(k).data;
      is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(cplx)));
      if (!is) throw std::runtime_error("checkpoint: truncated data");
    }
    psi.sites.push_back(std::move(t));
  }
  return psi;
}

void save_checkpoint(const MpsState& psi, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("checkpoint: cannot open " + tmp);
    save_checkpoint(psi, os);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw std::runtime_error("checkpoint: rename failed for " + path);
}

MpsState load_checkpoint(const ModeLayout& layout, const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  return load_checkpoint(layout, is);
}

}  // namespace qftn
