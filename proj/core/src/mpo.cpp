#include "qftn/mpo.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace qftn {

int MpoOperator::bond_dim(int b) const { return bond_space(b).dim(); }

const GradedSpace& MpoOperator::bond_space(int b) const {
  if (b < 0 || b > num_sites()) throw std::out_of_range("MpoOperator::bond_space");
  return b == num_sites() ? sites.back().index(3) : sites[b].index(0);
}

int MpoOperator::max_bond_dim() const {
  int m = 0;
  for (int b = 0; b <= num_sites(); ++b) m = std::max(m, bond_dim(b));
  return m;
}

namespace {

struct Merged {
  GradedSpace space;
  std::vector<std::map<Charge, int>> offset;  // per operand
};

Merged merge_spaces(const std::vector<const GradedSpace*>& spaces, Direction dir) {
  Merged m;
  std::map<Charge, int> deg;
  m.offset.resize(spaces.size());
  for (std::size_t i = 0; i < spaces.size(); ++i)
    for (const auto& s : spaces[i]->sectors()) {
      m.offset[i][s.charge] = deg[s.charge];
      deg[s.charge] += s.dim;
    }
  std::vector<Sector> sec;
  for (auto [c, d] : deg) sec.push_back({c, d});
  m.space = GradedSpace(std::move(sec), dir);
  return m;
}

// Adds s * t into out, shifting the first and last axes by per-charge offsets.
void place(BlockTensor& out, const BlockTensor& t, cplx s, const std::map<Charge, int>* loff,
           const std::map<Charge, int>* roff) {
  for (const auto& [k, b] : t.blocks()) {
    Block& dst = out.block(k);
    const int dl = b.shape[0], db = b.shape[1], dk = b.shape[2], dr = b.shape[3];
    const int Dl = dst.shape[0], Dr = dst.shape[3];
    const int ol = loff ? loff->at(k[0]) : 0, orr = roff ? roff->at(k[3]) : 0;
    for (int a = 0; a < dl; ++a)
      for (int x = 0; x < db; ++x)
        for (int y = 0; y < dk; ++y)
          for (int c = 0; c < dr; ++c) {
            const std::size_t src = ((static_cast<std::size_t>(a) * db + x) * dk + y) * dr + c;
            const std::size_t dpos =
                ((static_cast<std::size_t>(a + ol) * db + x) * dk + y) * Dr + (c + orr);
            (void)Dl;
            dst.data[dpos] += s * b.data[src];
          }
  }
}

}  // namespace

MpoOperator mpo_direct_sum(const std::vector<std::pair<cplx, const MpoOperator*>>& terms) {
  if (terms.empty()) throw std::invalid_argument("mpo_direct_sum: no operands");
  const int n = terms.front().second->num_sites();
  for (const auto& [c, op] : terms)
    if (op->num_sites() != n) throw std::invalid_argument("mpo_direct_sum: length mismatch");
  MpoOperator out;
  if (n == 1) {
    BlockTensor t = terms.front().second->sites[0];
    t *= terms.front().first;
    for (std::size_t i = 1; i < terms.size(); ++i) t += terms[i].first * terms[i].second->sites[0];
    out.sites.push_back(std::move(t));
    return out;
  }
  std::vector<Merged> bonds(n + 1);
  for (int b = 1; b < n; ++b) {
    std::vector<const GradedSpace*> sp;
    for (const auto& [c, op] : terms) sp.push_back(&op->bond_space(b));
    bonds[b] = merge_spaces(sp, Direction::Out);
  }
  for (int s = 0; s < n; ++s) {
    const BlockTensor& ref = terms.front().second->sites[s];
    GradedSpace left = s == 0 ? ref.index(0) : bonds[s].space.dual();
    GradedSpace right = s == n - 1 ? ref.index(3) : bonds[s + 1].space;
    BlockTensor t({left, ref.index(1), ref.index(2), right});
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const BlockTensor& w = terms[i].second->sites[s];
      if (!w.index(1).same_sectors(ref.index(1)) || !w.index(2).same_sectors(ref.index(2)))
        throw std::invalid_argument("mpo_direct_sum: physical space mismatch");
      const auto* lo = s == 0 ? nullptr : &bonds[s].offset[i];
      const auto* ro = s == n - 1 ? nullptr : &bonds[s + 1].offset[i];
      place(t, w, s == 0 ? terms[i].first : cplx{1.0}, lo, ro);
    }
    out.sites.push_back(std::move(t));
  }
  return out;
}

namespace {
GradedSpace negated(const GradedSpace& g) {
  std::vector<Sector> s;
  for (const auto& x : g.sectors()) s.push_back({-x.charge, x.dim});
  return GradedSpace(std::move(s), g.direction());
}
}  // namespace

MpoOperator mpo_adjoint(const MpoOperator& op) {
  MpoOperator out;
  for (const auto& w : op.sites) {
    BlockTensor t({negated(w.index(0)), w.index(2).dual(), w.index(1).dual(), negated(w.index(3))});
    for (const auto& [k, b] : w.blocks()) {
      Block& dst = t.block({-k[0], k[2], k[1], -k[3]});
      const int dl = b.shape[0], db = b.shape[1], dk = b.shape[2], dr = b.shape[3];
      for (int a = 0; a < dl; ++a)
        for (int x = 0; x < db; ++x)
          for (int y = 0; y < dk; ++y)
            for (int c = 0; c < dr; ++c)
              dst.data[((static_cast<std::size_t>(a) * dk + y) * db + x) * dr + c] =
                  std::conj(b.data[((static_cast<std::size_t>(a) * db + x) * dk + y) * dr + c]);
    }
    out.sites.push_back(std::move(t));
  }
  return out;
}

MpoOperator mpo_scaled(MpoOperator op, cplx s) {
  if (!op.sites.empty()) op.sites.front() *= s;
  return op;
}

MpoOperator identity_mpo(const std::vector<GradedSpace>& phys) {
  MpoOperator out;
  const GradedSpace triv = GradedSpace::trivial(0, Direction::In);
  for (const auto& p : phys) {
    GradedSpace bra = p.with_direction(Direction::Out), ket = p.with_direction(Direction::In);
    BlockTensor t({triv, bra, ket, triv.dual()});
    for (const auto& s : p.sectors()) {
      Block& b = t.block({0, s.charge, s.charge, 0});
      for (int i = 0; i < s.dim; ++i) b.data[static_cast<std::size_t>(i) * s.dim + i] = 1.0;
    }
    out.sites.push_back(std::move(t));
  }
  return out;
}

MpoOperator site_operator_mpo(const std::vector<GradedSpace>& phys, int site, const Eigen::MatrixXcd& op) {
  MpoOperator out = identity_mpo(phys);
  const GradedSpace& p = phys.at(site);
  if (op.rows() != p.dim() || op.cols() != p.dim()) throw std::invalid_argument("site_operator_mpo: shape");
  BlockTensor& t = out.sites[site];
  t.mutable_blocks().clear();
  for (const auto& sb : p.sectors())
    for (const auto& sk : p.sectors()) {
      const int ob = p.offset(sb.charge), ok = p.offset(sk.charge);
      bool nz = false;
      for (int i = 0; i < sb.dim; ++i)
        for (int j = 0; j < sk.dim; ++j) nz |= op(ob + i, ok + j) != cplx{};
      if (!nz) continue;
      if (sb.charge != sk.charge) throw std::invalid_argument("site_operator_mpo: operator changes charge");
      Block& b = t.block({0, sb.charge, sk.charge, 0});
      for (int i = 0; i < sb.dim; ++i)
        for (int j = 0; j < sk.dim; ++j) b.data[static_cast<std::size_t>(i) * sk.dim + j] = op(ob + i, ok + j);
    }
  return out;
}

FlatMpoSite flatten_site(const BlockTensor& w) {
  FlatMpoSite f;
  auto flat_charges = [](const GradedSpace& g) {
    std::vector<Charge> c;
    for (const auto& s : g.sectors())
      for (int i = 0; i < s.dim; ++i) c.push_back(s.charge);
    return c;
  };
  f.wl_charge = flat_charges(w.index(0));
  f.wr_charge = flat_charges(w.index(3));
  for (const auto& [k, b] : w.blocks()) {
    const int ol = w.index(0).offset(k[0]), ob = w.index(1).offset(k[1]);
    const int ok = w.index(2).offset(k[2]), orr = w.index(3).offset(k[3]);
    const int dl = b.shape[0], db = b.shape[1], dk = b.shape[2], dr = b.shape[3];
    for (int a = 0; a < dl; ++a)
      for (int x = 0; x < db; ++x)
        for (int y = 0; y < dk; ++y)
          for (int c = 0; c < dr; ++c) {
            const cplx v = b.data[((static_cast<std::size_t>(a) * db + x) * dk + y) * dr + c];
            if (v != cplx{}) f.terms.push_back({ol + a, orr + c, ob + x, ok + y, v});
          }
  }
  std::sort(f.terms.begin(), f.terms.end(), [](const MpoTerm& a, const MpoTerm& b) {
    if (a.wl != b.wl) return a.wl < b.wl;
    if (a.ket != b.ket) return a.ket < b.ket;
    if (a.wr != b.wr) return a.wr < b.wr;
    return a.bra < b.bra;
  });
  return f;
}

Eigen::SparseMatrix<cplx, Eigen::RowMajor> mpo_to_sparse(const MpoOperator& op) {
  using Sp = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
  std::vector<Sp> partial(1, Sp(1, 1));
  partial[0].insert(0, 0) = 1.0;
  long dim = 1;
  for (const auto& w : op.sites) {
    const FlatMpoSite f = flatten_site(w);
    const int d = w.index(1).dim();
    if (static_cast<int>(partial.size()) != f.num_wl()) throw std::logic_error("mpo_to_sparse: bond mismatch");
    std::vector<std::vector<Eigen::Triplet<cplx>>> trip(f.num_wr());
    for (const auto& t : f.terms) {
      const Sp& p = partial[t.wl];
      for (int r = 0; r < p.outerSize(); ++r)
        for (Sp::InnerIterator it(p, r); it; ++it)
          trip[t.wr].emplace_back(it.row() * d + t.bra, it.col() * d + t.ket, it.value() * t.v);
    }
    dim *= d;
    std::vector<Sp> next(f.num_wr(), Sp(dim, dim));
    for (int r = 0; r < f.num_wr(); ++r) next[r].setFromTriplets(trip[r].begin(), trip[r].end());
    partial = std::move(next);
  }
  if (partial.size() != 1) throw std::logic_error("mpo_to_sparse: open right boundary");
  Sp out = partial[0];
  out.prune(cplx{0.0});
  return out;
}

}  // namespace qftn
