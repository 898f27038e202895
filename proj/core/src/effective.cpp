#include "qftn/effective.hpp"

#include <stdexcept>

namespace qftn {

namespace {

std::vector<Charge> flat_charges(const GradedSpace& g) {
  std::vector<Charge> c;
  c.reserve(g.dim());
  for (const auto& s : g.sectors())
    for (int i = 0; i < s.dim; ++i) c.push_back(s.charge);
  return c;
}

}  // namespace

BlockTensor left_env_boundary() {
  BlockTensor e({GradedSpace::trivial(0, Direction::Out), GradedSpace::trivial(0, Direction::Out),
                 GradedSpace::trivial(0, Direction::In)});
  e.block({0, 0, 0}).data[0] = 1.0;
  return e;
}

BlockTensor right_env_boundary(Charge sector) {
  BlockTensor e({GradedSpace::trivial(sector, Direction::In), GradedSpace::trivial(0, Direction::In),
                 GradedSpace::trivial(sector, Direction::Out)});
  e.block({sector, 0, sector}).data[0] = 1.0;
  return e;
}

BlockTensor extend_left(const BlockTensor& env, const BlockTensor& a, const BlockTensor& w) {
  auto t = contract(env, a, {{2, 0}});              // bra, mpo, p, r
  t = contract(t, w, {{1, 0}, {2, 2}});             // bra, r, wbra, wr
  t = contract(t, adjoint(a), {{0, 0}, {2, 1}});    // r, wr, abra
  return t.permuted({2, 1, 0});
}

BlockTensor extend_right(const BlockTensor& env, const BlockTensor& a, const BlockTensor& w) {
  auto t = contract(a, env, {{2, 2}});              // l, p, ebra, empo
  t = contract(t, w, {{1, 2}, {3, 3}});             // l, ebra, wl, wbra
  t = contract(t, adjoint(a), {{1, 2}, {3, 1}});    // l, wl, abra
  return t.permuted({2, 1, 0});
}

BlockTensor overlap_left_boundary() {
  BlockTensor e({GradedSpace::trivial(0, Direction::Out), GradedSpace::trivial(0, Direction::In)});
  e.block({0, 0}).data[0] = 1.0;
  return e;
}

BlockTensor overlap_right_boundary(Charge sector) {
  BlockTensor e({GradedSpace::trivial(sector, Direction::In), GradedSpace::trivial(sector, Direction::Out)});
  e.block({sector, sector}).data[0] = 1.0;
  return e;
}

BlockTensor extend_overlap_left(const BlockTensor& env, const BlockTensor& bra, const BlockTensor& ket) {
  auto t = contract(env, ket, {{1, 0}});            // bra, p, r
  t = contract(t, adjoint(bra), {{0, 0}, {1, 1}});  // r, bra_r
  return t.permuted({1, 0});
}

BlockTensor extend_overlap_right(const BlockTensor& env, const BlockTensor& bra, const BlockTensor& ket) {
  auto t = contract(ket, env, {{2, 1}});            // l, p, ebra
  t = contract(t, adjoint(bra), {{1, 1}, {2, 2}});  // l, bra_l
  return t.permuted({1, 0});
}

BlockTensor project_local(const BlockTensor& left_ov, const BlockTensor& ket_local, const BlockTensor& right_ov) {
  const int r = static_cast<int>(ket_local.rank());
  auto t = contract(left_ov, ket_local, {{1, 0}});
  return contract(t, right_ov, {{r - 1, 1}});
}

// --- LocalOperator ---------------------------------------------------------

int LocalOperator::Layout::width(int j, Charge m) const {
  if (j == static_cast<int>(phys_charge.size())) {
    auto it = right_dim.find(m);
    return it == right_dim.end() ? 0 : it->second;
  }
  auto it = offsets[j].find(m);
  return it == offsets[j].end() ? 0 : it->second.back();
}

int LocalOperator::Layout::sub_offset(int j, Charge m, int n) const { return offsets[j].at(m)[n]; }

void LocalOperator::build_layout(Charge m, int j) {
  const int s = static_cast<int>(phys_.size());
  if (j == s || lay_.offsets[j].count(m)) return;
  const auto& pc = lay_.phys_charge[j];
  std::vector<int> pre(pc.size() + 1, 0);
  for (std::size_t n = 0; n < pc.size(); ++n) {
    build_layout(m + pc[n], j + 1);
    pre[n + 1] = pre[n] + lay_.width(j + 1, m + pc[n]);
  }
  lay_.offsets[j].emplace(m, std::move(pre));
}

LocalOperator::EnvMats LocalOperator::flatten_env(const BlockTensor& env, std::vector<Charge>& w_charge) {
  const GradedSpace& ws = env.index(1);
  w_charge = flat_charges(ws);
  EnvMats out(w_charge.size());
  for (const auto& [k, b] : env.blocks()) {
    const int nb = b.shape[0], nw = b.shape[1], nk = b.shape[2];
    const int o = ws.offset(k[1]);
    for (int w = 0; w < nw; ++w) {
      Eigen::MatrixXcd m(nb, nk);
      for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nk; ++j) m(i, j) = b.data[(static_cast<std::size_t>(i) * nw + w) * nk + j];
      if (m.cwiseAbs().maxCoeff() == 0.0) continue;
      out[o + w].emplace(k[0], std::move(m));
    }
  }
  return out;
}

LocalOperator::LocalOperator(const BlockTensor& left_env, std::vector<const BlockTensor*> mpo_sites,
                             const BlockTensor& right_env, const GradedSpace& left,
                             std::vector<GradedSpace> phys, const GradedSpace& right)
    : left_(left), right_(right), phys_(std::move(phys)) {
  const int s = static_cast<int>(phys_.size());
  if (s < 1 || s > 2 || s != static_cast<int>(mpo_sites.size()))
    throw std::invalid_argument("LocalOperator: site count mismatch");
  lenv_ = flatten_env(left_env, lw_charge_);
  renv_ = flatten_env(right_env, rw_charge_);
  for (int j = 0; j < s; ++j) {
    w_.push_back(flatten_site(*mpo_sites[j]));
    const auto& f = w_.back();
    std::vector<std::pair<int, int>> rng(f.num_wl(), {0, 0});
    for (std::size_t t = 0; t < f.terms.size();) {
      std::size_t e = t;
      while (e < f.terms.size() && f.terms[e].wl == f.terms[t].wl) ++e;
      rng[f.terms[t].wl] = {static_cast<int>(t), static_cast<int>(e)};
      t = e;
    }
    wl_range_.push_back(std::move(rng));
  }
  if (w_.front().num_wl() != static_cast<int>(lenv_.size()) || w_.back().num_wr() != static_cast<int>(renv_.size()))
    throw std::invalid_argument("LocalOperator: environment and MPO bonds differ");

  lay_.offsets.resize(s);
  for (const auto& g : phys_) lay_.phys_charge.push_back(flat_charges(g));
  for (const auto& sec : right_.sectors()) lay_.right_dim[sec.charge] = sec.dim;
  for (const auto& sec : left_.sectors()) {
    build_layout(sec.charge, 0);
    const int w = lay_.width(0, sec.charge);
    if (w == 0) continue;
    slab_of_[sec.charge] = static_cast<int>(slabs_.size());
    slabs_.push_back({sec.charge, sec.dim, w, size_});
    size_ += static_cast<Eigen::Index>(sec.dim) * w;
  }
}

namespace {

// calls fn(levels, col_offset, q_right) for every non-empty piece of slab q
template <class Lay, class F>
void for_each_piece(const Lay& lay, Charge q, F&& fn) {
  const int s = static_cast<int>(lay.phys_charge.size());
  std::vector<int> n(s, 0);
  auto rec = [&](auto&& self, int j, Charge m, int col) -> void {
    if (j == s) {
      fn(n, col, m);
      return;
    }
    const auto& pc = lay.phys_charge[j];
    for (std::size_t k = 0; k < pc.size(); ++k) {
      if (lay.width(j + 1, m + pc[k]) == 0) continue;
      n[j] = static_cast<int>(k);
      self(self, j + 1, m + pc[k], col + lay.sub_offset(j, m, static_cast<int>(k)));
    }
  };
  rec(rec, 0, q, 0);
}

}  // namespace

Eigen::VectorXcd LocalOperator::pack(const BlockTensor& t) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size_);
  const int s = static_cast<int>(phys_.size());
  for (const auto& sl : slabs_) {
    for_each_piece(lay_, sl.q, [&](const std::vector<int>& n, int col, Charge qr) {
      BlockKey key{sl.q};
      std::vector<int> inner(s);
      for (int j = 0; j < s; ++j) {
        const Charge c = lay_.phys_charge[j][n[j]];
        key.push_back(c);
        inner[j] = n[j] - phys_[j].offset(c);
      }
      key.push_back(qr);
      const Block* b = t.find(key);
      if (!b) return;
      const int chr = lay_.right_dim.at(qr);
      for (int a = 0; a < sl.rows; ++a) {
        std::size_t base = a;
        for (int j = 0; j < s; ++j) base = base * b->shape[1 + j] + inner[j];
        base *= chr;
        for (int c = 0; c < chr; ++c) v[sl.offset + static_cast<Eigen::Index>(col + c) * sl.rows + a] = b->data[base + c];
      }
    });
  }
  return v;
}

BlockTensor LocalOperator::unpack(const Eigen::VectorXcd& v) const {
  std::vector<GradedSpace> idx{left_};
  for (const auto& g : phys_) idx.push_back(g);
  idx.push_back(right_);
  BlockTensor t(std::move(idx));
  const int s = static_cast<int>(phys_.size());
  for (const auto& sl : slabs_) {
    for_each_piece(lay_, sl.q, [&](const std::vector<int>& n, int col, Charge qr) {
      BlockKey key{sl.q};
      std::vector<int> inner(s);
      for (int j = 0; j < s; ++j) {
        const Charge c = lay_.phys_charge[j][n[j]];
        key.push_back(c);
        inner[j] = n[j] - phys_[j].offset(c);
      }
      key.push_back(qr);
      Block& b = t.block(key);
      const int chr = lay_.right_dim.at(qr);
      for (int a = 0; a < sl.rows; ++a) {
        std::size_t base = a;
        for (int j = 0; j < s; ++j) base = base * b.shape[1 + j] + inner[j];
        base *= chr;
        for (int c = 0; c < chr; ++c) b.data[base + c] = v[sl.offset + static_cast<Eigen::Index>(col + c) * sl.rows + a];
      }
    });
  }
  return t;
}

bool LocalOperator::add_orthogonal(const Eigen::VectorXcd& v) {
  Eigen::VectorXcd u = v;
  for (int pass = 0; pass < 2; ++pass)
    for (const auto& o : ortho_) u -= o * o.dot(u);
  const double n = u.norm();
  if (n <= 1e-10 * std::max(1.0, v.norm())) return false;
  ortho_.push_back(u / n);
  return true;
}

void LocalOperator::project(Eigen::VectorXcd& x) const {
  for (const auto& o : ortho_) x -= o * o.dot(x);
}

void LocalOperator::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  if (ortho_.empty()) {
    apply_raw(x, y);
    return;
  }
  Eigen::VectorXcd px = x;
  project(px);
  apply_raw(px, y);
  project(y);
}

void LocalOperator::apply_raw(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  using Mat = Eigen::MatrixXcd;
  using CMap = Eigen::Map<const Mat>;
  using MMap = Eigen::Map<Mat>;
  y.setZero(size_);
  const int s = static_cast<int>(phys_.size());

  // intermediate slabs per level, keyed by (w, bra levels so far)
  struct Entry {
    int w;
    int n[2];
    Charge mid;
  };
  std::vector<std::vector<Mat>> buf(s + 1);
  std::vector<std::vector<Entry>> touched(s + 1);
  std::vector<std::vector<char>> live(s + 1);
  std::vector<int> stride(s + 1, 1);
  for (int j = 0; j <= s; ++j) {
    const int nw = j == 0 ? static_cast<int>(lenv_.size()) : w_[j - 1].num_wr();
    long cnt = nw;
    for (int i = 0; i < j; ++i) cnt *= phys_[i].dim();
    buf[j].resize(cnt);
    live[j].assign(cnt, 0);
  }
  auto key_of = [&](int j, int w, const int* n) {
    long k = w;
    for (int i = 0; i < j; ++i) k = k * phys_[i].dim() + n[i];
    return k;
  };
  double flops = 0.0;

  for (const auto& out : slabs_) {
    const Charge qb = out.q;
    const int rows = out.rows;
    for (int j = 0; j <= s; ++j) {
      for (const auto& e : touched[j]) live[j][key_of(j, e.w, e.n)] = 0;
      touched[j].clear();
    }
    // stage 0: left environment times the ket slab
    for (std::size_t w = 0; w < lenv_.size(); ++w) {
      auto it = lenv_[w].find(qb);
      if (it == lenv_[w].end()) continue;
      const Charge qk = qb + lw_charge_[w];
      auto sit = slab_of_.find(qk);
      if (sit == slab_of_.end()) continue;
      const Slab& in = slabs_[sit->second];
      const long k = static_cast<long>(w);
      buf[0][k].noalias() = it->second * CMap(x.data() + in.offset, in.rows, in.cols);
      flops += double(rows) * in.rows * in.cols;
      live[0][k] = 1;
      touched[0].push_back({static_cast<int>(w), {0, 0}, qk});
    }
    // MPO sites: one axpy of a contiguous column block per term
    for (int j = 0; j < s; ++j) {
      const auto& f = w_[j];
      const auto& pc = lay_.phys_charge[j];
      for (const auto& e : touched[j]) {
        const Mat& src = buf[j][key_of(j, e.w, e.n)];
        auto [tb, te] = wl_range_[j][e.w];
        for (int t = tb; t < te; ++t) {
          const MpoTerm& term = f.terms[t];
          const Charge mnext = e.mid + pc[term.ket];
          const int wdt = lay_.width(j + 1, mnext);
          if (wdt == 0) continue;
          const int off = lay_.sub_offset(j, e.mid, term.ket);
          Entry ne{term.wr, {e.n[0], e.n[1]}, mnext};
          ne.n[j] = term.bra;
          const long nk = key_of(j + 1, ne.w, ne.n);
          Mat& dst = buf[j + 1][nk];
          if (!live[j + 1][nk]) {
            dst.setZero(rows, wdt);
            live[j + 1][nk] = 1;
            touched[j + 1].push_back(ne);
          }
          dst.noalias() += term.v * src.middleCols(off, wdt);
          flops += double(rows) * wdt;
        }
      }
    }
    // right environment into the output slab
    for (const auto& e : touched[s]) {
      Charge qbr = qb;
      int col = 0;
      for (int j = 0; j < s; ++j) {
        col += lay_.sub_offset(j, qbr, e.n[j]);
        qbr += lay_.phys_charge[j][e.n[j]];
      }
      const int wdt = lay_.width(s, qbr);
      if (wdt == 0) continue;
      auto it = renv_[e.w].find(qbr);
      if (it == renv_[e.w].end()) continue;
      const Mat& c = buf[s][key_of(s, e.w, e.n)];
      MMap(y.data() + out.offset + static_cast<Eigen::Index>(col) * rows, rows, wdt).noalias() +=
          c * it->second.transpose();
      flops += double(rows) * c.cols() * wdt;
    }
  }
  flops_ = flops;
}

}  // namespace qftn
