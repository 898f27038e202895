#include "qftn/dmrg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qftn/effective.hpp"

namespace qftn {

double default_energy_tol(ModelKind model) { return model == ModelKind::SineGordon ? 1e-9 : 1e-8; }

namespace {

// Environments of psi against H and against each lower state, kept in step
// with the sweep position.
struct Environments {
  const MpoOperator& h;
  const std::vector<MpsState>& lower;
  std::vector<BlockTensor> left, right;                    // left[i]: sites < i, right[i]: sites > i
  std::vector<std::vector<BlockTensor>> oleft, oright;    // per lower state

  Environments(const MpoOperator& h_, const std::vector<MpsState>& lower_, const MpsState& psi)
      : h(h_), lower(lower_) {
    const int n = psi.num_sites();
    left.resize(n);
    right.resize(n);
    left[0] = left_env_boundary();
    right[n - 1] = right_env_boundary(psi.sector);
    oleft.assign(lower.size(), std::vector<BlockTensor>(n));
    oright.assign(lower.size(), std::vector<BlockTensor>(n));
    for (std::size_t k = 0; k < lower.size(); ++k) {
      oleft[k][0] = overlap_left_boundary();
      oright[k][n - 1] = overlap_right_boundary(psi.sector);
    }
    for (int i = n - 2; i >= 0; --i) update_right(psi, i);
  }

  void update_left(const MpsState& psi, int i) {  // left[i + 1] from site i
    left[i + 1] = extend_left(left[i], psi.sites[i], h.sites[i]);
    for (std::size_t k = 0; k < lower.size(); ++k)
      oleft[k][i + 1] = extend_overlap_left(oleft[k][i], psi.sites[i], lower[k].sites[i]);
  }
  void update_right(const MpsState& psi, int i) {  // right[i] from site i + 1
    right[i] = extend_right(right[i + 1], psi.sites[i + 1], h.sites[i + 1]);
    for (std::size_t k = 0; k < lower.size(); ++k)
      oright[k][i] = extend_overlap_right(oright[k][i + 1], psi.sites[i + 1], lower[k].sites[i + 1]);
  }
};

struct BondUpdate {
  double energy;
  double discarded;
};

BondUpdate optimize_bond(MpsState& psi, Environments& env, int i, bool left_to_right, const DmrgSettings& s) {
  const MpoOperator& h = env.h;
  auto theta = merge_two_site(psi.sites[i], psi.sites[i + 1]);
  LocalOperator op(env.left[i], {&h.sites[i], &h.sites[i + 1]}, env.right[i + 1], psi.sites[i].index(0),
                   {psi.sites[i].index(1), psi.sites[i + 1].index(1)}, psi.sites[i + 1].index(2));
  for (std::size_t k = 0; k < env.lower.size(); ++k) {
    auto lk = merge_two_site(env.lower[k].sites[i], env.lower[k].sites[i + 1]);
    op.add_orthogonal(op.pack(project_local(env.oleft[k][i], lk, env.oright[k][i + 1])));
  }
  Eigen::VectorXcd x0 = op.pack(theta);
  op.project(x0);
  if (x0.norm() < 1e-8) {
    // the current tensor lies in the excluded span; restart from a deterministic mix
    x0 = Eigen::VectorXcd::LinSpaced(op.size(), 1.0, 2.0);
    op.project(x0);
  }
  EigResult res;
  if (x0.norm() < 1e-8) {
    // nothing left to optimize on this bond
    res.vector = op.pack(theta);
    Eigen::VectorXcd y;
    op.apply(res.vector, y);
    res.value = res.vector.dot(y).real() / res.vector.squaredNorm();
  } else {
    // P H P vanishes on the excluded span; when every energy is positive that
    // null direction would be the lowest, so shift the projected part below it
    double shift = 0.0;
    if (op.num_orthogonal() > 0) {
      Eigen::VectorXcd y;
      op.apply(x0, y);
      shift = x0.dot(y).real() / x0.squaredNorm() + 1.0;
    }
    res = lanczos_ground(
        [&](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
          op.apply(x, y);
          if (shift != 0.0) {
            Eigen::VectorXcd px = x;
            op.project(px);
            y -= shift * px;
          }
        },
        x0, s.solver);
    res.value += shift;
  }
  auto sp = split_two_site(op.unpack(res.vector), s.policy, left_to_right);
  if (sp.kept_norm > 0.0) (left_to_right ? sp.b : sp.a) *= 1.0 / sp.kept_norm;
  psi.sites[i] = std::move(sp.a);
  psi.sites[i + 1] = std::move(sp.b);
  psi.center = left_to_right ? i + 1 : i;
  return {res.value, sp.discarded_weight};
}

DmrgResult run(const MpoOperator& h, const std::vector<MpsState>& lower, MpsState psi, const DmrgSettings& s) {
  using clock = std::chrono::steady_clock;
  const int n = psi.num_sites();
  if (n < 2) throw std::invalid_argument("dmrg: needs at least two sites");
  if (static_cast<int>(h.sites.size()) != n) throw std::invalid_argument("dmrg: MPO and MPS lengths differ");
  for (const auto& l : lower)
    if (l.sector != psi.sector || l.num_sites() != n)
      throw std::invalid_argument("dmrg: lower states must share layout and sector");
  normalize(psi);
  move_center(psi, 0);

  DmrgResult out;
  Environments env(h, lower, psi);
  double prev = std::numeric_limits<double>::infinity();
  double energy = prev;
  for (int sweep = 1; sweep <= s.max_sweeps; ++sweep) {
    const auto t0 = clock::now();
    double disc = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      auto u = optimize_bond(psi, env, i, true, s);
      energy = u.energy;
      disc = std::max(disc, u.discarded);
      out.report.discarded_weight += u.discarded * u.discarded;
      if (i + 2 < n) env.update_left(psi, i);
    }
    out.report.half_sweep_energies.push_back(energy);
    for (int i = n - 2; i >= 0; --i) {
      auto u = optimize_bond(psi, env, i, false, s);
      energy = u.energy;
      disc = std::max(disc, u.discarded);
      out.report.discarded_weight += u.discarded * u.discarded;
      if (i > 0) env.update_right(psi, i);
    }
    out.report.half_sweep_energies.push_back(energy);
    out.report.sweep_energies.push_back(energy);
    out.report.sweeps = sweep;

    const bool done = sweep >= s.min_sweeps && std::abs(prev - energy) < s.energy_tol;
    SweepRecord rec;
    rec.sweep = sweep;
    rec.energy = energy;
    rec.max_bond = psi.max_bond_dim();
    rec.discarded = disc;
    if (s.compute_variance && (s.variance_every_sweep || done || sweep == s.max_sweeps)) {
      rec.variance = variance(psi, h);
      out.report.variance = rec.variance;
    }
    rec.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    out.report.records.push_back(rec);
    if (s.on_sweep) s.on_sweep(rec);
    prev = energy;
    if (done) {
      out.report.converged = true;
      break;
    }
  }
  out.energy = energy;
  out.report.bond_dims = psi.bond_dims();
  out.state = std::move(psi);
  return out;
}

}  // namespace

DmrgResult ground_state(const MpoOperator& h, MpsState psi0, const DmrgSettings& s) {
  return run(h, {}, std::move(psi0), s);
}

DmrgResult excited_state(const MpoOperator& h, const std::vector<MpsState>& lower, MpsState psi0,
                         const DmrgSettings& s) {
  return run(h, lower, std::move(psi0), s);
}

std::vector<std::vector<int>> lowest_product_states(const ModeLayout& layout, const ModelParams& p, Charge sector,
                                                    int count) {
  const int n = layout.num_sites();
  struct Level {
    int level;
    double e;
    Charge q;
  };
  std::vector<std::vector<Level>> levels(n);
  std::vector<Charge> qmin(n + 1, 0), qmax(n + 1, 0);  // reachable charge of sites >= i
  std::vector<double> emin(n + 1, 0.0);
  for (int s = n - 1; s >= 0; --s) {
    for (int l = 0; l < layout.local_dim(s); ++l)
      levels[s].push_back({l, level_energy(layout, s, l, p), layout.level_charge(s, l)});
    std::sort(levels[s].begin(), levels[s].end(), [](const Level& a, const Level& b) { return a.e < b.e; });
    Charge lo = levels[s][0].q, hi = lo;
    for (const auto& l : levels[s]) lo = std::min(lo, l.q), hi = std::max(hi, l.q);
    qmin[s] = qmin[s + 1] + lo;
    qmax[s] = qmax[s + 1] + hi;
    emin[s] = emin[s + 1] + levels[s][0].e;
  }

  // depth-first with the count-th best energy as the bound
  std::vector<std::pair<double, std::vector<int>>> best;
  std::vector<int> cur(n);
  long budget = 4'000'000;
  auto bound = [&] { return static_cast<int>(best.size()) < count ? std::numeric_limits<double>::infinity()
                                                                  : best.back().first; };
  auto visit = [&](auto&& self, int s, double e, Charge q) -> void {
    if (--budget < 0) return;
    if (s == n) {
      if (q != sector) return;
      best.emplace_back(e, cur);
      std::sort(best.begin(), best.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      if (static_cast<int>(best.size()) > count) best.pop_back();
      return;
    }
    for (const auto& l : levels[s]) {
      if (e + l.e + emin[s + 1] >= bound()) break;
      const Charge rest = sector - q - l.q;
      if (rest < qmin[s + 1] || rest > qmax[s + 1]) continue;
      cur[s] = l.level;
      self(self, s + 1, e + l.e, q + l.q);
    }
  };
  visit(visit, 0, 0.0, 0);
  std::vector<std::vector<int>> out;
  for (auto& b : best) out.push_back(std::move(b.second));
  return out;
}

MpsState initial_state(const MpoOperator& h, const ModeLayout& layout, const ModelParams& p, Charge sector,
                       std::mt19937_64& rng) {
  constexpr int kDirections = 4;
  constexpr int kProducts = 8;
  const int all = std::numeric_limits<int>::max();
  auto psi = random_sector_mps(layout, sector, all, rng);
  // one direction per charge traps excited states of diagonal (free) Hamiltonians
  // in product eigenstates; spare directions give the two-site updates room
  std::vector<MpsState> extra;
  for (int i = 1; i < kDirections; ++i) extra.push_back(random_sector_mps(layout, sector, all, rng));
  // a two-site update cannot leave a product eigenstate when the way down
  // changes two distant modes at once, so the low free states are offered up front
  for (const auto& lv : lowest_product_states(layout, p, sector, kProducts)) extra.push_back(product_state(layout, lv));
  psi = expand_basis(psi, extra, 1e-12, all);
  return global_subspace_expansion(h, psi);
}

MpsState global_subspace_expansion(const MpoOperator& h, const MpsState& psi, TruncationPolicy moderate) {
  if (moderate.chi_max <= 0) moderate.chi_max = 4 * std::max(1, psi.max_bond_dim());
  MpsState start = psi;
  normalize(start);
  auto hp = apply_mpo(h, start, moderate);
  auto out = expand_basis(start, {hp}, moderate.eps, start.max_bond_dim() + moderate.chi_max);
  normalize(out);
  return out;
}

}  // namespace qftn
