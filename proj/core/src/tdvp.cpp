#include "qftn/tdvp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qftn/effective.hpp"
#include "qftn/krylov.hpp"

namespace qftn {

MpsState krylov_expand(const MpoOperator& h, const MpsState& psi, const TdvpSettings& s) {
  std::vector<MpsState> ks;
  const TruncationPolicy pol{s.eps_k, s.krylov_chi};
  const MpsState* prev = &psi;
  for (int j = 0; j < s.krylov_count; ++j) {
    MpsState k = apply_mpo(h, *prev, pol);
    if (norm(k) == 0.0) break;
    normalize(k);
    ks.push_back(std::move(k));
    prev = &ks.back();
  }
  return expand_basis(psi, ks, s.eps_m, s.krylov_chi);
}

namespace {

// exp(z H_eff) on a packed vector
Eigen::VectorXcd evolve(const LocalOperator& op, const Eigen::VectorXcd& x, cplx z, const TdvpSettings& s, StepInfo& info) {
  auto r = krylov_expm([&](const Eigen::VectorXcd& a, Eigen::VectorXcd& b) { op.apply(a, b); }, x, z, s.expm_tol,
                       s.expm_basis);
  if (!r.converged) throw std::runtime_error("tdvp: local exponential did not converge");
  info.max_iterations = std::max(info.max_iterations, r.iterations);
  return r.vector;
}

}  // namespace

MpsState tdvp_step(const MpoOperator& h, const MpsState& psi_in, const TdvpSettings& s, StepInfo* info_out) {
  MpsState psi = psi_in;
  const int n = psi.num_sites();
  if (n < 2) throw std::invalid_argument("tdvp_step: needs at least two sites");
  move_center(psi, 0);
  StepInfo info;
  const cplx fwd(0.0, -0.5 * s.dt), bwd(0.0, 0.5 * s.dt);

  std::vector<BlockTensor> left(n), right(n);
  left[0] = left_env_boundary();
  right[n - 1] = right_env_boundary(psi.sector);
  for (int i = n - 2; i >= 0; --i) right[i] = extend_right(right[i + 1], psi.sites[i + 1], h.sites[i + 1]);

  auto two_site = [&](int i, bool left_to_right) {
    auto theta = merge_two_site(psi.sites[i], psi.sites[i + 1]);
    LocalOperator op(left[i], {&h.sites[i], &h.sites[i + 1]}, right[i + 1], psi.sites[i].index(0),
                     {psi.sites[i].index(1), psi.sites[i + 1].index(1)}, psi.sites[i + 1].index(2));
    auto x = evolve(op, op.pack(theta), fwd, s, info);
    auto sp = split_two_site(op.unpack(x), s.policy, left_to_right);
    info.discarded = std::max(info.discarded, sp.discarded_weight);
    if (sp.kept_norm > 0.0) (left_to_right ? sp.b : sp.a) *= 1.0 / sp.kept_norm;
    psi.sites[i] = std::move(sp.a);
    psi.sites[i + 1] = std::move(sp.b);
    psi.center = left_to_right ? i + 1 : i;
  };
  auto one_site_back = [&](int j) {
    LocalOperator op(left[j], {&h.sites[j]}, right[j], psi.sites[j].index(0), {psi.sites[j].index(1)},
                     psi.sites[j].index(2));
    psi.sites[j] = op.unpack(evolve(op, op.pack(psi.sites[j]), bwd, s, info));
  };

  for (int i = 0; i + 1 < n; ++i) {
    two_site(i, true);
    if (i + 2 < n) {
      left[i + 1] = extend_left(left[i], psi.sites[i], h.sites[i]);
      one_site_back(i + 1);
    }
  }
  for (int i = n - 2; i >= 0; --i) {
    two_site(i, false);
    if (i > 0) {
      right[i] = extend_right(right[i + 1], psi.sites[i + 1], h.sites[i + 1]);
      one_site_back(i);
    }
  }
  normalize(psi);
  if (info_out) *info_out = info;
  return psi;
}

MpsState free_vacuum(const ModeLayout& layout) {
  std::vector<int> levels(layout.num_sites(), 0);
  if (layout.model() == ModelKind::SineGordon) levels[layout.zero_site()] = layout.n_zm();
  return product_state(layout, levels);
}

MpsState pre_quench_state(const ModeLayout& layout, const ModelParams& params, const DmrgSettings& dmrg,
                          std::mt19937_64& rng) {
  if (coupling(layout.model(), layout.length(), params) == 0.0) return free_vacuum(layout);
  auto h = assemble_hamiltonian(layout, params);
  return ground_state(h, initial_state(h, layout, params, 0, rng), dmrg).state;
}

QuenchTrajectory quench_run(const ModeLayout& layout, const ModelParams& params, const MpsState& psi0,
                            double t_total, const TdvpSettings& s, const QuenchObservables& obs,
                            const std::function<void(const QuenchSample&)>& on_sample) {
  if (!(s.dt > 0.0)) throw std::invalid_argument("quench_run: dt must be positive");
  const auto h = assemble_hamiltonian(layout, params);
  const auto cos_op = trig_mpo(layout, params, TrigKind::Cos);
  const long steps = std::lround(t_total / s.dt);
  QuenchTrajectory traj;
  MpsState psi = psi0;
  normalize(psi);

  std::vector<bool> rdm_done(obs.rdm_times.size(), false);
  auto record = [&](long step, double disc) {
    QuenchSample q;
    q.t = static_cast<double>(step) * s.dt;
    q.energy = expectation(psi, h).real();
    q.cos_value = expectation(psi, cos_op);
    q.norm = norm(psi);
    if (obs.entropies) q.entropies = bond_entropies(psi);
    q.max_chi = psi.max_bond_dim();
    q.discarded = disc;
    for (std::size_t r = 0; r < obs.rdm_times.size(); ++r) {
      if (rdm_done[r] || q.t + 0.5 * s.dt <= obs.rdm_times[r]) continue;
      rdm_done[r] = true;
      for (int k : obs.rdm_modes) traj.rdms.push_back({q.t, k, single_mode_rdm(psi, k)});
    }
    if (on_sample) on_sample(q);
    traj.samples.push_back(std::move(q));
  };

  record(0, 0.0);
  for (long step = 1; step <= steps; ++step) {
    if (s.krylov_count > 0 && (s.expand_every_step || step == 1)) psi = krylov_expand(h, psi, s);
    StepInfo info;
    psi = tdvp_step(h, psi, s, &info);
    record(step, info.discarded);
  }
  traj.final_state = std::move(psi);
  return traj;
}

}  // namespace qftn
