#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Eigenvalues>

#include "qftn/ed_oracle.hpp"
#include "qftn/tdvp.hpp"

using namespace qftn;

namespace {

ModelParams schwinger(double m, double theta) {
  ModelParams p;
  p.ms.mass = m;
  p.ms.theta = theta;
  return p;
}

ModelParams sg(double delta) {
  ModelParams p;
  p.sg.delta = delta;
  return p;
}

// exp(-i H t) v for a Hermitian dense H
Eigen::VectorXcd dense_evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& v, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ph = (cplx(0.0, -t) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * (ph.asDiagonal() * (es.eigenvectors().adjoint() * v));
}

}  // namespace

TEST(Tdvp, FreeVacuumIsStationary) {
  ModeLayout lay(ModelKind::MassiveSchwinger, 2, 2, 2, 10.0);
  auto p = schwinger(0.0, 0.0);
  auto h = assemble_hamiltonian(lay, p);
  auto vac = free_vacuum(lay);
  TdvpSettings s;
  auto psi = vac;
  for (int i = 0; i < 5; ++i) psi = tdvp_step(h, krylov_expand(h, psi, s), s);
  EXPECT_NEAR(std::abs(overlap(vac, psi)), 1.0, 1e-12);
}

TEST(Tdvp, SingleBosonPhase) {
  ModeLayout lay(ModelKind::SineGordon, 2, 2, 1, 15.0);
  auto p = sg(0.25);
  auto h0 = free_mpo(lay, p);
  std::vector<int> lv(lay.num_sites(), 0);
  lv[lay.zero_site()] = lay.n_zm();
  lv[lay.site_of(-2)] = 1;
  auto one = product_state(lay, lv);
  TdvpSettings s;
  auto psi = tdvp_step(h0, one, s);
  const double w = dispersion(ModelKind::SineGordon, -2, 15.0, p);
  const cplx expect = std::exp(cplx(0.0, -w * s.dt));
  EXPECT_LT(std::abs(overlap(one, psi) - expect), 1e-10);
}

TEST(Tdvp, MatchesDenseEvolution) {
  struct Case {
    ModeLayout lay;
    ModelParams p;
  };
  std::vector<Case> cases{
      {ModeLayout(ModelKind::MassiveSchwinger, 2, 2, 2, 10.0), schwinger(0.3, std::numbers::pi)},
      {ModeLayout(ModelKind::SineGordon, 2, 2, 2, 15.0), sg(0.25)},
  };
  for (const auto& c : cases) {
    auto h = assemble_hamiltonian(c.lay, c.p);
    auto basis = enumerate_basis(c.lay, c.p, 0);
    ASSERT_LE(basis.size(), 2000u);
    Eigen::MatrixXcd hd(mpo_to_sparse(h));
    auto psi = free_vacuum(c.lay);
    Eigen::VectorXcd v0 = to_dense(psi);
    TdvpSettings s;
    const double e0 = expectation(psi, h).real();
    for (int step = 0; step < 50; ++step) {
      psi = tdvp_step(h, krylov_expand(h, psi, s), s);
      EXPECT_NEAR(norm(psi), 1.0, 1e-10);
    }
    Eigen::VectorXcd ref = dense_evolve(hd, v0, 50 * s.dt);
    const double fidelity = std::norm(ref.dot(to_dense(psi)));
    EXPECT_GE(fidelity, 1.0 - 1e-6);
    EXPECT_NEAR(expectation(psi, h).real(), e0, 1e-6 * std::max(1.0, std::abs(e0)));
  }
}

TEST(Tdvp, KrylovExpansion) {
  ModeLayout lay(ModelKind::MassiveSchwinger, 3, 3, 2, 20.0);
  auto h = assemble_hamiltonian(lay, schwinger(0.2, std::numbers::pi));
  auto vac = free_vacuum(lay);
  TdvpSettings s;
  auto ex = krylov_expand(h, vac, s);
  EXPECT_NEAR(std::abs(overlap(ex, vac)), 1.0, 1e-12);
  bool grew = false;
  for (int b = 1; b < lay.num_sites(); ++b) {
    for (Charge q : vac.bond_space(b).charges()) EXPECT_TRUE(ex.bond_space(b).contains(q));
    grew |= ex.bond_space(b).charges().size() > vac.bond_space(b).charges().size();
  }
  EXPECT_TRUE(grew);

  // eigenstate of H0: nothing to add
  auto h0 = free_mpo(lay, schwinger(0.2, std::numbers::pi));
  auto same = krylov_expand(h0, vac, s);
  EXPECT_EQ(same.bond_dims(), vac.bond_dims());
}

TEST(Tdvp, NoQuenchKeepsObservables) {
  ModeLayout lay(ModelKind::MassiveSchwinger, 2, 2, 2, 10.0);
  auto p = schwinger(0.2, std::numbers::pi);
  DmrgSettings ds;
  ds.policy = {1e-10, 500};
  ds.energy_tol = 1e-12;
  std::mt19937_64 rng(3);
  auto gs = pre_quench_state(lay, p, ds, rng);
  TdvpSettings s;
  auto traj = quench_run(lay, p, gs, 0.4, s, {});
  ASSERT_EQ(traj.samples.size(), 21u);
  for (const auto& q : traj.samples) {
    EXPECT_NEAR(q.energy, traj.samples[0].energy, 1e-6);
    EXPECT_NEAR(q.cos_value.real(), traj.samples[0].cos_value.real(), 1e-6);
    for (std::size_t b = 0; b < q.entropies.size(); ++b)
      EXPECT_NEAR(q.entropies[b], traj.samples[0].entropies[b], 1e-6);
  }
}

TEST(Tdvp, QuenchFromVacuum) {
  ModeLayout lay(ModelKind::MassiveSchwinger, 2, 2, 2, 20.0);
  auto pre = schwinger(0.0, std::numbers::pi);
  auto post = schwinger(0.1, std::numbers::pi);
  DmrgSettings ds;
  std::mt19937_64 rng(4);
  auto psi0 = pre_quench_state(lay, pre, ds, rng);
  EXPECT_EQ(psi0.max_bond_dim(), 1);
  QuenchObservables obs;
  obs.rdm_modes = {0};
  obs.rdm_times = {0.0, 0.1};
  TdvpSettings s;
  auto traj = quench_run(lay, post, psi0, 0.2, s, obs);
  ASSERT_EQ(traj.samples.size(), 11u);
  for (double e : traj.samples[0].entropies) EXPECT_EQ(e, 0.0);
  EXPECT_GT(traj.samples.back().entropies[lay.zero_site() - 1], 0.0);
  for (const auto& q : traj.samples) {
    EXPECT_NEAR(q.norm, 1.0, 1e-8);
    EXPECT_NEAR(q.energy, traj.samples[0].energy, 1e-4 * std::abs(traj.samples[0].energy) + 1e-8);
    EXPECT_NEAR(q.cos_value.imag(), 0.0, 1e-8);
  }
  ASSERT_EQ(traj.rdms.size(), 2u);
  EXPECT_DOUBLE_EQ(traj.rdms[0].t, 0.0);
  EXPECT_NEAR(traj.rdms[1].t, 0.1, 1e-12);
  EXPECT_NEAR(traj.rdms[1].rho.trace().real(), 1.0, 1e-10);
}
