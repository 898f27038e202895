#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "qftn/ed_oracle.hpp"
#include "qftn/hamiltonian.hpp"

using namespace qftn;
using std::numbers::pi;

namespace {

ModelParams sg(double delta) {
  ModelParams p;
  p.sg.delta = delta;
  return p;
}

ModelParams ms(double m, double theta) {
  ModelParams p;
  p.ms.mass = m;
  p.ms.theta = theta;
  return p;
}

// max |A_mpo - A_ed| over the full matrix, A_ed embedded by dense index
double compare(const Eigen::SparseMatrix<cplx, Eigen::RowMajor>& sp, const DenseBasis& b,
               const Eigen::MatrixXcd& ed, double* scale) {
  Eigen::MatrixXcd full = Eigen::MatrixXcd(sp);
  double m = 0.0;
  *scale = 0.0;
  Eigen::MatrixXcd emb = Eigen::MatrixXcd::Zero(full.rows(), full.cols());
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) emb(b.dense_index[i], b.dense_index[j]) = ed(i, j);
  m = (full - emb).cwiseAbs().maxCoeff();
  *scale = emb.cwiseAbs().maxCoeff();
  return m;
}

}  // namespace

TEST(Dispersion, Values) {
  ModelParams p;
  EXPECT_NEAR(dispersion(ModelKind::SineGordon, 1, 15.0, p), 2 * pi / 15.0, 1e-15);
  EXPECT_NEAR(dispersion(ModelKind::SineGordon, -3, 15.0, p), 6 * pi / 15.0, 1e-15);
  EXPECT_NEAR(dispersion(ModelKind::MassiveSchwinger, 0, 100.0, p), 0.5641895835477563, 1e-15);
  EXPECT_THROW(dispersion(ModelKind::SineGordon, 0, 15.0, p), std::invalid_argument);
  // mS vertex argument 2 pi / (omega L) = 1 / sqrt(k^2 + (M L / 2 pi)^2)
  ModeLayout lay(ModelKind::MassiveSchwinger, 3, 3, 2, 37.0);
  const double M = 1 / std::sqrt(pi);
  for (int k = -3; k <= 3; ++k) {
    const double rho = vertex_rho(lay, k, std::sqrt(4 * pi), p);
    const double x = M * 37.0 / (2 * pi);
    EXPECT_NEAR(rho, 1.0 / std::sqrt(k * k + x * x), 1e-14);
  }
}

TEST(Kappa, ReferenceValues) {
  EXPECT_NEAR(kappa(0.5), 1.0 / pi, 1e-14);
  // independent 40-digit Gamma evaluation
  EXPECT_NEAR(kappa(0.25), 0.18855053301390891156, 1e-10);
  EXPECT_THROW(kappa(1.0), std::invalid_argument);
  EXPECT_THROW(kappa(0.0), std::invalid_argument);
  const double L = 15.0;
  EXPECT_NEAR(coupling(ModelKind::SineGordon, L, sg(0.5)), 2 * pi / L / pi, 1e-14);
}

TEST(Coupling, Schwinger) {
  EXPECT_EQ(coupling(ModelKind::MassiveSchwinger, 100.0, ms(0.0, 0.0)), 0.0);
  const double lam = coupling(ModelKind::MassiveSchwinger, 100.0, ms(0.2, 0.0));
  EXPECT_NEAR(lam, -(0.2 / std::sqrt(pi) / (2 * pi)) * std::exp(0.5772156649015329), 1e-15);
  EXPECT_LT(lam, 0.0);
}

TEST(FreeMpo, SpectrumAndBond) {
  ModeLayout lay(ModelKind::SineGordon, 2, 2, 1, 15.0);
  auto p = sg(0.25);
  auto h0 = free_mpo(lay, p);
  for (int b = 1; b < lay.num_sites(); ++b) EXPECT_EQ(h0.bond_dim(b), 2);
  auto sp = mpo_to_sparse(h0);
  auto basis = enumerate_basis(lay, p);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const long d = basis.dense_index[i];
    EXPECT_NEAR(std::abs(sp.coeff(d, d) - basis.free_energy[i]), 0.0, 1e-13);
  }
  // vacuum: all non-zero levels 0, zero mode l = 0
  std::vector<int> vac(lay.num_sites(), 0);
  vac[lay.zero_site()] = lay.n_zm();
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (basis.states[i] == vac) EXPECT_EQ(basis.free_energy[i], 0.0);
  // zero-mode level l: l^2 beta^2 / (2L) = 4 pi Delta l^2 / L
  for (int lvl = 0; lvl < lay.local_dim(lay.zero_site()); ++lvl) {
    const int l = lay.zero_mode_label(lvl);
    EXPECT_NEAR(level_energy(lay, lay.zero_site(), lvl, p), 4 * pi * 0.25 * l * l / 15.0, 1e-14);
  }
  EXPECT_NEAR(level_energy(lay, lay.site_of(2), 1, p), 4 * pi / 15.0, 1e-14);
}

TEST(VertexMpo, VacuumElementIsLength) {
  for (auto model : {ModelKind::SineGordon, ModelKind::MassiveSchwinger}) {
    ModeLayout lay(model, 2, 2, 1, 7.0);
    ModelParams p = model == ModelKind::SineGordon ? sg(0.3) : ms(0.1, 0.0);
    const double a = interaction_alpha(model, p);
    auto sp = mpo_to_sparse(vertex_mpo(lay, a, p));
    auto basis = enumerate_basis(lay, p);
    std::vector<int> vac(lay.num_sites(), 0);
    if (model == ModelKind::SineGordon) vac[lay.zero_site()] = lay.n_zm();
    for (std::size_t i = 0; i < basis.size(); ++i)
      if (basis.states[i] == vac) {
        const long d = basis.dense_index[i];
        if (model == ModelKind::MassiveSchwinger) {
          EXPECT_NEAR(std::abs(sp.coeff(d, d) - 7.0), 0.0, 1e-13);
        } else {
          // sG: vacuum couples to l = +1 only
          EXPECT_EQ(sp.coeff(d, d), cplx{});
        }
      }
  }
}

TEST(VertexMpo, MatchesOracleAndAdjointPairs) {
  for (auto model : {ModelKind::SineGordon, ModelKind::MassiveSchwinger}) {
    ModeLayout lay(model, 2, 2, 1, 9.0);
    ModelParams p = model == ModelKind::SineGordon ? sg(0.25) : ms(0.2, 0.4);
    const double a = interaction_alpha(model, p);
    auto basis = enumerate_basis(lay, p);
    for (double s : {+1.0, -1.0}) {
      auto sp = mpo_to_sparse(vertex_mpo(lay, s * a, p));
      double scale = 0.0;
      const double err = compare(sp, basis, build_dense_vertex(basis, s * a, p), &scale);
      EXPECT_LT(err, 1e-12 * scale);
    }
    auto vp = mpo_to_sparse(mpo_adjoint(vertex_mpo(lay, a, p)));
    auto vm = mpo_to_sparse(vertex_mpo(lay, -a, p));
    EXPECT_LT((Eigen::MatrixXcd(vp) - Eigen::MatrixXcd(vm)).cwiseAbs().maxCoeff(), 1e-12 * lay.length());
  }
  ModeLayout lay(ModelKind::SineGordon, 1, 1, 1, 9.0);
  EXPECT_THROW(vertex_mpo(lay, 0.3, sg(0.25)), std::invalid_argument);
}

TEST(Hamiltonian, MatchesEdHermitianBlockDiagonal) {
  struct Case {
    ModelKind model;
    int kmax, nmax, nzm;
    double L;
    ModelParams p;
  };
  std::vector<Case> cases{{ModelKind::SineGordon, 2, 2, 1, 15.0, sg(0.25)},
                          {ModelKind::SineGordon, 2, 3, 2, 15.0, sg(0.5)},
                          {ModelKind::MassiveSchwinger, 2, 2, 1, 100.0, ms(0.2, pi)},
                          {ModelKind::MassiveSchwinger, 3, 3, 2, 30.0, ms(0.4, 0.7)}};
  for (const auto& c : cases) {
    ModeLayout lay(c.model, c.kmax, c.nmax, c.nzm, c.L);
    auto h = assemble_hamiltonian(lay, c.p);
    auto sp = mpo_to_sparse(h);
    auto basis = enumerate_basis(lay, c.p);
    double scale = 0.0;
    auto hed = build_dense_h(basis, c.p);
    const double err = compare(sp, basis, hed, &scale);
    EXPECT_LT(err, 1e-12 * scale);
    Eigen::MatrixXcd full(sp);
    EXPECT_LT((full - full.adjoint()).cwiseAbs().maxCoeff(), 1e-12 * scale);
    // zero between momentum sectors
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (basis.momentum[i] != basis.momentum[j]) ASSERT_EQ(hed(i, j), cplx{});
    // bond dimension 2 D_delta + 2
    auto d = build_delta_mps(lay);
    for (int b = 1; b < lay.num_sites(); ++b) EXPECT_EQ(h.bond_dim(b), 2 * d.bond_dim(b) + 2);
  }
}

TEST(Hamiltonian, FreeLimitSpectrum) {
  ModeLayout lay(ModelKind::MassiveSchwinger, 2, 2, 2, 100.0);
  auto p = ms(0.0, 0.0);
  auto basis = enumerate_basis(lay, p, 0);
  auto spec = dense_spectrum(build_dense_h(basis, p), 3);
  EXPECT_NEAR(spec.values[0], 0.0, 1e-12);
  EXPECT_NEAR(spec.values[1] - spec.values[0], 1 / std::sqrt(pi), 1e-12);
}

TEST(EdOracle, BasisCounts) {
  ModeLayout lay(ModelKind::MassiveSchwinger, 1, 1, 1, 10.0);
  ModelParams p;
  EXPECT_EQ(enumerate_basis(lay, p, 0).size(), 4u);
  auto full = enumerate_basis(lay, p);
  EXPECT_EQ(static_cast<double>(full.size()), lay.total_dim());
  std::size_t sum = 0;
  for (int q = -2; q <= 2; ++q) sum += enumerate_basis(lay, p, q).size();
  EXPECT_EQ(sum, full.size());
  ModeLayout big(ModelKind::SineGordon, 6, 8, 8, 15.0);
  EXPECT_THROW(enumerate_basis(big, p), std::invalid_argument);
}

TEST(EdOracle, SpectrumResiduals) {
  ModeLayout lay(ModelKind::SineGordon, 2, 2, 1, 15.0);
  auto p = sg(0.25);
  auto basis = enumerate_basis(lay, p, 0);
  auto h = build_dense_h(basis, p);
  auto spec = dense_spectrum(h, 4);
  for (int i = 0; i < 4; ++i)
    EXPECT_LT((h * spec.vectors.col(i) - spec.values[i] * spec.vectors.col(i)).norm(), 1e-10);
  Eigen::MatrixXcd one(1, 1);
  one(0, 0) = 2.5;
  EXPECT_EQ(dense_spectrum(one, 1).values[0], 2.5);
}

TEST(EdOracle, GroundEnergyDecreasesWithCaps) {
  auto p = sg(0.25);
  double prev = 1e9;
  for (int nmax = 1; nmax <= 3; ++nmax) {
    ModeLayout lay(ModelKind::SineGordon, 2, nmax, 2, 15.0);
    auto basis = enumerate_basis(lay, p, 0);
    const double e = dense_spectrum(build_dense_h(basis, p), 1).values[0];
    EXPECT_LE(e, prev + 1e-12);
    prev = e;
  }
}
