#include <gtest/gtest.h>

#include <cmath>

#include "qftn/vertex_elements.hpp"

using namespace qftn;

namespace {
// term-by-term series sum_{j} (-1)^j C(n+a, n-j) x^j / j!
double laguerre_series(int n, int a, double x) {
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double binom = std::exp(std::lgamma(n + a + 1.0) - std::lgamma(n - j + 1.0) - std::lgamma(a + j + 1.0));
    s += (j % 2 ? -1.0 : 1.0) * binom * std::pow(x, j) / std::tgamma(j + 1.0);
  }
  return s;
}
}  // namespace

TEST(Laguerre, Basics) {
  for (int a = 0; a < 4; ++a) EXPECT_EQ(laguerre(0, a, 1.7), 1.0);
  EXPECT_DOUBLE_EQ(laguerre(1, 0, 0.5), 0.5);
  EXPECT_NEAR(laguerre(2, 1, 1.0), 0.5, 1e-15);
  EXPECT_THROW(laguerre(-1, 0, 1.0), std::invalid_argument);
  EXPECT_THROW(laguerre(1, -1, 1.0), std::invalid_argument);
}

TEST(Laguerre, MatchesSeries) {
  for (int n = 0; n <= 12; ++n)
    for (int a = 0; a <= 12; ++a)
      for (double x : {0.01, 0.3, 1.0, 4.0})
        EXPECT_NEAR(laguerre(n, a, x), laguerre_series(n, a, x), 1e-9 * (1 + std::abs(laguerre_series(n, a, x))));
}

TEST(FSeries, SmallCases) {
  const cplx zb(0.3, -0.7), zk(-0.2, 0.5);
  EXPECT_EQ(f_series(0, 0, zb, zk), cplx(1.0));
  EXPECT_NEAR(std::abs(f_series(1, 0, zb, zk) - zb), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f_series(1, 1, zb, zk) - (1.0 + zb * zk)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(f_series(0, 1, zb, zk) - zk), 0.0, 1e-15);
}

TEST(GElement, SmallCases) {
  for (double rho : {0.0, 0.1, 1.0, 3.0}) {
    EXPECT_NEAR(std::abs(g_element(0, 0, rho) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(g_element(1, 1, rho) - (1.0 - rho)), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(g_element(2, 0, rho) - (-rho / std::sqrt(2.0))), 0.0, 1e-14);
  }
  EXPECT_THROW(g_element(0, 0, -1.0), std::invalid_argument);
}

TEST(GElement, SeriesOracleBothSigns) {
  for (double rho : {0.01, 0.1, 1.0, 5.0, 10.0})
    for (int s : {+1, -1}) {
      const cplx z(0.0, s * std::sqrt(rho));
      for (int a = 0; a <= 12; ++a)
        for (int b = 0; b <= 12; ++b) {
          const cplx f = f_series(a, b, z, z);
          const cplx g = g_element(a, b, rho, s);
          EXPECT_LE(std::abs(f - g), 1e-12 * std::max(1.0, std::abs(f))) << a << " " << b << " " << rho;
        }
    }
}

TEST(GElement, HermiticityPairing) {
  const int cap = 6;
  for (double a : {0.3, 1.7}) {
    auto mp = mode_vertex_matrix(cap, VertexArg{+a, 0.8, 5.0});
    auto mm = mode_vertex_matrix(cap, VertexArg{-a, 0.8, 5.0});
    EXPECT_LT((mp.adjoint() - mm).cwiseAbs().maxCoeff(), 1e-14);
  }
  auto m0 = mode_vertex_matrix(cap, VertexArg{1e-9, 1.0, 1.0});
  EXPECT_LT((m0 - Eigen::MatrixXcd::Identity(cap + 1, cap + 1)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(ModeVertexTensor, ZeroAlphaIsIdentityAtZeroTransfer) {
  auto t = mode_vertex_tensor(2, VertexArg{0.0, 1.0, 1.0}, 3);
  for (const auto& [k, b] : t.blocks()) {
    if (b.data[0] == cplx{}) continue;
    EXPECT_EQ(k[2], 0);
    EXPECT_EQ(k[0], k[1]);
    EXPECT_EQ(b.data[0], cplx(1.0));
  }
}

TEST(ModeVertexTensor, TwoLevelK1) {
  const double rho = 0.37;
  VertexArg arg{std::sqrt(2.0 * rho * 1.3 * 2.0), 1.3, 2.0};
  ASSERT_NEAR(arg.rho(), rho, 1e-14);
  auto t = mode_vertex_tensor(1, arg, 1);
  EXPECT_NEAR(std::abs(t.find({0, 0, 0})->data[0] - 1.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(t.find({1, 1, 0})->data[0] - (1.0 - rho)), 0, 1e-15);
  // bra 0 ket 1: transfer +1; bra 1 ket 0: transfer -1
  EXPECT_NEAR(std::abs(t.find({0, 1, 1})->data[0] - g_element(0, 1, rho)), 0, 1e-15);
  EXPECT_NEAR(std::abs(t.find({1, 0, -1})->data[0] - g_element(1, 0, rho)), 0, 1e-15);
  EXPECT_EQ(t.max_flux_violation(), 0);
  std::vector<Charge> tr{-1, 0, 1};
  EXPECT_EQ(t.index(2).charges(), tr);
}

TEST(ModeVertexTensor, DiagonalIsLaguerre) {
  const double rho = 0.8;
  VertexArg arg{std::sqrt(2.0 * rho), 1.0, 1.0};
  auto t = mode_vertex_tensor(-2, arg, 4);
  for (int n = 0; n <= 4; ++n) EXPECT_NEAR(t.find({-2 * n, -2 * n, 0})->data[0].real(), laguerre(n, 0, rho), 1e-14);
  EXPECT_EQ(t.max_flux_violation(), 0);
}

TEST(ZeroModeShift, Structure) {
  auto z0 = zero_mode_shift(1, 0);
  ASSERT_EQ(z0.rows(), 1);
  EXPECT_EQ(z0(0, 0), 0.0);
  auto z1 = zero_mode_shift(1, 1);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(3, 3);
  e(1, 0) = 1;  // l=-1 -> 0
  e(2, 1) = 1;  // l=0 -> 1
  EXPECT_EQ(z1, e);
  for (int n = 0; n < 5; ++n) EXPECT_EQ(zero_mode_shift(1, n).transpose(), zero_mode_shift(-1, n));
}
