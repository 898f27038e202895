#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "qftn/delta_mps.hpp"

using namespace qftn;

namespace {

// calls f on every transfer configuration
template <class F>
void for_each_config(const DeltaMPS& d, F&& f) {
  const int l = d.num_sites();
  std::vector<int> idx(l, 0), cfg(l);
  while (true) {
    for (int j = 0; j < l; ++j) cfg[j] = d.alphabets[j][idx[j]];
    f(cfg);
    int j = l - 1;
    for (; j >= 0; --j) {
      if (++idx[j] < static_cast<int>(d.alphabets[j].size())) break;
      idx[j] = 0;
    }
    if (j < 0) return;
  }
}

}  // namespace

TEST(Capacity, Examples) {
  ModeLayout a(ModelKind::SineGordon, 6, 8, 8, 15.0);
  EXPECT_EQ(capacity(a).K, 165);
  EXPECT_EQ(capacity(a).bound, 193);
  ModeLayout b(ModelKind::SineGordon, 1, 1, 1, 15.0);
  EXPECT_EQ(capacity(b).K, 5);
  for (int k = 1; k <= 8; ++k)
    for (int n = 1; n <= 10; ++n) {
      ModeLayout l(ModelKind::MassiveSchwinger, k, n, 1, 10.0);
      EXPECT_LE(capacity(l).K, capacity(l).bound);
    }
}

TEST(PlusTensor, SlicesArePermutationsAndComposeCyclically) {
  const int K = 9;
  auto p = plus_tensor(transfer_alphabet(2, 2), K);
  EXPECT_EQ(p.at(0), Eigen::MatrixXi::Identity(K, K));
  for (const auto& [i, m] : p) {
    EXPECT_EQ(m.colwise().sum(), Eigen::RowVectorXi::Ones(K));
    EXPECT_EQ(m.rowwise().sum(), Eigen::VectorXi::Ones(K));
  }
  for (const auto& [i, a] : p)
    for (const auto& [j, b] : p) EXPECT_EQ(b * a, plus_slice(i + j, K));
  EXPECT_THROW(plus_tensor({-6, 0, 6}, K), std::invalid_argument);
}

TEST(DeltaMps, SmallestLayoutEnumeration) {
  auto d = build_delta_mps(std::vector<int>{-1, 1}, std::vector<int>{1, 1}, 0);
  for (int a : {-1, 0, 1})
    for (int b : {-1, 0, 1}) {
      const int expect = a + b == 0 ? 1 : 0;
      EXPECT_EQ(delta_amplitude(d, {a, b}), expect);
      EXPECT_EQ(delta_amplitude_cyclic(d, {a, b}), expect);
    }
}

TEST(DeltaMps, SingleModeTarget) {
  for (int t = -3; t <= 3; t += 3) {
    auto d = build_delta_mps(std::vector<int>{3}, std::vector<int>{1}, t);
    for (int x : {-3, 0, 3}) EXPECT_EQ(delta_amplitude(d, {x}), x == t ? 1 : 0);
  }
  EXPECT_THROW(build_delta_mps(std::vector<int>{3}, std::vector<int>{1}, 2), std::invalid_argument);
}

TEST(DeltaMps, AllZeroConfigurationIsOne) {
  ModeLayout lay(ModelKind::SineGordon, 5, 7, 2, 15.0);
  auto d = build_delta_mps(lay);
  EXPECT_EQ(delta_amplitude(d, std::vector<int>(lay.num_sites(), 0)), 1);
}

TEST(DeltaMps, ExhaustiveSmallLayouts) {
  for (int kmax = 1; kmax <= 3; ++kmax)
    for (int nmax = 1; nmax <= 3; ++nmax) {
      ModeLayout lay(ModelKind::SineGordon, kmax, nmax, 1, 15.0);
      auto d = build_delta_mps(lay);
      long ones = 0;
      for_each_config(d, [&](const std::vector<int>& cfg) {
        const int s = std::accumulate(cfg.begin(), cfg.end(), 0);
        const int a = delta_amplitude(d, cfg);
        ASSERT_EQ(a, s == 0 ? 1 : 0);
        ASSERT_EQ(delta_amplitude_cyclic(d, cfg), a);
        ones += a;
      });
      EXPECT_GT(ones, 0);
      EXPECT_LE(d.max_bond(), 4 * kmax * nmax + 1);
      EXPECT_LE(d.max_bond(), d.K);
    }
}

TEST(DeltaMps, BondProfileGrowsTowardMiddle) {
  ModeLayout lay(ModelKind::SineGordon, 6, 8, 8, 15.0);
  auto d = build_delta_mps(lay);
  EXPECT_EQ(d.bond_dim(0), 1);
  EXPECT_EQ(d.bond_dim(d.num_sites()), 1);
  const int mid = d.num_sites() / 2;
  for (int b = 1; b <= mid; ++b) EXPECT_GE(d.bond_dim(b), d.bond_dim(b - 1));
  for (int b = mid + 1; b <= d.num_sites(); ++b) EXPECT_LE(d.bond_dim(b), d.bond_dim(b - 1));
  EXPECT_LE(d.max_bond(), 4 * 6 * 8 + 1);
}

TEST(DeltaMps, OrderingIndependence) {
  std::mt19937 rng(11);
  ModeLayout lay(ModelKind::SineGordon, 3, 3, 1, 15.0);
  std::vector<int> modes, caps;
  for (int s = 0; s < lay.num_sites(); ++s) {
    modes.push_back(lay.mode(s));
    caps.push_back(lay.cap(lay.mode(s)));
  }
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<int> perm(modes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pm, pc;
    for (int i : perm) {
      pm.push_back(modes[i]);
      pc.push_back(caps[i]);
    }
    for (int target : {0, 2}) {
      auto d = build_delta_mps(pm, pc, target);
      for_each_config(d, [&](const std::vector<int>& cfg) {
        const int s = std::accumulate(cfg.begin(), cfg.end(), 0);
        ASSERT_EQ(delta_amplitude(d, cfg), s == target ? 1 : 0);
      });
    }
  }
}

TEST(DeltaMps, RejectsForeignTransfer) {
  auto d = build_delta_mps(std::vector<int>{-2, 2}, std::vector<int>{1, 1}, 0);
  EXPECT_THROW(delta_amplitude(d, {1, -1}), std::invalid_argument);
}
