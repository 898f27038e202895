#include "qftn/delta_mps.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace qftn {

Capacity capacity(const ModeLayout& layout) {
  Capacity c;
  int sum = 0;
  for (int k = -layout.k_max(); k <= layout.k_max(); ++k)
    if (k) sum += std::abs(k) * layout.cap(k);
  c.K = 1 + 2 * sum;
  c.bound = 4 * layout.k_max() * layout.n_max() + 1;
  return c;
}

std::vector<int> transfer_alphabet(int k, int cap) {
  if (k == 0) return {0};
  std::vector<int> out;
  for (int t = -cap; t <= cap; ++t) out.push_back(std::abs(k) * t);
  return out;
}

Eigen::MatrixXi plus_slice(int i, int K) {
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(K, K);
  for (int a = 0; a < K; ++a) m(((a + i) % K + K) % K, a) = 1;
  return m;
}

std::map<int, Eigen::MatrixXi> plus_tensor(const std::vector<int>& alphabet, int K) {
  std::map<int, Eigen::MatrixXi> out;
  for (int i : alphabet) {
    if (2 * std::abs(i) > K - 1) throw std::invalid_argument("plus_tensor: transfer exceeds capacity");
    out.emplace(i, plus_slice(i, K));
  }
  return out;
}

int DeltaMPS::max_bond() const {
  int m = 0;
  for (const auto& b : bonds) m = std::max(m, static_cast<int>(b.size()));
  return m;
}

DeltaMPS build_delta_mps(const std::vector<int>& modes, const std::vector<int>& caps, int target) {
  if (modes.size() != caps.size()) throw std::invalid_argument("build_delta_mps: size mismatch");
  DeltaMPS d;
  d.modes = modes;
  d.target = target;
  const int l = static_cast<int>(modes.size());
  int sum = 0;
  for (int j = 0; j < l; ++j) {
    d.alphabets.push_back(transfer_alphabet(modes[j], caps[j]));
    if (modes[j]) sum += std::abs(modes[j]) * caps[j];
  }
  d.K = 1 + 2 * sum;
  if (2 * std::abs(target) >= d.K) throw std::invalid_argument("build_delta_mps: |target| must be below K/2");

  // forward reachable and backward co-reachable sets
  std::vector<std::set<Charge>> fwd(l + 1), bwd(l + 1);
  fwd[0] = {0};
  for (int j = 0; j < l; ++j)
    for (Charge c : fwd[j])
      for (int t : d.alphabets[j]) fwd[j + 1].insert(c + t);
  bwd[l] = {target};
  for (int j = l - 1; j >= 0; --j)
    for (Charge c : bwd[j + 1])
      for (int t : d.alphabets[j]) bwd[j].insert(c - t);
  d.bonds.resize(l + 1);
  for (int b = 0; b <= l; ++b)
    std::set_intersection(fwd[b].begin(), fwd[b].end(), bwd[b].begin(), bwd[b].end(),
                          std::back_inserter(d.bonds[b]));
  if (d.bonds[l].empty()) throw std::invalid_argument("build_delta_mps: unreachable target");

  auto space = [](const std::vector<Charge>& cs, Direction dir) {
    std::vector<Sector> s;
    for (Charge c : cs) s.push_back({c, 1});
    return GradedSpace(std::move(s), dir);
  };
  for (int j = 0; j < l; ++j) {
    std::vector<Sector> ts;
    for (int t : d.alphabets[j]) ts.push_back({t, 1});
    BlockTensor t({space(d.bonds[j], Direction::In), GradedSpace(ts, Direction::In),
                   space(d.bonds[j + 1], Direction::Out)});
    const auto& right = d.bonds[j + 1];
    for (Charge c : d.bonds[j])
      for (int tr : d.alphabets[j])
        if (std::binary_search(right.begin(), right.end(), c + tr)) t.block({c, tr, c + tr}).data[0] = 1.0;
    d.tensors.push_back(std::move(t));
  }
  return d;
}

DeltaMPS build_delta_mps(const ModeLayout& layout, int target) {
  std::vector<int> modes, caps;
  for (int s = 0; s < layout.num_sites(); ++s) {
    modes.push_back(layout.mode(s));
    caps.push_back(layout.cap(layout.mode(s)));
  }
  return build_delta_mps(modes, caps, target);
}

namespace {
void check_config(const DeltaMPS& d, const std::vector<int>& config) {
  if (static_cast<int>(config.size()) != d.num_sites())
    throw std::invalid_argument("delta_amplitude: wrong configuration length");
  for (int j = 0; j < d.num_sites(); ++j)
    if (!std::binary_search(d.alphabets[j].begin(), d.alphabets[j].end(), config[j]))
      throw std::invalid_argument("delta_amplitude: transfer outside alphabet");
}
}  // namespace

int delta_amplitude(const DeltaMPS& d, const std::vector<int>& config) {
  check_config(d, config);
  Charge c = 0;
  for (int j = 0; j < d.num_sites(); ++j) {
    const Block* b = d.tensors[j].find({c, config[j], c + config[j]});
    if (!b || b->data[0] == cplx{}) return 0;
    c += config[j];
  }
  return c == d.target ? 1 : 0;
}

int delta_amplitude_cyclic(const DeltaMPS& d, const std::vector<int>& config) {
  check_config(d, config);
  const int K = d.K, z = (K - 1) / 2;
  Eigen::VectorXi v = Eigen::VectorXi::Zero(K);
  v(z) = 1;
  for (int j = 0; j < d.num_sites(); ++j) v = plus_slice(config[j], K) * v;
  return v(((z + d.target) % K + K) % K);
}

}  // namespace qftn
