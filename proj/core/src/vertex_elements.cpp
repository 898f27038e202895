#include "qftn/vertex_elements.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qftn {

double laguerre(int n, int a, double x) {
  if (n < 0 || a < 0) throw std::invalid_argument("laguerre: negative order");
  using ld = long double;
  ld prev = 1.0L;
  if (n == 0) return 1.0;
  ld cur = 1.0L + a - static_cast<ld>(x);
  for (int m = 1; m < n; ++m) {
    const ld next = ((2.0L * m + 1.0L + a - x) * cur - (m + a) * prev) / (m + 1.0L);
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

cplx f_series(int n_bra, int n_ket, cplx z_bra, cplx z_ket) {
  if (n_bra < 0 || n_ket < 0) throw std::invalid_argument("f_series: negative level");
  // sum_j <n'|e^{z'A^dag}|j><j|e^{zA}|n>, accumulated in extended precision
  using lc = std::complex<long double>;
  lc acc{0.0L, 0.0L};
  const lc zb(z_bra.real(), z_bra.imag()), zk(z_ket.real(), z_ket.imag());
  const int jmax = std::min(n_bra, n_ket);
  for (int j = 0; j <= jmax; ++j) {
    const int up = n_bra - j, down = n_ket - j;
    const long double logc = 0.5L * (std::lgamma(n_bra + 1.0L) + std::lgamma(n_ket + 1.0L)) -
                             std::lgamma(j + 1.0L) - std::lgamma(up + 1.0L) - std::lgamma(down + 1.0L);
    lc term = std::exp(logc);
    for (int i = 0; i < up; ++i) term *= zb;
    for (int i = 0; i < down; ++i) term *= zk;
    acc += term;
  }
  return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

cplx g_element(int n_bra, int n_ket, double rho, int sign) {
  if (rho < 0) throw std::invalid_argument("g_element: negative rho");
  if (n_bra < 0 || n_ket < 0) throw std::invalid_argument("g_element: negative level");
  const int lo = std::min(n_bra, n_ket), hi = std::max(n_bra, n_ket), d = hi - lo;
  double mag = laguerre(lo, d, rho);
  if (d) mag *= std::exp(0.5 * (std::lgamma(lo + 1.0) - std::lgamma(hi + 1.0)) + 0.5 * d * std::log(rho));
  if (d && rho == 0.0) return {0.0, 0.0};
  // (i sign)^d
  static const cplx phase[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  int p = d % 4;
  if (sign < 0 && (d % 2)) p = (p + 2) % 4;
  return mag * phase[p];
}

Eigen::MatrixXcd mode_vertex_matrix(int cap, const VertexArg& arg) {
  const double rho = arg.rho();
  Eigen::MatrixXcd m(cap + 1, cap + 1);
  for (int a = 0; a <= cap; ++a)
    for (int b = 0; b <= cap; ++b) m(a, b) = g_element(a, b, rho, arg.sign());
  return m;
}

GradedSpace transfer_space(int k, int cap, Direction dir) {
  if (k == 0) return GradedSpace({{0, 1}}, dir);
  std::vector<Sector> s;
  const int ak = std::abs(k);
  for (int t = -cap; t <= cap; ++t) s.push_back({ak * t, 1});
  return GradedSpace(std::move(s), dir);
}

BlockTensor mode_vertex_tensor(int k, const VertexArg& arg, int cap) {
  const Eigen::MatrixXcd m = mode_vertex_matrix(cap, arg);
  if (k == 0) {
    GradedSpace lv({{0, cap + 1}}, Direction::Out);
    BlockTensor t({lv, lv.dual(), transfer_space(0, cap, Direction::Out)});
    Block& b = t.block({0, 0, 0});
    for (int a = 0; a <= cap; ++a)
      for (int c = 0; c <= cap; ++c) b.data[static_cast<std::size_t>(a) * (cap + 1) + c] = m(a, c);
    return t;
  }
  std::vector<Sector> s;
  for (int n = 0; n <= cap; ++n) s.push_back({k * n, 1});
  GradedSpace bra(s, Direction::Out), ket(s, Direction::In);
  BlockTensor t({bra, ket, transfer_space(k, cap, Direction::Out)});
  for (int a = 0; a <= cap; ++a)
    for (int c = 0; c <= cap; ++c) t.block({k * a, k * c, k * (c - a)}).data[0] = m(a, c);
  return t;
}

Eigen::MatrixXd zero_mode_shift(int sign, int n_zm) {
  if (n_zm < 0) throw std::invalid_argument("zero_mode_shift: negative n_zm");
  if (sign != 1 && sign != -1) throw std::invalid_argument("zero_mode_shift: sign must be +-1");
  const int d = 2 * n_zm + 1;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  for (int c = 0; c < d; ++c) {
    const int r = c + sign;
    if (r >= 0 && r < d) m(r, c) = 1.0;
  }
  return m;
}

}  // namespace qftn
