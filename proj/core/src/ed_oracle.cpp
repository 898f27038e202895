#include "qftn/ed_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "qftn/vertex_elements.hpp"

namespace qftn {

DenseBasis enumerate_basis(const ModeLayout& layout, const ModelParams& p, std::optional<Charge> sector,
                           double cap) {
  if (layout.total_dim() > cap) throw std::invalid_argument("enumerate_basis: dimension exceeds cap");
  DenseBasis b;
  b.layout = layout;
  const int n = layout.num_sites();
  std::vector<long> stride(n, 1);
  for (int s = n - 2; s >= 0; --s) stride[s] = stride[s + 1] * layout.local_dim(s + 1);
  std::vector<int> lv(n, 0);
  while (true) {
    Charge q = 0;
    double e = 0.0;
    long idx = 0;
    for (int s = 0; s < n; ++s) {
      q += layout.level_charge(s, lv[s]);
      e += level_energy(layout, s, lv[s], p);
      idx += stride[s] * layout.dense_position(s, lv[s]);
    }
    if (!sector || *sector == q) {
      b.states.push_back(lv);
      b.free_energy.push_back(e);
      b.momentum.push_back(q);
      b.dense_index.push_back(idx);
    }
    int s = n - 1;
    for (; s >= 0; --s) {
      if (++lv[s] < layout.local_dim(s)) break;
      lv[s] = 0;
    }
    if (s < 0) break;
  }
  return b;
}

Eigen::MatrixXcd build_dense_vertex(const DenseBasis& basis, double alpha, const ModelParams& p) {
  const ModeLayout& lay = basis.layout;
  const int n = lay.num_sites();
  // per-site single-mode matrices in level indexing
  std::vector<Eigen::MatrixXcd> g(n);
  for (int s = 0; s < n; ++s) {
    const int k = lay.mode(s);
    if (k == 0 && lay.model() == ModelKind::SineGordon) {
      g[s] = zero_mode_shift(alpha < 0 ? -1 : 1, lay.n_zm()).cast<cplx>();
    } else {
      const double omega = k == 0 ? schwinger_boson_mass(p.ms) : dispersion(lay.model(), k, lay.length(), p);
      g[s] = mode_vertex_matrix(lay.local_dim(s) - 1, VertexArg{alpha, omega, lay.length()});
    }
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd v = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (basis.momentum[i] != basis.momentum[j]) continue;
      cplx prod = lay.length();
      for (int s = 0; s < n && prod != cplx{}; ++s) prod *= g[s](basis.states[i][s], basis.states[j][s]);
      v(i, j) = prod;
    }
  return v;
}

Eigen::MatrixXcd build_dense_h(const DenseBasis& basis, const ModelParams& p) {
  const ModeLayout& lay = basis.layout;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = basis.free_energy[i];
  const double lam = coupling(lay.model(), lay.length(), p);
  if (lam == 0.0) return h;
  const double a = interaction_alpha(lay.model(), p);
  const Eigen::MatrixXcd vp = build_dense_vertex(basis, +a, p);
  const Eigen::MatrixXcd vm = build_dense_vertex(basis, -a, p);
  if (lay.model() == ModelKind::SineGordon) {
    h -= 0.5 * lam * (vp + vm);
  } else {
    const cplx ph = std::exp(cplx(0.0, p.ms.theta));
    h += 0.5 * lam * (std::conj(ph) * vp + ph * vm);
  }
  return h;
}

DenseSpectrum dense_spectrum(const Eigen::MatrixXcd& h, int n_lowest) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense_spectrum: eigensolver failed");
  const int m = std::min<int>(n_lowest, static_cast<int>(h.rows()));
  return {es.eigenvalues().head(m), es.eigenvectors().leftCols(m)};
}

Eigen::VectorXcd embed(const DenseBasis& basis, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.layout.total_dim()));
  for (std::size_t i = 0; i < basis.size(); ++i) out(basis.dense_index[i]) = v(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace qftn
