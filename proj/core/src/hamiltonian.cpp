#include "qftn/hamiltonian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qftn/vertex_elements.hpp"

namespace qftn {

using std::numbers::pi;

double sg_beta(const SineGordonParams& p) { return std::sqrt(8.0 * pi * p.delta); }

double schwinger_boson_mass(const SchwingerParams& p) { return p.charge_e / std::sqrt(pi); }

double dispersion(ModelKind model, int k, double length, const ModelParams& p) {
  const double pk = 2.0 * pi * k / length;
  if (model == ModelKind::SineGordon) {
    if (k == 0) throw std::invalid_argument("dispersion: sine-Gordon zero mode has no frequency");
    return std::abs(pk);
  }
  const double m = schwinger_boson_mass(p.ms);
  return std::sqrt(pk * pk + m * m);
}

double kappa(double d) {
  if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("kappa: delta must lie in (0, 1)");
  const double pref = 2.0 * std::tgamma(d) / (pi * std::tgamma(1.0 - d));
  const double br = std::sqrt(pi) * std::tgamma(1.0 / (2.0 - 2.0 * d)) / (2.0 * std::tgamma(d / (2.0 - 2.0 * d)));
  return pref * std::pow(br, 2.0 - 2.0 * d);
}

double coupling(ModelKind model, double length, const ModelParams& p) {
  if (model == ModelKind::SineGordon) {
    const double ms = p.sg.soliton_mass;
    // M_s^(2 - 2 Delta) (2 pi / L)^(2 Delta), finite at M_s = 0
    return std::pow(ms, 2.0 - 2.0 * p.sg.delta) * std::pow(2.0 * pi / length, 2.0 * p.sg.delta) * kappa(p.sg.delta);
  }
  // standard bosonization coefficient e^gamma / (2 pi); with 4 pi every mass is effectively halved
  return -(p.ms.mass * schwinger_boson_mass(p.ms) / (2.0 * pi)) * std::exp(std::numbers::egamma);
}

double interaction_alpha(ModelKind model, const ModelParams& p) {
  return model == ModelKind::SineGordon ? sg_beta(p.sg) : std::sqrt(4.0 * pi);
}

double level_energy(const ModeLayout& layout, int site, int level, const ModelParams& p) {
  const int k = layout.mode(site);
  if (k == 0) {
    if (layout.model() == ModelKind::SineGordon) {
      const int l = layout.zero_mode_label(level);
      const double beta = sg_beta(p.sg);
      return l * l * beta * beta / (2.0 * layout.length());
    }
    return schwinger_boson_mass(p.ms) * level;
  }
  return dispersion(layout.model(), k, layout.length(), p) * level;
}

double vertex_rho(const ModeLayout& layout, int k, double alpha, const ModelParams& p) {
  double omega = k == 0 ? schwinger_boson_mass(p.ms) : dispersion(layout.model(), k, layout.length(), p);
  return VertexArg{alpha, omega, layout.length()}.rho();
}

MpoOperator free_mpo(const ModeLayout& layout, const ModelParams& p) {
  MpoOperator out;
  const int n = layout.num_sites();
  const GradedSpace edge = GradedSpace::trivial(0, Direction::In);
  const GradedSpace inner({{0, 2}}, Direction::In);
  for (int s = 0; s < n; ++s) {
    const GradedSpace& phys = layout.space(s);
    const GradedSpace left = s == 0 ? edge : inner;
    const GradedSpace right = (s == n - 1 ? edge : inner).dual();
    BlockTensor t({left, phys, phys.dual(), right});
    const int dl = left.dim(), dr = right.dim();
    for (const auto& sec : phys.sectors()) {
      Block& b = t.block({0, sec.charge, sec.charge, 0});
      const int d = sec.dim;
      auto at = [&](int a, int i, int c) -> cplx& {
        return b.data[((static_cast<std::size_t>(a) * d + i) * d + i) * dr + c];
      };
      for (int i = 0; i < d; ++i) {
        const int pos = phys.offset(sec.charge) + i;
        const double e = level_energy(layout, s, layout.level_at(s, pos), p);
        if (dl == 1 && dr == 2) {
          at(0, i, 0) = 1.0;
          at(0, i, 1) = e;
        } else if (dl == 2 && dr == 2) {
          at(0, i, 0) = 1.0;
          at(0, i, 1) = e;
          at(1, i, 1) = 1.0;
        } else if (dl == 2 && dr == 1) {
          at(0, i, 0) = e;
          at(1, i, 0) = 1.0;
        } else {
          at(0, i, 0) = e;
        }
      }
    }
    out.sites.push_back(std::move(t));
  }
  return out;
}

MpoOperator vertex_mpo(const ModeLayout& layout, double alpha, const ModelParams& p) {
  const int sign = alpha < 0 ? -1 : 1;
  if (layout.model() == ModelKind::SineGordon) {
    const double beta = sg_beta(p.sg);
    if (std::abs(std::abs(alpha) - beta) > 1e-12 * beta)
      throw std::invalid_argument("vertex_mpo: sine-Gordon exponent must be +-beta");
  }
  const DeltaMPS delta = build_delta_mps(layout, 0);
  MpoOperator out;
  for (int s = 0; s < layout.num_sites(); ++s) {
    const int k = layout.mode(s);
    BlockTensor v;
    if (k == 0 && layout.model() == ModelKind::SineGordon) {
      const int nz = layout.n_zm();
      const Eigen::MatrixXd sh = zero_mode_shift(sign, nz);
      const GradedSpace& phys = layout.space(s);
      v = BlockTensor({phys, phys.dual(), transfer_space(0, 0, Direction::Out)});
      Block& b = v.block({0, 0, 0});
      const int d = 2 * nz + 1;
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) b.data[static_cast<std::size_t>(a) * d + c] = sh(a, c);
    } else {
      const double omega = k == 0 ? schwinger_boson_mass(p.ms) : dispersion(layout.model(), k, layout.length(), p);
      v = mode_vertex_tensor(k, VertexArg{alpha, omega, layout.length()}, layout.cap(k));
    }
    // (bra, ket, left, right) -> (left, bra, ket, right)
    BlockTensor w = contract(v, delta.tensors[s], {{2, 1}});
    const int perm[4] = {2, 0, 1, 3};
    out.sites.push_back(w.permuted(perm));
  }
  out.sites.front() *= layout.length();
  return out;
}

MpoOperator assemble_hamiltonian(const ModeLayout& layout, const ModelParams& p) {
  const MpoOperator h0 = free_mpo(layout, p);
  const double lam = coupling(layout.model(), layout.length(), p);
  if (lam == 0.0) return h0;
  const double a = interaction_alpha(layout.model(), p);
  const MpoOperator vp = vertex_mpo(layout, +a, p), vm = vertex_mpo(layout, -a, p);
  cplx cp, cm;
  if (layout.model() == ModelKind::SineGordon) {
    cp = cm = -0.5 * lam;
  } else {
    cp = 0.5 * lam * std::exp(cplx(0.0, -p.ms.theta));
    cm = 0.5 * lam * std::exp(cplx(0.0, p.ms.theta));
  }
  return mpo_direct_sum({{1.0, &h0}, {cp, &vp}, {cm, &vm}});
}

MpoOperator trig_mpo(const ModeLayout& layout, const ModelParams& p, TrigKind kind) {
  const double a = interaction_alpha(layout.model(), p);
  const double theta = layout.model() == ModelKind::SineGordon ? 0.0 : p.ms.theta;
  const MpoOperator vp = vertex_mpo(layout, +a, p), vm = vertex_mpo(layout, -a, p);
  const double inv = 1.0 / layout.length();
  cplx cp = 0.5 * inv * std::exp(cplx(0.0, -theta)), cm = 0.5 * inv * std::exp(cplx(0.0, theta));
  if (kind == TrigKind::Sin) {
    cp /= cplx(0.0, 1.0);
    cm /= cplx(0.0, -1.0);
  }
  return mpo_direct_sum({{cp, &vp}, {cm, &vm}});
}

}  // namespace qftn
