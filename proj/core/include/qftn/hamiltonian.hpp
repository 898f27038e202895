#pragma once

#include "qftn/basis_layout.hpp"
#include "qftn/delta_mps.hpp"
#include "qftn/mpo.hpp"

namespace qftn {

struct SineGordonParams {
  double delta = 0.25;  ///< scaling dimension, beta^2 = 8 pi delta
  double soliton_mass = 1.0;
};

struct SchwingerParams {
  double charge_e = 1.0;
  double mass = 0.0;  ///< fermion mass m
  double theta = 0.0;
};

struct ModelParams {
  SineGordonParams sg;
  SchwingerParams ms;
};

double sg_beta(const SineGordonParams& p);
/// M = e / sqrt(pi)
double schwinger_boson_mass(const SchwingerParams& p);

/// Mode frequency. Throws for k = 0 in the sine-Gordon model.
double dispersion(ModelKind model, int k, double length, const ModelParams& p);

/// kappa(Delta) = 2 Gamma(D) / (pi Gamma(1-D)) * [sqrt(pi) Gamma(1/(2-2D)) / (2 Gamma(D/(2-2D)))]^(2-2D)
double kappa(double delta);

/// sG: lambda = M_s^2 (2 pi / (M_s L))^(2 Delta) kappa(Delta) > 0.
/// mS: lambda = -(m M / 2 pi) e^gamma.
double coupling(ModelKind model, double length, const ModelParams& p);

/// Exponent coefficient of the interaction: beta for sG, sqrt(4 pi) for mS.
double interaction_alpha(ModelKind model, const ModelParams& p);

/// Free-mode energy of a level (normal ordered). Zero mode: sG l^2/(2 L R^2)
/// with R = 1/beta, mS M n.
double level_energy(const ModeLayout& layout, int site, int level, const ModelParams& p);

/// Vertex argument rho of a mode for exponent alpha.
double vertex_rho(const ModeLayout& layout, int k, double alpha, const ModelParams& p);

MpoOperator free_mpo(const ModeLayout& layout, const ModelParams& p);

/// Space-integrated normal-ordered vertex operator int dx :exp(i alpha Phi):
/// For sG alpha must be +-beta.
MpoOperator vertex_mpo(const ModeLayout& layout, double alpha, const ModelParams& p);

/// sG: H0 - lambda/2 (V(+b) + V(-b)); mS: H0 + lambda/2 (e^{-i theta} V(+a) + e^{i theta} V(-a)).
MpoOperator assemble_hamiltonian(const ModeLayout& layout, const ModelParams& p);

/// Space average (1/L) of the trig interaction operator
/// (e^{-i theta} V+ +- e^{i theta} V-)/2 (cos) or /(2i) (sin).
enum class TrigKind { Cos, Sin };
MpoOperator trig_mpo(const ModeLayout& layout, const ModelParams& p, TrigKind kind);

}  // namespace qftn
