#pragma once

// Two-site TDVP real-time evolution with global Krylov basis enrichment.

#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qftn/dmrg.hpp"
#include "qftn/hamiltonian.hpp"
#include "qftn/mps.hpp"

namespace qftn {

struct TdvpSettings {
  double dt = 2e-2;
  TruncationPolicy policy{1e-4, 2500};
  int krylov_count = 2;
  double eps_k = 1e-8;   ///< compression of the Krylov vectors
  double eps_m = 1e-10;  ///< cutoff of the added basis directions
  int krylov_chi = 3000;
  bool expand_every_step = true;  ///< false: expand only before the first step
  double expm_tol = 1e-10;
  int expm_basis = 60;
};

/// Adds the bond directions of H psi, ..., H^k psi with zero amplitude; the
/// state itself is unchanged. Center 0 on return.
MpsState krylov_expand(const MpoOperator& h, const MpsState& psi, const TdvpSettings& s);

struct StepInfo {
  double discarded = 0.0;  ///< largest discarded norm of the step
  int max_iterations = 0;  ///< largest local Krylov dimension used
};

/// One symmetric left-right-left sweep advancing psi by dt under exp(-i H dt).
/// The input must be normalized; the output is normalized with center 0.
MpsState tdvp_step(const MpoOperator& h, const MpsState& psi, const TdvpSettings& s, StepInfo* info = nullptr);

struct QuenchSample {
  double t = 0.0;
  double energy = 0.0;
  cplx cos_value{};
  double norm = 1.0;
  std::vector<double> entropies;  ///< bond b at index b - 1
  int max_chi = 0;
  double discarded = 0.0;
};

struct RdmSnapshot {
  double t = 0.0;
  int mode = 0;
  Eigen::MatrixXcd rho;
};

struct QuenchObservables {
  bool entropies = true;
  std::vector<int> rdm_modes;
  std::vector<double> rdm_times;
};

struct QuenchTrajectory {
  std::vector<QuenchSample> samples;
  std::vector<RdmSnapshot> rdms;
  MpsState final_state;
};

/// Pre-quench state: the free vacuum (a product state) when the coupling of
/// params vanishes, otherwise a DMRG ground state in sector 0.
MpsState pre_quench_state(const ModeLayout& layout, const ModelParams& params, const DmrgSettings& dmrg,
                          std::mt19937_64& rng);

/// Free vacuum: all occupations 0, sG zero mode at l = 0.
MpsState free_vacuum(const ModeLayout& layout);

/// Evolves psi0 under params' Hamiltonian for round(t_total / dt) steps,
/// recording energy, the space-averaged cosine, entropies and requested RDMs
/// at every step (including t = 0).
QuenchTrajectory quench_run(const ModeLayout& layout, const ModelParams& params, const MpsState& psi0,
                            double t_total, const TdvpSettings& s, const QuenchObservables& obs,
                            const std::function<void(const QuenchSample&)>& on_sample = {});

}  // namespace qftn
