#pragma once

// Two-site DMRG in a fixed momentum sector.

#include <functional>
#include <random>
#include <vector>

#include "qftn/basis_layout.hpp"
#include "qftn/hamiltonian.hpp"
#include "qftn/krylov.hpp"
#include "qftn/mps.hpp"

namespace qftn {

struct SweepRecord {
  int sweep = 0;
  double energy = 0.0;
  double variance = -1.0;  ///< negative when not evaluated
  int max_bond = 0;
  double discarded = 0.0;  ///< largest discarded norm of the sweep
  double seconds = 0.0;
};

struct DmrgSettings {
  TruncationPolicy policy{1e-6, 2500};
  int max_sweeps = 40;
  int min_sweeps = 2;
  double energy_tol = 1e-9;
  LanczosSettings solver{};
  /// Variance per sweep is costly at large bond dimension; the final value is
  /// always computed when compute_variance is set.
  bool compute_variance = true;
  bool variance_every_sweep = false;
  std::function<void(const SweepRecord&)> on_sweep;
};

/// 1e-9 for sine-Gordon, 1e-8 for Schwinger.
double default_energy_tol(ModelKind model);

struct DmrgReport {
  std::vector<double> sweep_energies;
  std::vector<double> half_sweep_energies;
  std::vector<SweepRecord> records;
  double variance = -1.0;
  std::vector<int> bond_dims;
  double discarded_weight = 0.0;  ///< summed squares of all discarded norms
  int sweeps = 0;
  bool converged = false;
};

struct DmrgResult {
  double energy = 0.0;
  MpsState state;
  DmrgReport report;
};

DmrgResult ground_state(const MpoOperator& h, MpsState psi0, const DmrgSettings& s);

/// Lowest state orthogonal to every lower state (same sector). The local
/// problems are projected against the lower states' local tensors.
DmrgResult excited_state(const MpoOperator& h, const std::vector<MpsState>& lower, MpsState psi0,
                         const DmrgSettings& s);

/// Enlarges the bond sectors of psi by those of H psi (compressed with the
/// moderate policy); psi itself is kept, normalized, center 0. A chi_max of 0
/// means four times the current maximal bond dimension.
MpsState global_subspace_expansion(const MpoOperator& h, const MpsState& psi,
                                   TruncationPolicy moderate = {1e-8, 0});

/// Level assignments of the count lowest free-energy product states in the
/// sector, lowest first (fewer when the sector is small).
std::vector<std::vector<int>> lowest_product_states(const ModeLayout& layout, const ModelParams& p, Charge sector,
                                                    int count);

/// Random state carrying every reachable bond charge with four directions
/// (one of them populated), plus the directions of the eight lowest free
/// product states, followed by one global subspace expansion.
MpsState initial_state(const MpoOperator& h, const ModeLayout& layout, const ModelParams& p, Charge sector,
                       std::mt19937_64& rng);

}  // namespace qftn
