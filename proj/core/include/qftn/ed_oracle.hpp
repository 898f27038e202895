#pragma once

// Dense exact diagonalization on tiny layouts. Deliberately direct: every
// matrix element is a product of single-mode vertex elements.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qftn/hamiltonian.hpp"

namespace qftn {

struct DenseBasis {
  ModeLayout layout;
  std::vector<std::vector<int>> states;  ///< levels per site
  std::vector<double> free_energy;
  std::vector<Charge> momentum;
  std::vector<long> dense_index;  ///< position in the MPO dense ordering

  std::size_t size() const { return states.size(); }
};

DenseBasis enumerate_basis(const ModeLayout& layout, const ModelParams& p,
                           std::optional<Charge> sector = std::nullopt, double cap = 2e5);

/// <i| Vint(alpha) |j> = L delta_{P_i P_j} Z(l_i, l_j) prod_k G(n_i(k), n_j(k)).
Eigen::MatrixXcd build_dense_vertex(const DenseBasis& basis, double alpha, const ModelParams& p);

Eigen::MatrixXcd build_dense_h(const DenseBasis& basis, const ModelParams& p);

struct DenseSpectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

DenseSpectrum dense_spectrum(const Eigen::MatrixXcd& h, int n_lowest);

/// Embeds a basis-coefficient vector into the full MPO dense ordering.
Eigen::VectorXcd embed(const DenseBasis& basis, const Eigen::VectorXcd& v);

}  // namespace qftn
