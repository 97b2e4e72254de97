#pragma once

// System-chain correlations. All entropies in nats.

#include <vector>

#include "sbfi/ctime.hpp"
#include "sbfi/dynamics.hpp"
#include "sbfi/qmat.hpp"

namespace sbfi {

/// Longest chain window evolve_joint_state() builds.
inline constexpr int kMaxWindowSites = 12;

struct ClassicalQuantumState {
  struct Block {
    Path path;
    DensityMatrix conditional;
  };

  std::vector<Block> blocks;
  int window_first = 0;
  int window_last = 0;

  int window_sites() const { return window_last - window_first + 1; }

  ComplexMatrix system_marginal() const;
  /// Shannon entropy of the block weights, i.e. the entropy of the chain marginal.
  double chain_entropy() const;
  /// Uses block orthogonality: H(weights) + sum_l p_l S(conditional_l).
  double joint_entropy() const;
  double mutual_information() const;

  /// Full system ⊗ chain matrix, system factor first. Throws std::length_error
  /// beyond dimension 16.
  ComplexMatrix to_matrix() const;
};

/// Joint state on the window [-a, b]; for n > a the window is extended to
/// [-(n-1), b] so that it covers every collision. Throws std::length_error
/// when the window exceeds kMaxWindowSites.
ClassicalQuantumState evolve_joint_state(const CollisionModel& model, const DensityMatrix& rho, int n, int a, int b);

/// S(Lambda_n[rho]) - sum_i p_i S(phi_i[rho]).
double mutual_information_discrete(const CollisionModel& model, const DensityMatrix& rho, int n);

/// Two qubits, each on its own copy of the chain.
double mutual_information_two_qubits_discrete(const CollisionModel& model, const DensityMatrix& rho, int n);

/// r = 0, p = 1/4 + epsilon, delta = (1 - 2p)/2.
ChainParams entropy_choice_params(double epsilon);

/// Lambda_step ⊗ Lambda_step [P2+] for step 1 or 2, entries written out in
/// closed form in epsilon.
DensityMatrix evolved_symmetric_projector(int step, double epsilon);

struct XStateParams {
  double mu1 = 0.25;
  double mu2 = 0.25;
  double nu = 0.25;
  Complex u = 0.0;
  Complex v = 0.0;

  /// Throws std::invalid_argument naming the violated bound.
  void validate() const;
};

enum class XBasis { Computational, Sigma1 };

/// X-shaped in the chosen basis. Sigma1 conjugates the computational X matrix
/// with V ⊗ V, V = (sigma1 + sigma3)/sqrt(2).
DensityMatrix x_state(const XStateParams& params, XBasis basis);

/// Requires kappa = 0. Only the constant paths 11... and 22... carry weight:
/// I = S(Lambda_t ⊗ Lambda_t[rho]) - 1/4 sum_{i,j} S(phi_i ⊗ phi_j[rho]).
double mutual_information_continuous(const ContinuousModel& model, const DensityMatrix& rho, double t);

/// The two semigroups phi_1(t), phi_2(t) of the kappa = 0 chain.
std::pair<PauliDiagonalMap, PauliDiagonalMap> constant_path_maps(const ContinuousModel& model, double t);

}  // namespace sbfi
