#pragma once

// Discrete-time reduced dynamics of a qubit colliding with the chain.
// Collision k in {1,2,3} scales sigma_j by varphi^{1 - delta_jk}; collision 0
// is the identity.

#include <array>
#include <optional>
#include <vector>

#include "sbfi/env.hpp"
#include "sbfi/pauli.hpp"

namespace sbfi {

class CollisionModel {
 public:
  /// Throws std::invalid_argument unless |varphi| <= 1.
  CollisionModel(MarkovChainEnv env, double varphi);
  CollisionModel(const ChainParams& params, double varphi) : CollisionModel(build_chain(params), varphi) {}

  const MarkovChainEnv& env() const { return env_; }
  const ChainParams& params() const { return env_.params(); }
  double varphi() const { return varphi_; }
  const PauliDiagonalMap& collision(int k) const { return phi_[static_cast<std::size_t>(k)]; }

  /// Composite collision map for a path; Pauli maps commute so only symbol
  /// counts matter.
  PauliDiagonalMap path_map(std::span<const int> symbols) const;

 private:
  MarkovChainEnv env_;
  double varphi_;
  std::array<PauliDiagonalMap, 4> phi_;
};

/// Unitary regime varphi = -1.
inline CollisionModel unitary_model(const ChainParams& params) { return CollisionModel(params, -1.0); }

/// Lambda_n as an explicit path sum.
PauliDiagonalMap reduced_map_bruteforce(const CollisionModel& model, int n, double prune_below = 0.0);

/// Lambda_0 .. Lambda_{n_max} from a single depth-first pass.
std::vector<PauliDiagonalMap> reduced_maps_bruteforce(const CollisionModel& model, int n_max);

struct EigenvalueTrajectory {
  int n_max = 0;
  std::vector<double> lam;   // lambda_n^(1) = lambda_n^(2)
  std::vector<double> lam3;  // lambda_n^(3)
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_hat = 0.0;  // (beta + alpha) / 2
  double delta_hat = 0.0;  // (beta - alpha) / 2

  PauliDiagonalMap map(int n) const;
};

EigenvalueTrajectory eigenvalues_recurrence(const CollisionModel& model, int n_max);

struct UnitaryEigenvalues {
  double lam = 1.0;
  double lam3 = 1.0;
};

/// Closed form of the varphi = -1 regime. Throws std::domain_error when
/// alpha <= 0 or beta == 0.
UnitaryEigenvalues eigenvalues_unitary_closed_form(const ChainParams& params, int n);

/// Lambda_n ∘ Lambda_m^{-1}. Throws std::domain_error if Lambda_m has an
/// eigenvalue that is zero or subnormal.
PauliDiagonalMap intertwiner(const EigenvalueTrajectory& trajectory, int n, int m);

struct DivisibilityOptions {
  int depth = 40;
  double band = 1e-9;
  double tolerance = kPositivityTolerance;
  bool throw_on_mismatch = true;
};

struct DivisibilityVerdict {
  // Analytic verdicts; empty when alpha <= 0.
  std::optional<bool> P, CP, tensorP;
  // Signed slack of each analytic inequality, positive inside the region.
  double margin_P = 0.0, margin_CP = 0.0, margin_tensorP = 0.0;
  // Verdicts from the intertwiners Lambda_{n,n-1}, n = 2..depth.
  bool numeric_P = true, numeric_CP = true, numeric_tensorP = true;
  int steps_checked = 0;

  /// True when every analytic verdict outside the band equals its numeric one.
  bool consistent(double band) const;
};

/// Thrown when analytic and numeric verdicts disagree outside the band.
class DivisibilityMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

DivisibilityVerdict classify_divisibility(const ChainParams& params, const DivisibilityOptions& options = {});

struct SemigroupDecomposition {
  double weight_plus = 1.0;
  PauliDiagonalMap psi_plus;
  double weight_minus = 0.0;
  PauliDiagonalMap psi_minus;
};

SemigroupDecomposition semigroup_decomposition(const ChainParams& params);

}  // namespace sbfi
