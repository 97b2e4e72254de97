#pragma once

// Helstrom distinguishability, its revivals, and the ensemble quantumness
// bound on them.

#include <functional>
#include <span>
#include <vector>

#include "sbfi/ctime.hpp"
#include "sbfi/dynamics.hpp"
#include "sbfi/qmat.hpp"

namespace sbfi {

/// Increments above this count as a revival.
inline constexpr double kRevivalThreshold = 1e-9;

class HelstromEnsemble {
 public:
  /// Throws std::invalid_argument unless mu in [0, 1] and dimensions match.
  HelstromEnsemble(double mu, DensityMatrix rho, DensityMatrix sigma);

  double mu() const { return mu_; }
  const DensityMatrix& rho() const { return rho_; }
  const DensityMatrix& sigma() const { return sigma_; }
  std::size_t dim() const { return rho_.dim(); }

  /// mu rho - (1 - mu) sigma.
  HermitianOperator helstrom_matrix() const;

  /// Both states pushed through m (dim 2) or m ⊗ m (dim 4).
  HelstromEnsemble evolved(const PauliDiagonalMap& m) const;

 private:
  double mu_;
  DensityMatrix rho_;
  DensityMatrix sigma_;
};

/// m on a qubit, m ⊗ m on two qubits.
ComplexMatrix evolve(const PauliDiagonalMap& m, const ComplexMatrix& x);

/// Dynamical map as a function of time.
using MapFamily = std::function<PauliDiagonalMap(double)>;

/// Time is rounded to the nearest step index.
MapFamily discrete_family(EigenvalueTrajectory trajectory);
MapFamily continuous_family(const ContinuousModel& model);

struct HelstromSeries {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> increments;  // norms[i+1] - norms[i]

  double max_increment() const;
  bool has_revival(double threshold = kRevivalThreshold) const;
};

/// Trace norm of the evolved Helstrom matrix. tensor_power must match the
/// ensemble: 1 for qubits, 2 for qubit pairs.
HelstromSeries helstrom_trajectory(const MapFamily& family, const HelstromEnsemble& ensemble, int tensor_power,
                                   std::span<const double> times);

/// ||Lambda_{n,n-1} ⊗ Lambda_{n,n-1}[P2+]||_1 - 1 from the Choi spectrum.
double symmetric_projector_witness(const ChainParams& params, int n);

/// 4 p^2 (2Q - 1).
double symmetric_projector_leading_order(const ChainParams& params);

struct SingleQubitExpansion {
  double exact_difference = 0.0;      // ||Lambda_{n,n-1}[X]||_1 - ||X||_1
  double expansion_difference = 0.0;  // same, from the second-order Bloch norm
  double bloch_norm_sq = 0.0;         // |y|^2, exact
  double bloch_norm_sq_expansion = 0.0;
};

/// Requires r = 0, p <= 0.05, X 2x2. Expands |y|^2 to second order in p with
/// delta = Q p.
SingleQubitExpansion single_qubit_expansion(const ChainParams& params, const HermitianOperator& x, int n = 2);

/// Local projective measurement: one Bloch direction per qubit.
struct MeasurementPair {
  double theta1 = 0.0, phi1 = 0.0;
  double theta2 = 0.0, phi2 = 0.0;

  /// Columns are the product basis vectors |n1±> ⊗ |n2±>.
  ComplexMatrix unitary() const;
};

/// ||x - P[x]||_1 for the dephasing P in the basis of the measurement.
double measurement_disturbance(const ComplexMatrix& x, const MeasurementPair& m);

struct QuantumnessOptions {
  int azimuth = 24;
  int polar = 12;
  int refine_starts = 4;
  int max_iterations = 4000;
  double simplex_tolerance = 1e-12;
};

struct QuantumnessResult {
  double value = 0.0;
  MeasurementPair argmin;
};

/// 1/2 min_P [mu ||rho - P rho||_1 + (1 - mu) ||sigma - P sigma||_1] over
/// local projective measurements on two qubits.
QuantumnessResult ensemble_quantumness(const HelstromEnsemble& ensemble, const QuantumnessOptions& options = {});

struct BoundCheck {
  double lhs = 0.0;  // D(t + tau) - D(t)
  double rhs = 0.0;  // 2 ||Lambda_{t+tau,t}||_diamond^2 Q(t)
  double diamond = 0.0;
  double quantumness = 0.0;
  bool holds = true;
};

/// Throws std::domain_error if Lambda_{t+tau,t} is not positive.
BoundCheck quantumness_bound_check(const MapFamily& family, const HelstromEnsemble& ensemble, double t, double tau,
                                   double slack = 1e-6, const QuantumnessOptions& options = {});

struct SeparableConstruction {
  double a = 0.0;
  double s = 0.0;
  double mu = 0.0;
  HelstromEnsemble ensemble;
  double min_eigenvalue = 0.0;
  double min_partial_transpose_eigenvalue = 0.0;
  bool ppt = false;
  HelstromSeries trajectory;
  bool triggered = false;
  double max_increment_after_s = 0.0;
};

/// Separable pair {rho_a^0, I/4} whose Helstrom matrix is mapped onto a
/// multiple of P2+ at time s by the kappa = 0, gamma = 1 dynamics.
/// Requires 0 < a <= e^{-4s}.
SeparableConstruction separable_sbfi_construction(double a, double s, double t_max = 3.0, double step = 0.005);

/// Row-major square real matrix.
struct RealMatrix {
  std::size_t dim = 0;
  std::vector<double> data;

  double operator()(std::size_t r, std::size_t c) const { return data[r * dim + c]; }
  bool is_column_stochastic(double tol = 1e-12) const;
};

struct MonotonicityReport {
  std::vector<double> l1;
  double max_increase = 0.0;
  bool monotone = true;
};

/// Applies T_k ⊗ T_k in sequence to x (length d^2) and records the l1 norms.
/// Throws std::invalid_argument on non-stochastic input.
MonotonicityReport classical_no_sbfi(std::span<const RealMatrix> family, std::span<const double> x,
                                     double threshold = 1e-12);

}  // namespace sbfi
