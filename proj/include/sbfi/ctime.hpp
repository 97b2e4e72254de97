#pragma once

// Continuous-time limit of the dissipative collision model.
//
// Generator convention: L_t[rho] = 1/2 sum_i gamma_i(t) (sigma_i rho sigma_i - rho),
// so sigma_j decays at rate sum_{i != j} gamma_i(t).

#include <array>
#include <utility>
#include <vector>

#include "sbfi/dynamics.hpp"
#include "sbfi/pauli.hpp"

namespace sbfi {

class ContinuousModel {
 public:
  /// Throws std::invalid_argument unless gamma > 0 and kappa >= 0.
  ContinuousModel(double gamma, double kappa);

  double gamma() const { return gamma_; }
  double kappa() const { return kappa_; }
  /// K = sqrt(kappa^2 + 4 gamma^2) / 2.
  double k() const { return k_; }

 private:
  double gamma_;
  double kappa_;
  double k_;
};

struct ContinuousEigenvalues {
  double lam = 1.0;
  double lam3 = 1.0;

  PauliDiagonalMap map() const { return PauliDiagonalMap(1.0, lam, lam, lam3); }
};

/// Throws std::invalid_argument for t < 0.
ContinuousEigenvalues lambda_t(const ContinuousModel& model, double t);

/// Poles z+ >= z- of the Laplace transform of lambda_t.
std::pair<double, double> laplace_poles(const ContinuousModel& model);

struct VolterraSolution {
  std::vector<double> t;
  std::vector<double> lam;
  /// Richardson estimate of the max abs error of `lam`.
  double error_estimate = 0.0;
  bool resolved = true;
};

inline constexpr double kVolterraTolerance = 1e-6;

/// Integrates lambda' = -gamma lambda + gamma^2 int_0^t e^{-(kappa+gamma)(t-s)} lambda_s ds
/// with RK4 on the equivalent local system. `step` must divide t_max into an
/// integer number of steps up to rounding.
VolterraSolution volterra_oracle(const ContinuousModel& model, double t_max, double step);

struct RateFunctions {
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double gamma3 = 0.0;
  /// lambda_t' = -Gamma_t lambda_t.
  double big_gamma = 0.0;
};

/// Rates at time t >= 0; gamma3 takes its limit 0 at t = 0.
RateFunctions rates(const ContinuousModel& model, double t);

struct StroboscopicRow {
  double tau = 0.0;
  int n = 0;
  double discrete = 0.0;
  double discrete3 = 0.0;
  double exact = 0.0;
  double exact3 = 0.0;
  double error = 0.0;
};

/// Chain parameters for collision time tau: p = 1/2, r = p0 = 0,
/// delta = e^{-kappa tau}/2.
ChainParams stroboscopic_params(const ContinuousModel& model, double tau);
CollisionModel stroboscopic_collision_model(const ContinuousModel& model, double tau);

std::vector<StroboscopicRow> stroboscopic_convergence(const ContinuousModel& model, double t,
                                                      const std::vector<double>& taus);

/// A Pauli semigroup e^{tL} with constant rates under the generator convention above.
struct PauliSemigroup {
  double weight = 0.0;
  std::array<double, 3> rates{};
  bool completely_positive = false;

  PauliDiagonalMap at(double t) const;
};

struct ConvexSemigroups {
  /// 1/2 + kappa / (2 sqrt(kappa^2 + 4 gamma^2)); weight of the slow branch.
  double a = 0.5;
  PauliSemigroup slow;  // pole z+
  PauliSemigroup fast;  // pole z-

  PauliDiagonalMap at(double t) const;
};

ConvexSemigroups convex_two_semigroups(const ContinuousModel& model);

}  // namespace sbfi
