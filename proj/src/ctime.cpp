#include "sbfi/ctime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sbfi {

ContinuousModel::ContinuousModel(double gamma, double kappa) : gamma_(gamma), kappa_(kappa) {
  if (!std::isfinite(gamma) || !(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!std::isfinite(kappa) || kappa < 0.0) throw std::invalid_argument("kappa must be non-negative");
  k_ = std::sqrt(kappa * kappa + 4.0 * gamma * gamma) / 2.0;
}

ContinuousEigenvalues lambda_t(const ContinuousModel& model, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const double g = model.gamma();
  const double kap = model.kappa();
  const double k = model.k();
  // cosh(Kt) + c sinh(Kt) folded into the two decaying exponentials.
  const double c = kap / (2.0 * k);
  const double slow = std::exp((k - g - kap / 2.0) * t);
  const double fast = std::exp((-k - g - kap / 2.0) * t);
  return {0.5 * (1.0 + c) * slow + 0.5 * (1.0 - c) * fast, std::exp(-2.0 * g * t)};
}

std::pair<double, double> laplace_poles(const ContinuousModel& model) {
  const double s = 2.0 * model.k();
  const double b = model.kappa() + 2.0 * model.gamma();
  return {(-b + s) / 2.0, (-b - s) / 2.0};
}

namespace {

// y = (lambda, m) with m_t = int_0^t e^{-(kappa+gamma)(t-s)} lambda_s ds.
std::vector<double> integrate(const ContinuousModel& model, double h, std::size_t steps) {
  const double g = model.gamma();
  const double decay = model.kappa() + g;
  auto rhs = [&](double l, double m) { return std::pair{-g * l + g * g * m, -decay * m + l}; };
  std::vector<double> out(steps + 1);
  double l = 1.0;
  double m = 0.0;
  out[0] = l;
  for (std::size_t i = 1; i <= steps; ++i) {
    const auto [k1l, k1m] = rhs(l, m);
    const auto [k2l, k2m] = rhs(l + 0.5 * h * k1l, m + 0.5 * h * k1m);
    const auto [k3l, k3m] = rhs(l + 0.5 * h * k2l, m + 0.5 * h * k2m);
    const auto [k4l, k4m] = rhs(l + h * k3l, m + h * k3m);
    l += h / 6.0 * (k1l + 2.0 * k2l + 2.0 * k3l + k4l);
    m += h / 6.0 * (k1m + 2.0 * k2m + 2.0 * k3m + k4m);
    out[i] = l;
  }
  return out;
}

}  // namespace

VolterraSolution volterra_oracle(const ContinuousModel& model, double t_max, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("step must be positive");
  if (!(t_max >= 0.0)) throw std::invalid_argument("t_max must be non-negative");
  const auto steps = static_cast<std::size_t>(std::llround(t_max / step));
  const double h = steps > 0 ? t_max / static_cast<double>(steps) : step;

  const auto coarse = integrate(model, h, steps);
  const auto fine = integrate(model, h / 2.0, 2 * steps);

  VolterraSolution sol;
  sol.t.resize(steps + 1);
  sol.lam.resize(steps + 1);
  double worst = 0.0;
  for (std::size_t i = 0; i <= steps; ++i) {
    sol.t[i] = h * static_cast<double>(i);
    sol.lam[i] = fine[2 * i];
    worst = std::max(worst, std::abs(coarse[i] - fine[2 * i]));
  }
  sol.error_estimate = worst / 15.0;
  sol.resolved = sol.error_estimate <= kVolterraTolerance;
  return sol;
}

RateFunctions rates(const ContinuousModel& model, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const double g = model.gamma();
  const double s = 2.0 * model.k();
  RateFunctions out;
  out.gamma1 = g;
  out.gamma2 = g;
  out.gamma3 = t > 0.0 ? -2.0 * g * g / (s / std::tanh(0.5 * s * t) + model.kappa()) : 0.0;
  out.big_gamma = g + out.gamma3;
  return out;
}

ChainParams stroboscopic_params(const ContinuousModel& model, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("collision time must be positive");
  return ChainParams{0.0, 0.5, 0.0, 0.5 * std::exp(-model.kappa() * tau)};
}

CollisionModel stroboscopic_collision_model(const ContinuousModel& model, double tau) {
  return CollisionModel(stroboscopic_params(model, tau), std::exp(-2.0 * model.gamma() * tau));
}

std::vector<StroboscopicRow> stroboscopic_convergence(const ContinuousModel& model, double t,
                                                      const std::vector<double>& taus) {
  if (!(t > 0.0)) throw std::invalid_argument("time must be positive");
  const auto exact = lambda_t(model, t);
  std::vector<StroboscopicRow> rows;
  for (double tau : taus) {
    const int n = static_cast<int>(std::ceil(t / tau - 1e-9));
    const auto traj = eigenvalues_recurrence(stroboscopic_collision_model(model, tau), n);
    StroboscopicRow row;
    row.tau = tau;
    row.n = n;
    row.discrete = traj.lam.back();
    row.discrete3 = traj.lam3.back();
    row.exact = exact.lam;
    row.exact3 = exact.lam3;
    row.error = std::abs(row.discrete - row.exact);
    rows.push_back(row);
  }
  return rows;
}

PauliDiagonalMap PauliSemigroup::at(double t) const {
  const auto& [r1, r2, r3] = rates;
  return PauliDiagonalMap(1.0, std::exp(-(r2 + r3) * t), std::exp(-(r1 + r3) * t), std::exp(-(r1 + r2) * t));
}

PauliDiagonalMap ConvexSemigroups::at(double t) const {
  const auto s = slow.at(t);
  const auto f = fast.at(t);
  std::array<double, 4> l{};
  for (std::size_t j = 0; j < 4; ++j) l[j] = slow.weight * s[j] + fast.weight * f[j];
  return PauliDiagonalMap(l);
}

ConvexSemigroups convex_two_semigroups(const ContinuousModel& model) {
  const double g = model.gamma();
  const double kap = model.kappa();
  const double k = model.k();
  ConvexSemigroups out;
  out.a = 0.5 + kap / (4.0 * k);
  // sigma_1 decays at -z±; with gamma1 = gamma2 = gamma this fixes gamma3.
  auto branch = [&](double weight, double r3) {
    PauliSemigroup s;
    s.weight = weight;
    s.rates = {g, g, r3};
    s.completely_positive = std::all_of(s.rates.begin(), s.rates.end(), [](double r) { return r >= 0.0; });
    return s;
  };
  out.slow = branch(out.a, kap / 2.0 - k);
  out.fast = branch(1.0 - out.a, kap / 2.0 + k);
  return out;
}

}  // namespace sbfi
