#include "sbfi/dynamics.hpp"

#include <cmath>
#include <sstream>

namespace sbfi {

namespace {

struct UnitaryConstants {
  double alpha;
  double beta;
};

UnitaryConstants unitary_constants(const ChainParams& c) {
  const double alpha = 1.0 - 2.0 * (c.p + c.r);
  return {alpha, std::sqrt(alpha * alpha + 16.0 * c.p * c.delta)};
}

bool usable_denominator(double x) { return std::isnormal(x); }

}  // namespace

CollisionModel::CollisionModel(MarkovChainEnv env, double varphi) : env_(std::move(env)), varphi_(varphi) {
  if (!std::isfinite(varphi) || std::abs(varphi) > 1.0) throw std::invalid_argument("collision parameter must satisfy |varphi| <= 1");
  phi_[0] = PauliDiagonalMap::identity();
  for (std::size_t k = 1; k < 4; ++k) {
    std::array<double, 4> mu{1.0, varphi, varphi, varphi};
    mu[k] = 1.0;
    phi_[k] = PauliDiagonalMap(mu);
  }
}

PauliDiagonalMap CollisionModel::path_map(std::span<const int> symbols) const {
  std::array<double, 4> l{1.0, 1.0, 1.0, 1.0};
  for (int s : symbols) {
    const auto& mu = collision(s).lambda();
    for (std::size_t j = 1; j < 4; ++j) l[j] *= mu[j];
  }
  return PauliDiagonalMap(l);
}

PauliDiagonalMap reduced_map_bruteforce(const CollisionModel& model, int n, double prune_below) {
  std::array<double, 4> sum{};
  for_each_path(model.env(), n, prune_below, [&](std::span<const int> s, double prob) {
    const auto l = model.path_map(s).lambda();
    for (std::size_t j = 0; j < 4; ++j) sum[j] += prob * l[j];
  });
  return PauliDiagonalMap(sum);
}

std::vector<PauliDiagonalMap> reduced_maps_bruteforce(const CollisionModel& model, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  if (n_max > kMaxExactPathLength) throw std::length_error("brute-force path sum limited to 12 steps");
  std::vector<std::array<double, 4>> sums(static_cast<std::size_t>(n_max) + 1, std::array<double, 4>{});
  const auto& env = model.env();

  auto recurse = [&](auto& self, int depth, int last, double prob, std::array<double, 4> prod) -> void {
    for (std::size_t j = 0; j < 4; ++j) sums[static_cast<std::size_t>(depth)][j] += prob * prod[j];
    if (depth == n_max) return;
    for (int s = 0; s < kSymbols; ++s) {
      const double next = depth == 0 ? env.stationary()[static_cast<std::size_t>(s)] : prob * env.step(s, last);
      if (next <= 0.0) continue;
      auto p = prod;
      const auto& mu = model.collision(s).lambda();
      for (std::size_t j = 1; j < 4; ++j) p[j] *= mu[j];
      self(self, depth + 1, s, next, p);
    }
  };
  recurse(recurse, 0, 0, 1.0, {1.0, 1.0, 1.0, 1.0});

  std::vector<PauliDiagonalMap> out;
  out.reserve(sums.size());
  for (const auto& s : sums) out.emplace_back(s);
  return out;
}

PauliDiagonalMap EigenvalueTrajectory::map(int n) const {
  const auto k = static_cast<std::size_t>(n);
  if (n < 0 || k >= lam.size()) throw std::out_of_range("trajectory step out of range");
  return PauliDiagonalMap(1.0, lam[k], lam[k], lam3[k]);
}

EigenvalueTrajectory eigenvalues_recurrence(const CollisionModel& model, int n_max) {
  if (n_max < 0) throw std::invalid_argument("n_max must be non-negative");
  const auto& c = model.params();
  const double phi = model.varphi();
  const double a = 1.0 - (c.p + c.r) * (1.0 - phi);
  const double b = c.p * c.delta * (1.0 - phi) * (1.0 - phi);
  const double kernel = (1.0 + phi) * c.delta;
  const double a3 = 1.0 - 2.0 * c.p * (1.0 - phi);

  EigenvalueTrajectory t;
  t.n_max = n_max;
  t.lam.assign(static_cast<std::size_t>(n_max) + 1, 1.0);
  t.lam3.assign(static_cast<std::size_t>(n_max) + 1, 1.0);
  double memory = 0.0;
  for (std::size_t n = 1; n <= static_cast<std::size_t>(n_max); ++n) {
    if (n >= 2) memory = kernel * memory + t.lam[n - 2];
    t.lam[n] = a * t.lam[n - 1] + b * memory;
    t.lam3[n] = a3 * t.lam3[n - 1];
  }
  const auto [alpha, beta] = unitary_constants(c);
  t.alpha = alpha;
  t.beta = beta;
  t.gamma_hat = (beta + alpha) / 2.0;
  t.delta_hat = (beta - alpha) / 2.0;
  return t;
}

UnitaryEigenvalues eigenvalues_unitary_closed_form(const ChainParams& params, int n) {
  if (n < 0) throw std::invalid_argument("step must be non-negative");
  const auto [alpha, beta] = unitary_constants(params);
  if (!(alpha > 0.0)) throw std::domain_error("closed form requires alpha = 1 - 2(p + r) > 0");
  const double w_plus = (beta + alpha) / (2.0 * beta);
  const double w_minus = (beta - alpha) / (2.0 * beta);
  return {w_plus * std::pow((beta + alpha) / 2.0, n) + w_minus * std::pow((alpha - beta) / 2.0, n),
          std::pow(1.0 - 4.0 * params.p, n)};
}

PauliDiagonalMap intertwiner(const EigenvalueTrajectory& trajectory, int n, int m) {
  const auto den = trajectory.map(m);
  const auto num = trajectory.map(n);
  if (n == m) return PauliDiagonalMap::identity();
  for (std::size_t j = 1; j < 4; ++j) {
    if (!usable_denominator(den[j])) {
      std::ostringstream os;
      os << "Lambda_" << m << " is not invertible: lambda^(" << j << ") = " << den[j];
      throw std::domain_error(os.str());
    }
  }
  return PauliDiagonalMap(1.0, num[1] / den[1], num[2] / den[2], num[3] / den[3]);
}

bool DivisibilityVerdict::consistent(double band) const {
  auto agrees = [&](const std::optional<bool>& analytic, double margin, bool numeric) {
    return !analytic || std::abs(margin) <= band || *analytic == numeric;
  };
  return agrees(P, margin_P, numeric_P) && agrees(CP, margin_CP, numeric_CP) &&
         agrees(tensorP, margin_tensorP, numeric_tensorP);
}

DivisibilityVerdict classify_divisibility(const ChainParams& params, const DivisibilityOptions& options) {
  params.validate();
  if (options.depth < 2) throw std::invalid_argument("divisibility scan depth must be at least 2");
  const auto [alpha, beta] = unitary_constants(params);
  const double p = params.p;
  const double r = params.r;
  const double d = params.delta;
  DivisibilityVerdict v;

  if (alpha > 0.0) {
    const double x = d / alpha;
    v.margin_P = 2.0 * (alpha * (p + r) - 2.0 * p * d) / alpha;
    v.margin_CP = (r * alpha - 2.0 * p * d) / alpha;
    if (p > 0.0) {
      const double root = (p * p + r * params.p0) / (p * (std::sqrt(1.0 - 4.0 * p + 8.0 * p * p) + alpha));
      v.margin_tensorP = 2.0 * (root - x) * (2.0 * p * alpha + 4.0 * p * p * (x + root));
    } else {
      v.margin_tensorP = 2.0 * r * params.p0;
    }
    v.P = v.margin_P >= 0.0;
    v.CP = v.margin_CP >= 0.0;
    v.tensorP = v.margin_tensorP >= 0.0;
  }

  const auto trajectory = eigenvalues_recurrence(unitary_model(params), options.depth);
  double previous = 0.0;
  for (int n = 2; n <= options.depth; ++n) {
    const auto step = intertwiner(trajectory, n, n - 1);
    v.numeric_P = v.numeric_P && is_positive(step, options.tolerance);
    v.numeric_CP = v.numeric_CP && is_completely_positive(step, options.tolerance);
    v.numeric_tensorP = v.numeric_tensorP && tensor_square_is_positive(step, options.tolerance);
    v.steps_checked = n - 1;
    if (n > 2 && std::abs(step[1] - previous) < 1e-12) break;
    previous = step[1];
  }

  if (options.throw_on_mismatch && !v.consistent(options.band)) {
    std::ostringstream os;
    os << "analytic and numeric divisibility verdicts disagree at p = " << p << ", r = " << r << ", delta = " << d;
    throw DivisibilityMismatch(os.str());
  }
  return v;
}

SemigroupDecomposition semigroup_decomposition(const ChainParams& params) {
  params.validate();
  const auto [alpha, beta] = unitary_constants(params);
  if (!(beta > 0.0)) throw std::domain_error("semigroup decomposition requires beta > 0");
  const double l3 = 1.0 - 4.0 * params.p;
  const double plus = (beta + alpha) / 2.0;
  const double minus = (alpha - beta) / 2.0;
  return {(beta + alpha) / (2.0 * beta), PauliDiagonalMap(1.0, plus, plus, l3), (beta - alpha) / (2.0 * beta),
          PauliDiagonalMap(1.0, minus, minus, l3)};
}

}  // namespace sbfi
