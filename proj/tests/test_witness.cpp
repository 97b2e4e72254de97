#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sbfi/correlations.hpp"
#include "sbfi/validate.hpp"
#include "sbfi/witness.hpp"

using namespace sbfi;

namespace {

DensityMatrix random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  auto rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return DensityMatrix((rho + rho.adjoint()) * Complex(0.5));
}

DensityMatrix diagonal_state(std::array<double, 4> d) { return DensityMatrix(ComplexMatrix::diagonal(d)); }

std::vector<double> grid(double t_max, double step) {
  std::vector<double> t;
  for (int i = 0; i * step <= t_max + 1e-12; ++i) t.push_back(i * step);
  return t;
}

}  // namespace

TEST_CASE("Helstrom trajectories") {
  std::mt19937_64 rng(51);
  const auto rho = random_state(rng, 4);
  const HelstromEnsemble same(0.5, rho, rho);
  const auto s = helstrom_trajectory(continuous_family(ContinuousModel(1.0, 0.3)), same, 2, grid(2.0, 0.1));
  for (double v : s.norms) CHECK(std::abs(v) < 1e-15);
  CHECK_FALSE(s.has_revival());
  CHECK_THROWS_AS(helstrom_trajectory(continuous_family(ContinuousModel(1.0, 0.3)), same, 1, grid(1.0, 0.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(HelstromEnsemble(1.2, rho, rho), std::invalid_argument);
  CHECK_THROWS_AS(HelstromEnsemble(0.5, rho, random_state(rng, 2)), std::invalid_argument);
}

TEST_CASE("single-qubit P-divisible dynamics has no revival") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int tested = 0;
  while (tested < 40) {
    const auto params = random_chain(rng);
    if (!classify_divisibility(params).P.value()) continue;
    ++tested;
    const HelstromEnsemble e(u(rng), random_state(rng, 2), random_state(rng, 2));
    std::vector<double> steps;
    for (int n = 0; n <= 25; ++n) steps.push_back(n);
    const auto s = helstrom_trajectory(discrete_family(eigenvalues_recurrence(unitary_model(params), 25)), e, 1, steps);
    CHECK(s.max_increment() <= 1e-12);
  }
  for (double kappa : {0.0, 0.5, 2.0}) {
    const HelstromEnsemble e(u(rng), random_state(rng, 2), random_state(rng, 2));
    CHECK(helstrom_trajectory(continuous_family(ContinuousModel(1.0, kappa)), e, 1, grid(5.0, 0.01)).max_increment() <= 1e-12);
  }
}

TEST_CASE("symmetric projector witness") {
  const double p = 0.01;
  const auto strong = ChainParams::from_p_r_delta(p, 0.0, p);
  CHECK(symmetric_projector_leading_order(strong) == doctest::Approx(4e-4));
  for (int n = 2; n <= 20; ++n) {
    const double w = symmetric_projector_witness(strong, n);
    CHECK(w == doctest::Approx(4e-4).epsilon(0.05));
    // Direct evaluation of the norm on the evolved projector.
    const auto step = intertwiner(eigenvalues_recurrence(unitary_model(strong), n), n, n - 1);
    const double direct = trace_norm(HermitianOperator(apply_product(step, step, symmetric_projector()))) - 1.0;
    CHECK(w == doctest::Approx(direct).epsilon(1e-10));
  }
  const auto half = ChainParams::from_p_r_delta(1e-3, 0.0, 0.5e-3);
  CHECK(std::abs(symmetric_projector_witness(half, 5)) < 1e-2 * 4e-6);
  CHECK(symmetric_projector_witness(ChainParams::from_p_r_delta(0.1, 0.0, 0.0), 4) <= 1e-15);
  CHECK_THROWS_AS(symmetric_projector_witness(ChainParams::from_p_r_delta(0.1, 0.1, 0.0), 4), std::invalid_argument);
  CHECK_THROWS_AS(symmetric_projector_witness(strong, 1), std::invalid_argument);
}

TEST_CASE("single-qubit expansion") {
  const double p = 0.01;
  const auto params = ChainParams::from_p_r_delta(p, 0.0, p);
  const auto z = single_qubit_expansion(params, HermitianOperator(pauli(3)));
  CHECK(std::sqrt(z.bloch_norm_sq) == doctest::Approx(1 - 4 * p));

  // The remainder is at least third order in p.
  auto remainder = [](double pp) {
    const auto e = single_qubit_expansion(ChainParams::from_p_r_delta(pp, 0.0, pp), HermitianOperator(pauli(1)));
    return std::abs(e.bloch_norm_sq - e.bloch_norm_sq_expansion);
  };
  CHECK(remainder(0.01) < 2e-5);
  CHECK(remainder(0.01) / remainder(0.005) > 7.0);
  const auto e = single_qubit_expansion(params, HermitianOperator(pauli(1)));
  CHECK(std::abs(e.exact_difference - e.expansion_difference) < 2e-5);

  const HermitianOperator psd(ComplexMatrix(2, {0.8, Complex(0.1, 0.1), Complex(0.1, -0.1), 0.4}));
  const auto t = single_qubit_expansion(params, psd);
  CHECK(std::abs(t.exact_difference) < 1e-15);
  CHECK_THROWS_AS(single_qubit_expansion(ChainParams::from_p_r_delta(0.1, 0.0, 0.1), psd), std::invalid_argument);
}

TEST_CASE("measurement disturbance") {
  const auto d = diagonal_state({0.1, 0.2, 0.3, 0.4});
  CHECK(measurement_disturbance(d.matrix(), MeasurementPair{}) < 1e-15);
  const MeasurementPair xx{std::numbers::pi / 2, 0.0, std::numbers::pi / 2, 0.0};
  // Dephasing P2+ in a product basis leaves two of its four components.
  CHECK(measurement_disturbance(symmetric_projector(), MeasurementPair{}) == doctest::Approx(1.0));
  CHECK(measurement_disturbance(symmetric_projector(), xx) == doctest::Approx(1.0));
  const auto u = xx.unitary();
  CHECK((u.adjoint() * u).max_abs_diff(ComplexMatrix::identity(4)) < 1e-15);
}

TEST_CASE("ensemble quantumness") {
  const HelstromEnsemble classical(0.3, diagonal_state({0.1, 0.2, 0.3, 0.4}), diagonal_state({0.4, 0.3, 0.2, 0.1}));
  CHECK(ensemble_quantumness(classical).value < 1e-9);

  const HelstromEnsemble bell(0.5, DensityMatrix(symmetric_projector()), DensityMatrix::maximally_mixed(4));
  const auto q = ensemble_quantumness(bell);
  CHECK(q.value == doctest::Approx(0.25).epsilon(1e-6));

  // The optimizer beats random search over measurement pairs.
  std::mt19937_64 rng(53);
  const HelstromEnsemble e(0.4, random_state(rng, 4), random_state(rng, 4));
  const auto best = ensemble_quantumness(e);
  std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi);
  double search = 1e300;
  for (int k = 0; k < 3000; ++k) {
    const MeasurementPair m{ang(rng), ang(rng), ang(rng), ang(rng)};
    search = std::min(search, 0.5 * (0.4 * measurement_disturbance(e.rho().matrix(), m) +
                                     0.6 * measurement_disturbance(e.sigma().matrix(), m)));
  }
  CHECK(best.value <= search + 1e-12);

  // Local unitaries do not change the value.
  const auto v = oracle::expm(ComplexMatrix(2, {0.3, Complex(0.2, 0.5), Complex(0.2, -0.5), -0.1}) * Complex(0, 1));
  const auto vv = tensor_product(v, v.adjoint());
  const HelstromEnsemble rotated(0.4, DensityMatrix(vv * e.rho().matrix() * vv.adjoint()),
                                 DensityMatrix(vv * e.sigma().matrix() * vv.adjoint()));
  CHECK(ensemble_quantumness(rotated).value == doctest::Approx(best.value).epsilon(1e-6));
}

TEST_CASE("isotropic ensemble quantumness is positive") {
  for (double a : {0.02, 0.05, 2.0 / 27.0}) {
    const ComplexMatrix iso = ComplexMatrix::identity(4) * Complex((1 - a) / 4) + symmetric_projector() * Complex(a);
    const HelstromEnsemble e(1.0 / (2.0 - a), DensityMatrix(iso), DensityMatrix::maximally_mixed(4));
    const double q = ensemble_quantumness(e).value;
    CHECK(q > 0.0);
    // Only rho contributes; dephasing an isotropic state removes the a P2+ coherence.
    CHECK(q == doctest::Approx(0.5 * e.mu() * a).epsilon(1e-6));
  }
}

TEST_CASE("quantumness bound") {
  const auto family = continuous_family(ContinuousModel(1.0, 0.0));
  const HelstromEnsemble classical(0.3, diagonal_state({0.1, 0.2, 0.3, 0.4}), diagonal_state({0.4, 0.3, 0.2, 0.1}));
  for (double t : {0.0, 0.5, 1.5}) {
    const auto b = quantumness_bound_check(family, classical, t, 0.01);
    CHECK(b.rhs < 1e-8);
    CHECK(b.lhs <= 1e-12);
    CHECK(b.holds);
  }
  std::mt19937_64 rng(54);
  const auto rho = random_state(rng, 4);
  const auto same = quantumness_bound_check(family, HelstromEnsemble(0.5, rho, rho), 0.7, 0.01);
  CHECK(std::abs(same.lhs) < 1e-15);
  CHECK(same.holds);
  // The kappa = 0 intertwiners are positive but not completely positive.
  CHECK(same.diamond > 1.0);

  const auto non_p = [](double t) { return PauliDiagonalMap(1.0, 1.0, 1.0, t < 1.0 ? 1.0 : 3.0); };
  CHECK_THROWS_AS(quantumness_bound_check(non_p, HelstromEnsemble(0.5, rho, rho), 0.99, 0.1), std::domain_error);
}

TEST_CASE("separable construction") {
  const double s = std::atanh(0.5);
  const auto c = separable_sbfi_construction(0.05, s);
  CHECK(c.ppt);
  CHECK(c.min_eigenvalue >= 0.0);
  CHECK(c.mu == doctest::Approx(1.0 / 1.95));
  CHECK(c.triggered);
  CHECK(c.max_increment_after_s > 0.0);
  // At time s the Helstrom matrix is a multiple of P2+.
  const auto at_s = c.ensemble.evolved(lambda_t(ContinuousModel(1.0, 0.0), s).map()).helstrom_matrix().matrix();
  CHECK(at_s.max_abs_diff(symmetric_projector() * Complex(c.mu * 0.05)) < 1e-12);

  const auto edge = separable_sbfi_construction(2.0 / 27.0, s);
  CHECK(std::abs(edge.min_partial_transpose_eigenvalue) < 1e-10);
  const auto over = separable_sbfi_construction(0.1, s);
  CHECK(over.min_partial_transpose_eigenvalue < -1e-3);
  CHECK_FALSE(over.ppt);
  CHECK_THROWS_AS(separable_sbfi_construction(0.2, s), std::invalid_argument);
}

TEST_CASE("classical stochastic dynamics contracts the l1 norm of T ⊗ T images") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  auto random_stochastic = [&](std::size_t d) {
    RealMatrix t{d, std::vector<double>(d * d)};
    for (std::size_t c = 0; c < d; ++c) {
      double sum = 0.0;
      for (std::size_t r = 0; r < d; ++r) sum += t.data[r * d + c] = u(rng);
      for (std::size_t r = 0; r < d; ++r) t.data[r * d + c] /= sum;
    }
    return t;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 4);
    std::vector<RealMatrix> family;
    for (int k = 0; k < 5; ++k) family.push_back(random_stochastic(d));
    std::vector<double> x(d * d);
    for (auto& v : x) v = g(rng);
    CHECK(classical_no_sbfi(family, x).monotone);
  }
  const RealMatrix id{3, {1, 0, 0, 0, 1, 0, 0, 0, 1}};
  const std::vector<RealMatrix> ids(4, id);
  const std::vector<double> x{1, -2, 0.5, 0, 3, -1, 0.2, 0.1, -0.3};
  const auto r = classical_no_sbfi(ids, x);
  for (double v : r.l1) CHECK(v == doctest::Approx(r.l1.front()));

  const RealMatrix mix{2, {0.5, 0.5, 0.5, 0.5}};
  const std::vector<RealMatrix> once{mix};
  const std::vector<double> zero_sum{1.0, -0.5, 0.25, -0.75};
  const auto m = classical_no_sbfi(once, zero_sum);
  CHECK(m.l1[1] < m.l1[0]);

  const RealMatrix bad{2, {0.5, 0.5, 0.6, 0.5}};
  const std::vector<RealMatrix> bads{bad};
  CHECK_THROWS_AS(classical_no_sbfi(bads, zero_sum), std::invalid_argument);
}
