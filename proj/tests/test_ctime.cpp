#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "sbfi/ctime.hpp"

using namespace sbfi;

namespace {

// Liouville matrix of L[rho] = 1/2 sum_i r_i (sigma_i rho sigma_i - rho), row-major vec.
ComplexMatrix liouvillian(const std::array<double, 3>& r) {
  ComplexMatrix out(4);
  for (int i = 1; i <= 3; ++i) {
    const auto& s = oracle::paulis()[static_cast<std::size_t>(i)];
    auto term = tensor_product(s, s.transpose()) - ComplexMatrix::identity(4);
    out += term * Complex(0.5 * r[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

ComplexMatrix act(const ComplexMatrix& super, const ComplexMatrix& x) {
  ComplexMatrix out(2);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) out(a / 2, a % 2) += super(a, b) * x(b / 2, b % 2);
  return out;
}

}  // namespace

TEST_CASE("closed form") {
  const ContinuousModel m(1.0, 0.0);
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    CHECK(lambda_t(m, t).lam == doctest::Approx(std::exp(-t) * std::cosh(t)));
    CHECK(lambda_t(m, t).lam3 == doctest::Approx(std::exp(-2 * t)));
  }
  CHECK(lambda_t(ContinuousModel(1.0, 2.0), 0.0).lam == 1.0);
  CHECK_THROWS_AS(lambda_t(m, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousModel(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ContinuousModel(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("Laplace poles") {
  for (double kappa : {0.0, 0.5, 2.0, 10.0}) {
    const ContinuousModel m(1.3, kappa);
    const auto [zp, zm] = laplace_poles(m);
    CHECK(zp <= 0.0);
    CHECK(zm <= zp);
    // Roots of z^2 + (kappa + 2 gamma) z + gamma (kappa + gamma) - gamma^2 = 0.
    for (double z : {zp, zm})
      CHECK(z * z + (kappa + 2 * 1.3) * z + 1.3 * kappa == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("Volterra integrator against a trapezoid oracle") {
  for (double kappa : {0.0, 0.5, 2.0}) {
    const ContinuousModel m(1.0, kappa);
    const auto sol = volterra_oracle(m, 5.0, 0.01);
    CHECK(sol.resolved);
    CHECK(sol.error_estimate < 1e-8);
    const auto trap = oracle::volterra_trapezoid(1.0, kappa, 5.0, 5000);
    for (std::size_t i = 0; i < sol.t.size(); ++i) {
      CHECK(std::abs(sol.lam[i] - trap[i * 10]) < 1e-6);
      CHECK(std::abs(sol.lam[i] - lambda_t(m, sol.t[i]).lam) < 1e-9);
    }
  }
  const auto one = volterra_oracle(ContinuousModel(1.0, 0.0), 1.0, 0.001);
  CHECK(one.lam.back() == doctest::Approx(0.56767).epsilon(1e-5));
  // Initial slope -gamma.
  const auto early = volterra_oracle(ContinuousModel(1.7, 2.0), 1e-4, 1e-5);
  CHECK((early.lam[1] - early.lam[0]) / early.t[1] == doctest::Approx(-1.7).epsilon(1e-4));
}

TEST_CASE("rates") {
  const ContinuousModel m0(1.0, 0.0);
  for (double t = 0.05; t < 6.0; t += 0.05) {
    CHECK(rates(m0, t).gamma3 == doctest::Approx(-std::tanh(t)));
    CHECK(rates(m0, t).gamma1 == 1.0);
  }
  CHECK(rates(m0, 0.0).gamma3 == 0.0);
  const double g = 0.8, kappa = 1.5;
  const ContinuousModel m(g, kappa);
  CHECK(rates(m, 60.0).gamma3 == doctest::Approx(-2 * g * g / (std::sqrt(kappa * kappa + 4 * g * g) + kappa)));
  for (double kap : {0.0, 0.5, 2.0, 10.0})
    for (double t = 0.0; t <= 20.0; t += 0.01) {
      const auto r = rates(ContinuousModel(1.0, kap), t);
      CHECK(r.big_gamma >= 0.0);
      if (t > 0.0) CHECK(r.gamma3 < 0.0);
    }
}

TEST_CASE("stroboscopic limit") {
  const ContinuousModel m(1.0, 0.5);
  const auto rows = stroboscopic_convergence(m, 1.0, {0.1, 0.05, 0.025, 0.0125});
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) CHECK(rows[i].error > rows[i + 1].error);
  for (const auto& row : rows) {
    CHECK(row.n * row.tau == doctest::Approx(1.0));
    CHECK(row.discrete3 == doctest::Approx(row.exact3).epsilon(1e-12));
  }
  const auto sp = stroboscopic_params(m, 0.1);
  CHECK(sp.p == 0.5);
  CHECK(sp.p0 == 0.0);
  CHECK(sp.r == 0.0);
  CHECK_NOTHROW(sp.validate());
  // lambda3 = (1 - 2p(1 - phi))^n with p = 1/2.
  const auto traj = eigenvalues_recurrence(stroboscopic_collision_model(m, 0.01), 100);
  CHECK(traj.lam3.back() == doctest::Approx(std::exp(-2.0)));
}

TEST_CASE("convex combination of semigroups") {
  CHECK(convex_two_semigroups(ContinuousModel(1.0, 0.0)).a == doctest::Approx(0.5));
  CHECK(convex_two_semigroups(ContinuousModel(1.0, 2.0)).a == doctest::Approx(0.5 + 1 / (2 * std::sqrt(2.0))));
  CHECK(convex_two_semigroups(ContinuousModel(1.0, 1e6)).a == doctest::Approx(1.0).epsilon(1e-6));
  for (double kappa : {0.0, 0.5, 2.0}) {
    const ContinuousModel m(1.0, kappa);
    const auto c = convex_two_semigroups(m);
    CHECK_FALSE(c.slow.completely_positive);
    CHECK(c.fast.completely_positive);
    for (double t = 0.0; t < 5.0; t += 0.25) {
      const auto mix = c.at(t);
      CHECK(mix[1] == doctest::Approx(lambda_t(m, t).lam));
      CHECK(mix[3] == doctest::Approx(lambda_t(m, t).lam3));
    }
  }
}

TEST_CASE("semigroup eigenvalues match the exponentiated generator") {
  const std::array<double, 3> r{0.3, 0.7, -0.2};
  PauliSemigroup s;
  s.rates = r;
  for (double t : {0.1, 1.0, 2.5}) {
    const auto e = oracle::expm(liouvillian(r) * Complex(t));
    for (int j = 0; j < 4; ++j) {
      const auto& sig = oracle::paulis()[static_cast<std::size_t>(j)];
      CHECK(act(e, sig).max_abs_diff(sig * s.at(t)[static_cast<std::size_t>(j)]) < 1e-12);
    }
  }
  // Time-dependent rates: the product of short-time propagators reproduces lambda_t.
  const ContinuousModel m(1.0, 0.5);
  ComplexMatrix u = ComplexMatrix::identity(4);
  const int steps = 4000;
  const double h = 2.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const auto g = rates(m, (k + 0.5) * h);
    u = oracle::product(oracle::expm(liouvillian({g.gamma1, g.gamma2, g.gamma3}) * Complex(h)), u);
  }
  CHECK(act(u, oracle::paulis()[1]).max_abs_diff(oracle::paulis()[1] * lambda_t(m, 2.0).lam) < 1e-7);
  CHECK(act(u, oracle::paulis()[3]).max_abs_diff(oracle::paulis()[3] * lambda_t(m, 2.0).lam3) < 1e-7);
}
