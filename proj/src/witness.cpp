#include "sbfi/witness.hpp"

#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "sbfi/pauli.hpp"

namespace sbfi {

namespace {

void require_two_qubits(const HelstromEnsemble& e, const char* what) {
  if (e.dim() != 4) throw std::invalid_argument(std::string(what) + " requires a two-qubit ensemble");
}

ComplexMatrix bloch_basis(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex e = std::polar(1.0, phi);
  return ComplexMatrix(2, {c, -std::conj(e) * s, e * s, c});
}

double off_diagonal_trace_norm(const ComplexMatrix& u, const ComplexMatrix& x) {
  ComplexMatrix m = u.adjoint() * x * u;
  for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = 0.0;
  // Rounding can leave m a few ulps away from Hermitian; symmetrize.
  ComplexMatrix h = (m + m.adjoint()) * Complex(0.5);
  return trace_norm(HermitianOperator(std::move(h)));
}

struct WeightedState {
  double weight;
  const ComplexMatrix* state;
};

class QuantumnessObjective {
 public:
  explicit QuantumnessObjective(const HelstromEnsemble& e) {
    const auto mixed = ComplexMatrix::identity(4) * Complex(0.25);
    // Maximally mixed states are untouched by every dephasing.
    if (e.mu() > 0.0 && e.rho().matrix().max_abs_diff(mixed) > 1e-15) terms_.push_back({e.mu(), &e.rho().matrix()});
    if (e.mu() < 1.0 && e.sigma().matrix().max_abs_diff(mixed) > 1e-15)
      terms_.push_back({1.0 - e.mu(), &e.sigma().matrix()});
  }

  bool trivial() const { return terms_.empty(); }

  double operator()(const ComplexMatrix& u) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t.weight * off_diagonal_trace_norm(u, *t.state);
    return 0.5 * sum;
  }

  double operator()(const MeasurementPair& m) const { return (*this)(m.unitary()); }

 private:
  std::vector<WeightedState> terms_;
};

std::vector<std::pair<double, double>> hemisphere_grid(int azimuth, int polar) {
  if (azimuth < 1 || polar < 2) throw std::invalid_argument("quantumness grid needs azimuth >= 1 and polar >= 2");
  std::vector<std::pair<double, double>> pts{{0.0, 0.0}};
  for (int i = 1; i < polar; ++i) {
    const double theta = std::numbers::pi / 2.0 * i / (polar - 1);
    for (int j = 0; j < azimuth; ++j) pts.emplace_back(theta, 2.0 * std::numbers::pi * j / azimuth);
  }
  return pts;
}

double gsl_objective(const gsl_vector* v, void* params) {
  const auto& f = *static_cast<const QuantumnessObjective*>(params);
  return f(MeasurementPair{gsl_vector_get(v, 0), gsl_vector_get(v, 1), gsl_vector_get(v, 2), gsl_vector_get(v, 3)});
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

QuantumnessResult nelder_mead(const QuantumnessObjective& f, const MeasurementPair& start, const QuantumnessOptions& o) {
  std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(4));
  std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(4));
  gsl_vector_set(x.get(), 0, start.theta1);
  gsl_vector_set(x.get(), 1, start.phi1);
  gsl_vector_set(x.get(), 2, start.theta2);
  gsl_vector_set(x.get(), 3, start.phi2);
  gsl_vector_set_all(step.get(), 0.05);

  gsl_multimin_function fn{&gsl_objective, 4, const_cast<QuantumnessObjective*>(&f)};
  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4));
  gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get());
  for (int it = 0; it < o.max_iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != 0) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()), o.simplex_tolerance) == GSL_SUCCESS) break;
  }
  const gsl_vector* best = gsl_multimin_fminimizer_x(solver.get());
  const MeasurementPair m{gsl_vector_get(best, 0), gsl_vector_get(best, 1), gsl_vector_get(best, 2),
                          gsl_vector_get(best, 3)};
  return {f(m), m};
}

}  // namespace

HelstromEnsemble::HelstromEnsemble(double mu, DensityMatrix rho, DensityMatrix sigma)
    : mu_(mu), rho_(std::move(rho)), sigma_(std::move(sigma)) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw std::invalid_argument("Helstrom bias must lie in [0, 1]");
  if (rho_.dim() != sigma_.dim()) throw std::invalid_argument("Helstrom states must have equal dimension");
}

HermitianOperator HelstromEnsemble::helstrom_matrix() const {
  return HermitianOperator(rho_.matrix() * Complex(mu_) - sigma_.matrix() * Complex(1.0 - mu_));
}

HelstromEnsemble HelstromEnsemble::evolved(const PauliDiagonalMap& m) const {
  return HelstromEnsemble(mu_, DensityMatrix(evolve(m, rho_.matrix())), DensityMatrix(evolve(m, sigma_.matrix())));
}

ComplexMatrix evolve(const PauliDiagonalMap& m, const ComplexMatrix& x) {
  if (x.dim() == 2) return apply(m, x);
  if (x.dim() == 4) return apply_product(m, m, x);
  throw std::invalid_argument("evolve expects a one- or two-qubit matrix");
}

MapFamily discrete_family(EigenvalueTrajectory trajectory) {
  return [traj = std::move(trajectory)](double t) { return traj.map(static_cast<int>(std::llround(t))); };
}

MapFamily continuous_family(const ContinuousModel& model) {
  return [model](double t) { return lambda_t(model, t).map(); };
}

double HelstromSeries::max_increment() const {
  return increments.empty() ? 0.0 : *std::max_element(increments.begin(), increments.end());
}

bool HelstromSeries::has_revival(double threshold) const { return max_increment() > threshold; }

HelstromSeries helstrom_trajectory(const MapFamily& family, const HelstromEnsemble& ensemble, int tensor_power,
                                   std::span<const double> times) {
  const std::size_t expected = tensor_power == 1 ? 2 : tensor_power == 2 ? 4 : 0;
  if (expected == 0) throw std::invalid_argument("tensor power must be 1 or 2");
  if (ensemble.dim() != expected) throw std::invalid_argument("ensemble dimension does not match the tensor power");
  const ComplexMatrix delta = ensemble.helstrom_matrix().matrix();
  HelstromSeries out;
  out.times.assign(times.begin(), times.end());
  out.norms.reserve(times.size());
  for (double t : times) out.norms.push_back(trace_norm(HermitianOperator(evolve(family(t), delta))));
  for (std::size_t i = 1; i < out.norms.size(); ++i) out.increments.push_back(out.norms[i] - out.norms[i - 1]);
  return out;
}

namespace {

PauliDiagonalMap unitary_step(const ChainParams& params, int n) {
  if (params.r != 0.0) throw std::invalid_argument("witness expansion requires r = 0");
  if (n < 2) throw std::invalid_argument("intertwiner step must be at least 2");
  return intertwiner(eigenvalues_recurrence(unitary_model(params), n), n, n - 1);
}

}  // namespace

double symmetric_projector_witness(const ChainParams& params, int n) {
  const auto step = unitary_step(params, n);
  const double l2 = step[1] * step[1];
  const double l3sq = step[3] * step[3];
  const std::array<double, 4> eig{1.0 - l3sq, 1.0 - l3sq, 1.0 + l3sq + 2.0 * l2, 1.0 + l3sq - 2.0 * l2};
  double norm = 0.0;
  for (double e : eig) norm += std::abs(e) / 4.0;
  return norm - 1.0;
}

double symmetric_projector_leading_order(const ChainParams& params) {
  return 4.0 * params.p * params.p * (2.0 * params.q() - 1.0);
}

SingleQubitExpansion single_qubit_expansion(const ChainParams& params, const HermitianOperator& x, int n) {
  if (params.p > 0.05) throw std::invalid_argument("single-qubit expansion requires p <= 0.05");
  if (x.dim() != 2) throw std::invalid_argument("single-qubit expansion expects a 2x2 operator");
  const auto step = unitary_step(params, n);
  const auto c = pauli_coefficients(x.matrix());
  const double x0 = c[0].real();
  const double plane = c[1].real() * c[1].real() + c[2].real() * c[2].real();
  const double axis = c[3].real() * c[3].real();
  const double p = params.p;
  const double q = params.q();

  SingleQubitExpansion out;
  const double before = trace_norm(x);
  out.exact_difference = trace_norm(HermitianOperator(apply(step, x.matrix()))) - before;
  out.bloch_norm_sq = step[1] * step[1] * plane + step[3] * step[3] * axis;
  out.bloch_norm_sq_expansion =
      plane + axis - 4.0 * p * plane - 8.0 * p * axis + 4.0 * p * p * ((1.0 + 2.0 * q) * plane + 4.0 * axis);
  out.expansion_difference = 2.0 * std::max(std::abs(x0), std::sqrt(std::max(0.0, out.bloch_norm_sq_expansion))) - before;
  return out;
}

ComplexMatrix MeasurementPair::unitary() const {
  return tensor_product(bloch_basis(theta1, phi1), bloch_basis(theta2, phi2));
}

double measurement_disturbance(const ComplexMatrix& x, const MeasurementPair& m) {
  if (x.dim() != 4) throw std::invalid_argument("measurement disturbance expects a two-qubit matrix");
  return off_diagonal_trace_norm(m.unitary(), x);
}

QuantumnessResult ensemble_quantumness(const HelstromEnsemble& ensemble, const QuantumnessOptions& options) {
  require_two_qubits(ensemble, "ensemble quantumness");
  const QuantumnessObjective f(ensemble);
  if (f.trivial()) return {};

  const auto grid = hemisphere_grid(options.azimuth, options.polar);
  std::vector<ComplexMatrix> bases;
  bases.reserve(grid.size());
  for (const auto& [th, ph] : grid) bases.push_back(bloch_basis(th, ph));

  struct Candidate {
    double value;
    std::size_t i, j;
  };
  std::vector<Candidate> scored;
  scored.reserve(grid.size() * grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) scored.push_back({f(tensor_product(bases[i], bases[j])), i, j});

  const auto starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.refine_starts, 1)), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(starts), scored.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.value < b.value || (a.value == b.value && (a.i < b.i || (a.i == b.i && a.j < b.j)));
                    });

  const auto& top = scored.front();
  QuantumnessResult best{top.value,
                         MeasurementPair{grid[top.i].first, grid[top.i].second, grid[top.j].first, grid[top.j].second}};
  if (options.max_iterations <= 0) return best;
  for (std::size_t k = 0; k < starts; ++k) {
    const auto& c = scored[k];
    const auto refined = nelder_mead(
        f, MeasurementPair{grid[c.i].first, grid[c.i].second, grid[c.j].first, grid[c.j].second}, options);
    if (refined.value < best.value) best = refined;
  }
  return best;
}

BoundCheck quantumness_bound_check(const MapFamily& family, const HelstromEnsemble& ensemble, double t, double tau,
                                   double slack, const QuantumnessOptions& options) {
  require_two_qubits(ensemble, "quantumness bound");
  if (!(tau > 0.0) || !(t >= 0.0)) throw std::invalid_argument("bound check needs t >= 0 and tau > 0");
  const auto at_t = family(t);
  const auto step = compose(family(t + tau), inverse(at_t));
  if (!is_positive(step)) {
    std::ostringstream os;
    os << "intertwiner from t = " << t << " to t + tau = " << t + tau << " is not positive";
    throw std::domain_error(os.str());
  }
  const HelstromEnsemble now = ensemble.evolved(at_t);
  const ComplexMatrix delta = now.helstrom_matrix().matrix();

  BoundCheck out;
  out.lhs = trace_norm(HermitianOperator(evolve(step, delta))) - trace_norm(HermitianOperator(delta));
  out.diamond = diamond_norm(step);
  out.quantumness = ensemble_quantumness(now, options).value;
  out.rhs = 2.0 * out.diamond * out.diamond * out.quantumness;
  out.holds = out.lhs <= out.rhs + slack;
  return out;
}

SeparableConstruction separable_sbfi_construction(double a, double s, double t_max, double step) {
  if (!(s > 0.0)) throw std::invalid_argument("base time s must be positive");
  if (!(a > 0.0) || a > std::exp(-4.0 * s) + 1e-12) {
    std::ostringstream os;
    os << "isotropic weight must satisfy 0 < a <= e^{-4s} = " << std::exp(-4.0 * s) << " (a = " << a << ")";
    throw std::invalid_argument(os.str());
  }
  if (!(step > 0.0) || !(t_max > s)) throw std::invalid_argument("trajectory must extend beyond s");

  const ContinuousModel model(1.0, 0.0);
  const auto undo = inverse(lambda_t(model, s).map());
  const ComplexMatrix isotropic =
      ComplexMatrix::identity(4) * Complex((1.0 - a) / 4.0) + symmetric_projector() * Complex(a);
  DensityMatrix preimage(apply_product(undo, undo, isotropic));
  const double mu = 1.0 / (2.0 - a);

  const double min_eig = hermitian_eigenvalues(preimage).back();
  const double min_pt = hermitian_eigenvalues(HermitianOperator(partial_transpose(preimage.matrix(), true))).back();

  std::vector<double> times;
  const auto count = static_cast<std::size_t>(std::llround(t_max / step));
  for (std::size_t i = 0; i <= count; ++i) times.push_back(step * static_cast<double>(i));

  HelstromEnsemble ensemble(mu, std::move(preimage), DensityMatrix::maximally_mixed(4));
  auto series = helstrom_trajectory(continuous_family(model), ensemble, 2, times);

  double after = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.increments.size(); ++i)
    if (series.times[i] >= s - 1e-12) after = std::max(after, series.increments[i]);

  return SeparableConstruction{a,
                               s,
                               mu,
                               std::move(ensemble),
                               min_eig,
                               min_pt,
                               min_pt >= -DensityMatrix::kNegativityTolerance,
                               std::move(series),
                               after > kRevivalThreshold,
                               after};
}

bool RealMatrix::is_column_stochastic(double tol) const {
  if (dim == 0 || data.size() != dim * dim) return false;
  for (std::size_t c = 0; c < dim; ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
      if ((*this)(r, c) < -tol) return false;
      sum += (*this)(r, c);
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

MonotonicityReport classical_no_sbfi(std::span<const RealMatrix> family, std::span<const double> x, double threshold) {
  if (family.empty()) throw std::invalid_argument("stochastic family must not be empty");
  const std::size_t d = family.front().dim;
  if (x.size() != d * d) throw std::invalid_argument("vector length must be d^2");
  for (const auto& t : family) {
    if (t.dim != d) throw std::invalid_argument("stochastic matrices must share a dimension");
    if (!t.is_column_stochastic()) throw std::invalid_argument("matrix is not column stochastic");
  }
  auto l1 = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += std::abs(e);
    return s;
  };

  std::vector<double> cur(x.begin(), x.end());
  MonotonicityReport report;
  report.l1.push_back(l1(cur));
  std::vector<double> half(d * d);
  std::vector<double> next(d * d);
  for (const auto& t : family) {
    // (T ⊗ T) x computed as T X T^T with X the d x d reshaping of x.
    std::fill(half.begin(), half.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k)
        for (std::size_t l = 0; l < d; ++l) half[i * d + l] += t(i, k) * cur[k * d + l];
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t l = 0; l < d; ++l) next[i * d + j] += half[i * d + l] * t(j, l);
    cur.swap(next);
    report.l1.push_back(l1(cur));
    report.max_increase = std::max(report.max_increase, report.l1.back() - report.l1[report.l1.size() - 2]);
  }
  report.monotone = report.max_increase <= threshold;
  return report;
}

}  // namespace sbfi
