#include "sbfi/correlations.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sbfi {

namespace {

constexpr double kBoundTolerance = 1e-12;

double shannon(double w) { return w > 0.0 ? -w * std::log(w) : 0.0; }

// Path weights grouped by how often each non-trivial collision occurs.
struct CountClass {
  PauliDiagonalMap map;
  double weight = 0.0;
};

std::vector<CountClass> count_classes(const CollisionModel& model, int n) {
  std::map<std::array<int, 3>, double> weights;
  for_each_path(model.env(), n, 0.0, [&](std::span<const int> s, double prob) {
    std::array<int, 3> counts{};
    for (int k : s)
      if (k > 0) ++counts[static_cast<std::size_t>(k - 1)];
    weights[counts] += prob;
  });
  std::vector<CountClass> out;
  out.reserve(weights.size());
  for (const auto& [counts, w] : weights) {
    std::array<double, 4> l{1.0, 1.0, 1.0, 1.0};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& mu = model.collision(static_cast<int>(k) + 1).lambda();
      for (std::size_t j = 1; j < 4; ++j) l[j] *= std::pow(mu[j], counts[k]);
    }
    out.push_back({PauliDiagonalMap(l), w});
  }
  return out;
}

PauliDiagonalMap average(const std::vector<CountClass>& classes) {
  std::array<double, 4> l{};
  for (const auto& c : classes)
    for (std::size_t j = 0; j < 4; ++j) l[j] += c.weight * c.map[j];
  return PauliDiagonalMap(l);
}

void require_dim(const DensityMatrix& rho, std::size_t dim) {
  if (rho.dim() != dim) {
    std::ostringstream os;
    os << "expected a " << dim << "x" << dim << " density matrix, got dimension " << rho.dim();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

ComplexMatrix ClassicalQuantumState::system_marginal() const {
  ComplexMatrix out(2);
  for (const auto& b : blocks) out += b.conditional.matrix() * Complex(b.path.probability);
  return out;
}

double ClassicalQuantumState::chain_entropy() const {
  double h = 0.0;
  for (const auto& b : blocks) h += shannon(b.path.probability);
  return h;
}

double ClassicalQuantumState::joint_entropy() const {
  double s = chain_entropy();
  for (const auto& b : blocks) s += b.path.probability * von_neumann_entropy(b.conditional);
  return s;
}

double ClassicalQuantumState::mutual_information() const {
  return von_neumann_entropy(DensityMatrix(system_marginal())) + chain_entropy() - joint_entropy();
}

ComplexMatrix ClassicalQuantumState::to_matrix() const {
  std::size_t chain_dim = 1;
  for (int k = 0; k < window_sites(); ++k) chain_dim *= kSymbols;
  if (2 * chain_dim > kMaxTensorDim) throw std::length_error("joint matrix exceeds dimension 16");
  ComplexMatrix out(2 * chain_dim);
  for (const auto& b : blocks) {
    std::size_t index = 0;
    for (int s : b.path.symbols) index = index * kSymbols + static_cast<std::size_t>(s);
    ComplexMatrix projector(chain_dim);
    projector(index, index) = 1.0;
    out += tensor_product(b.conditional.matrix(), projector) * Complex(b.path.probability);
  }
  return out;
}

ClassicalQuantumState evolve_joint_state(const CollisionModel& model, const DensityMatrix& rho, int n, int a, int b) {
  if (n < 0 || a < 0 || b < 0) throw std::invalid_argument("n, a and b must be non-negative");
  require_dim(rho, 2);
  ClassicalQuantumState out;
  out.window_first = n > a ? -(n - 1) : -a;
  out.window_last = b;
  const int sites = out.window_sites();
  if (sites > kMaxWindowSites) throw std::length_error("chain window exceeds 12 sites");

  // Collisions have happened at sites -(n-1) .. 0.
  const int history_begin = -(n - 1) - out.window_first;
  const int history_end = -out.window_first + 1;
  for_each_path(model.env(), sites, 0.0, [&](std::span<const int> s, double prob) {
    const auto history = n > 0 ? s.subspan(static_cast<std::size_t>(history_begin),
                                           static_cast<std::size_t>(history_end - history_begin))
                               : std::span<const int>{};
    DensityMatrix conditional(apply(model.path_map(history), rho.matrix()));
    out.blocks.push_back({Path{std::vector<int>(s.begin(), s.end()), prob}, std::move(conditional)});
  });
  return out;
}

double mutual_information_discrete(const CollisionModel& model, const DensityMatrix& rho, int n) {
  require_dim(rho, 2);
  const auto classes = count_classes(model, n);
  double conditional = 0.0;
  for (const auto& c : classes) conditional += c.weight * von_neumann_entropy(DensityMatrix(apply(c.map, rho.matrix())));
  return von_neumann_entropy(DensityMatrix(apply(average(classes), rho.matrix()))) - conditional;
}

double mutual_information_two_qubits_discrete(const CollisionModel& model, const DensityMatrix& rho, int n) {
  require_dim(rho, 4);
  const auto classes = count_classes(model, n);
  double conditional = 0.0;
  for (const auto& ci : classes)
    for (const auto& ck : classes)
      conditional += ci.weight * ck.weight * von_neumann_entropy(DensityMatrix(apply_product(ci.map, ck.map, rho.matrix())));
  const auto lambda_n = average(classes);
  return von_neumann_entropy(DensityMatrix(apply_product(lambda_n, lambda_n, rho.matrix()))) - conditional;
}

ChainParams entropy_choice_params(double epsilon) {
  const double p = 0.25 + epsilon;
  return ChainParams::from_p_r_delta(p, 0.0, (1.0 - 2.0 * p) / 2.0);
}

DensityMatrix evolved_symmetric_projector(int step, double epsilon) {
  const double e2 = epsilon * epsilon;
  double corner = 0.0;
  if (step == 1)
    corner = 0.25 + 4.0 * e2;
  else if (step == 2)
    corner = 0.25 + 64.0 * e2 * e2;
  else
    throw std::invalid_argument("closed-form symmetric projector available for steps 1 and 2");
  const double off = (1.0 - 4.0 * epsilon) * (1.0 - 4.0 * epsilon) / 8.0;
  const double mid = 0.5 - corner;
  return DensityMatrix(ComplexMatrix(4, {corner, 0.0, 0.0, off,
                                         0.0, mid, 0.0, 0.0,
                                         0.0, 0.0, mid, 0.0,
                                         off, 0.0, 0.0, corner}));
}

void XStateParams::validate() const {
  std::ostringstream os;
  const double rest = 1.0 - mu1 - mu2 - nu;
  if (mu1 < -kBoundTolerance || mu2 < -kBoundTolerance) {
    os << "X-state bound violated: 0 <= mu1, mu2 (mu1 = " << mu1 << ", mu2 = " << mu2 << ")";
  } else if (nu < -kBoundTolerance || rest < -kBoundTolerance) {
    os << "X-state bound violated: 0 <= nu <= 1 - (mu1 + mu2) (nu = " << nu << ")";
  } else if (std::abs(u) > std::sqrt(std::max(0.0, mu1 * mu2)) + kBoundTolerance) {
    os << "X-state bound violated: |u| <= sqrt(mu1 mu2) (|u| = " << std::abs(u) << ")";
  } else if (std::abs(v) > std::sqrt(std::max(0.0, nu * rest)) + kBoundTolerance) {
    os << "X-state bound violated: |v| <= sqrt(nu (1 - mu1 - mu2 - nu)) (|v| = " << std::abs(v) << ")";
  } else {
    return;
  }
  throw std::invalid_argument(os.str());
}

DensityMatrix x_state(const XStateParams& x, XBasis basis) {
  x.validate();
  const ComplexMatrix m(4, {x.mu1, 0.0, 0.0, x.u,
                            0.0, x.nu, x.v, 0.0,
                            0.0, std::conj(x.v), 1.0 - x.mu1 - x.mu2 - x.nu, 0.0,
                            std::conj(x.u), 0.0, 0.0, x.mu2});
  if (basis == XBasis::Computational) return DensityMatrix(m);
  const ComplexMatrix v = (pauli(1) + pauli(3)) * Complex(1.0 / std::sqrt(2.0));
  const ComplexMatrix vv = tensor_product(v, v);
  return DensityMatrix(vv * m * vv);
}

std::pair<PauliDiagonalMap, PauliDiagonalMap> constant_path_maps(const ContinuousModel& model, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be non-negative");
  const double b = std::exp(-2.0 * model.gamma() * t);
  return {PauliDiagonalMap(1.0, 1.0, b, b), PauliDiagonalMap(1.0, b, 1.0, b)};
}

double mutual_information_continuous(const ContinuousModel& model, const DensityMatrix& rho, double t) {
  if (model.kappa() != 0.0) throw std::invalid_argument("two-path mutual information requires kappa = 0");
  require_dim(rho, 4);
  const auto lam = lambda_t(model, t).map();
  const auto [phi1, phi2] = constant_path_maps(model, t);
  double conditional = 0.0;
  for (const auto* a : {&phi1, &phi2})
    for (const auto* b : {&phi1, &phi2})
      conditional += 0.25 * von_neumann_entropy(DensityMatrix(apply_product(*a, *b, rho.matrix())));
  return von_neumann_entropy(DensityMatrix(apply_product(lam, lam, rho.matrix()))) - conditional;
}

}  // namespace sbfi
