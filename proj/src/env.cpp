#include "sbfi/env.hpp"

#include <cmath>
#include <sstream>

namespace sbfi {

namespace {

constexpr double kConstraintTolerance = 1e-12;

[[noreturn]] void violated(const std::string& what) { throw std::invalid_argument("chain constraint violated: " + what); }

double binary_entropy(double x) {
  double h = 0.0;
  if (x > 0.0) h -= x * std::log(x);
  if (x < 1.0) h -= (1.0 - x) * std::log(1.0 - x);
  return h;
}

}  // namespace

ChainParams ChainParams::from_p_r_delta(double p, double r, double delta) {
  return ChainParams{1.0 - 2.0 * p - r, p, r, delta};
}

void ChainParams::validate() const {
  for (double v : {p0, p, r, delta})
    if (!std::isfinite(v)) violated("parameters must be finite");
  std::ostringstream os;
  if (p0 < -kConstraintTolerance) {
    os << "p0 >= 0 (p0 = " << p0 << ")";
    violated(os.str());
  }
  if (r < -kConstraintTolerance) {
    os << "r >= 0 (r = " << r << ")";
    violated(os.str());
  }
  if (delta < -kConstraintTolerance) {
    os << "0 <= delta (delta = " << delta << ")";
    violated(os.str());
  }
  if (delta > p + kConstraintTolerance) {
    os << "delta <= p (delta = " << delta << ", p = " << p << ")";
    violated(os.str());
  }
  if (p > 0.5 + kConstraintTolerance || p < -kConstraintTolerance) {
    os << "0 <= p <= 1/2 (p = " << p << ")";
    violated(os.str());
  }
  if (std::abs(p0 + 2.0 * p + r - 1.0) > kConstraintTolerance) {
    os << "p0 + 2p + r = 1 (sum = " << p0 + 2.0 * p + r << ")";
    violated(os.str());
  }
}

MarkovChainEnv::MarkovChainEnv(const ChainParams& params) : params_(params) {
  params_.validate();
  const auto& [p0, p, r, d] = params_;
  stationary_ = {p0, p, p, r};
  for (std::size_t j = 0; j < 4; ++j) {
    t_[0][j] = p0;
    t_[1][j] = p;
    t_[2][j] = p;
    t_[3][j] = r;
  }
  t_[1][1] += d;
  t_[2][1] -= d;
  t_[1][2] -= d;
  t_[2][2] += d;

  for (std::size_t j = 0; j < 4; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < 4; ++i) col += t_[i][j];
    if (std::abs(col - 1.0) > kConstraintTolerance) violated("transition columns must sum to 1");
  }
  for (std::size_t i = 0; i < 4; ++i) {
    double tp = 0.0;
    for (std::size_t j = 0; j < 4; ++j) tp += t_[i][j] * stationary_[j];
    if (std::abs(tp - stationary_[i]) > kConstraintTolerance) violated("stationary vector is not invariant");
  }
}

MarkovChainEnv build_chain(const ChainParams& params) { return MarkovChainEnv(params); }

double path_probability(const MarkovChainEnv& env, std::span<const int> symbols) {
  if (symbols.empty()) throw std::invalid_argument("path must contain at least one symbol");
  for (int s : symbols)
    if (s < 0 || s >= kSymbols) throw std::out_of_range("path symbol outside 0..3");
  double prob = env.stationary()[static_cast<std::size_t>(symbols[0])];
  for (std::size_t k = 1; k < symbols.size(); ++k) prob *= env.step(symbols[k], symbols[k - 1]);
  return prob;
}

PathEnumeration enumerate_paths(const MarkovChainEnv& env, int n, double prune_below) {
  PathEnumeration out;
  out.pruned_mass = for_each_path(env, n, prune_below, [&](std::span<const int> s, double prob) {
    out.paths.push_back(Path{std::vector<int>(s.begin(), s.end()), prob});
  });
  return out;
}

double neighbor_mutual_information(const ChainParams& params) {
  params.validate();
  if (!(params.p > 0.0)) throw std::invalid_argument("neighbor mutual information needs p > 0");
  const double q = params.q();
  if (q > 1.0 + kConstraintTolerance) throw std::invalid_argument("Q = delta / p must not exceed 1");
  return 4.0 * params.p * params.p * (std::log(2.0) - binary_entropy((1.0 + std::min(q, 1.0)) / 2.0));
}

}  // namespace sbfi
