#pragma once

// Four-symbol Markov chain environment. Symbol order is 0, 1, 2, 3 with
// stationary law (p0, p, p, r). T is column stochastic: T(i, j) is the
// probability of symbol i at the next site given symbol j at the current one.

#include <array>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sbfi {

inline constexpr int kSymbols = 4;

/// Longest path enumerate_paths() accepts without pruning.
inline constexpr int kMaxExactPathLength = 12;

struct ChainParams {
  double p0 = 0.0;
  double p = 0.0;
  double r = 0.0;
  double delta = 0.0;

  /// p0 = 1 - 2p - r.
  static ChainParams from_p_r_delta(double p, double r, double delta);

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  /// Q = delta / p, taken as 0 when p = 0.
  double q() const { return p > 0.0 ? delta / p : 0.0; }
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

class MarkovChainEnv {
 public:
  explicit MarkovChainEnv(const ChainParams& params);

  const ChainParams& params() const { return params_; }
  const Matrix4& transition() const { return t_; }
  const std::array<double, 4>& stationary() const { return stationary_; }

  /// Probability of moving to symbol `to` from symbol `from`.
  double step(int to, int from) const { return t_[static_cast<std::size_t>(to)][static_cast<std::size_t>(from)]; }

 private:
  ChainParams params_;
  Matrix4 t_{};
  std::array<double, 4> stationary_{};
};

MarkovChainEnv build_chain(const ChainParams& params);

struct Path {
  std::vector<int> symbols;
  double probability = 0.0;
};

/// p_{i_1} prod_k T(i_{k+1}, i_k). Throws on empty input or symbols outside 0..3.
double path_probability(const MarkovChainEnv& env, std::span<const int> symbols);

struct PathEnumeration {
  std::vector<Path> paths;
  double pruned_mass = 0.0;
};

/// Visits every length-n path whose probability exceeds prune_below, depth
/// first. Branches whose prefix probability is <= prune_below are cut and their
/// mass returned. visit(symbols, probability) receives the full path.
template <class Visitor>
double for_each_path(const MarkovChainEnv& env, int n, double prune_below, Visitor&& visit) {
  if (n < 0) throw std::invalid_argument("path length must be non-negative");
  if (n > kMaxExactPathLength && !(prune_below > 0.0))
    throw std::length_error("path enumeration beyond 12 sites requires pruning");
  std::vector<int> symbols(static_cast<std::size_t>(n));
  if (n == 0) {
    visit(std::span<const int>(symbols), 1.0);
    return 0.0;
  }
  double pruned = 0.0;
  auto recurse = [&](auto& self, std::size_t depth, double prob) -> void {
    if (depth == symbols.size()) {
      visit(std::span<const int>(symbols), prob);
      return;
    }
    for (int s = 0; s < kSymbols; ++s) {
      const double next = depth == 0 ? env.stationary()[static_cast<std::size_t>(s)] : prob * env.step(s, symbols[depth - 1]);
      if (next <= prune_below) {
        pruned += next;
        continue;
      }
      symbols[depth] = s;
      self(self, depth + 1, next);
    }
  };
  recurse(recurse, 0, 1.0);
  return pruned;
}

PathEnumeration enumerate_paths(const MarkovChainEnv& env, int n, double prune_below = 0.0);

/// Mutual information between neighbouring sites, natural log.
double neighbor_mutual_information(const ChainParams& params);

}  // namespace sbfi
