#pragma once

// Qubit maps that act diagonally on the Pauli basis:
//   X = sum_j x_j sigma_j  ->  sum_j lambda_j x_j sigma_j.

#include <array>

#include "sbfi/qmat.hpp"

namespace sbfi {

/// Inclusive band used by the positivity verdicts.
inline constexpr double kPositivityTolerance = 1e-10;

/// Smallest |lambda_j| accepted by inverse().
inline constexpr double kInvertibilityThreshold = 1e-12;

class PauliDiagonalMap {
 public:
  PauliDiagonalMap() : lambda_{1.0, 1.0, 1.0, 1.0} {}
  /// Throws std::invalid_argument on non-finite entries.
  explicit PauliDiagonalMap(std::array<double, 4> lambda);
  PauliDiagonalMap(double l0, double l1, double l2, double l3) : PauliDiagonalMap(std::array<double, 4>{l0, l1, l2, l3}) {}

  static PauliDiagonalMap identity() { return {}; }

  const std::array<double, 4>& lambda() const { return lambda_; }
  double operator[](std::size_t j) const { return lambda_[j]; }

  bool is_trace_preserving(double tol = 1e-12) const;

  friend bool operator==(const PauliDiagonalMap&, const PauliDiagonalMap&) = default;

 private:
  std::array<double, 4> lambda_;
};

/// Weights c_k of X -> sum_k c_k sigma_k X sigma_k.
struct BellCoefficients {
  std::array<double, 4> c{};
};

/// x_j = Tr(sigma_j X) / 2, so that X = sum_j x_j sigma_j.
std::array<Complex, 4> pauli_coefficients(const ComplexMatrix& x);

/// Throws std::invalid_argument unless h is 2x2.
HermitianOperator apply(const PauliDiagonalMap& m, const HermitianOperator& h);
ComplexMatrix apply(const PauliDiagonalMap& m, const ComplexMatrix& x);

/// (a ⊗ b)[x] for a 4x4 matrix x.
ComplexMatrix apply_product(const PauliDiagonalMap& a, const PauliDiagonalMap& b, const ComplexMatrix& x);

PauliDiagonalMap compose(const PauliDiagonalMap& a, const PauliDiagonalMap& b);

/// Throws std::domain_error when some |lambda_j| <= kInvertibilityThreshold.
PauliDiagonalMap inverse(const PauliDiagonalMap& m);

/// (m ⊗ id)[P2+].
HermitianOperator choi_matrix(const PauliDiagonalMap& m);

BellCoefficients bell_coefficients(const PauliDiagonalMap& m);
PauliDiagonalMap from_bell_coefficients(const BellCoefficients& c);

bool is_completely_positive(const PauliDiagonalMap& m, double tol = kPositivityTolerance);
bool is_positive(const PauliDiagonalMap& m, double tol = kPositivityTolerance);

/// m ⊗ m is positive iff m∘m is completely positive.
bool tensor_square_is_positive(const PauliDiagonalMap& m, double tol = kPositivityTolerance);

double diamond_norm(const PauliDiagonalMap& m);

}  // namespace sbfi
