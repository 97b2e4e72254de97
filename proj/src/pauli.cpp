#include "sbfi/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sbfi {

namespace {

// W_{jk} = +1 if j = 0, k = 0 or j = k, else -1.
constexpr double walsh(std::size_t j, std::size_t k) { return (j == 0 || k == 0 || j == k) ? 1.0 : -1.0; }

void require_dim(const ComplexMatrix& x, std::size_t dim, const char* what) {
  if (x.dim() != dim) {
    std::ostringstream os;
    os << what << ": expected dimension " << dim << ", got " << x.dim();
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

PauliDiagonalMap::PauliDiagonalMap(std::array<double, 4> lambda) : lambda_(lambda) {
  for (double l : lambda_)
    if (!std::isfinite(l)) throw std::invalid_argument("Pauli eigenvalues must be finite");
}

bool PauliDiagonalMap::is_trace_preserving(double tol) const { return std::abs(lambda_[0] - 1.0) <= tol; }

std::array<Complex, 4> pauli_coefficients(const ComplexMatrix& x) {
  require_dim(x, 2, "pauli_coefficients");
  // Tr(sigma_j X) written out for the four Pauli matrices.
  return {
      (x(0, 0) + x(1, 1)) * 0.5,
      (x(0, 1) + x(1, 0)) * 0.5,
      (x(0, 1) - x(1, 0)) * Complex(0.0, 0.5),
      (x(0, 0) - x(1, 1)) * 0.5,
  };
}

ComplexMatrix apply(const PauliDiagonalMap& m, const ComplexMatrix& x) {
  require_dim(x, 2, "apply");
  const auto c = pauli_coefficients(x);
  ComplexMatrix out(2);
  for (int j = 0; j < 4; ++j) out += pauli(j) * (c[j] * m[j]);
  return out;
}

HermitianOperator apply(const PauliDiagonalMap& m, const HermitianOperator& h) {
  return HermitianOperator(apply(m, h.matrix()));
}

ComplexMatrix apply_product(const PauliDiagonalMap& a, const PauliDiagonalMap& b, const ComplexMatrix& x) {
  require_dim(x, 4, "apply_product");
  // Apply b on the second factor blockwise, then a on the first factor.
  ComplexMatrix y(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      ComplexMatrix block(2);
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) block(k, l) = x(i * 2 + k, j * 2 + l);
      const ComplexMatrix mapped = apply(b, block);
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) y(i * 2 + k, j * 2 + l) = mapped(k, l);
    }
  ComplexMatrix out(4);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t l = 0; l < 2; ++l) {
      ComplexMatrix block(2);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) block(i, j) = y(i * 2 + k, j * 2 + l);
      const ComplexMatrix mapped = apply(a, block);
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) out(i * 2 + k, j * 2 + l) = mapped(i, j);
    }
  return out;
}

PauliDiagonalMap compose(const PauliDiagonalMap& a, const PauliDiagonalMap& b) {
  return PauliDiagonalMap(a[0] * b[0], a[1] * b[1], a[2] * b[2], a[3] * b[3]);
}

PauliDiagonalMap inverse(const PauliDiagonalMap& m) {
  std::array<double, 4> inv{};
  for (std::size_t j = 0; j < 4; ++j) {
    if (std::abs(m[j]) <= kInvertibilityThreshold) {
      std::ostringstream os;
      os << "Pauli map is not invertible: lambda_" << j << " = " << m[j];
      throw std::domain_error(os.str());
    }
    inv[j] = 1.0 / m[j];
  }
  return PauliDiagonalMap(inv);
}

HermitianOperator choi_matrix(const PauliDiagonalMap& m) {
  return HermitianOperator(apply_product(m, PauliDiagonalMap::identity(), symmetric_projector()));
}

BellCoefficients bell_coefficients(const PauliDiagonalMap& m) {
  BellCoefficients out;
  for (std::size_t k = 0; k < 4; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < 4; ++j) s += walsh(k, j) * m[j];
    out.c[k] = s / 4.0;
  }
  return out;
}

PauliDiagonalMap from_bell_coefficients(const BellCoefficients& c) {
  std::array<double, 4> lambda{};
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t k = 0; k < 4; ++k) lambda[j] += walsh(j, k) * c.c[k];
  return PauliDiagonalMap(lambda);
}

bool is_completely_positive(const PauliDiagonalMap& m, double tol) {
  if (m.is_trace_preserving()) {
    const auto c = bell_coefficients(m).c;
    return *std::min_element(c.begin(), c.end()) >= -tol;
  }
  return hermitian_eigenvalues(choi_matrix(m)).back() >= -tol;
}

bool is_positive(const PauliDiagonalMap& m, double tol) {
  const double largest = std::max({std::abs(m[1]), std::abs(m[2]), std::abs(m[3])});
  return largest <= m[0] + tol;
}

bool tensor_square_is_positive(const PauliDiagonalMap& m, double tol) {
  return is_completely_positive(compose(m, m), tol);
}

double diamond_norm(const PauliDiagonalMap& m) {
  const auto c = bell_coefficients(m).c;
  return std::abs(c[0]) + std::abs(c[1]) + std::abs(c[2]) + std::abs(c[3]);
}

}  // namespace sbfi
