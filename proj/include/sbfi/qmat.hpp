#pragma once

// Dense complex matrices for qubit-sized problems.
//
// Composite indices are row-major throughout the library: for a ⊗ b the
// entry (i_a, i_b) lives at i_a * dim(b) + i_b. Two-qubit matrices therefore
// use the ordering |00>, |01>, |10>, |11>.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace sbfi {

using Complex = std::complex<double>;

/// Largest dimension tensor_product() will build.
inline constexpr std::size_t kMaxTensorDim = 16;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> entries);

  std::size_t dim() const { return dim_; }

  Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
  const Complex& operator()(std::size_t row, std::size_t col) const { return data_[row * dim_ + col]; }

  std::span<const Complex> data() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  /// Largest |a_ij - b_ij|.
  double max_abs_diff(const ComplexMatrix& other) const;
  double frobenius_norm() const;
  bool is_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& rhs);
  ComplexMatrix& operator-=(const ComplexMatrix& rhs);
  ComplexMatrix& operator*=(Complex scale);

  friend ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
  friend ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
  friend ComplexMatrix operator*(ComplexMatrix lhs, Complex scale) { return lhs *= scale; }
  friend ComplexMatrix operator*(Complex scale, ComplexMatrix rhs) { return rhs *= scale; }
  friend ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// sigma_0 = identity, sigma_1..3 the Pauli matrices.
const ComplexMatrix& pauli(int index);

/// Projector onto (|00> + |11>)/sqrt(2).
ComplexMatrix symmetric_projector();

/// Tolerance of the Hermiticity check, max-entry metric.
inline constexpr double kHermitianTolerance = 1e-12;

class HermitianOperator {
 public:
  /// Throws std::invalid_argument when `m` is not Hermitian within
  /// kHermitianTolerance or has non-finite entries.
  explicit HermitianOperator(ComplexMatrix m);

  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }

 protected:
  struct Unchecked {};
  HermitianOperator(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

 private:
  ComplexMatrix m_;
};

class DensityMatrix : public HermitianOperator {
 public:
  static constexpr double kTraceTolerance = 1e-12;
  static constexpr double kNegativityTolerance = 1e-10;

  /// Throws std::invalid_argument unless Hermitian, unit trace and
  /// PSD down to -kNegativityTolerance.
  explicit DensityMatrix(ComplexMatrix m);
  explicit DensityMatrix(const HermitianOperator& h) : DensityMatrix(h.matrix()) {}

  static DensityMatrix maximally_mixed(std::size_t dim);
};

bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTolerance);

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// Traces out factor `traced_index` of a matrix on ⊗_k C^{dims[k]}.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> subsystem_dims,
                            std::size_t traced_index);

/// Transpose of the first (or second) qubit of a two-qubit matrix.
ComplexMatrix partial_transpose(const ComplexMatrix& m, bool on_first);

/// Real spectrum, sorted descending.
std::vector<double> hermitian_eigenvalues(const HermitianOperator& h);

double trace_norm(const HermitianOperator& h);

/// -sum e log e in nats; eigenvalues in [-1e-10, 0] count as 0, anything
/// more negative throws std::domain_error.
double entropy_of_spectrum(std::span<const double> eigenvalues);

double von_neumann_entropy(const DensityMatrix& d);

/// S(A) + S(B) - S(AB) for a state on C^{dim_a} ⊗ C^{dim_b}.
double mutual_information(const DensityMatrix& joint, std::size_t dim_a, std::size_t dim_b);

}  // namespace sbfi
