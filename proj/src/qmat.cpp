#include "sbfi/qmat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace sbfi {

namespace {

std::string dims_message(const char* what, std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << what << " (" << a << " vs " << b << ")";
  return os.str();
}

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument(dims_message("matrix dimension mismatch", a.dim(), b.dim()));
}

// Cyclic Jacobi on a Hermitian matrix. Each rotation first removes the phase of
// a_pq, then applies a real Givens rotation to the resulting symmetric 2x2 block.
std::vector<double> jacobi_eigenvalues(ComplexMatrix a) {
  const std::size_t n = a.dim();
  if (n == 0) return {};
  const double scale = std::max(1.0, a.frobenius_norm());
  const double threshold = 1e-14 * scale;
  constexpr int kMaxSweeps = 100;

  auto off_diagonal = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) sum += std::norm(a(i, j));
    return std::sqrt(sum);
  };

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal() < threshold) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag < 1e-300) continue;
        const Complex phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double zeta = (aqq - app) / (2.0 * mag);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(zeta * zeta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // U = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
        const Complex u_pp = c;
        const Complex u_pq = s;
        const Complex u_qp = -s * std::conj(phase);
        const Complex u_qq = c * std::conj(phase);
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = akp * u_pp + akq * u_qp;
          a(k, q) = akp * u_pq + akq * u_qq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
          a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }

  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i).real();
  std::sort(eig.begin(), eig.end(), std::greater<>());
  return eig;
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major) : ComplexMatrix(dim) {
  if (row_major.size() != dim * dim)
    throw std::invalid_argument(dims_message("initializer size does not match dim^2", row_major.size(), dim * dim));
  std::copy(row_major.begin(), row_major.end(), data_.begin());
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> entries) {
  ComplexMatrix m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix& other) const {
  require_same_dim(*this, other);
  double worst = 0.0;
  for (std::size_t k = 0; k < data_.size(); ++k) worst = std::max(worst, std::abs(data_[k] - other.data_[k]));
  return worst;
}

double ComplexMatrix::frobenius_norm() const {
  double sum = 0.0;
  for (const auto& z : data_) sum += std::norm(z);
  return std::sqrt(sum);
}

bool ComplexMatrix::is_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& rhs) {
  require_same_dim(*this, rhs);
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& z : data_) z *= scale;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
  require_same_dim(lhs, rhs);
  const std::size_t n = lhs.dim();
  ComplexMatrix out(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex l = lhs(i, k);
      if (l == Complex{}) continue;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += l * rhs(k, j);
    }
  return out;
}

const ComplexMatrix& pauli(int index) {
  static const std::array<ComplexMatrix, 4> sigma = {
      ComplexMatrix(2, {1.0, 0.0, 0.0, 1.0}),
      ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}),
      ComplexMatrix(2, {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}),
      ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}),
  };
  if (index < 0 || index > 3) throw std::out_of_range("Pauli index must be 0..3");
  return sigma[static_cast<std::size_t>(index)];
}

ComplexMatrix symmetric_projector() {
  ComplexMatrix p(4);
  p(0, 0) = p(0, 3) = p(3, 0) = p(3, 3) = 0.5;
  return p;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = i; j < m.dim(); ++j)
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
  return true;
}

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.dim() == 0) throw std::invalid_argument("empty operator");
  if (!m_.is_finite()) throw std::invalid_argument("operator has non-finite entries");
  if (!is_hermitian(m_)) throw std::invalid_argument("operator is not Hermitian");
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : HermitianOperator(std::move(m)) {
  const Complex tr = matrix().trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << ", expected 1";
    throw std::invalid_argument(os.str());
  }
  const auto eig = hermitian_eigenvalues(*this);
  if (eig.back() < -kNegativityTolerance) {
    std::ostringstream os;
    os << "density matrix has negative eigenvalue " << eig.back();
    throw std::invalid_argument(os.str());
  }
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  return DensityMatrix(ComplexMatrix::identity(dim) * Complex(1.0 / static_cast<double>(dim)));
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t da = a.dim();
  const std::size_t db = b.dim();
  if (da * db > kMaxTensorDim)
    throw std::length_error(dims_message("tensor product exceeds maximum dimension", da * db, kMaxTensorDim));
  ComplexMatrix out(da * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j) {
      const Complex aij = a(i, j);
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) out(i * db + k, j * db + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> subsystem_dims,
                            std::size_t traced_index) {
  if (traced_index >= subsystem_dims.size()) throw std::invalid_argument("traced subsystem index out of range");
  const std::size_t total =
      std::accumulate(subsystem_dims.begin(), subsystem_dims.end(), std::size_t{1}, std::multiplies<>());
  if (total != m.dim()) throw std::invalid_argument(dims_message("subsystem dims do not multiply to matrix dim", total, m.dim()));

  // m is viewed as (left, traced, right) with right-most index fastest.
  std::size_t left = 1;
  for (std::size_t k = 0; k < traced_index; ++k) left *= subsystem_dims[k];
  const std::size_t mid = subsystem_dims[traced_index];
  const std::size_t right = total / (left * mid);

  ComplexMatrix out(left * right);
  for (std::size_t l1 = 0; l1 < left; ++l1)
    for (std::size_t r1 = 0; r1 < right; ++r1)
      for (std::size_t l2 = 0; l2 < left; ++l2)
        for (std::size_t r2 = 0; r2 < right; ++r2) {
          Complex sum = 0.0;
          for (std::size_t k = 0; k < mid; ++k)
            sum += m((l1 * mid + k) * right + r1, (l2 * mid + k) * right + r2);
          out(l1 * right + r1, l2 * right + r2) = sum;
        }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, bool on_first) {
  if (m.dim() != 4) throw std::invalid_argument("partial transpose expects a two-qubit (4x4) matrix");
  ComplexMatrix out(4);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t d = 0; d < 2; ++d) {
          // entry <a b| m |c d>
          const Complex v = m(a * 2 + b, c * 2 + d);
          if (on_first)
            out(c * 2 + b, a * 2 + d) = v;
          else
            out(a * 2 + d, c * 2 + b) = v;
        }
  return out;
}

std::vector<double> hermitian_eigenvalues(const HermitianOperator& h) { return jacobi_eigenvalues(h.matrix()); }

double trace_norm(const HermitianOperator& h) {
  double sum = 0.0;
  for (double e : hermitian_eigenvalues(h)) sum += std::abs(e);
  return sum;
}

double entropy_of_spectrum(std::span<const double> eigenvalues) {
  double s = 0.0;
  for (double e : eigenvalues) {
    if (e < -DensityMatrix::kNegativityTolerance) {
      std::ostringstream os;
      os << "entropy of a spectrum with negative eigenvalue " << e;
      throw std::domain_error(os.str());
    }
    if (e > 0.0) s -= e * std::log(e);
  }
  return s;
}

double von_neumann_entropy(const DensityMatrix& d) {
  const auto eig = hermitian_eigenvalues(d);
  return entropy_of_spectrum(eig);
}

double mutual_information(const DensityMatrix& joint, std::size_t dim_a, std::size_t dim_b) {
  const std::array<std::size_t, 2> dims{dim_a, dim_b};
  const DensityMatrix rho_a(partial_trace(joint.matrix(), dims, 1));
  const DensityMatrix rho_b(partial_trace(joint.matrix(), dims, 0));
  return von_neumann_entropy(rho_a) + von_neumann_entropy(rho_b) - von_neumann_entropy(joint);
}

}  // namespace sbfi
