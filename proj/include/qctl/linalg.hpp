#pragma once

// Dense complex matrix algebra shared by every module. Problem sizes here are
// at most 128 x 128, so everything is dense and row-major.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "json.hpp"

namespace qctl {

using cplx = std::complex<double>;
using StateVector = std::vector<cplx>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  /// Zero matrix of the given dimension.
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; throws InvalidInput unless entries.size() == dim^2 and all are finite.
  ComplexMatrix(std::size_t dim, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows);
  static ComplexMatrix diagonal(std::span<const cplx> diag);

  std::size_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * dim_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * dim_ + j]; }

  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  ComplexMatrix adjoint() const;
  cplx trace() const;
  double max_abs() const;
  double frobenius_norm() const;
  bool all_finite() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);
  /// this += alpha * o
  ComplexMatrix& add_scaled(cplx alpha, const ComplexMatrix& o);

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<cplx> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix a);
StateVector operator*(const ComplexMatrix& a, std::span<const cplx> v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr(A^dagger B).
cplx hilbert_schmidt_inner(const ComplexMatrix& a, const ComplexMatrix& b);
/// Kronecker product; the first factor indexes the most significant digit.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// AB - BA.
ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);

cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm(std::span<const cplx> v);

/// Generator of unitary dynamics; max |H - H^dagger| <= 1e-12 is checked at construction.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m);
  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }

 private:
  ComplexMatrix m_;
};

/// max |U^dagger U - I| <= 1e-10 is checked at construction.
class UnitaryOperator {
 public:
  UnitaryOperator() = default;
  explicit UnitaryOperator(ComplexMatrix m);
  static UnitaryOperator identity(std::size_t dim);
  const ComplexMatrix& matrix() const { return m_; }
  std::size_t dim() const { return m_.dim(); }
  UnitaryOperator adjoint() const;

 private:
  ComplexMatrix m_;
};

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b);

/// Eigendecomposition H = V diag(lambda) V^dagger of a Hermitian operator,
/// reused to evaluate exp(-i t H) for many t.
class SpectralDecomposition {
 public:
  explicit SpectralDecomposition(const HermitianOperator& h);

  std::span<const double> eigenvalues() const { return values_; }
  /// Columns are eigenvectors.
  const ComplexMatrix& eigenvectors() const { return vectors_; }
  std::size_t dim() const { return values_.size(); }

  /// exp(-i t H), unchecked.
  ComplexMatrix propagator(double t) const;
  /// V diag(d) V^dagger for an arbitrary diagonal d.
  ComplexMatrix reconstruct(std::span<const cplx> d) const;
  /// V^dagger A V
  ComplexMatrix to_eigenbasis(const ComplexMatrix& a) const;
  /// V A V^dagger
  ComplexMatrix from_eigenbasis(const ComplexMatrix& a) const;

 private:
  std::vector<double> values_;
  ComplexMatrix vectors_;
  ComplexMatrix vectors_adj_;
};

/// exp(-i t H) via the spectral decomposition of H. Negative t is reverse evolution.
UnitaryOperator matrix_exponential_unitary(const HermitianOperator& h, double t);

ComplexMatrix pauli_i();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Array of rows, each entry a [re, im] pair.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qctl
