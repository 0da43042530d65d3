#include "qctl/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "qctl/errors.hpp"
#include "qctl/kernels.hpp"

namespace qctl {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b, const char* what) {
  if (a.dim() != b.dim())
    throw InvalidInput(std::string(what) + ": dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                       std::to_string(b.dim()) + ")");
}

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim * dim) throw InvalidInput("matrix entries do not form a square matrix");
  if (!all_finite()) throw InvalidInput("matrix has non-finite entries");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
  const std::size_t n = rows.size();
  std::vector<cplx> entries;
  entries.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw InvalidInput("matrix rows are not square");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return ComplexMatrix(n, std::move(entries));
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix r(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(j, i) = std::conj((*this)(i, j));
  return r;
}

cplx ComplexMatrix::trace() const {
  cplx t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const auto& z : data_) m = std::max(m, std::abs(z));
  return m;
}

double ComplexMatrix::frobenius_norm() const {
  return std::sqrt(std::max(0.0, kernels::dot_conj(data_, data_).real()));
}

bool ComplexMatrix::all_finite() const { return std::all_of(data_.begin(), data_.end(), finite); }

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) { return add_scaled(1.0, o); }
ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) { return add_scaled(-1.0, o); }

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix& ComplexMatrix::add_scaled(cplx alpha, const ComplexMatrix& o) {
  require_same_dim(*this, o, "add");
  kernels::axpy(alpha, o.data_, data_);
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "multiply");
  ComplexMatrix c(a.dim());
  kernels::matmul(a.data(), b.data(), c.data(), a.dim());
  return c;
}

StateVector operator*(const ComplexMatrix& a, std::span<const cplx> v) {
  if (v.size() != a.dim()) throw InvalidInput("matrix-vector: dimension mismatch");
  const std::size_t n = a.dim();
  StateVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

cplx hilbert_schmidt_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "hilbert_schmidt_inner");
  // Tr(A^dagger B) = sum_ij conj(A_ij) B_ij
  return kernels::dot_conj(a.data(), b.data());
}

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim(), nb = b.dim(), n = na * nb;
  ComplexMatrix r(n);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t j = 0; j < na; ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx{}) continue;
      for (std::size_t k = 0; k < nb; ++k)
        for (std::size_t l = 0; l < nb; ++l) r(i * nb + k, j * nb + l) = aij * b(k, l);
    }
  return r;
}

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b) { return kernels::dot_conj(a, b); }

double norm(std::span<const cplx> v) { return std::sqrt(kernels::dot_conj(v, v).real()); }

HermitianOperator::HermitianOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.all_finite()) throw InvalidInput("Hermitian operator has non-finite entries");
  const std::size_t n = m_.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      if (std::abs(m_(i, j) - std::conj(m_(j, i))) > kHermitianTol)
        throw InvalidInput("operator is not Hermitian at (" + std::to_string(i) + "," + std::to_string(j) + ")");
}

UnitaryOperator::UnitaryOperator(ComplexMatrix m) : m_(std::move(m)) {
  if (!m_.all_finite()) throw InvalidInput("unitary operator has non-finite entries");
  const double dev = max_abs_diff(m_.adjoint() * m_, ComplexMatrix::identity(m_.dim()));
  if (dev > kUnitaryTol) throw InvalidInput("operator is not unitary (deviation " + std::to_string(dev) + ")");
}

UnitaryOperator UnitaryOperator::identity(std::size_t dim) { return UnitaryOperator(ComplexMatrix::identity(dim)); }

UnitaryOperator UnitaryOperator::adjoint() const { return UnitaryOperator(m_.adjoint()); }

UnitaryOperator operator*(const UnitaryOperator& a, const UnitaryOperator& b) {
  return UnitaryOperator(a.matrix() * b.matrix());
}

SpectralDecomposition::SpectralDecomposition(const HermitianOperator& h) {
  const std::size_t n = h.dim();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = h.matrix()(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success) throw InvalidInput("eigendecomposition failed");
  values_.resize(n);
  vectors_ = ComplexMatrix(n);
  for (std::size_t i = 0; i < n; ++i) {
    values_[i] = solver.eigenvalues()(i);
    for (std::size_t j = 0; j < n; ++j) vectors_(i, j) = solver.eigenvectors()(i, j);
  }
  vectors_adj_ = vectors_.adjoint();
}

ComplexMatrix SpectralDecomposition::reconstruct(std::span<const cplx> d) const {
  const std::size_t n = dim();
  ComplexMatrix scaled = vectors_;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= d[j];
  return scaled * vectors_adj_;
}

ComplexMatrix SpectralDecomposition::propagator(double t) const {
  std::vector<cplx> phases(dim());
  for (std::size_t k = 0; k < dim(); ++k) phases[k] = std::polar(1.0, -t * values_[k]);
  return reconstruct(phases);
}

ComplexMatrix SpectralDecomposition::to_eigenbasis(const ComplexMatrix& a) const {
  return vectors_adj_ * (a * vectors_);
}

ComplexMatrix SpectralDecomposition::from_eigenbasis(const ComplexMatrix& a) const {
  return vectors_ * (a * vectors_adj_);
}

UnitaryOperator matrix_exponential_unitary(const HermitianOperator& h, double t) {
  if (!std::isfinite(t)) throw InvalidInput("evolution time is not finite");
  return UnitaryOperator(SpectralDecomposition(h).propagator(t));
}

ComplexMatrix pauli_i() { return ComplexMatrix::identity(2); }
ComplexMatrix pauli_x() { return ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}); }
ComplexMatrix pauli_y() { return ComplexMatrix::from_rows({{0.0, cplx{0.0, -1.0}}, {cplx{0.0, 1.0}, 0.0}}); }
ComplexMatrix pauli_z() { return ComplexMatrix::from_rows({{1.0, 0.0}, {0.0, -1.0}}); }

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw InvalidInput("matrix must be a non-empty array of rows");
  const std::size_t n = j.size();
  std::vector<cplx> entries;
  entries.reserve(n * n);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) throw InvalidInput("matrix rows must have length " + std::to_string(n));
    for (const auto& e : row) {
      if (e.is_number()) {
        entries.emplace_back(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
      } else {
        throw InvalidInput("matrix entries must be [re, im] pairs");
      }
    }
  }
  return ComplexMatrix(n, std::move(entries));
}

}  // namespace qctl
