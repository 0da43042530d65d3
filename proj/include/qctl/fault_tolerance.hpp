#pragma once

// Pauli-group error analysis of realized gates and the seven-qubit CSS code.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qctl/linalg.hpp"

namespace qctl::ft {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// Tensor product of single-qubit Paulis; letter 0 acts on the most significant qubit.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> letters) : letters_(std::move(letters)) {}
  /// Parses "IXYZ..."; throws InvalidInput on other characters.
  static PauliString parse(std::string_view text);
  /// Base-4 digit expansion of code (qubit 0 most significant).
  static PauliString from_index(std::size_t code, std::size_t n);

  std::size_t size() const { return letters_.size(); }
  Pauli operator[](std::size_t k) const { return letters_[k]; }
  std::size_t weight() const;
  std::size_t index() const;
  std::string to_string() const;
  ComplexMatrix matrix() const;

  /// Bit masks over the state index: x_mask flips, z_mask gives sign (-1)^popcount(i & z_mask).
  std::size_t x_mask() const;
  std::size_t z_mask() const;
  std::size_t y_count() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;

 private:
  std::vector<Pauli> letters_;
};

/// P |psi> without forming the 2^n x 2^n matrix.
StateVector apply_pauli(const PauliString& p, std::span<const cplx> psi);

/// Coefficients c_P = 2^-n Tr(P^dagger U) for all 4^n strings, indexed by PauliString::index().
class PauliExpansion {
 public:
  PauliExpansion(std::size_t n, std::vector<cplx> coeffs) : n_(n), coeffs_(std::move(coeffs)) {}
  std::size_t qubits() const { return n_; }
  std::span<const cplx> coefficients() const { return coeffs_; }
  cplx operator[](const PauliString& p) const { return coeffs_.at(p.index()); }
  /// sum_P c_P P
  ComplexMatrix reconstruct() const;

 private:
  std::size_t n_;
  std::vector<cplx> coeffs_;
};

/// Each trace costs O(2^n) because P has one nonzero per row.
PauliExpansion pauli_expand(const ComplexMatrix& u, std::size_t n);

/// W_k = sum over weight-k strings of |c_P|^2, k = 0..n.
struct PauliWeightSpectrum {
  std::vector<double> W;
  double total() const;
};
PauliWeightSpectrum weight_spectrum(const PauliExpansion& coeffs);

/// U_T^dagger U_R.
UnitaryOperator error_operator(const UnitaryOperator& target, const UnitaryOperator& realized);

/// lambda_k for k = 2..n, stored at index k - 2.
struct PenaltyWeights {
  std::vector<double> lambda;
  /// lambda_k = 10^(k-2).
  static PenaltyWeights defaults(std::size_t n);
  double at(std::size_t k) const { return k >= 2 && k - 2 < lambda.size() ? lambda[k - 2] : 0.0; }
};

/// Re[2^-n Tr(U_T^dagger U)] - sum_{k>=2} lambda_k W_k(U_T^dagger U).
double penalized_objective(const UnitaryOperator& u, const UnitaryOperator& target, const PenaltyWeights& lambda);

struct CssCode {
  std::size_t n = 7;
  StateVector logical_zero;
  StateVector logical_one;
  /// X-type checks first: IIIXXXX, IXXIIXX, XIXIXIX, IIIZZZZ, IZZIIZZ, ZIZIZIZ.
  std::vector<PauliString> stabilizers;
};

CssCode css_steane_code();

using Syndrome = std::array<std::uint8_t, 6>;

/// Reads the +-1 eigenvalue of each stabilizer; bit = 1 for -1.
/// Throws IndeterminateSyndrome when the state is not an eigenvector within 1e-8.
Syndrome syndrome_extract(std::span<const cplx> state, const CssCode& code);

/// Single-qubit Pauli whose syndrome matches, if any.
std::optional<PauliString> lookup_single_error(const Syndrome& s, const CssCode& code);

/// Applies the inverse of the single-qubit error indicated by the syndrome.
/// Throws Uncorrectable when the syndrome is outside the single-error table.
StateVector correct_single_error(std::span<const cplx> state, const CssCode& code);

}  // namespace qctl::ft
