#include "qctl/fault_tolerance.hpp"

#include <bit>
#include <cmath>

#include "qctl/errors.hpp"
#include "qctl/parallel.hpp"

namespace qctl::ft {

namespace {

// (-i)^k
cplx minus_i_pow(std::size_t k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// Row i of P holds phase(i) at column i ^ x_mask.
struct PauliAction {
  std::size_t x, z;
  cplx base;
  cplx phase(std::size_t i) const { return (std::popcount(i & z) % 2) ? -base : base; }
};

PauliAction action(const PauliString& p) { return {p.x_mask(), p.z_mask(), minus_i_pow(p.y_count())}; }

std::size_t qubit_count(std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) throw InvalidInput("dimension " + std::to_string(dim) + " is not a power of two");
  return static_cast<std::size_t>(std::countr_zero(dim));
}

bool anticommute(const PauliString& a, const PauliString& b) {
  std::size_t clashes = 0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k] != Pauli::I && b[k] != Pauli::I && a[k] != b[k]) ++clashes;
  return clashes % 2 == 1;
}

Syndrome syndrome_of(const PauliString& error, const CssCode& code) {
  Syndrome s{};
  for (std::size_t g = 0; g < 6; ++g) s[g] = anticommute(error, code.stabilizers[g]) ? 1 : 0;
  return s;
}

}  // namespace

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> letters;
  letters.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'I': letters.push_back(Pauli::I); break;
      case 'X': letters.push_back(Pauli::X); break;
      case 'Y': letters.push_back(Pauli::Y); break;
      case 'Z': letters.push_back(Pauli::Z); break;
      default: throw InvalidInput("Pauli string may only contain I, X, Y, Z");
    }
  }
  return PauliString(std::move(letters));
}

PauliString PauliString::from_index(std::size_t code, std::size_t n) {
  std::vector<Pauli> letters(n);
  for (std::size_t k = n; k-- > 0;) {
    letters[k] = static_cast<Pauli>(code & 3u);
    code >>= 2;
  }
  return PauliString(std::move(letters));
}

std::size_t PauliString::weight() const {
  std::size_t w = 0;
  for (auto l : letters_) w += (l != Pauli::I);
  return w;
}

std::size_t PauliString::index() const {
  std::size_t code = 0;
  for (auto l : letters_) code = (code << 2) | static_cast<std::size_t>(l);
  return code;
}

std::string PauliString::to_string() const {
  static constexpr char names[] = {'I', 'X', 'Y', 'Z'};
  std::string s;
  for (auto l : letters_) s.push_back(names[static_cast<int>(l)]);
  return s;
}

std::size_t PauliString::x_mask() const {
  std::size_t m = 0;
  const std::size_t n = size();
  for (std::size_t k = 0; k < n; ++k)
    if (letters_[k] == Pauli::X || letters_[k] == Pauli::Y) m |= std::size_t{1} << (n - 1 - k);
  return m;
}

std::size_t PauliString::z_mask() const {
  std::size_t m = 0;
  const std::size_t n = size();
  for (std::size_t k = 0; k < n; ++k)
    if (letters_[k] == Pauli::Z || letters_[k] == Pauli::Y) m |= std::size_t{1} << (n - 1 - k);
  return m;
}

std::size_t PauliString::y_count() const {
  std::size_t c = 0;
  for (auto l : letters_) c += (l == Pauli::Y);
  return c;
}

ComplexMatrix PauliString::matrix() const {
  const std::size_t dim = std::size_t{1} << size();
  const PauliAction a = action(*this);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i ^ a.x) = a.phase(i);
  return m;
}

StateVector apply_pauli(const PauliString& p, std::span<const cplx> psi) {
  const std::size_t dim = std::size_t{1} << p.size();
  if (psi.size() != dim) throw InvalidInput("apply_pauli: state dimension does not match the Pauli string");
  const PauliAction a = action(p);
  StateVector out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = a.phase(i) * psi[i ^ a.x];
  return out;
}

ComplexMatrix PauliExpansion::reconstruct() const {
  const std::size_t dim = std::size_t{1} << n_;
  ComplexMatrix m(dim);
  for (std::size_t code = 0; code < coeffs_.size(); ++code) {
    const cplx c = coeffs_[code];
    if (c == cplx{}) continue;
    const PauliAction a = action(PauliString::from_index(code, n_));
    for (std::size_t i = 0; i < dim; ++i) m(i, i ^ a.x) += c * a.phase(i);
  }
  return m;
}

PauliExpansion pauli_expand(const ComplexMatrix& u, std::size_t n) {
  if (qubit_count(u.dim()) != n) throw InvalidInput("pauli_expand: matrix dimension is not 2^n");
  const std::size_t dim = u.dim();
  const std::size_t count = std::size_t{1} << (2 * n);
  const double norm = 1.0 / static_cast<double>(dim);
  std::vector<cplx> coeffs(count);
  parallel_for(count, 1, [&](std::size_t code) {
    const PauliAction a = action(PauliString::from_index(code, n));
    // Tr(P^dagger U) = sum_j conj(P[j, j^x]) U[j, j^x]
    cplx acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) acc += std::conj(a.phase(j)) * u(j, j ^ a.x);
    coeffs[code] = acc * norm;
  });
  return PauliExpansion(n, std::move(coeffs));
}

double PauliWeightSpectrum::total() const {
  double s = 0.0;
  for (double w : W) s += w;
  return s;
}

PauliWeightSpectrum weight_spectrum(const PauliExpansion& coeffs) {
  const std::size_t n = coeffs.qubits();
  PauliWeightSpectrum out;
  out.W.assign(n + 1, 0.0);
  const auto c = coeffs.coefficients();
  for (std::size_t code = 0; code < c.size(); ++code) {
    // weight = number of nonzero base-4 digits
    std::size_t w = 0;
    for (std::size_t k = 0; k < n; ++k) w += ((code >> (2 * k)) & 3u) != 0;
    out.W[w] += std::norm(c[code]);
  }
  return out;
}

UnitaryOperator error_operator(const UnitaryOperator& target, const UnitaryOperator& realized) {
  if (target.dim() != realized.dim()) throw InvalidInput("error_operator: dimension mismatch");
  return UnitaryOperator(target.matrix().adjoint() * realized.matrix());
}

PenaltyWeights PenaltyWeights::defaults(std::size_t n) {
  PenaltyWeights w;
  for (std::size_t k = 2; k <= n; ++k) w.lambda.push_back(std::pow(10.0, static_cast<double>(k - 2)));
  return w;
}

double penalized_objective(const UnitaryOperator& u, const UnitaryOperator& target, const PenaltyWeights& lambda) {
  if (u.dim() != target.dim()) throw InvalidInput("penalized_objective: dimension mismatch");
  for (double l : lambda.lambda)
    if (!(l >= 0.0)) throw InvalidInput("penalty weights must be nonnegative");
  const std::size_t n = qubit_count(u.dim());
  const double fidelity = hilbert_schmidt_inner(target.matrix(), u.matrix()).real() / static_cast<double>(u.dim());
  const auto spectrum = weight_spectrum(pauli_expand(error_operator(target, u).matrix(), n));
  double penalty = 0.0;
  for (std::size_t k = 2; k <= n; ++k) penalty += lambda.at(k) * spectrum.W[k];
  return fidelity - penalty;
}

CssCode css_steane_code() {
  // Codeword strings are listed with the last character on qubit 1, i.e. character
  // p sets bit p of the basis index, so that the Hamming checks below stabilize them.
  static constexpr const char* zero_words[] = {"0000000", "1111000", "1100110", "1010101",
                                               "0011110", "0101101", "0110011", "1001011"};
  static constexpr const char* one_words[] = {"1111111", "0000111", "0011001", "0101010",
                                              "1100001", "1010010", "1001100", "0110100"};
  CssCode code;
  const std::size_t dim = std::size_t{1} << code.n;
  auto build = [&](const char* const(&words)[8]) {
    StateVector psi(dim);
    const double amp = 1.0 / std::sqrt(8.0);
    for (const char* w : words) {
      std::size_t index = 0;
      for (std::size_t p = 0; p < 7; ++p)
        if (w[p] == '1') index |= std::size_t{1} << p;
      psi[index] = amp;
    }
    return psi;
  };
  code.logical_zero = build(zero_words);
  code.logical_one = build(one_words);
  for (const char* s : {"IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"})
    code.stabilizers.push_back(PauliString::parse(s));
  return code;
}

Syndrome syndrome_extract(std::span<const cplx> state, const CssCode& code) {
  if (state.size() != (std::size_t{1} << code.n)) throw InvalidInput("syndrome_extract: state dimension");
  Syndrome s{};
  for (std::size_t g = 0; g < code.stabilizers.size(); ++g) {
    const StateVector image = apply_pauli(code.stabilizers[g], state);
    const double ev = inner(state, image).real();
    const double sign = ev >= 0.0 ? 1.0 : -1.0;
    double residual = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) residual += std::norm(image[i] - sign * state[i]);
    if (std::sqrt(residual) > 1e-8)
      throw IndeterminateSyndrome("state is not an eigenvector of stabilizer " + code.stabilizers[g].to_string());
    s[g] = sign < 0.0 ? 1 : 0;
  }
  return s;
}

std::optional<PauliString> lookup_single_error(const Syndrome& s, const CssCode& code) {
  for (std::size_t q = 0; q < code.n; ++q)
    for (Pauli letter : {Pauli::X, Pauli::Y, Pauli::Z}) {
      std::vector<Pauli> letters(code.n, Pauli::I);
      letters[q] = letter;
      PauliString e(std::move(letters));
      if (syndrome_of(e, code) == s) return e;
    }
  return std::nullopt;
}

StateVector correct_single_error(std::span<const cplx> state, const CssCode& code) {
  const Syndrome s = syndrome_extract(state, code);
  if (s == Syndrome{}) return StateVector(state.begin(), state.end());
  const auto error = lookup_single_error(s, code);
  if (!error) throw Uncorrectable("syndrome does not match any single-qubit error");
  return apply_pauli(*error, state);
}

}  // namespace qctl::ft
