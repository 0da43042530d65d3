#include "qctl/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "qctl/errors.hpp"
#include "qctl/spin.hpp"
#include "test_util.hpp"

using namespace qctl;
using namespace qctl::testing;
using std::numbers::pi;

TEST(linalg, construction_validates) {
  EXPECT_THROW(ComplexMatrix(2, std::vector<cplx>(3)), InvalidInput);
  EXPECT_THROW(ComplexMatrix(1, {cplx(std::numeric_limits<double>::quiet_NaN(), 0)}), InvalidInput);
  EXPECT_THROW(ComplexMatrix(1, {cplx(0, std::numeric_limits<double>::infinity())}), InvalidInput);
  EXPECT_THROW(HermitianOperator(ComplexMatrix::from_rows({{0, 1}, {0, 0}})), InvalidInput);
  EXPECT_THROW(UnitaryOperator(2.0 * pauli_x()), InvalidInput);
  EXPECT_NO_THROW(HermitianOperator{pauli_y()});
  EXPECT_NO_THROW(UnitaryOperator{pauli_y()});
}

TEST(linalg, hermitian_tolerance_boundary) {
  ComplexMatrix m = pauli_x();
  m(0, 1) += 5e-13;
  EXPECT_NO_THROW(HermitianOperator{m});
  m(0, 1) += 1e-11;
  EXPECT_THROW(HermitianOperator{m}, InvalidInput);
}

TEST(linalg, expm_zero_generator) {
  for (std::size_t n : {1, 2, 5}) {
    const auto u = matrix_exponential_unitary(HermitianOperator(ComplexMatrix(n)), 7.3);
    EXPECT_EQ(max_abs_diff(u.matrix(), ComplexMatrix::identity(n)), 0.0);
  }
}

TEST(linalg, expm_pauli_rotation) {
  const auto u = matrix_exponential_unitary(HermitianOperator(pauli_x()), pi / 2);
  EXPECT_LT(max_abs_diff(u.matrix(), cplx(0, -1) * pauli_x()), 1e-14);
}

TEST(linalg, expm_chain_matches_pade_oracle) {
  const spin::ChainSpec spec{{0, 0, 0, 0}, {1, 1, 1}};
  const auto h = spin::build_chain_hamiltonian(spec);
  const auto u = matrix_exponential_unitary(h, 1.0);
  EXPECT_LT(max_abs_diff(u.matrix(), expm_oracle(h.matrix(), 1.0)), 1e-10);
}

TEST(linalg, expm_random_matches_pade_oracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto h = random_hermitian(n, rng);
    const double t = std::uniform_real_distribution<double>(-3, 3)(rng);
    EXPECT_LT(max_abs_diff(matrix_exponential_unitary(h, t).matrix(), expm_oracle(h.matrix(), t)), 1e-10);
  }
}

TEST(linalg, expm_group_property) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ut(-2, 2);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto h = random_hermitian(n, rng);
    const double t1 = ut(rng), t2 = ut(rng);
    const auto lhs = matrix_exponential_unitary(h, t1) * matrix_exponential_unitary(h, t2);
    EXPECT_LT(max_abs_diff(lhs.matrix(), matrix_exponential_unitary(h, t1 + t2).matrix()), 1e-9);
  }
}

TEST(linalg, expm_preserves_norm) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto h = random_hermitian(n, rng);
    const auto psi = random_state(n, rng);
    const auto phi = matrix_exponential_unitary(h, 2.5).matrix() * std::span<const cplx>(psi);
    EXPECT_NEAR(norm(phi), norm(psi), 1e-10);
  }
}

TEST(linalg, spectral_decomposition_reconstructs) {
  std::mt19937_64 rng(14);
  const auto h = random_hermitian(6, rng);
  const SpectralDecomposition sd(h);
  std::vector<cplx> d(sd.eigenvalues().begin(), sd.eigenvalues().end());
  EXPECT_LT(max_abs_diff(sd.reconstruct(d), h.matrix()), 1e-12);
  EXPECT_TRUE(std::is_sorted(sd.eigenvalues().begin(), sd.eigenvalues().end()));
  const ComplexMatrix a = random_matrix(6, rng);
  EXPECT_LT(max_abs_diff(sd.from_eigenbasis(sd.to_eigenbasis(a)), a), 1e-12);
}

TEST(linalg, hilbert_schmidt_examples) {
  EXPECT_EQ(hilbert_schmidt_inner(pauli_x(), pauli_z()), cplx(0));
  EXPECT_EQ(hilbert_schmidt_inner(pauli_x(), pauli_x()), cplx(2));
  const auto pair = spin::build_switch_pair({{0, 0, 0, 0}, {1, 1, 1}}, 2);
  EXPECT_NEAR(hilbert_schmidt_inner(pair.off.matrix(), pair.on.matrix()).real(), 4.0, 1e-15);
}

TEST(linalg, hilbert_schmidt_properties) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_matrix(5, rng), b = random_matrix(5, rng);
    EXPECT_LT(std::abs(hilbert_schmidt_inner(a, b) - std::conj(hilbert_schmidt_inner(b, a))), 1e-12);
    const cplx aa = hilbert_schmidt_inner(a, a);
    EXPECT_LE(std::abs(aa.imag()), 1e-14 * aa.real());
    EXPECT_GE(aa.real(), 0.0);
    // Tr(A^dagger B) by brute force
    cplx s = 0;
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) s += std::conj(a(j, i)) * b(j, i);
    EXPECT_LT(std::abs(hilbert_schmidt_inner(a, b) - s), 1e-12);
  }
  EXPECT_THROW(hilbert_schmidt_inner(pauli_x(), ComplexMatrix(3)), InvalidInput);
}

TEST(linalg, tensor_product_examples) {
  EXPECT_EQ(tensor_product(pauli_i(), pauli_i()), ComplexMatrix::identity(4));
  const StateVector zero_zero = {1, 0, 0, 0};
  const auto v = tensor_product(pauli_x(), pauli_i()) * std::span<const cplx>(zero_zero);
  EXPECT_EQ(v, (StateVector{0, 0, 1, 0}));
  const auto xz = tensor_product(pauli_x(), pauli_z());
  EXPECT_EQ(xz * xz, ComplexMatrix::identity(4));
}

TEST(linalg, tensor_product_associative_on_integers) {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<int> d(-3, 3);
  auto rnd = [&](std::size_t n) {
    ComplexMatrix m(n);
    for (auto& z : m.data()) z = {double(d(rng)), double(d(rng))};
    return m;
  };
  const auto a = rnd(2), b = rnd(3), c = rnd(2);
  EXPECT_EQ(tensor_product(tensor_product(a, b), c), tensor_product(a, tensor_product(b, c)));
}

TEST(linalg, commutator_examples) {
  EXPECT_EQ(commutator(pauli_x(), pauli_x()), ComplexMatrix(2));
  EXPECT_LT(max_abs_diff(commutator(pauli_x(), pauli_z()), cplx(0, -2) * pauli_y()), 1e-15);
  std::mt19937_64 rng(17);
  const auto a = random_matrix(4, rng), b = random_matrix(4, rng);
  ComplexMatrix oracle(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) oracle(i, j) += a(i, k) * b(k, j) - b(i, k) * a(k, j);
  EXPECT_LT(max_abs_diff(commutator(a, b), oracle), 1e-12);
  EXPECT_LT(max_abs_diff(commutator(a, b), -1.0 * commutator(b, a)), 1e-15);
  EXPECT_THROW(commutator(a, ComplexMatrix(2)), InvalidInput);
}

TEST(linalg, matmul_matches_eigen) {
  std::mt19937_64 rng(18);
  for (std::size_t n : {1, 3, 8, 17}) {
    const auto a = random_matrix(n, rng), b = random_matrix(n, rng);
    EXPECT_LT(max_abs_diff(a * b, from_eigen(to_eigen(a) * to_eigen(b))), 1e-12 * n);
  }
}

TEST(linalg, json_round_trip) {
  std::mt19937_64 rng(19);
  const auto a = random_matrix(3, rng);
  EXPECT_EQ(matrix_from_json(matrix_to_json(a)), a);
  const auto j = matrix_to_json(pauli_y());
  EXPECT_EQ(j.dump(), "[[[0.0,0.0],[0.0,-1.0]],[[0.0,1.0],[0.0,0.0]]]");
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse("[[1,2],[3]]")), InvalidInput);
  EXPECT_THROW(matrix_from_json(nlohmann::json::parse("\"x\"")), InvalidInput);
}
