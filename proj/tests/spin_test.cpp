#include "qctl/spin.hpp"

#include <gtest/gtest.h>

#include <numbers>

#include "qctl/errors.hpp"
#include "test_util.hpp"

using namespace qctl;
using namespace qctl::spin;
using namespace qctl::testing;
using std::numbers::pi;

namespace {

// Full 2^N nearest-neighbour Hamiltonian built from bit flips, site p on bit N-1-p.
ComplexMatrix bit_oracle(const std::vector<double>& J, bool with_zz) {
  const std::size_t N = J.size() + 1, dim = std::size_t{1} << N;
  ComplexMatrix h(dim);
  for (std::size_t s = 0; s < dim; ++s)
    for (std::size_t b = 0; b + 1 < N; ++b) {
      const std::size_t m1 = std::size_t{1} << (N - 1 - b), m2 = m1 >> 1;
      const bool differ = ((s & m1) != 0) != ((s & m2) != 0);
      // (XX + YY)/2 swaps antiparallel neighbours with amplitude 1
      if (differ) h(s ^ m1 ^ m2, s) += J[b];
      if (with_zz) h(s, s) += (differ ? -0.5 : 0.5) * J[b];
    }
  return h;
}

ComplexMatrix single_excitation_block(const ComplexMatrix& full, std::size_t N) {
  ComplexMatrix out(N);
  for (std::size_t p = 0; p < N; ++p)
    for (std::size_t q = 0; q < N; ++q) out(p, q) = full(std::size_t{1} << (N - 1 - p), std::size_t{1} << (N - 1 - q));
  return out;
}

}  // namespace

TEST(spin, chain_smallest) {
  const auto h = build_chain_hamiltonian({{0, 0}, {1}});
  EXPECT_EQ(h.matrix(), ComplexMatrix::from_rows({{0, 1}, {1, 0}}));
}

TEST(spin, chain_zero_pattern) {
  const auto h = build_chain_hamiltonian({{1, 2, 3, 4}, {0.5, 0.6, 0.7}}).matrix();
  EXPECT_EQ(h(0, 2), cplx(0));
  EXPECT_EQ(h(0, 3), cplx(0));
  EXPECT_EQ(h(1, 3), cplx(0));
  EXPECT_EQ(h(2, 2), cplx(3));
  EXPECT_EQ(h(2, 3), cplx(0.7));
}

TEST(spin, chain_symmetric_tridiagonal) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.1, 2.0), e(-2, 2);
  for (std::size_t N = 2; N <= 8; ++N) {
    ChainSpec spec;
    for (std::size_t i = 0; i < N; ++i) spec.E.push_back(e(rng));
    for (std::size_t i = 0; i + 1 < N; ++i) spec.d.push_back(u(rng));
    const auto h = build_chain_hamiltonian(spec).matrix();
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        EXPECT_EQ(h(i, j), h(j, i));
        if (i > j + 1 || j > i + 1) EXPECT_EQ(h(i, j), cplx(0));
      }
  }
}

TEST(spin, constant_energy_shift_moves_spectrum) {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (double c : {-1.3, 0.25, 7.0}) {
    ChainSpec spec{std::vector<double>(6, 0.4), {}};
    for (int i = 0; i < 5; ++i) spec.d.push_back(u(rng));
    ChainSpec shifted = spec;
    for (auto& x : shifted.E) x += c;
    const SpectralDecomposition a(build_chain_hamiltonian(spec)), b(build_chain_hamiltonian(shifted));
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(b.eigenvalues()[i], a.eigenvalues()[i] + c, 1e-10);
  }
}

TEST(spin, heisenberg_examples) {
  const auto h4 = heisenberg_to_chain({1, 1, 1}, 4);
  EXPECT_EQ(h4.d, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(h4.E, (std::vector<double>{0.5, -0.5, -0.5, 0.5}));
  const auto h2 = heisenberg_to_chain({1}, 2);
  EXPECT_EQ(h2.E, (std::vector<double>{-0.5, -0.5}));
  const auto xy = heisenberg_to_chain({1}, 2, Coupling::xy);
  EXPECT_EQ(xy.E, (std::vector<double>{0, 0}));
  EXPECT_EQ(xy.d, (std::vector<double>{1}));
}

TEST(spin, chain_matches_tensor_projection) {
  // N=4 uniform case against the 16 x 16 oracle
  const auto block = single_excitation_block(bit_oracle({1, 1, 1}, true), 4);
  EXPECT_LT(max_abs_diff(build_chain_hamiltonian(heisenberg_to_chain({1, 1, 1}, 4)).matrix(), block), 1e-12);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (std::size_t N = 2; N <= 6; ++N)
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<double> J(N - 1);
      for (auto& j : J) j = u(rng);
      for (bool zz : {true, false}) {
        const auto spec = heisenberg_to_chain(J, N, zz ? Coupling::heisenberg : Coupling::xy);
        const auto oracle = single_excitation_block(bit_oracle(J, zz), N);
        EXPECT_LT(max_abs_diff(build_chain_hamiltonian(spec).matrix(), oracle), 1e-12) << "N=" << N;
      }
    }
}

TEST(spin, full_hamiltonian_matches_oracle_and_conserves_magnetization) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (std::size_t N = 2; N <= 5; ++N) {
    std::vector<double> J(N - 1);
    for (auto& j : J) j = u(rng);
    const auto full = full_chain_hamiltonian(J, Coupling::heisenberg);
    EXPECT_LT(max_abs_diff(full.matrix(), bit_oracle(J, true)), 1e-12);
    ComplexMatrix mz(std::size_t{1} << N);
    for (std::size_t s = 0; s < mz.dim(); ++s) mz(s, s) = double(N) - 2.0 * std::popcount(s);
    EXPECT_LT(commutator(full.matrix(), mz).max_abs(), 1e-12) << "N=" << N;
  }
}

TEST(spin, heisenberg_rejects_bad_input) {
  EXPECT_THROW(heisenberg_to_chain({1, 0, 1}, 4), InvalidInput);
  EXPECT_THROW(heisenberg_to_chain({1, -2}, 3), InvalidInput);
  EXPECT_THROW(heisenberg_to_chain({1, 1}, 4), InvalidInput);
}

TEST(spin, chain_rejects_bad_spec) {
  EXPECT_THROW(build_chain_hamiltonian({{0, 0, 0}, {1}}), InvalidInput);
  EXPECT_THROW(build_chain_hamiltonian({{0, 0}, {0}}), InvalidInput);
  EXPECT_THROW(build_chain_hamiltonian({{0, std::numeric_limits<double>::infinity()}, {1}}), InvalidInput);
}

TEST(spin, switch_pair) {
  const ChainSpec spec{{0, 0, 0, 0}, {1, 1, 1}};
  const auto pair = build_switch_pair(spec, 2);
  ComplexMatrix expected = pair.off.matrix();
  expected(1, 2) = 0;
  expected(2, 1) = 0;
  EXPECT_EQ(pair.on.matrix(), expected);

  const ChainSpec uneven{{0.3, -1, 2, 0.1}, {0.7, 1.9, 0.4}};
  for (std::size_t r = 1; r <= 3; ++r) {
    const auto p = build_switch_pair(uneven, r);
    ComplexMatrix hr(4);
    hr(r - 1, r) = hr(r, r - 1) = -uneven.d[r - 1];
    EXPECT_EQ(p.on.matrix() - p.off.matrix(), hr);
    // 2 |d - d_r|^2 + |E|^2
    double rhs = 0;
    for (std::size_t i = 0; i < 3; ++i)
      if (i != r - 1) rhs += 2 * uneven.d[i] * uneven.d[i];
    for (double e : uneven.E) rhs += e * e;
    EXPECT_NEAR(hilbert_schmidt_inner(p.off.matrix(), p.on.matrix()).real(), rhs, 1e-13);
  }
  EXPECT_THROW(build_switch_pair(spec, 0), InvalidInput);
  EXPECT_THROW(build_switch_pair(spec, 4), InvalidInput);
}

TEST(spin, hyperfine_drift_coefficients) {
  const HyperfineParams p;
  EXPECT_EQ(p.nu_s_GHz, 11.885);
  EXPECT_EQ(p.nu_n_MHz, 18.1);
  EXPECT_EQ(p.A_zx_MHz, 14.2);
  EXPECT_EQ(p.A_zz_MHz, -42.7);
  const auto sx = 0.5 * pauli_x(), sy = 0.5 * pauli_y(), sz = 0.5 * pauli_z(), id = pauli_i();
  const auto Sz = tensor_product(sz, id), Iz = tensor_product(id, sz);
  const auto SzIx = tensor_product(sz, sx), SzIz = tensor_product(sz, sz);
  const double mhz = 1e-3;  // to GHz
  ComplexMatrix rot = (p.nu_n_MHz * mhz) * Iz;
  rot.add_scaled(p.A_zx_MHz * mhz, SzIx).add_scaled(p.A_zz_MHz * mhz, SzIz);
  ComplexMatrix lab = rot;
  lab.add_scaled(p.nu_s_GHz, Sz);

  const auto sys_rot = build_1e1n_hamiltonian(p, Frame::electron_rotating);
  const auto sys_lab = build_1e1n_hamiltonian(p, Frame::lab);
  EXPECT_LT(max_abs_diff(sys_rot.drift.matrix(), 2 * pi * rot), 1e-12);
  EXPECT_LT(max_abs_diff(sys_lab.drift.matrix(), 2 * pi * lab), 1e-12);
  ASSERT_EQ(sys_rot.controls.size(), 2u);
  EXPECT_LT(max_abs_diff(sys_rot.controls[0].matrix(), 2 * pi * tensor_product(sx, id)), 1e-15);
  EXPECT_LT(max_abs_diff(sys_rot.controls[1].matrix(), 2 * pi * tensor_product(sy, id)), 1e-15);
}

TEST(spin, hyperfine_decoupled_zeeman) {
  HyperfineParams p;
  p.A_zx_MHz = p.A_zz_MHz = 0;
  const auto h = build_1e1n_hamiltonian(p, Frame::lab).drift.matrix();
  const double s = p.nu_s_GHz / 2, n = p.nu_n_MHz * 1e-3 / 2;
  const double expected[4] = {s + n, s - n, -s + n, -s - n};
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(h(i, i).real(), 2 * pi * expected[i], 1e-12);
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) EXPECT_EQ(h(i, j), cplx(0));
  }
}

TEST(spin, nucleus_only_indirectly_controllable) {
  const auto h = build_1e1n_hamiltonian(HyperfineParams{}).drift.matrix();
  EXPECT_GT(commutator(h, tensor_product(pauli_i(), pauli_z())).max_abs(), 1e-3);
  HyperfineParams p;
  p.A_zx_MHz = 0;
  const auto h0 = build_1e1n_hamiltonian(p).drift.matrix();
  EXPECT_EQ(commutator(h0, tensor_product(pauli_i(), pauli_z())).max_abs(), 0.0);
}
