#pragma once

// Model Hamiltonians: the single-excitation block of a nearest-neighbour
// spin chain, its binary coupling switch, and a one-electron/one-nucleus
// hyperfine system.

#include <utility>
#include <vector>

#include "qctl/linalg.hpp"

namespace qctl::spin {

/// Tridiagonal chain: on-site energies E (length N) and couplings d (length N-1, all > 0).
struct ChainSpec {
  std::vector<double> E;
  std::vector<double> d;

  std::size_t sites() const { return E.size(); }
  /// Throws InvalidInput on length mismatch, nonpositive coupling, or non-finite values.
  void validate() const;
};

enum class Coupling { heisenberg, xy };

HermitianOperator build_chain_hamiltonian(const ChainSpec& spec);

/// Single-excitation block of sum_n (J_n/2)(XX + YY [+ ZZ]) over nearest neighbours,
/// basis ordered by the position of the flipped spin.
ChainSpec heisenberg_to_chain(const std::vector<double>& J, std::size_t N, Coupling coupling = Coupling::heisenberg);

/// Full 2^N-dimensional nearest-neighbour Hamiltonian; site 1 is the most significant tensor factor.
HermitianOperator full_chain_hamiltonian(const std::vector<double>& J, Coupling coupling);

struct SwitchPair {
  HermitianOperator off;  ///< H0
  HermitianOperator on;   ///< H0 + H_r: coupling r switched off
};

/// r is 1-based, 1 <= r <= N-1.
SwitchPair build_switch_pair(const ChainSpec& spec, std::size_t r);

/// Ordinary frequencies: nu_s in GHz, the rest in MHz.
struct HyperfineParams {
  double nu_s_GHz = 11.885;
  double nu_n_MHz = 18.1;
  double A_zx_MHz = 14.2;
  double A_zz_MHz = -42.7;
};

enum class Frame { lab, electron_rotating };

struct HyperfineSystem {
  HermitianOperator drift;
  std::vector<HermitianOperator> controls;
};

/// 4x4 electron (x) nucleus operators in rad/ns, basis |e> (x) |n> with spin-up at index 0:
///   drift/2pi = nu_s S_z + nu_n I_z + A_zx S_z I_x + A_zz S_z I_z
/// (nu_s S_z dropped in the electron-rotating frame), controls 2pi S_x and 2pi S_y
/// so amplitudes are in GHz. S_k and I_k are Pauli_k / 2 on their factor.
HyperfineSystem build_1e1n_hamiltonian(const HyperfineParams& p, Frame frame = Frame::electron_rotating);

}  // namespace qctl::spin
