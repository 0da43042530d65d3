#pragma once

// Bang-bang gate synthesis: target unitaries realized as alternating products
// of two fixed propagators, with switching times found numerically.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qctl/linalg.hpp"
#include "qctl/spin.hpp"

namespace qctl::bangbang {

/// Actuator-state sequence m (1-based indices into a Hamiltonian list) and dwell times t.
/// The product is U^(m_1)(t_1) ... U^(m_K)(t_K).
struct SwitchingSchedule {
  std::vector<std::size_t> m;
  std::vector<double> t;

  std::size_t size() const { return m.size(); }
  double total_time() const;
  /// Canonical binary-switch form: m = 1,2,1,2,... of even length.
  static SwitchingSchedule alternating(std::vector<double> t);
  /// Drops zero-length segments and merges neighbours with equal m.
  SwitchingSchedule canonicalized() const;
};

enum class FidelityMode { phase_sensitive, phase_invariant };

UnitaryOperator evolve_schedule(const std::vector<HermitianOperator>& hamiltonians, const SwitchingSchedule& s);

/// Re or |.| of Tr(U_T^dagger U) / dim.
double gate_fidelity(const UnitaryOperator& u, const UnitaryOperator& target,
                     FidelityMode mode = FidelityMode::phase_sensitive);

/// arccos of the normalized Hilbert-Schmidt overlap, in [0, pi].
double hamiltonian_angle(const HermitianOperator& h1, const HermitianOperator& h2);

struct TraceIdentity {
  double lhs = 0.0;  ///< Tr[H0^dagger (H0 + H_r)] from the matrices
  double rhs = 0.0;  ///< 2 |d - d_r|^2 + |E|^2 from the vectors
};
TraceIdentity trace_identity_check(const spin::ChainSpec& spec, std::size_t r);

struct NamedGate {
  std::string name;
  UnitaryOperator unitary;
};

/// The six two-qubit targets on the single-excitation subspace of a 4-site chain,
/// basis |0>=|00>, |1>=|01>, |2>=|10>, |3>=|11>:
/// identity, had_i, t_i, i_had, i_t, cnot.
std::vector<NamedGate> gate_library();
/// Case-insensitive lookup; throws InvalidInput for unknown names.
UnitaryOperator gate_by_name(std::string_view name);

struct SynthesisJob {
  UnitaryOperator target;
  HermitianOperator h1;  ///< actuator state 1 (switch off)
  HermitianOperator h2;  ///< actuator state 2 (switch on)
  double fidelity_goal = 0.9999;
  std::size_t max_segments = 40;  ///< cap on the number of (h1, h2) pairs
  std::size_t min_segments = 1;
  /// Upper bound for each dwell time; <= 0 selects 4 * pi * dim / |H1|_F.
  double total_time_cap = 0.0;
  std::size_t restarts = 64;
  std::uint64_t seed = 1;
  FidelityMode mode = FidelityMode::phase_sensitive;
  unsigned threads = 1;
};

enum class SynthesisStatus { converged, budget_exhausted };

struct SynthesisResult {
  SwitchingSchedule schedule;
  double achieved_fidelity = 0.0;
  SynthesisStatus status = SynthesisStatus::budget_exhausted;
  std::size_t pairs = 0;  ///< number of alternation pairs of the search stage that produced the schedule
};

SynthesisResult synthesize_gate(const SynthesisJob& job);

/// Fidelity of the canonical alternating product for dwell times t, plus its gradient.
/// Exposed for tests and for callers that drive their own optimizer.
class AlternatingObjective {
 public:
  AlternatingObjective(const HermitianOperator& h1, const HermitianOperator& h2, const UnitaryOperator& target,
                       FidelityMode mode);
  double fidelity(std::span<const double> t) const;
  double fidelity_and_gradient(std::span<const double> t, std::span<double> grad) const;

 private:
  ComplexMatrix step(std::size_t k, double t) const;
  SpectralDecomposition s1_, s2_;
  ComplexMatrix h1_, h2_, target_, target_adj_;
  FidelityMode mode_;
};

/// Step-function rows (time, actuator state) for plotting a schedule.
std::vector<std::pair<double, std::size_t>> switching_plot(const SwitchingSchedule& s);

}  // namespace qctl::bangbang
