#pragma once

// Piecewise-constant shaped-pulse optimization (GRAPE) with exact
// per-segment propagator derivatives.

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "qctl/linalg.hpp"
#include "qctl/spin.hpp"

namespace qctl::pulse {

/// Control amplitudes, segments x channels, row-major; each held for dt.
struct PulseProgram {
  double dt = 0.0;
  std::size_t segments = 0;
  std::size_t channels = 0;
  std::vector<double> amplitudes;

  PulseProgram() = default;
  PulseProgram(double dt, std::size_t segments, std::size_t channels);

  double& at(std::size_t k, std::size_t c) { return amplitudes[k * channels + c]; }
  double at(std::size_t k, std::size_t c) const { return amplitudes[k * channels + c]; }
};

struct StateTransfer {
  StateVector initial;
  StateVector goal;
};

struct GateObjective {
  UnitaryOperator target;
};

struct ControlProblem {
  HermitianOperator drift;
  std::vector<HermitianOperator> controls;
  std::variant<StateTransfer, GateObjective> objective;
  double horizon = 0.0;
  std::size_t segments = 0;

  double dt() const { return horizon / static_cast<double>(segments); }
  /// Throws InvalidInput on inconsistent dimensions or a non-unit state.
  void validate() const;
  /// Also checks that the program matches this problem's shape.
  void validate(const PulseProgram& u) const;
};

/// prod_k exp(-i dt (H_drift + sum_c u_kc H_c)), last segment leftmost.
UnitaryOperator propagate_piecewise(const ControlProblem& p, const PulseProgram& u);

/// |<goal| U |initial>|^2. Throws WrongObjective for gate problems.
double transfer_fidelity(const ControlProblem& p, const PulseProgram& u);

/// State transfer: |<goal|U|initial>|^2; gate: |Tr(U_T^dagger U)|^2 / dim^2.
double objective_value(const ControlProblem& p, const PulseProgram& u);

/// Exact d(objective)/d(u_kc), segments x channels row-major.
std::vector<double> fidelity_gradient(const ControlProblem& p, const PulseProgram& u);

struct GrapeOptions {
  int iterations = 500;
  double gradient_tol = 1e-8;
  /// Amplitudes are projected into [-u_max, u_max] after each step.
  std::optional<double> u_max;
  std::size_t memory = 12;
};

struct GrapeResult {
  PulseProgram program;
  std::vector<double> history;  ///< objective after each accepted step, starting with the initial value
  bool converged = false;       ///< stopped on the gradient criterion
};

GrapeResult grape_optimize(const ControlProblem& p, const PulseProgram& init, const GrapeOptions& options = {});
/// Seeded random start, amplitudes uniform in +-u_max/2 (+-0.5 when unbounded).
GrapeResult grape_optimize(const ControlProblem& p, std::uint64_t seed, const GrapeOptions& options = {});

/// States after each segment boundary, starting with the initial state (size segments + 1).
std::vector<StateVector> state_trajectory(const ControlProblem& p, const PulseProgram& u, const StateVector& psi0);

/// (Tr rho X, Tr rho Y, Tr rho Z) for a 2x2 density matrix; trace must be 1 within 1e-9.
std::array<double, 3> bloch_vector(const ComplexMatrix& rho);
/// Reduced state of the second factor of a 2 x m bipartite system (traces out the first qubit).
ComplexMatrix partial_trace_first_qubit(const ComplexMatrix& rho);
ComplexMatrix density_from_state(std::span<const cplx> psi);

/// Nuclear spin flip |up,up> -> |up,down> of the 1e1n system.
ControlProblem nuclear_flip_problem(const spin::HyperfineParams& params, spin::Frame frame, std::size_t segments,
                                    double horizon_ns);

}  // namespace qctl::pulse
