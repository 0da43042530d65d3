#pragma once

// Markovian open-system dynamics: the Lindblad master equation and the
// homodyne-type stochastic master equation with optional current feedback.
//
// Conventions:
//   d rho / dt = -i [H, rho] + sum_k D[A_k] rho,
//   D[A] rho   = A rho A^dagger - (A^dagger A rho + rho A^dagger A) / 2,
//   H[B] rho   = B rho + rho B^dagger - Tr(B rho + rho B^dagger) rho.

#include <cstdint>
#include <vector>

#include "qctl/linalg.hpp"

namespace qctl::open {

struct LindbladModel {
  HermitianOperator H;
  std::vector<ComplexMatrix> collapse_ops;  ///< A_k, units sqrt(rate)
  void validate() const;
};

struct MeasurementChannel {
  ComplexMatrix B;
};

enum class FeedbackMode { off, current_proportional };

/// H(t + dt) = H + gain * (dy / dt) * actuator, with dy the last increment of `channel`.
struct FeedbackRule {
  FeedbackMode mode = FeedbackMode::off;
  double gain = 0.0;
  HermitianOperator actuator;
  std::size_t channel = 0;
};

struct DensityTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;
};

struct QuantumTrajectory {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;  ///< conditional states at the sampled times
  std::size_t channels = 0;
  std::vector<double> record;  ///< dy per step, steps x channels row-major
  std::vector<double> noise;   ///< dW per step, same layout
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

ComplexMatrix dissipator_apply(const ComplexMatrix& a, const ComplexMatrix& rho);
ComplexMatrix measurement_superop_apply(const ComplexMatrix& b, const ComplexMatrix& rho);
/// Right-hand side of the master equation.
ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho);

/// The number of steps is ceil(T/dt) with the step shrunk to T/steps. `stride` keeps
/// every stride-th state (the final state is always kept).
/// Throws IntegrationFailure if the trace drifts by more than 1e-6 or entries leave the unit disk.
DensityTrajectory lindblad_propagate(const LindbladModel& model, const ComplexMatrix& rho0, double T, double dt,
                                     std::size_t stride = 1);

/// Unit-efficiency homodyne detection of each measured operator C: installs C both
/// as a collapse operator and as the measurement channel, so the ensemble mean
/// obeys the unconditional master equation.
struct HomodyneSetup {
  LindbladModel model;
  std::vector<MeasurementChannel> channels;
};
HomodyneSetup homodyne(const HermitianOperator& h, const std::vector<ComplexMatrix>& extra_collapse,
                       const std::vector<ComplexMatrix>& measured);

/// RK4 for the deterministic part plus an Euler-Maruyama innovation per step,
/// dW ~ N(0, dt) from a stream seeded by (seed, stream). With channels present
/// the state is clipped back to the PSD cone and renormalized after each step.
QuantumTrajectory sme_trajectory(const LindbladModel& model, const std::vector<MeasurementChannel>& channels,
                                 const FeedbackRule& feedback, const ComplexMatrix& rho0, double T, double dt,
                                 std::uint64_t seed, std::uint64_t stream = 0, std::size_t stride = 1);

/// Trajectory k uses stream k.
std::vector<QuantumTrajectory> sme_ensemble(const LindbladModel& model, const std::vector<MeasurementChannel>& channels,
                                            const FeedbackRule& feedback, const ComplexMatrix& rho0, double T,
                                            double dt, std::size_t count, std::uint64_t seed, std::size_t stride = 1,
                                            unsigned threads = 1);

DensityTrajectory ensemble_average(const std::vector<QuantumTrajectory>& trajectories);

/// Half the trace norm of a - b (both Hermitian).
double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace qctl::open
