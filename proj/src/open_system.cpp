#include "qctl/open_system.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "qctl/errors.hpp"
#include "qctl/parallel.hpp"

namespace qctl::open {

namespace {

void require_dim(const ComplexMatrix& a, std::size_t n, const char* what) {
  if (a.dim() != n) throw InvalidInput(std::string(what) + ": dimension mismatch");
}

void hermitize(ComplexMatrix& rho) {
  const std::size_t n = rho.dim();
  for (std::size_t i = 0; i < n; ++i) {
    rho(i, i) = rho(i, i).real();
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx avg = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
      rho(i, j) = avg;
      rho(j, i) = std::conj(avg);
    }
  }
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  Eigen::MatrixXcd e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(i, j) = m(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e, Eigen::EigenvaluesOnly);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = solver.eigenvalues()(i);
  return out;
}

// Euler-Maruyama can push a pure conditional state slightly outside the PSD cone
// (eigenvalue errors ~ kappa*dt); clip and rebuild when that happens.
void project_psd(ComplexMatrix& rho) {
  const std::size_t n = rho.dim();
  Eigen::MatrixXcd e(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e(i, j) = rho(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(e);
  if (solver.eigenvalues().minCoeff() >= 0.0) return;
  const Eigen::VectorXd clipped = solver.eigenvalues().cwiseMax(0.0);
  const Eigen::MatrixXcd r = solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = r(i, j);
  hermitize(rho);
}

void check_density(const ComplexMatrix& rho, std::size_t n) {
  require_dim(rho, n, "initial state");
  if (!rho.all_finite()) throw InvalidInput("initial state has non-finite entries");
  if (max_abs_diff(rho, rho.adjoint()) > 1e-10) throw InvalidInput("initial state is not Hermitian");
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-9) throw InvalidInput("initial state must have unit trace");
  for (double ev : hermitian_eigenvalues(rho))
    if (ev < -1e-9) throw InvalidInput("initial state is not positive semidefinite");
}

// Precomputed operators for repeated right-hand-side evaluation.
struct Generator {
  ComplexMatrix h;
  std::vector<ComplexMatrix> a, a_adj, a_adj_a;

  explicit Generator(const LindbladModel& m) : h(m.H.matrix()) {
    for (const auto& op : m.collapse_ops) {
      a.push_back(op);
      a_adj.push_back(op.adjoint());
      a_adj_a.push_back(a_adj.back() * op);
    }
  }

  ComplexMatrix rhs(const ComplexMatrix& hh, const ComplexMatrix& rho) const {
    const cplx minus_i{0.0, -1.0};
    ComplexMatrix out = minus_i * (hh * rho - rho * hh);
    for (std::size_t k = 0; k < a.size(); ++k) {
      out += a[k] * rho * a_adj[k];
      out.add_scaled(-0.5, a_adj_a[k] * rho + rho * a_adj_a[k]);
    }
    return out;
  }

  ComplexMatrix rk4_increment(const ComplexMatrix& hh, const ComplexMatrix& rho, double dt) const {
    const ComplexMatrix k1 = rhs(hh, rho);
    ComplexMatrix tmp = rho;
    tmp.add_scaled(0.5 * dt, k1);
    const ComplexMatrix k2 = rhs(hh, tmp);
    tmp = rho;
    tmp.add_scaled(0.5 * dt, k2);
    const ComplexMatrix k3 = rhs(hh, tmp);
    tmp = rho;
    tmp.add_scaled(dt, k3);
    const ComplexMatrix k4 = rhs(hh, tmp);
    ComplexMatrix inc = k1;
    inc.add_scaled(2.0, k2);
    inc.add_scaled(2.0, k3);
    inc += k4;
    inc *= dt / 6.0;
    return inc;
  }
};

std::size_t step_count(double T, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInput("time step must be positive");
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidInput("final time must be >= 0");
  if (T == 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
}

}  // namespace

void LindbladModel::validate() const {
  if (H.dim() == 0) throw InvalidInput("Lindblad model needs a Hamiltonian");
  for (const auto& a : collapse_ops) {
    require_dim(a, H.dim(), "collapse operator");
    if (!a.all_finite()) throw InvalidInput("collapse operator has non-finite entries");
  }
}

ComplexMatrix dissipator_apply(const ComplexMatrix& a, const ComplexMatrix& rho) {
  require_dim(rho, a.dim(), "dissipator_apply");
  const ComplexMatrix a_adj = a.adjoint();
  const ComplexMatrix ada = a_adj * a;
  ComplexMatrix out = a * rho * a_adj;
  out.add_scaled(-0.5, ada * rho + rho * ada);
  return out;
}

ComplexMatrix measurement_superop_apply(const ComplexMatrix& b, const ComplexMatrix& rho) {
  require_dim(rho, b.dim(), "measurement_superop_apply");
  ComplexMatrix out = b * rho + rho * b.adjoint();
  const cplx tr = out.trace();
  out.add_scaled(-tr, rho);
  return out;
}

ComplexMatrix lindblad_rhs(const LindbladModel& model, const ComplexMatrix& rho) {
  model.validate();
  require_dim(rho, model.H.dim(), "lindblad_rhs");
  return Generator(model).rhs(model.H.matrix(), rho);
}

DensityTrajectory lindblad_propagate(const LindbladModel& model, const ComplexMatrix& rho0, double T, double dt,
                                     std::size_t stride) {
  model.validate();
  check_density(rho0, model.H.dim());
  if (stride == 0) throw InvalidInput("stride must be >= 1");
  const std::size_t steps = step_count(T, dt);
  const double h = steps ? T / static_cast<double>(steps) : 0.0;
  const Generator gen(model);

  DensityTrajectory out;
  ComplexMatrix rho = rho0;
  out.times.push_back(0.0);
  out.states.push_back(rho);
  for (std::size_t s = 1; s <= steps; ++s) {
    rho += gen.rk4_increment(gen.h, rho, h);
    hermitize(rho);
    const double drift = std::abs(rho.trace() - cplx{1.0, 0.0});
    if (!rho.all_finite() || drift > 1e-6 || rho.max_abs() > 1.0 + 1e-6)
      throw IntegrationFailure("Lindblad integration diverged at t=" + std::to_string(s * h) +
                               "; reduce dt");
    if (s % stride == 0 || s == steps) {
      out.times.push_back(static_cast<double>(s) * h);
      out.states.push_back(rho);
    }
  }
  return out;
}

HomodyneSetup homodyne(const HermitianOperator& h, const std::vector<ComplexMatrix>& extra_collapse,
                       const std::vector<ComplexMatrix>& measured) {
  HomodyneSetup setup{LindbladModel{h, extra_collapse}, {}};
  for (const auto& c : measured) {
    setup.model.collapse_ops.push_back(c);
    setup.channels.push_back({c});
  }
  setup.model.validate();
  return setup;
}

QuantumTrajectory sme_trajectory(const LindbladModel& model, const std::vector<MeasurementChannel>& channels,
                                 const FeedbackRule& feedback, const ComplexMatrix& rho0, double T, double dt,
                                 std::uint64_t seed, std::uint64_t stream, std::size_t stride) {
  model.validate();
  const std::size_t n = model.H.dim();
  check_density(rho0, n);
  if (stride == 0) throw InvalidInput("stride must be >= 1");
  for (const auto& c : channels) require_dim(c.B, n, "measurement channel");
  const bool fb_on = feedback.mode == FeedbackMode::current_proportional;
  if (fb_on) {
    require_dim(feedback.actuator.matrix(), n, "feedback actuator");
    if (!std::isfinite(feedback.gain)) throw InvalidInput("feedback gain must be finite");
    if (feedback.channel >= channels.size()) throw InvalidInput("feedback channel index out of range");
  }
  const std::size_t steps = step_count(T, dt);
  const double h = steps ? T / static_cast<double>(steps) : 0.0;
  const double sqrt_h = std::sqrt(h);
  const Generator gen(model);
  const std::size_t C = channels.size();
  std::vector<ComplexMatrix> b_plus_adj;
  for (const auto& c : channels) b_plus_adj.push_back(c.B + c.B.adjoint());

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);

  QuantumTrajectory out;
  out.channels = C;
  out.seed = seed;
  out.stream = stream;
  out.record.reserve(steps * C);
  out.noise.reserve(steps * C);
  ComplexMatrix rho = rho0;
  out.times.push_back(0.0);
  out.states.push_back(rho);
  double last_current = 0.0;
  std::vector<double> dw(C);

  for (std::size_t s = 1; s <= steps; ++s) {
    ComplexMatrix h_eff = gen.h;
    if (fb_on && last_current != 0.0) h_eff.add_scaled(feedback.gain * last_current, feedback.actuator.matrix());

    ComplexMatrix next = rho;
    next += gen.rk4_increment(h_eff, rho, h);
    for (std::size_t k = 0; k < C; ++k) {
      dw[k] = sqrt_h * gauss(rng);
      const double signal = hilbert_schmidt_inner(b_plus_adj[k].adjoint(), rho).real();
      const double dy = signal * h + dw[k];
      out.noise.push_back(dw[k]);
      out.record.push_back(dy);
      if (fb_on && k == feedback.channel) last_current = dy / h;
      next.add_scaled(dw[k], measurement_superop_apply(channels[k].B, rho));
    }
    hermitize(next);
    const double tr = next.trace().real();
    if (!next.all_finite() || tr < 1e-6)
      throw TrajectoryFailure("conditional state trace collapsed at t=" + std::to_string(s * h));
    if (C > 0) {
      project_psd(next);
      next *= 1.0 / next.trace().real();
    }
    rho = std::move(next);
    if (s % stride == 0 || s == steps) {
      out.times.push_back(static_cast<double>(s) * h);
      out.states.push_back(rho);
    }
  }
  return out;
}

std::vector<QuantumTrajectory> sme_ensemble(const LindbladModel& model, const std::vector<MeasurementChannel>& channels,
                                            const FeedbackRule& feedback, const ComplexMatrix& rho0, double T,
                                            double dt, std::size_t count, std::uint64_t seed, std::size_t stride,
                                            unsigned threads) {
  std::vector<QuantumTrajectory> out(count);
  parallel_for(count, threads, [&](std::size_t k) {
    out[k] = sme_trajectory(model, channels, feedback, rho0, T, dt, seed, k, stride);
  });
  return out;
}

DensityTrajectory ensemble_average(const std::vector<QuantumTrajectory>& trajectories) {
  if (trajectories.empty()) throw InvalidInput("ensemble_average: no trajectories");
  const auto& ref = trajectories.front();
  for (const auto& t : trajectories)
    if (t.times != ref.times) throw InvalidInput("ensemble_average: trajectories sampled on different grids");
  DensityTrajectory out;
  out.times = ref.times;
  const double w = 1.0 / static_cast<double>(trajectories.size());
  for (std::size_t i = 0; i < ref.times.size(); ++i) {
    ComplexMatrix mean(ref.states[i].dim());
    for (const auto& t : trajectories) mean.add_scaled(w, t.states[i]);
    const double tr = mean.trace().real();
    mean *= 1.0 / tr;
    out.states.push_back(std::move(mean));
  }
  return out;
}

double trace_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  double s = 0.0;
  for (double ev : hermitian_eigenvalues(a - b)) s += std::abs(ev);
  return 0.5 * s;
}

}  // namespace qctl::open
