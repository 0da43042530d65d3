#include "qctl/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include "qctl/errors.hpp"

namespace qctl::pulse {

PulseProgram::PulseProgram(double dt_, std::size_t segments_, std::size_t channels_)
    : dt(dt_), segments(segments_), channels(channels_), amplitudes(segments_ * channels_, 0.0) {}

void ControlProblem::validate() const {
  const std::size_t n = drift.dim();
  if (n == 0) throw InvalidInput("control problem: empty drift");
  for (const auto& c : controls)
    if (c.dim() != n) throw InvalidInput("control problem: control dimension differs from drift");
  if (segments == 0 || !(horizon > 0.0) || !std::isfinite(horizon))
    throw InvalidInput("control problem: need segments >= 1 and a positive horizon");
  if (const auto* st = std::get_if<StateTransfer>(&objective)) {
    if (st->initial.size() != n || st->goal.size() != n) throw InvalidInput("control problem: state dimension");
    if (std::abs(norm(st->initial) - 1.0) > 1e-9 || std::abs(norm(st->goal) - 1.0) > 1e-9)
      throw InvalidInput("control problem: states must be unit vectors");
  } else if (std::get<GateObjective>(objective).target.dim() != n) {
    throw InvalidInput("control problem: target dimension");
  }
}

void ControlProblem::validate(const PulseProgram& u) const {
  validate();
  if (u.channels != controls.size() || u.segments != segments || u.amplitudes.size() != segments * controls.size())
    throw InvalidInput("pulse program shape does not match the control problem");
  if (std::abs(u.dt - dt()) > 1e-12 * std::max(1.0, dt())) throw InvalidInput("pulse dt must equal horizon/segments");
  for (double a : u.amplitudes)
    if (!std::isfinite(a)) throw InvalidInput("pulse amplitudes must be finite");
}

namespace {

HermitianOperator segment_hamiltonian(const ControlProblem& p, const PulseProgram& u, std::size_t k) {
  ComplexMatrix h = p.drift.matrix();
  for (std::size_t c = 0; c < p.controls.size(); ++c) h.add_scaled(u.at(k, c), p.controls[c].matrix());
  return HermitianOperator(std::move(h));
}

struct Segments {
  std::vector<SpectralDecomposition> spectra;
  std::vector<ComplexMatrix> props;
};

Segments decompose(const ControlProblem& p, const PulseProgram& u) {
  Segments s;
  s.spectra.reserve(u.segments);
  s.props.reserve(u.segments);
  for (std::size_t k = 0; k < u.segments; ++k) {
    s.spectra.emplace_back(segment_hamiltonian(p, u, k));
    s.props.push_back(s.spectra.back().propagator(u.dt));
  }
  return s;
}

// Divided difference of exp over the eigenvalues of -i dt H:
// (e^a - e^b)/(a - b) = e^{(a+b)/2} sinc(y), y = dt (lambda_b - lambda_a) / 2.
ComplexMatrix exp_divided_differences(const SpectralDecomposition& sd, double dt) {
  const auto lam = sd.eigenvalues();
  const std::size_t n = lam.size();
  ComplexMatrix phi(n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t l = 0; l < n; ++l) {
      const double y = 0.5 * dt * (lam[l] - lam[j]);
      const double sinc = std::abs(y) < 1e-8 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
      phi(j, l) = std::polar(sinc, -0.5 * dt * (lam[j] + lam[l]));
    }
  return phi;
}

ComplexMatrix product(const Segments& s, std::size_t n) {
  ComplexMatrix u = ComplexMatrix::identity(n);
  for (const auto& pk : s.props) u = pk * u;
  return u;
}

double value_from(const ControlProblem& p, const ComplexMatrix& u) {
  if (const auto* st = std::get_if<StateTransfer>(&p.objective)) {
    const StateVector out = u * std::span<const cplx>(st->initial);
    return std::norm(inner(st->goal, out));
  }
  const auto& target = std::get<GateObjective>(p.objective).target;
  const double n = static_cast<double>(u.dim());
  return std::norm(hilbert_schmidt_inner(target.matrix(), u)) / (n * n);
}

double gradient_impl(const ControlProblem& p, const PulseProgram& u, std::span<double> grad) {
  const std::size_t n = p.drift.dim(), K = u.segments, C = u.channels;
  const Segments seg = decompose(p, u);
  const cplx minus_i_dt{0.0, -u.dt};

  // d(exp) in the eigenbasis: (V^dagger (-i dt H_c) V) o Phi
  auto directional = [&](std::size_t k, std::size_t c, const ComplexMatrix& phi) {
    ComplexMatrix b = seg.spectra[k].to_eigenbasis(p.controls[c].matrix());
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) b(j, l) *= minus_i_dt * phi(j, l);
    return b;
  };

  if (const auto* st = std::get_if<StateTransfer>(&p.objective)) {
    std::vector<StateVector> fwd(K + 1);
    fwd[0] = st->initial;
    for (std::size_t k = 0; k < K; ++k) fwd[k + 1] = seg.props[k] * std::span<const cplx>(fwd[k]);
    const cplx amp = inner(st->goal, fwd[K]);
    StateVector lam = st->goal;  // (U_K ... U_{k+1})^dagger goal
    for (std::size_t kk = K; kk-- > 0;) {
      const ComplexMatrix& vadj_src = seg.spectra[kk].eigenvectors();
      // alpha = V^dagger lam, beta = V^dagger phi_{k-1}
      StateVector alpha(n), beta(n);
      for (std::size_t j = 0; j < n; ++j) {
        cplx sa = 0.0, sb = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          sa += std::conj(vadj_src(i, j)) * lam[i];
          sb += std::conj(vadj_src(i, j)) * fwd[kk][i];
        }
        alpha[j] = sa;
        beta[j] = sb;
      }
      const ComplexMatrix phi = exp_divided_differences(seg.spectra[kk], u.dt);
      for (std::size_t c = 0; c < C; ++c) {
        const ComplexMatrix x = directional(kk, c, phi);
        cplx da = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < n; ++l) da += std::conj(alpha[j]) * x(j, l) * beta[l];
        grad[kk * C + c] = 2.0 * (std::conj(amp) * da).real();
      }
      lam = seg.props[kk].adjoint() * std::span<const cplx>(lam);
    }
    return std::norm(amp);
  }

  const auto& target = std::get<GateObjective>(p.objective).target;
  std::vector<ComplexMatrix> fwd(K + 1);  // fwd[k] = U_k ... U_1
  fwd[0] = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < K; ++k) fwd[k + 1] = seg.props[k] * fwd[k];
  const cplx tau = hilbert_schmidt_inner(target.matrix(), fwd[K]);
  const double nn = static_cast<double>(n * n);
  ComplexMatrix back = target.matrix().adjoint();  // T^dagger U_K ... U_{k+1}
  for (std::size_t kk = K; kk-- > 0;) {
    const ComplexMatrix m = seg.spectra[kk].to_eigenbasis(fwd[kk] * back);
    const ComplexMatrix phi = exp_divided_differences(seg.spectra[kk], u.dt);
    for (std::size_t c = 0; c < C; ++c) {
      const ComplexMatrix x = directional(kk, c, phi);
      cplx dtau = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l) dtau += m(l, j) * x(j, l);
      grad[kk * C + c] = 2.0 * (std::conj(tau) * dtau).real() / nn;
    }
    back = back * seg.props[kk];
  }
  return std::norm(tau) / nn;
}

}  // namespace

UnitaryOperator propagate_piecewise(const ControlProblem& p, const PulseProgram& u) {
  p.validate(u);
  return UnitaryOperator(product(decompose(p, u), p.drift.dim()));
}

double transfer_fidelity(const ControlProblem& p, const PulseProgram& u) {
  if (!std::holds_alternative<StateTransfer>(p.objective))
    throw WrongObjective("transfer_fidelity requires a state-transfer objective");
  return objective_value(p, u);
}

double objective_value(const ControlProblem& p, const PulseProgram& u) {
  p.validate(u);
  return value_from(p, product(decompose(p, u), p.drift.dim()));
}

std::vector<double> fidelity_gradient(const ControlProblem& p, const PulseProgram& u) {
  p.validate(u);
  std::vector<double> g(u.amplitudes.size());
  gradient_impl(p, u, g);
  return g;
}

namespace {

void project(std::vector<double>& x, const std::optional<double>& bound) {
  if (!bound) return;
  for (auto& v : x) v = std::clamp(v, -*bound, *bound);
}

// Gradient components that would push a bound-active coordinate outward are dropped.
std::vector<double> projected(const std::vector<double>& x, const std::vector<double>& g,
                              const std::optional<double>& bound) {
  std::vector<double> out = g;
  if (!bound) return out;
  for (std::size_t i = 0; i < x.size(); ++i)
    if ((x[i] >= *bound && g[i] > 0.0) || (x[i] <= -*bound && g[i] < 0.0)) out[i] = 0.0;
  return out;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

}  // namespace

GrapeResult grape_optimize(const ControlProblem& p, const PulseProgram& init, const GrapeOptions& options) {
  p.validate(init);
  GrapeResult result;
  PulseProgram current = init;
  project(current.amplitudes, options.u_max);
  const std::size_t dimx = current.amplitudes.size();

  std::vector<double> grad(dimx), grad_new(dimx);
  double f = gradient_impl(p, current, grad);
  result.history.push_back(f);

  // L-BFGS memory for the ascent problem
  std::deque<std::vector<double>> mem_s, mem_y;
  const double scale_ref = options.u_max.value_or(1.0);

  for (int iter = 0; iter < options.iterations; ++iter) {
    const std::vector<double> pg = projected(current.amplitudes, grad, options.u_max);
    if (std::sqrt(dot(pg, pg)) < options.gradient_tol) {
      result.converged = true;
      break;
    }

    bool accepted = false;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const bool use_memory = attempt == 0 && !mem_s.empty();
      if (attempt == 1 && mem_s.empty()) break;
      std::vector<double> dir = pg;
      double step = 0.1 * scale_ref / std::max(inf_norm(pg), 1e-300);
      if (use_memory) {
        // two-loop recursion on the ascent direction
        std::vector<double> q = pg;
        std::vector<double> alpha(mem_s.size());
        for (std::size_t i = mem_s.size(); i-- > 0;) {
          alpha[i] = dot(mem_s[i], q) / dot(mem_y[i], mem_s[i]);
          for (std::size_t j = 0; j < dimx; ++j) q[j] -= alpha[i] * mem_y[i][j];
        }
        const double gamma = dot(mem_s.back(), mem_y.back()) / dot(mem_y.back(), mem_y.back());
        for (auto& v : q) v *= gamma;
        for (std::size_t i = 0; i < mem_s.size(); ++i) {
          const double beta = dot(mem_y[i], q) / dot(mem_y[i], mem_s[i]);
          for (std::size_t j = 0; j < dimx; ++j) q[j] += (alpha[i] - beta) * mem_s[i][j];
        }
        dir = projected(current.amplitudes, q, options.u_max);
        step = 1.0;
        if (dot(dir, pg) <= 0.0) continue;
      }

      PulseProgram trial = current;
      for (int ls = 0; ls < 40; ++ls) {
        for (std::size_t j = 0; j < dimx; ++j) trial.amplitudes[j] = current.amplitudes[j] + step * dir[j];
        project(trial.amplitudes, options.u_max);
        double gain = 0.0;
        for (std::size_t j = 0; j < dimx; ++j) gain += grad[j] * (trial.amplitudes[j] - current.amplitudes[j]);
        const double f_new = gradient_impl(p, trial, grad_new);
        if (f_new > f && f_new >= f + 1e-4 * gain) {
          // y is the change in the negated gradient so the pair stays positive-curvature for ascent
          std::vector<double> s(dimx), y(dimx);
          for (std::size_t j = 0; j < dimx; ++j) {
            s[j] = trial.amplitudes[j] - current.amplitudes[j];
            y[j] = grad[j] - grad_new[j];
          }
          if (dot(s, y) > 1e-16 * std::sqrt(dot(s, s) * dot(y, y))) {
            mem_s.push_back(std::move(s));
            mem_y.push_back(std::move(y));
            if (mem_s.size() > options.memory) {
              mem_s.pop_front();
              mem_y.pop_front();
            }
          }
          current = std::move(trial);
          grad.swap(grad_new);
          f = f_new;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        mem_s.clear();
        mem_y.clear();
      }
    }
    if (!accepted) break;
    result.history.push_back(f);
  }
  result.program = std::move(current);
  return result;
}

GrapeResult grape_optimize(const ControlProblem& p, std::uint64_t seed, const GrapeOptions& options) {
  p.validate();
  PulseProgram init(p.dt(), p.segments, p.controls.size());
  std::mt19937_64 rng(seed);
  const double half = 0.5 * options.u_max.value_or(1.0);
  std::uniform_real_distribution<double> dist(-half, half);
  for (auto& a : init.amplitudes) a = dist(rng);
  return grape_optimize(p, init, options);
}

std::vector<StateVector> state_trajectory(const ControlProblem& p, const PulseProgram& u, const StateVector& psi0) {
  p.validate(u);
  if (psi0.size() != p.drift.dim()) throw InvalidInput("state_trajectory: state dimension");
  const Segments seg = decompose(p, u);
  std::vector<StateVector> out;
  out.reserve(u.segments + 1);
  out.push_back(psi0);
  for (const auto& pk : seg.props) out.push_back(pk * std::span<const cplx>(out.back()));
  return out;
}

std::array<double, 3> bloch_vector(const ComplexMatrix& rho) {
  if (rho.dim() != 2) throw InvalidInput("bloch_vector: need a 2x2 density matrix");
  if (std::abs(rho.trace() - cplx{1.0, 0.0}) > 1e-9) throw InvalidInput("bloch_vector: trace must be 1");
  return {hilbert_schmidt_inner(pauli_x(), rho).real(), hilbert_schmidt_inner(pauli_y(), rho).real(),
          hilbert_schmidt_inner(pauli_z(), rho).real()};
}

ComplexMatrix partial_trace_first_qubit(const ComplexMatrix& rho) {
  if (rho.dim() % 2 != 0 || rho.dim() == 0) throw InvalidInput("partial trace: dimension must be even");
  const std::size_t m = rho.dim() / 2;
  ComplexMatrix out(m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) out(a, b) = rho(a, b) + rho(m + a, m + b);
  return out;
}

ComplexMatrix density_from_state(std::span<const cplx> psi) {
  const std::size_t n = psi.size();
  ComplexMatrix rho(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) rho(i, j) = psi[i] * std::conj(psi[j]);
  return rho;
}

ControlProblem nuclear_flip_problem(const spin::HyperfineParams& params, spin::Frame frame, std::size_t segments,
                                    double horizon_ns) {
  auto sys = spin::build_1e1n_hamiltonian(params, frame);
  StateTransfer st;
  st.initial = {1.0, 0.0, 0.0, 0.0};  // |up>_e |up>_n
  st.goal = {0.0, 1.0, 0.0, 0.0};     // |up>_e |down>_n
  ControlProblem p{std::move(sys.drift), std::move(sys.controls), std::move(st), horizon_ns, segments};
  p.validate();
  return p;
}

}  // namespace qctl::pulse
