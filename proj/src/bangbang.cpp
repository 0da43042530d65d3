#include "qctl/bangbang.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "qctl/errors.hpp"
#include "qctl/optimize.hpp"
#include "qctl/parallel.hpp"

namespace qctl::bangbang {

double SwitchingSchedule::total_time() const {
  double s = 0.0;
  for (double x : t) s += x;
  return s;
}

SwitchingSchedule SwitchingSchedule::alternating(std::vector<double> t) {
  SwitchingSchedule s;
  s.m.resize(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) s.m[k] = 1 + (k % 2);
  s.t = std::move(t);
  return s;
}

SwitchingSchedule SwitchingSchedule::canonicalized() const {
  SwitchingSchedule out;
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (t[k] == 0.0) continue;
    if (!out.m.empty() && out.m.back() == m[k]) {
      out.t.back() += t[k];
    } else {
      out.m.push_back(m[k]);
      out.t.push_back(t[k]);
    }
  }
  return out;
}

UnitaryOperator evolve_schedule(const std::vector<HermitianOperator>& hamiltonians, const SwitchingSchedule& s) {
  if (s.m.size() != s.t.size()) throw InvalidInput("schedule: m and t differ in length");
  if (hamiltonians.empty()) {
    if (!s.m.empty()) throw InvalidInput("schedule references an empty Hamiltonian list");
    throw InvalidInput("evolve_schedule: no Hamiltonians");
  }
  const std::size_t n = hamiltonians.front().dim();
  for (const auto& h : hamiltonians)
    if (h.dim() != n) throw InvalidInput("evolve_schedule: Hamiltonians differ in dimension");
  for (std::size_t k = 0; k < s.m.size(); ++k) {
    if (s.m[k] < 1 || s.m[k] > hamiltonians.size())
      throw InvalidInput("schedule index m=" + std::to_string(s.m[k]) + " out of range");
    if (!std::isfinite(s.t[k]) || s.t[k] < 0.0) throw InvalidInput("dwell times must be finite and >= 0");
  }

  std::vector<std::optional<SpectralDecomposition>> spectra(hamiltonians.size());
  ComplexMatrix u = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < s.m.size(); ++k) {
    auto& sd = spectra[s.m[k] - 1];
    if (!sd) sd.emplace(hamiltonians[s.m[k] - 1]);
    u = u * sd->propagator(s.t[k]);
  }
  return UnitaryOperator(std::move(u));
}

double gate_fidelity(const UnitaryOperator& u, const UnitaryOperator& target, FidelityMode mode) {
  if (u.dim() != target.dim()) throw InvalidInput("gate_fidelity: dimension mismatch");
  const cplx tau = hilbert_schmidt_inner(target.matrix(), u.matrix()) / static_cast<double>(u.dim());
  return mode == FidelityMode::phase_sensitive ? tau.real() : std::abs(tau);
}

double hamiltonian_angle(const HermitianOperator& h1, const HermitianOperator& h2) {
  if (h1.dim() != h2.dim()) throw InvalidInput("hamiltonian_angle: dimension mismatch");
  const double n1 = hilbert_schmidt_inner(h1.matrix(), h1.matrix()).real();
  const double n2 = hilbert_schmidt_inner(h2.matrix(), h2.matrix()).real();
  if (n1 == 0.0 || n2 == 0.0) throw UndefinedAngle("hamiltonian_angle: zero operator");
  const double c = hilbert_schmidt_inner(h1.matrix(), h2.matrix()).real() / std::sqrt(n1 * n2);
  return std::acos(std::clamp(c, -1.0, 1.0));
}

TraceIdentity trace_identity_check(const spin::ChainSpec& spec, std::size_t r) {
  const auto pair = spin::build_switch_pair(spec, r);
  TraceIdentity out;
  out.lhs = hilbert_schmidt_inner(pair.off.matrix(), pair.on.matrix()).real();
  double dd = 0.0, ee = 0.0;
  for (std::size_t l = 0; l < spec.d.size(); ++l)
    if (l + 1 != r) dd += spec.d[l] * spec.d[l];
  for (double e : spec.E) ee += e * e;
  out.rhs = 2.0 * dd + ee;
  return out;
}

std::vector<NamedGate> gate_library() {
  using std::numbers::pi;
  const double s = 1.0 / std::sqrt(2.0);
  // Hadamard exactly as used for these targets: (1/sqrt2)[[1,-1],[1,1]]
  const ComplexMatrix had = ComplexMatrix::from_rows({{s, -s}, {s, s}});
  const ComplexMatrix t = ComplexMatrix::from_rows({{std::polar(1.0, -pi / 8), 0.0}, {0.0, std::polar(1.0, pi / 8)}});
  const ComplexMatrix id = pauli_i();
  ComplexMatrix cnot(4);
  const cplx phase = std::polar(1.0, -pi / 4);
  cnot(0, 0) = phase;
  cnot(1, 1) = phase;
  cnot(2, 3) = phase;
  cnot(3, 2) = phase;
  return {
      {"identity", UnitaryOperator(tensor_product(id, id))},
      {"had_i", UnitaryOperator(tensor_product(had, id))},
      {"t_i", UnitaryOperator(tensor_product(t, id))},
      {"i_had", UnitaryOperator(tensor_product(id, had))},
      {"i_t", UnitaryOperator(tensor_product(id, t))},
      {"cnot", UnitaryOperator(std::move(cnot))},
  };
}

UnitaryOperator gate_by_name(std::string_view name) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  for (auto& g : gate_library())
    if (g.name == key) return g.unitary;
  throw InvalidInput("unknown gate '" + std::string(name) + "'");
}

AlternatingObjective::AlternatingObjective(const HermitianOperator& h1, const HermitianOperator& h2,
                                           const UnitaryOperator& target, FidelityMode mode)
    : s1_(h1),
      s2_(h2),
      h1_(h1.matrix()),
      h2_(h2.matrix()),
      target_(target.matrix()),
      target_adj_(target.matrix().adjoint()),
      mode_(mode) {
  if (h1.dim() != h2.dim() || h1.dim() != target.dim())
    throw InvalidInput("synthesis: target and Hamiltonians differ in dimension");
}

ComplexMatrix AlternatingObjective::step(std::size_t k, double t) const {
  return (k % 2 == 0 ? s1_ : s2_).propagator(t);
}

double AlternatingObjective::fidelity(std::span<const double> t) const {
  const std::size_t n = h1_.dim();
  ComplexMatrix u = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < t.size(); ++k) u = u * step(k, t[k]);
  const cplx tau = hilbert_schmidt_inner(target_, u) / static_cast<double>(n);
  return mode_ == FidelityMode::phase_sensitive ? tau.real() : std::abs(tau);
}

double AlternatingObjective::fidelity_and_gradient(std::span<const double> t, std::span<double> grad) const {
  const std::size_t n = h1_.dim(), K = t.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<ComplexMatrix> steps(K);
  for (std::size_t k = 0; k < K; ++k) steps[k] = step(k, t[k]);
  // prefix[k] = U_1 ... U_k
  std::vector<ComplexMatrix> prefix(K + 1);
  prefix[0] = ComplexMatrix::identity(n);
  for (std::size_t k = 0; k < K; ++k) prefix[k + 1] = prefix[k] * steps[k];
  const cplx tau = hilbert_schmidt_inner(target_, prefix[K]);

  // d tau / d t_k = -i Tr(A_k P_k H_k), A_k = U_{k+1} ... U_K T^dagger
  ComplexMatrix a = target_adj_;
  for (std::size_t kk = K; kk-- > 0;) {
    const ComplexMatrix m = a * prefix[kk + 1];
    const ComplexMatrix& h = (kk % 2 == 0) ? h1_ : h2_;
    cplx tr = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) tr += m(i, j) * h(j, i);
    const cplx dtau = cplx{0.0, -1.0} * tr;
    if (mode_ == FidelityMode::phase_sensitive) {
      grad[kk] = dtau.real() * inv_n;
    } else {
      const double mag = std::abs(tau);
      grad[kk] = mag > 0.0 ? (std::conj(tau) * dtau).real() / mag * inv_n : 0.0;
    }
    a = steps[kk] * a;
  }
  const cplx f = tau * inv_n;
  return mode_ == FidelityMode::phase_sensitive ? f.real() : std::abs(f);
}

namespace {

struct Candidate {
  SwitchingSchedule schedule;
  double fidelity = -2.0;
  std::size_t pairs = 0;
};

// Fewer segments, then shorter total time.
bool shorter(const Candidate& a, const Candidate& b) {
  if (a.schedule.size() != b.schedule.size()) return a.schedule.size() < b.schedule.size();
  return a.schedule.total_time() < b.schedule.total_time();
}

}  // namespace

SynthesisResult synthesize_gate(const SynthesisJob& job) {
  if (job.max_segments == 0) throw InvalidInput("synthesis: max_segments must be >= 1");
  if (job.restarts == 0) throw InvalidInput("synthesis: restarts must be >= 1");
  if (!(job.fidelity_goal > 0.0 && job.fidelity_goal <= 1.0))
    throw InvalidInput("synthesis: fidelity_goal must lie in (0, 1]");
  if (job.target.dim() == 0 || job.h1.dim() == 0 || job.h2.dim() == 0)
    throw InvalidInput("synthesis: target and Hamiltonians are required");

  const std::vector<HermitianOperator> hams{job.h1, job.h2};
  const AlternatingObjective objective(job.h1, job.h2, job.target, job.mode);
  const double dim = static_cast<double>(job.target.dim());
  const double h_norm = job.h1.matrix().frobenius_norm();
  const double t_guess = h_norm > 0.0 ? std::numbers::pi * dim / h_norm : 1.0;
  const double cap = job.total_time_cap > 0.0 ? job.total_time_cap : 4.0 * t_guess;

  auto finalize = [&](SwitchingSchedule s, std::size_t pairs) {
    Candidate c;
    c.schedule = s.canonicalized();
    c.fidelity = gate_fidelity(evolve_schedule(hams, c.schedule), job.target, job.mode);
    c.pairs = pairs;
    return c;
  };

  Candidate best = finalize({}, 0);
  if (best.fidelity >= job.fidelity_goal) return {best.schedule, best.fidelity, SynthesisStatus::converged, 0};

  constexpr double penalty = 1.0;
  for (std::size_t pairs = std::max<std::size_t>(1, job.min_segments); pairs <= job.max_segments; ++pairs) {
    const std::size_t K = 2 * pairs;
    std::vector<Candidate> results(job.restarts);
    parallel_for(job.restarts, job.threads, [&](std::size_t restart) {
      std::seed_seq seq{static_cast<std::uint32_t>(job.seed), static_cast<std::uint32_t>(job.seed >> 32),
                        static_cast<std::uint32_t>(pairs), static_cast<std::uint32_t>(restart)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> dist(0.0, std::min(t_guess, cap));
      opt::Vec x0(K);
      for (auto& v : x0) v = dist(rng);

      // Box [0, cap] by clamping plus a quadratic penalty on the excursion.
      auto clamp = [&](std::span<const double> x, std::span<double> t) {
        double excess = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          t[k] = std::clamp(x[k], 0.0, cap);
          excess += (x[k] - t[k]) * (x[k] - t[k]);
        }
        return excess;
      };
      const double goal = job.fidelity_goal;
      opt::NelderMeadOptions nm;
      nm.initial_step = 0.25 * t_guess;
      nm.max_evaluations = static_cast<int>(60 * K);
      nm.target = -1.0;
      std::vector<double> tbuf(K);
      auto value = [&](std::span<const double> x) {
        const double excess = clamp(x, tbuf);
        return -objective.fidelity(tbuf) + penalty * excess;
      };
      auto coarse = opt::nelder_mead(value, x0, nm);

      std::vector<double> gbuf(K);
      auto value_grad = [&](std::span<const double> x, std::span<double> g) {
        const double excess = clamp(x, tbuf);
        const double f = objective.fidelity_and_gradient(tbuf, gbuf);
        for (std::size_t k = 0; k < K; ++k)
          g[k] = (x[k] == tbuf[k]) ? -gbuf[k] : 2.0 * penalty * (x[k] - tbuf[k]);
        return -f + penalty * excess;
      };
      opt::BfgsOptions bo;
      bo.max_iterations = 300;
      // Keep polishing past the goal so the re-evaluated fidelity clears it with margin.
      bo.target = -(goal + 0.5 * (1.0 - goal));
      auto fine = opt::bfgs(value_grad, coarse.x, bo);

      std::vector<double> t(K);
      clamp(fine.x, t);
      results[restart] = finalize(SwitchingSchedule::alternating(std::move(t)), pairs);
    });

    const Candidate* winner = nullptr;
    for (const auto& c : results) {
      if (c.fidelity >= job.fidelity_goal && (!winner || shorter(c, *winner))) winner = &c;
      if (c.fidelity > best.fidelity) best = c;
    }
    if (winner) return {winner->schedule, winner->fidelity, SynthesisStatus::converged, winner->pairs};
  }
  return {best.schedule, best.fidelity, SynthesisStatus::budget_exhausted, best.pairs};
}

std::vector<std::pair<double, std::size_t>> switching_plot(const SwitchingSchedule& s) {
  std::vector<std::pair<double, std::size_t>> rows;
  double now = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    rows.emplace_back(now, s.m[k]);
    now += s.t[k];
    rows.emplace_back(now, s.m[k]);
  }
  return rows;
}

}  // namespace qctl::bangbang
