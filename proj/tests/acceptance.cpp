// End-to-end acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "json.hpp"
#include "qctl/bangbang.hpp"
#include "qctl/controllability.hpp"
#include "qctl/errors.hpp"
#include "qctl/fault_tolerance.hpp"
#include "qctl/open_system.hpp"
#include "qctl/pulse.hpp"
#include "qctl/spin.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qctl;
using namespace qctl::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

fs::path work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "qctl_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path write_config(const std::string& name, const json& j) {
  const auto p = work_dir() / name;
  std::ofstream(p) << j.dump();
  return p;
}

int run_cli(const std::string& command, const fs::path& config, const fs::path& out) {
  std::ostringstream sink, log;
  const int code = cli::run({command, config, out, {}}, sink, log);
  if (code != 0) std::fprintf(stderr, "%s: %s", command.c_str(), log.str().c_str());
  return code;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<double> last_csv_row(const fs::path& p) {
  std::istringstream in(read_bytes(p));
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  std::vector<double> out;
  std::istringstream row(last);
  for (std::string cell; std::getline(row, cell, ',');) out.push_back(std::stod(cell));
  return out;
}

const json kChain = {{"coupling", "heisenberg"}, {"N", 4}, {"J", {1, 1, 1}}};

// ---------------------------------------------------------------------------

Outcome gates_by_switching() {
  const auto t0 = Clock::now();
  double worst = 1.0;
  std::size_t longest = 0;
  std::string failed;
  for (const auto& g : bangbang::gate_library()) {
    const json cfg = {{"chain", kChain},
                      {"actuator", {{"r", 1}}},
                      {"synthesis", {{"gate", g.name}, {"restarts", 64}, {"max_segments", 40}, {"seed", 1}}}};
    const auto out = work_dir() / ("synth_" + g.name);
    const int code = run_cli("synth", write_config("synth_" + g.name + ".json", cfg), out);
    const auto doc = read_json(out / "schedule.json");
    const double f = doc["fidelity"].get<double>();
    worst = std::min(worst, f);
    longest = std::max(longest, doc["m"].size());
    if (code != 0 || f < 0.9999 || doc["m"].size() > 40) failed += " " + g.name;
  }
  const double secs = seconds_since(t0);
  return {failed.empty() && secs <= 900.0,
          "worst fidelity " + fmt("%.6f", worst) + ", longest " + std::to_string(longest) + " pairs, " +
              fmt("%.1f", secs) + " s" + (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome closure_dimensions() {
  const auto t0 = Clock::now();
  std::vector<std::size_t> dims;
  for (std::size_t N : {4, 5}) {
    const auto pair =
        spin::build_switch_pair(spin::heisenberg_to_chain(std::vector<double>(N - 1, 1.0), N), 1);
    dims.push_back(lie::lie_closure({pair.off, pair.on}, 1e-10).dimension);
  }
  const double secs = seconds_since(t0);
  return {dims[0] == 15 && dims[1] == 24 && secs < 10.0,
          "N=4 -> " + std::to_string(dims[0]) + ", N=5 -> " + std::to_string(dims[1]) + ", " + fmt("%.2f", secs) +
              " s"};
}

Outcome overlap_identity() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<std::size_t> size(2, 8);
  std::uniform_real_distribution<double> e(-3, 3), d(0.05, 3);
  double worst = 0;
  std::size_t checks = 0;
  for (int trial = 0; trial < 100; ++trial) {
    spin::ChainSpec spec;
    const std::size_t N = size(rng);
    for (std::size_t i = 0; i < N; ++i) spec.E.push_back(e(rng));
    for (std::size_t i = 0; i + 1 < N; ++i) spec.d.push_back(d(rng));
    for (std::size_t r = 1; r < N; ++r, ++checks) {
      const auto t = bangbang::trace_identity_check(spec, r);
      worst = std::max(worst, std::abs(t.lhs - t.rhs) / (1 + std::abs(t.rhs)));
    }
  }
  return {worst <= 1e-12, std::to_string(checks) + " checks, worst scaled residual " + fmt("%.2e", worst)};
}

Outcome hamiltonian_angle() {
  const auto pair = spin::build_switch_pair({{0, 0, 0, 0}, {1, 1, 1}}, 2);
  const double a = bangbang::hamiltonian_angle(pair.off, pair.on);
  const double expected = std::acos(4.0 / std::sqrt(24.0));
  return {std::abs(a - expected) <= 1e-10 && std::cos(a) > 0.8,
          "angle " + fmt("%.12f", a) + " rad, cos " + fmt("%.6f", std::cos(a))};
}

Outcome pauli_machinery() {
  std::mt19937_64 rng(11);
  double parseval = 0, recon = 0, penal = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto u = random_unitary(std::size_t{1} << n, rng);
    const auto c = ft::pauli_expand(u.matrix(), n);
    double sum = 0;
    for (auto z : c.coefficients()) sum += std::norm(z);
    parseval = std::max(parseval, std::abs(sum - 1));
    recon = std::max(recon, max_abs_diff(c.reconstruct(), u.matrix()));
    ft::PenaltyWeights lambda;
    std::uniform_real_distribution<double> w(0, 100);
    for (std::size_t k = 2; k <= n; ++k) lambda.lambda.push_back(w(rng));
    penal = std::max(penal, std::abs(ft::penalized_objective(u, u, lambda) - 1));
  }
  return {parseval <= 1e-10 && recon <= 1e-10 && penal <= 1e-12,
          "Parseval " + fmt("%.1e", parseval) + ", reconstruction " + fmt("%.1e", recon) + ", penalized " +
              fmt("%.1e", penal)};
}

Outcome css_code() {
  const auto code = ft::css_steane_code();
  double residual = 0;
  for (const auto& s : code.stabilizers)
    for (const auto* psi : {&code.logical_zero, &code.logical_one})
      residual = std::max(residual, max_abs_diff(ft::apply_pauli(s, *psi), *psi));

  std::set<ft::Syndrome> seen;
  bool nonzero = true;
  double worst_fid = 1.0;
  std::mt19937_64 rng(12);
  const auto ab = random_state(2, rng);
  StateVector psi(128);
  for (std::size_t i = 0; i < 128; ++i) psi[i] = ab[0] * code.logical_zero[i] + ab[1] * code.logical_one[i];
  for (std::size_t q = 0; q < 7; ++q)
    for (auto l : {ft::Pauli::X, ft::Pauli::Y, ft::Pauli::Z}) {
      std::vector<ft::Pauli> letters(7, ft::Pauli::I);
      letters[q] = l;
      const ft::PauliString e(letters);
      const auto hit = ft::apply_pauli(e, psi);
      const auto s = ft::syndrome_extract(hit, code);
      nonzero = nonzero && s != ft::Syndrome{};
      seen.insert(s);
      worst_fid = std::min(worst_fid, std::norm(inner(psi, ft::correct_single_error(hit, code))));
    }

  // every weight-2 error must be reported or visibly fail, never silently restore the input
  std::size_t silent = 0, pairs = 0;
  for (std::size_t a = 0; a < 7; ++a)
    for (std::size_t b = a + 1; b < 7; ++b)
      for (auto la : {ft::Pauli::X, ft::Pauli::Y, ft::Pauli::Z})
        for (auto lb : {ft::Pauli::X, ft::Pauli::Y, ft::Pauli::Z}) {
          std::vector<ft::Pauli> letters(7, ft::Pauli::I);
          letters[a] = la;
          letters[b] = lb;
          ++pairs;
          try {
            const auto out = ft::correct_single_error(ft::apply_pauli(ft::PauliString(letters), psi), code);
            if (std::norm(inner(psi, out)) > 1 - 1e-10) ++silent;
          } catch (const Uncorrectable&) {
          }
        }
  return {residual <= 1e-12 && nonzero && seen.size() == 21 && worst_fid >= 1 - 1e-10 && silent == 0,
          "stabilizer residual " + fmt("%.1e", residual) + ", " + std::to_string(seen.size()) +
              " distinct syndromes, worst recovery " + fmt("%.12f", worst_fid) + ", " + std::to_string(silent) + "/" +
              std::to_string(pairs) + " two-error inputs restored"};
}

Outcome open_system() {
  const auto lower = ComplexMatrix::from_rows({{0, 1}, {0, 0}});
  const auto excited = ComplexMatrix::from_rows({{0, 0}, {0, 1}});
  double decay_err = 0;
  for (double gamma : {1.0, 2.0}) {
    const double dt = 1e-3 / gamma;
    const open::LindbladModel m{HermitianOperator(ComplexMatrix(2)), {std::sqrt(gamma) * lower}};
    const auto traj = open::lindblad_propagate(m, excited, 1.0, dt);
    for (std::size_t i = 0; i < traj.states.size(); ++i)
      decay_err = std::max(decay_err, std::abs(traj.states[i](1, 1).real() - std::exp(-gamma * traj.times[i])));
  }

  // one trajectory at a time so every conditional state can be inspected without storing the ensemble
  const auto plus = ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  const auto setup = open::homodyne(HermitianOperator(0.5 * pauli_x()), {}, {0.5 * pauli_z()});
  const auto ref = open::lindblad_propagate(setup.model, plus, 1.0, 1e-3);
  const std::size_t count = 2000;
  std::vector<open::QuantumTrajectory> finals;
  finals.reserve(count);
  double trace_err = 0;
  for (std::size_t k = 0; k < count; ++k) {
    auto t = open::sme_trajectory(setup.model, setup.channels, {}, plus, 1.0, 1e-3, 2024, k);
    for (const auto& s : t.states) trace_err = std::max(trace_err, std::abs(s.trace() - 1.0));
    open::QuantumTrajectory last;
    last.times = {t.times.back()};
    last.states = {t.states.back()};
    finals.push_back(std::move(last));
  }
  const double td = open::trace_distance(open::ensemble_average(finals).states.back(), ref.states.back());
  return {decay_err <= 1e-6 && td <= 0.02 && trace_err <= 1e-8,
          "decay error " + fmt("%.1e", decay_err) + ", ensemble trace distance " + fmt("%.4f", td) +
              ", worst trace error " + fmt("%.1e", trace_err)};
}

Outcome pulse_control() {
  std::mt19937_64 rng(13);
  pulse::ControlProblem p;
  p.drift = random_hermitian(3, rng);
  p.controls = {random_hermitian(3, rng), random_hermitian(3, rng)};
  p.objective = pulse::GateObjective{random_unitary(3, rng)};
  p.horizon = 1.5;
  p.segments = 8;
  double worst = 0;
  std::uniform_real_distribution<double> amp(-1, 1);
  for (int point = 0; point < 20; ++point) {
    pulse::PulseProgram u(p.dt(), p.segments, p.controls.size());
    for (auto& a : u.amplitudes) a = amp(rng);
    const auto g = pulse::fidelity_gradient(p, u);
    double diff = 0, ref = 0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      auto a = u, b = u;
      a.amplitudes[j] += 1e-6;
      b.amplitudes[j] -= 1e-6;
      const double fd = (pulse::objective_value(p, a) - pulse::objective_value(p, b)) / 2e-6;
      diff += (g[j] - fd) * (g[j] - fd);
      ref += fd * fd;
    }
    worst = std::max(worst, std::sqrt(diff / ref));
  }

  const auto out = work_dir() / "pulse";
  const int code = run_cli("pulse", write_config("pulse.json", {{"pulse", {{"segments", 100}}}}), out);
  const double fidelity = read_json(out / "pulse.json")["fidelity"].get<double>();
  const double bz = last_csv_row(out / "bloch.csv").at(3);
  return {worst <= 1e-5 && code == 0 && fidelity >= 0.99 && bz <= -0.98,
          "gradient relative error " + fmt("%.1e", worst) + ", flip fidelity " + fmt("%.6f", fidelity) +
              ", final b_z " + fmt("%.4f", bz)};
}

Outcome determinism() {
  const auto u = matrix_exponential_unitary(HermitianOperator(tensor_product(pauli_x(), pauli_x())), 0.05);
  std::ofstream(work_dir() / "target.json") << matrix_to_json(ComplexMatrix::identity(4)).dump();
  std::ofstream(work_dir() / "realized.json") << matrix_to_json(u.matrix()).dump();
  const std::map<std::string, json> jobs = {
      {"synth", {{"chain", kChain}, {"actuator", {{"r", 1}}}, {"synthesis", {{"gate", "i_t"}, {"restarts", 8}}}}},
      {"controllability", {{"chain", kChain}, {"actuator", {{"r", 1}}}}},
      {"ft-analyze", {{"ft", {{"target", "target.json"}, {"realized", "realized.json"}}}}},
      {"simulate",
       {{"simulate",
         {{"H", matrix_to_json(0.5 * pauli_x())},
          {"measured", {matrix_to_json(0.5 * pauli_z())}},
          {"rho0", matrix_to_json(ComplexMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}))},
          {"T", 1.0},
          {"dt", 1e-3},
          {"trajectories", 50},
          {"trajectory_files", 3},
          {"seed", 7},
          {"stride", 10}}}}},
      {"pulse", {{"pulse", {{"iters", 100}}}}},
  };
  std::size_t files = 0;
  std::string mismatched;
  for (const auto& [command, cfg] : jobs) {
    const auto config = write_config("det_" + command + ".json", cfg);
    const auto a = work_dir() / ("det_" + command + "_a"), b = work_dir() / ("det_" + command + "_b");
    run_cli(command, config, a);
    run_cli(command, config, b);
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const auto other = b / entry.path().filename();
      if (!fs::exists(other) || read_bytes(entry.path()) != read_bytes(other))
        mismatched += " " + command + "/" + entry.path().filename().string();
    }
  }
  return {files >= 10 && mismatched.empty(),
          std::to_string(files) + " files compared" + (mismatched.empty() ? "" : ", differing:" + mismatched)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"two-qubit gates by coupling switching", gates_by_switching},
      {"Lie closure dimension", closure_dimensions},
      {"Hamiltonian overlap identity", overlap_identity},
      {"Hamiltonian angle", hamiltonian_angle},
      {"Pauli expansion and penalty", pauli_machinery},
      {"seven-qubit CSS code", css_code},
      {"open-system dynamics", open_system},
      {"pulse gradient and nuclear flip", pulse_control},
      {"CLI determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(work_dir());
  return failures == 0 ? 0 : 1;
}
