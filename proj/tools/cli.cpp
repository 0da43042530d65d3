#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_out.hpp"
#include "qctl/bangbang.hpp"
#include "qctl/controllability.hpp"
#include "qctl/errors.hpp"
#include "qctl/fault_tolerance.hpp"
#include "qctl/open_system.hpp"
#include "qctl/pulse.hpp"
#include "qctl/spin.hpp"

namespace qctl::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

/// Bad or missing configuration; maps to exit code 2.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

const std::set<std::string> kSections = {"chain", "actuator", "synthesis", "controllability", "pulse", "simulate", "ft"};

// Typed access to one config object; remembers which keys were read so
// finish() can reject anything unexpected.
class Section {
 public:
  Section(const json* j, std::string name) : j_(j), name_(std::move(name)) {
    if (j_ && !j_->is_object()) throw ConfigError(name_ + ": must be an object");
  }

  bool present() const { return j_ != nullptr; }
  bool has(const std::string& key) {
    allowed_.insert(key);
    return j_ && j_->contains(key);
  }

  template <class T>
  std::optional<T> maybe(const std::string& key) {
    if (!has(key)) return std::nullopt;
    try {
      return j_->at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(path(key) + ": wrong type");
    }
  }

  template <class T>
  T get(const std::string& key, T fallback) {
    return maybe<T>(key).value_or(std::move(fallback));
  }

  template <class T>
  T require(const std::string& key) {
    auto v = maybe<T>(key);
    if (!v) throw ConfigError(path(key) + ": required field missing");
    return *v;
  }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(path(key) + ": required field missing");
    return j_->at(key);
  }

  void forbid(const std::string& key, const std::string& why) {
    if (j_ && j_->contains(key)) throw ConfigError(path(key) + ": " + why);
    allowed_.insert(key);
  }

  void finish() const {
    if (!j_) return;
    for (auto it = j_->begin(); it != j_->end(); ++it)
      if (!allowed_.count(it.key())) throw ConfigError(path(it.key()) + ": unknown field");
  }

  std::string path(const std::string& key) const { return name_ + "." + key; }

 private:
  const json* j_;
  std::string name_;
  std::set<std::string> allowed_;
};

struct Config {
  json root;
  fs::path base_dir;

  Section section(const std::string& name) const {
    const json* j = root.contains(name) ? &root.at(name) : nullptr;
    return Section(j, name);
  }
};

Config load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  Config cfg;
  try {
    cfg.root = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!cfg.root.is_object()) throw ConfigError("config must be a JSON object");
  for (auto it = cfg.root.begin(); it != cfg.root.end(); ++it)
    if (!kSections.count(it.key())) throw ConfigError(it.key() + ": unknown section");
  cfg.base_dir = path.parent_path();
  return cfg;
}

// Wraps library precondition failures with the config location they came from.
template <class F>
auto checked(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

ComplexMatrix matrix_field(Section& s, const std::string& key) {
  const json& j = s.raw(key);
  return checked(s.path(key), [&] { return matrix_from_json(j); });
}

std::vector<ComplexMatrix> matrix_list(Section& s, const std::string& key) {
  std::vector<ComplexMatrix> out;
  if (!s.has(key)) return out;
  const json& j = s.raw(key);
  if (!j.is_array()) throw ConfigError(s.path(key) + ": must be a list of matrices");
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(checked(s.path(key) + "[" + std::to_string(i) + "]", [&] { return matrix_from_json(j[i]); }));
  return out;
}

ojson matrix_json(const ComplexMatrix& m) { return ojson(matrix_to_json(m)); }

struct ChainConfig {
  spin::ChainSpec spec;
  ojson resolved;
};

ChainConfig parse_chain(const Config& cfg) {
  Section s = cfg.section("chain");
  if (!s.present()) throw ConfigError("chain: required section missing");
  ChainConfig out;
  const std::string coupling = s.get<std::string>("coupling", "explicit");
  out.resolved["coupling"] = coupling;
  if (coupling == "explicit") {
    out.spec.E = s.require<std::vector<double>>("E");
    out.spec.d = s.require<std::vector<double>>("d");
    if (auto n = s.maybe<std::size_t>("N"); n && *n != out.spec.E.size())
      throw ConfigError("chain.N: does not match len(E)");
    s.forbid("J", "only used with coupling heisenberg or xy");
    checked("chain", [&] {
      out.spec.validate();
      return 0;
    });
  } else if (coupling == "heisenberg" || coupling == "xy") {
    const auto n = s.require<std::size_t>("N");
    const auto J = s.require<std::vector<double>>("J");
    s.forbid("E", "not allowed with coupling " + coupling);
    s.forbid("d", "not allowed with coupling " + coupling);
    out.spec = checked("chain", [&] {
      return spin::heisenberg_to_chain(J, n, coupling == "xy" ? spin::Coupling::xy : spin::Coupling::heisenberg);
    });
    out.resolved["J"] = J;
  } else {
    throw ConfigError("chain.coupling: expected explicit, heisenberg or xy");
  }
  s.finish();
  out.resolved["N"] = out.spec.sites();
  out.resolved["E"] = out.spec.E;
  out.resolved["d"] = out.spec.d;
  return out;
}

std::optional<std::size_t> parse_actuator(const Config& cfg, ojson& resolved) {
  Section s = cfg.section("actuator");
  if (!s.present()) return std::nullopt;
  const auto r = s.get<std::size_t>("r", 1);
  s.finish();
  resolved["actuator"] = ojson{{"r", r}};
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

std::string csv_header(const ojson& config) {
  return "# config: " + config.dump() + "\n";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
}

// ---------------------------------------------------------------- synth

int cmd_synth(const Config& cfg, const Invocation& inv, std::ostream& out) {
  ojson resolved;
  const ChainConfig chain = parse_chain(cfg);
  resolved["chain"] = chain.resolved;
  const std::size_t r = parse_actuator(cfg, resolved).value_or(1);
  resolved["actuator"] = ojson{{"r", r}};

  Section s = cfg.section("synthesis");
  if (!s.present()) throw ConfigError("synthesis: required section missing");
  const auto gate = s.require<std::string>("gate");
  bangbang::SynthesisJob job;
  job.fidelity_goal = s.get<double>("fidelity_goal", job.fidelity_goal);
  job.max_segments = s.get<std::size_t>("max_segments", job.max_segments);
  job.min_segments = s.get<std::size_t>("min_segments", job.min_segments);
  job.restarts = s.get<std::size_t>("restarts", job.restarts);
  job.seed = inv.seed.value_or(s.get<std::uint64_t>("seed", job.seed));
  job.total_time_cap = s.get<double>("total_time_cap", job.total_time_cap);
  const bool phase_invariant = s.get<bool>("phase_invariant", false);
  job.mode = phase_invariant ? bangbang::FidelityMode::phase_invariant : bangbang::FidelityMode::phase_sensitive;
  const bool plot = s.get<bool>("plot", true);
  s.finish();

  const auto pair = checked("actuator.r", [&] { return spin::build_switch_pair(chain.spec, r); });
  job.h1 = pair.off;
  job.h2 = pair.on;
  job.target = checked("synthesis.gate", [&] { return bangbang::gate_by_name(gate); });
  if (job.target.dim() != chain.spec.sites())
    throw ConfigError("synthesis.gate: target is " + std::to_string(job.target.dim()) + "-dimensional but the chain has N=" +
                      std::to_string(chain.spec.sites()));
  resolved["synthesis"] = ojson{{"gate", gate},
                                {"fidelity_goal", job.fidelity_goal},
                                {"max_segments", job.max_segments},
                                {"min_segments", job.min_segments},
                                {"restarts", job.restarts},
                                {"seed", job.seed},
                                {"total_time_cap", job.total_time_cap},
                                {"phase_invariant", phase_invariant},
                                {"plot", plot}};

  const auto result = checked("synthesis", [&] { return bangbang::synthesize_gate(job); });
  const bool converged = result.status == bangbang::SynthesisStatus::converged;

  ojson doc;
  doc["gate"] = gate;
  doc["m"] = result.schedule.m;
  doc["t"] = result.schedule.t;
  doc["fidelity"] = result.achieved_fidelity;
  doc["status"] = converged ? "converged" : "budget_exhausted";
  doc["hamiltonian_angle_rad"] = bangbang::hamiltonian_angle(pair.off, pair.on);
  doc["total_time"] = result.schedule.total_time();
  doc["config"] = resolved;
  write_file(inv.out / "schedule.json", dump_json(doc));

  if (plot) {
    std::string csv = csv_header(resolved) + "time,actuator_state\n";
    for (const auto& [t, state] : bangbang::switching_plot(result.schedule))
      csv += format_double(t) + "," + std::to_string(state) + "\n";
    write_file(inv.out / "switching.csv", csv);
  }
  out << "synth " << gate << ": fidelity " << format_double(result.achieved_fidelity) << ", " << result.schedule.size()
      << " segments, " << (converged ? "converged" : "budget exhausted") << "\n";
  return converged ? kSuccess : kGoalNotReached;
}

// ---------------------------------------------------------------- controllability

int cmd_controllability(const Config& cfg, const Invocation& inv, std::ostream& out) {
  ojson resolved;
  const ChainConfig chain = parse_chain(cfg);
  resolved["chain"] = chain.resolved;
  const auto r = parse_actuator(cfg, resolved);

  Section s = cfg.section("controllability");
  const double tol = s.get<double>("rank_tol", lie::kDefaultRankTol);
  const auto cap = s.get<std::size_t>("dim_cap", 0);
  s.finish();
  resolved["controllability"] = ojson{{"rank_tol", tol}, {"dim_cap", cap}};

  std::vector<HermitianOperator> generators;
  if (r) {
    const auto pair = checked("actuator.r", [&] { return spin::build_switch_pair(chain.spec, *r); });
    generators = {pair.off, pair.on};
  } else {
    generators = {spin::build_chain_hamiltonian(chain.spec)};
  }
  const auto report = checked("controllability", [&] { return lie::lie_closure(generators, tol, cap); });
  const bool ok = lie::is_controllable(report);

  ojson summary{{"n", report.n}, {"dimension", report.dimension}, {"controllable", ok}};
  ojson doc = summary;
  doc["full_dimension"] = report.full_dimension;
  doc["max_dimension"] = report.max_dimension;
  doc["traceless_dimension"] = report.traceless_dimension;
  doc["rank_tolerance"] = report.rank_tolerance;
  doc["truncated"] = report.truncated;
  doc["config"] = resolved;
  write_file(inv.out / "report.json", dump_json(doc));
  out << summary.dump() << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- ft-analyze

UnitaryOperator load_unitary(const Config& cfg, Section& s, const std::string& key, ojson& resolved) {
  const auto rel = s.require<std::string>(key);
  resolved[key] = rel;
  const fs::path path = fs::path(rel).is_absolute() ? fs::path(rel) : cfg.base_dir / rel;
  std::ifstream in(path);
  if (!in) throw ConfigError(s.path(key) + ": cannot open '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(s.path(key) + ": not valid JSON");
  }
  return checked(s.path(key), [&] { return UnitaryOperator(matrix_from_json(j)); });
}

int cmd_ft_analyze(const Config& cfg, const Invocation& inv, std::ostream& out) {
  Section s = cfg.section("ft");
  if (!s.present()) throw ConfigError("ft: required section missing");
  ojson ft_resolved;
  const UnitaryOperator target = load_unitary(cfg, s, "target", ft_resolved);
  const UnitaryOperator realized = load_unitary(cfg, s, "realized", ft_resolved);
  if (target.dim() != realized.dim()) throw ConfigError("ft: target and realized differ in dimension");
  const std::size_t dim = target.dim();
  if (!std::has_single_bit(dim)) throw ConfigError("ft: dimension is not a power of two");
  const std::size_t n = static_cast<std::size_t>(std::countr_zero(dim));
  ft::PenaltyWeights lambda = ft::PenaltyWeights::defaults(n);
  if (auto l = s.maybe<std::vector<double>>("lambda")) {
    if (l->size() + 1 != n && !(n < 2 && l->empty()))
      throw ConfigError("ft.lambda: expected " + std::to_string(n >= 2 ? n - 1 : 0) + " weights (k = 2.." +
                        std::to_string(n) + ")");
    lambda.lambda = *l;
  }
  s.finish();
  ft_resolved["lambda"] = lambda.lambda;
  ojson resolved{{"ft", ft_resolved}};

  const auto u_e = ft::error_operator(target, realized);
  const auto spectrum = ft::weight_spectrum(ft::pauli_expand(u_e.matrix(), n));
  const double fidelity = hilbert_schmidt_inner(target.matrix(), realized.matrix()).real() / static_cast<double>(dim);
  const double penalized = checked("ft.lambda", [&] { return ft::penalized_objective(realized, target, lambda); });

  ojson doc;
  doc["fidelity"] = fidelity;
  doc["weights"] = spectrum.W;
  doc["penalized"] = penalized;
  doc["lambda"] = lambda.lambda;
  doc["config"] = resolved;
  write_file(inv.out / "weights.json", dump_json(doc));
  out << "ft-analyze: fidelity " << format_double(fidelity) << ", penalized " << format_double(penalized) << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- simulate

std::string population_columns(std::size_t dim) {
  std::string s;
  for (std::size_t i = 0; i < dim; ++i) s += ",p" + std::to_string(i);
  return s;
}

std::string populations(const ComplexMatrix& rho) {
  std::string s;
  for (std::size_t i = 0; i < rho.dim(); ++i) s += "," + format_double(rho(i, i).real());
  return s;
}

int cmd_simulate(const Config& cfg, const Invocation& inv, std::ostream& out) {
  Section s = cfg.section("simulate");
  if (!s.present()) throw ConfigError("simulate: required section missing");
  const ComplexMatrix h = matrix_field(s, "H");
  const HermitianOperator ham = checked("simulate.H", [&] { return HermitianOperator(h); });
  const auto collapse = matrix_list(s, "collapse");
  const auto measured = matrix_list(s, "measured");
  const ComplexMatrix rho0 = matrix_field(s, "rho0");
  const double T = s.require<double>("T");
  const double dt = s.require<double>("dt");
  const auto trajectories = s.get<std::size_t>("trajectories", 1);
  const auto seed = inv.seed.value_or(s.get<std::uint64_t>("seed", 1));
  const auto stride = s.get<std::size_t>("stride", 1);
  const auto files = s.get<std::size_t>("trajectory_files", trajectories);
  if (trajectories == 0) throw ConfigError("simulate.trajectories: must be >= 1");

  open::FeedbackRule feedback;
  ojson fb_resolved{{"mode", "off"}};
  if (s.has("feedback")) {
    Section f(&s.raw("feedback"), "simulate.feedback");
    const auto mode = f.get<std::string>("mode", "off");
    if (mode == "current_proportional") {
      feedback.mode = open::FeedbackMode::current_proportional;
      feedback.gain = f.require<double>("gain");
      const ComplexMatrix act = matrix_field(f, "actuator");
      feedback.actuator = checked("simulate.feedback.actuator", [&] { return HermitianOperator(act); });
      feedback.channel = f.get<std::size_t>("channel", 0);
      fb_resolved = ojson{{"mode", mode},
                          {"gain", feedback.gain},
                          {"actuator", matrix_json(act)},
                          {"channel", feedback.channel}};
    } else if (mode != "off") {
      throw ConfigError("simulate.feedback.mode: expected off or current_proportional");
    } else {
      f.forbid("gain", "feedback is off");
      f.forbid("actuator", "feedback is off");
      f.forbid("channel", "feedback is off");
    }
    f.finish();
  }
  s.finish();

  ojson sim{{"H", matrix_json(h)}, {"collapse", ojson::array()}, {"measured", ojson::array()},
            {"rho0", matrix_json(rho0)}, {"T", T}, {"dt", dt}, {"trajectories", trajectories},
            {"seed", seed}, {"stride", stride}, {"trajectory_files", files}, {"feedback", fb_resolved}};
  for (const auto& c : collapse) sim["collapse"].push_back(matrix_json(c));
  for (const auto& c : measured) sim["measured"].push_back(matrix_json(c));
  const ojson resolved{{"simulate", sim}};
  const std::string header = csv_header(resolved);
  const std::size_t dim = h.dim();

  const auto setup = checked("simulate", [&] { return open::homodyne(ham, collapse, measured); });
  if (setup.channels.empty()) {
    if (feedback.mode != open::FeedbackMode::off)
      throw ConfigError("simulate.feedback: needs at least one measured operator");
    const auto traj = checked("simulate", [&] { return open::lindblad_propagate(setup.model, rho0, T, dt, stride); });
    std::string csv = header + "time" + population_columns(dim) + "\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      csv += format_double(traj.times[i]) + populations(traj.states[i]) + "\n";
    if (files > 0) write_file(inv.out / "trajectory_0.csv", csv);
    write_file(inv.out / "ensemble.csv", csv);
    out << "simulate: deterministic run, final populations" << populations(traj.states.back()) << "\n";
    return kSuccess;
  }

  const auto ensemble = checked("simulate", [&] {
    return open::sme_ensemble(setup.model, setup.channels, feedback, rho0, T, dt, trajectories, seed, stride);
  });
  const std::size_t C = setup.channels.size();
  for (std::size_t k = 0; k < std::min(files, ensemble.size()); ++k) {
    const auto& tr = ensemble[k];
    std::string csv = header + "time" + population_columns(dim);
    for (std::size_t c = 0; c < C; ++c) csv += ",dy" + std::to_string(c);
    csv += "\n";
    // record columns hold the measurement increment accumulated since the previous row
    const std::size_t steps = tr.record.size() / C;
    std::size_t step = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      std::vector<double> acc(C, 0.0);
      const std::size_t until = i == 0 ? 0 : (i + 1 == tr.times.size() ? steps : std::min(steps, i * stride));
      for (; step < until; ++step)
        for (std::size_t c = 0; c < C; ++c) acc[c] += tr.record[step * C + c];
      csv += format_double(tr.times[i]) + populations(tr.states[i]);
      for (double a : acc) csv += "," + format_double(a);
      csv += "\n";
    }
    write_file(inv.out / ("trajectory_" + std::to_string(k) + ".csv"), csv);
  }
  const auto mean = open::ensemble_average(ensemble);
  std::string csv = header + "time" + population_columns(dim) + "\n";
  for (std::size_t i = 0; i < mean.times.size(); ++i)
    csv += format_double(mean.times[i]) + populations(mean.states[i]) + "\n";
  write_file(inv.out / "ensemble.csv", csv);
  out << "simulate: " << trajectories << " trajectories, final mean populations" << populations(mean.states.back())
      << "\n";
  return kSuccess;
}

// ---------------------------------------------------------------- pulse

int cmd_pulse(const Config& cfg, const Invocation& inv, std::ostream& out) {
  Section s = cfg.section("pulse");
  spin::HyperfineParams hp;
  hp.nu_s_GHz = s.get<double>("nu_s_GHz", hp.nu_s_GHz);
  hp.nu_n_MHz = s.get<double>("nu_n_MHz", hp.nu_n_MHz);
  hp.A_zx_MHz = s.get<double>("A_zx_MHz", hp.A_zx_MHz);
  hp.A_zz_MHz = s.get<double>("A_zz_MHz", hp.A_zz_MHz);
  const auto frame_name = s.get<std::string>("frame", "rotating");
  spin::Frame frame;
  if (frame_name == "rotating" || frame_name == "electron-rotating")
    frame = spin::Frame::electron_rotating;
  else if (frame_name == "lab")
    frame = spin::Frame::lab;
  else
    throw ConfigError("pulse.frame: expected rotating or lab");
  const auto segments = s.get<std::size_t>("segments", 100);
  const double horizon_ns = s.get<double>("horizon_ns", 100.0);
  const double u_max_MHz = s.get<double>("u_max_MHz", 100.0);
  const int iters = s.get<int>("iters", 500);
  const auto seed = inv.seed.value_or(s.get<std::uint64_t>("seed", 1));
  const auto restarts = s.get<std::size_t>("restarts", 1);
  const double goal = s.get<double>("fidelity_goal", 0.99);
  s.finish();
  if (!(u_max_MHz > 0.0)) throw ConfigError("pulse.u_max_MHz: must be positive");
  if (restarts == 0) throw ConfigError("pulse.restarts: must be >= 1");
  if (iters < 0) throw ConfigError("pulse.iters: must be >= 0");

  const ojson resolved{{"pulse",
                        {{"nu_s_GHz", hp.nu_s_GHz},
                         {"nu_n_MHz", hp.nu_n_MHz},
                         {"A_zx_MHz", hp.A_zx_MHz},
                         {"A_zz_MHz", hp.A_zz_MHz},
                         {"frame", frame == spin::Frame::lab ? "lab" : "rotating"},
                         {"segments", segments},
                         {"horizon_ns", horizon_ns},
                         {"u_max_MHz", u_max_MHz},
                         {"iters", iters},
                         {"seed", seed},
                         {"restarts", restarts},
                         {"fidelity_goal", goal}}}};

  const auto problem = checked("pulse", [&] { return pulse::nuclear_flip_problem(hp, frame, segments, horizon_ns); });
  pulse::GrapeOptions options;
  options.iterations = iters;
  options.u_max = u_max_MHz * 1e-3;  // amplitudes are in GHz

  std::optional<pulse::GrapeResult> best;
  for (std::size_t k = 0; k < restarts; ++k) {
    auto r = pulse::grape_optimize(problem, seed + k, options);
    if (!best || r.history.back() > best->history.back()) best = std::move(r);
  }
  const double fidelity = pulse::transfer_fidelity(problem, best->program);

  ojson doc;
  doc["dt"] = best->program.dt;
  ojson rows = ojson::array();
  for (std::size_t k = 0; k < best->program.segments; ++k) {
    ojson row = ojson::array();
    for (std::size_t c = 0; c < best->program.channels; ++c) row.push_back(best->program.at(k, c));
    rows.push_back(std::move(row));
  }
  doc["amplitudes"] = std::move(rows);
  doc["units"] = ojson{{"dt", "ns"}, {"amplitudes", "GHz"}};
  doc["channels"] = ojson::array({"S_x", "S_y"});
  doc["fidelity"] = fidelity;
  doc["iterations"] = best->history.size() - 1;
  doc["converged"] = best->converged;
  doc["config"] = resolved;
  write_file(inv.out / "pulse.json", dump_json(doc));

  const auto& st = std::get<pulse::StateTransfer>(problem.objective);
  const auto states = pulse::state_trajectory(problem, best->program, st.initial);
  std::string csv = csv_header(resolved) + "time,bx,by,bz\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto b = pulse::bloch_vector(pulse::partial_trace_first_qubit(pulse::density_from_state(states[k])));
    csv += format_double(static_cast<double>(k) * best->program.dt) + "," + format_double(b[0]) + "," +
           format_double(b[1]) + "," + format_double(b[2]) + "\n";
  }
  write_file(inv.out / "bloch.csv", csv);
  out << "pulse: flip fidelity " << format_double(fidelity) << "\n";
  return fidelity >= goal ? kSuccess : kGoalNotReached;
}

}  // namespace

int run(const Invocation& inv, std::ostream& out, std::ostream& log) {
  try {
    const Config cfg = load_config(inv.config);
    ensure_dir(inv.out);
    if (inv.command == "synth") return cmd_synth(cfg, inv, out);
    if (inv.command == "controllability") return cmd_controllability(cfg, inv, out);
    if (inv.command == "ft-analyze") return cmd_ft_analyze(cfg, inv, out);
    if (inv.command == "simulate") return cmd_simulate(cfg, inv, out);
    if (inv.command == "pulse") return cmd_pulse(cfg, inv, out);
    log << "error: unknown command '" << inv.command << "'\n";
    return kInvalidInput;
  } catch (const InvalidInput& e) {
    log << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kGoalNotReached;
  }
}

int main_entry(int argc, char** argv) {
  CLI::App app{"qctl: quantum control synthesis and analysis"};
  Invocation inv;
  std::uint64_t seed = 0;
  app.add_option("command", inv.command, "synth | controllability | ft-analyze | simulate | pulse")
      ->required()
      ->check(CLI::IsMember({"synth", "controllability", "ft-analyze", "simulate", "pulse"}));
  app.add_option("--config", inv.config, "JSON job configuration")->required();
  app.add_option("--out", inv.out, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "override every seed in the config");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kInvalidInput;
  }
  if (seed_opt->count()) inv.seed = seed;
  return run(inv, std::cout, std::cerr);
}

}  // namespace qctl::cli
