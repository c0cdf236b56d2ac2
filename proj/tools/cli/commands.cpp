#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "everett/analytic.hpp"
#include "everett/branch.hpp"
#include "everett/timing.hpp"
#include "format.hpp"

namespace everett::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kProgram = "everett-tunnel";

struct GlobalOptions {
  std::string out;
  bool strict = false;
  unsigned jobs = 0;
};

/// Thrown by command bodies to leave with a specific exit status.
struct CommandExit {
  int code;
  std::string message;
};

int exit_code_for(ErrorCode code) {
  return code == ErrorCode::ScatteringIncomplete ? kExitIncomplete : kExitUsage;
}

Json json_number(double v) { return Json(round_significant(v)); }

/// Writes to --out when given, otherwise to the primary stream.
void emit(const GlobalOptions& g, std::ostream& out, const std::string& text) {
  if (g.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw CommandExit{kExitUsage, "cannot write '" + g.out + "'"};
  file << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw CommandExit{kExitUsage, "cannot write '" + path + "'"};
  file << text;
}

std::string csv_optional(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_quote(const std::string& s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += (c == '\n' || c == '\r') ? ' ' : c;
  }
  return q + "\"";
}

// ---------------------------------------------------------------- transmit

struct TransmitArgs {
  double v0 = 1.0;
  double length = 1.0;
  double mass = 1.0;
  double emin = 0.0;
  double emax = 0.0;
  long long steps = 0;
};

std::string transmit(const TransmitArgs& a) {
  if (a.steps < 1) throw Error(ErrorCode::BadRange, "--steps must be >= 1");
  const RectBarrier barrier{a.v0, a.length, 0.0};
  barrier.validate();
  if (!(a.mass > 0.0)) throw Error(ErrorCode::InvalidArgument, "--mass must be > 0");
  const auto table = transmission_sweep(a.mass, barrier, a.emin, a.emax, static_cast<std::size_t>(a.steps));
  std::string csv = "energy,kappa,p_approx,p_exact\n";
  for (const auto& p : table) {
    csv += format_number(p.energy) + ',' + csv_optional(p.kappa) + ',' + csv_optional(p.p_approx) + ',' +
           format_number(p.p_exact) + '\n';
  }
  return csv;
}

// ---------------------------------------------------------------- evolve

std::string series_csv(const TimeSeries& s) {
  std::string csv = "t,w_reflected,w_transmitted,p_inside,norm,e_reflected,e_transmitted\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    csv += format_number(s.times[i]) + ',' + format_number(s.w_reflected[i]) + ',' +
           format_number(s.w_transmitted[i]) + ',' + format_number(s.p_inside[i]) + ',' +
           format_number(s.norm[i]) + ',' + format_number(s.e_reflected[i]) + ',' +
           format_number(s.e_transmitted[i]) + '\n';
  }
  return csv;
}

Json config_echo(const RunConfig& cfg) {
  Json echo = Json::object();
  for (const auto& [key, value] : cfg.echo()) {
    if (ConfigEntries::is_numeric_key(key)) {
      echo[key] = json_number(parse_number(value, key));
    } else {
      echo[key] = value;
    }
  }
  return echo;
}

std::string default_prefix(const std::string& config_path) {
  const auto slash = config_path.find_last_of('/');
  const auto dot = config_path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) {
    return config_path.substr(0, dot);
  }
  return config_path;
}

int evolve(const std::string& config_path, const GlobalOptions& g, std::ostream& err) {
  const RunConfig cfg = resolve_config(load_config_entries(config_path));
  const RunResult result = run(cfg.evolve, cfg.units);
  const std::string prefix = g.out.empty() ? default_prefix(config_path) : g.out;
  write_file(prefix + ".series.csv", series_csv(result.series));

  const BranchSet branches = branch_set_from_run(result.series);
  const std::size_t last = result.series.size() - 1;
  const double energies[] = {result.series.e_reflected[last], result.series.e_transmitted[last]};
  const double separation = separation_energy(energy_decomposition(branches, energies));

  std::optional<RateEstimate> rate;
  try {
    rate = branching_energy_rate(result.series, cfg.units);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoGrowth) throw;
    err << kProgram << ": warning: " << e.what() << '\n';
  }

  Json j;
  j["p_tunnel"] = json_number(tunneling_probability(branches));
  j["p_reflect"] = json_number(reflection_probability(branches));
  j["weights"] = Json::array({json_number(branches.weights()[0]), json_number(branches.weights()[1])});
  j["delta_e_separation"] = json_number(separation);
  j["delta_e_rate"] = rate ? json_number(rate->delta_e) : Json(nullptr);
  j["tau_b"] = rate ? json_number(branching_duration(rate->delta_e, cfg.units)) : Json(nullptr);
  j["eval_time"] = rate ? json_number(rate->eval_time) : Json(nullptr);
  j["edge_contamination"] = result.edge_contamination;
  j["config_echo"] = config_echo(cfg);
  write_file(prefix + ".result.json", j.dump(2) + "\n");

  if (result.edge_contamination) {
    err << kProgram << ": warning: probability reached the domain edges (EdgeContamination)\n";
    if (g.strict) return kExitContaminated;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- branch

struct BranchArgs {
  std::vector<double> weights;
  long long split = -1;
  double lambda = std::numbers::ln2;
  double epsilon = 0.01;
};

std::string branch(const BranchArgs& a) {
  if (a.split < 0) throw Error(ErrorCode::InvalidArgument, "--split must be >= 0");
  const BranchSet set = BranchSet::normalized(a.weights, static_cast<std::size_t>(a.split));
  const DecoherenceModel model{a.lambda, a.epsilon};
  model.validate();
  const std::uint64_t n_decohere = events_to_decohere(set, model);
  Json coherence = Json::array();
  for (std::uint64_t n = 0; n <= n_decohere; ++n) {
    coherence.push_back(json_number(coherence_measure(build_density_matrix(set, model, n))));
  }
  Json j;
  j["p_tunnel"] = json_number(tunneling_probability(set));
  j["coherence_at"] = std::move(coherence);
  j["n_decohere"] = n_decohere;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- worlds

std::string worlds(long long events, long long outcomes) {
  if (events < 0 || outcomes < 1) {
    throw Error(ErrorCode::InvalidArgument, "--events must be >= 0 and --outcomes >= 1");
  }
  const auto n = static_cast<std::uint64_t>(events);
  const auto d = static_cast<std::uint64_t>(outcomes);
  std::ostringstream os;
  os << "events = " << n << "\noutcomes = " << d << "\n";
  if (n >= 1) {
    os << "paper_formula = " << world_count_paper(n, d) << "\n";
  } else {
    os << "paper_formula = undefined (N^d needs N >= 1)\n";
  }
  os << "sequential = " << world_count_sequential(n, d) << "\n";
  return os.str();
}

// ---------------------------------------------------------------- mqt

struct MqtArgs {
  double te_mk = 10.0;
  double ts_mk = 100.0;
  double alpha = 1.0;
  std::optional<double> fp_ghz;
  std::optional<double> tau_b_ps;
};

std::string mqt(const MqtArgs& a) {
  if (a.fp_ghz && a.tau_b_ps) throw Error(ErrorCode::InvalidArgument, "give only one of --fp-ghz and --tau-b-ps");
  MacroParams params = a.tau_b_ps ? MacroParams{a.te_mk, a.ts_mk, a.alpha, *a.tau_b_ps * 1e-12}
                                  : MacroParams::from_plasma_frequency(a.te_mk, a.ts_mk, a.alpha,
                                                                       a.fp_ghz.value_or(10.0) * 1e9);
  params.validate();
  Json j;
  j["n_b"] = json_number(thermal_branching_events(params));
  j["tau_b_ps"] = json_number(params.tau_b * 1e12);
  j["tau_t_ps"] = json_number(macroscopic_tunneling_time(params) * 1e12);
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  std::string key;
  double from = 0.0;
  double to = 0.0;
  long long steps = 0;
};

struct SweepRow {
  double param = 0.0;
  std::optional<double> p_tunnel;
  std::optional<double> tau_b;
  std::optional<double> delta_e_rate;
  std::string error;
};

SweepRow sweep_point(const ConfigEntries& base, const std::string& key, double value) {
  SweepRow row;
  row.param = value;
  try {
    ConfigEntries entries = base;
    entries.set_numeric(key, value);
    const RunConfig cfg = resolve_config(entries);
    const RunResult result = run(cfg.evolve, cfg.units);
    row.p_tunnel = tunneling_probability(branch_set_from_run(result.series));
    const RateEstimate rate = branching_energy_rate(result.series, cfg.units);
    row.delta_e_rate = rate.delta_e;
    row.tau_b = branching_duration(rate.delta_e, cfg.units);
  } catch (const Error& e) {
    row.error = std::string(to_string(e.code())) + ": " + e.what();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), count));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) body(i);
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
}

std::string sweep(const SweepArgs& a, unsigned jobs) {
  if (!ConfigEntries::is_numeric_key(a.key)) {
    throw Error(ErrorCode::InvalidArgument, "cannot sweep unknown key '" + a.key + "'");
  }
  if (a.steps < 1) throw Error(ErrorCode::BadRange, "--steps must be >= 1");
  const ConfigEntries base = load_config_entries(a.config);

  const auto n = static_cast<std::size_t>(a.steps);
  std::vector<SweepRow> rows(n);
  parallel_for(n, jobs, [&](std::size_t i) {
    double value = a.from;
    if (n > 1) value = i + 1 == n ? a.to : a.from + (a.to - a.from) * static_cast<double>(i) / static_cast<double>(n - 1);
    rows[i] = sweep_point(base, a.key, value);
  });

  std::string csv = "param,p_tunnel,tau_b,delta_e_rate,error\n";
  for (const SweepRow& r : rows) {
    csv += format_number(r.param) + ',' + csv_optional(r.p_tunnel) + ',' + csv_optional(r.tau_b) + ',' +
           csv_optional(r.delta_e_rate) + ',' + (r.error.empty() ? std::string() : csv_quote(r.error)) + '\n';
  }
  return csv;
}

}  // namespace

unsigned default_jobs() {
  if (const char* env = std::getenv("EVERETT_TUNNEL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rectangular-barrier tunneling: transmission, wavepacket evolution, branch weights and timing",
               kProgram};
  app.require_subcommand(1);

  GlobalOptions g;
  long long jobs = 0;
  app.add_option("--out", g.out, "Output file (evolve: output prefix)");
  app.add_flag("--strict", g.strict, "Exit 4 when the evolve run touches the domain edges");
  app.add_option("--jobs", jobs, "Sweep worker count (default: EVERETT_TUNNEL_THREADS or all cores)");

  TransmitArgs ta;
  auto* transmit_cmd = app.add_subcommand("transmit", "Tabulate exact and approximate transmission");
  transmit_cmd->add_option("--v0", ta.v0, "Barrier height")->capture_default_str();
  transmit_cmd->add_option("--length", ta.length, "Barrier width")->capture_default_str();
  transmit_cmd->add_option("--mass", ta.mass, "Particle mass")->capture_default_str();
  transmit_cmd->add_option("--emin", ta.emin, "Lowest energy")->required();
  transmit_cmd->add_option("--emax", ta.emax, "Highest energy")->required();
  transmit_cmd->add_option("--steps", ta.steps, "Number of energies")->required();

  std::string evolve_config;
  auto* evolve_cmd = app.add_subcommand("evolve", "Propagate a Gaussian packet through the barrier");
  evolve_cmd->add_option("config", evolve_config, "Run configuration file")->required();

  BranchArgs ba;
  auto* branch_cmd = app.add_subcommand("branch", "Branch weights and decoherence bookkeeping");
  branch_cmd->add_option("--weights", ba.weights, "Comma-separated branch weights")->delimiter(',')->required();
  branch_cmd->add_option("--split", ba.split, "Number of reflected branches")->required();
  branch_cmd->add_option("--lambda", ba.lambda, "Overlap decay per event")->capture_default_str();
  branch_cmd->add_option("--epsilon", ba.epsilon, "Coherence threshold")->capture_default_str();

  long long events = -1;
  long long outcomes = -1;
  auto* worlds_cmd = app.add_subcommand("worlds", "World counts after N events with d outcomes");
  worlds_cmd->add_option("--events", events, "Number of events N")->required();
  worlds_cmd->add_option("--outcomes", outcomes, "Outcomes per event d")->required();

  MqtArgs ma;
  auto* mqt_cmd = app.add_subcommand("mqt", "Macroscopic tunneling time from the thermal model");
  mqt_cmd->add_option("--te-mk", ma.te_mk, "Environment temperature [mK]")->capture_default_str();
  mqt_cmd->add_option("--ts-mk", ma.ts_mk, "Crossover temperature [mK]")->capture_default_str();
  mqt_cmd->add_option("--alpha", ma.alpha, "Thermal scaling exponent")->capture_default_str();
  auto* fp = mqt_cmd->add_option("--fp-ghz", ma.fp_ghz, "Plasma frequency [GHz] (default 10)");
  auto* tb = mqt_cmd->add_option("--tau-b-ps", ma.tau_b_ps, "Branching duration [ps]");
  fp->excludes(tb);

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one numeric config field over evolve runs");
  sweep_cmd->add_option("config", sa.config, "Base run configuration file")->required();
  sweep_cmd->add_option("--vary", sa.key, "Config key to vary")->required();
  sweep_cmd->add_option("--from", sa.from, "First value")->required();
  sweep_cmd->add_option("--to", sa.to, "Last value")->required();
  sweep_cmd->add_option("--steps", sa.steps, "Number of values")->required();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << kProgram << ": error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (jobs < 0) throw Error(ErrorCode::InvalidArgument, "--jobs must be >= 1");
    g.jobs = jobs > 0 ? static_cast<unsigned>(jobs) : default_jobs();

    if (*transmit_cmd) emit(g, out, transmit(ta));
    if (*evolve_cmd) return evolve(evolve_config, g, err);
    if (*branch_cmd) emit(g, out, branch(ba));
    if (*worlds_cmd) emit(g, out, worlds(events, outcomes));
    if (*mqt_cmd) emit(g, out, mqt(ma));
    if (*sweep_cmd) emit(g, out, sweep(sa, g.jobs));
    return kExitOk;
  } catch (const CommandExit& e) {
    err << kProgram << ": error: " << e.message << '\n';
    return e.code;
  } catch (const Error& e) {
    err << kProgram << ": error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << kProgram << ": internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace everett::cli
