#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "format.hpp"

namespace everett::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::size_t to_count(double v, std::string_view key) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw Error(ErrorCode::InvalidArgument, "config key '" + std::string(key) + "' must be a non-negative integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

const std::vector<std::string_view>& ConfigEntries::known_keys() {
  static const std::vector<std::string_view> keys = {
      "units", "x_min", "x_max", "n_points", "x0", "sigma", "k0", "energy", "v0", "length", "x_start",
      "mass", "dt", "n_steps", "record_every", "potential_sampling", "lambda", "epsilon"};
  return keys;
}

bool ConfigEntries::is_numeric_key(std::string_view key) {
  const auto& keys = known_keys();
  return key != "units" && key != "potential_sampling" &&
         std::find(keys.begin(), keys.end(), key) != keys.end();
}

void ConfigEntries::add(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
  }
  if (!values_.emplace(key, value).second) {
    throw Error(ErrorCode::InvalidArgument, "duplicate config key '" + key + "'");
  }
}

void ConfigEntries::set_numeric(const std::string& key, double value) {
  if (!is_numeric_key(key)) throw Error(ErrorCode::InvalidArgument, "'" + key + "' is not a numeric config key");
  if (key == "energy") values_.erase("k0");
  if (key == "k0") values_.erase("energy");
  values_[key] = format_number(value);
}

double parse_number(std::string_view text, std::string_view what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument,
                "cannot parse '" + std::string(text) + "' as a number for " + std::string(what));
  }
  return v;
}

ConfigEntries parse_config_entries(std::istream& in) {
  ConfigEntries entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw Error(ErrorCode::InvalidArgument, "line " + std::to_string(line_no) + ": empty key or value");
    }
    entries.add(key, value);
  }
  return entries;
}

ConfigEntries load_config_entries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open config file '" + path + "'");
  return parse_config_entries(in);
}

RunConfig resolve_config(const ConfigEntries& entries) {
  const auto& v = entries.values();
  auto text = [&](const char* key) -> const std::string* {
    const auto it = v.find(key);
    return it == v.end() ? nullptr : &it->second;
  };
  auto number = [&](const char* key, double fallback) {
    const std::string* s = text(key);
    return s ? parse_number(*s, key) : fallback;
  };

  RunConfig cfg{UnitSystem::natural(), EvolveConfig::standard_scenario(), {std::numbers::ln2, 0.01}};
  if (const std::string* u = text("units")) {
    if (*u == "si") {
      cfg.units = UnitSystem::si();
    } else if (*u != "natural") {
      throw Error(ErrorCode::InvalidArgument, "units must be 'natural' or 'si'");
    }
  }
  if (const std::string* p = text("potential_sampling")) {
    if (*p == "node") {
      cfg.evolve.sampling = PotentialSampling::Node;
    } else if (*p != "cell_average") {
      throw Error(ErrorCode::InvalidArgument, "potential_sampling must be 'cell_average' or 'node'");
    }
  }

  EvolveConfig& e = cfg.evolve;
  const Grid& g = e.grid;
  e.grid = Grid(number("x_min", g.x_min()), number("x_max", g.x_max()),
                to_count(number("n_points", static_cast<double>(g.n_points())), "n_points"));
  e.packet.x0 = number("x0", e.packet.x0);
  e.packet.sigma = number("sigma", e.packet.sigma);
  e.barrier.v0 = number("v0", e.barrier.v0);
  e.barrier.length = number("length", e.barrier.length);
  e.barrier.x_start = number("x_start", e.barrier.x_start);
  e.mass = number("mass", e.mass);
  e.dt = number("dt", e.dt);
  e.n_steps = to_count(number("n_steps", static_cast<double>(e.n_steps)), "n_steps");
  e.record_every = to_count(number("record_every", static_cast<double>(e.record_every)), "record_every");

  if (text("energy") && text("k0")) {
    throw Error(ErrorCode::InvalidArgument, "give either 'energy' or 'k0', not both");
  }
  if (text("energy")) {
    const double energy = number("energy", 0.0);
    if (!(energy >= 0.0) || !(e.mass > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "energy must be >= 0 with mass > 0");
    }
    e.packet.k0 = std::sqrt(2.0 * e.mass * energy) / cfg.units.hbar;
  } else {
    e.packet.k0 = number("k0", e.packet.k0);
  }

  cfg.decoherence.lambda_per_event = number("lambda", cfg.decoherence.lambda_per_event);
  cfg.decoherence.epsilon_coherence = number("epsilon", cfg.decoherence.epsilon_coherence);

  e.validate();
  cfg.decoherence.validate();
  return cfg;
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
  const EvolveConfig& e = evolve;
  return {
      {"units", units.mode == UnitSystem::Mode::SI ? "si" : "natural"},
      {"x_min", format_number(e.grid.x_min())},
      {"x_max", format_number(e.grid.x_max())},
      {"n_points", std::to_string(e.grid.n_points())},
      {"x0", format_number(e.packet.x0)},
      {"sigma", format_number(e.packet.sigma)},
      {"k0", format_number(e.packet.k0)},
      {"v0", format_number(e.barrier.v0)},
      {"length", format_number(e.barrier.length)},
      {"x_start", format_number(e.barrier.x_start)},
      {"mass", format_number(e.mass)},
      {"dt", format_number(e.dt)},
      {"n_steps", std::to_string(e.n_steps)},
      {"record_every", std::to_string(e.record_every)},
      {"potential_sampling", e.sampling == PotentialSampling::Node ? "node" : "cell_average"},
      {"lambda", format_number(decoherence.lambda_per_event)},
      {"epsilon", format_number(decoherence.epsilon_coherence)},
  };
}

}  // namespace everett::cli
