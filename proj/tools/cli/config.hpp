#pragma once

#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "everett/branch.hpp"
#include "everett/core.hpp"
#include "everett/evolve.hpp"

namespace everett::cli {

/// Raw `key = value` pairs from a run configuration file, before
/// interpretation. Keys are checked against a fixed list on insertion.
class ConfigEntries {
 public:
  static const std::vector<std::string_view>& known_keys();
  static bool is_numeric_key(std::string_view key);

  /// Throws InvalidArgument on unknown or duplicate keys.
  void add(const std::string& key, const std::string& value);
  /// Overrides one numeric field (used by sweeps). Setting `energy` drops
  /// `k0` and vice versa.
  void set_numeric(const std::string& key, double value);

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

struct RunConfig {
  UnitSystem units;
  EvolveConfig evolve;
  DecoherenceModel decoherence;

  /// Every resolved field in a fixed order, for echoing back to the user.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// One `key = value` per line; `#` starts a comment; blank lines ignored.
ConfigEntries parse_config_entries(std::istream& in);
ConfigEntries load_config_entries(const std::string& path);

/// Fills unspecified fields from the standard scenario and validates.
RunConfig resolve_config(const ConfigEntries& entries);

double parse_number(std::string_view text, std::string_view what);

}  // namespace everett::cli
