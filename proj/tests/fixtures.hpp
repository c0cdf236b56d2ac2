#pragma once

#include "everett/evolve.hpp"

namespace everett::testing {

/// The canonical scattering run, computed once per test binary.
inline const RunResult& standard_run() {
  static const RunResult result = run(EvolveConfig::standard_scenario());
  return result;
}

}  // namespace everett::testing
