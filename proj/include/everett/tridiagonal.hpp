#pragma once

#include <span>
#include <vector>

#include "everett/core.hpp"

namespace everett {

/// LU factorization of a complex tridiagonal matrix for repeated solves
/// (Thomas algorithm). sub[0] and sup[n-1] are ignored.
class TridiagonalSolver {
 public:
  static constexpr double kMinPivot = 1e-300;

  TridiagonalSolver(std::span<const Complex> sub, std::span<const Complex> diag,
                    std::span<const Complex> sup);

  std::size_t size() const noexcept { return pivot_.size(); }

  /// Overwrites rhs with the solution. Throws LengthMismatch on size mismatch.
  void solve(std::span<Complex> rhs) const;

 private:
  std::vector<Complex> sub_;
  std::vector<Complex> pivot_;
  std::vector<Complex> upper_;  // sup[j] / pivot[j]
};

}  // namespace everett
