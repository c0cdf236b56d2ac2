#include "everett/tridiagonal.hpp"

#include <cmath>

namespace everett {

TridiagonalSolver::TridiagonalSolver(std::span<const Complex> sub, std::span<const Complex> diag,
                                     std::span<const Complex> sup)
    : sub_(sub.begin(), sub.end()), pivot_(diag.size()), upper_(diag.size()) {
  const std::size_t n = diag.size();
  if (n == 0 || sub.size() != n || sup.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "tridiagonal bands must share one non-zero length");
  }
  for (std::size_t j = 0; j < n; ++j) {
    Complex p = diag[j];
    if (j > 0) p -= sub[j] * upper_[j - 1];
    if (!(std::abs(p) >= kMinPivot)) {
      throw Error(ErrorCode::SolverBreakdown, "tridiagonal pivot vanished");
    }
    pivot_[j] = p;
    upper_[j] = j + 1 < n ? sup[j] / p : Complex{0.0, 0.0};
  }
}

void TridiagonalSolver::solve(std::span<Complex> rhs) const {
  const std::size_t n = pivot_.size();
  if (rhs.size() != n) throw Error(ErrorCode::LengthMismatch, "rhs length differs from matrix size");
  rhs[0] /= pivot_[0];
  for (std::size_t j = 1; j < n; ++j) {
    rhs[j] = (rhs[j] - sub_[j] * rhs[j - 1]) / pivot_[j];
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    rhs[j] -= upper_[j] * rhs[j + 1];
  }
}

}  // namespace everett
