#pragma once

// Exact linear programming over the rationals in standard equality form:
// maximize c.x subject to A x = b, x >= 0. A small dense two-phase simplex
// using Bland's rule, so it terminates on every input and its verdicts are
// exact rather than numerically approximate. Intended for the small
// structured systems produced by strand analysis, not bulk optimization.

#include <vector>

#include "homsel/common.hpp"

namespace homsel {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rat value = 0;           // objective at the optimum (optimal status only)
  std::vector<Rat> point;  // an optimal basic solution (optimal status only)
};

// Solves: maximize objective . x subject to rows[i] . x == rhs[i], x >= 0.
// Every row must have the same length as the objective.
LpResult solve_lp(const std::vector<std::vector<Rat>>& rows, const std::vector<Rat>& rhs,
                  const std::vector<Rat>& objective);

}  // namespace homsel
