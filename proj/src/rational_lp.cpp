#include "homsel/rational_lp.hpp"

#include <cstddef>

namespace homsel {
namespace {

// Dense simplex tableau: one row per constraint plus a reduced-cost row, one
// column per variable plus the right-hand side. Row operations keep every
// entry an exact rational, and Bland's rule (always the lowest admissible
// index) rules out cycling.
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_(rows + 1, std::vector<Rat>(cols + 1, 0)), basis_(rows, -1) {}

  Rat& at(std::size_t r, std::size_t c) { return t_[r][c]; }
  Rat& rhs(std::size_t r) { return t_[r][cols_]; }
  Rat& cost(std::size_t c) { return t_[rows_][c]; }
  Rat& objective() { return t_[rows_][cols_]; }
  int basis(std::size_t r) const { return basis_[r]; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  void pivot(std::size_t r, std::size_t c) {
    const Rat inv = 1 / t_[r][c];
    for (auto& e : t_[r]) e *= inv;
    for (std::size_t i = 0; i <= rows_; ++i) {
      if (i == r || t_[i][c] == 0) continue;
      const Rat factor = t_[i][c];
      for (std::size_t j = 0; j <= cols_; ++j) t_[i][j] -= factor * t_[r][j];
    }
    basis_[r] = static_cast<int>(c);
  }

  // Makes the reduced-cost row consistent with the current basis.
  void price_out() {
    for (std::size_t r = 0; r < rows_; ++r) {
      const std::size_t b = static_cast<std::size_t>(basis_[r]);
      if (t_[rows_][b] == 0) continue;
      const Rat factor = t_[rows_][b];
      for (std::size_t j = 0; j <= cols_; ++j) t_[rows_][j] -= factor * t_[r][j];
    }
  }

  // Runs simplex iterations to optimality. Returns false if the objective is
  // unbounded above. `active` limits the columns allowed to enter the basis.
  bool maximize(std::size_t active) {
    for (;;) {
      std::size_t enter = active;
      for (std::size_t j = 0; j < active; ++j) {
        if (t_[rows_][j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter == active) return true;
      std::size_t leave = rows_;
      Rat best = 0;
      for (std::size_t r = 0; r < rows_; ++r) {
        if (t_[r][enter] <= 0) continue;
        const Rat ratio = t_[r][cols_] / t_[r][enter];
        if (leave == rows_ || ratio < best ||
            (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == rows_) return false;
      pivot(leave, enter);
    }
  }

 private:
  std::size_t rows_, cols_;
  std::vector<std::vector<Rat>> t_;
  std::vector<int> basis_;
};

}  // namespace

LpResult solve_lp(const std::vector<std::vector<Rat>>& rows, const std::vector<Rat>& rhs,
                  const std::vector<Rat>& objective) {
  const std::size_t m = rows.size();
  const std::size_t n = objective.size();
  if (rhs.size() != m) throw error("right-hand side size does not match the row count");
  for (const auto& row : rows)
    if (row.size() != n) throw error("row length does not match the objective length");

  // Phase one: real variables plus one artificial per row (sign-adjusted so
  // every right-hand side is nonnegative); minimize the artificial total.
  Tableau t(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = rhs[i] < 0;
    for (std::size_t j = 0; j < n; ++j) t.at(i, j) = flip ? -rows[i][j] : rows[i][j];
    t.rhs(i) = flip ? -rhs[i] : rhs[i];
    t.at(i, n + i) = 1;
    t.pivot(i, n + i);
  }
  for (std::size_t j = 0; j < m; ++j) t.cost(n + j) = -1;
  t.price_out();
  t.maximize(n + m);
  if (t.objective() != 0) return {LpStatus::kInfeasible, 0, {}};

  // Drive any artificial still basic (at value zero) out of the basis; a row
  // with no real pivot candidate is redundant and can stay put, since its
  // artificial is fixed at zero and never re-enters.
  for (std::size_t r = 0; r < m; ++r) {
    if (static_cast<std::size_t>(t.basis(r)) < n) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.at(r, j) != 0) {
        t.pivot(r, j);
        break;
      }
    }
  }

  // Phase two: the real objective, with the artificial columns frozen.
  for (std::size_t j = 0; j < n; ++j) t.cost(j) = objective[j];
  for (std::size_t j = 0; j < m; ++j) t.cost(n + j) = 0;
  t.objective() = 0;
  t.price_out();
  if (!t.maximize(n)) return {LpStatus::kUnbounded, 0, {}};

  LpResult out;
  out.status = LpStatus::kOptimal;
  out.point.assign(n, 0);
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t b = static_cast<std::size_t>(t.basis(r));
    if (b < n) out.point[b] = t.rhs(r);
  }
  out.value = 0;
  for (std::size_t j = 0; j < n; ++j) out.value += objective[j] * out.point[j];
  return out;
}

}  // namespace homsel
