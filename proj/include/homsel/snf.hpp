#pragma once

// Dense exact integer matrices and Smith normal form with unimodular
// transforms. Sizes here are desk scale (CW complexes, homology
// presentations); large cubical systems go through the sparse reducer and
// only their residuals land here.

#include <optional>
#include <vector>

#include "homsel/common.hpp"

namespace homsel {

// Row-major dense integer matrix with arbitrary-precision entries.
class IntMat {
 public:
  IntMat() : rows_(0), cols_(0) {}
  IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    if (rows < 0 || cols < 0) throw error("matrix dimensions must be non-negative");
  }
  static IntMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Int& at(int r, int c) { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)]; }
  const Int& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c)]; }

  bool operator==(const IntMat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
  bool is_zero() const;

  IntMat transpose() const;

 private:
  int rows_, cols_;
  std::vector<Int> a_;
};

IntMat multiply(const IntMat& a, const IntMat& b);

// Result of the Smith normal form: u * m * v = s with s diagonal,
// non-negative, each invariant factor dividing the next, and u, v unimodular.
// u_inv and v_inv are the exact inverses of u and v.
struct SmithResult {
  IntMat s;
  IntMat u, u_inv;
  IntMat v, v_inv;
  int rank = 0;
  // The positive diagonal entries d_1 | d_2 | ... (length == rank).
  std::vector<Int> invariant_factors;
};

SmithResult smith_normal_form(const IntMat& m);

// Solves m * x = b over the integers. Returns a particular solution when one
// exists, std::nullopt otherwise.
std::optional<std::vector<Int>> solve_integer(const IntMat& m, const std::vector<Int>& b);

// Determinant by fraction-free Gaussian elimination (used by tests/oracles).
Int determinant(const IntMat& m);

}  // namespace homsel
