#pragma once

// Exact integer elimination for large sparse matrices. Unit pivots are
// eliminated sparsely (Markowitz-style ordering); whatever remains is finished
// densely by the Smith normal form. Besides rank and invariant factors, the
// reduction can transport extra data through the elimination:
//
//  - carried columns transform under the row operations; the resulting
//    constraints decide whether a vector lies in the column lattice and give
//    the order of its class modulo the lattice;
//  - carried rows transform under the column operations; the result is the
//    gcd of the functional's values over the kernel of the matrix.
//
// Arithmetic runs in checked 64-bit integers and transparently restarts in
// arbitrary precision on overflow.

#include <optional>
#include <tuple>
#include <utility>
#include <vector>

#include "homsel/common.hpp"

namespace homsel {

class SparseReducer {
 public:
  SparseReducer(int rows, int cols);

  // Accumulates coeff at (row, col); duplicate positions sum.
  void add(int row, int col, long long coeff);
  // Registers a vector of length `rows`, sparse form; returns its slot.
  int add_carried_column(const std::vector<std::pair<int, long long>>& entries);
  // Registers a functional of length `cols`, sparse form; returns its slot.
  int add_carried_row(const std::vector<std::pair<int, long long>>& entries);

  // One congruence per constrained coordinate: value must be divisible by
  // modulus, where modulus == 0 demands value == 0 exactly.
  struct Constraint {
    Int modulus;
    Int value;
  };

  struct Result {
    long long rank = 0;
    // Full divisibility chain d_1 | d_2 | ... | d_rank.
    std::vector<Int> invariant_factors;
    // Per carried column, the congruences its class must satisfy.
    std::vector<std::vector<Constraint>> column_constraints;
    // Per carried row, gcd of its values over the kernel (0 when the kernel
    // is trivial or the functional vanishes on it).
    std::vector<Int> row_kernel_gcds;

    // Invariant factors >= 2 (the torsion part of the cokernel).
    std::vector<Int> nontrivial_factors() const;
    // Smallest positive r with r*z in the column lattice, or nullopt.
    static std::optional<Int> order_from(const std::vector<Constraint>& cs);
    // True iff z itself lies in the column lattice.
    static bool vanishes(const std::vector<Constraint>& cs);
  };

  // dense_limit bounds the rows/cols of the residual block handed to the
  // dense completion; exceeding it is an error rather than a silent stall.
  Result reduce(int dense_limit = 4096) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }

 private:
  int rows_;
  int cols_;
  std::vector<std::tuple<int, int, long long>> entries_;
  std::vector<std::vector<std::pair<int, long long>>> carried_cols_;
  std::vector<std::vector<std::pair<int, long long>>> carried_rows_;
};

}  // namespace homsel
