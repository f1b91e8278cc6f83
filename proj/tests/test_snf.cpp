#include <doctest.h>

#include <algorithm>
#include <functional>
#include <vector>

#include "homsel/common.hpp"
#include "homsel/snf.hpp"

using namespace homsel;
using boost::multiprecision::abs;
using boost::multiprecision::gcd;

namespace {

// ---- independent oracle -----------------------------------------------------
// Determinantal-divisor characterization: the product d_1*...*d_k of the first
// k invariant factors equals the gcd of all k x k minors. Determinants are
// computed by cofactor expansion, independent of the production code.

Int oracle_det(const IntMat& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 1) return m.at(rows[0], cols[0]);
  Int acc = 0;
  int sign = 1;
  for (int i = 0; i < k; ++i) {
    std::vector<int> sub_rows;
    for (int r = 0; r < k; ++r) {
      if (r != i) sub_rows.push_back(rows[r]);
    }
    std::vector<int> sub_cols(cols.begin() + 1, cols.end());
    const Int& a = m.at(rows[i], cols[0]);
    if (a != 0) acc += sign * a * oracle_det(m, sub_rows, sub_cols);
    sign = -sign;
  }
  return acc;
}

void combinations(int n, int k, int start, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (static_cast<int>(cur.size()) == k) {
    emit(cur);
    return;
  }
  for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, emit);
    cur.pop_back();
  }
}

// gcd of all k x k minors (0 when every minor vanishes).
Int gcd_of_minors(const IntMat& m, int k) {
  Int g = 0;
  std::vector<int> rows, cols;
  combinations(m.rows(), k, 0, rows, [&](const std::vector<int>& r) {
    combinations(m.cols(), k, 0, cols, [&](const std::vector<int>& c) {
      g = gcd(g, Int(abs(oracle_det(m, r, c))));
    });
  });
  return g;
}

std::vector<Int> oracle_invariant_factors(const IntMat& m) {
  std::vector<Int> factors;
  Int prev = 1;
  const int bound = std::min(m.rows(), m.cols());
  for (int k = 1; k <= bound; ++k) {
    Int g = gcd_of_minors(m, k);
    if (g == 0) break;
    factors.push_back(g / prev);
    prev = g;
  }
  return factors;
}

IntMat random_matrix(Rng& rng, int rows, int cols, int lo, int hi) {
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m.at(i, j) = Int(rng.uniform_int(lo, hi));
  }
  return m;
}

void check_smith(const IntMat& m) {
  SmithResult r = smith_normal_form(m);
  // Shape and transform validity.
  REQUIRE(r.s.rows() == m.rows());
  REQUIRE(r.s.cols() == m.cols());
  CHECK(multiply(r.u, r.u_inv) == IntMat::identity(m.rows()));
  CHECK(multiply(r.u_inv, r.u) == IntMat::identity(m.rows()));
  CHECK(multiply(r.v, r.v_inv) == IntMat::identity(m.cols()));
  CHECK(multiply(r.v_inv, r.v) == IntMat::identity(m.cols()));
  // Unimodularity, via the independent cofactor determinant.
  if (m.rows() > 0) {
    std::vector<int> all(m.rows());
    for (int i = 0; i < m.rows(); ++i) all[i] = i;
    CHECK(abs(oracle_det(r.u, all, all)) == 1);
  }
  if (m.cols() > 0) {
    std::vector<int> all(m.cols());
    for (int j = 0; j < m.cols(); ++j) all[j] = j;
    CHECK(abs(oracle_det(r.v, all, all)) == 1);
  }
  // U * M * V = S exactly.
  CHECK(multiply(multiply(r.u, m), r.v) == r.s);
  // S is diagonal, nonnegative, with a divisibility chain and rank prefix.
  for (int i = 0; i < r.s.rows(); ++i) {
    for (int j = 0; j < r.s.cols(); ++j) {
      if (i != j) CHECK(r.s.at(i, j) == 0);
    }
  }
  const int bound = std::min(m.rows(), m.cols());
  REQUIRE(r.rank <= bound);
  REQUIRE(static_cast<int>(r.invariant_factors.size()) == r.rank);
  for (int i = 0; i < bound; ++i) {
    const Int& d = r.s.at(i, i);
    if (i < r.rank) {
      CHECK(d > 0);
      CHECK(d == r.invariant_factors[i]);
      if (i > 0) CHECK(d % r.s.at(i - 1, i - 1) == 0);
    } else {
      CHECK(d == 0);
    }
  }
  // Invariant factors match the determinantal-divisor oracle.
  CHECK(r.invariant_factors == oracle_invariant_factors(m));
}

}  // namespace

TEST_CASE("Smith normal form on structured matrices") {
  check_smith(IntMat(1, 1));
  check_smith(IntMat::identity(3));
  check_smith(IntMat(3, 5));

  IntMat diag(2, 2);
  diag.at(0, 0) = 4;
  diag.at(1, 1) = 6;
  SmithResult r = smith_normal_form(diag);
  REQUIRE(r.invariant_factors.size() == 2);
  CHECK(r.invariant_factors[0] == 2);
  CHECK(r.invariant_factors[1] == 12);
  check_smith(diag);

  IntMat m(2, 2);
  m.at(0, 0) = 2;
  m.at(0, 1) = 4;
  m.at(1, 0) = 6;
  m.at(1, 1) = 8;
  check_smith(m);

  // The classic presentation matrix of Z/2 + Z/6.
  IntMat t(2, 2);
  t.at(0, 0) = 2;
  t.at(0, 1) = 0;
  t.at(1, 0) = 2;
  t.at(1, 1) = 6;
  SmithResult rt = smith_normal_form(t);
  REQUIRE(rt.invariant_factors.size() == 2);
  CHECK(rt.invariant_factors[0] == 2);
  CHECK(rt.invariant_factors[1] == 6);
}

TEST_CASE("Smith normal form against the gcd-of-minors oracle") {
  Rng rng(21);
  for (int it = 0; it < 3000; ++it) {
    int rows = static_cast<int>(rng.uniform_int(1, 4));
    int cols = static_cast<int>(rng.uniform_int(1, 4));
    check_smith(random_matrix(rng, rows, cols, -5, 5));
  }
}

TEST_CASE("Smith normal form survives larger entries and shapes") {
  Rng rng(22);
  for (int it = 0; it < 50; ++it) {
    int rows = static_cast<int>(rng.uniform_int(1, 7));
    int cols = static_cast<int>(rng.uniform_int(1, 7));
    IntMat m = random_matrix(rng, rows, cols, -1000, 1000);
    SmithResult r = smith_normal_form(m);
    CHECK(multiply(multiply(r.u, m), r.v) == r.s);
    CHECK(multiply(r.u, r.u_inv) == IntMat::identity(rows));
    CHECK(multiply(r.v, r.v_inv) == IntMat::identity(cols));
    for (int i = 1; i < r.rank; ++i) {
      CHECK(r.s.at(i, i) % r.s.at(i - 1, i - 1) == 0);
    }
  }
}

TEST_CASE("integer linear solve") {
  Rng rng(23);
  int solvable_seen = 0;
  for (int it = 0; it < 500; ++it) {
    int rows = static_cast<int>(rng.uniform_int(1, 4));
    int cols = static_cast<int>(rng.uniform_int(1, 4));
    IntMat m = random_matrix(rng, rows, cols, -5, 5);
    // Solvable by construction.
    std::vector<Int> x(cols);
    for (Int& v : x) v = Int(rng.uniform_int(-4, 4));
    std::vector<Int> b(rows, Int(0));
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) b[i] += m.at(i, j) * x[j];
    }
    auto sol = solve_integer(m, b);
    REQUIRE(sol.has_value());
    for (int i = 0; i < rows; ++i) {
      Int acc = 0;
      for (int j = 0; j < cols; ++j) acc += m.at(i, j) * (*sol)[j];
      CHECK(acc == b[i]);
    }
    ++solvable_seen;
  }
  CHECK(solvable_seen == 500);

  // Unsolvable: 2x = 1 and a rank-deficient inconsistent system.
  IntMat two(1, 1);
  two.at(0, 0) = 2;
  CHECK(!solve_integer(two, {Int(1)}).has_value());
  CHECK(solve_integer(two, {Int(6)}).value()[0] == 3);
  IntMat rd(2, 1);
  rd.at(0, 0) = 1;
  rd.at(1, 0) = 1;
  CHECK(!solve_integer(rd, {Int(1), Int(2)}).has_value());
}

TEST_CASE("determinant matches the cofactor oracle") {
  Rng rng(24);
  for (int it = 0; it < 400; ++it) {
    int n = static_cast<int>(rng.uniform_int(1, 5));
    IntMat m = random_matrix(rng, n, n, -9, 9);
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    CHECK(determinant(m) == oracle_det(m, all, all));
  }
  CHECK(determinant(IntMat::identity(4)) == 1);
  CHECK(determinant(IntMat(3, 3)) == 0);
}
