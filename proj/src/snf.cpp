#include "homsel/snf.hpp"

#include <algorithm>
#include <cstdlib>

namespace homsel {

IntMat IntMat::identity(int n) {
  IntMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool IntMat::is_zero() const {
  for (const Int& x : a_)
    if (x != 0) return false;
  return true;
}

IntMat IntMat::transpose() const {
  IntMat t(cols_, rows_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

IntMat multiply(const IntMat& a, const IntMat& b) {
  if (a.cols() != b.rows()) throw error("multiply: shape mismatch");
  IntMat out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Int& aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        const Int& bkj = b.at(k, j);
        if (bkj != 0) out.at(i, j) += aik * bkj;
      }
    }
  return out;
}

namespace {

// Elementary-operation bookkeeping: every operation is applied to the work
// matrix and mirrored on u/u_inv (row ops) or v/v_inv (column ops) so that
// u*m*v == s holds exactly at every step.
struct SnfWork {
  IntMat s, u, u_inv, v, v_inv;

  void row_swap(int r1, int r2) {
    if (r1 == r2) return;
    for (int c = 0; c < s.cols(); ++c) std::swap(s.at(r1, c), s.at(r2, c));
    for (int c = 0; c < u.cols(); ++c) std::swap(u.at(r1, c), u.at(r2, c));
    for (int r = 0; r < u_inv.rows(); ++r) std::swap(u_inv.at(r, r1), u_inv.at(r, r2));
  }
  void row_axpy(int dst, int src, const Int& f) {  // row[dst] += f * row[src]
    if (f == 0) return;
    for (int c = 0; c < s.cols(); ++c) s.at(dst, c) += f * s.at(src, c);
    for (int c = 0; c < u.cols(); ++c) u.at(dst, c) += f * u.at(src, c);
    for (int r = 0; r < u_inv.rows(); ++r) u_inv.at(r, src) -= f * u_inv.at(r, dst);
  }
  void row_negate(int r) {
    for (int c = 0; c < s.cols(); ++c) s.at(r, c) = -s.at(r, c);
    for (int c = 0; c < u.cols(); ++c) u.at(r, c) = -u.at(r, c);
    for (int rr = 0; rr < u_inv.rows(); ++rr) u_inv.at(rr, r) = -u_inv.at(rr, r);
  }
  void col_swap(int c1, int c2) {
    if (c1 == c2) return;
    for (int r = 0; r < s.rows(); ++r) std::swap(s.at(r, c1), s.at(r, c2));
    for (int r = 0; r < v.rows(); ++r) std::swap(v.at(r, c1), v.at(r, c2));
    for (int c = 0; c < v_inv.cols(); ++c) std::swap(v_inv.at(c1, c), v_inv.at(c2, c));
  }
  void col_axpy(int dst, int src, const Int& f) {  // col[dst] += f * col[src]
    if (f == 0) return;
    for (int r = 0; r < s.rows(); ++r) s.at(r, dst) += f * s.at(r, src);
    for (int r = 0; r < v.rows(); ++r) v.at(r, dst) += f * v.at(r, src);
    for (int c = 0; c < v_inv.cols(); ++c) v_inv.at(src, c) -= f * v_inv.at(dst, c);
  }
};

Int abs_int(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace

SmithResult smith_normal_form(const IntMat& m) {
  SnfWork w;
  w.s = m;
  w.u = IntMat::identity(m.rows());
  w.u_inv = IntMat::identity(m.rows());
  w.v = IntMat::identity(m.cols());
  w.v_inv = IntMat::identity(m.cols());

  const int bound = std::min(m.rows(), m.cols());
  int t = 0;
  while (t < bound) {
    // Find the submatrix entry of least nonzero magnitude as the pivot.
    int pr = -1, pc = -1;
    Int best;
    for (int r = t; r < m.rows(); ++r)
      for (int c = t; c < m.cols(); ++c) {
        const Int& x = w.s.at(r, c);
        if (x == 0) continue;
        Int ax = abs_int(x);
        if (pr < 0 || ax < best) {
          best = ax;
          pr = r;
          pc = c;
        }
      }
    if (pr < 0) break;  // submatrix is zero
    w.row_swap(t, pr);
    w.col_swap(t, pc);

    for (;;) {
      // Reduce the pivot column, restarting with a smaller pivot whenever a
      // nonzero remainder appears.
      bool changed = false;
      for (int r = t + 1; r < m.rows(); ++r) {
        if (w.s.at(r, t) == 0) continue;
        const Int q = w.s.at(r, t) / w.s.at(t, t);
        w.row_axpy(r, t, -q);
        if (w.s.at(r, t) != 0) {
          w.row_swap(t, r);
          changed = true;
          break;
        }
      }
      if (changed) continue;
      for (int c = t + 1; c < m.cols(); ++c) {
        if (w.s.at(t, c) == 0) continue;
        const Int q = w.s.at(t, c) / w.s.at(t, t);
        w.col_axpy(c, t, -q);
        if (w.s.at(t, c) != 0) {
          w.col_swap(t, c);
          changed = true;
          break;
        }
      }
      if (changed) continue;
      // Row and column are clear; make the pivot divide the rest of the
      // submatrix so the invariant factors come out in a divisibility chain.
      bool fixed = false;
      for (int r = t + 1; r < m.rows() && !fixed; ++r)
        for (int c = t + 1; c < m.cols() && !fixed; ++c)
          if (w.s.at(r, c) % w.s.at(t, t) != 0) {
            w.row_axpy(t, r, 1);
            fixed = true;
          }
      if (!fixed) break;
    }
    if (w.s.at(t, t) < 0) w.row_negate(t);
    ++t;
  }

  SmithResult res;
  res.rank = t;
  res.invariant_factors.reserve(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) res.invariant_factors.push_back(w.s.at(i, i));
  res.s = std::move(w.s);
  res.u = std::move(w.u);
  res.u_inv = std::move(w.u_inv);
  res.v = std::move(w.v);
  res.v_inv = std::move(w.v_inv);
  return res;
}

std::optional<std::vector<Int>> solve_integer(const IntMat& m, const std::vector<Int>& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw error("solve_integer: rhs size mismatch");
  const SmithResult snf = smith_normal_form(m);
  // y = u * b
  std::vector<Int> y(static_cast<std::size_t>(m.rows()));
  for (int r = 0; r < m.rows(); ++r) {
    Int acc = 0;
    for (int c = 0; c < m.rows(); ++c)
      if (snf.u.at(r, c) != 0 && b[static_cast<std::size_t>(c)] != 0)
        acc += snf.u.at(r, c) * b[static_cast<std::size_t>(c)];
    y[static_cast<std::size_t>(r)] = acc;
  }
  std::vector<Int> xp(static_cast<std::size_t>(m.cols()));
  for (int i = 0; i < m.rows(); ++i) {
    if (i < snf.rank) {
      if (y[static_cast<std::size_t>(i)] % snf.invariant_factors[static_cast<std::size_t>(i)] != 0)
        return std::nullopt;
      xp[static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(i)] / snf.invariant_factors[static_cast<std::size_t>(i)];
    } else if (y[static_cast<std::size_t>(i)] != 0) {
      return std::nullopt;
    }
  }
  // x = v * xp
  std::vector<Int> x(static_cast<std::size_t>(m.cols()));
  for (int r = 0; r < m.cols(); ++r) {
    Int acc = 0;
    for (int c = 0; c < m.cols(); ++c)
      if (snf.v.at(r, c) != 0 && xp[static_cast<std::size_t>(c)] != 0)
        acc += snf.v.at(r, c) * xp[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc;
  }
  return x;
}

Int determinant(const IntMat& m) {
  if (m.rows() != m.cols()) throw error("determinant: matrix not square");
  const int n = m.rows();
  if (n == 0) return 1;
  IntMat a = m;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a.at(k, k) == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (a.at(r, k) != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(a.at(k, c), a.at(swap_row, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j);
        a.at(i, j) = num / prev;  // exact by Bareiss' identity
      }
    prev = a.at(k, k);
  }
  return sign > 0 ? a.at(n - 1, n - 1) : Int(-a.at(n - 1, n - 1));
}

}  // namespace homsel
