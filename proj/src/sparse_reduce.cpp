#include "homsel/sparse_reduce.hpp"

#include <algorithm>
#include <type_traits>

#include "homsel/snf.hpp"

namespace homsel {

namespace {

template <typename T>
T mul(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, long long>) {
    return checked_mul(a, b);
  } else {
    return a * b;
  }
}

template <typename T>
T add(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, long long>) {
    return checked_add(a, b);
  } else {
    return a + b;
  }
}

template <typename T>
T sub(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, long long>) {
    return checked_sub(a, b);
  } else {
    return a - b;
  }
}

// The elimination core, parameterized over the scalar type. Columns are
// sorted (row, value) vectors; every stored entry lies in an active row and
// an active column.
template <typename T>
struct Core {
  int rows, cols;
  std::vector<std::vector<std::pair<int, T>>> col;
  std::vector<int> row_nnz, col_nnz;
  std::vector<char> row_active, col_active;
  std::vector<std::vector<int>> row_cols;  // lazy: may hold stale column ids
  std::vector<std::vector<T>> cz;          // carried columns (dense, length rows)
  std::vector<std::vector<T>> cr;          // carried rows (dense, length cols)

  // Bucket queue of candidate pivot columns keyed by fill count.
  static constexpr int kMaxBucket = 64;
  std::vector<std::vector<int>> buckets;
  long long pivot_count = 0;

  Core(int r, int c) : rows(r), cols(c) {
    col.resize(cols);
    row_nnz.assign(rows, 0);
    col_nnz.assign(cols, 0);
    row_active.assign(rows, 1);
    col_active.assign(cols, 1);
    row_cols.resize(rows);
    buckets.resize(kMaxBucket + 1);
  }

  void load(const std::vector<std::tuple<int, int, long long>>& entries,
            const std::vector<std::vector<std::pair<int, long long>>>& carried_cols,
            const std::vector<std::vector<std::pair<int, long long>>>& carried_rows) {
    std::vector<std::tuple<int, int, long long>> sorted = entries;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
      return std::get<0>(a) < std::get<0>(b);
    });
    std::size_t i = 0;
    while (i < sorted.size()) {
      const int r = std::get<0>(sorted[i]);
      const int c = std::get<1>(sorted[i]);
      T acc(0);
      while (i < sorted.size() && std::get<0>(sorted[i]) == r && std::get<1>(sorted[i]) == c) {
        acc = add(acc, T(std::get<2>(sorted[i])));
        ++i;
      }
      if (acc == 0) continue;
      col[c].emplace_back(r, std::move(acc));
      ++col_nnz[c];
      ++row_nnz[r];
      row_cols[r].push_back(c);
    }
    for (int c = 0; c < cols; ++c) {
      if (col_nnz[c] > 0) push_bucket(c);
    }
    for (const auto& z : carried_cols) {
      std::vector<T> dense(rows, T(0));
      for (const auto& [r, v] : z) dense[r] = T(v);
      cz.push_back(std::move(dense));
    }
    for (const auto& l : carried_rows) {
      std::vector<T> dense(cols, T(0));
      for (const auto& [c, v] : l) dense[c] = T(v);
      cr.push_back(std::move(dense));
    }
  }

  void push_bucket(int c) { buckets[std::min(col_nnz[c], kMaxBucket)].push_back(c); }

  // Binary search for a row inside a column.
  static typename std::vector<std::pair<int, T>>::iterator find_row(
      std::vector<std::pair<int, T>>& v, int r) {
    auto it = std::lower_bound(v.begin(), v.end(), r,
                               [](const std::pair<int, T>& e, int key) { return e.first < key; });
    return it;
  }

  // col[k] -= f * col[p]; maintains nnz counts and the lazy row index.
  void column_axpy(int k, int p, const T& f) {
    const auto& src = col[p];
    auto& dst = col[k];
    std::vector<std::pair<int, T>> out;
    out.reserve(dst.size() + src.size());
    std::size_t a = 0, b = 0;
    while (a < dst.size() || b < src.size()) {
      if (b == src.size() || (a < dst.size() && dst[a].first < src[b].first)) {
        out.push_back(dst[a]);
        ++a;
      } else if (a == dst.size() || src[b].first < dst[a].first) {
        T v = sub(T(0), mul(f, src[b].second));
        if (v != 0) {
          out.emplace_back(src[b].first, std::move(v));
          ++row_nnz[src[b].first];
          row_cols[src[b].first].push_back(k);
        }
        ++b;
      } else {
        T v = sub(dst[a].second, mul(f, src[b].second));
        if (v != 0) {
          out.emplace_back(dst[a].first, std::move(v));
        } else {
          --row_nnz[dst[a].first];
        }
        ++a;
        ++b;
      }
    }
    dst = std::move(out);
    col_nnz[k] = static_cast<int>(dst.size());
    if (col_nnz[k] > 0) push_bucket(k);
  }

  // Lowest-fill candidate columns that still contain a unit entry.
  bool select_pivot(int& pr, int& pc, T& ps) {
    struct Cand {
      int r, c;
      T s;
      long long score;
    };
    std::vector<Cand> cands;
    std::vector<int> requeue;
    for (int b = 0; b <= kMaxBucket && cands.size() < 8; ++b) {
      auto& bucket = buckets[b];
      while (!bucket.empty() && cands.size() < 8) {
        int c = bucket.back();
        bucket.pop_back();
        if (!col_active[c] || col_nnz[c] == 0) continue;
        if (std::min(col_nnz[c], kMaxBucket) != b) continue;  // stale position
        // Best unit entry in this column by Markowitz score.
        long long best = -1;
        int best_r = -1;
        T best_s{};
        for (const auto& [r, v] : col[c]) {
          if (v == 1 || v == -1) {
            long long score =
                static_cast<long long>(row_nnz[r] - 1) * static_cast<long long>(col_nnz[c] - 1);
            if (best < 0 || score < best || (score == best && r < best_r)) {
              best = score;
              best_r = r;
              best_s = v;
            }
          }
        }
        if (best < 0) continue;  // parked: re-enqueued only when modified
        cands.push_back({best_r, c, best_s, best});
        requeue.push_back(c);
      }
    }
    for (int c : requeue) push_bucket(c);
    if (cands.empty()) return false;
    const Cand* best = &cands[0];
    for (const Cand& cand : cands) {
      if (cand.score < best->score ||
          (cand.score == best->score &&
           (cand.c < best->c || (cand.c == best->c && cand.r < best->r)))) {
        best = &cand;
      }
    }
    pr = best->r;
    pc = best->c;
    ps = best->s;
    return true;
  }

  void eliminate(int i, int p, const T& s) {
    // Column phase: clear row i outside the pivot column. Transforms the
    // carried rows.
    std::vector<int> pending;
    pending.swap(row_cols[i]);
    for (int k : pending) {
      if (k == p || !col_active[k]) continue;
      auto it = find_row(col[k], i);
      if (it == col[k].end() || it->first != i || it->second == 0) continue;
      T f = mul(it->second, s);  // a_ik / a_ip with a_ip = s = +-1
      column_axpy(k, p, f);
      for (auto& l : cr) l[k] = sub(l[k], mul(f, l[p]));
    }
    // Row phase: clear the pivot column. Row i is zero outside the pivot
    // column now, so these row operations only touch column p and the
    // carried columns.
    for (const auto& [r, v] : col[p]) {
      if (r == i) continue;
      T f = mul(v, s);
      for (auto& z : cz) z[r] = sub(z[r], mul(f, z[i]));
      --row_nnz[r];
    }
    --row_nnz[i];
    col[p].clear();
    col_nnz[p] = 0;
    col_active[p] = 0;
    row_active[i] = 0;
    ++pivot_count;
  }

  void run() {
    int pr = 0, pc = 0;
    T ps{};
    while (select_pivot(pr, pc, ps)) eliminate(pr, pc, ps);
  }
};

}  // namespace

SparseReducer::SparseReducer(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw error("SparseReducer: negative dimensions");
}

void SparseReducer::add(int row, int col, long long coeff) {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_)
    throw error("SparseReducer::add: position out of range");
  if (coeff != 0) entries_.emplace_back(row, col, coeff);
}

int SparseReducer::add_carried_column(const std::vector<std::pair<int, long long>>& entries) {
  for (const auto& [r, v] : entries) {
    (void)v;
    if (r < 0 || r >= rows_) throw error("SparseReducer: carried column index out of range");
  }
  carried_cols_.push_back(entries);
  return static_cast<int>(carried_cols_.size()) - 1;
}

int SparseReducer::add_carried_row(const std::vector<std::pair<int, long long>>& entries) {
  for (const auto& [c, v] : entries) {
    (void)v;
    if (c < 0 || c >= cols_) throw error("SparseReducer: carried row index out of range");
  }
  carried_rows_.push_back(entries);
  return static_cast<int>(carried_rows_.size()) - 1;
}

std::vector<Int> SparseReducer::Result::nontrivial_factors() const {
  std::vector<Int> out;
  for (const Int& d : invariant_factors) {
    if (d >= 2) out.push_back(d);
  }
  return out;
}

std::optional<Int> SparseReducer::Result::order_from(const std::vector<Constraint>& cs) {
  Int order = 1;
  for (const Constraint& c : cs) {
    if (c.modulus == 0) {
      if (c.value != 0) return std::nullopt;
      continue;
    }
    Int g = boost::multiprecision::gcd(Int(boost::multiprecision::abs(c.value)), c.modulus);
    order = boost::multiprecision::lcm(order, Int(c.modulus / g));
  }
  return order;
}

bool SparseReducer::Result::vanishes(const std::vector<Constraint>& cs) {
  for (const Constraint& c : cs) {
    if (c.modulus == 0) {
      if (c.value != 0) return false;
    } else if (c.value % c.modulus != 0) {
      return false;
    }
  }
  return true;
}

namespace {

template <typename T>
SparseReducer::Result finish(Core<T>& core, int dense_limit) {
  SparseReducer::Result out;
  out.rank = core.pivot_count;

  // Split the active part into genuinely nonzero rows/columns (the dense
  // residual) and zero ones (already diagonalized with a zero entry).
  std::vector<int> res_rows, res_cols;
  for (int r = 0; r < core.rows; ++r) {
    if (core.row_active[r] && core.row_nnz[r] > 0) res_rows.push_back(r);
  }
  for (int c = 0; c < core.cols; ++c) {
    if (core.col_active[c] && core.col_nnz[c] > 0) res_cols.push_back(c);
  }
  if (static_cast<int>(res_rows.size()) > dense_limit ||
      static_cast<int>(res_cols.size()) > dense_limit) {
    throw error("SparseReducer: dense residual exceeds limit (" +
                std::to_string(res_rows.size()) + " x " + std::to_string(res_cols.size()) + ")");
  }

  IntMat m(static_cast<int>(res_rows.size()), static_cast<int>(res_cols.size()));
  std::vector<int> row_slot(core.rows, -1);
  for (std::size_t i = 0; i < res_rows.size(); ++i) row_slot[res_rows[i]] = static_cast<int>(i);
  for (std::size_t j = 0; j < res_cols.size(); ++j) {
    for (const auto& [r, v] : core.col[res_cols[j]]) {
      m.at(row_slot[r], static_cast<int>(j)) = Int(v);
    }
  }
  SmithResult snf = smith_normal_form(m);
  out.rank += snf.rank;
  out.invariant_factors.assign(static_cast<std::size_t>(core.pivot_count), Int(1));
  for (const Int& d : snf.invariant_factors) out.invariant_factors.push_back(d);

  // Carried columns: unit sparse pivots impose no condition; dense pivot
  // rows impose divisibility; all remaining rows demand exact vanishing.
  for (const auto& z : core.cz) {
    std::vector<SparseReducer::Constraint> cs;
    std::vector<Int> slice(res_rows.size());
    for (std::size_t i = 0; i < res_rows.size(); ++i) slice[i] = Int(z[res_rows[i]]);
    // Transform by the dense row operations.
    std::vector<Int> transformed(res_rows.size(), Int(0));
    for (int i = 0; i < snf.u.rows(); ++i) {
      Int acc = 0;
      for (int j = 0; j < snf.u.cols(); ++j) {
        if (snf.u.at(i, j) != 0) acc += snf.u.at(i, j) * slice[j];
      }
      transformed[i] = acc;
    }
    for (int i = 0; i < static_cast<int>(res_rows.size()); ++i) {
      if (i < snf.rank) {
        if (snf.invariant_factors[i] > 1) cs.push_back({snf.invariant_factors[i], transformed[i]});
      } else if (transformed[i] != 0) {
        cs.push_back({Int(0), transformed[i]});
      }
    }
    for (int r = 0; r < core.rows; ++r) {
      if (core.row_active[r] && core.row_nnz[r] == 0 && z[r] != 0) {
        cs.push_back({Int(0), Int(z[r])});
      }
    }
    out.column_constraints.push_back(std::move(cs));
  }

  // Carried rows: gather gcd over the kernel columns, i.e. zero active
  // columns plus dense columns beyond the dense rank.
  for (const auto& l : core.cr) {
    Int g = 0;
    for (int c = 0; c < core.cols; ++c) {
      if (core.col_active[c] && core.col_nnz[c] == 0 && l[c] != 0) {
        g = boost::multiprecision::gcd(g, Int(boost::multiprecision::abs(Int(l[c]))));
      }
    }
    // Transform the residual slice by the dense column operations.
    if (!res_cols.empty()) {
      for (int j = snf.rank; j < snf.v.cols(); ++j) {
        Int acc = 0;
        for (int i = 0; i < snf.v.rows(); ++i) {
          if (snf.v.at(i, j) != 0) acc += Int(l[res_cols[i]]) * snf.v.at(i, j);
        }
        if (acc != 0) g = boost::multiprecision::gcd(g, Int(boost::multiprecision::abs(acc)));
      }
    }
    out.row_kernel_gcds.push_back(g);
  }
  return out;
}

template <typename T>
SparseReducer::Result run_reduction(int rows, int cols,
                                    const std::vector<std::tuple<int, int, long long>>& entries,
                                    const std::vector<std::vector<std::pair<int, long long>>>& zc,
                                    const std::vector<std::vector<std::pair<int, long long>>>& zr,
                                    int dense_limit) {
  Core<T> core(rows, cols);
  core.load(entries, zc, zr);
  core.run();
  return finish(core, dense_limit);
}

}  // namespace

SparseReducer::Result SparseReducer::reduce(int dense_limit) const {
  try {
    return run_reduction<long long>(rows_, cols_, entries_, carried_cols_, carried_rows_,
                                    dense_limit);
  } catch (const int64_overflow&) {
    return run_reduction<Int>(rows_, cols_, entries_, carried_cols_, carried_rows_, dense_limit);
  }
}

}  // namespace homsel
