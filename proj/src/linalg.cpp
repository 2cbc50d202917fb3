#include "kcob/linalg.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "kcob/laurent.hpp"

namespace kcob {

ZMat zmat(size_t rows, size_t cols) { return ZMat(rows, std::vector<mpz_class>(cols, 0)); }

namespace {

ZMat identity(size_t n) {
  ZMat I = zmat(n, n);
  for (size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

struct SnfWork {
  ZMat& A;
  int mod;
  bool tr;
  ZMat U, Uinv, V, Vinv;
  size_t m, n;

  void norm(mpz_class& x) const {
    if (mod) {
      x %= mod;
      if (x < 0) x += mod;
    }
  }

  void swap_rows(size_t i, size_t j) {
    if (i == j) return;
    std::swap(A[i], A[j]);
    if (tr) {
      std::swap(U[i], U[j]);
      for (auto& row : Uinv) std::swap(row[i], row[j]);
    }
  }
  void swap_cols(size_t i, size_t j) {
    if (i == j) return;
    for (auto& row : A) std::swap(row[i], row[j]);
    if (tr) {
      for (auto& row : V) std::swap(row[i], row[j]);
      std::swap(Vinv[i], Vinv[j]);
    }
  }
  // row i += c * row j
  void add_row(size_t i, size_t j, const mpz_class& c) {
    if (c == 0) return;
    for (size_t k = 0; k < n; ++k) {
      if (A[j][k] == 0) continue;
      A[i][k] += c * A[j][k];
      norm(A[i][k]);
    }
    if (tr) {
      for (size_t k = 0; k < m; ++k) {
        if (U[j][k] != 0) {
          U[i][k] += c * U[j][k];
          norm(U[i][k]);
        }
        // Uinv: col j -= c * col i
        if (Uinv[k][i] != 0) {
          Uinv[k][j] -= c * Uinv[k][i];
          norm(Uinv[k][j]);
        }
      }
    }
  }
  // col i += c * col j
  void add_col(size_t i, size_t j, const mpz_class& c) {
    if (c == 0) return;
    for (size_t k = 0; k < m; ++k) {
      if (A[k][j] == 0) continue;
      A[k][i] += c * A[k][j];
      norm(A[k][i]);
    }
    if (tr) {
      for (size_t k = 0; k < n; ++k) {
        if (V[k][j] != 0) {
          V[k][i] += c * V[k][j];
          norm(V[k][i]);
        }
        // Vinv: row j -= c * row i
        if (Vinv[i][k] != 0) {
          Vinv[j][k] -= c * Vinv[i][k];
          norm(Vinv[j][k]);
        }
      }
    }
  }
  void negate_row(size_t i) {
    for (auto& x : A[i]) x = -x;
    if (tr) {
      for (auto& x : U[i]) x = -x;
      for (auto& row : Uinv) row[i] = -row[i];
    }
  }
};

}  // namespace

SNF smith_normal_form(ZMat A, size_t ncols, int modulus, bool transforms) {
  SNF out;
  size_t m = A.size(), n = ncols;
  SnfWork w{A, modulus, transforms, {}, {}, {}, {}, m, n};
  if (transforms) {
    w.U = identity(m);
    w.Uinv = identity(m);
    w.V = identity(n);
    w.Vinv = identity(n);
  }
  for (auto& row : A)
    for (auto& x : row) w.norm(x);
  size_t t = 0;
  while (t < m && t < n) {
    // smallest nonzero entry in the trailing block
    size_t pi = m, pj = n;
    mpz_class best;
    for (size_t i = t; i < m; ++i)
      for (size_t j = t; j < n; ++j) {
        if (A[i][j] == 0) continue;
        mpz_class a = abs(A[i][j]);
        if (pi == m || a < best) {
          best = a;
          pi = i;
          pj = j;
          if (best == 1) goto found;
        }
      }
  found:
    if (pi == m) break;
    w.swap_rows(t, pi);
    w.swap_cols(t, pj);
    for (;;) {
      bool again = false;
      for (size_t i = t + 1; i < m; ++i) {
        if (A[i][t] == 0) continue;
        mpz_class q;
        if (modulus) q = A[i][t];  // pivot is 1 over F2
        else mpz_fdiv_q(q.get_mpz_t(), A[i][t].get_mpz_t(), A[t][t].get_mpz_t());
        w.add_row(i, t, -q);
        if (A[i][t] != 0) {
          w.swap_rows(t, i);
          again = true;
        }
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (A[t][j] == 0) continue;
        mpz_class q;
        if (modulus) q = A[t][j];
        else mpz_fdiv_q(q.get_mpz_t(), A[t][j].get_mpz_t(), A[t][t].get_mpz_t());
        w.add_col(j, t, -q);
        if (A[t][j] != 0) {
          w.swap_cols(t, j);
          again = true;
        }
      }
      if (again) continue;
      // divisibility of the trailing block
      bool fixed = false;
      if (!modulus && abs(A[t][t]) != 1) {
        for (size_t i = t + 1; i < m && !fixed; ++i)
          for (size_t j = t + 1; j < n; ++j)
            if (A[i][j] % A[t][t] != 0) {
              w.add_row(t, i, 1);
              fixed = true;
              break;
            }
      }
      if (!fixed) break;
    }
    if (A[t][t] < 0) w.negate_row(t);
    out.diag.push_back(A[t][t]);
    ++t;
  }
  if (transforms) {
    out.U = std::move(w.U);
    out.Uinv = std::move(w.Uinv);
    out.V = std::move(w.V);
    out.Vinv = std::move(w.Vinv);
  }
  return out;
}

namespace {

int64_t reduce_mod(int64_t x, int mod) {
  if (!mod) return x;
  x %= mod;
  return x < 0 ? x + mod : x;
}

}  // namespace

RankTorsion sparse_rank_torsion(SparseColumns M, int modulus) {
  RankTorsion res;
  const size_t ncols = M.cols.size();
  std::vector<std::vector<uint32_t>> row_cols(M.nrows);
  std::vector<char> col_alive(ncols, 1), row_alive(M.nrows, 1);
  for (size_t c = 0; c < ncols; ++c) {
    auto& col = M.cols[c];
    for (auto& e : col) e.second = reduce_mod(e.second, modulus);
    col.erase(std::remove_if(col.begin(), col.end(), [](auto& e) { return e.second == 0; }), col.end());
    for (auto& e : col) row_cols[e.first].push_back(c);
  }
  auto row_count = [&](uint32_t r) { return row_cols[r].size(); };
  using Item = std::pair<size_t, uint32_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (size_t c = 0; c < ncols; ++c)
    if (!M.cols[c].empty()) heap.push({M.cols[c].size(), c});

  auto is_unit = [&](int64_t v) { return v == 1 || v == -1 || (modulus && v != 0); };
  bool overflow = false;
  std::vector<std::pair<uint32_t, int64_t>> tmp;
  while (!heap.empty() && !overflow) {
    auto [sz, c] = heap.top();
    heap.pop();
    if (!col_alive[c] || M.cols[c].size() != sz || sz == 0) continue;
    // unit entry with the sparsest row
    int best = -1;
    size_t best_cnt = 0;
    for (size_t k = 0; k < M.cols[c].size(); ++k) {
      auto [r, v] = M.cols[c][k];
      if (!is_unit(v)) continue;
      size_t cnt = row_count(r);
      if (best < 0 || cnt < best_cnt) best = static_cast<int>(k), best_cnt = cnt;
    }
    if (best < 0) continue;  // left for the dense stage
    auto [pr, pv] = M.cols[c][best];
    const auto pivot_col = M.cols[c];
    // row_cols may be stale; dedupe and check membership
    std::vector<uint32_t> others = row_cols[pr];
    std::sort(others.begin(), others.end());
    others.erase(std::unique(others.begin(), others.end()), others.end());
    try {
      for (uint32_t c2 : others) {
        if (c2 == c || !col_alive[c2]) continue;
        auto& col2 = M.cols[c2];
        auto it = std::lower_bound(col2.begin(), col2.end(), std::make_pair(pr, INT64_MIN));
        if (it == col2.end() || it->first != pr) continue;
        // col2 -= (v2 / pv) * pivot_col ; pv = +-1 or unit mod p
        int64_t f = it->second;
        if (modulus) {
          // pv is invertible mod 2
          f = reduce_mod(f, modulus);
        } else {
          f = checked_mul(f, pv);  // pv = +-1 so 1/pv = pv
        }
        tmp.clear();
        size_t i = 0, j = 0;
        while (i < col2.size() || j < pivot_col.size()) {
          if (j == pivot_col.size() || (i < col2.size() && col2[i].first < pivot_col[j].first)) {
            tmp.push_back(col2[i++]);
          } else if (i == col2.size() || pivot_col[j].first < col2[i].first) {
            int64_t v = reduce_mod(checked_mul(-f, pivot_col[j].second), modulus);
            if (v) {
              tmp.push_back({pivot_col[j].first, v});
              row_cols[pivot_col[j].first].push_back(c2);
            }
            ++j;
          } else {
            int64_t v = reduce_mod(checked_add(col2[i].second, checked_mul(-f, pivot_col[j].second)), modulus);
            if (v) tmp.push_back({col2[i].first, v});
            ++i, ++j;
          }
        }
        col2.swap(tmp);
        heap.push({col2.size(), c2});
      }
    } catch (const std::overflow_error&) {
      overflow = true;
      break;
    }
    col_alive[c] = 0;
    row_alive[pr] = 0;
    ++res.rank;
    // prune stale row references occasionally
    for (auto& [r, v] : pivot_col) {
      (void)v;
      auto& lst = row_cols[r];
      if (lst.size() > 64) {
        std::vector<uint32_t> keep;
        for (uint32_t c2 : lst)
          if (col_alive[c2] && std::binary_search(M.cols[c2].begin(), M.cols[c2].end(), std::make_pair(r, INT64_MIN),
                                                  [](auto& a, auto& b) { return a.first < b.first; }))
            keep.push_back(c2);
        std::sort(keep.begin(), keep.end());
        keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
        lst.swap(keep);
      }
    }
  }
  // dense stage on the remaining live block
  std::vector<uint32_t> rows, cols;
  std::vector<int> row_pos(M.nrows, -1);
  for (size_t c = 0; c < ncols; ++c) {
    if (!col_alive[c] || M.cols[c].empty()) continue;
    cols.push_back(c);
    for (auto& e : M.cols[c])
      if (row_pos[e.first] < 0) {
        row_pos[e.first] = static_cast<int>(rows.size());
        rows.push_back(e.first);
      }
  }
  if (!cols.empty()) {
    ZMat D = zmat(rows.size(), cols.size());
    for (size_t j = 0; j < cols.size(); ++j)
      for (auto& e : M.cols[cols[j]]) D[row_pos[e.first]][j] = static_cast<long>(e.second);
    SNF s = smith_normal_form(std::move(D), cols.size(), modulus, false);
    res.rank += s.rank();
    for (auto& d : s.diag)
      if (d != 1) res.torsion.push_back(d);
  }
  return res;
}

}  // namespace kcob
