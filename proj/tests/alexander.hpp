#pragma once
// Alexander polynomial from the Wirtinger presentation; test oracle only.

#include <gmpxx.h>

#include <numeric>
#include <vector>

#include "kcob/linkdiag.hpp"

namespace kcob::testing {

inline mpz_class bareiss_det(std::vector<std::vector<mpz_class>> a) {
  const size_t n = a.size();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t r = k + 1;
      while (r < n && a[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(a[k], a[r]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// Coefficients, lowest degree first, normalised to start at t^0 with a
// positive leading coefficient.
inline std::vector<long> alexander(const LinkDiagram& d) {
  const auto& xs = d.crossings();
  const size_t n = xs.size();
  if (n == 0) return {1};
  std::vector<int> parent(d.max_label() + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& x : xs) parent[find(x.arc[1])] = find(x.arc[3]);
  std::vector<int> gen(d.max_label() + 1, -1);
  int ng = 0;
  for (const auto& x : xs)
    for (int s = 0; s < 4; ++s)
      if (gen[find(x.arc[s])] < 0) gen[find(x.arc[s])] = ng++;
  // n crossings, n Wirtinger arcs for a knot diagram without loops
  auto eval = [&](long t) {
    std::vector<std::vector<mpz_class>> m(n, std::vector<mpz_class>(ng, 0));
    for (size_t k = 0; k < n; ++k) {
      const auto& x = xs[k];
      int over = gen[find(x.arc[1])], in = gen[find(x.arc[0])], out = gen[find(x.arc[2])];
      m[k][over] += 1 - t;
      if (x.sign > 0) {
        m[k][in] += t;
        m[k][out] -= 1;
      } else {
        m[k][in] -= 1;
        m[k][out] += t;
      }
    }
    m.pop_back();
    for (auto& row : m) row.pop_back();
    return bareiss_det(m);
  };
  // interpolate degree <= n-1 (Newton form over Q)
  std::vector<mpq_class> xsv, c;
  for (size_t i = 0; i < n; ++i) {
    xsv.push_back(static_cast<long>(i) + 2);
    c.push_back(mpq_class(eval(static_cast<long>(i) + 2)));
  }
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xsv[i] - xsv[i - j]);
  std::vector<mpq_class> poly(n, 0);
  for (size_t i = n; i-- > 0;) {
    // poly = poly * (t - xs[i]) + c[i]
    std::vector<mpq_class> np(n, 0);
    for (size_t k = 0; k + 1 < n; ++k) {
      np[k + 1] += poly[k];
      np[k] -= poly[k] * xsv[i];
    }
    np[0] += c[i];
    poly = np;
  }
  std::vector<long> out;
  for (auto& v : poly) out.push_back(mpz_class(v).get_si());
  while (!out.empty() && out.back() == 0) out.pop_back();
  size_t lo = 0;
  while (lo < out.size() && out[lo] == 0) ++lo;
  out.erase(out.begin(), out.begin() + static_cast<long>(lo));
  if (!out.empty() && out.back() < 0)
    for (auto& v : out) v = -v;
  return out;
}

}  // namespace kcob::testing
