#pragma once

#include <random>

#include "kcob/formal.hpp"

namespace kcob::formal::testing {

// random non-crossing matching of the points lo..hi-1
inline void planar_matching(std::mt19937& rng, std::vector<int>& m, int lo, int hi) {
  if (lo >= hi) return;
  int j = lo + 1 + 2 * static_cast<int>(rng() % ((hi - lo) / 2));
  m[lo] = j;
  m[j] = lo;
  planar_matching(rng, m, lo + 1, j);
  planar_matching(rng, m, j + 1, hi);
}

inline PlanarTangle random_tangle(std::mt19937& rng, int nb, int max_circles) {
  PlanarTangle t;
  t.nb = nb;
  t.match.assign(nb, -1);
  planar_matching(rng, t.match, 0, nb);
  t.circles = static_cast<int>(rng() % (max_circles + 1));
  return t;
}

inline RawCobordism random_word(std::mt19937& rng, int nb, int max_comps) {
  RawCobordism w;
  w.src = random_tangle(rng, nb, 2);
  w.tgt = random_tangle(rng, nb, 2);
  const int total = cycle_layout(w.src, w.tgt).total;
  int terms = 1 + rng() % 3;
  for (int t = 0; t < terms; ++t) {
    RawTerm term;
    term.coeff = static_cast<int64_t>(rng() % 7) - 3;
    int nc = 1 + rng() % max_comps;
    term.comps.resize(nc);
    for (int c = 0; c < total; ++c) term.comps[rng() % nc].cycles.push_back(c);
    for (auto& comp : term.comps) {
      comp.genus = rng() % 3 == 0 ? 1 + rng() % 2 : 0;
      comp.dots = rng() % 3;
    }
    w.terms.push_back(term);
  }
  return w;
}

}  // namespace kcob::formal::testing
