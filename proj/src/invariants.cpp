#include "kcob/invariants.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

namespace kcob {

namespace {

// Element with the given labels (bit c = x on circle c) at vertex v.
ChainElement single(const GradedComplex& c, Vertex v, uint64_t labels) {
  ChainElement e;
  e.emplace(c.gen(v, labels), c.theory.ring.one());
  return e;
}

}  // namespace

PsiResult plamenevskaya(const std::vector<int>& word, int strands, const FrobeniusTheory& t) {
  PsiResult r;
  r.diagram = from_braid(word, strands);
  r.complex = build_complex(r.diagram, t);
  r.strands = strands;
  r.writhe = r.diagram.writhe();
  Vertex v = 0;
  for (size_t i = 0; i < word.size(); ++i)
    if (word[i] < 0) v |= Vertex{1} << i;
  const GradedComplex& c = r.complex;
  if (c.circles(v) != strands) throw std::logic_error("internal: braided smoothing has the wrong number of circles");
  r.psi = single(c, v, (uint64_t{1} << strands) - 1);
  Gen g = r.psi.begin()->first;
  r.h = c.cc.hdeg[g];
  r.q = c.cc.qdeg[g];
  r.cycle = is_zero(apply_d(c.cc, r.psi));
  if (r.cycle && !t.bn()) r.nonzero = !BlockHomology(c.cc, r.h, r.q).is_zero_class(r.psi);
  return r;
}

namespace {

// one_on_free: circles meeting no 0-resolved crossing carry 1 instead of x/y.
std::vector<BNGenerator> oriented_generators(const GradedComplex& c, bool one_on_free) {
  if (!c.theory.bn()) throw InputError("Lee-type generators are defined for the Bar-Natan theory");
  const LinkDiagram& d = c.diagram;
  const Ring& R = c.theory.ring;
  const size_t ncomp = d.components().size();
  if (ncomp > 16) throw InputError("too many components for orientation enumeration");
  std::vector<BNGenerator> out;
  for (uint32_t mask = 0; mask < (1u << ncomp); ++mask) {
    BNGenerator g;
    g.flipped.assign(ncomp, 0);
    for (size_t k = 0; k < ncomp; ++k) g.flipped[k] = (mask >> k) & 1;
    // crossings between components of different flip state change sign
    Vertex v = 0;
    for (int k = 0; k < d.size(); ++k) {
      const Crossing& x = d.crossings()[k];
      bool fu = g.flipped[d.component_of(x.arc[0])], fo = g.flipped[d.component_of(x.arc[1])];
      int sign = fu != fo ? -x.sign : x.sign;
      if (sign < 0) v |= Vertex{1} << k;
    }
    g.vertex = v;
    const int nc = c.circles(v);
    std::vector<std::vector<int>> adj(nc);
    std::vector<char> touched(nc, !one_on_free);
    for (int k = 0; k < d.size(); ++k) {
      const Crossing& x = d.crossings()[k];
      int a = c.circle_of(v, x.arc[0]), b = c.circle_of(v, x.arc[2]);
      if (a == b) throw std::logic_error("internal: oriented resolution touches one circle twice");
      adj[a].push_back(b);
      adj[b].push_back(a);
      if (!((v >> k) & 1)) touched[a] = touched[b] = 1;
    }
    // root of each Seifert-graph piece: the circle through its smallest arc
    std::vector<int> colour(nc, -1);
    for (int a : d.arcs()) {
      int root = c.circle_of(v, a);
      if (colour[root] >= 0) continue;
      colour[root] = g.flipped[d.component_of(a)] ? 1 : 0;
      std::queue<int> bfs;
      bfs.push(root);
      while (!bfs.empty()) {
        int u = bfs.front();
        bfs.pop();
        for (int w : adj[u]) {
          if (colour[w] < 0) {
            colour[w] = 1 - colour[u];
            bfs.push(w);
          } else if (colour[w] == colour[u]) {
            throw std::logic_error("internal: Seifert graph is not bipartite");
          }
        }
      }
    }
    // x on colour 0, y = x + H on colour 1, 1 on untouched circles: expand
    // the tensor product
    ChainElement e;
    std::vector<int> ys;
    uint64_t xs = 0;
    for (int k = 0; k < nc; ++k) {
      if (!touched[k]) continue;
      if (colour[k] == 0) xs |= uint64_t{1} << k;
      else ys.push_back(k);
    }
    for (uint64_t sub = 0; sub < (uint64_t{1} << ys.size()); ++sub) {
      // sub bit j: take x on ys[j], otherwise H * 1
      uint64_t labels = xs;
      int hp = 0;
      for (size_t j = 0; j < ys.size(); ++j) {
        if ((sub >> j) & 1) labels |= uint64_t{1} << ys[j];
        else ++hp;
      }
      add_term(e, c.gen(v, labels), R.monomial(1, hp), R);
    }
    Gen top = c.gen(v, xs | [&] {
      uint64_t m = 0;
      for (int y : ys) m |= uint64_t{1} << y;
      return m;
    }());
    g.element = std::move(e);
    g.h = c.cc.hdeg[top];
    g.q = c.cc.qdeg[top];
    g.cycle = is_zero(apply_d(c.cc, g.element));
    out.push_back(std::move(g));
  }
  return out;
}

}  // namespace

std::vector<BNGenerator> bn_generators(const GradedComplex& c) { return oriented_generators(c, false); }

std::vector<BNGenerator> theta_cycles(const GradedComplex& c) { return oriented_generators(c, true); }

int s_invariant(const LinkDiagram& d, uint64_t budget) {
  if (d.components().size() != 1) throw InputError("s-invariant needs a knot");
  GradedComplex c = build_complex(d, theory_from_flag("bn-f2h"), budget);
  BNHomology bn(c.cc);
  const auto& towers = bn.towers();
  if (towers.size() != 2 || towers[0].first.first != 0 || towers[1].first.first != 0)
    throw std::logic_error("internal: knot homology does not have two towers at h = 0");
  int q1 = towers[0].first.second, q2 = towers[1].first.second;
  if (std::abs(q1 - q2) != 2) throw std::logic_error("internal: towers are not two q-steps apart");
  return (q1 + q2) / 2;
}

int TorsionProfile::total(size_t page) const {
  int s = 0;
  for (auto& [k, v] : pages.at(page)) s += v;
  return s;
}

TorsionProfile torsion_profile(const LinkDiagram& d, uint64_t budget) {
  GradedComplex c = build_complex(d, theory_from_flag("bn-f2h"), budget);
  BNHomology bn(c.cc);
  TorsionProfile p;
  int kmax = 0;
  for (auto& b : bn.bars()) kmax = std::max(kmax, b.k);
  p.stable_page = kmax + 1;
  p.towers = static_cast<int>(bn.towers().size());
  p.pages.resize(p.stable_page);
  for (int r = 1; r <= p.stable_page; ++r) {
    auto& page = p.pages[r - 1];
    for (auto& [hq, z] : bn.towers()) page[hq] += 1;
    for (auto& b : bn.bars()) {
      if (b.k < r) continue;
      page[{b.h, b.q}] += 1;
      page[{b.h - 1, b.q - 2 * b.k}] += 1;
    }
  }
  return p;
}

RibbonCertificate ribbon_double_check(const Movie& c, const Movie& c_reversed, const FrobeniusTheory& t) {
  RibbonCertificate cert;
  for (const Move& m : c.moves)
    if (m.type == MoveType::Death) cert.has_local_maxima = true;
  if (cert.has_local_maxima) {
    cert.failure = "concordance has a death move (local maximum)";
    return cert;
  }
  if (c.target() != c_reversed.source() || c.source() != c_reversed.target())
    throw InputError("endpoints of the concordance and its reverse do not match");
  Movie doubled = concat(c, c_reversed);
  MovieMap f(doubled, t);
  if (int bad = f.verify(&cert.failure); bad >= 0) return cert;
  for (auto& b : induced_on_homology(f)) {
    ++cert.blocks;
    for (size_t i = 0; i < b.matrix.size(); ++i)
      for (size_t j = 0; j < b.matrix[i].size(); ++j) {
        mpz_class want = i == j ? 1 : 0;
        mpz_class got = b.matrix[i][j] - want;
        if (b.target_orders[i] != 0) got %= b.target_orders[i];
        if (got != 0) {
          cert.failure = "not the identity at (" + std::to_string(b.h) + "," + std::to_string(b.q) + ")";
          return cert;
        }
      }
  }
  cert.pass = true;
  return cert;
}

}  // namespace kcob
