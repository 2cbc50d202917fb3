#include "kcob/formal.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace kcob::formal {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(size_t n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

int popcount(uint64_t x) { return __builtin_popcountll(x); }

void check_boundary(const PlanarTangle& a, const PlanarTangle& b) {
  if (a.nb != b.nb) throw InputError("boundary mismatch: " + std::to_string(a.nb) + " vs " + std::to_string(b.nb) + " points");
}

void require_equal(const PlanarTangle& a, const PlanarTangle& b, const char* what) {
  if (!(a == b)) throw InputError(std::string("boundary mismatch in ") + what + ": " + to_string(a) + " vs " + to_string(b));
}

// Canonical expansion of one component with the given composite cycles.
// acc holds partial terms (dot mask, coefficient).
void expand_component(const std::vector<int>& cycles, int genus, int dots,
                      std::vector<std::pair<uint64_t, int64_t>>& acc) {
  if (acc.empty()) return;
  const int weight = genus + dots;
  if (weight >= 2) {
    acc.clear();
    return;
  }
  uint64_t all = 0;
  for (int c : cycles) all |= uint64_t{1} << c;
  if (weight == 1) {
    const int64_t f = genus == 1 ? 2 : 1;
    for (auto& [m, c] : acc) {
      m |= all;
      c *= f;
    }
    return;
  }
  if (cycles.empty()) {  // undotted sphere
    acc.clear();
    return;
  }
  std::vector<std::pair<uint64_t, int64_t>> out;
  out.reserve(acc.size() * cycles.size());
  for (auto& [m, c] : acc)
    for (int free : cycles) out.emplace_back(m | (all & ~(uint64_t{1} << free)), c);
  acc.swap(out);
}

// Raw components of f∘g for one pair of canonical terms.
std::vector<RawComponent> glue(const CycleLayout& lg, const CycleLayout& lf, const CycleLayout& lc,
                               const PlanarTangle& mid, uint64_t mask_g, uint64_t mask_f) {
  const int ng = lg.total, nf = lf.total;
  UnionFind uf(ng + nf);
  std::vector<int> mid_arcs;  // g-node of each middle arc
  for (int p = 0; p < mid.nb; ++p) {
    if (p > mid.match[p]) continue;
    uf.unite(lg.cycle_of_point[p], ng + lf.cycle_of_point[p]);
    mid_arcs.push_back(lg.cycle_of_point[p]);
  }
  for (int i = 0; i < mid.circles; ++i) uf.unite(lg.tgt_circle0 + i, ng + lf.src_circle0 + i);
  std::vector<int> nodes(ng + nf, 0), arcs(ng + nf, 0), dots(ng + nf, 0);
  for (int v = 0; v < ng + nf; ++v) {
    int r = uf.find(v);
    ++nodes[r];
    uint64_t bit = v < ng ? (mask_g >> v) & 1 : (mask_f >> (v - ng)) & 1;
    dots[r] += static_cast<int>(bit);
  }
  for (int a : mid_arcs) ++arcs[uf.find(a)];
  std::vector<std::vector<int>> cyc(ng + nf);
  for (int c = 0; c < lc.arc_cycles; ++c) cyc[uf.find(lg.cycle_of_point[lc.points[c][0]])].push_back(c);
  for (int i = 0; i < lc.tgt_circle0 - lc.src_circle0; ++i)
    cyc[uf.find(lg.src_circle0 + i)].push_back(lc.src_circle0 + i);
  for (int j = 0; j < lc.total - lc.tgt_circle0; ++j)
    cyc[uf.find(ng + lf.tgt_circle0 + j)].push_back(lc.tgt_circle0 + j);
  std::vector<RawComponent> out;
  for (int v = 0; v < ng + nf; ++v) {
    if (uf.find(v) != v) continue;
    int chi = nodes[v] - arcs[v];
    int b = static_cast<int>(cyc[v].size());
    int twice_genus = 2 - chi - b;
    if (twice_genus < 0 || twice_genus % 2) throw std::logic_error("internal: glued surface has bad Euler characteristic");
    out.push_back({std::move(cyc[v]), twice_genus / 2, dots[v]});
  }
  return out;
}

// Canonical form by the closed-form component evaluation.
DottedCobordism evaluate(const RawCobordism& w) {
  DottedCobordism out;
  out.src = w.src;
  out.tgt = w.tgt;
  for (const RawTerm& t : w.terms) {
    std::vector<std::pair<uint64_t, int64_t>> acc{{0, t.coeff}};
    for (const RawComponent& c : t.comps) expand_component(c.cycles, c.genus, c.dots, acc);
    for (auto& [m, c] : acc) {
      int64_t& slot = out.terms[m];
      slot += c;
      if (slot == 0) out.terms.erase(m);
    }
  }
  return out;
}

void validate_raw(const RawCobordism& w, int total) {
  for (const RawTerm& t : w.terms) {
    std::vector<int> seen(total, 0);
    for (const RawComponent& c : t.comps) {
      if (c.genus < 0 || c.dots < 0) throw InputError("negative genus or dot count");
      for (int x : c.cycles) {
        if (x < 0 || x >= total) throw InputError("boundary mismatch: cycle " + std::to_string(x) + " out of range");
        if (seen[x]++) throw InputError("boundary mismatch: cycle " + std::to_string(x) + " bounds two components");
      }
    }
    for (int x = 0; x < total; ++x)
      if (!seen[x]) throw InputError("boundary mismatch: cycle " + std::to_string(x) + " is not bounded");
  }
}

DottedCobordism single(const PlanarTangle& src, const PlanarTangle& tgt, uint64_t mask, int64_t coeff) {
  DottedCobordism c;
  c.src = src;
  c.tgt = tgt;
  if (coeff) c.terms[mask] = coeff;
  return c;
}

}  // namespace

// ---- tangles and layouts ------------------------------------------------------

void PlanarTangle::validate() const {
  if (nb < 0 || nb % 2) throw InputError("odd number of boundary points");
  if (static_cast<int>(match.size()) != nb) throw InputError("matching has the wrong size");
  for (int p = 0; p < nb; ++p) {
    int q = match[p];
    if (q < 0 || q >= nb || q == p || match[q] != p) throw InputError("matching is not a perfect matching");
  }
  for (int p = 0; p < nb; ++p)
    for (int r = p + 1; r < match[p]; ++r)
      if (match[r] < p || match[r] > match[p]) throw InputError("matching is not planar");
  if (circles < 0) throw InputError("negative circle count");
}

PlanarTangle PlanarTangle::empty(int circles, int shift) {
  PlanarTangle t;
  t.circles = circles;
  t.shift = shift;
  return t;
}

std::string to_string(const PlanarTangle& t) {
  std::ostringstream s;
  s << "[";
  bool first = true;
  for (int p = 0; p < t.nb; ++p) {
    if (p > t.match[p]) continue;
    s << (first ? "" : " ") << p << "-" << t.match[p];
    first = false;
  }
  if (t.circles) s << (first ? "" : " ") << "O^" << t.circles;
  s << "]{" << t.shift << "}";
  return s.str();
}

CycleLayout cycle_layout(const PlanarTangle& src, const PlanarTangle& tgt) {
  check_boundary(src, tgt);
  CycleLayout L;
  L.cycle_of_point.assign(src.nb, -1);
  for (int p = 0; p < src.nb; ++p) {
    if (L.cycle_of_point[p] >= 0) continue;
    std::vector<int> pts;
    int cur = p;
    do {
      int q = src.match[cur];
      L.cycle_of_point[cur] = L.cycle_of_point[q] = L.arc_cycles;
      pts.push_back(cur);
      pts.push_back(q);
      cur = tgt.match[q];
    } while (cur != p);
    L.points.push_back(std::move(pts));
    ++L.arc_cycles;
  }
  L.src_circle0 = L.arc_cycles;
  L.tgt_circle0 = L.arc_cycles + src.circles;
  L.total = L.tgt_circle0 + tgt.circles;
  if (L.total > 64) throw InputError("more than 64 boundary cycles in one cobordism");
  return L;
}

// ---- canonical morphisms -------------------------------------------------------

int DottedCobordism::term_degree(uint64_t dots) const {
  return cycles() - src.nb / 2 - 2 * popcount(dots) + tgt.shift - src.shift;
}

int DottedCobordism::degree() const {
  if (terms.empty()) return 0;
  const int n = cycles();
  int deg = 0;
  bool first = true;
  for (auto& [m, c] : terms) {
    int d = n - src.nb / 2 - 2 * popcount(m) + tgt.shift - src.shift;
    if (!first && d != deg) throw std::logic_error("inhomogeneous cobordism");
    deg = d;
    first = false;
  }
  return deg;
}

std::string to_string(const DottedCobordism& c) {
  CycleLayout L = cycle_layout(c.src, c.tgt);
  std::ostringstream s;
  if (c.terms.empty()) return "0";
  bool first = true;
  for (auto& [m, coeff] : c.terms) {
    s << (first ? "" : " ") << (coeff < 0 ? "- " : (first ? "" : "+ ")) << (coeff < 0 ? -coeff : coeff) << " *";
    first = false;
    for (int i = 0; i < L.total; ++i) {
      s << " ";
      if (i < L.arc_cycles) {
        s << "(";
        for (size_t k = 0; k < L.points[i].size(); ++k) s << (k ? "-" : "") << L.points[i][k];
        s << ")";
      } else if (i < L.tgt_circle0) {
        s << "s" << i - L.src_circle0;
      } else {
        s << "t" << i - L.tgt_circle0;
      }
      if ((m >> i) & 1) s << "*";
    }
  }
  return s.str();
}

DottedCobordism zero(const PlanarTangle& src, const PlanarTangle& tgt) {
  check_boundary(src, tgt);
  DottedCobordism c;
  c.src = src;
  c.tgt = tgt;
  return c;
}

DottedCobordism identity(const PlanarTangle& t) {
  RawCobordism w;
  w.src = w.tgt = t;
  CycleLayout L = cycle_layout(t, t);
  RawTerm term;
  for (int c = 0; c < L.arc_cycles; ++c) term.comps.push_back({{c}, 0, 0});
  for (int i = 0; i < t.circles; ++i) term.comps.push_back({{L.src_circle0 + i, L.tgt_circle0 + i}, 0, 0});
  w.terms.push_back(std::move(term));
  return evaluate(w);
}

DottedCobordism add(const DottedCobordism& a, const DottedCobordism& b) {
  require_equal(a.src, b.src, "sum");
  require_equal(a.tgt, b.tgt, "sum");
  DottedCobordism out = a;
  for (auto& [m, c] : b.terms) {
    int64_t& slot = out.terms[m];
    slot += c;
    if (slot == 0) out.terms.erase(m);
  }
  return out;
}

DottedCobordism scale(const DottedCobordism& a, int64_t c) {
  DottedCobordism out = a;
  if (c == 0) out.terms.clear();
  for (auto& [m, v] : out.terms) v *= c;
  return out;
}

DottedCobordism negate(const DottedCobordism& a) { return scale(a, -1); }

RawCobordism stack(const DottedCobordism& f, const DottedCobordism& g) {
  require_equal(g.tgt, f.src, "composition");
  RawCobordism w;
  w.src = g.src;
  w.tgt = f.tgt;
  CycleLayout lg = cycle_layout(g.src, g.tgt), lf = cycle_layout(f.src, f.tgt), lc = cycle_layout(g.src, f.tgt);
  for (auto& [mg, cg] : g.terms)
    for (auto& [mf, cf] : f.terms) w.terms.push_back({cg * cf, glue(lg, lf, lc, g.tgt, mg, mf)});
  return w;
}

DottedCobordism compose(const DottedCobordism& f, const DottedCobordism& g) {
  require_equal(g.tgt, f.src, "composition");
  DottedCobordism out;
  out.src = g.src;
  out.tgt = f.tgt;
  if (f.terms.empty() || g.terms.empty()) return out;
  CycleLayout lg = cycle_layout(g.src, g.tgt), lf = cycle_layout(f.src, f.tgt), lc = cycle_layout(g.src, f.tgt);
  for (auto& [mg, cg] : g.terms)
    for (auto& [mf, cf] : f.terms) {
      std::vector<std::pair<uint64_t, int64_t>> acc{{0, cg * cf}};
      for (const RawComponent& c : glue(lg, lf, lc, g.tgt, mg, mf)) expand_component(c.cycles, c.genus, c.dots, acc);
      for (auto& [m, c] : acc) {
        int64_t& slot = out.terms[m];
        slot += c;
        if (slot == 0) out.terms.erase(m);
      }
    }
  return out;
}

int identity_sign(const DottedCobordism& c) {
  if (!c.src.same_shape(c.tgt) || c.src.shift != c.tgt.shift || c.src.circles != 0) return 0;
  if (c.terms.size() != 1 || c.terms.begin()->first != 0) return 0;
  int64_t v = c.terms.begin()->second;
  return v == 1 ? 1 : v == -1 ? -1 : 0;
}

// ---- rewriting -------------------------------------------------------------------

DottedCobordism normalize(const RawCobordism& w, uint64_t seed) {
  w.src.validate();
  w.tgt.validate();
  const CycleLayout L = cycle_layout(w.src, w.tgt);
  validate_raw(w, L.total);
  std::mt19937_64 rng(seed);
  auto pick = [&](size_t n) -> size_t { return seed == 0 ? 0 : static_cast<size_t>(rng() % n); };

  enum Rule { TwoDots, Genus, Split, Closed };
  DottedCobordism out;
  out.src = w.src;
  out.tgt = w.tgt;
  std::vector<RawTerm> pending(w.terms.begin(), w.terms.end());
  while (!pending.empty()) {
    size_t ti = seed == 0 ? pending.size() - 1 : pick(pending.size());
    RawTerm t = std::move(pending[ti]);
    pending[ti] = std::move(pending.back());
    pending.pop_back();
    if (t.coeff == 0) continue;
    std::vector<std::pair<size_t, Rule>> moves;
    for (size_t i = 0; i < t.comps.size(); ++i) {
      const RawComponent& c = t.comps[i];
      if (c.dots >= 2) moves.emplace_back(i, TwoDots);
      if (c.genus >= 1) moves.emplace_back(i, Genus);
      if (c.cycles.size() >= 2) moves.emplace_back(i, Split);
      if (c.cycles.empty() && c.genus == 0 && c.dots <= 1) moves.emplace_back(i, Closed);
    }
    if (moves.empty()) {
      uint64_t m = 0;
      for (const RawComponent& c : t.comps)
        if (c.dots) m |= uint64_t{1} << c.cycles[0];
      int64_t& slot = out.terms[m];
      slot += t.coeff;
      if (slot == 0) out.terms.erase(m);
      continue;
    }
    auto [ci, rule] = moves[pick(moves.size())];
    switch (rule) {
      case TwoDots:
        break;
      case Closed:
        if (t.comps[ci].dots == 1) {  // dotted sphere = 1
          t.comps.erase(t.comps.begin() + ci);
          pending.push_back(std::move(t));
        }
        break;
      case Genus: {
        // cut a non-separating neck: a dot on either side, same component
        t.comps[ci].genus -= 1;
        t.comps[ci].dots += 1;
        pending.push_back(t);
        pending.push_back(std::move(t));
        break;
      }
      case Split: {
        // cut a separating neck; genus and dots may sit on either side
        RawComponent whole = t.comps[ci];
        std::vector<int> a, b;
        if (seed == 0) {
          a.push_back(whole.cycles[0]);
          b.assign(whole.cycles.begin() + 1, whole.cycles.end());
        } else {
          const size_t n = whole.cycles.size();
          uint64_t sub = 1 + rng() % ((uint64_t{1} << n) - 2);
          for (size_t k = 0; k < n; ++k) ((sub >> k) & 1 ? a : b).push_back(whole.cycles[k]);
        }
        int ga = seed == 0 ? 0 : static_cast<int>(rng() % (whole.genus + 1));
        int da = seed == 0 ? 0 : static_cast<int>(rng() % (whole.dots + 1));
        RawComponent pa{a, ga, da}, pb{b, whole.genus - ga, whole.dots - da};
        RawTerm left = t, right = std::move(t);
        left.comps[ci] = pa;
        left.comps[ci].dots += 1;
        left.comps.push_back(pb);
        right.comps[ci] = pa;
        pb.dots += 1;
        right.comps.push_back(pb);
        pending.push_back(std::move(left));
        pending.push_back(std::move(right));
        break;
      }
    }
  }
  return out;
}

DottedCobordism four_tube_residue(const RawCobordism& w, std::array<int, 4> sites) {
  if (w.terms.size() != 1) throw InputError("4Tu needs a single-term cobordism");
  const RawTerm& base = w.terms[0];
  for (int s : sites)
    if (s < 0 || s >= static_cast<int>(base.comps.size())) throw InputError("4Tu site out of range");
  auto tube = [&](int i, int j, int64_t sign) {
    RawTerm t = base;
    t.coeff *= sign;
    int a = sites[i], b = sites[j];
    if (a == b) {
      t.comps[a].genus += 1;
    } else {
      RawComponent& ca = t.comps[a];
      const RawComponent& cb = t.comps[b];
      ca.cycles.insert(ca.cycles.end(), cb.cycles.begin(), cb.cycles.end());
      ca.genus += cb.genus;
      ca.dots += cb.dots;
      t.comps.erase(t.comps.begin() + b);
    }
    return t;
  };
  RawCobordism r;
  r.src = w.src;
  r.tgt = w.tgt;
  r.terms = {tube(0, 1, 1), tube(2, 3, 1), tube(0, 2, -1), tube(1, 3, -1)};
  return normalize(r);
}

bool check_4tu(const RawCobordism& w, std::array<int, 4> sites) { return four_tube_residue(w, sites).is_zero(); }

// ---- matrices ------------------------------------------------------------------

namespace {

void put(Matrix& m, size_t r, size_t c, const DottedCobordism& x) {
  if (x.is_zero()) return;
  auto it = m.at.find({r, c});
  if (it == m.at.end()) {
    m.at.emplace(std::make_pair(r, c), x);
    return;
  }
  it->second = add(it->second, x);
  if (it->second.is_zero()) m.at.erase(it);
}

Matrix mat_compose(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw std::logic_error("internal: matrix size mismatch");
  Matrix out;
  out.rows = a.rows;
  out.cols = b.cols;
  std::map<size_t, std::vector<std::pair<size_t, const DottedCobordism*>>> by_row;
  for (auto& [rc, x] : b.at) by_row[rc.first].emplace_back(rc.second, &x);
  for (auto& [rc, x] : a.at) {
    auto it = by_row.find(rc.second);
    if (it == by_row.end()) continue;
    for (auto& [j, y] : it->second) put(out, rc.first, j, compose(x, *y));
  }
  return out;
}

Matrix mat_add(const Matrix& a, const Matrix& b, int64_t sb = 1) {
  if (a.rows != b.rows || a.cols != b.cols) throw std::logic_error("internal: matrix size mismatch");
  Matrix out = a;
  for (auto& [rc, x] : b.at) put(out, rc.first, rc.second, scale(x, sb));
  return out;
}

Matrix mat_zero(size_t rows, size_t cols) {
  Matrix m;
  m.rows = rows;
  m.cols = cols;
  return m;
}

Matrix mat_identity(const std::vector<PlanarTangle>& objs) {
  Matrix m = mat_zero(objs.size(), objs.size());
  for (size_t i = 0; i < objs.size(); ++i) put(m, i, i, identity(objs[i]));
  return m;
}

bool mat_equal(const Matrix& a, const Matrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.at == b.at;
}

size_t deg_count(const FormalComplex& c) { return c.objects.size(); }

// d[k] with empty matrices off the ends
Matrix dk(const FormalComplex& c, int k) {
  const int n = static_cast<int>(c.objects.size());
  size_t rows = k + 1 >= 0 && k + 1 < n ? c.objects[k + 1].size() : 0;
  size_t cols = k >= 0 && k < n ? c.objects[k].size() : 0;
  if (k >= 0 && k + 1 < n) return c.d[k];
  return mat_zero(rows, cols);
}

Matrix hk(const FormalComplex& src, const ChainMorphism& h, int k) {
  const int n = static_cast<int>(src.objects.size());
  if (k >= 1 && k < n && static_cast<size_t>(k) < h.size()) return h[k];
  size_t rows = k - 1 >= 0 && k - 1 < n ? src.objects[k - 1].size() : 0;
  size_t cols = k >= 0 && k < n ? src.objects[k].size() : 0;
  return mat_zero(rows, cols);
}

ChainMorphism zero_homotopy(const FormalComplex& c) {
  ChainMorphism h(c.objects.size());
  for (size_t k = 0; k < c.objects.size(); ++k) h[k] = mat_zero(k ? c.objects[k - 1].size() : 0, c.objects[k].size());
  return h;
}

}  // namespace

size_t FormalComplex::object_count() const {
  size_t n = 0;
  for (auto& o : objects) n += o.size();
  return n;
}

uint64_t FormalComplex::generator_count() const {
  uint64_t n = 0;
  for (auto& o : objects)
    for (auto& t : o) n += uint64_t{1} << t.circles;
  return n;
}

std::string dump(const FormalComplex& c) {
  std::ostringstream s;
  for (size_t k = 0; k < c.objects.size(); ++k) {
    s << "degree " << c.hmin + static_cast<int>(k) << ":";
    for (size_t i = 0; i < c.objects[k].size(); ++i) s << " #" << i << to_string(c.objects[k][i]);
    s << "\n";
    if (k < c.d.size())
      for (auto& [rc, x] : c.d[k].at) s << "  d " << rc.second << " -> " << rc.first << ": " << to_string(x) << "\n";
  }
  return s.str();
}

bool check_complex(const FormalComplex& c, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (c.d.size() + 1 != c.objects.size() && !(c.objects.empty() && c.d.empty()))
    return fail("differential count does not match degree count");
  for (size_t k = 0; k < c.d.size(); ++k) {
    const Matrix& m = c.d[k];
    if (m.rows != c.objects[k + 1].size() || m.cols != c.objects[k].size()) return fail("matrix size mismatch");
    for (auto& [rc, x] : m.at) {
      if (!(x.src == c.objects[k][rc.second]) || !(x.tgt == c.objects[k + 1][rc.first]))
        return fail("entry endpoints do not match the objects");
      if (x.degree() != 0) return fail("differential entry of nonzero degree at degree " + std::to_string(c.hmin + k));
    }
  }
  for (size_t k = 0; k + 1 < c.d.size(); ++k)
    if (!mat_compose(c.d[k + 1], c.d[k]).at.empty()) return fail("d∘d != 0 at degree " + std::to_string(c.hmin + k));
  return true;
}

// ---- bracket -------------------------------------------------------------------------

TangleDiagram TangleDiagram::from_link(const LinkDiagram& d) {
  TangleDiagram t;
  t.crossings = d.crossings();
  t.loops = d.loops();
  return t;
}

FormalComplex bracket(const LinkDiagram& d, uint64_t budget, std::vector<std::vector<Vertex>>* vertices) {
  return bracket(TangleDiagram::from_link(d), budget, vertices);
}

FormalComplex bracket(const TangleDiagram& t, uint64_t budget, std::vector<std::vector<Vertex>>* vertices) {
  // labels and their uses
  std::map<int, int> uses;
  for (const Crossing& x : t.crossings)
    for (int a : x.arc) ++uses[a];
  for (int a : t.ends) ++uses[a];
  for (int a : t.loops)
    if (uses.count(a) || std::count(t.loops.begin(), t.loops.end(), a) != 1)
      throw InputError("loop label " + std::to_string(a) + " is used elsewhere");
  for (auto& [a, n] : uses)
    if (n != 2) throw InputError("arc label " + std::to_string(a) + " must be used exactly twice");
  for (int a : t.loops) uses[a] = 0;
  std::vector<int> labels;
  for (auto& [a, n] : uses) labels.push_back(a);
  std::map<int, int> idx;
  for (size_t i = 0; i < labels.size(); ++i) idx[labels[i]] = static_cast<int>(i);
  const int n = static_cast<int>(t.crossings.size());
  const int nb = static_cast<int>(t.ends.size());
  if (n > 30 || (uint64_t{1} << n) > budget) throw BudgetError("bracket exceeds the budget");
  int np = 0, nm = 0;
  for (const Crossing& x : t.crossings) (x.sign > 0 ? np : nm)++;

  // curves per vertex: node ids, arc curves named by their smaller end point
  struct Res {
    PlanarTangle obj;
    std::vector<int> curve_of;  // per label index: point p of an arc curve, or nb + circle
    std::vector<char> at_point; // per curve node: arc curve?
  };
  std::vector<int> end_pos_a(labels.size(), -1), end_pos_b(labels.size(), -1);
  for (int p = 0; p < nb; ++p) {
    int i = idx[t.ends[p]];
    (end_pos_a[i] < 0 ? end_pos_a[i] : end_pos_b[i]) = p;
  }
  auto resolve_at = [&](Vertex v) {
    UnionFind uf(labels.size());
    for (int k = 0; k < n; ++k) {
      const auto& a = t.crossings[k].arc;
      if ((v >> k) & 1) {
        uf.unite(idx[a[0]], idx[a[3]]);
        uf.unite(idx[a[1]], idx[a[2]]);
      } else {
        uf.unite(idx[a[0]], idx[a[1]]);
        uf.unite(idx[a[2]], idx[a[3]]);
      }
    }
    Res r;
    r.obj.nb = nb;
    r.obj.match.assign(nb, -1);
    std::map<int, std::vector<int>> ends_of_root;
    for (int p = 0; p < nb; ++p) ends_of_root[uf.find(idx[t.ends[p]])].push_back(p);
    for (auto& [root, ps] : ends_of_root) {
      if (ps.size() != 2) throw InputError("tangle smoothing has a strand with " + std::to_string(ps.size()) + " ends");
      r.obj.match[ps[0]] = ps[1];
      r.obj.match[ps[1]] = ps[0];
    }
    std::map<int, int> circle_of_root;
    r.curve_of.assign(labels.size(), -1);
    for (size_t i = 0; i < labels.size(); ++i) {
      int root = uf.find(static_cast<int>(i));
      auto e = ends_of_root.find(root);
      if (e != ends_of_root.end()) {
        r.curve_of[i] = e->second[0];
      } else {
        auto [it, fresh] = circle_of_root.emplace(root, static_cast<int>(circle_of_root.size()));
        r.curve_of[i] = nb + it->second;
      }
    }
    r.obj.circles = static_cast<int>(circle_of_root.size());
    r.obj.shift = popcount(v) + np - 2 * nm;
    r.obj.validate();
    return r;
  };

  FormalComplex c;
  c.hmin = -nm;
  c.objects.assign(n + 1, {});
  std::vector<std::vector<Vertex>> verts(n + 1);
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) verts[popcount(v)].push_back(v);
  std::map<Vertex, std::pair<int, size_t>> where;
  std::map<Vertex, Res> res;
  for (int k = 0; k <= n; ++k)
    for (size_t i = 0; i < verts[k].size(); ++i) {
      Vertex v = verts[k][i];
      res.emplace(v, resolve_at(v));
      c.objects[k].push_back(res.at(v).obj);
      where[v] = {k, i};
    }
  c.d.resize(n);
  for (int k = 0; k < n; ++k) {
    c.d[k].rows = c.objects[k + 1].size();
    c.d[k].cols = c.objects[k].size();
  }
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) {
    const Res& rs = res.at(v);
    for (int k = 0; k < n; ++k) {
      if ((v >> k) & 1) continue;
      Vertex w = v | (Vertex{1} << k);
      const Res& rt = res.at(w);
      const int ss = nb + rs.obj.circles, st = nb + rt.obj.circles;
      UnionFind uf(ss + st);
      for (size_t i = 0; i < labels.size(); ++i) uf.unite(rs.curve_of[i], ss + rt.curve_of[i]);
      std::vector<int> chi(ss + st, 0);
      for (int p = 0; p < nb; ++p)
        if (p < rs.obj.match[p]) ++chi[uf.find(p)];
      --chi[uf.find(rs.curve_of[idx[t.crossings[k].arc[0]]])];
      CycleLayout L = cycle_layout(rs.obj, rt.obj);
      std::map<int, RawComponent> comps;
      for (int cy = 0; cy < L.arc_cycles; ++cy) comps[uf.find(L.points[cy][0])].cycles.push_back(cy);
      for (int i = 0; i < rs.obj.circles; ++i) comps[uf.find(nb + i)].cycles.push_back(L.src_circle0 + i);
      for (int j = 0; j < rt.obj.circles; ++j) comps[uf.find(ss + nb + j)].cycles.push_back(L.tgt_circle0 + j);
      RawTerm term;
      term.coeff = (popcount(v & ((Vertex{1} << k) - 1)) & 1) ? -1 : 1;
      for (auto& [root, comp] : comps) {
        int twice = 2 - chi[root] - static_cast<int>(comp.cycles.size());
        if (twice < 0 || twice % 2) throw std::logic_error("internal: saddle surface has bad Euler characteristic");
        comp.genus = twice / 2;
        term.comps.push_back(comp);
      }
      RawCobordism raw{rs.obj, rt.obj, {term}};
      auto [ks, is] = where.at(v);
      auto [kt, it] = where.at(w);
      put(c.d[ks], it, is, evaluate(raw));
    }
  }
  if (vertices) *vertices = verts;
  return c;
}

// ---- equivalences ----------------------------------------------------------------

bool verify_equivalence(const FormalComplex& c, const Equivalence& e, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!e.tracked) return fail("equivalence was not tracked");
  const FormalComplex& r = e.reduced;
  const int n = static_cast<int>(deg_count(c));
  if (static_cast<int>(deg_count(r)) != n || static_cast<int>(e.f.size()) != n || static_cast<int>(e.g.size()) != n)
    return fail("degree ranges differ");
  for (int k = 0; k < n; ++k) {
    if (k + 1 < n) {
      if (!mat_equal(mat_compose(e.f[k + 1], dk(c, k)), mat_compose(dk(r, k), e.f[k])))
        return fail("f is not a chain map at degree " + std::to_string(c.hmin + k));
      if (!mat_equal(mat_compose(e.g[k + 1], dk(r, k)), mat_compose(dk(c, k), e.g[k])))
        return fail("g is not a chain map at degree " + std::to_string(c.hmin + k));
    }
    auto homotopy_ok = [&](const FormalComplex& x, const Matrix& lhs, const ChainMorphism& h) {
      Matrix rhs = mat_zero(x.objects[k].size(), x.objects[k].size());
      if (k >= 1) rhs = mat_add(rhs, mat_compose(dk(x, k - 1), hk(x, h, k)));
      if (k + 1 < n) rhs = mat_add(rhs, mat_compose(hk(x, h, k + 1), dk(x, k)));
      return mat_equal(mat_add(lhs, mat_identity(x.objects[k]), -1), rhs);
    };
    if (!homotopy_ok(c, mat_compose(e.g[k], e.f[k]), e.h))
      return fail("g∘f - id != dh + hd at degree " + std::to_string(c.hmin + k));
    if (!homotopy_ok(r, mat_compose(e.f[k], e.g[k]), e.h_reduced))
      return fail("f∘g - id != dh + hd on the reduced complex at degree " + std::to_string(c.hmin + k));
  }
  return true;
}

Equivalence then(const FormalComplex& c, const Equivalence& a, const Equivalence& b) {
  Equivalence e;
  e.reduced = b.reduced;
  e.tracked = a.tracked && b.tracked;
  if (!e.tracked) return e;
  const int n = static_cast<int>(deg_count(c));
  const FormalComplex& mid = a.reduced;
  e.f.resize(n);
  e.g.resize(n);
  e.h.resize(n);
  e.h_reduced.resize(n);
  for (int k = 0; k < n; ++k) {
    e.f[k] = mat_compose(b.f[k], a.f[k]);
    e.g[k] = mat_compose(a.g[k], b.g[k]);
    e.h[k] = hk(c, a.h, k);
    e.h_reduced[k] = hk(b.reduced, b.h_reduced, k);
    if (k >= 1) {
      e.h[k] = mat_add(e.h[k], mat_compose(a.g[k - 1], mat_compose(hk(mid, b.h, k), a.f[k])));
      e.h_reduced[k] = mat_add(e.h_reduced[k], mat_compose(b.f[k - 1], mat_compose(hk(mid, a.h_reduced, k), b.g[k])));
    }
  }
  return e;
}

Equivalence deloop(const FormalComplex& c) {
  const size_t n = deg_count(c);
  Equivalence e;
  FormalComplex& r = e.reduced;
  r.hmin = c.hmin;
  r.objects.resize(n);
  r.d.resize(c.d.size());
  e.f.resize(n);
  e.g.resize(n);
  // per old object: first new index; forward and backward pieces
  std::vector<std::vector<size_t>> first(n);
  std::vector<std::vector<std::vector<DottedCobordism>>> fwd(n), bwd(n);
  for (size_t k = 0; k < n; ++k) {
    for (const PlanarTangle& o : c.objects[k]) {
      first[k].push_back(r.objects[k].size());
      const int m = o.circles;
      if (m > 20) throw BudgetError("too many circles to deloop");
      const int arcs = o.nb / 2;
      std::vector<DottedCobordism> fw, bw;
      for (uint64_t s = 0; s < (uint64_t{1} << m); ++s) {
        PlanarTangle t = o;
        t.circles = 0;
        t.shift = o.shift + m - 2 * popcount(s);
        uint64_t caps = 0, cups = 0;
        for (int i = 0; i < m; ++i) {
          if ((s >> i) & 1) cups |= uint64_t{1} << (arcs + i);
          else caps |= uint64_t{1} << (arcs + i);
        }
        fw.push_back(single(o, t, caps, 1));
        bw.push_back(single(t, o, cups, 1));
        r.objects[k].push_back(t);
      }
      fwd[k].push_back(std::move(fw));
      bwd[k].push_back(std::move(bw));
    }
  }
  for (size_t k = 0; k < n; ++k) {
    e.f[k] = mat_zero(r.objects[k].size(), c.objects[k].size());
    e.g[k] = mat_zero(c.objects[k].size(), r.objects[k].size());
    for (size_t o = 0; o < c.objects[k].size(); ++o)
      for (size_t s = 0; s < fwd[k][o].size(); ++s) {
        put(e.f[k], first[k][o] + s, o, fwd[k][o][s]);
        put(e.g[k], o, first[k][o] + s, bwd[k][o][s]);
      }
  }
  for (size_t k = 0; k < c.d.size(); ++k) {
    r.d[k] = mat_zero(r.objects[k + 1].size(), r.objects[k].size());
    for (auto& [rc, x] : c.d[k].at) {
      auto [row, col] = rc;
      for (size_t s = 0; s < bwd[k][col].size(); ++s) {
        DottedCobordism xg = compose(x, bwd[k][col][s]);
        if (xg.is_zero()) continue;
        for (size_t t = 0; t < fwd[k + 1][row].size(); ++t)
          put(r.d[k], first[k + 1][row] + t, first[k][col] + s, compose(fwd[k + 1][row][t], xg));
      }
    }
  }
  e.h = zero_homotopy(c);
  e.h_reduced = zero_homotopy(r);
  return e;
}

Equivalence gauss_reduce(const FormalComplex& c, bool track) {
  const size_t n = deg_count(c);
  using Col = std::map<size_t, DottedCobordism>;
  // D[k]: per column of degree k, entries by row of degree k+1; R[k]: row -> columns
  std::vector<std::vector<Col>> D(n);
  std::vector<std::vector<std::set<size_t>>> R(n);
  std::vector<std::vector<char>> alive(n);
  for (size_t k = 0; k < n; ++k) {
    alive[k].assign(c.objects[k].size(), 1);
    D[k].resize(c.objects[k].size());
    R[k].resize(k + 1 < n ? c.objects[k + 1].size() : 0);
  }
  for (size_t k = 0; k + 1 < n; ++k)
    for (auto& [rc, x] : c.d[k].at) {
      D[k][rc.second].emplace(rc.first, x);
      R[k][rc.first].insert(rc.second);
    }
  auto set_entry = [&](size_t k, size_t row, size_t col, DottedCobordism x) {
    if (x.is_zero()) {
      D[k][col].erase(row);
      R[k][row].erase(col);
    } else {
      D[k][col].insert_or_assign(row, std::move(x));
      R[k][row].insert(col);
    }
  };
  // tracking: F[k] rows (current) -> C0 entries; G[k] columns (current) -> C0 entries
  std::vector<std::map<size_t, Col>> F(n), G(n);
  std::vector<Matrix> H(n);
  if (track) {
    for (size_t k = 0; k < n; ++k) {
      H[k] = mat_zero(k ? c.objects[k - 1].size() : 0, c.objects[k].size());
      for (size_t i = 0; i < c.objects[k].size(); ++i) {
        F[k][i].emplace(i, identity(c.objects[k][i]));
        G[k][i].emplace(i, identity(c.objects[k][i]));
      }
    }
  }
  auto col_axpy = [](Col& dst, const Col& src, const DottedCobordism* right, const DottedCobordism* left, int64_t s) {
    // dst += s * (left ∘ src ∘ right) entrywise
    for (auto& [i, x] : src) {
      DottedCobordism y = x;
      if (right) y = compose(y, *right);
      if (left) y = compose(*left, y);
      y = scale(y, s);
      auto it = dst.find(i);
      if (it == dst.end()) {
        if (!y.is_zero()) dst.emplace(i, std::move(y));
      } else {
        it->second = add(it->second, y);
        if (it->second.is_zero()) dst.erase(it);
      }
    }
  };

  for (size_t k = 0; k + 1 < n; ++k) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t b1 = 0; b1 < D[k].size(); ++b1) {
        if (!alive[k][b1]) continue;
        size_t b2 = SIZE_MAX;
        int sgn = 0;
        for (auto& [row, x] : D[k][b1])
          if ((sgn = identity_sign(x)) != 0) {
            b2 = row;
            break;
          }
        if (b2 == SIZE_MAX) continue;
        changed = true;
        Col gamma = D[k][b1];
        gamma.erase(b2);
        std::vector<std::pair<size_t, DottedCobordism>> delta;
        for (size_t col : R[k][b2])
          if (col != b1) delta.emplace_back(col, D[k][col].at(b2));
        if (track) {
          // h += -sgn * G[k](:, b1) ∘ F[k+1](b2, :)
          for (auto& [j, fx] : F[k + 1][b2])
            for (auto& [i, gx] : G[k][b1]) put(H[k + 1], i, j, scale(compose(gx, fx), -sgn));
          for (auto& [r, gm] : gamma) {
            Col& row = F[k + 1][r];
            Col src = F[k + 1][b2];
            col_axpy(row, src, nullptr, &gm, -sgn);
          }
          for (auto& [cidx, dx] : delta) {
            Col& colg = G[k][cidx];
            col_axpy(colg, G[k][b1], &dx, nullptr, -sgn);
          }
          F[k].erase(b1);
          F[k + 1].erase(b2);
          G[k].erase(b1);
          G[k + 1].erase(b2);
        }
        for (auto& [r, gm] : gamma)
          for (auto& [cidx, dx] : delta) {
            DottedCobordism upd = scale(compose(gm, dx), -sgn);
            auto it = D[k][cidx].find(r);
            set_entry(k, r, cidx, it == D[k][cidx].end() ? upd : add(it->second, upd));
          }
        // drop b1 (degree k) and b2 (degree k+1)
        for (auto& [row, x] : D[k][b1]) R[k][row].erase(b1);
        D[k][b1].clear();
        for (size_t col : R[k][b2]) D[k][col].erase(b2);
        R[k][b2].clear();
        if (k >= 1) {
          for (size_t col : R[k - 1][b1]) D[k - 1][col].erase(b1);
          R[k - 1][b1].clear();
        }
        if (k + 2 < n) {
          for (auto& [row, x] : D[k + 1][b2]) R[k + 1][row].erase(b2);
          D[k + 1][b2].clear();
        }
        alive[k][b1] = 0;
        alive[k + 1][b2] = 0;
      }
    }
  }

  Equivalence e;
  e.tracked = track;
  FormalComplex& r = e.reduced;
  r.hmin = c.hmin;
  r.objects.resize(n);
  std::vector<std::vector<size_t>> renum(n);
  for (size_t k = 0; k < n; ++k) {
    renum[k].assign(c.objects[k].size(), SIZE_MAX);
    for (size_t i = 0; i < c.objects[k].size(); ++i)
      if (alive[k][i]) {
        renum[k][i] = r.objects[k].size();
        r.objects[k].push_back(c.objects[k][i]);
      }
  }
  r.d.resize(c.d.size());
  for (size_t k = 0; k + 1 < n; ++k) {
    r.d[k] = mat_zero(r.objects[k + 1].size(), r.objects[k].size());
    for (size_t col = 0; col < D[k].size(); ++col)
      for (auto& [row, x] : D[k][col]) r.d[k].at.emplace(std::make_pair(renum[k + 1][row], renum[k][col]), x);
  }
  if (!track) return e;
  e.f.resize(n);
  e.g.resize(n);
  for (size_t k = 0; k < n; ++k) {
    e.f[k] = mat_zero(r.objects[k].size(), c.objects[k].size());
    for (auto& [row, entries] : F[k])
      for (auto& [j, x] : entries) e.f[k].at.emplace(std::make_pair(renum[k][row], j), x);
    e.g[k] = mat_zero(c.objects[k].size(), r.objects[k].size());
    for (auto& [col, entries] : G[k])
      for (auto& [i, x] : entries) e.g[k].at.emplace(std::make_pair(i, renum[k][col]), x);
  }
  e.h = std::move(H);
  e.h_reduced = zero_homotopy(r);
  return e;
}

// ---- TQFT -------------------------------------------------------------------------

namespace {

void require_khovanov(const FrobeniusTheory& t) {
  if (t.bn()) throw InputError("the dotted category with two dots = 0 maps only to the Khovanov theories");
}

}  // namespace

std::vector<std::map<uint64_t, Scalar>> tqft(const DottedCobordism& c, const FrobeniusTheory& t) {
  require_khovanov(t);
  if (c.src.nb || c.tgt.nb) throw InputError("tqft needs closed objects (nonempty boundary)");
  const int cs = c.src.circles;
  const uint64_t full = (uint64_t{1} << cs) - 1;
  std::vector<std::map<uint64_t, Scalar>> cols(uint64_t{1} << cs);
  for (auto& [m, coeff] : c.terms) {
    // a disk with d dots on a source circle labelled a gives eps(x^d a): nonzero iff d + a = 1
    uint64_t a = ~m & full;
    uint64_t out = m >> cs;
    Scalar s = t.ring.from_int(coeff);
    auto& col = cols[a];
    col[out] = t.ring.add(col[out], s);
    if (t.ring.is_zero(col[out])) col.erase(out);
  }
  return cols;
}

ChainComplex tqft(const FormalComplex& c, const FrobeniusTheory& t) {
  require_khovanov(t);
  ChainComplex cc;
  cc.theory = t;
  std::vector<std::vector<uint64_t>> offset(c.objects.size());
  uint64_t total = 0;
  for (size_t k = 0; k < c.objects.size(); ++k)
    for (const PlanarTangle& o : c.objects[k]) {
      if (o.nb) throw InputError("tqft needs closed objects (nonempty boundary)");
      offset[k].push_back(total);
      for (uint64_t L = 0; L < (uint64_t{1} << o.circles); ++L) {
        cc.hdeg.push_back(c.hmin + static_cast<int>(k));
        cc.qdeg.push_back(o.circles - 2 * popcount(L) + o.shift);
      }
      total += uint64_t{1} << o.circles;
    }
  std::vector<std::vector<std::pair<Gen, int64_t>>> cols(total);
  for (size_t k = 0; k < c.d.size(); ++k)
    for (auto& [rc, x] : c.d[k].at) {
      auto m = tqft(x, t);
      for (uint64_t a = 0; a < m.size(); ++a)
        for (auto& [b, s] : m[a]) {
          int64_t v = t.ring.tag == RingTag::Int ? s.z : 1;
          cols[offset[k][rc.second] + a].emplace_back(static_cast<Gen>(offset[k + 1][rc.first] + b), v);
        }
    }
  cc.dptr.assign(1, 0);
  for (auto& col : cols) {
    std::sort(col.begin(), col.end());
    for (auto& [g, v] : col) {
      cc.dtgt.push_back(g);
      cc.dval.push_back(v);
    }
    cc.dptr.push_back(cc.dtgt.size());
  }
  return cc;
}

std::vector<std::map<uint64_t, Scalar>> tqft_raw(const RawCobordism& w, const FrobeniusTheory& t) {
  require_khovanov(t);
  if (w.src.nb || w.tgt.nb) throw InputError("tqft needs closed objects (nonempty boundary)");
  const CycleLayout L = cycle_layout(w.src, w.tgt);
  validate_raw(w, L.total);
  const Ring& R = t.ring;
  const int cs = w.src.circles;
  std::vector<std::map<uint64_t, Scalar>> cols(uint64_t{1} << cs);
  for (uint64_t a = 0; a < cols.size(); ++a) {
    for (const RawTerm& term : w.terms) {
      // product over components of their outputs, as (target mask, coefficient)
      std::map<uint64_t, Scalar> acc{{0, R.from_int(term.coeff)}};
      for (const RawComponent& comp : term.comps) {
        AlgElem v = unit(t);
        std::vector<int> outs;
        for (int cy : comp.cycles) {
          if (cy < cs) v = multiply(t, v, alg_basis(t, static_cast<int>((a >> cy) & 1)));
          else outs.push_back(cy - cs);
        }
        for (int i = 0; i < comp.dots; ++i) v = times_x(t, v);
        for (int g = 0; g < comp.genus; ++g) {
          Alg2 dv = comultiply(t, v);
          AlgElem s{};
          for (int p = 0; p < 2; ++p)
            for (int q = 0; q < 2; ++q) {
              AlgElem prod = multiply(t, alg_basis(t, p), alg_basis(t, q));
              for (int l = 0; l < 2; ++l) s[l] = R.add(s[l], R.mul(dv[2 * p + q], prod[l]));
            }
          v = s;
        }
        // iterated comultiplication onto the outputs
        std::map<uint64_t, Scalar> piece;
        if (outs.empty()) {
          piece[0] = counit(t, v);
        } else {
          std::map<std::vector<int>, Scalar> st;
          for (int l = 0; l < 2; ++l)
            if (!R.is_zero(v[l])) st[{l}] = v[l];
          for (size_t f = 1; f < outs.size(); ++f) {
            std::map<std::vector<int>, Scalar> nx;
            for (auto& [labels, s] : st) {
              Alg2 dl = comultiply(t, alg_basis(t, labels.back()));
              for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q) {
                  if (R.is_zero(dl[2 * p + q])) continue;
                  std::vector<int> ext = labels;
                  ext.back() = p;
                  ext.push_back(q);
                  Scalar& slot = nx[ext];
                  slot = R.add(slot, R.mul(s, dl[2 * p + q]));
                }
            }
            st.swap(nx);
          }
          for (auto& [labels, s] : st) {
            uint64_t m = 0;
            for (size_t f = 0; f < outs.size(); ++f)
              if (labels[f]) m |= uint64_t{1} << outs[f];
            piece[m] = R.add(piece[m], s);
          }
        }
        std::map<uint64_t, Scalar> nacc;
        for (auto& [m1, s1] : acc)
          for (auto& [m2, s2] : piece) {
            Scalar& slot = nacc[m1 | m2];
            slot = R.add(slot, R.mul(s1, s2));
          }
        acc.swap(nacc);
      }
      for (auto& [m, s] : acc) cols[a][m] = R.add(cols[a][m], s);
    }
    for (auto it = cols[a].begin(); it != cols[a].end();)
      it = R.is_zero(it->second) ? cols[a].erase(it) : std::next(it);
  }
  return cols;
}

// ---- Reidemeister I ---------------------------------------------------------------

R1Proof r1_morphisms(bool corrupt_h_dot) {
  R1Proof p;
  // positive kink: the under-strand enters at 1, loops through 2, leaves at 3
  TangleDiagram kink;
  kink.crossings = {Crossing{{1, 3, 2, 2}, 1}};
  kink.ends = {1, 3};
  p.kink = bracket(kink);
  TangleDiagram arc;
  arc.ends = {1, 1};
  p.arc = bracket(arc);
  const PlanarTangle& a0 = p.kink.objects[0][0];  // arc ⊔ circle
  const PlanarTangle& a1 = p.kink.objects[1][0];  // arc
  const PlanarTangle& t0 = p.arc.objects[0][0];
  if (a0.circles != 1 || a1.circles != 0) throw std::logic_error("internal: unexpected kink smoothings");
  p.d = p.kink.d[0].at.at({0, 0});
  // cycle 0 is the arc, cycle 1 the circle
  p.f0 = single(a0, t0, 0, 1);                             // cap the circle
  p.g0 = add(single(t0, a0, 0b10, 1), single(t0, a0, 0b01, -1));  // dotted cup minus dotted strand
  p.h1 = single(a1, a0, corrupt_h_dot ? 0b10 : 0, -1);     // minus the cup
  return p;
}

std::pair<DottedCobordism, DottedCobordism> closed_r1_morphisms(const LinkDiagram& k, int strand) {
  if (k.size() != 1 || k.crossings()[0].sign < 0 || !k.loops().empty() || !k.has_arc(strand))
    throw InputError("expected a one-crossing positive kink diagram");
  std::vector<int> circle_of;
  if (compute_circles(k, 0, circle_of) != 2) throw InputError("expected a one-crossing positive kink diagram");
  const int s = circle_of[k.arc_index(strand)], l = 1 - s;
  const PlanarTangle o = PlanarTangle::empty(1, 0);
  const PlanarTangle two = PlanarTangle::empty(2, 1);
  // cycles: 0 = unknot circle, 1 + i = circle i of the kink smoothing
  RawCobordism f{two, o, {RawTerm{1, {RawComponent{{s, 2}, 0, 0}, RawComponent{{l}, 0, 0}}}}};
  RawCobordism g{o, two,
                 {RawTerm{1, {RawComponent{{0, 1 + s}, 0, 0}, RawComponent{{1 + l}, 0, 1}}},
                  RawTerm{-1, {RawComponent{{0, 1 + s}, 0, 1}, RawComponent{{1 + l}, 0, 0}}}}};
  return {normalize(f), normalize(g)};
}

R1Certificate verify_r1_proof(bool corrupt_h_dot) {
  R1Certificate cert;
  R1Proof p = r1_morphisms(corrupt_h_dot);
  std::ostringstream tr;
  tr << "[T]:\n" << dump(p.kink) << "[T']:\n" << dump(p.arc);
  tr << "f0 = " << to_string(p.f0) << "\ng0 = " << to_string(p.g0) << "\nh1 = " << to_string(p.h1) << "\n";
  auto step = [&](const std::string& name, const DottedCobordism& residue) {
    bool ok = residue.is_zero();
    tr << name << ": residue " << to_string(residue) << "\n";
    cert.steps.emplace_back(name, ok);
    if (!ok && cert.failed_step.empty()) cert.failed_step = name;
  };
  std::string why;
  bool complexes_ok = check_complex(p.kink, &why) && check_complex(p.arc, &why);
  cert.steps.emplace_back("complexes", complexes_ok);
  if (!complexes_ok) cert.failed_step = "complexes";
  const PlanarTangle& a0 = p.kink.objects[0][0];
  const PlanarTangle& a1 = p.kink.objects[1][0];
  const PlanarTangle& t0 = p.arc.objects[0][0];
  // g is a chain map: d∘g0 = 0 since [T'] has no degree 1
  step("g chain map (d g = 0)", compose(p.d, p.g0));
  // f1 = 0 and [T'] has no differential, so f is a chain map trivially
  cert.steps.emplace_back("f chain map (trivial)", true);
  step("f g = id", add(compose(p.f0, p.g0), negate(identity(t0))));
  // degree 0: g f - id = h d
  step("g f - id = h d (degree 0)", add(add(compose(p.g0, p.f0), negate(identity(a0))), negate(compose(p.h1, p.d))));
  // degree 1: g1 f1 = 0, so -id = d h
  step("g f - id = d h (degree 1)", add(negate(identity(a1)), negate(compose(p.d, p.h1))));
  cert.pass = cert.failed_step.empty();
  cert.trace = tr.str();
  return cert;
}

}  // namespace kcob::formal
