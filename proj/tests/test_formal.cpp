#include <doctest.h>

#include <random>

#include "kcob/cobmap.hpp"
#include "kcob/formal.hpp"
#include "formal_random.hpp"

using namespace kcob;
using namespace kcob::formal;
using namespace kcob::formal::testing;

namespace {

DottedCobordism random_canonical(std::mt19937& rng, const PlanarTangle& s, const PlanarTangle& t) {
  DottedCobordism c;
  c.src = s;
  c.tgt = t;
  const int n = cycle_layout(s, t).total;
  int terms = 1 + rng() % 3;
  for (int i = 0; i < terms; ++i) {
    uint64_t m = n ? rng() % (uint64_t{1} << n) : 0;
    c.terms[m] += 1 + static_cast<int64_t>(rng() % 3);
  }
  return c;
}

PlanarTangle arc2() {
  PlanarTangle t;
  t.nb = 2;
  t.match = {1, 0};
  return t;
}

}  // namespace

TEST_CASE("local relations") {
  RawCobordism w;
  w.src = w.tgt = PlanarTangle::empty();
  w.terms = {RawTerm{1, {RawComponent{{}, 0, 0}}}};
  CHECK(normalize(w).is_zero());  // sphere
  w.terms = {RawTerm{3, {RawComponent{{}, 0, 1}}}};
  CHECK(normalize(w).terms == std::map<uint64_t, int64_t>{{0, 3}});  // dotted sphere
  w.terms = {RawTerm{1, {RawComponent{{}, 1, 0}}}};
  CHECK(normalize(w).terms == std::map<uint64_t, int64_t>{{0, 2}});  // torus
  w.terms = {RawTerm{1, {RawComponent{{}, 0, 2}}}};
  CHECK(normalize(w).is_zero());
  // tube between two disks: one circle in, one out
  RawCobordism tube;
  tube.src = PlanarTangle::empty(1);
  tube.tgt = PlanarTangle::empty(1);
  tube.terms = {RawTerm{1, {RawComponent{{0, 1}, 0, 0}}}};
  CHECK(normalize(tube).terms == std::map<uint64_t, int64_t>{{0b01, 1}, {0b10, 1}});
  CHECK(normalize(tube) == identity(PlanarTangle::empty(1)));
  // boundary mismatch
  tube.terms[0].comps[0].cycles = {0};
  CHECK_THROWS_AS(normalize(tube), InputError);
  CHECK_THROWS_AS(compose(identity(arc2()), identity(PlanarTangle::empty(1))), InputError);
}

TEST_CASE("composition") {
  std::mt19937 rng(11);
  // identity is neutral
  for (int i = 0; i < 30; ++i) {
    int nb = 2 * static_cast<int>(rng() % 3);
    PlanarTangle s = random_tangle(rng, nb, 2), t = random_tangle(rng, nb, 2);
    DottedCobordism c = random_canonical(rng, s, t);
    CHECK(compose(identity(t), c) == c);
    CHECK(compose(c, identity(s)) == c);
  }
  // (id ⊗ eps) ∘ Delta = id on one circle
  PlanarTangle one = PlanarTangle::empty(1), two = PlanarTangle::empty(2);
  RawCobordism delta{one, two, {RawTerm{1, {RawComponent{{0, 1, 2}, 0, 0}}}}};
  RawCobordism id_eps{two, one, {RawTerm{1, {RawComponent{{0, 2}, 0, 0}, RawComponent{{1}, 0, 0}}}}};
  CHECK(compose(normalize(id_eps), normalize(delta)) == identity(one));
  // degrees add, and the closed-form composition agrees with rewriting the stack
  for (int i = 0; i < 50; ++i) {
    int nb = 2 * static_cast<int>(rng() % 3);
    PlanarTangle a = random_tangle(rng, nb, 2), b = random_tangle(rng, nb, 2), c = random_tangle(rng, nb, 2);
    a.shift = static_cast<int>(rng() % 5) - 2;
    b.shift = static_cast<int>(rng() % 5) - 2;
    c.shift = static_cast<int>(rng() % 5) - 2;
    DottedCobordism g = random_canonical(rng, a, b), f = random_canonical(rng, b, c);
    g.terms = {*g.terms.begin()};
    f.terms = {*f.terms.begin()};
    DottedCobordism fg = compose(f, g);
    const int want = f.degree() + g.degree();
    for (auto& [m, coeff] : fg.terms) CHECK(fg.term_degree(m) == want);
    CHECK(fg == normalize(stack(f, g), 1 + i));
  }
}

TEST_CASE("normalization is confluent") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 500; ++i) {
    RawCobordism w = random_word(rng, 2 * static_cast<int>(rng() % 3), 4);
    DottedCobordism a = normalize(w, 1 + 2 * i), b = normalize(w, 2 + 2 * i), c = normalize(w);
    REQUIRE(a == b);
    REQUIRE(a == c);
    for (auto& [m, coeff] : a.terms) CHECK(coeff != 0);
  }
}

TEST_CASE("four-tube relation") {
  PlanarTangle four = PlanarTangle::empty(4);
  RawCobordism cups{PlanarTangle::empty(), four, {RawTerm{1, {{{0}, 0, 0}, {{1}, 0, 0}, {{2}, 0, 0}, {{3}, 0, 0}}}}};
  CHECK(check_4tu(cups, {0, 1, 2, 3}));
  CHECK(check_4tu(cups, {2, 0, 3, 1}));
  // two sites on one component
  CHECK(check_4tu(cups, {0, 0, 1, 2}));
  // on an arc sheet and a circle cylinder, as in the kink identity
  PlanarTangle a0 = arc2();
  a0.circles = 1;
  RawCobordism sheets{a0, a0, {RawTerm{1, {{{0}, 0, 0}, {{1, 2}, 0, 0}}}}};
  CHECK(check_4tu(sheets, {0, 0, 1, 1}));
  CHECK(check_4tu(sheets, {0, 1, 0, 1}));
}

TEST_CASE("bracket") {
  TangleDiagram kink;
  kink.crossings = {Crossing{{1, 3, 2, 2}, 1}};
  kink.ends = {1, 3};
  FormalComplex k = bracket(kink);
  REQUIRE(k.objects.size() == 2);
  CHECK(k.objects[0].size() == 1);
  CHECK(k.objects[1].size() == 1);
  CHECK(k.d[0].at.size() == 1);
  CHECK(check_complex(k));

  auto kz = theory_from_flag("kh-z");
  for (const LinkDiagram& d : {from_braid({1, 1, 1}, 2), from_braid({1, -2, 1, -2}, 3), from_braid({1, 1}, 2)}) {
    std::vector<std::vector<Vertex>> verts;
    FormalComplex fc = bracket(d, kDefaultBudget, &verts);
    std::string why;
    CHECK_MESSAGE(check_complex(fc, &why), why);
    GradedComplex gc = build_complex(d, kz);
    ChainComplex tc = tqft(fc, kz);
    REQUIRE(tc.size() == gc.cc.size());
    // generator of (vertex, labels) in the tqft complex
    std::map<std::pair<Vertex, uint64_t>, Gen> tq;
    Gen next = 0;
    for (auto& row : verts)
      for (Vertex v : row)
        for (uint64_t L = 0; L < (uint64_t{1} << gc.circles(v)); ++L) tq[{v, L}] = next++;
    for (Gen g = 0; g < gc.cc.size(); ++g) {
      auto [v, L] = gc.decode(g);
      Gen t = tq.at({v, L});
      CHECK(tc.hdeg[t] == gc.cc.hdeg[g]);
      CHECK(tc.qdeg[t] == gc.cc.qdeg[g]);
      std::map<Gen, int64_t> a, b;
      for (uint64_t e = gc.cc.dptr[g]; e < gc.cc.dptr[g + 1]; ++e) {
        auto [w, M] = gc.decode(gc.cc.dtgt[e]);
        a[tq.at({w, M})] += gc.cc.dval[e];
      }
      for (uint64_t e = tc.dptr[t]; e < tc.dptr[t + 1]; ++e) b[tc.dtgt[e]] += tc.dval[e];
      CHECK(a == b);
    }
    CHECK(homology(tc) == homology(gc.cc));
  }
}

TEST_CASE("tqft") {
  auto kz = theory_from_flag("kh-z");
  FormalComplex u = bracket(parse_pd("pd 0\nloop 1\n"));
  ChainComplex cu = tqft(u, kz);
  CHECK(cu.size() == 2);
  CHECK(cu.nnz() == 0);
  // dotted cylinder multiplies by x
  PlanarTangle one = PlanarTangle::empty(1);
  RawCobordism dotted{one, one, {RawTerm{1, {RawComponent{{0, 1}, 0, 1}}}}};
  auto m = tqft(normalize(dotted), kz);
  CHECK(m[0] == std::map<uint64_t, Scalar>{{1, kz.ring.one()}});
  CHECK(m[1].empty());
  // neck cutting: id = x (iota eps) + (iota eps) x as maps A -> A
  auto id = tqft(identity(one), kz);
  CHECK(id[0] == std::map<uint64_t, Scalar>{{0, kz.ring.one()}});
  CHECK(id[1] == std::map<uint64_t, Scalar>{{1, kz.ring.one()}});
  CHECK_THROWS_AS(tqft(identity(arc2()), kz), InputError);
  CHECK_THROWS_AS(tqft(identity(one), theory_from_flag("bn-f2h")), InputError);
  // random closed words: canonical form and direct structure maps agree
  std::mt19937 rng(5);
  for (int i = 0; i < 200; ++i) {
    RawCobordism w = random_word(rng, 0, 4);
    CHECK(tqft(normalize(w), kz) == tqft_raw(w, kz));
  }
}

TEST_CASE("delooping") {
  FormalComplex single;
  single.objects = {{PlanarTangle::empty(1, 0)}};
  Equivalence e = deloop(single);
  REQUIRE(e.reduced.objects[0].size() == 2);
  CHECK(e.reduced.objects[0][0].shift == 1);
  CHECK(e.reduced.objects[0][1].shift == -1);
  std::string why;
  CHECK_MESSAGE(verify_equivalence(single, e, &why), why);

  FormalComplex free_arc;
  free_arc.objects = {{arc2()}};
  CHECK(deloop(free_arc).reduced.objects == free_arc.objects);

  auto kz = theory_from_flag("kh-z");
  for (const LinkDiagram& d : {from_braid({1, 1, 1}, 2), from_braid({1, 1}, 2)}) {
    FormalComplex fc = bracket(d);
    Equivalence dl = deloop(fc);
    CHECK_MESSAGE(verify_equivalence(fc, dl, &why), why);
    CHECK(check_complex(dl.reduced));
    CHECK(dl.reduced.object_count() == fc.generator_count());
    CHECK(homology(tqft(dl.reduced, kz)) == homology(tqft(fc, kz)));
  }
}

TEST_CASE("gaussian elimination") {
  std::string why;
  // kink reduces to the arc
  R1Proof p = r1_morphisms();
  Equivalence dl = deloop(p.kink);
  Equivalence gr = gauss_reduce(dl.reduced);
  CHECK_MESSAGE(verify_equivalence(dl.reduced, gr, &why), why);
  Equivalence both = then(p.kink, dl, gr);
  CHECK_MESSAGE(verify_equivalence(p.kink, both, &why), why);
  REQUIRE(both.reduced.object_count() == 1);
  CHECK(both.reduced.objects[0] == p.arc.objects[0]);

  // R2 pair reduces to two parallel strands in degree 0
  TangleDiagram r2;
  r2.crossings = {Crossing{{1, 5, 2, 4}, 1}, Crossing{{2, 5, 3, 6}, -1}};
  r2.ends = {1, 4, 6, 3};
  FormalComplex c2 = bracket(r2);
  CHECK(check_complex(c2));
  Equivalence d2 = deloop(c2);
  Equivalence g2 = gauss_reduce(d2.reduced);
  Equivalence e2 = then(c2, d2, g2);
  CHECK_MESSAGE(verify_equivalence(c2, e2, &why), why);
  REQUIRE(e2.reduced.object_count() == 1);
  const PlanarTangle& straight = e2.reduced.objects[1][0];
  CHECK(e2.reduced.hmin + 1 == 0);
  CHECK(straight.match == std::vector<int>{3, 2, 1, 0});
  CHECK(straight.shift == 0);
  CHECK(straight.circles == 0);

  // links: reduced complex has the same homology
  auto kz = theory_from_flag("kh-z"), f2 = theory_from_flag("kh-f2");
  for (const LinkDiagram& d : {from_braid({1, 1, 1}, 2), from_braid({1, -2, 1, -2}, 3), from_braid({1, 1}, 2)}) {
    FormalComplex fc = bracket(d);
    Equivalence a = deloop(fc);
    Equivalence b = gauss_reduce(a.reduced);
    CHECK_MESSAGE(verify_equivalence(a.reduced, b, &why), why);
    CHECK(check_complex(b.reduced));
    CHECK(homology(tqft(b.reduced, kz)) == homology(build_complex(d, kz).cc));
    CHECK(homology(tqft(b.reduced, f2)) == homology(build_complex(d, f2).cc));
    CHECK(b.reduced.object_count() < fc.generator_count());
  }
}

TEST_CASE("reidemeister I certificate") {
  R1Certificate ok = verify_r1_proof();
  CHECK(ok.pass);
  CHECK(ok.failed_step.empty());
  CHECK(ok.steps.size() >= 5);
  R1Certificate bad = verify_r1_proof(true);
  CHECK_FALSE(bad.pass);
  CHECK(bad.failed_step == "g f - id = h d (degree 0)");
}

TEST_CASE("closed kink morphisms match the movie maps") {
  auto kz = theory_from_flag("kh-z");
  LinkDiagram unknot = parse_pd("pd 0\nloop 1\n");
  int found = 0;
  for (const Move& mv : reidemeister_sites(unknot, false)) {
    if (mv.type != MoveType::R1Plus) continue;
    Movie up = make_movie(unknot, {mv});
    const LinkDiagram& k = up.target();
    if (k.crossings()[0].sign < 0) continue;
    auto [f0, g0] = closed_r1_morphisms(k, 1);
    MovieMap mu(up, kz), md(reverse(up), kz);
    const GradedComplex& ck = mu.target();
    REQUIRE(ck.circles(0) == 2);
    auto gm = tqft(g0, kz), fm = tqft(f0, kz);
    for (uint64_t a = 0; a < 2; ++a) {
      ChainElement img = mu.apply_step(0, {{mu.source().gen(0, a), kz.ring.one()}});
      ChainElement want;
      for (auto& [b, s] : gm[a]) want[ck.gen(0, b)] = s;
      CHECK(img == want);
    }
    for (uint64_t a = 0; a < 4; ++a) {
      ChainElement img = md.apply_step(0, {{ck.gen(0, a), kz.ring.one()}});
      ChainElement want;
      for (auto& [b, s] : fm[a]) want[md.target().gen(0, b)] = s;
      CHECK(img == want);
    }
    ++found;
  }
  CHECK(found > 0);
}
