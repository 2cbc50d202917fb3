#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "kcob/invariants.hpp"

using namespace kcob;

namespace {

std::string slurp(const std::string& rel) {
  std::ifstream f(std::string(KCOB_DATA_DIR) + "/" + rel);
  if (!f) throw std::runtime_error("missing data file " + rel);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

Movie movie(const std::string& name) { return parse_movie(slurp("movies/" + name + ".movie")); }

}  // namespace

TEST_CASE("psi bigrading on random braids") {
  std::mt19937 rng(7);
  auto f2 = theory_from_flag("kh-f2");
  for (int trial = 0; trial < 25; ++trial) {
    int strands = 2 + rng() % 3;
    std::vector<int> word(1 + rng() % 7);
    for (int& l : word) l = static_cast<int>(1 + rng() % (strands - 1)) * (rng() % 2 ? 1 : -1);
    PsiResult r = plamenevskaya(word, strands, f2);
    INFO("trial ", trial);
    CHECK(r.cycle);
    CHECK(r.h == 0);
    CHECK(r.q == r.writhe - r.strands);
  }
}

TEST_CASE("psi of positive and quasipositive braids") {
  auto kz = theory_from_flag("kh-z");
  PsiResult t = plamenevskaya({1, 1, 1}, 2, kz);
  CHECK(t.nonzero);
  CHECK(t.q == 1);
  PsiResult neg = plamenevskaya({-1, -1, -1}, 2, kz);
  CHECK(neg.cycle);
  CHECK_FALSE(neg.nonzero);
  PsiResult k = plamenevskaya({-2, -2, 1, 2, 2, 2, 1, -2, 1, 1}, 3, theory_from_flag("kh-f2"));
  CHECK(k.cycle);
  CHECK(k.nonzero);
}

TEST_CASE("s-invariant") {
  CHECK(s_invariant(parse_pd("pd 0\nloop 1\n")) == 0);
  CHECK(s_invariant(from_braid({1, 1, 1}, 2)) == 2);
  CHECK(s_invariant(from_braid({-1, -1, -1}, 2)) == -2);
  CHECK(s_invariant(from_braid({1, -2, 1, -2}, 3)) == 0);
  CHECK(s_invariant(from_braid({1, 1, 1, 1, 1}, 2)) == 4);
  CHECK_THROWS_AS(s_invariant(from_braid({1, 1}, 2)), InputError);
}

TEST_CASE("torsion profile") {
  for (auto d : {from_braid({1, 1, 1}, 2), from_braid({1, -2, 1, -2}, 3), from_braid({1, 1}, 2), pretzel({3, -3, 3})}) {
    TorsionProfile p = torsion_profile(d);
    const int ncomp = static_cast<int>(d.components().size());
    for (size_t r = 1; r < p.pages.size(); ++r) CHECK(p.total(r) <= p.total(r - 1));
    CHECK(p.total(p.pages.size() - 1) == (1 << ncomp));
    // page 1 is Khovanov homology over F2
    HomologyModule kh = homology(build_complex(d, theory_from_flag("kh-f2")).cc);
    std::map<std::pair<int, int>, int> want;
    for (auto& [hq, g] : kh.groups)
      if (g.free) want[hq] = static_cast<int>(g.free);
    std::map<std::pair<int, int>, int> got;
    for (auto& [hq, n] : p.pages[0])
      if (n) got[hq] = n;
    CHECK(got == want);
  }
}

TEST_CASE("bar-natan generators are cycles") {
  for (auto d : {from_braid({1, 1, 1}, 2), from_braid({1, 1}, 2), pretzel({3, -3, 3})}) {
    GradedComplex c = build_complex(d, theory_from_flag("bn-f2h"));
    auto gens = bn_generators(c);
    CHECK(gens.size() == (size_t{1} << d.components().size()));
    for (auto& g : gens) CHECK(g.cycle);
    for (auto& g : theta_cycles(c)) CHECK(g.cycle);
  }
  CHECK_THROWS_AS(bn_generators(build_complex(from_braid({1, 1, 1}, 2), theory_from_flag("kh-z"))), InputError);
}

TEST_CASE("slice disks of 9_46 distinguished by phi") {
  auto f2 = theory_from_flag("kh-f2");
  MovieMap a(movie("9_46-minus-D"), f2), b(movie("9_46-minus-Dprime"), f2);
  CHECK(a.verify() == -1);
  CHECK(b.verify() == -1);
  ChainElement phi = parse_element(a.source(), slurp("classes/9_46-mirror-phi.json"));
  Gen g = phi.begin()->first;
  CHECK(a.source().cc.hdeg[g] == 0);
  CHECK(a.source().cc.qdeg[g] == -1);
  CHECK(is_zero(apply_d(a.source().cc, phi)));
  CHECK(a.apply(phi) == empty_unit(a.target()));
  CHECK(is_zero(b.apply(phi)));

  DifferenceClass dk = difference_class(movie("9_46-D"), movie("9_46-Dprime"), f2);
  CHECK_FALSE(dk.zero);
  auto bn = theory_from_flag("bn-f2h");
  DifferenceClass db = difference_class(movie("9_46-D"), movie("9_46-Dprime"), bn);
  CHECK_FALSE(db.zero);
  // H = 0 reduction of the Bar-Natan difference agrees with the Khovanov one
  ChainElement diff = project_h0(db.delta, bn.ring);
  for (auto& [gen, c] : dk.delta) add_term(diff, gen, c, f2.ring);
  MovieMap dmap(movie("9_46-D"), f2);
  CHECK(BlockHomology(dmap.target().cc, 0, 1).is_zero_class(diff));

  MovieMap abn(movie("9_46-minus-D"), bn), bbn(movie("9_46-minus-Dprime"), bn);
  auto thetas = theta_cycles(abn.source());
  REQUIRE(!thetas.empty());
  for (auto& t : thetas) {
    CHECK(t.h == 0);
    CHECK(t.q == -1);
    CHECK(abn.apply(t.element) == empty_unit(abn.target()));
    CHECK(bbn.apply(t.element) == empty_unit(bbn.target()));
  }
}

TEST_CASE("seifert surface movie of the left trefoil") {
  Movie s = movie("trefoil-left-seifert");
  CHECK(s.euler_characteristic() == -1);
  MovieMap f(s, theory_from_flag("kh-z"));
  CHECK(f.verify() == -1);
  ChainElement img = f.apply(empty_unit(f.source()));
  REQUIRE(img.size() == 1);
  const GradedComplex& t = f.target();
  CHECK(t.vertex_word(img.begin()->first) == "111");
  CHECK(t.label_word(img.begin()->first).find('x') == std::string::npos);
  Movie dual = movie("trefoil-right-seifert-dual");
  CHECK(dual.euler_characteristic() == -1);
  CHECK(MovieMap(dual, theory_from_flag("kh-z")).verify() == -1);
}

TEST_CASE("ribbon concordance double") {
  Movie c = movie("concordance-trefoil-8_11"), cr = movie("concordance-trefoil-8_11-reversed");
  CHECK(c.euler_characteristic() == 0);
  RibbonCertificate cert = ribbon_double_check(c, cr, theory_from_flag("kh-f2"));
  CHECK(cert.pass);
  CHECK_FALSE(cert.has_local_maxima);
  CHECK(cert.blocks > 0);
  // the reverse direction has a local maximum
  RibbonCertificate back = ribbon_double_check(cr, c, theory_from_flag("kh-f2"));
  CHECK_FALSE(back.pass);
  CHECK(back.has_local_maxima);
}
