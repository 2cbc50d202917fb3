#include <doctest.h>

#include "kcob/cobmap.hpp"

using namespace kcob;

namespace {

const char* kTorus = R"(frame
end
birth 1
saddle 1 1
saddle 1 2
death 1
frame
end
)";

bool homology_iso_f2(const MovieMap& f) {
  for (auto& b : induced_on_homology(f)) {
    if (b.matrix.size() != b.matrix[0].size()) return false;
    SNF s = smith_normal_form(b.matrix, b.matrix.size(), 2, false);
    if (s.rank() != b.matrix.size()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("closed surfaces") {
  auto kz = theory_from_flag("kh-z"), bn = theory_from_flag("bn-f2h");
  Movie torus = parse_movie(kTorus);
  CHECK(torus.euler_characteristic() == 0);
  CHECK(closed_surface_value(torus, kz).z == 2);
  CHECK(bn.ring.is_zero(closed_surface_value(torus, bn)));
  Movie sphere = parse_movie("frame\nend\nbirth 1\ndeath 1\n");
  CHECK(closed_surface_value(sphere, kz).z == 0);
}

TEST_CASE("movie parsing errors") {
  CHECK_THROWS_AS(parse_movie("birth 1\n"), InputError);
  CHECK_THROWS_AS(parse_movie("frame\nend\nfrank 1\n"), InputError);
  CHECK_THROWS_AS(parse_movie("frame\nend\nbirth 1\nframe\nend\n"), InputError);
  CHECK_THROWS_AS(parse_movie("frame\nend\ndeath 4\n"), InputError);
  CHECK_THROWS_AS(parse_movie("frame\nbraid 2 1 1 1\n"), InputError);
  Movie id = parse_movie("frame\nbraid 2 1 1 1\nend\n");
  CHECK(id.moves.empty());
  CHECK(id.euler_characteristic() == 0);
}

TEST_CASE("reidemeister step maps are chain maps and quasi-isomorphisms") {
  std::vector<LinkDiagram> ds = {from_braid({1, 1, 1}, 2), from_braid({1, -2, 1, -2}, 3), from_braid({1, 1}, 2)};
  int checked = 0;
  for (auto& d : ds) {
    for (const Move& mv : reidemeister_sites(d, false)) {
      Movie m = make_movie(d, {mv});
      for (const char* th : {"kh-z", "kh-f2", "bn-f2h"}) {
        MovieMap f(m, theory_from_flag(th));
        std::string why;
        INFO(move_to_string(mv), " ", th);
        CHECK_MESSAGE(f.verify(&why) == -1, why);
        if (std::string(th) == "kh-f2") CHECK(homology_iso_f2(f));
      }
      ++checked;
    }
  }
  CHECK(checked > 20);
}

TEST_CASE("more closed and punctured surfaces") {
  auto kz = theory_from_flag("kh-z"), bn = theory_from_flag("bn-f2h");
  Movie g2 = parse_movie("frame\nend\nbirth 1\nsaddle 1 1\nsaddle 1 2\nsaddle 1 1\nsaddle 1 2\ndeath 1\n");
  CHECK(g2.euler_characteristic() == -2);
  CHECK(closed_surface_value(g2, kz).z == 0);
  Movie pt = parse_movie("frame\nend\nbirth 1\nsaddle 1 1\nsaddle 1 2\n");
  MovieMap f(pt, kz);
  CHECK(f.verify() == -1);
  ChainElement img = f.apply(empty_unit(f.source()));
  REQUIRE(img.size() == 1);
  CHECK(f.target().label_word(img.begin()->first) == "x");
  CHECK(img.begin()->second.z == 2);
  // in the Bar-Natan theory the same surface sends 1 to H
  MovieMap fb(pt, bn);
  ChainElement ib = fb.apply(empty_unit(fb.source()));
  REQUIRE(ib.size() == 1);
  CHECK(fb.target().label_word(ib.begin()->first) == "1");
}

TEST_CASE("composition and reverse mirror") {
  auto kz = theory_from_flag("kh-z");
  LinkDiagram d = from_braid({1, 1, 1}, 2);
  auto sites = reidemeister_sites(d, false);
  REQUIRE(sites.size() >= 2);
  Movie m1 = make_movie(d, {sites[0]});
  auto next = reidemeister_sites(m1.target(), false);
  REQUIRE(!next.empty());
  Movie m2 = make_movie(m1.target(), {next[0]});
  Movie both = concat(m1, m2);
  MovieMap f1(m1, kz), f2(m2, kz), f12(both, kz);
  for (Gen g = 0; g < f1.source().cc.size(); ++g) {
    ChainElement e{{g, kz.ring.one()}};
    CHECK(f12.apply(e) == f2.apply(f1.apply(e)));
  }
  Movie s = parse_movie("frame\nend\nbirth 1\nsaddle 1 1\nsaddle 1 2\n");
  Movie rm = reverse_mirror(reverse_mirror(s));
  REQUIRE(rm.frames.size() == s.frames.size());
  for (size_t i = 0; i < s.frames.size(); ++i) CHECK(equal_up_to_order(rm.frames[i], s.frames[i]));
  for (size_t i = 0; i < s.moves.size(); ++i) CHECK(rm.moves[i].type == s.moves[i].type);
  CHECK(reverse_mirror(s).euler_characteristic() == s.euler_characteristic());
  CHECK(reverse(both).euler_characteristic() == both.euler_characteristic());
}

TEST_CASE("bar-natan handle is multiplication by H") {
  auto bn = theory_from_flag("bn-f2h");
  LinkDiagram d = from_braid({1, 1, 1}, 2);
  Movie split = make_movie(d, {parse_move("saddle 1 1")});
  REQUIRE(split.target().loops().size() == 1);
  Move merge = parse_move("saddle 1 " + std::to_string(split.target().loops()[0]));
  Movie handle = concat(split, make_movie(split.target(), {merge}));
  REQUIRE(equal_up_to_order(handle.target(), d));
  CHECK(handle.euler_characteristic() == -2);
  MovieMap f(handle, bn), id(make_movie(d, {}), bn);
  CHECK(f.verify() == -1);
  CHECK(bn_equal_on_homology(f, id, bn.ring.monomial(1, 1)));
}
