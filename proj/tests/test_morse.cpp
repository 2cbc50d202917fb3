#include <doctest.h>

#include "alexander.hpp"
#include "kcob/khcomplex.hpp"

using namespace kcob;
using kcob::testing::alexander;
using V = std::vector<long>;

TEST_CASE("alexander oracle on braids") {
  CHECK(alexander(from_braid({1, 1, 1}, 2)) == V{1, -1, 1});
  CHECK(alexander(from_braid({1, -2, 1, -2}, 3)) == V{1, -3, 1});
  CHECK(alexander(from_braid({1, 1, 1, -2, -1, -1, -1, -2}, 3)) == V{1, -2, 3, -2, 1});
  CHECK(alexander(from_braid({1, 1, 2, -1, -3, 2, -3}, 4)) == V{2, -5, 2});
}

TEST_CASE("pretzel diagrams") {
  auto k = pretzel({3, 3, -3});
  CHECK(k.size() == 9);
  CHECK(k.components().size() == 1);
  CHECK(alexander(k) == V{2, -5, 2});
  CHECK(alexander(pretzel({5, 1, 1})) == V{3, -5, 3});
  CHECK(alexander(pretzel({3, 1, 3})) == V{4, -7, 4});
  auto t = pretzel({1, 1, 1});
  CHECK(alexander(t) == V{1, -1, 1});
  // pretzel(1,1,1) is a trefoil; Jones pins the handedness
  auto j = kauffman_jones(t), jr = kauffman_jones(from_braid({1, 1, 1}, 2));
  CHECK((j == jr || j == kauffman_jones(mirror(from_braid({1, 1, 1}, 2)))));
}

TEST_CASE("morse parse") {
  // a twisted band closed by one cap and one cup is an unknot
  auto kink = from_morse(parse_morse("open 0; cross 0 +; cross 0 +; cross 0 +; close 0"));
  CHECK(kink.size() == 3);
  CHECK(alexander(kink) == V{1});
  auto k = from_morse(parse_morse("open 0\nopen 2\ncross 1 +\ncross 1 +\ncross 1 +\nclose 0\nclose 0"));
  CHECK(alexander(k) == V{1, -1, 1});
  CHECK_THROWS_AS(parse_morse("wiggle 0"), InputError);
  CHECK_THROWS_AS(from_morse(parse_morse("open 0")), InputError);
  auto u = from_morse(parse_morse("open 0; close 0"));
  CHECK(u.size() == 0);
  CHECK(u.loops().size() == 1);
}
