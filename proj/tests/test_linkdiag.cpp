#include <doctest.h>

#include "kcob/linkdiag.hpp"
#include "kcob/moves.hpp"

using namespace kcob;

TEST_CASE("braid closure of the trefoil") {
  LinkDiagram d = from_braid({1, 1, 1}, 2);
  CHECK(d.size() == 3);
  CHECK(d.n_plus() == 3);
  CHECK(d.components().size() == 1);
  CHECK(resolve(d, "000").circle_count() == 2);
  CHECK(resolve(d, "111").circle_count() == 3);
  CHECK(edge_data(d, vertex_from_string("000"), 0).kind == EdgeKind::Merge);
  CHECK(edge_data(d, vertex_from_string("110"), 2).kind == EdgeKind::Split);
  CHECK(oriented_resolution(d) == 0);
}

TEST_CASE("empty braid gives an unlink") {
  LinkDiagram d = from_braid({}, 2);
  CHECK(d.size() == 0);
  CHECK(d.components().size() == 2);
  Laurent u = Laurent::monomial(1) + Laurent::monomial(-1);
  CHECK(kauffman_jones(d) == u * u);
}

TEST_CASE("10_148 braid") {
  LinkDiagram d = from_braid({-2, -2, 1, 2, 2, 2, 1, -2, 1, 1}, 3);
  CHECK(d.size() == 10);
  CHECK(d.n_plus() == 7);
  CHECK(d.n_minus() == 3);
  CHECK(d.components().size() == 1);
}

TEST_CASE("braid letter out of range") {
  CHECK_THROWS_AS(from_braid({3}, 3), InputError);
  CHECK_THROWS_AS(from_braid({1}, 0), InputError);
}

TEST_CASE("pd round trip and mirror") {
  LinkDiagram d = from_braid({1, -2, 1, -2}, 3);
  CHECK(parse_pd(serialize_pd(d)) == d);
  LinkDiagram m = mirror(d);
  CHECK(m.n_plus() == d.n_minus());
  CHECK(mirror(m) == d);
  CHECK(kauffman_jones(m) == kauffman_jones(d).bar());
}

TEST_CASE("pd parse errors") {
  CHECK_THROWS_AS(parse_pd("pd 1\nx 1 1 1 2 1\n"), InputError);
  CHECK_THROWS_AS(parse_pd("pd 1\nx 1 2 1\n"), InputError);
  CHECK_THROWS_AS(parse_pd("pd 2\nx 1 2 3 4 1\n"), InputError);
}

TEST_CASE("zero-crossing diagrams") {
  LinkDiagram u = parse_pd("pd 0\nloop 1\n");
  CHECK(u.components().size() == 1);
  CHECK(resolve(u, "").circle_count() == 1);
  CHECK(kauffman_jones(u) == Laurent::monomial(1) + Laurent::monomial(-1));
  LinkDiagram e = parse_pd("pd 0\n");
  CHECK(e.arc_count() == 0);
}

TEST_CASE("trefoil jones") {
  LinkDiagram d = from_braid({1, 1, 1}, 2);
  // q + q^3 + q^5 - q^9
  Laurent j = Laurent::monomial(1) + Laurent::monomial(3) + Laurent::monomial(5) - Laurent::monomial(9);
  CHECK(kauffman_jones(d) == j);
}
