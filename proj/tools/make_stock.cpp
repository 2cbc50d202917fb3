// Regenerates the diagrams, movies and classes under data/.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "kcob/cobmap.hpp"
#include "kcob/invariants.hpp"

using namespace kcob;
namespace fs = std::filesystem;

namespace {

fs::path root;

void write(const std::string& rel, const std::string& text) {
  fs::path p = root / rel;
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

void write_pd(const std::string& name, const std::string& comment, const LinkDiagram& d) {
  write("diagrams/" + name + ".pd", "# " + comment + "\n" + serialize_pd(d));
}

void write_movie(const std::string& name, const std::string& comment, const Movie& m) {
  write("movies/" + name + ".movie", "# " + comment + "\n" + serialize_movie(m));
}

Move mv(const std::string& s) { return parse_move(s); }

bool removal(const Move& m) { return m.type == MoveType::R1Minus || m.type == MoveType::R2Minus; }

// Depth-first R1-/R2- simplification until `done` holds.
bool simplify(const LinkDiagram& d, std::vector<Move>& out, const std::function<bool(const LinkDiagram&)>& done) {
  if (done(d)) return true;
  for (const Move& m : reidemeister_sites(d, false)) {
    if (!removal(m)) continue;
    out.push_back(m);
    if (simplify(apply_move(d, m).after, out, done)) return true;
    out.pop_back();
  }
  return false;
}

Movie with_deaths(const LinkDiagram& start, std::vector<Move> moves) {
  Movie m = make_movie(start, moves);
  for (int l : m.target().loops()) {
    Move dm;
    dm.type = MoveType::Death;
    dm.arcs = {l};
    moves.push_back(dm);
  }
  return make_movie(start, moves);
}

// Slice disk for -9_46 = P(3,-3,3) to the empty set via the band at `saddle`.
Movie minus_disk(const LinkDiagram& k, const std::string& saddle) {
  Move s = mv(saddle);
  std::vector<Move> moves{s};
  if (!simplify(apply_move(k, s).after, moves, [](const LinkDiagram& d) { return d.size() == 0; }))
    throw std::runtime_error("band " + saddle + " does not lead to an unlink");
  return with_deaths(k, moves);
}

std::string element_json(const GradedComplex& c, const ChainElement& e) {
  nlohmann::json j = nlohmann::json::array();
  for (auto& [g, s] : e) j.push_back({c.vertex_word(g), c.label_word(g), c.theory.ring.to_string(s)});
  return j.dump() + "\n";
}

// 4-plat closure of sigma_2^a1 sigma_1^-a2 sigma_2^a3 ...
LinkDiagram four_plat(const std::vector<int>& twists) {
  std::string s = "open 0; open 2";
  for (size_t i = 0; i < twists.size(); ++i) {
    int pos = i % 2 == 0 ? 1 : 0;
    int t = i % 2 == 0 ? twists[i] : -twists[i];
    for (int k = 0; k < std::abs(t); ++k) s += "; cross " + std::to_string(pos) + (t > 0 ? " +" : " -");
  }
  s += "; close 0; close 0";
  return from_morse(parse_morse(s));
}

}  // namespace

int main(int argc, char** argv) {
  root = argc > 1 ? fs::path(argv[1]) : fs::path("data");
  const LinkDiagram trefoil = from_braid({1, 1, 1}, 2);
  const LinkDiagram left_trefoil = from_braid({-1, -1, -1}, 2);
  const LinkDiagram hopf = from_braid({1, 1}, 2);
  write_pd("unknot", "unknot, crossingless", parse_pd("pd 0\nloop 1\n"));
  write_pd("hopf", "Hopf link, linking number +1", hopf);
  write_pd("hopf-reversed", "Hopf link with one component reversed", reverse_component(hopf, hopf.components()[1][0]));
  write_pd("trefoil", "right-handed trefoil 3_1, closure of sigma_1^3", trefoil);
  write_pd("trefoil-left", "left-handed trefoil -3_1", left_trefoil);
  write_pd("figure8", "figure-eight knot 4_1", from_braid({1, -2, 1, -2}, 3));
  write_pd("6_1", "stevedore knot 6_1", from_braid({1, 1, 2, -1, -3, 2, -3}, 4));
  write_pd("7_1", "7_1, closure of sigma_1^7", from_braid({1, 1, 1, 1, 1, 1, 1}, 2));
  write_pd("7_2", "7_2 as the pretzel P(5,1,1)", pretzel({5, 1, 1}));
  write_pd("7_4", "7_4 as the pretzel P(3,1,3)", pretzel({3, 1, 3}));
  write_pd("8_20", "8_20, closure of sigma_1^3 sigma_2^-1 sigma_1^-3 sigma_2^-1", from_braid({1, 1, 1, -2, -1, -1, -1, -2}, 3));
  write_pd("10_148", "10_148, closure of the quasipositive braid s2^-2 s1 s2^3 s1 s2^-1 s1^2",
           from_braid({-2, -2, 1, 2, 2, 2, 1, -2, 1, 1}, 3));
  write("braids/10_148.braid", "# 10_148 braid word for psi\nbraid 3 -2 -2 1 2 2 2 1 -2 1 1\n");
  write("braids/trefoil.braid", "# sigma_1^3\nbraid 2 1 1 1\n");

  // 9_46 and its slice disks.  -9_46 = P(3,-3,3); the band at "saddle 1 13"
  // leaves the third column to three r1 moves, "saddle 8 18" the first.
  const LinkDiagram m946 = pretzel({3, -3, 3});
  write_pd("9_46-mirror", "-9_46 as the pretzel P(3,-3,3)", m946);
  Movie minusD = minus_disk(m946, "saddle 1 13");
  Movie minusDp = minus_disk(m946, "saddle 8 18");
  Movie D = reverse_mirror(minusD), Dp = reverse_mirror(minusDp);
  write_pd("9_46", "9_46, mirror of P(3,-3,3); target of the disk movies", D.target());
  write_movie("9_46-minus-D", "-D: -9_46 -> empty; r1 moves on the third twist column", minusD);
  write_movie("9_46-minus-Dprime", "-D': -9_46 -> empty; r1 moves on the first twist column", minusDp);
  write_movie("9_46-D", "D: empty -> 9_46, time-reversed mirror of -D", D);
  write_movie("9_46-Dprime", "D': empty -> 9_46, time-reversed mirror of -D'", Dp);
  {
    // phi: oriented resolution at the r1 crossings, flipped at the r2 pairs, all x
    GradedComplex c = build_complex(m946, theory_from_flag("kh-f2"));
    Vertex v = vertex_from_string("111000000");
    ChainElement phi;
    phi.emplace(c.gen(v, (uint64_t{1} << c.circles(v)) - 1), c.theory.ring.one());
    write("classes/9_46-mirror-phi.json", element_json(c, phi));
  }

  // closed surfaces and simple cobordisms
  write_movie("sphere", "standard sphere", parse_movie("frame\nend\nbirth 1\ndeath 1\n"));
  write_movie("torus", "standard torus",
              parse_movie("frame\nend\nbirth 1\nsaddle 1 1\nsaddle 1 2\ndeath 1\n"));
  write_movie("genus2", "standard genus-2 surface",
              parse_movie("frame\nend\nbirth 1\nsaddle 1 1\nsaddle 1 2\nsaddle 1 1\nsaddle 1 2\ndeath 1\n"));
  write_movie("punctured-torus", "once-punctured torus from the empty set to the unknot",
              parse_movie("frame\nend\nbirth 1\nsaddle 1 1\nsaddle 1 2\n"));

  // Seifert surface of the left-handed trefoil: birth, three kinks, two bands
  {
    Movie best;
    bool found = false;
    Movie base = make_movie(LinkDiagram({}, {}), {mv("birth 1")});
    std::vector<Move> seq = base.moves;
    std::function<void(const LinkDiagram&, int)> kinks = [&](const LinkDiagram& d, int left) {
      if (found) return;
      if (left == 0) {
        for (const Move& s1 : saddle_sites(d)) {
          LinkDiagram d1 = apply_move(d, s1).after;
          for (const Move& s2 : saddle_sites(d1)) {
            LinkDiagram d2 = apply_move(d1, s2).after;
            if (d2.size() != 3 || d2.components().size() != 1 || !d2.loops().empty()) continue;
            if (kauffman_jones(d2) != kauffman_jones(left_trefoil)) continue;
            std::vector<Move> all = seq;
            all.push_back(s1);
            all.push_back(s2);
            best = make_movie(LinkDiagram({}, {}), all);
            found = true;
            return;
          }
        }
        return;
      }
      for (const Move& m : reidemeister_sites(d, false)) {
        if (m.type != MoveType::R1Plus) continue;
        LinkDiagram e = apply_move(d, m).after;
        if (e.crossings().back().sign > 0) continue;
        seq.push_back(m);
        kinks(e, left - 1);
        seq.pop_back();
        if (found) return;
      }
    };
    kinks(base.target(), 3);
    if (!found) throw std::runtime_error("no trefoil Seifert movie found");
    write_movie("trefoil-left-seifert", "empty -> left-handed trefoil: birth, three kinks, two bands", best);
    write_movie("trefoil-right-seifert-dual", "right-handed trefoil -> empty: time-reversed mirror of the Seifert movie",
                reverse_mirror(best));
  }

  // 8_11 (two-bridge 27/8) and a ribbon concordance from a trefoil
  {
    // 27/8 = [3,2,1,1,1]; a reduced alternating diagram has Jones span 2n + 2
    // (unnormalised, in q)
    LinkDiagram k811 = four_plat({3, 2, 1, 1, 1});
    Laurent j = kauffman_jones(k811);
    bool ok = k811.components().size() == 1 && j.terms().rbegin()->first - j.terms().begin()->first == 18;
    if (!ok) throw std::runtime_error("4-plat for 27/8 is not a reduced alternating knot diagram");
    write_pd("8_11", "8_11, two-bridge knot 27/8 = [3,2,1,1,1]", k811);
    // the 9-crossing diagram [-3,3,3] of the same knot shows the ribbon band
    LinkDiagram banded = four_plat({-3, 3, 3});
    if (kauffman_jones(banded) != j) throw std::runtime_error("[-3,3,3] is not 8_11");
    write_pd("8_11-banded", "8_11 as the 4-plat [-3,3,3]", banded);
    Move band = mv("saddle 1 13");
    std::vector<Move> moves{band};
    const Laurent jt = kauffman_jones(trefoil);
    auto done = [&](const LinkDiagram& d) {
      return d.size() == 3 && d.loops().size() == 1 && kauffman_jones(LinkDiagram(d.crossings(), {})) == jt;
    };
    if (!simplify(apply_move(banded, band).after, moves, done)) throw std::runtime_error("band does not split off a trefoil");
    Movie down = with_deaths(banded, moves);
    write_movie("concordance-trefoil-8_11", "ribbon concordance from the right-handed trefoil to 8_11 (birth, band)",
                reverse(down));
    write_movie("concordance-trefoil-8_11-reversed", "time reversal of the concordance", down);
  }
  std::cout << "stock data written to " << root << "\n";
  return 0;
}
