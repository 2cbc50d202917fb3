// Acceptance run: one line per criterion.  Exit status is nonzero when a
// gating criterion fails; criterion 11 is reported but never gates.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "formal_random.hpp"
#include "kcob/cobmap.hpp"
#include "kcob/formal.hpp"
#include "kcob/invariants.hpp"

using namespace kcob;
namespace fs = std::filesystem;

namespace {

const fs::path kData = KCOB_DATA_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
LinkDiagram diagram(const std::string& name) { return parse_pd(slurp(kData / "diagrams" / (name + ".pd"))); }
Movie movie(const std::string& name) { return parse_movie(slurp(kData / "movies" / (name + ".movie"))); }

// Failure notes accumulate here; a criterion passes when none were added.
// `refuted` holds failures of claims that an independent computation shows to
// be false; they print as FAIL but do not gate the exit status.
struct Check {
  std::vector<std::string> fails;
  std::vector<std::string> refuted;
  std::string info;
  void expect(bool ok, const std::string& what) {
    if (!ok) fails.push_back(what);
  }
};

const std::vector<std::string> kGolden = {"unknot", "hopf", "hopf-reversed", "trefoil", "trefoil-left",
                                          "figure8", "6_1", "8_20", "9_46"};

bool power_of_two(const std::string& s) {
  long v = std::stol(s);
  return v > 1 && (v & (v - 1)) == 0;
}

// F2 ranks from the integral groups: free + 2-torsion here + 2-torsion one
// degree up (the differential raises h).
bool uct_consistent(const HomologyModule& z, const HomologyModule& f2) {
  std::map<std::pair<int, int>, int64_t> want;
  for (auto& [k, g] : z.groups) {
    want[k] += g.free;
    for (auto& t : g.torsion)
      if (power_of_two(t)) {
        want[k] += 1;
        want[{k.first - 1, k.second}] += 1;
      }
  }
  std::map<std::pair<int, int>, int64_t> got;
  for (auto& [k, g] : f2.groups) got[k] += g.free;
  std::erase_if(want, [](auto& kv) { return kv.second == 0; });
  std::erase_if(got, [](auto& kv) { return kv.second == 0; });
  return want == got;
}

// ---- criteria ----------------------------------------------------------------

void c1(Check& c) {
  for (const char* flag : {"kh-z", "kh-f2", "bn-f2h"}) {
    AxiomReport r = check_frobenius_axioms(theory_from_flag(flag));
    c.expect(r.pass, std::string(flag) + ": " + r.failure);
  }
  auto kz = theory_from_flag("kh-z");
  c.expect(closed_genus_value(kz, 0).z == 0, "sphere is not 0");
  c.expect(closed_genus_value(kz, 1).z == 2, "torus is not 2");
  // handle m∘Δ: 2x on 1 in Kh, H on 1 in BN
  AlgElem one = alg_basis(kz, 0);
  Alg2 d = comultiply(kz, one);
  AlgElem acc{kz.ring.zero(), kz.ring.zero()};
  for (int i = 0; i < 4; ++i) {
    AlgElem p = multiply(kz, alg_basis(kz, i >> 1), alg_basis(kz, i & 1));
    for (int k = 0; k < 2; ++k) acc[k] = kz.ring.add(acc[k], kz.ring.mul(d[i], p[k]));
  }
  c.expect(acc[0].z == 0 && acc[1].z == 2, "m∘Δ(1) != 2x");
}

void c2(Check& c) {
  auto kz = theory_from_flag("kh-z"), f2 = theory_from_flag("kh-f2");
  std::map<std::string, std::pair<HomologyModule, HomologyModule>> hm;
  for (auto& name : kGolden) {
    LinkDiagram d = diagram(name);
    Laurent jones = kauffman_jones(d);
    GradedComplex cz = build_complex(d, kz), cf = build_complex(d, f2);
    c.expect(check_d_squared(cz.cc) && check_d_squared(cf.cc), name + ": d^2 != 0");
    c.expect(graded_euler(cz.cc) == jones, name + ": Z Euler characteristic != Jones");
    c.expect(graded_euler(cf.cc) == jones, name + ": F2 Euler characteristic != Jones");
    HomologyModule hz = homology(cz.cc), hf = homology(cf.cc);
    c.expect(uct_consistent(hz, hf), name + ": F2 ranks disagree with universal coefficients");
    LinkDiagram m = mirror(d);
    c.expect(homology(build_complex(m, kz).cc) == homology(dualize(cz.cc)), name + ": mirror != dual over Z");
    c.expect(homology(build_complex(m, f2).cc) == homology(dualize(cf.cc)), name + ": mirror != dual over F2");
    hm[name] = {hz, hf};
  }
  // Kh(6_1) and Kh(9_46) as bigraded groups, in either chirality
  Laurent j61 = kauffman_jones(diagram("6_1")), j946 = kauffman_jones(diagram("9_46"));
  bool iso = false;
  for (bool flip : {false, true}) {
    LinkDiagram d = flip ? mirror(diagram("6_1")) : diagram("6_1");
    iso = iso || (homology(build_complex(d, kz).cc) == hm["9_46"].first &&
                  homology(build_complex(d, f2).cc) == hm["9_46"].second);
  }
  if (!iso) {
    bool jones_differ = j61 != j946 && j61.bar() != j946;
    std::string msg = "Kh(6_1) and Kh(9_46) are not isomorphic as bigraded groups";
    if (jones_differ)
      c.refuted.push_back(msg + " (their Jones polynomials " + j61.to_string() + " and " + j946.to_string() +
                          " differ in both chiralities)");
    else
      c.fails.push_back(msg);
  }
  auto totals = [](const HomologyModule& m) {
    std::pair<int64_t, size_t> t{0, 0};
    for (auto& [k, g] : m.groups) t.first += g.free, t.second += g.torsion.size();
    return t;
  };
  if (totals(hm["6_1"].first) == totals(hm["9_46"].first))
    c.info = "6_1 and 9_46 agree ungraded: Z^" + std::to_string(totals(hm["6_1"].first).first) + " plus " +
             std::to_string(totals(hm["6_1"].first).second) + " torsion summands";
}

void c3(Check& c) {
  auto kz = theory_from_flag("kh-z");
  std::mt19937 rng(314159);
  int moves_applied = 0;
  std::map<MoveType, int> type_count;
  for (int i = 0; i < 100; ++i) {
    int strands = 2 + rng() % 3;
    int len = 1 + rng() % 8;
    std::vector<int> word;
    for (int k = 0; k < len; ++k) {
      int l = 1 + rng() % (strands - 1);
      word.push_back(rng() % 2 ? l : -l);
    }
    LinkDiagram d = from_braid(word, strands);
    HomologyModule before = homology(build_complex(d, kz).cc);
    LinkDiagram cur = d;
    std::string trail;
    for (int k = 0; k < 3; ++k) {
      // move type first, so that r3 and the crossing-removing moves are not
      // swamped by the many r1+ and r2+ sites
      std::map<MoveType, std::vector<Move>> by_type;
      for (Move& mv : reidemeister_sites(cur, true)) by_type[mv.type].push_back(mv);
      if (by_type.empty()) break;
      auto it = std::next(by_type.begin(), rng() % by_type.size());
      const Move mv = it->second[rng() % it->second.size()];
      ++type_count[mv.type];
      trail += move_to_string(mv) + "; ";
      cur = apply_move(cur, mv).after;
      ++moves_applied;
    }
    c.expect(homology(build_complex(cur, kz).cc) == before, "diagram " + std::to_string(i) + " after " + trail);
  }
  c.expect(moves_applied == 300, "only " + std::to_string(moves_applied) + " moves applied");
  c.info = std::to_string(moves_applied) + " moves:";
  for (auto& [t, n] : type_count) c.info += std::string(" ") + move_name(t) + " " + std::to_string(n);
}

void c4(Check& c) {
  auto kz = theory_from_flag("kh-z"), bn = theory_from_flag("bn-f2h");
  c.expect(closed_surface_value(movie("sphere"), kz).z == 0, "sphere != 0");
  c.expect(std::abs(closed_surface_value(movie("torus"), kz).z) == 2, "torus != ±2");
  c.expect(closed_surface_value(movie("genus2"), kz).z == 0, "genus 2 != 0");
  c.expect(bn.ring.is_zero(closed_surface_value(movie("torus"), bn)), "BN torus != 0");
}

void c5(Check& c) {
  auto f2 = theory_from_flag("kh-f2"), bn = theory_from_flag("bn-f2h");
  MovieMap a(movie("9_46-minus-D"), f2), b(movie("9_46-minus-Dprime"), f2);
  c.expect(a.verify() == -1 && b.verify() == -1, "disk maps are not chain maps");
  ChainElement phi = parse_element(a.source(), slurp(kData / "classes" / "9_46-mirror-phi.json"));
  c.expect(is_zero(apply_d(a.source().cc, phi)), "phi is not a cycle");
  c.expect(a.apply(phi) == empty_unit(a.target()), "Kh(-D)(phi) != 1");
  c.expect(is_zero(b.apply(phi)), "Kh(-D')(phi) != 0");

  DifferenceClass dk = difference_class(movie("9_46-D"), movie("9_46-Dprime"), f2);
  c.expect(!dk.zero, "delta_Kh = 0");
  DifferenceClass db = difference_class(movie("9_46-D"), movie("9_46-Dprime"), bn);
  c.expect(!db.zero, "delta_BN = 0");
  ChainElement diff = project_h0(db.delta, bn.ring);
  for (auto& [g, s] : dk.delta) add_term(diff, g, s, f2.ring);
  MovieMap dmap(movie("9_46-D"), f2);
  c.expect(BlockHomology(dmap.target().cc, 0, 1).is_zero_class(diff), "pi(delta_BN) != delta_Kh");

  MovieMap abn(movie("9_46-minus-D"), bn), bbn(movie("9_46-minus-Dprime"), bn);
  auto thetas = theta_cycles(abn.source());
  c.expect(!thetas.empty(), "no theta cycles");
  for (auto& t : thetas) {
    c.expect(t.cycle, "theta is not a cycle");
    c.expect(abn.apply(t.element) == empty_unit(abn.target()), "BN(-D)(theta) != 1");
    c.expect(bbn.apply(t.element) == empty_unit(bbn.target()), "BN(-D')(theta) != 1");
  }
}

Movie slice(const Movie& m, size_t from, size_t to) {
  Movie s;
  s.frames.assign(m.frames.begin() + from, m.frames.begin() + to + 1);
  s.moves.assign(m.moves.begin() + from, m.moves.begin() + to);
  s.perms.assign(m.perms.begin() + from, m.perms.begin() + to);
  return s;
}

void c6(Check& c) {
  auto bn = theory_from_flag("bn-f2h");
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(kData / "movies")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int n = 0;
  for (auto& p : files) {
    Movie m = parse_movie(slurp(p));
    const std::string name = p.stem().string();
    // first frame with an arc
    size_t i = 0;
    while (i < m.frames.size() && m.frames[i].arc_count() == 0) ++i;
    if (i == m.frames.size()) {
      c.fails.push_back(name + ": no frame to attach a handle");
      continue;
    }
    Movie sq = make_movie(m.frames[i], {parse_move("square " + std::to_string(m.frames[i].arcs()[0]))});
    Movie with = concat(concat(slice(m, 0, i), sq), slice(m, i, m.moves.size()));
    c.expect(with.euler_characteristic() == m.euler_characteristic() - 2, name + ": chi not lowered by 2");
    MovieMap f(with, bn), g(m, bn);
    c.expect(f.verify() == -1, name + ": map with handle is not a chain map");
    c.expect(bn_equal_on_homology(f, g, bn.ring.monomial(1, 1)), name + ": handle map != H * map");
    ++n;
  }
  c.info = std::to_string(n) + " movies";
}

void c7(Check& c) {
  using namespace kcob::formal;
  std::mt19937 rng(2024);
  for (int i = 0; i < 500; ++i) {
    RawCobordism w = testing::random_word(rng, 2 * static_cast<int>(rng() % 3), 4);
    DottedCobordism a = normalize(w), b = normalize(w, 1 + 2 * i), d = normalize(w, 2 + 2 * i);
    if (!(a == b && a == d)) {
      c.fails.push_back("normalization not confluent on case " + std::to_string(i));
      break;
    }
  }
  R1Certificate cert = verify_r1_proof();
  c.expect(cert.pass, "R1 certificate failed at " + cert.failed_step);
  c.expect(!verify_r1_proof(true).pass, "corrupted R1 homotopy accepted");

  // formal R1 morphisms against the movie maps of a closed kink
  auto kz = theory_from_flag("kh-z");
  LinkDiagram unknot = parse_pd("pd 0\nloop 1\n");
  int kinks = 0;
  for (const Move& mv : reidemeister_sites(unknot, false)) {
    if (mv.type != MoveType::R1Plus) continue;
    Movie up = make_movie(unknot, {mv});
    const LinkDiagram& k = up.target();
    if (k.crossings()[0].sign < 0) continue;
    auto [f0, g0] = closed_r1_morphisms(k, 1);
    MovieMap mu(up, kz), md(reverse(up), kz);
    const GradedComplex& ck = mu.target();
    auto gm = tqft(g0, kz), fm = tqft(f0, kz);
    for (uint64_t a = 0; a < 2; ++a) {
      ChainElement want;
      for (auto& [b, s] : gm[a]) want[ck.gen(0, b)] = s;
      c.expect(mu.apply_step(0, {{mu.source().gen(0, a), kz.ring.one()}}) == want, "g differs from the r1 movie map");
    }
    for (uint64_t a = 0; a < 4; ++a) {
      ChainElement want;
      for (auto& [b, s] : fm[a]) want[md.target().gen(0, b)] = s;
      c.expect(md.apply_step(0, {{ck.gen(0, a), kz.ring.one()}}) == want, "f differs from the r1 movie map");
    }
    ++kinks;
  }
  c.expect(kinks > 0, "no positive kink site");

  // delooping and elimination
  std::vector<std::string> names = kGolden;
  names.insert(names.end(), {"7_1", "7_2", "7_4"});
  std::ostringstream info;
  for (auto& name : names) {
    LinkDiagram d = diagram(name);
    FormalComplex fc = bracket(d);
    Equivalence e = gauss_reduce(deloop(fc).reduced, false);
    for (const char* flag : {"kh-z", "kh-f2"}) {
      auto t = theory_from_flag(flag);
      c.expect(homology(tqft(e.reduced, t)) == homology(build_complex(d, t).cc),
               name + ": reduced homology differs over " + flag);
    }
    if (name[0] == '7') {
      double ratio = double(fc.generator_count()) / double(std::max<uint64_t>(1, e.reduced.generator_count()));
      c.expect(ratio >= 10, name + ": reduction below 10x");
      info << name << " " << fc.generator_count() << "->" << e.reduced.generator_count() << " ";
    }
  }
  c.info = info.str();
}

std::vector<int> braid_file(const std::string& name, int& strands) {
  std::istringstream in(slurp(kData / "braids" / (name + ".braid")));
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string kw;
    if (ls >> kw && kw == "braid") {
      ls >> strands;
      std::vector<int> w;
      for (int l; ls >> l;) w.push_back(l);
      return w;
    }
  }
  throw InputError(name + ": no braid line");
}

void c8(Check& c) {
  auto kz = theory_from_flag("kh-z");
  std::mt19937 rng(8);
  for (int i = 0; i < 50; ++i) {
    int strands = 2 + rng() % 3;
    int len = 1 + rng() % 9;
    std::vector<int> word;
    for (int k = 0; k < len; ++k) {
      int l = 1 + rng() % (strands - 1);
      word.push_back(rng() % 2 ? l : -l);
    }
    PsiResult r = plamenevskaya(word, strands, kz);
    c.expect(r.h == 0 && r.q == r.writhe - r.strands, "braid " + std::to_string(i) + ": wrong bigrading");
    c.expect(r.cycle, "braid " + std::to_string(i) + ": psi is not a cycle");
  }
  c.expect(plamenevskaya({1, 1, 1}, 2, kz).nonzero, "psi(sigma_1^3) = 0");
  int strands = 0;
  std::vector<int> w = braid_file("10_148", strands);
  PsiResult r = plamenevskaya(w, strands, kz);
  c.expect(r.cycle, "psi(10_148) is not a cycle");
  c.info = std::string("psi(10_148) ") + (r.nonzero ? "nonzero" : "zero");
}

void c9(Check& c) {
  c.expect(s_invariant(diagram("unknot")) == 0, "s(unknot) != 0");
  int right = s_invariant(diagram("trefoil")), left = s_invariant(diagram("trefoil-left"));
  c.expect(right == 2, "s(3_1) != 2");
  c.expect(left == -2, "s(-3_1) != -2");
  c.expect(s_invariant(mirror(diagram("trefoil"))) == -right, "s not odd under mirroring");
  std::vector<fs::path> files;
  for (auto& e : fs::directory_iterator(kData / "diagrams")) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  int knots = 0;
  auto bn = theory_from_flag("bn-f2h");
  for (auto& p : files) {
    LinkDiagram d = parse_pd(slurp(p));
    if (d.components().size() != 1) continue;
    BNHomology h(build_complex(d, bn).cc);
    bool ok = h.towers().size() == 2;
    for (auto& t : h.towers()) ok = ok && t.first.first == 0;
    c.expect(ok, p.stem().string() + ": towers are not two at h = 0");
    int s = s_invariant(d);
    c.expect(s_invariant(mirror(d)) == -s, p.stem().string() + ": s(mirror) != -s");
    ++knots;
  }
  c.info = std::to_string(knots) + " knots";
}

void c10(Check& c) {
  Movie m = movie("concordance-trefoil-8_11"), rev = movie("concordance-trefoil-8_11-reversed");
  c.expect(m.euler_characteristic() == 0, "not an annulus");
  RibbonCertificate cert = ribbon_double_check(m, rev, theory_from_flag("kh-f2"));
  c.expect(!cert.has_local_maxima, "concordance has local maxima");
  c.expect(cert.pass, "double is not the identity: " + cert.failure);
}

void c11(Check& c) {
  fs::path p = kData / "diagrams" / "9_46-strongly-invertible.pd";
  if (!fs::exists(p)) {
    c.fails.push_back("no diagram for the strongly invertible knot; transcription missing");
    return;
  }
  using Table = std::map<std::pair<int, int>, int>;
  const Table page1 = {{{0, 1}, 2},   {{0, -1}, 2},   {{-2, -3}, 2},  {{-1, -3}, 1},  {{-3, -5}, 4},  {{-2, -5}, 2},
                       {{-1, -5}, 1}, {{-4, -7}, 9},  {{-3, -7}, 5},  {{-5, -9}, 17}, {{-4, -9}, 10}, {{-3, -9}, 1},
                       {{-6, -11}, 21}, {{-5, -11}, 17}, {{-4, -11}, 1}, {{-7, -13}, 27}, {{-6, -13}, 22}};
  const Table page2 = {{{0, 1}, 2},   {{0, -1}, 2},   {{-1, -3}, 1},  {{-1, -5}, 1},
                       {{-5, -9}, 1}, {{-5, -11}, 1}, {{-6, -13}, 1}};
  TorsionProfile tp = torsion_profile(parse_pd(slurp(p)));
  for (int r = 0; r < 2; ++r) {
    Table got;
    const auto& page = tp.pages.at(std::min<size_t>(r, tp.pages.size() - 1));
    for (auto& [hq, dim] : page)
      if (hq.first >= -7 && hq.second >= -13 && dim) got[hq] = dim;
    c.expect(got == (r ? page2 : page1), "page " + std::to_string(r + 1) + " differs");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* what;
    double limit;  // seconds, 0 = none
    bool gating;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "Frobenius axioms and closed composites", 1, true, c1},
      {2, "homology golden set", 30, true, c2},
      {3, "Reidemeister invariance on random diagrams", 300, true, c3},
      {4, "closed surface evaluations", 0, true, c4},
      {5, "9_46 slice disks", 60, true, c5},
      {6, "square move is multiplication by H", 0, true, c6},
      {7, "formal layer", 0, true, c7},
      {8, "Plamenevskaya class", 0, true, c8},
      {9, "s-invariant and towers", 0, true, c9},
      {10, "ribbon concordance double", 120, true, c10},
      {11, "BLT pages for the strongly invertible knot (stretch)", 0, false, c11},
  };
  bool ok = true;
  for (auto& cr : all) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.fails.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.limit > 0 && secs > cr.limit)
      c.fails.push_back("took " + std::to_string(secs) + " s, limit " + std::to_string(int(cr.limit)) + " s");
    bool pass = c.fails.empty() && c.refuted.empty();
    if (!c.fails.empty() && cr.gating) ok = false;
    std::printf("criterion %2d %s  %-52s %7.2fs", cr.id, pass ? "PASS" : "FAIL", cr.what, secs);
    if (!cr.gating) std::printf("  [not gating]");
    if (!c.info.empty()) std::printf("  %s", c.info.c_str());
    std::printf("\n");
    for (size_t i = 0; i < c.fails.size() && i < 5; ++i) std::printf("    %s\n", c.fails[i].c_str());
    for (auto& r : c.refuted) std::printf("    refuted, not gating: %s\n", r.c_str());
    std::fflush(stdout);
  }
  return ok ? 0 : 1;
}
