#include <openssl/evp.h>

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "kcob/cobmap.hpp"
#include "kcob/formal.hpp"
#include "kcob/invariants.hpp"

#ifndef KCOB_VERSION
#define KCOB_VERSION "dev"
#endif

using namespace kcob;
using json = nlohmann::ordered_json;

namespace {

struct UnreadableFile : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct JobConfig {
  std::string command;
  std::string theory = "kh-z";
  std::vector<std::string> inputs;
  std::string class_file;
  std::string out;
  std::string format = "json";
  uint64_t budget = kDefaultBudget;
  bool allow_r3 = false;
  bool no_r3 = false;
  // psi
  std::string word;
  int strands = 0;
  // verify-formal
  bool corrupt = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UnreadableFile("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

// Collects the report; every input read goes through here so its hash lands
// in the header.
struct Job {
  JobConfig cfg;
  json inputs = json::array();
  json result = json::object();
  std::ostringstream text;

  std::string load(const std::string& path) {
    std::string s = read_file(path);
    inputs.push_back({{"path", path}, {"sha256", sha256_hex(s)}});
    return s;
  }
  FrobeniusTheory theory() const { return theory_from_flag(cfg.theory); }
  R3Mode r3() const { return cfg.allow_r3 ? R3Mode::Permissive : R3Mode::Strict; }
  std::string input(size_t i) const {
    if (i >= cfg.inputs.size()) throw InputError(cfg.command + ": missing input file");
    return cfg.inputs[i];
  }
};

json homology_json(const HomologyModule& m) {
  json groups = json::array();
  for (auto& [k, g] : m.groups) groups.push_back({{"h", g.h}, {"q", g.q}, {"free", g.free}, {"torsion", g.torsion}});
  return groups;
}

std::string mpz_str(const mpz_class& z) { return z.get_str(); }

json zmat_json(const ZMat& m) {
  json rows = json::array();
  for (auto& r : m) {
    json row = json::array();
    for (auto& e : r) row.push_back(mpz_str(e));
    rows.push_back(row);
  }
  return rows;
}

json orders_json(const std::vector<mpz_class>& v) {
  json a = json::array();
  for (auto& o : v) a.push_back(mpz_str(o));
  return a;
}

void movie_bookkeeping(Job& job, const Movie& m) {
  job.result["euler_characteristic"] = m.euler_characteristic();
  job.result["moves"] = m.moves.size();
  job.result["has_r3"] = m.has_r3();
  job.text << "chi: " << m.euler_characteristic() << "\n";
}

void sign_note(Job& job, const FrobeniusTheory& t) {
  if (t.ring.tag != RingTag::Int) return;
  const char* note = "integral movie maps are determined up to an overall sign; 'normalized' fixes it so the first nonzero entry is positive";
  job.result["sign_normalization"] = note;
  job.text << "note: " << note << "\n";
}

Movie load_movie(Job& job, const std::string& path) {
  Movie m = parse_movie(job.load(path));
  if (job.cfg.no_r3 && m.has_r3()) throw InputError(path + ": movie contains r3 moves");
  return m;
}

// ---- subcommands ------------------------------------------------------------

void cmd_homology(Job& job) {
  LinkDiagram d = parse_pd(job.load(job.input(0)));
  FrobeniusTheory t = job.theory();
  GradedComplex c = build_complex(d, t, job.cfg.budget);
  HomologyModule h = homology(c.cc);
  job.result["crossings"] = d.size();
  job.result["generators"] = c.cc.size();
  job.result["d_squared_zero"] = check_d_squared(c.cc);
  job.result["groups"] = homology_json(h);
  job.result["poincare"] = h.poincare();
  job.text << h.to_text() << "poincare: " << h.poincare() << "\n";
  if (!t.bn()) {
    Laurent chi = graded_euler(c.cc), jones = kauffman_jones(d);
    job.result["graded_euler"] = chi.to_string();
    job.result["euler_matches_jones"] = chi == jones;
    job.text << "graded euler: " << chi.to_string() << (chi == jones ? " (matches Jones)" : " (JONES MISMATCH)") << "\n";
  }
}

void cmd_map(Job& job) {
  FrobeniusTheory t = job.theory();
  Movie m = load_movie(job, job.input(0));
  movie_bookkeeping(job, m);
  MovieMap f(m, t, job.r3(), job.cfg.budget);
  std::string why;
  int bad = f.verify(&why);
  job.result["q_degree"] = f.q_degree();
  job.result["chain_map_verified"] = bad < 0;
  if (bad >= 0) job.result["verify_failure"] = why;
  if (f.uses_r3()) job.result["warning"] = "permissive r3 steps are not verified against a reference";
  job.text << "q-degree: " << f.q_degree() << "\nchain map: " << (bad < 0 ? "verified" : "FAILED " + why) << "\n";

  ChainElement z;
  bool have_input = false;
  if (!job.cfg.class_file.empty()) {
    z = parse_element(f.source(), job.load(job.cfg.class_file));
    have_input = true;
  } else if (f.source().n == 0 && f.source().circles(0) == 0) {
    z = empty_unit(f.source());
    have_input = true;
  }
  if (have_input) {
    ChainElement img = f.apply(z);
    job.result["image"] = element_to_string(f.target(), img);
    job.text << "image: " << element_to_string(f.target(), img) << "\n";
    if (f.target().n == 0 && f.target().circles(0) == 0) {
      auto it = img.find(f.target().gen(0, 0));
      Scalar s = it == img.end() ? t.ring.zero() : it->second;
      job.result["scalar"] = t.ring.to_string(s);
      job.text << "scalar: " << t.ring.to_string(s) << "\n";
    }
  } else if (!t.bn()) {
    json blocks = json::array();
    for (auto& b : induced_on_homology(f)) {
      json jb = {{"h", b.h}, {"q", b.q}, {"q_target", b.q_target}, {"source_orders", orders_json(b.source_orders)},
                 {"target_orders", orders_json(b.target_orders)}, {"matrix", zmat_json(b.matrix)}};
      if (t.ring.tag == RingTag::Int) jb["normalized"] = zmat_json(b.normalized);
      blocks.push_back(jb);
      job.text << "block (" << b.h << "," << b.q << ") -> q " << b.q_target << ": " << b.matrix.size() << "x"
               << b.source_orders.size() << "\n";
    }
    job.result["homology_blocks"] = blocks;
  }
  sign_note(job, t);
}

void cmd_closed(Job& job) {
  FrobeniusTheory t = job.theory();
  Movie m = load_movie(job, job.input(0));
  movie_bookkeeping(job, m);
  Scalar s = closed_surface_value(m, t, job.r3());
  job.result["value"] = t.ring.to_string(s);
  job.text << "value: " << t.ring.to_string(s) << "\n";
  sign_note(job, t);
}

void cmd_diff(Job& job) {
  FrobeniusTheory t = job.theory();
  Movie a = load_movie(job, job.input(0));
  Movie b = load_movie(job, job.input(1));
  job.result["euler_characteristic"] = {a.euler_characteristic(), b.euler_characteristic()};
  job.text << "chi: " << a.euler_characteristic() << ", " << b.euler_characteristic() << "\n";
  ChainElement z;
  const ChainElement* zp = nullptr;
  if (!job.cfg.class_file.empty()) {
    GradedComplex src = build_complex(a.source(), t, job.cfg.budget);
    z = parse_element(src, job.load(job.cfg.class_file));
    zp = &z;
  }
  DifferenceClass dc = difference_class(a, b, t, zp, job.r3());
  GradedComplex tgt = build_complex(a.target(), t, job.cfg.budget);
  job.result["delta"] = element_to_string(tgt, dc.delta);
  job.result["zero"] = dc.zero;
  job.text << "delta: " << element_to_string(tgt, dc.delta) << "\nclass: " << (dc.zero ? "zero" : "nonzero") << "\n";
  if (t.bn()) {
    job.result["torsion_order"] = dc.torsion_order;
    job.result["h_times_zero"] = dc.h_times_zero;
    job.text << "H-torsion order: " << dc.torsion_order << "\n";
  }
  sign_note(job, t);
}

void cmd_psi(Job& job) {
  std::vector<int> word;
  int strands = job.cfg.strands;
  std::string letters = job.cfg.word;
  if (!job.cfg.inputs.empty()) {
    // file with a `braid <strands> <letters...>` line
    std::istringstream in(job.load(job.input(0)));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string kw;
      if (ls >> kw && kw == "braid") {
        ls >> strands;
        std::getline(ls, letters);
        break;
      }
    }
    if (strands == 0) throw InputError(job.input(0) + ": no braid line");
  }
  for (char& ch : letters)
    if (ch == ',') ch = ' ';
  std::istringstream ws(letters);
  for (int l; ws >> l;) word.push_back(l);
  if (!ws.eof()) throw InputError("bad braid word");
  if (strands < 1 || word.empty()) throw InputError("psi needs a braid word and --strands");
  FrobeniusTheory t = job.theory();
  PsiResult r = plamenevskaya(word, strands, t);
  job.result["strands"] = r.strands;
  job.result["writhe"] = r.writhe;
  job.result["h"] = r.h;
  job.result["q"] = r.q;
  job.result["expected_q"] = r.writhe - r.strands;
  job.result["cycle"] = r.cycle;
  job.text << "psi at (" << r.h << "," << r.q << "), w - n = " << r.writhe - r.strands << "\ncycle: " << r.cycle << "\n";
  if (!t.bn()) {
    job.result["nonzero"] = r.nonzero;
    job.text << "nonzero: " << r.nonzero << "\n";
  }
}

void cmd_s(Job& job) {
  LinkDiagram d = parse_pd(job.load(job.input(0)));
  int s = s_invariant(d, job.cfg.budget);
  job.cfg.theory = "bn-f2h";
  job.result["s"] = s;
  job.text << "s: " << s << "\n";
}

void cmd_profile(Job& job) {
  LinkDiagram d = parse_pd(job.load(job.input(0)));
  TorsionProfile p = torsion_profile(d, job.cfg.budget);
  job.cfg.theory = "bn-f2h";
  json pages = json::array();
  for (size_t r = 0; r < p.pages.size(); ++r) {
    json page = json::array();
    job.text << "page " << r + 1 << ":";
    for (auto& [hq, dim] : p.pages[r]) {
      if (dim == 0) continue;
      page.push_back({{"h", hq.first}, {"q", hq.second}, {"dim", dim}});
      job.text << " (" << hq.first << "," << hq.second << "):" << dim;
    }
    job.text << "\n";
    pages.push_back(page);
  }
  job.result["pages"] = pages;
  job.result["stable_page"] = p.stable_page;
  job.result["towers"] = p.towers;
}

void cmd_verify_formal(Job& job) {
  formal::R1Certificate cert = formal::verify_r1_proof(job.cfg.corrupt);
  json steps = json::array();
  for (auto& [name, ok] : cert.steps) {
    steps.push_back({{"step", name}, {"pass", ok}});
    job.text << (ok ? "pass  " : "FAIL  ") << name << "\n";
  }
  job.result["r1_certificate"] = {{"pass", cert.pass}, {"steps", steps}};
  if (!cert.pass) {
    job.result["r1_certificate"]["failed_step"] = cert.failed_step;
    job.result["r1_certificate"]["trace"] = cert.trace;
  }
  job.text << "R1 certificate: " << (cert.pass ? "pass" : "FAIL at " + cert.failed_step) << "\n";

  // optional diagram: delooping and elimination against the cube complex
  if (!job.cfg.inputs.empty()) {
    FrobeniusTheory t = job.theory();
    if (t.bn()) throw InputError("verify-formal diagrams need a Khovanov theory");
    LinkDiagram d = parse_pd(job.load(job.input(0)));
    formal::FormalComplex c = formal::bracket(d, job.cfg.budget);
    formal::Equivalence e = formal::gauss_reduce(formal::deloop(c).reduced, false);
    HomologyModule reduced = homology(formal::tqft(e.reduced, t));
    HomologyModule direct = homology(build_complex(d, t, job.cfg.budget).cc);
    json pipe = {{"generators", c.generator_count()},
                 {"reduced_objects", e.reduced.object_count()},
                 {"reduced_generators", e.reduced.generator_count()},
                 {"homology_matches", reduced == direct},
                 {"groups", homology_json(reduced)}};
    job.result["pipeline"] = pipe;
    job.text << "deloop + eliminate: " << c.generator_count() << " -> " << e.reduced.generator_count()
             << " generators, homology " << (reduced == direct ? "matches" : "DIFFERS") << "\n";
  }
}

void cmd_ribbon(Job& job) {
  FrobeniusTheory t = job.theory();
  Movie c = load_movie(job, job.input(0));
  Movie rev = job.cfg.inputs.size() > 1 ? load_movie(job, job.input(1)) : reverse(c);
  movie_bookkeeping(job, c);
  RibbonCertificate cert = ribbon_double_check(c, rev, t);
  job.result["certificate"] = {{"pass", cert.pass}, {"has_local_maxima", cert.has_local_maxima}, {"blocks", cert.blocks}};
  if (!cert.pass) job.result["certificate"]["failure"] = cert.failure;
  job.text << "ribbon double: " << (cert.pass ? "identity" : "FAIL " + cert.failure) << "\n";
}

void cmd_jones(Job& job) {
  LinkDiagram d = parse_pd(job.load(job.input(0)));
  Laurent j = kauffman_jones(d);
  job.result["jones"] = j.to_string();
  job.text << "jones: " << j.to_string() << "\n";
  if (count_generators(d) <= job.cfg.budget) {
    GradedComplex c = build_complex(d, theory_from_flag("kh-z"), job.cfg.budget);
    bool eq = graded_euler(c.cc) == j;
    job.result["euler_matches_jones"] = eq;
    job.text << "graded euler of Kh: " << (eq ? "matches" : "MISMATCH") << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology and surface cobordism maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", KCOB_VERSION);
  JobConfig cfg;

  auto common = [&](CLI::App* sub, bool files, bool movie) {
    sub->add_option("--theory", cfg.theory, "kh-z, kh-f2 or bn-f2h")
        ->check(CLI::IsMember({"kh-z", "kh-f2", "bn-f2h"}));
    sub->add_option("--budget", cfg.budget, "generator budget");
    sub->add_option("--out", cfg.out, "write the report here instead of stdout");
    sub->add_option("--format", cfg.format)->check(CLI::IsMember({"json", "text"}));
    if (movie) {
      auto* allow = sub->add_flag("--allow-r3", cfg.allow_r3, "accept r3 moves (unverified maps)");
      sub->add_flag("--no-r3", cfg.no_r3, "reject movies containing r3 moves")->excludes(allow);
    }
    if (files) sub->add_option("files", cfg.inputs, "input files");
  };
  std::map<std::string, void (*)(Job&)> handlers = {
      {"homology", cmd_homology}, {"map", cmd_map},     {"closed", cmd_closed},
      {"diff", cmd_diff},         {"psi", cmd_psi},     {"s", cmd_s},
      {"profile", cmd_profile},   {"verify-formal", cmd_verify_formal},
      {"ribbon-check", cmd_ribbon}, {"jones", cmd_jones}};
  std::map<std::string, std::string> help = {
      {"homology", "bigraded homology of a PD diagram"},
      {"map", "chain map of a movie, applied to --class or 1"},
      {"closed", "value of a closed surface movie"},
      {"diff", "difference class of two movies with common ends"},
      {"psi", "Plamenevskaya class of a braid closure"},
      {"s", "s-invariant of a knot"},
      {"profile", "H-torsion pages of the Bar-Natan homology"},
      {"verify-formal", "Reidemeister I certificate in the dotted cobordism category"},
      {"ribbon-check", "compare the doubled concordance with the identity"},
      {"jones", "Jones polynomial"}};
  for (auto& [name, fn] : handlers) {
    bool movie = name == "map" || name == "closed" || name == "diff" || name == "ribbon-check";
    CLI::App* sub = app.add_subcommand(name, help[name]);
    common(sub, true, movie);
    if (name == "map" || name == "diff") sub->add_option("--class", cfg.class_file, "class JSON in the source complex");
    if (name == "psi") {
      sub->add_option("--word", cfg.word, "braid letters, e.g. \"1,1,1\"");
      sub->add_option("--strands", cfg.strands);
    }
    if (name == "verify-formal") sub->add_flag("--corrupt", cfg.corrupt, "use a wrong homotopy (negative control)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Job job;
  job.cfg = cfg;
  int rc = 0;
  try {
    theory_from_flag(cfg.theory);
    if (cfg.budget == 0) throw InputError("--budget must be positive");
    handlers[cfg.command](job);
  } catch (const BudgetError& e) {
    job.result = {{"error", "budget"}, {"message", e.what()}};
    rc = 1;
  } catch (const UnreadableFile& e) {
    job.result = {{"error", "input"}, {"message", e.what()}};
    rc = 2;
  } catch (const InputError& e) {
    job.result = {{"error", "input"}, {"message", e.what()}};
    rc = 2;
  } catch (const std::exception& e) {
    job.result = {{"error", "internal"}, {"message", e.what()}};
    rc = 3;
  }

  json report = {{"engine", {{"name", "kcob"}, {"version", KCOB_VERSION}}},
                 {"command", job.cfg.command},
                 {"theory", job.cfg.theory},
                 {"budget", job.cfg.budget},
                 {"r3", job.cfg.allow_r3 ? "permissive" : "strict"},
                 {"inputs", job.inputs},
                 {"result", job.result}};
  std::string out;
  if (cfg.format == "json") {
    out = report.dump(2) + "\n";
  } else {
    std::ostringstream os;
    os << "kcob " << KCOB_VERSION << " " << job.cfg.command << "  theory " << job.cfg.theory << "\n";
    for (auto& in : job.inputs) os << "input " << in["path"].get<std::string>() << " sha256 " << in["sha256"].get<std::string>() << "\n";
    if (rc) os << "error: " << job.result["message"].get<std::string>() << "\n";
    else os << job.text.str();
    out = os.str();
  }
  if (cfg.out.empty()) {
    std::cout << out;
  } else {
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return 2;
    }
    f << out;
  }
  if (rc) std::cerr << "kcob: " << job.result["message"].get<std::string>() << "\n";
  return rc;
}
