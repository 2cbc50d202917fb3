#include "kcob/moves.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace kcob {

const char* move_name(MoveType t) {
  switch (t) {
    case MoveType::Birth: return "birth";
    case MoveType::Death: return "death";
    case MoveType::Saddle: return "saddle";
    case MoveType::R1Plus: return "r1+";
    case MoveType::R1Minus: return "r1-";
    case MoveType::R2Plus: return "r2+";
    case MoveType::R2Minus: return "r2-";
    case MoveType::R3: return "r3";
    case MoveType::Relabel: return "relabel";
    case MoveType::Square: return "square";
  }
  return "?";
}

std::string move_to_string(const Move& m) {
  std::ostringstream os;
  os << move_name(m.type);
  if (m.type == MoveType::Relabel) {
    os << " ";
    for (size_t i = 0; i < m.renames.size(); ++i)
      os << (i ? "," : "") << m.renames[i].first << "=" << m.renames[i].second;
    return os.str();
  }
  for (int a : m.arcs) os << " " << a;
  if (!m.side.empty()) os << " " << m.side;
  if (!m.side2.empty()) os << " " << m.side2;
  if (!m.fresh.empty()) {
    os << " :";
    for (int a : m.fresh) os << " " << a;
  }
  return os.str();
}

namespace {

[[noreturn]] void fail(const Move& m, const std::string& msg) {
  std::string where = m.line > 0 ? "line " + std::to_string(m.line) + ": " : "";
  throw InputError(where + move_name(m.type) + ": " + msg);
}

int to_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("x");
    return v;
  } catch (...) {
    throw InputError("line " + std::to_string(line) + ": expected an arc label, got '" + s + "'");
  }
}

}  // namespace

Move parse_move(const std::string& text, int line) {
  std::istringstream is(text);
  std::vector<std::string> toks;
  std::string t;
  while (is >> t) toks.push_back(t);
  if (toks.empty()) throw InputError("line " + std::to_string(line) + ": empty move");
  Move m;
  m.line = line;
  static const std::map<std::string, MoveType> names = {
      {"birth", MoveType::Birth},     {"death", MoveType::Death},    {"saddle", MoveType::Saddle},
      {"r1+", MoveType::R1Plus},      {"r1-", MoveType::R1Minus},    {"r2+", MoveType::R2Plus},
      {"r2-", MoveType::R2Minus},     {"r3", MoveType::R3},          {"relabel", MoveType::Relabel},
      {"square", MoveType::Square}};
  auto it = names.find(toks[0]);
  if (it == names.end()) throw InputError("line " + std::to_string(line) + ": unknown move '" + toks[0] + "'");
  m.type = it->second;
  if (m.type == MoveType::Relabel) {
    std::string joined;
    for (size_t i = 1; i < toks.size(); ++i) joined += toks[i] + ",";
    std::replace(joined.begin(), joined.end(), ',', ' ');
    std::istringstream ps(joined);
    std::string pair;
    while (ps >> pair) {
      auto eq = pair.find('=');
      if (eq == std::string::npos) throw InputError("line " + std::to_string(line) + ": relabel expects a=b pairs");
      m.renames.emplace_back(to_int(pair.substr(0, eq), line), to_int(pair.substr(eq + 1), line));
    }
    if (m.renames.empty()) throw InputError("line " + std::to_string(line) + ": relabel needs at least one pair");
    return m;
  }
  bool fresh_part = false;
  for (size_t i = 1; i < toks.size(); ++i) {
    const std::string& s = toks[i];
    if (s == ":") {
      fresh_part = true;
      continue;
    }
    if (fresh_part) {
      m.fresh.push_back(to_int(s, line));
      continue;
    }
    bool is_num = !s.empty() && (std::isdigit(static_cast<unsigned char>(s[0])) ||
                                 (s[0] == '-' && s.size() > 1 && std::isdigit(static_cast<unsigned char>(s[1]))));
    if (is_num) {
      if (!m.side.empty()) throw InputError("line " + std::to_string(line) + ": arc label after side token");
      m.arcs.push_back(to_int(s, line));
    } else if (m.side.empty()) {
      m.side = s;
    } else if (m.side2.empty()) {
      m.side2 = s;
    } else {
      throw InputError("line " + std::to_string(line) + ": too many tokens in move");
    }
  }
  auto need = [&](size_t lo, size_t hi) {
    if (m.arcs.size() < lo || m.arcs.size() > hi)
      throw InputError("line " + std::to_string(line) + ": " + toks[0] + " takes " + std::to_string(lo) +
                       (lo == hi ? "" : "-" + std::to_string(hi)) + " arc arguments");
  };
  switch (m.type) {
    case MoveType::Birth: need(0, 1); break;
    case MoveType::Death: need(1, 1); break;
    case MoveType::Saddle: need(2, 3); break;
    case MoveType::R1Plus:
      need(1, 1);
      if (m.side != "L+" && m.side != "L-" && m.side != "R+" && m.side != "R-")
        throw InputError("line " + std::to_string(line) + ": r1+ side must be one of L+ L- R+ R-");
      break;
    case MoveType::R1Minus: need(1, 1); break;
    case MoveType::R2Plus:
      need(2, 2);
      if (m.side != "over" && m.side != "under")
        throw InputError("line " + std::to_string(line) + ": r2+ needs 'over' or 'under'");
      if (!m.side2.empty() && m.side2 != "L" && m.side2 != "R")
        throw InputError("line " + std::to_string(line) + ": r2+ face side must be L or R");
      break;
    case MoveType::R2Minus: need(2, 2); break;
    case MoveType::R3: need(3, 3); break;
    case MoveType::Square: need(1, 1); break;
    case MoveType::Relabel: break;
  }
  if (m.type != MoveType::R1Plus && m.type != MoveType::R2Plus && !m.side.empty())
    throw InputError("line " + std::to_string(line) + ": unexpected token '" + m.side + "'");
  return m;
}

namespace {

std::vector<int> fresh_labels(const LinkDiagram& d, const Move& m, size_t k) {
  std::vector<int> out;
  if (!m.fresh.empty()) {
    if (m.fresh.size() != k) fail(m, "expected " + std::to_string(k) + " fresh labels");
    for (int a : m.fresh)
      if (d.has_arc(a)) fail(m, "fresh label " + std::to_string(a) + " already in use");
    return m.fresh;
  }
  int next = d.max_label() + 1;
  for (size_t i = 0; i < k; ++i) out.push_back(next++);
  return out;
}

void require_arc(const LinkDiagram& d, const Move& m, int a) {
  if (!d.has_arc(a)) fail(m, "arc " + std::to_string(a) + " is not in the diagram");
}

std::vector<std::pair<int, int>> identity_anchors(const LinkDiagram& before, const LinkDiagram& after,
                                                  const std::set<int>& exclude) {
  std::vector<std::pair<int, int>> out;
  for (int a : before.arcs())
    if (!exclude.count(a) && after.has_arc(a)) out.emplace_back(a, a);
  return out;
}

void replace_slot_label(std::vector<Crossing>& xs, Slot s, int label) { xs[s.crossing].arc[s.pos] = label; }

std::vector<int> identity_crossings(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Delete crossings and splice the strands running through them.
MoveResult remove_crossings(const LinkDiagram& d, const std::vector<int>& dead, const std::set<int>& local) {
  std::set<int> deadset(dead.begin(), dead.end());
  std::map<int, int> parent;
  for (int a : d.arcs()) parent[a] = a;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (int k : dead) {
    const Crossing& c = d.crossings()[k];
    unite(c.arc[0], c.arc[2]);
    unite(c.arc[1], c.arc[3]);
  }
  std::map<int, std::vector<int>> classes;
  for (int a : d.arcs()) classes[find(a)].push_back(a);
  std::map<int, int> rep;
  std::vector<int> loops = d.loops();
  for (auto& [root, members] : classes) {
    if (members.size() == 1 && d.is_loop(members[0])) {
      rep[members[0]] = members[0];
      continue;
    }
    int chosen = 0;
    for (int a : members) {
      Slot t = d.tail(a);
      if (!deadset.count(t.crossing)) chosen = a;
    }
    if (chosen == 0) {
      std::vector<int> nonlocal;
      for (int a : members)
        if (!local.count(a)) nonlocal.push_back(a);
      chosen = nonlocal.empty() ? members.front() : *std::min_element(nonlocal.begin(), nonlocal.end());
      loops.push_back(chosen);
    }
    for (int a : members) rep[a] = chosen;
  }
  MoveResult r;
  std::vector<Crossing> xs;
  for (int k = 0; k < d.size(); ++k) {
    if (deadset.count(k)) continue;
    Crossing c = d.crossings()[k];
    for (int& a : c.arc) a = rep[a];
    xs.push_back(c);
    r.old_of_new.push_back(k);
  }
  r.after = LinkDiagram(xs, loops);
  r.removed = std::vector<int>(deadset.begin(), deadset.end());
  for (int a : d.arcs())
    if (rep[a] == a && r.after.has_arc(a) && !local.count(a)) r.anchors.emplace_back(a, a);
  return r;
}

bool shares_face_same_side(const LinkDiagram& d, int p, int q) {
  for (const Face& f : d.faces()) {
    bool pr = false, pl = false, qr = false, ql = false;
    for (const FaceSide& s : f) {
      if (s.arc == p) (s.right ? pr : pl) = true;
      if (s.arc == q) (s.right ? qr : ql) = true;
    }
    if ((pr && qr) || (pl && ql)) return true;
  }
  return false;
}

MoveResult do_saddle(const LinkDiagram& d, const Move& m) {
  int p = m.arcs[0], q = m.arcs[1];
  require_arc(d, m, p);
  require_arc(d, m, q);
  std::vector<Crossing> xs = d.crossings();
  std::vector<int> loops = d.loops();
  std::set<int> local{p, q};
  if (p == q) {
    int fresh = m.arcs.size() == 3 ? m.arcs[2] : fresh_labels(d, m, 1)[0];
    if (d.has_arc(fresh)) fail(m, "new loop label " + std::to_string(fresh) + " already in use");
    loops.push_back(fresh);
    local.insert(fresh);
  } else {
    if (m.arcs.size() == 3) fail(m, "a third label is only used when splitting an arc from itself");
    bool lp = d.is_loop(p), lq = d.is_loop(q);
    if (lq) {
      loops.erase(std::find(loops.begin(), loops.end(), q));
    } else if (lp) {
      loops.erase(std::find(loops.begin(), loops.end(), p));
    } else {
      if (d.diagram_piece_of_arc(p) == d.diagram_piece_of_arc(q) && !shares_face_same_side(d, p, q))
        fail(m, "arcs " + std::to_string(p) + " and " + std::to_string(q) +
                    " do not bound a common face with compatible orientation");
      Slot hp = d.head(p), hq = d.head(q);
      replace_slot_label(xs, hp, q);
      replace_slot_label(xs, hq, p);
    }
  }
  MoveResult r;
  try {
    r.after = LinkDiagram(xs, loops);
  } catch (const InputError& e) {
    fail(m, std::string("result is not a valid diagram: ") + e.what());
  }
  r.old_of_new = identity_crossings(d.size());
  r.anchors = identity_anchors(d, r.after, local);
  return r;
}

MoveResult do_r1plus(const LinkDiagram& d, const Move& m) {
  int p = m.arcs[0];
  require_arc(d, m, p);
  auto fr = fresh_labels(d, m, d.is_loop(p) ? 1 : 2);
  int l = fr[0];
  int p2 = d.is_loop(p) ? p : fr[1];
  std::vector<Crossing> xs = d.crossings();
  std::vector<int> loops = d.loops();
  if (d.is_loop(p))
    loops.erase(std::find(loops.begin(), loops.end(), p));
  else
    replace_slot_label(xs, d.head(p), p2);
  Crossing c;
  const std::string& s = m.side;
  if (s == "L+") c = Crossing{{p, p2, l, l}, +1};
  else if (s == "R-") c = Crossing{{p, l, l, p2}, -1};
  else if (s == "R+") c = Crossing{{l, l, p2, p}, +1};
  else c = Crossing{{l, p, p2, l}, -1};
  xs.push_back(c);
  MoveResult r;
  r.after = LinkDiagram(xs, loops);
  r.old_of_new = identity_crossings(d.size());
  r.old_of_new.push_back(-1);
  r.added = {d.size()};
  r.anchors = identity_anchors(d, r.after, {});
  r.loop_arc = l;
  r.strand_arc = p;
  return r;
}

MoveResult do_r1minus(const LinkDiagram& d, const Move& m) {
  int l = m.arcs[0];
  require_arc(d, m, l);
  if (d.is_loop(l)) fail(m, "arc " + std::to_string(l) + " is a free loop, not a kink");
  Slot h = d.head(l), t = d.tail(l);
  int diff = (h.pos - t.pos + 4) % 4;
  if (h.crossing != t.crossing || (diff != 1 && diff != 3))
    fail(m, "arc " + std::to_string(l) + " does not bound a Reidemeister I kink");
  const Crossing& c = d.crossings()[h.crossing];
  int strand = 0;
  for (int p = 0; p < 4; ++p)
    if (p != h.pos && p != t.pos && c.slot_incoming(p)) strand = c.arc[p];
  MoveResult r = remove_crossings(d, {h.crossing}, {l});
  r.loop_arc = l;
  r.strand_arc = strand;
  // a kink on an otherwise crossingless component leaves a loop; name it after
  // the strand
  return r;
}

MoveResult do_r2plus(const LinkDiagram& d, const Move& m) {
  int p = m.arcs[0], q = m.arcs[1];
  require_arc(d, m, p);
  require_arc(d, m, q);
  if (p == q) fail(m, "needs two distinct arcs");
  bool over = m.side == "over";
  bool sideP = true, sideQ = true;  // true: face on the right
  bool found = false;
  bool lp = d.is_loop(p), lq = d.is_loop(q);
  bool same_piece = !lp && !lq && d.diagram_piece_of_arc(p) == d.diagram_piece_of_arc(q);
  if (same_piece) {
    for (const Face& f : d.faces()) {
      const FaceSide* fp = nullptr;
      const FaceSide* fq = nullptr;
      for (const FaceSide& s : f) {
        if (s.arc == p && (m.side2.empty() || s.right == (m.side2 == "R")) && !fp) fp = &s;
        if (s.arc == q && !fq) fq = &s;
      }
      if (fp && fq) {
        sideP = fp->right;
        sideQ = fq->right;
        found = true;
        break;
      }
    }
    if (!found) fail(m, "arcs do not share a face");
  } else {
    if (!m.side2.empty()) sideP = m.side2 == "R";
    sideQ = sideP;
  }
  int nfresh = (lp ? 1 : 2) + (lq ? 1 : 2);
  auto fr = fresh_labels(d, m, nfresh);
  size_t fi = 0;
  int pm = fr[fi++];
  int p2 = lp ? p : fr[fi++];
  int qm = fr[fi++];
  int q2 = lq ? q : fr[fi++];
  std::vector<Crossing> xs = d.crossings();
  std::vector<int> loops = d.loops();
  if (lp) loops.erase(std::find(loops.begin(), loops.end(), p));
  else replace_slot_label(xs, d.head(p), p2);
  if (lq) loops.erase(std::find(loops.begin(), loops.end(), q));
  else replace_slot_label(xs, d.head(q), q2);
  bool parallel = sideP != sideQ;
  Crossing c1, c2;
  if (over) {
    if (parallel) {
      c1 = Crossing{{q, pm, qm, p}, +1};
      c2 = Crossing{{qm, pm, q2, p2}, -1};
    } else {
      c1 = Crossing{{qm, p, q2, pm}, -1};
      c2 = Crossing{{q, p2, qm, pm}, +1};
    }
  } else {
    if (parallel) {
      c1 = Crossing{{p, q, pm, qm}, -1};
      c2 = Crossing{{pm, q2, p2, qm}, +1};
    } else {
      c1 = Crossing{{p, q2, pm, qm}, +1};
      c2 = Crossing{{pm, q, p2, qm}, -1};
    }
  }
  if (!sideP) {
    // face on the left of p: reflect the local picture
    for (Crossing* c : {&c1, &c2}) {
      std::swap(c->arc[1], c->arc[3]);
      c->sign = -c->sign;
    }
  }
  xs.push_back(c1);
  xs.push_back(c2);
  MoveResult r;
  try {
    r.after = LinkDiagram(xs, loops);
  } catch (const InputError& e) {
    fail(m, std::string("result is not a valid diagram: ") + e.what());
  }
  r.old_of_new = identity_crossings(d.size());
  r.old_of_new.push_back(-1);
  r.old_of_new.push_back(-1);
  r.added = {d.size(), d.size() + 1};
  r.anchors = identity_anchors(d, r.after, {});
  r.bigon = {pm, qm};
  return r;
}

// Returns the two crossings of a bigon bounded by arcs a and b, or fails.
std::pair<int, int> bigon_crossings(const LinkDiagram& d, const Move& m, int a, int b) {
  if (d.is_loop(a) || d.is_loop(b)) fail(m, "bigon arcs cannot be free loops");
  Slot ta = d.tail(a), ha = d.head(a), tb = d.tail(b), hb = d.head(b);
  std::set<int> ca{ta.crossing, ha.crossing}, cb{tb.crossing, hb.crossing};
  if (ca.size() != 2 || ca != cb) fail(m, "arcs do not run between the same two crossings");
  bool bigon_face = false;
  for (const Face& f : d.faces()) {
    if (f.size() != 2) continue;
    std::set<int> fa{f[0].arc, f[1].arc};
    if (fa == std::set<int>{a, b}) bigon_face = true;
  }
  if (!bigon_face) fail(m, "arcs do not bound a bigon face");
  auto over_at = [&](Slot s) { return s.pos == 1 || s.pos == 3; };
  if (over_at(ta) != over_at(ha)) fail(m, "strand through arc " + std::to_string(a) + " changes level; not an R2 bigon");
  if (over_at(tb) != over_at(hb)) fail(m, "strand through arc " + std::to_string(b) + " changes level; not an R2 bigon");
  return {*ca.begin(), *ca.rbegin()};
}

MoveResult do_r2minus(const LinkDiagram& d, const Move& m) {
  int a = m.arcs[0], b = m.arcs[1];
  require_arc(d, m, a);
  require_arc(d, m, b);
  auto [c1, c2] = bigon_crossings(d, m, a, b);
  MoveResult r = remove_crossings(d, {c1, c2}, {a, b});
  r.bigon = {a, b};
  return r;
}

struct Triangle {
  int x[3];            // crossings
  int mid[3];          // mid arc of strand s
  int in[3], out[3];   // outer arcs of strand s
  int first[3], second[3];  // crossings passed by strand s, in order
  bool over[3][2];     // strand s is over at its first/second crossing
};

bool find_triangle(const LinkDiagram& d, const std::vector<int>& arcs, Triangle& t, std::string& why) {
  std::set<int> want(arcs.begin(), arcs.end());
  if (want.size() != 3) {
    why = "needs three distinct arcs";
    return false;
  }
  bool face = false;
  for (const Face& f : d.faces()) {
    if (f.size() != 3) continue;
    std::set<int> fa{f[0].arc, f[1].arc, f[2].arc};
    if (fa == want) face = true;
  }
  if (!face) {
    why = "arcs do not bound a triangular face";
    return false;
  }
  int kind_oo = -1, kind_uu = -1, kind_mix = -1;
  for (int s = 0; s < 3; ++s) {
    int a = arcs[s];
    if (d.is_loop(a)) {
      why = "free loop in triangle";
      return false;
    }
    Slot tl = d.tail(a), hd = d.head(a);
    if (tl.crossing == hd.crossing) {
      why = "degenerate triangle";
      return false;
    }
    t.mid[s] = a;
    t.first[s] = tl.crossing;
    t.second[s] = hd.crossing;
    const auto& si = d.crossings();
    t.in[s] = si[tl.crossing].arc[(tl.pos + 2) % 4];
    t.out[s] = si[hd.crossing].arc[(hd.pos + 2) % 4];
    t.over[s][0] = tl.pos % 2 == 1;
    t.over[s][1] = hd.pos % 2 == 1;
    if (t.over[s][0] && t.over[s][1]) kind_oo = s;
    else if (!t.over[s][0] && !t.over[s][1]) kind_uu = s;
    else kind_mix = s;
  }
  if (kind_oo < 0 || kind_uu < 0 || kind_mix < 0) {
    why = "no strand lies over both of its triangle crossings (not a Reidemeister III site)";
    return false;
  }
  std::set<int> xs{t.first[0], t.first[1], t.first[2], t.second[0], t.second[1], t.second[2]};
  if (xs.size() != 3) {
    why = "triangle does not involve three crossings";
    return false;
  }
  int i = 0;
  for (int k : xs) t.x[i++] = k;
  return true;
}

MoveResult do_r3(const LinkDiagram& d, const Move& m) {
  Triangle t;
  std::string why;
  for (int a : m.arcs) require_arc(d, m, a);
  if (!find_triangle(d, m.arcs, t, why)) fail(m, why);
  std::vector<Crossing> xs = d.crossings();
  for (int k : t.x) {
    // strands through k
    int ss[2], n = 0;
    for (int s = 0; s < 3; ++s)
      if (t.first[s] == k || t.second[s] == k) ss[n++] = s;
    int ui = 0, uo = 0, oi = 0, oo = 0;
    for (int j = 0; j < 2; ++j) {
      int s = ss[j];
      bool was_first = t.first[s] == k;
      bool is_over = was_first ? t.over[s][0] : t.over[s][1];
      int in = was_first ? t.mid[s] : t.in[s];
      int out = was_first ? t.out[s] : t.mid[s];
      if (is_over) oi = in, oo = out;
      else ui = in, uo = out;
    }
    xs[k] = make_crossing(ui, uo, oi, oo, d.crossings()[k].sign);
  }
  MoveResult r;
  try {
    r.after = LinkDiagram(xs, d.loops());
  } catch (const InputError& e) {
    throw std::logic_error(std::string("internal: r3 rewrite produced invalid diagram: ") + e.what());
  }
  r.old_of_new = identity_crossings(d.size());
  r.anchors = identity_anchors(d, r.after, {t.mid[0], t.mid[1], t.mid[2]});
  r.triangle = m.arcs;
  return r;
}

}  // namespace

MoveResult apply_move(const LinkDiagram& d, const Move& m) {
  MoveResult r;
  switch (m.type) {
    case MoveType::Birth: {
      int a = m.arcs.empty() ? fresh_labels(d, m, 1)[0] : m.arcs[0];
      if (d.has_arc(a)) fail(m, "arc " + std::to_string(a) + " already in use");
      std::vector<int> loops = d.loops();
      loops.push_back(a);
      r.after = LinkDiagram(d.crossings(), loops);
      r.old_of_new = identity_crossings(d.size());
      r.anchors = identity_anchors(d, r.after, {});
      r.loop_arc = a;
      return r;
    }
    case MoveType::Death: {
      int a = m.arcs[0];
      require_arc(d, m, a);
      if (!d.is_loop(a)) fail(m, "arc " + std::to_string(a) + " is not a crossingless circle");
      std::vector<int> loops = d.loops();
      loops.erase(std::find(loops.begin(), loops.end(), a));
      r.after = LinkDiagram(d.crossings(), loops);
      r.old_of_new = identity_crossings(d.size());
      r.anchors = identity_anchors(d, r.after, {a});
      r.loop_arc = a;
      return r;
    }
    case MoveType::Saddle: return do_saddle(d, m);
    case MoveType::R1Plus: return do_r1plus(d, m);
    case MoveType::R1Minus: return do_r1minus(d, m);
    case MoveType::R2Plus: return do_r2plus(d, m);
    case MoveType::R2Minus: return do_r2minus(d, m);
    case MoveType::R3: return do_r3(d, m);
    case MoveType::Relabel: {
      std::unordered_map<int, int> mp;
      for (auto [a, b] : m.renames) {
        require_arc(d, m, a);
        if (mp.count(a)) fail(m, "arc " + std::to_string(a) + " renamed twice");
        mp[a] = b;
      }
      try {
        r.after = relabel(d, mp);
      } catch (const InputError& e) {
        fail(m, std::string("renaming is not injective: ") + e.what());
      }
      if (r.after.arc_count() != d.arc_count()) fail(m, "renaming is not injective");
      r.old_of_new = identity_crossings(d.size());
      for (int a : d.arcs()) {
        auto it = mp.find(a);
        r.anchors.emplace_back(a, it == mp.end() ? a : it->second);
      }
      return r;
    }
    case MoveType::Square: {
      require_arc(d, m, m.arcs[0]);
      r.after = d;
      r.old_of_new = identity_crossings(d.size());
      r.anchors = identity_anchors(d, d, {});
      return r;
    }
  }
  fail(m, "unsupported move");
}

std::vector<Move> saddle_sites(const LinkDiagram& d) {
  std::set<std::pair<int, int>> seen;
  std::vector<Move> out;
  for (const Face& f : d.faces())
    for (size_t i = 0; i < f.size(); ++i)
      for (size_t j = 0; j < f.size(); ++j) {
        if (f[i].arc >= f[j].arc || f[i].right != f[j].right) continue;
        if (!seen.insert({f[i].arc, f[j].arc}).second) continue;
        Move m;
        m.type = MoveType::Saddle;
        m.arcs = {f[i].arc, f[j].arc};
        out.push_back(m);
      }
  return out;
}

std::vector<Move> reidemeister_sites(const LinkDiagram& d, bool include_r3) {
  std::vector<Move> out;
  for (int a : d.arcs())
    for (const char* s : {"L+", "L-", "R+", "R-"}) {
      Move m;
      m.type = MoveType::R1Plus;
      m.arcs = {a};
      m.side = s;
      out.push_back(m);
    }
  for (int a : d.arcs()) {
    if (d.is_loop(a)) continue;
    Slot h = d.head(a), t = d.tail(a);
    int diff = (h.pos - t.pos + 4) % 4;
    if (h.crossing == t.crossing && (diff == 1 || diff == 3)) {
      Move m;
      m.type = MoveType::R1Minus;
      m.arcs = {a};
      out.push_back(m);
    }
  }
  auto faces = d.faces();
  std::set<std::tuple<int, int, bool>> seen;
  for (const Face& f : faces)
    for (const FaceSide& x : f)
      for (const FaceSide& y : f) {
        if (x.arc == y.arc) continue;
        if (!seen.insert({x.arc, y.arc, x.right}).second) continue;
        for (const char* lvl : {"over", "under"}) {
          Move m;
          m.type = MoveType::R2Plus;
          m.arcs = {x.arc, y.arc};
          m.side = lvl;
          m.side2 = x.right ? "R" : "L";
          out.push_back(m);
        }
      }
  for (const Face& f : faces) {
    if (f.size() == 2 && f[0].arc != f[1].arc) {
      Move m;
      m.type = MoveType::R2Minus;
      m.arcs = {f[0].arc, f[1].arc};
      try {
        bigon_crossings(d, m, f[0].arc, f[1].arc);
        out.push_back(m);
      } catch (const InputError&) {
      }
    }
    if (include_r3 && f.size() == 3) {
      Triangle t;
      std::string why;
      std::vector<int> arcs{f[0].arc, f[1].arc, f[2].arc};
      if (find_triangle(d, arcs, t, why)) {
        Move m;
        m.type = MoveType::R3;
        m.arcs = arcs;
        out.push_back(m);
      }
    }
  }
  return out;
}

}  // namespace kcob
