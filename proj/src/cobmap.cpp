#include "kcob/cobmap.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kcob {

// ---- movies -----------------------------------------------------------------

int Movie::euler_characteristic() const {
  int chi = 0;
  for (const Move& m : moves) {
    switch (m.type) {
      case MoveType::Birth:
      case MoveType::Death: chi += 1; break;
      case MoveType::Saddle: chi -= 1; break;
      case MoveType::Square: chi -= 2; break;
      default: break;
    }
  }
  return chi;
}

bool Movie::has_r3() const {
  return std::any_of(moves.begin(), moves.end(), [](const Move& m) { return m.type == MoveType::R3; });
}

bool equal_up_to_order(const LinkDiagram& a, const LinkDiagram& b, std::vector<int>* perm) {
  if (a.size() != b.size()) return false;
  auto la = a.loops(), lb = b.loops();
  std::sort(la.begin(), la.end());
  std::sort(lb.begin(), lb.end());
  if (la != lb) return false;
  std::map<std::pair<std::array<int, 4>, int>, int> where;
  for (int k = 0; k < b.size(); ++k) where[{b.crossings()[k].arc, b.crossings()[k].sign}] = k;
  std::vector<int> p(a.size());
  for (int k = 0; k < a.size(); ++k) {
    auto it = where.find({a.crossings()[k].arc, a.crossings()[k].sign});
    if (it == where.end()) return false;
    p[k] = it->second;
  }
  if (perm) *perm = std::move(p);
  return true;
}

namespace {

bool is_identity(const std::vector<int>& p) {
  for (size_t i = 0; i < p.size(); ++i)
    if (p[i] != static_cast<int>(i)) return false;
  return true;
}

std::string with_line(int line, const std::string& msg) {
  if (line <= 0 || msg.rfind("line ", 0) == 0) return msg;
  return "line " + std::to_string(line) + ": " + msg;
}

}  // namespace

Movie make_movie(const LinkDiagram& start, const std::vector<Move>& moves) {
  Movie m;
  m.frames.push_back(start);
  for (const Move& mv : moves) {
    m.frames.push_back(apply_move(m.frames.back(), mv).after);
    m.moves.push_back(mv);
    m.perms.emplace_back();
  }
  return m;
}

Movie parse_movie(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  Movie m;
  bool in_frame = false, move_pending = false;
  int frame_line = 0, last_move_line = 0;
  std::string frame_text;
  auto strip = [](std::string s) {
    auto h = s.find('#');
    if (h != std::string::npos) s = s.substr(0, h);
    size_t a = s.find_first_not_of(" \t\r"), b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty()) continue;
    if (in_frame) {
      if (s != "end") {
        frame_text += s + "\n";
        continue;
      }
      in_frame = false;
      LinkDiagram f;
      try {
        if (!frame_text.empty()) f = parse_pd(frame_text);
      } catch (const InputError& e) {
        throw InputError("frame at line " + std::to_string(frame_line) + ": " + e.what());
      }
      if (m.frames.empty()) {
        m.frames.push_back(f);
      } else {
        if (!move_pending)
          throw InputError("line " + std::to_string(frame_line) + ": two frames with no move between them");
        std::vector<int> perm;
        if (!equal_up_to_order(m.frames.back(), f, &perm))
          throw InputError("line " + std::to_string(frame_line) + ": frame does not match the result of the move at line " +
                           std::to_string(last_move_line));
        if (!is_identity(perm)) m.perms.back() = perm;
        m.frames.back() = f;
      }
      move_pending = false;
      continue;
    }
    if (s == "frame") {
      in_frame = true;
      frame_line = lineno;
      frame_text.clear();
      continue;
    }
    if (s == "end") throw InputError("line " + std::to_string(lineno) + ": 'end' outside a frame");
    if (s.rfind("move ", 0) == 0) s = s.substr(5);
    if (m.frames.empty()) throw InputError("line " + std::to_string(lineno) + ": a movie must start with a frame");
    Move mv = parse_move(s, lineno);
    MoveResult r;
    try {
      r = apply_move(m.frames.back(), mv);
    } catch (const InputError& e) {
      throw InputError(with_line(lineno, e.what()));
    }
    m.frames.push_back(r.after);
    m.moves.push_back(mv);
    m.perms.emplace_back();
    move_pending = true;
    last_move_line = lineno;
  }
  if (in_frame) throw InputError("line " + std::to_string(frame_line) + ": frame is missing its 'end'");
  if (m.frames.empty()) throw InputError("movie has no frames");
  return m;
}

std::string serialize_movie(const Movie& m) {
  std::ostringstream os;
  for (size_t i = 0; i < m.frames.size(); ++i) {
    if (i > 0) os << "move " << move_to_string(m.moves[i - 1]) << "\n";
    os << "frame\n" << serialize_pd(m.frames[i]) << "end\n";
  }
  return os.str();
}

Movie concat(const Movie& first, const Movie& second) {
  if (first.frames.back() != second.frames.front())
    throw InputError("cannot concatenate movies: end frame of the first differs from the start of the second");
  Movie out = first;
  for (size_t i = 0; i < second.moves.size(); ++i) {
    out.moves.push_back(second.moves[i]);
    out.perms.push_back(second.perms[i]);
    out.frames.push_back(second.frames[i + 1]);
  }
  return out;
}

namespace {

std::set<int> label_set(const LinkDiagram& d) { return std::set<int>(d.arcs().begin(), d.arcs().end()); }

// Candidate search: apply `cand` (with created labels chosen above every
// label in sight) and try to identify the result with `to` by renaming the
// labels the two do not share.  Created labels are folded into the move;
// other renamings come back in `renames`.
bool try_candidate(const LinkDiagram& from, const LinkDiagram& to, Move cand, Move& out,
                   std::vector<std::pair<int, int>>& renames) {
  int top = std::max(from.max_label(), to.max_label());
  size_t nfresh = 0;
  bool split = cand.type == MoveType::Saddle && cand.arcs.size() == 2 && cand.arcs[0] == cand.arcs[1];
  if (split) {
    cand.arcs.push_back(top + 1);
  } else if (cand.type == MoveType::R1Plus || cand.type == MoveType::R2Plus) {
    if (cand.type == MoveType::R1Plus) nfresh = from.is_loop(cand.arcs[0]) ? 1 : 2;
    else nfresh = (from.is_loop(cand.arcs[0]) ? 1 : 2) + (from.is_loop(cand.arcs[1]) ? 1 : 2);
    cand.fresh.clear();
    for (size_t i = 0; i < nfresh; ++i) cand.fresh.push_back(top + 1 + static_cast<int>(i));
  }
  LinkDiagram r;
  try {
    r = apply_move(from, cand).after;
  } catch (const InputError&) {
    return false;
  }
  if (r.size() != to.size() || r.arc_count() != to.arc_count()) return false;
  auto lr = label_set(r), lt = label_set(to);
  std::vector<int> extra, missing;
  std::set_difference(lr.begin(), lr.end(), lt.begin(), lt.end(), std::back_inserter(extra));
  std::set_difference(lt.begin(), lt.end(), lr.begin(), lr.end(), std::back_inserter(missing));
  if (extra.size() != missing.size()) return false;
  // second pass: labels at the site may also move (a loop split by the move
  // keeps its label on either piece)
  for (int pass = 0; pass < 2; ++pass) {
  if (pass == 1) {
    for (int a : cand.arcs)
      if (lr.count(a) && lt.count(a) && std::find(extra.begin(), extra.end(), a) == extra.end()) {
        extra.push_back(a);
        missing.push_back(a);
      }
  }
  if (extra.size() > 7) return false;
  std::vector<int> img = missing;
  std::sort(img.begin(), img.end());
  do {
    std::unordered_map<int, int> mp;
    for (size_t i = 0; i < extra.size(); ++i)
      if (extra[i] != img[i]) mp[extra[i]] = img[i];
    LinkDiagram rr = mp.empty() ? r : relabel(r, mp);
    if (!equal_up_to_order(rr, to)) continue;
    out = cand;
    renames.clear();
    std::set<int> created;
    if (split) created.insert(cand.arcs[2]);
    for (int f : cand.fresh) created.insert(f);
    for (auto [a, b] : mp) {
      if (created.count(a) && !from.has_arc(b)) {
        if (split && out.arcs[2] == a) out.arcs[2] = b;
        for (int& f : out.fresh)
          if (f == a) f = b;
      } else {
        renames.emplace_back(a, b);
      }
    }
    std::sort(renames.begin(), renames.end());
    return true;
  } while (std::next_permutation(img.begin(), img.end()));
  }
  return false;
}

std::vector<Move> candidates_of_type(const LinkDiagram& from, MoveType type) {
  std::vector<Move> out;
  switch (type) {
    case MoveType::Saddle: {
      const auto& a = from.arcs();
      for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i; j < a.size(); ++j) {
          Move m;
          m.type = MoveType::Saddle;
          m.arcs = {a[i], a[j]};
          out.push_back(m);
        }
      break;
    }
    case MoveType::R1Plus:
    case MoveType::R1Minus:
    case MoveType::R2Plus:
    case MoveType::R2Minus:
    case MoveType::R3:
      for (Move& m : reidemeister_sites(from, true))
        if (m.type == type) out.push_back(m);
      if (type == MoveType::R2Plus) {
        // sites across distinct diagram pieces are not face-adjacent
        const auto& a = from.arcs();
        for (int x : a)
          for (int y : a) {
            if (x == y) continue;
            for (const char* lvl : {"over", "under"})
              for (const char* sd : {"L", "R"}) {
                Move m;
                m.type = MoveType::R2Plus;
                m.arcs = {x, y};
                m.side = lvl;
                m.side2 = sd;
                out.push_back(m);
              }
          }
      }
      break;
    case MoveType::Birth: {
      Move m;
      m.type = MoveType::Birth;
      out.push_back(m);
      break;
    }
    case MoveType::Death:
      for (int a : from.loops()) {
        Move m;
        m.type = MoveType::Death;
        m.arcs = {a};
        out.push_back(m);
      }
      break;
    default: break;
  }
  return out;
}

// Moves of the given type carrying `from` to `to` (up to crossing order);
// appends a relabel when the labels still differ.
void find_moves(const LinkDiagram& from, const LinkDiagram& to, MoveType type, const std::vector<Move>& hints,
                std::vector<Move>& out) {
  std::vector<std::pair<int, int>> renames;
  Move found;
  bool ok = false;
  for (const Move& h : hints)
    if ((ok = try_candidate(from, to, h, found, renames))) break;
  if (!ok)
    for (const Move& c : candidates_of_type(from, type))
      if ((ok = try_candidate(from, to, c, found, renames))) break;
  if (!ok)
    throw InputError(std::string("cannot realise a ") + move_name(type) + " move between consecutive frames");
  found.line = 0;
  out.push_back(found);
  if (!renames.empty()) {
    Move rl;
    rl.type = MoveType::Relabel;
    rl.renames = renames;
    out.push_back(rl);
  }
}

Movie assemble(const LinkDiagram& start, const std::vector<std::pair<Move, LinkDiagram>>& seq) {
  Movie m;
  m.frames.push_back(start);
  for (auto& [mv, target] : seq) {
    LinkDiagram r = apply_move(m.frames.back(), mv).after;
    std::vector<int> perm;
    if (!equal_up_to_order(r, target, &perm))
      throw std::logic_error("internal: movie transformation lost track of a frame");
    m.moves.push_back(mv);
    m.perms.push_back(is_identity(perm) ? std::vector<int>{} : perm);
    m.frames.push_back(target);
  }
  return m;
}

}  // namespace

Movie reverse(const Movie& m) {
  std::vector<std::pair<Move, LinkDiagram>> seq;
  for (size_t k = m.moves.size(); k-- > 0;) {
    const LinkDiagram& from = m.frames[k + 1];
    const LinkDiagram& to = m.frames[k];
    const Move& fw = m.moves[k];
    MoveResult r = apply_move(to, fw);
    std::vector<Move> hints;
    MoveType inv = fw.type;
    Move h;
    switch (fw.type) {
      case MoveType::Birth:
        inv = MoveType::Death;
        h.type = MoveType::Death;
        h.arcs = {r.loop_arc};
        hints.push_back(h);
        break;
      case MoveType::Death:
        inv = MoveType::Birth;
        h.type = MoveType::Birth;
        h.arcs = {r.loop_arc};
        hints.push_back(h);
        break;
      case MoveType::Saddle: {
        h.type = MoveType::Saddle;
        int p = fw.arcs[0], q = fw.arcs[1];
        if (p == q) {
          h.arcs = {p, fw.arcs.size() == 3 ? fw.arcs[2] : r.after.max_label()};
        } else if (to.is_loop(q) && !to.is_loop(p)) {
          h.arcs = {p, p};
        } else if (to.is_loop(p) && !to.is_loop(q)) {
          h.arcs = {q, q};
        } else if (to.is_loop(p) && to.is_loop(q)) {
          h.arcs = {p, p};
        } else {
          h.arcs = {p, q};
        }
        hints.push_back(h);
        break;
      }
      case MoveType::R1Plus:
        inv = MoveType::R1Minus;
        h.type = MoveType::R1Minus;
        h.arcs = {r.loop_arc};
        hints.push_back(h);
        break;
      case MoveType::R1Minus:
        inv = MoveType::R1Plus;
        for (const char* s : {"L+", "L-", "R+", "R-"}) {
          h.type = MoveType::R1Plus;
          h.arcs = {r.strand_arc};
          h.side = s;
          hints.push_back(h);
        }
        break;
      case MoveType::R2Plus:
        inv = MoveType::R2Minus;
        h.type = MoveType::R2Minus;
        h.arcs = {r.bigon.first, r.bigon.second};
        hints.push_back(h);
        break;
      case MoveType::R2Minus:
        inv = MoveType::R2Plus;
        break;
      case MoveType::R3:
        h = fw;
        hints.push_back(h);
        break;
      case MoveType::Relabel:
        h.type = MoveType::Relabel;
        for (auto [a, b] : fw.renames) h.renames.emplace_back(b, a);
        hints.push_back(h);
        break;
      case MoveType::Square:
        h = fw;
        hints.push_back(h);
        break;
    }
    std::vector<Move> found;
    find_moves(from, to, inv, hints, found);
    // intermediate frame when a relabel was appended
    LinkDiagram cur = from;
    for (size_t i = 0; i < found.size(); ++i) {
      LinkDiagram next = i + 1 == found.size() ? to : apply_move(cur, found[i]).after;
      seq.emplace_back(found[i], next);
      cur = next;
    }
  }
  return assemble(m.frames.back(), seq);
}

Movie mirror(const Movie& m) {
  std::vector<std::pair<Move, LinkDiagram>> seq;
  for (size_t k = 0; k < m.moves.size(); ++k) {
    LinkDiagram from = mirror(m.frames[k]), to = mirror(m.frames[k + 1]);
    Move h = m.moves[k];
    h.line = 0;
    if (h.type == MoveType::R1Plus) h.side = std::string(1, h.side[0]) + (h.side[1] == '+' ? "-" : "+");
    if (h.type == MoveType::R2Plus) h.side = h.side == "over" ? "under" : "over";
    std::vector<Move> found;
    std::vector<std::pair<int, int>> renames;
    Move f;
    bool exact = false;
    try {
      exact = equal_up_to_order(apply_move(from, h).after, to);
    } catch (const InputError&) {
    }
    if (exact) found.push_back(h);
    else find_moves(from, to, h.type, {h}, found);
    LinkDiagram cur = from;
    for (size_t i = 0; i < found.size(); ++i) {
      LinkDiagram next = i + 1 == found.size() ? to : apply_move(cur, found[i]).after;
      seq.emplace_back(found[i], next);
      cur = next;
    }
  }
  return assemble(mirror(m.frames.front()), seq);
}

Movie reverse_mirror(const Movie& m) { return mirror(reverse(m)); }

// ---- step maps ----------------------------------------------------------------

namespace {

using Terms = std::vector<std::pair<uint32_t, Scalar>>;
using LocalOp = std::function<Terms(uint32_t)>;

int edge_sign(Vertex v, int i) { return (__builtin_popcountll(v & ((Vertex{1} << i) - 1)) & 1) ? -1 : 1; }

Terms elem_terms(const AlgElem& e) { return {{0u, e[0]}, {1u, e[1]}}; }

Terms alg2_terms(const Alg2& t) {
  // index 2a+b: a on output 0, b on output 1
  Terms out;
  for (uint32_t idx = 0; idx < 4; ++idx) out.push_back({(idx >> 1) | ((idx & 1) << 1), t[idx]});
  return out;
}

int circle_size(const GradedComplex& c, Vertex v, int circle) {
  int n = 0;
  for (int i = 0; i < c.diagram.arc_count(); ++i)
    if (c.circle_of_index(v, i) == circle) ++n;
  return n;
}

// Applies a local operation at vertex vb of B to generator g of A.  Circles
// through in_arcs (A) and out_arcs (B) are local; all other circles of B are
// matched with circles of A through the anchor pairs and keep their labels.
void local_map(const GradedComplex& A, Gen g, const GradedComplex& B, Vertex vb,
               const std::vector<std::pair<int, int>>& anchors, const std::vector<int>& in_arcs,
               const std::vector<int>& out_arcs, const LocalOp& op, Scalar coeff, ChainElement& out) {
  const Ring& R = B.theory.ring;
  if (R.is_zero(coeff)) return;
  auto [va, La] = A.decode(g);
  std::vector<int> in_c, out_c;
  for (int a : in_arcs) in_c.push_back(A.circle_of(va, a));
  for (int b : out_arcs) out_c.push_back(B.circle_of(vb, b));
  auto distinct = [](std::vector<int> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!distinct(in_c) || !distinct(out_c)) throw std::logic_error("internal: local circles coincide");
  uint32_t in_labels = 0;
  for (size_t k = 0; k < in_c.size(); ++k)
    if ((La >> in_c[k]) & 1) in_labels |= 1u << k;
  const int nb = B.circles(vb), na = A.circles(va);
  std::vector<int> src_of(nb, -1);
  for (int j : out_c) src_of[j] = -2;
  std::vector<char> used(na, 0);
  for (int i : in_c) used[i] = 2;
  for (auto [a, b] : anchors) {
    int ia = A.diagram.arc_index(a), ib = B.diagram.arc_index(b);
    if (ia < 0 || ib < 0) continue;
    int j = B.circle_of_index(vb, ib);
    if (src_of[j] == -2) continue;
    int i = A.circle_of_index(va, ia);
    if (used[i] == 2) throw std::logic_error("internal: anchor joins a local circle to a far circle");
    if (src_of[j] == -1) src_of[j] = i;
    else if (src_of[j] != i) throw std::logic_error("internal: far circles merge across a local move");
  }
  uint64_t base = 0;
  for (int j = 0; j < nb; ++j) {
    if (src_of[j] == -2) continue;
    if (src_of[j] < 0) throw std::logic_error("internal: circle with no anchor");
    if (used[src_of[j]]) throw std::logic_error("internal: far circle splits across a local move");
    used[src_of[j]] = 1;
    if ((La >> src_of[j]) & 1) base |= uint64_t{1} << j;
  }
  for (int i = 0; i < na; ++i)
    if (!used[i]) throw std::logic_error("internal: circle lost in transport");
  for (auto& [lab, c] : op(in_labels)) {
    if (R.is_zero(c)) continue;
    uint64_t L = base;
    for (size_t k = 0; k < out_c.size(); ++k)
      if ((lab >> k) & 1) L |= uint64_t{1} << out_c[k];
    add_term(out, B.gen(vb, L), R.mul(coeff, c), R);
  }
}

ChainElement filter_vertex(const GradedComplex& c, const ChainElement& e, Vertex v) {
  ChainElement out;
  for (auto& [g, s] : e)
    if (c.decode(g).first == v) out.emplace(g, s);
  return out;
}

std::vector<std::pair<int, int>> identity_pairs(const LinkDiagram& d, const std::set<int>& skip) {
  std::vector<std::pair<int, int>> out;
  for (int a : d.arcs())
    if (!skip.count(a)) out.emplace_back(a, a);
  return out;
}

// Drop the given bit positions from a vertex.
Vertex compress(Vertex v, const std::vector<int>& drop, int n) {
  Vertex out = 0;
  int k = 0;
  for (int i = 0; i < n; ++i) {
    if (std::find(drop.begin(), drop.end(), i) != drop.end()) continue;
    if ((v >> i) & 1) out |= Vertex{1} << k;
    ++k;
  }
  return out;
}

// Sign of the isomorphism that moves the crossings `moved` (in that order)
// behind all others: (-1)^(inverted pairs of resolved-1 crossings).
int reorder_sign(Vertex v, const std::vector<int>& moved) {
  std::vector<int> ones;
  for (int i = 0; i < 64; ++i)
    if ((v >> i) & 1) ones.push_back(i);
  auto pos = [&](int i) {
    auto it = std::find(moved.begin(), moved.end(), i);
    if (it != moved.end()) return 1000 + static_cast<int>(it - moved.begin());
    return i;
  };
  int inv = 0;
  for (size_t x = 0; x < ones.size(); ++x)
    for (size_t y = x + 1; y < ones.size(); ++y)
      if (pos(ones[x]) > pos(ones[y])) ++inv;
  return (inv & 1) ? -1 : 1;
}

}  // namespace

ChainElement empty_unit(const GradedComplex& c) {
  if (c.n != 0 || c.circles(0) != 0) throw InputError("source is not the empty diagram");
  ChainElement e;
  e.emplace(c.gen(0, 0), c.theory.ring.one());
  return e;
}

MovieMap::MovieMap(const Movie& m, const FrobeniusTheory& t, R3Mode mode, uint64_t budget) {
  complexes_.push_back(std::make_unique<GradedComplex>(build_complex(m.frames[0], t, budget)));
  auto id_op = [one = t.ring.one()](uint32_t) { return Terms{{0u, one}}; };
  for (size_t i = 0; i < m.moves.size(); ++i) {
    const Move& mv = m.moves[i];
    if (mv.type == MoveType::R3 && mode == R3Mode::Strict)
      throw InputError(with_line(mv.line, "r3 move rejected in strict mode (use --allow-r3)"));
    MoveResult r = apply_move(m.frames[i], mv);
    bool permuted = !m.perms[i].empty();
    const GradedComplex* A = complexes_.back().get();
    complexes_.push_back(std::make_unique<GradedComplex>(build_complex(permuted ? r.after : m.frames[i + 1], t, budget)));
    const GradedComplex* B = complexes_.back().get();
    Step st;
    st.name = move_to_string(mv);
    const FrobeniusTheory T = t;
    auto anchors = r.anchors;
    switch (mv.type) {
      case MoveType::Birth: {
        int a = r.loop_arc;
        st.qdeg = 1;
        st.image = [A, B, T, anchors, a](Gen g) {
          ChainElement out;
          local_map(*A, g, *B, A->decode(g).first, anchors, {}, {a},
                    [&T](uint32_t) { return elem_terms(unit(T)); }, T.ring.one(), out);
          return out;
        };
        break;
      }
      case MoveType::Death: {
        int a = r.loop_arc;
        st.qdeg = 1;
        st.image = [A, B, T, anchors, a](Gen g) {
          ChainElement out;
          local_map(*A, g, *B, A->decode(g).first, anchors, {a}, {},
                    [&T](uint32_t l) { return Terms{{0u, counit(T, alg_basis(T, l & 1))}}; }, T.ring.one(), out);
          return out;
        };
        break;
      }
      case MoveType::Saddle: {
        int p = mv.arcs[0], q = mv.arcs[1];
        int fresh = 0;
        if (p == q) {
          // the loop created by a self-split is the arc of B absent from A
          for (int a : B->diagram.arcs())
            if (!A->diagram.has_arc(a)) fresh = a;
        }
        st.qdeg = -1;
        st.image = [A, B, T, anchors, p, q, fresh](Gen g) {
          ChainElement out;
          Vertex v = A->decode(g).first;
          bool split = p == q || A->circle_of(v, p) == A->circle_of(v, q);
          if (split) {
            std::vector<int> outs = p == q ? std::vector<int>{p, fresh} : std::vector<int>{p, q};
            local_map(*A, g, *B, v, anchors, {p}, outs,
                      [&T](uint32_t l) { return alg2_terms(comultiply(T, alg_basis(T, l & 1))); }, T.ring.one(), out);
          } else {
            int o = B->diagram.has_arc(p) ? p : q;
            local_map(*A, g, *B, v, anchors, {p, q}, {o},
                      [&T](uint32_t l) {
                        return elem_terms(multiply(T, alg_basis(T, l & 1), alg_basis(T, (l >> 1) & 1)));
                      },
                      T.ring.one(), out);
          }
          return out;
        };
        break;
      }
      case MoveType::Square: {
        int a = mv.arcs[0];
        st.qdeg = -2;
        st.image = [A, B, T, anchors, a](Gen g) {
          ChainElement out;
          local_map(*A, g, *B, A->decode(g).first, anchors, {a}, {a},
                    [&T](uint32_t l) {
                      Alg2 d = comultiply(T, alg_basis(T, l & 1));
                      AlgElem acc{T.ring.zero(), T.ring.zero()};
                      for (int idx = 0; idx < 4; ++idx) {
                        AlgElem prod = multiply(T, alg_basis(T, idx >> 1), alg_basis(T, idx & 1));
                        for (int k = 0; k < 2; ++k) acc[k] = T.ring.add(acc[k], T.ring.mul(d[idx], prod[k]));
                      }
                      return elem_terms(acc);
                    },
                    T.ring.one(), out);
          return out;
        };
        break;
      }
      case MoveType::Relabel: {
        st.image = [A, B, anchors, id_op](Gen g) {
          ChainElement out;
          local_map(*A, g, *B, A->decode(g).first, anchors, {}, {}, id_op, B->theory.ring.one(), out);
          return out;
        };
        break;
      }
      case MoveType::R1Plus: {
        int n = A->n, p = r.strand_arc, l = r.loop_arc;
        bool positive = B->diagram.crossings()[n].sign > 0;
        st.image = [A, B, T, anchors, n, p, l, positive](Gen g) {
          ChainElement out;
          Vertex v = A->decode(g).first;
          if (positive) {
            // a -> a (x) x - xa (x) 1
            local_map(*A, g, *B, v, anchors, {p}, {p, l},
                      [&T](uint32_t s) {
                        AlgElem a = alg_basis(T, s & 1), xa = times_x(T, a);
                        Terms out;
                        for (uint32_t k = 0; k < 2; ++k) {
                          out.push_back({k | 2u, a[k]});
                          out.push_back({k, T.ring.neg(xa[k])});
                        }
                        return out;
                      },
                      T.ring.one(), out);
          } else {
            local_map(*A, g, *B, v | (Vertex{1} << n), anchors, {p}, {p, l},
                      [&T](uint32_t s) { return Terms{{s & 1, T.ring.one()}}; }, T.ring.one(), out);
          }
          return out;
        };
        break;
      }
      case MoveType::R1Minus: {
        int k = r.removed.at(0), l = r.loop_arc, p = r.strand_arc, n = A->n;
        bool positive = A->diagram.crossings()[k].sign > 0;
        st.image = [A, B, T, anchors, k, l, p, n, positive](Gen g) {
          ChainElement out;
          Vertex v = A->decode(g).first;
          int bit = static_cast<int>((v >> k) & 1);
          if (bit != (positive ? 0 : 1)) return out;
          int sgn = reorder_sign(v, {k});
          Vertex vb = compress(v, {k}, n);
          if (positive) {
            local_map(*A, g, *B, vb, anchors, {p, l}, {p},
                      [&T](uint32_t s) {
                        return (s & 2) ? Terms{{s & 1, T.ring.one()}} : Terms{};
                      },
                      T.ring.from_int(sgn), out);
          } else {
            // (a, b) -> eps(x b) a - eps(b) x a
            local_map(*A, g, *B, vb, anchors, {p, l}, {p},
                      [&T](uint32_t s) {
                        AlgElem a = alg_basis(T, s & 1), b = alg_basis(T, (s >> 1) & 1);
                        Scalar c1 = counit(T, times_x(T, b)), c2 = counit(T, b);
                        AlgElem xa = times_x(T, a);
                        Terms out;
                        for (uint32_t q = 0; q < 2; ++q)
                          out.push_back({q, T.ring.sub(T.ring.mul(c1, a[q]), T.ring.mul(c2, xa[q]))});
                        return out;
                      },
                      T.ring.from_int(sgn), out);
          }
          return out;
        };
        break;
      }
      case MoveType::R2Plus: {
        int n = A->n, pm = r.bigon.first, qm = r.bigon.second;
        int S = 0;
        for (int bits : {1, 2}) {
          Vertex w = Vertex(bits) << n;
          int c = B->circle_of(w, pm);
          if (c == B->circle_of(w, qm) && circle_size(*B, w, c) == 2) S = bits;
        }
        if (!S) throw std::logic_error("internal: r2 bigon circle not found");
        int I = 3 - S;
        int zero_bit_of_S = S == 1 ? n + 1 : n;
        auto far = identity_pairs(B->diagram, {pm, qm});
        st.image = [A, B, T, anchors, far, n, pm, S, I, zero_bit_of_S, id_op](Gen g) {
          ChainElement out;
          Vertex v = A->decode(g).first;
          local_map(*A, g, *B, v | (Vertex(I) << n), anchors, {}, {}, id_op, T.ring.one(), out);
          ChainElement E = filter_vertex(*B, apply_d(B->cc, out), v | (Vertex{3} << n));
          Vertex vs = v | (Vertex(S) << n);
          int s = edge_sign(vs, zero_bit_of_S);
          for (auto& [u, c] : E)
            local_map(*B, u, *B, vs, far, {}, {pm}, [&T](uint32_t) { return elem_terms(unit(T)); },
                      T.ring.mul(c, T.ring.from_int(-s)), out);
          return out;
        };
        break;
      }
      case MoveType::R2Minus: {
        int n = A->n;
        int k1 = std::min(r.removed.at(0), r.removed.at(1)), k2 = std::max(r.removed[0], r.removed[1]);
        int a = r.bigon.first, b = r.bigon.second;
        int S = 0;
        for (int bits : {1, 2}) {
          Vertex w = ((bits & 1) ? Vertex{1} << k1 : 0) | ((bits & 2) ? Vertex{1} << k2 : 0);
          int c = A->circle_of(w, a);
          if (c == A->circle_of(w, b) && circle_size(*A, w, c) == 2) S = bits;
        }
        if (!S) throw std::logic_error("internal: r2 bigon circle not found");
        int I = 3 - S;
        int kI = I == 1 ? k1 : k2;
        auto far = identity_pairs(A->diagram, {a, b});
        st.image = [A, B, T, anchors, far, n, k1, k2, a, S, I, kI, id_op](Gen g) {
          ChainElement out;
          Vertex v = A->decode(g).first;
          int local = static_cast<int>(((v >> k1) & 1) | (((v >> k2) & 1) << 1));
          int sgn = reorder_sign(v, {k1, k2});
          Vertex vb = compress(v, {k1, k2}, n);
          if (local == I) {
            local_map(*A, g, *B, vb, anchors, {}, {}, id_op, T.ring.from_int(sgn), out);
          } else if (local == S) {
            Vertex v00 = v & ~((Vertex{1} << k1) | (Vertex{1} << k2));
            ChainElement u;
            local_map(*A, g, *A, v00, far, {a}, {},
                      [&T](uint32_t l) { return Terms{{0u, counit(T, alg_basis(T, l & 1))}}; }, T.ring.one(), u);
            ChainElement e = filter_vertex(*A, apply_d(A->cc, u), v00 | (Vertex{1} << kI));
            int coeff = -sgn * edge_sign(v00, kI);
            for (auto& [w, c] : e) local_map(*A, w, *B, vb, anchors, {}, {}, id_op, T.ring.mul(c, T.ring.from_int(coeff)), out);
          }
          return out;
        };
        break;
      }
      case MoveType::R3:
        throw InputError(with_line(mv.line, "r3 maps are not available"));
    }
    steps_.push_back(std::move(st));
    if (permuted) {
      const GradedComplex* P = B;
      complexes_.push_back(std::make_unique<GradedComplex>(build_complex(m.frames[i + 1], t, budget)));
      const GradedComplex* Q = complexes_.back().get();
      std::vector<int> perm = m.perms[i];
      auto ids = identity_pairs(P->diagram, {});
      Step ps;
      ps.name = "reorder crossings";
      ps.image = [P, Q, perm, ids, id_op](Gen g) {
        ChainElement out;
        Vertex v = P->decode(g).first, w = 0;
        int inv = 0;
        for (size_t x = 0; x < perm.size(); ++x) {
          if (!((v >> x) & 1)) continue;
          w |= Vertex{1} << perm[x];
          for (size_t y = x + 1; y < perm.size(); ++y)
            if (((v >> y) & 1) && perm[y] < perm[x]) ++inv;
        }
        local_map(*P, g, *Q, w, ids, {}, {}, id_op, Q->theory.ring.from_int((inv & 1) ? -1 : 1), out);
        return out;
      };
      steps_.push_back(std::move(ps));
    }
  }
}

int MovieMap::q_degree() const {
  int q = 0;
  for (auto& s : steps_) q += s.qdeg;
  return q;
}

ChainElement MovieMap::apply_step(size_t i, const ChainElement& e) const {
  const Ring& R = complexes_[i + 1]->theory.ring;
  ChainElement out;
  for (auto& [g, c] : e)
    for (auto& [h, d] : steps_[i].image(g)) add_term(out, h, R.mul(c, d), R);
  return out;
}

ChainElement MovieMap::apply_range(size_t from, size_t to, const ChainElement& e) const {
  ChainElement cur = e;
  for (size_t i = from; i < to; ++i) cur = apply_step(i, cur);
  return cur;
}

int MovieMap::verify(std::string* why) const {
  for (size_t i = 0; i < steps_.size(); ++i) {
    const GradedComplex& A = *complexes_[i];
    const GradedComplex& B = *complexes_[i + 1];
    const Ring& R = B.theory.ring;
    for (Gen g = 0; g < A.cc.size(); ++g) {
      ChainElement img = steps_[i].image(g);
      for (auto& [h, c] : img) {
        int hp = R.h_power(c);
        int expect_q = A.cc.qdeg[g] + steps_[i].qdeg;
        if (B.cc.hdeg[h] != A.cc.hdeg[g] || hp < 0 || B.cc.qdeg[h] - 2 * hp != expect_q) {
          if (why)
            *why = "step " + std::to_string(i) + " (" + steps_[i].name + ") is not homogeneous at " + A.vertex_word(g) +
                   ":" + A.label_word(g);
          return static_cast<int>(i);
        }
      }
      ChainElement lhs = apply_d(B.cc, img);
      ChainElement dg = apply_d(A.cc, ChainElement{{g, R.one()}});
      ChainElement rhs = apply_step(i, dg);
      if (lhs != rhs) {
        if (why)
          *why = "step " + std::to_string(i) + " (" + steps_[i].name + ") fails d F = F d at " + A.vertex_word(g) + ":" +
                 A.label_word(g);
        return static_cast<int>(i);
      }
    }
  }
  return -1;
}

// ---- homology level -------------------------------------------------------------

std::vector<HomologyMapBlock> induced_on_homology(const MovieMap& f) {
  const ChainComplex& src = f.source().cc;
  const ChainComplex& tgt = f.target().cc;
  if (src.theory.bn()) throw InputError("homology matrices are reported for Khovanov theories only");
  HomologyModule hs = homology(src);
  std::vector<HomologyMapBlock> out;
  const int chi = f.q_degree();
  for (auto& [key, grp] : hs.groups) {
    BlockHomology bs(src, key.first, key.second);
    BlockHomology bt(tgt, key.first, key.second + chi);
    HomologyMapBlock b;
    b.h = key.first;
    b.q = key.second;
    b.q_target = key.second + chi;
    b.source_orders = bs.orders();
    b.target_orders = bt.orders();
    b.matrix = zmat(bt.summands(), bs.summands());
    for (size_t j = 0; j < bs.summands(); ++j) {
      auto c = bt.coords(f.apply(bs.reps()[j]));
      for (size_t i = 0; i < c.size(); ++i) b.matrix[i][j] = c[i];
    }
    b.normalized = b.matrix;
    out.push_back(std::move(b));
  }
  // one global sign: the first nonzero entry becomes positive
  int sign = 0;
  for (auto& b : out)
    for (auto& row : b.matrix)
      for (auto& v : row)
        if (!sign && v != 0) sign = v > 0 ? 1 : -1;
  if (sign < 0)
    for (auto& b : out)
      for (size_t i = 0; i < b.normalized.size(); ++i)
        for (auto& v : b.normalized[i]) {
          v = -v;
          const mpz_class& ord = b.target_orders[i];
          if (ord != 0) {
            v %= ord;
            if (v < 0) v += ord;
          }
        }
  return out;
}

Scalar closed_surface_value(const Movie& m, const FrobeniusTheory& t, R3Mode mode) {
  if (m.source().size() || !m.source().loops().empty() || m.target().size() || !m.target().loops().empty())
    throw InputError("closed surface value needs a movie from the empty diagram to the empty diagram");
  MovieMap f(m, t, mode);
  ChainElement img = f.apply(empty_unit(f.source()));
  auto it = img.find(0);
  return it == img.end() ? t.ring.zero() : it->second;
}

namespace {

// (h, q) of a homogeneous element (q with H counted as -2).
std::pair<int, int> bidegree(const ChainComplex& cc, const ChainElement& e) {
  auto& [g, s] = *e.begin();
  int hp = cc.theory.bn() ? cc.theory.ring.h_power(s) : 0;
  return {cc.hdeg[g], cc.qdeg[g] - 2 * hp};
}

}  // namespace

DifferenceClass difference_class(const Movie& m1, const Movie& m2, const FrobeniusTheory& t,
                                 const ChainElement* source_class, R3Mode mode) {
  if (m1.source() != m2.source() || m1.target() != m2.target())
    throw InputError("difference class needs movies with the same first and last frames");
  if (m1.euler_characteristic() != m2.euler_characteristic())
    throw InputError("difference class needs surfaces with equal Euler characteristic");
  MovieMap f1(m1, t, mode), f2(m2, t, mode);
  ChainElement z = source_class ? *source_class : empty_unit(f1.source());
  const Ring& R = t.ring;
  DifferenceClass out;
  out.delta = add(f1.apply(z), scale(f2.apply(z), R.neg(R.one()), R), R);
  const ChainComplex& cc = f1.target().cc;
  if (out.delta.empty()) {
    out.zero = true;
    out.torsion_order = 0;
    out.h_times_zero = true;
    return out;
  }
  if (t.bn()) {
    BNHomology bn(cc);
    out.torsion_order = bn.torsion_order(out.delta);
    out.zero = out.torsion_order == 0;
    out.h_times_zero = out.torsion_order == 0 || out.torsion_order == 1;
  } else {
    auto [h, q] = bidegree(cc, out.delta);
    out.zero = BlockHomology(cc, h, q).is_zero_class(out.delta);
  }
  return out;
}

bool bn_equal_on_homology(const MovieMap& a, const MovieMap& b, Scalar c) {
  const ChainComplex& S = a.source().cc;
  const ChainComplex& T = a.target().cc;
  if (!S.theory.bn()) throw InputError("bn_equal_on_homology needs Bar-Natan maps");
  if (a.source().diagram != b.source().diagram || a.target().diagram != b.target().diagram)
    throw InputError("maps have different endpoints");
  const Ring& R = S.theory.ring;
  BNHomology target_h(T);
  std::map<int, std::vector<Gen>> by_h;
  for (Gen g = 0; g < S.size(); ++g) by_h[S.hdeg[g]].push_back(g);
  for (auto& [h, gens] : by_h) {
    int qmax = INT32_MIN, qmin = INT32_MAX;
    for (Gen g : gens) qmax = std::max(qmax, S.qdeg[g]), qmin = std::min(qmin, S.qdeg[g]);
    auto up = by_h.find(h + 1);
    for (int q = qmax; q >= qmin; q -= 2) {
      // slice basis: H^k g with q_g - 2k = q
      std::vector<std::pair<Gen, int>> basis;
      for (Gen g : gens)
        if (S.qdeg[g] >= q && (S.qdeg[g] - q) % 2 == 0) basis.push_back({g, (S.qdeg[g] - q) / 2});
      std::map<std::pair<Gen, int>, size_t> rowpos;
      if (up != by_h.end())
        for (Gen g : up->second)
          if (S.qdeg[g] >= q && (S.qdeg[g] - q) % 2 == 0) rowpos[{g, (S.qdeg[g] - q) / 2}] = rowpos.size();
      // columns of d over F2 as sorted row sets; kernel by elimination
      size_t nb = basis.size();
      std::vector<std::vector<size_t>> cols(nb), comb(nb);
      for (size_t j = 0; j < nb; ++j) {
        auto [g, k] = basis[j];
        std::vector<size_t> col;
        for (uint64_t e = S.dptr[g]; e < S.dptr[g + 1]; ++e) {
          if (!(S.dval[e] & 1)) continue;
          Gen t = S.dtgt[e];
          int hp = (S.qdeg[t] - S.qdeg[g]) / 2 + k;
          col.push_back(rowpos.at({t, hp}));
        }
        std::sort(col.begin(), col.end());
        std::vector<size_t> c2;
        for (size_t i = 0; i < col.size();) {
          size_t k2 = i;
          while (k2 < col.size() && col[k2] == col[i]) ++k2;
          if ((k2 - i) & 1) c2.push_back(col[i]);
          i = k2;
        }
        cols[j] = c2;
        comb[j] = {j};
      }
      std::map<size_t, size_t> pivot_of;
      auto sym = [](std::vector<size_t>& x, const std::vector<size_t>& y) {
        std::vector<size_t> r;
        std::set_symmetric_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(r));
        x.swap(r);
      };
      for (size_t j = 0; j < nb; ++j) {
        while (!cols[j].empty()) {
          auto it = pivot_of.find(cols[j].back());
          if (it == pivot_of.end()) break;
          sym(cols[j], cols[it->second]);
          sym(comb[j], comb[it->second]);
        }
        if (!cols[j].empty()) {
          pivot_of[cols[j].back()] = j;
          continue;
        }
        ChainElement z;
        for (size_t i : comb[j]) add_term(z, basis[i].first, R.monomial(1, basis[i].second), R);
        ChainElement diff = add(a.apply(z), scale(b.apply(z), R.neg(c), R), R);
        if (!diff.empty() && target_h.torsion_order(diff) != 0) return false;
      }
    }
  }
  return true;
}

}  // namespace kcob
