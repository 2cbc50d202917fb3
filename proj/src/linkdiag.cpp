#include "kcob/linkdiag.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace kcob {

namespace {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

std::string fmt_crossing(int k) { return "crossing " + std::to_string(k + 1); }

}  // namespace

Crossing make_crossing(int under_in, int under_out, int over_in, int over_out, int sign) {
  Crossing c;
  c.sign = sign;
  if (sign > 0)
    c.arc = {under_in, over_out, under_out, over_in};
  else
    c.arc = {under_in, over_in, under_out, over_out};
  return c;
}

LinkDiagram::LinkDiagram(std::vector<Crossing> crossings, std::vector<int> loops)
    : crossings_(std::move(crossings)), loops_(std::move(loops)) {
  std::sort(loops_.begin(), loops_.end());
  build();
}

void LinkDiagram::build() {
  if (size() > kMaxCrossings)
    throw InputError("diagram has " + std::to_string(size()) + " crossings; at most " +
                     std::to_string(kMaxCrossings) + " supported");
  std::map<int, int> count;
  for (int k = 0; k < size(); ++k) {
    const Crossing& c = crossings_[k];
    if (c.sign != 1 && c.sign != -1) throw InputError(fmt_crossing(k) + ": sign must be +1 or -1");
    for (int a : c.arc) {
      if (a <= 0) throw InputError(fmt_crossing(k) + ": arc labels must be positive");
      ++count[a];
    }
  }
  for (auto [a, n] : count)
    if (n != 2)
      throw InputError("arc " + std::to_string(a) + " appears " + std::to_string(n) +
                       " times (expected exactly 2)");
  for (size_t i = 0; i < loops_.size(); ++i) {
    int a = loops_[i];
    if (a <= 0) throw InputError("loop labels must be positive");
    if (i > 0 && loops_[i - 1] == a) throw InputError("duplicate loop " + std::to_string(a));
    if (count.count(a)) throw InputError("loop " + std::to_string(a) + " also used by a crossing");
  }

  arcs_.clear();
  for (auto& kv : count) arcs_.push_back(kv.first);
  arcs_.insert(arcs_.end(), loops_.begin(), loops_.end());
  std::sort(arcs_.begin(), arcs_.end());
  index_.clear();
  for (int i = 0; i < arc_count(); ++i) index_[arcs_[i]] = i;

  head_.assign(arc_count(), Slot{});
  tail_.assign(arc_count(), Slot{});
  slot_index_.resize(size());
  n_plus_ = n_minus_ = 0;
  for (int k = 0; k < size(); ++k) {
    const Crossing& c = crossings_[k];
    (c.sign > 0 ? n_plus_ : n_minus_)++;
    for (int p = 0; p < 4; ++p) {
      int ai = index_.at(c.arc[p]);
      slot_index_[k][p] = ai;
      Slot& s = c.slot_incoming(p) ? head_[ai] : tail_[ai];
      if (s.crossing >= 0)
        throw InputError("arc " + std::to_string(c.arc[p]) + " is " +
                         (c.slot_incoming(p) ? "incoming" : "outgoing") +
                         " twice; orientation is inconsistent");
      s = Slot{k, p};
    }
  }

  // components by strand following
  comp_of_.assign(arc_count(), -1);
  components_.clear();
  for (int i = 0; i < arc_count(); ++i) {
    if (comp_of_[i] >= 0) continue;
    int cid = static_cast<int>(components_.size());
    components_.emplace_back();
    int cur = i;
    while (comp_of_[cur] < 0) {
      comp_of_[cur] = cid;
      components_.back().push_back(arcs_[cur]);
      if (head_[cur].crossing < 0) break;  // free loop
      Slot h = head_[cur];
      cur = slot_index_[h.crossing][(h.pos + 2) % 4];
    }
  }

  // connected pieces of the diagram graph
  UnionFind uf(size() + arc_count());
  for (int k = 0; k < size(); ++k)
    for (int p = 0; p < 4; ++p) uf.unite(k, size() + slot_index_[k][p]);
  piece_of_.assign(arc_count(), -1);
  std::map<int, int> piece_id;
  for (int i = 0; i < arc_count(); ++i) {
    int r = uf.find(size() + i);
    auto it = piece_id.find(r);
    if (it == piece_id.end()) it = piece_id.emplace(r, static_cast<int>(piece_id.size())).first;
    piece_of_[i] = it->second;
  }

  // planarity: every piece must satisfy F = V + 2
  if (size() > 0) {
    std::vector<int> verts(piece_id.size(), 0), face_count(piece_id.size(), 0);
    for (int k = 0; k < size(); ++k) verts[piece_of_[slot_index_[k][0]]]++;
    for (const Face& f : faces()) {
      int pc = piece_of_[index_.at(f.front().arc)];
      face_count[pc]++;
    }
    for (size_t pc = 0; pc < verts.size(); ++pc) {
      if (verts[pc] == 0) continue;
      if (face_count[pc] != verts[pc] + 2)
        throw InputError("PD data is not planar (a connected piece with " +
                         std::to_string(verts[pc]) + " crossings has " +
                         std::to_string(face_count[pc]) + " faces)");
    }
  }
}

int LinkDiagram::arc_index(int label) const {
  auto it = index_.find(label);
  return it == index_.end() ? -1 : it->second;
}

bool LinkDiagram::is_loop(int label) const {
  return std::binary_search(loops_.begin(), loops_.end(), label);
}

Slot LinkDiagram::head(int label) const {
  int i = arc_index(label);
  if (i < 0) throw InputError("unknown arc " + std::to_string(label));
  return head_[i];
}

Slot LinkDiagram::tail(int label) const {
  int i = arc_index(label);
  if (i < 0) throw InputError("unknown arc " + std::to_string(label));
  return tail_[i];
}

int LinkDiagram::component_of(int label) const {
  int i = arc_index(label);
  if (i < 0) throw InputError("unknown arc " + std::to_string(label));
  return comp_of_[i];
}

int LinkDiagram::diagram_piece_of_arc(int label) const {
  int i = arc_index(label);
  if (i < 0) throw InputError("unknown arc " + std::to_string(label));
  return piece_of_[i];
}

std::vector<Face> LinkDiagram::faces() const {
  // Darts (k,p) leave crossing k through slot p.  Arriving at slot p' of the
  // next crossing, the rightmost turn is slot p'+1, so each orbit traces a
  // face lying on the right of the direction of travel.
  std::vector<Face> out;
  int nd = 4 * size();
  std::vector<char> seen(nd, 0);
  auto other_end = [&](int k, int p) {
    int ai = slot_index_[k][p];
    Slot h = head_[ai], t = tail_[ai];
    if (h.crossing == k && h.pos == p) return t;
    return h;
  };
  for (int start = 0; start < nd; ++start) {
    if (seen[start]) continue;
    Face f;
    int cur = start;
    while (!seen[cur]) {
      seen[cur] = 1;
      int k = cur / 4, p = cur % 4;
      int ai = slot_index_[k][p];
      bool forward = tail_[ai].crossing == k && tail_[ai].pos == p;
      f.push_back(FaceSide{arcs_[ai], forward});
      Slot o = other_end(k, p);
      cur = 4 * o.crossing + (o.pos + 1) % 4;
    }
    out.push_back(std::move(f));
  }
  for (int l : loops_) {
    out.push_back(Face{FaceSide{l, true}});
    out.push_back(Face{FaceSide{l, false}});
  }
  return out;
}

// ---- text formats -------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

int parse_int(const std::string& s, int line) {
  try {
    size_t pos = 0;
    long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return static_cast<int>(v);
  } catch (...) {
    throw InputError("line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  }
}

int parse_sign(const std::string& s, int line) {
  if (s == "+" || s == "+1" || s == "1") return 1;
  if (s == "-" || s == "-1") return -1;
  throw InputError("line " + std::to_string(line) + ": bad crossing sign '" + s + "'");
}

std::vector<int> parse_list(const std::vector<std::string>& toks, size_t from, int line) {
  std::vector<int> out;
  for (size_t i = from; i < toks.size(); ++i) {
    std::string t = toks[i];
    std::replace(t.begin(), t.end(), ',', ' ');
    for (auto& piece : split_ws(t)) out.push_back(parse_int(piece, line));
  }
  return out;
}

}  // namespace

LinkDiagram parse_pd(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  int declared = -1;
  std::vector<Crossing> xs;
  std::vector<std::vector<int>> comps;
  std::vector<int> loops;
  bool have_braid = false;
  LinkDiagram braid_result;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    if (kw == "pd") {
      if (declared >= 0 || have_braid) throw InputError("line " + std::to_string(lineno) + ": duplicate header");
      if (toks.size() != 2) throw InputError("line " + std::to_string(lineno) + ": expected 'pd <n>'");
      declared = parse_int(toks[1], lineno);
      if (declared < 0) throw InputError("line " + std::to_string(lineno) + ": negative crossing count");
    } else if (kw == "x") {
      if (declared < 0) throw InputError("line " + std::to_string(lineno) + ": crossing before 'pd' header");
      if (toks.size() != 6)
        throw InputError("line " + std::to_string(lineno) + ": crossing needs 4 arcs and a sign, got " +
                         std::to_string(toks.size() - 1) + " fields");
      Crossing c;
      for (int p = 0; p < 4; ++p) c.arc[p] = parse_int(toks[1 + p], lineno);
      c.sign = parse_sign(toks[5], lineno);
      xs.push_back(c);
    } else if (kw == "component") {
      if (declared < 0) throw InputError("line " + std::to_string(lineno) + ": component before 'pd' header");
      comps.push_back(parse_list(toks, 1, lineno));
      if (comps.back().empty()) throw InputError("line " + std::to_string(lineno) + ": empty component");
    } else if (kw == "loop") {
      if (declared < 0) throw InputError("line " + std::to_string(lineno) + ": loop before 'pd' header");
      for (int a : parse_list(toks, 1, lineno)) loops.push_back(a);
    } else if (kw == "braid") {
      if (declared >= 0 || have_braid) throw InputError("line " + std::to_string(lineno) + ": duplicate header");
      if (toks.size() < 2) throw InputError("line " + std::to_string(lineno) + ": expected 'braid <strands> ...'");
      int strands = parse_int(toks[1], lineno);
      std::vector<int> word = parse_list(toks, 2, lineno);
      braid_result = from_braid(word, strands);
      have_braid = true;
    } else {
      throw InputError("line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
    }
  }
  if (have_braid) return braid_result;
  if (declared < 0) throw InputError("missing 'pd <n>' header");
  if (static_cast<int>(xs.size()) != declared)
    throw InputError("header declares " + std::to_string(declared) + " crossings but " +
                     std::to_string(xs.size()) + " given");
  std::set<int> used;
  for (auto& c : xs)
    for (int a : c.arc) used.insert(a);
  for (auto& comp : comps)
    if (comp.size() == 1 && !used.count(comp[0])) loops.push_back(comp[0]);
  LinkDiagram d(xs, loops);
  // declared components must match the strand-following orbits
  for (auto& comp : comps) {
    int cid = d.component_of(comp[0]);
    std::vector<int> a = comp, b = d.components()[cid];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) throw InputError("declared component starting at arc " + std::to_string(comp[0]) +
                                 " does not match the strand structure");
  }
  return d;
}

std::string serialize_pd(const LinkDiagram& d) {
  std::ostringstream os;
  os << "pd " << d.size() << "\n";
  for (const Crossing& c : d.crossings())
    os << "x " << c.arc[0] << " " << c.arc[1] << " " << c.arc[2] << " " << c.arc[3] << " "
       << (c.sign > 0 ? "+1" : "-1") << "\n";
  for (const auto& comp : d.components()) {
    os << "component ";
    for (size_t i = 0; i < comp.size(); ++i) os << (i ? "," : "") << comp[i];
    os << "\n";
  }
  return os.str();
}

LinkDiagram from_braid(const std::vector<int>& word, int strands) {
  if (strands < 1) throw InputError("braid needs at least one strand");
  std::vector<int> pos(strands);
  std::iota(pos.begin(), pos.end(), 1);
  int next = strands + 1;
  std::vector<Crossing> xs;
  for (int letter : word) {
    int i = std::abs(letter);
    if (letter == 0 || i >= strands)
      throw InputError("braid letter " + std::to_string(letter) + " out of range for " +
                       std::to_string(strands) + " strands");
    int x = pos[i - 1], y = pos[i];
    int xo = next++, yo = next++;
    // strand from position i moves to i+1 (x -> yo), the other y -> xo
    if (letter > 0)
      xs.push_back(make_crossing(y, xo, x, yo, +1));
    else
      xs.push_back(make_crossing(x, yo, y, xo, -1));
    pos[i - 1] = xo;
    pos[i] = yo;
  }
  std::unordered_map<int, int> closing;
  std::vector<int> loops;
  for (int i = 0; i < strands; ++i) {
    if (pos[i] == i + 1)
      loops.push_back(i + 1);
    else
      closing[pos[i]] = i + 1;
  }
  for (auto& c : xs)
    for (int& a : c.arc)
      if (auto it = closing.find(a); it != closing.end()) a = it->second;
  // compact labels to 1..E
  std::set<int> labels(loops.begin(), loops.end());
  for (auto& c : xs)
    for (int a : c.arc) labels.insert(a);
  std::unordered_map<int, int> compact;
  int k = 1;
  for (int a : labels) compact[a] = k++;
  for (auto& c : xs)
    for (int& a : c.arc) a = compact[a];
  for (int& a : loops) a = compact[a];
  return LinkDiagram(xs, loops);
}

// ---- basic transformations ---------------------------------------------

LinkDiagram mirror(const LinkDiagram& d) {
  std::vector<Crossing> xs;
  for (const Crossing& c : d.crossings()) {
    const auto& a = c.arc;
    Crossing m;
    if (c.sign > 0) {
      m.arc = {a[3], a[0], a[1], a[2]};
      m.sign = -1;
    } else {
      m.arc = {a[1], a[2], a[3], a[0]};
      m.sign = 1;
    }
    xs.push_back(m);
  }
  return LinkDiagram(xs, d.loops());
}

namespace {

LinkDiagram reverse_components(const LinkDiagram& d, const std::vector<char>& flip_comp) {
  std::vector<Crossing> xs;
  for (const Crossing& c : d.crossings()) {
    bool fu = flip_comp[d.component_of(c.arc[0])];
    bool fo = flip_comp[d.component_of(c.arc[1])];
    int ui = c.arc[0], uo = c.arc[2], oi = c.over_in(), oo = c.over_out();
    if (fu) std::swap(ui, uo);
    if (fo) std::swap(oi, oo);
    int sign = (fu != fo) ? -c.sign : c.sign;
    xs.push_back(make_crossing(ui, uo, oi, oo, sign));
  }
  return LinkDiagram(xs, d.loops());
}

}  // namespace

LinkDiagram reverse_component(const LinkDiagram& d, int arc) {
  std::vector<char> flip(d.components().size(), 0);
  flip[d.component_of(arc)] = 1;
  return reverse_components(d, flip);
}

LinkDiagram reverse_all(const LinkDiagram& d) {
  return reverse_components(d, std::vector<char>(d.components().size(), 1));
}

LinkDiagram relabel(const LinkDiagram& d, const std::unordered_map<int, int>& m) {
  auto f = [&](int a) {
    auto it = m.find(a);
    return it == m.end() ? a : it->second;
  };
  std::vector<Crossing> xs = d.crossings();
  for (auto& c : xs)
    for (int& a : c.arc) a = f(a);
  std::vector<int> loops;
  for (int l : d.loops()) loops.push_back(f(l));
  return LinkDiagram(xs, loops);
}

LinkDiagram permute_crossings(const LinkDiagram& d, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != d.size()) throw InputError("crossing permutation has wrong length");
  std::vector<Crossing> xs;
  std::vector<char> used(d.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= d.size() || used[p]) throw InputError("invalid crossing permutation");
    used[p] = 1;
    xs.push_back(d.crossings()[p]);
  }
  return LinkDiagram(xs, d.loops());
}

// ---- cube ----------------------------------------------------------------

std::string vertex_to_string(Vertex v, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if (v >> i & 1) s[i] = '1';
  return s;
}

Vertex vertex_from_string(const std::string& s) {
  if (static_cast<int>(s.size()) > kMaxCrossings) throw InputError("vertex word too long");
  Vertex v = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      v |= Vertex(1) << i;
    else if (s[i] != '0')
      throw InputError("vertex word must consist of 0 and 1");
  }
  return v;
}

int compute_circles(const LinkDiagram& d, Vertex v, std::vector<int>& circle_of) {
  int na = d.arc_count();
  std::vector<int> parent(na);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  const auto& si = d.slot_index();
  for (int k = 0; k < d.size(); ++k) {
    const auto& s = si[k];
    if (v >> k & 1) {
      unite(s[0], s[3]);
      unite(s[1], s[2]);
    } else {
      unite(s[0], s[1]);
      unite(s[2], s[3]);
    }
  }
  // roots are minimal indices, hence minimal labels: ids in index order
  circle_of.assign(na, -1);
  int count = 0;
  for (int i = 0; i < na; ++i) {
    int r = find(i);
    if (r == i) circle_of[i] = count++;
    else circle_of[i] = circle_of[r];
  }
  return count;
}

Smoothing resolve(const LinkDiagram& d, Vertex v) {
  if (d.size() < 64 && (v >> d.size()) != 0) throw InputError("vertex has bits beyond the crossing count");
  Smoothing s;
  s.vertex = v;
  s.n = d.size();
  int nc = compute_circles(d, v, s.circle_of);
  s.circles.assign(nc, {});
  std::vector<char> seen(d.arc_count(), 0);
  const auto& si = d.slot_index();
  for (int start = 0; start < d.arc_count(); ++start) {
    if (seen[start]) continue;
    auto& circ = s.circles[s.circle_of[start]];
    int cur = start;
    // walk: leave through the head end, cross the resolution, continue
    Slot from{-1, -1};
    while (!seen[cur]) {
      seen[cur] = 1;
      circ.push_back(d.arcs()[cur]);
      int label = d.arcs()[cur];
      if (d.is_loop(label)) break;
      Slot h = d.head(label), t = d.tail(label);
      Slot end = (from.crossing == h.crossing && from.pos == h.pos) ? t : h;
      bool one = v >> end.crossing & 1;
      static const int pair0[4] = {1, 0, 3, 2}, pair1[4] = {3, 2, 1, 0};
      int q = one ? pair1[end.pos] : pair0[end.pos];
      from = Slot{end.crossing, q};
      cur = si[end.crossing][q];
    }
  }
  return s;
}

Smoothing resolve(const LinkDiagram& d, const std::string& word) {
  if (static_cast<int>(word.size()) != d.size())
    throw InputError("vertex word has length " + std::to_string(word.size()) + ", expected " +
                     std::to_string(d.size()));
  return resolve(d, vertex_from_string(word));
}

EdgeData edge_data(const LinkDiagram& d, Vertex v, int i) {
  if (i < 0 || i >= d.size()) throw InputError("crossing index out of range");
  if (v >> i & 1) throw InputError("edge_data needs a 0 at the flipped crossing");
  EdgeData e;
  e.source = v;
  e.target = v | (Vertex(1) << i);
  e.crossing = i;
  std::vector<int> cs, ct;
  int ns = compute_circles(d, e.source, cs);
  int nt = compute_circles(d, e.target, ct);
  const auto& s = d.slot_index()[i];
  e.circle_correspondence.assign(ns, -1);
  for (int a = 0; a < d.arc_count(); ++a) e.circle_correspondence[cs[a]] = ct[a];
  if (cs[s[0]] != cs[s[2]]) {
    e.kind = EdgeKind::Merge;
    e.merged = {std::min(cs[s[0]], cs[s[2]]), std::max(cs[s[0]], cs[s[2]])};
    if (nt != ns - 1) throw std::logic_error("merge edge did not reduce circle count");
  } else {
    e.kind = EdgeKind::Split;
    e.split_targets = {std::min(ct[s[0]], ct[s[1]]), std::max(ct[s[0]], ct[s[1]])};
    e.circle_correspondence[cs[s[0]]] = e.split_targets.first;
    if (nt != ns + 1) throw std::logic_error("split edge did not raise circle count");
  }
  return e;
}

Vertex oriented_resolution(const LinkDiagram& d) {
  Vertex v = 0;
  for (int k = 0; k < d.size(); ++k)
    if (d.crossings()[k].sign < 0) v |= Vertex(1) << k;
  return v;
}

// ---- Kauffman bracket ----------------------------------------------------

namespace {

// Strands are edges between crossing slots; smoothing a crossing splices the
// strand ends at paired slots.  Independent of the union-find cube code.
struct SkeinState {
  std::vector<std::array<int, 4>> slot_strand;  // per crossing
  std::vector<std::array<int, 2>> ends;          // per strand: encoded 4*k+p
  std::vector<char> alive_x;
  int loops = 0;
};

void splice(SkeinState& st, int k, int p, int q) {
  int s1 = st.slot_strand[k][p], s2 = st.slot_strand[k][q];
  int e1 = 4 * k + p, e2 = 4 * k + q;
  if (s1 == s2) {
    ++st.loops;
    return;
  }
  int o1 = st.ends[s1][0] == e1 ? st.ends[s1][1] : st.ends[s1][0];
  int o2 = st.ends[s2][0] == e2 ? st.ends[s2][1] : st.ends[s2][0];
  st.ends[s1] = {o1, o2};
  st.slot_strand[o2 / 4][o2 % 4] = s1;
}

Laurent bracket_rec(SkeinState st, int k) {
  if (k < 0) {
    Laurent circ = Laurent::monomial(1) + Laurent::monomial(-1);
    Laurent r = Laurent::monomial(0);
    for (int i = 0; i < st.loops; ++i) r = r * circ;
    return r;
  }
  SkeinState s0 = st, s1 = st;
  splice(s0, k, 0, 1);
  splice(s0, k, 2, 3);
  splice(s1, k, 0, 3);
  splice(s1, k, 1, 2);
  return bracket_rec(std::move(s0), k - 1) - Laurent::monomial(1) * bracket_rec(std::move(s1), k - 1);
}

}  // namespace

Laurent kauffman_jones(const LinkDiagram& d) {
  int n = d.size();
  SkeinState st;
  st.slot_strand.resize(n);
  std::map<int, int> strand_id;
  std::vector<std::vector<int>> ends_tmp;
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < 4; ++p) {
      int a = d.crossings()[k].arc[p];
      auto it = strand_id.find(a);
      if (it == strand_id.end()) {
        it = strand_id.emplace(a, static_cast<int>(ends_tmp.size())).first;
        ends_tmp.emplace_back();
      }
      st.slot_strand[k][p] = it->second;
      ends_tmp[it->second].push_back(4 * k + p);
    }
  for (auto& e : ends_tmp) st.ends.push_back({e[0], e[1]});
  st.loops = static_cast<int>(d.loops().size());
  Laurent br = bracket_rec(std::move(st), n - 1);
  int sgn = (d.n_minus() % 2) ? -1 : 1;
  return br * Laurent::monomial(d.n_plus() - 2 * d.n_minus(), sgn);
}

}  // namespace kcob

namespace kcob {

LinkDiagram from_morse(const std::vector<MorseEvent>& events) {
  // Nodes: crossing corners 4k+c (c: 0=NW 1=NE 2=SW 3=SE) and auxiliary
  // nodes; `link` records the connection of every node.
  std::vector<std::vector<int>> link;
  std::vector<int> row;
  int ncross = 0;
  std::vector<int> types;
  std::vector<int> corner_node;  // 4k+c -> node id
  auto new_node = [&]() {
    link.emplace_back();
    return static_cast<int>(link.size()) - 1;
  };
  auto connect = [&](int a, int b) {
    link[a].push_back(b);
    link[b].push_back(a);
  };
  for (const auto& e : events) {
    int i = e.pos;
    switch (e.kind) {
      case MorseEvent::Open: {
        if (i < 0 || i > static_cast<int>(row.size())) throw InputError("open position out of range");
        int a = new_node(), b = new_node();
        connect(a, b);
        row.insert(row.begin() + i, {a, b});
        break;
      }
      case MorseEvent::Close: {
        if (i < 0 || i + 1 >= static_cast<int>(row.size())) throw InputError("close position out of range");
        connect(row[i], row[i + 1]);
        row.erase(row.begin() + i, row.begin() + i + 2);
        break;
      }
      case MorseEvent::Cross: {
        if (i < 0 || i + 1 >= static_cast<int>(row.size())) throw InputError("cross position out of range");
        int k = ncross++;
        types.push_back(e.type);
        for (int c = 0; c < 4; ++c) corner_node.push_back(new_node());
        connect(row[i], corner_node[4 * k + 0]);
        connect(row[i + 1], corner_node[4 * k + 1]);
        row[i] = corner_node[4 * k + 2];
        row[i + 1] = corner_node[4 * k + 3];
        break;
      }
    }
  }
  if (!row.empty()) throw InputError("morse diagram leaves open strands");
  std::vector<int> corner_of(link.size(), -1);
  for (size_t c = 0; c < corner_node.size(); ++c) corner_of[corner_node[c]] = static_cast<int>(c);
  // opposite corner through the crossing: NW<->SE, NE<->SW
  auto through = [](int corner) { return (corner & ~3) | (3 - (corner & 3)); };
  // walk from a corner outward along the connection to the next corner
  auto walk = [&](int corner, std::vector<char>& seen) {
    int prev = corner_node[corner];
    int cur = link[prev][0];
    while (corner_of[cur] < 0) {
      seen[cur] = 1;
      int nxt = link[cur][0] == prev ? link[cur][1] : link[cur][0];
      prev = cur;
      cur = nxt;
    }
    return corner_of[cur];
  };
  std::vector<char> seen(link.size(), 0);
  // orient: outgoing[corner] = true if the strand leaves the crossing there
  std::vector<int> outgoing(4 * ncross, -1);
  std::vector<int> arc_at(4 * ncross, 0);
  int next_label = 1;
  for (int start = 0; start < 4 * ncross; ++start) {
    if (outgoing[start] >= 0) continue;
    int c = start;
    do {
      outgoing[c] = 1;
      int other = walk(c, seen);
      outgoing[other] = 0;
      arc_at[c] = arc_at[other] = next_label++;
      c = through(other);
    } while (c != start);
  }
  std::vector<int> loops;
  for (size_t nd = 0; nd < link.size(); ++nd) {
    if (seen[nd] || corner_of[nd] >= 0) continue;
    // crossingless circle
    int prev = static_cast<int>(nd), cur = link[nd][0];
    seen[nd] = 1;
    while (cur != static_cast<int>(nd)) {
      seen[cur] = 1;
      int nxt = link[cur][0] == prev ? link[cur][1] : link[cur][0];
      prev = cur;
      cur = nxt;
    }
    loops.push_back(next_label++);
  }
  static const int px[4] = {-1, 1, -1, 1}, py[4] = {1, 1, -1, -1};
  // counterclockwise corner order NW, SW, SE, NE
  static const int ccw[4] = {0, 2, 3, 1};
  std::vector<Crossing> xs;
  for (int k = 0; k < ncross; ++k) {
    // strand 0: NW-SE, strand 1: NE-SW; over strand is NW-SE for type +1
    int over_pair[2], under_pair[2];
    if (types[k] > 0) {
      over_pair[0] = 0, over_pair[1] = 3, under_pair[0] = 1, under_pair[1] = 2;
    } else {
      over_pair[0] = 1, over_pair[1] = 2, under_pair[0] = 0, under_pair[1] = 3;
    }
    auto in_out = [&](const int* pr, int& in, int& out) {
      bool first_in = outgoing[4 * k + pr[0]] == 0;
      in = first_in ? pr[0] : pr[1];
      out = first_in ? pr[1] : pr[0];
    };
    int oi, oo, ui, uo;
    in_out(over_pair, oi, oo);
    in_out(under_pair, ui, uo);
    int odx = px[oo] - px[oi], ody = py[oo] - py[oi];
    int udx = px[uo] - px[ui], udy = py[uo] - py[ui];
    int sign = (odx * udy - ody * udx) > 0 ? 1 : -1;
    int start = 0;
    while (ccw[start] != ui) ++start;
    Crossing x;
    for (int s = 0; s < 4; ++s) x.arc[s] = arc_at[4 * k + ccw[(start + s) % 4]];
    x.sign = sign;
    xs.push_back(x);
  }
  return LinkDiagram(xs, loops);
}

std::vector<MorseEvent> parse_morse(const std::string& text) {
  std::string t = text;
  std::replace(t.begin(), t.end(), ';', '\n');
  std::istringstream is(t);
  std::string line;
  std::vector<MorseEvent> out;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '#') continue;
    MorseEvent e{MorseEvent::Open, 0, 1};
    if (toks[0] == "open") e.kind = MorseEvent::Open;
    else if (toks[0] == "close") e.kind = MorseEvent::Close;
    else if (toks[0] == "cross") e.kind = MorseEvent::Cross;
    else throw InputError("morse line " + std::to_string(ln) + ": unknown event '" + toks[0] + "'");
    if (toks.size() < 2) throw InputError("morse line " + std::to_string(ln) + ": missing position");
    e.pos = parse_int(toks[1], ln);
    if (e.kind == MorseEvent::Cross) {
      if (toks.size() != 3) throw InputError("morse line " + std::to_string(ln) + ": cross needs a type");
      e.type = toks[2] == "+" || toks[2] == "+1" || toks[2] == "1" ? 1 : -1;
    }
    out.push_back(e);
  }
  return out;
}

LinkDiagram pretzel(const std::vector<int>& cols) {
  const int k = static_cast<int>(cols.size());
  if (k < 1) throw InputError("pretzel needs at least one column");
  std::vector<MorseEvent> ev;
  ev.push_back({MorseEvent::Open, 0, 1});
  for (int i = 1; i < k; ++i) ev.push_back({MorseEvent::Open, 2 * i - 1, 1});
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < std::abs(cols[i]); ++j) ev.push_back({MorseEvent::Cross, 2 * i, cols[i] > 0 ? 1 : -1});
  for (int i = 1; i < k; ++i) ev.push_back({MorseEvent::Close, 1, 1});
  ev.push_back({MorseEvent::Close, 0, 1});
  return from_morse(ev);
}

}  // namespace kcob
