#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "kcob/errors.hpp"
#include "kcob/laurent.hpp"

namespace kcob {

// A crossing X[a,b,c,d]: slots counterclockwise starting at the incoming
// under-strand, so the under-strand runs a -> c.  For sign +1 the over-strand
// runs d -> b, for sign -1 it runs b -> d.
struct Crossing {
  std::array<int, 4> arc{};
  int sign = 1;

  int over_in() const { return sign > 0 ? arc[3] : arc[1]; }
  int over_out() const { return sign > 0 ? arc[1] : arc[3]; }
  int over_in_slot() const { return sign > 0 ? 3 : 1; }
  bool slot_incoming(int p) const { return p == 0 || p == over_in_slot(); }
  bool operator==(const Crossing&) const = default;
};

// Build a crossing from the arcs of its two strands.
Crossing make_crossing(int under_in, int under_out, int over_in, int over_out, int sign);

struct Slot {
  int crossing = -1;
  int pos = -1;
};

// One side of an arc on the boundary of a face.  `right` is true when the
// face lies to the right of the arc's orientation.
struct FaceSide {
  int arc;
  bool right;
};
using Face = std::vector<FaceSide>;

class LinkDiagram {
 public:
  LinkDiagram() = default;
  // Validates labels, orientation and planarity; throws InputError.
  LinkDiagram(std::vector<Crossing> crossings, std::vector<int> loops);

  const std::vector<Crossing>& crossings() const { return crossings_; }
  const std::vector<int>& loops() const { return loops_; }
  int size() const { return static_cast<int>(crossings_.size()); }
  int n_plus() const { return n_plus_; }
  int n_minus() const { return n_minus_; }
  int writhe() const { return n_plus_ - n_minus_; }

  // Sorted arc labels (crossing arcs and free loops).
  const std::vector<int>& arcs() const { return arcs_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }
  int arc_index(int label) const;  // -1 when absent
  bool has_arc(int label) const { return arc_index(label) >= 0; }
  bool is_loop(int label) const;
  int max_label() const { return arcs_.empty() ? 0 : arcs_.back(); }

  // Slot where the arc enters / leaves a crossing.  Invalid for loops.
  Slot head(int label) const;
  Slot tail(int label) const;

  // Components as arc sequences in strand order, each starting at its minimal
  // label; components sorted by minimal label.
  const std::vector<std::vector<int>>& components() const { return components_; }
  int component_of(int label) const;

  // Connected pieces of the underlying 4-valent graph (free loops are their
  // own pieces), as sorted lists of crossing indices; loops give empty lists.
  int diagram_piece_of_arc(int label) const;

  std::vector<Face> faces() const;

  // Slot arc indices per crossing, for fast cube work.
  const std::vector<std::array<int, 4>>& slot_index() const { return slot_index_; }

  bool operator==(const LinkDiagram& o) const {
    return crossings_ == o.crossings_ && loops_ == o.loops_;
  }
  bool operator!=(const LinkDiagram& o) const { return !(*this == o); }

 private:
  void build();

  std::vector<Crossing> crossings_;
  std::vector<int> loops_;
  std::vector<int> arcs_;
  std::unordered_map<int, int> index_;
  std::vector<Slot> head_, tail_;
  std::vector<int> comp_of_;
  std::vector<int> piece_of_;
  std::vector<std::vector<int>> components_;
  std::vector<std::array<int, 4>> slot_index_;
  int n_plus_ = 0, n_minus_ = 0;
};

// ---- text formats -------------------------------------------------------

// Accepts `pd <n>` blocks (crossing, component and loop lines) and
// `braid <strands> <letters...>`.  Lines starting with '#' are comments.
LinkDiagram parse_pd(const std::string& text);
std::string serialize_pd(const LinkDiagram& d);

LinkDiagram from_braid(const std::vector<int>& word, int strands);

// Diagram drawn top to bottom on a row of strand positions: `open i` starts a
// local maximum occupying positions i,i+1, `close i` joins positions i,i+1,
// `cross i t` crosses positions i,i+1 with the strand from the upper left
// passing over when t = +1 (under when t = -1).  Orientation follows a
// traversal from the lowest crossing; relabel or reverse components after.
struct MorseEvent {
  enum Kind { Open, Close, Cross } kind;
  int pos;
  int type = 1;
};
LinkDiagram from_morse(const std::vector<MorseEvent>& events);
// "open 0; cross 1 +; close 0" with ';' or newlines as separators.
std::vector<MorseEvent> parse_morse(const std::string& text);
// Pretzel P(p1,...,pk): k twist columns, column i with |p_i| crossings.
LinkDiagram pretzel(const std::vector<int>& cols);

// ---- basic transformations ---------------------------------------------

LinkDiagram mirror(const LinkDiagram& d);
// Reverse the orientation of the component containing `arc`.
LinkDiagram reverse_component(const LinkDiagram& d, int arc);
LinkDiagram reverse_all(const LinkDiagram& d);
// Rename arcs by an injective map (labels absent from the map are kept).
LinkDiagram relabel(const LinkDiagram& d, const std::unordered_map<int, int>& m);
// Crossing permutation: new crossing i is old crossing perm[i].
LinkDiagram permute_crossings(const LinkDiagram& d, const std::vector<int>& perm);

// ---- cube of resolutions --------------------------------------------------

using Vertex = uint64_t;  // bit i = resolution of crossing i
constexpr int kMaxCrossings = 62;

std::string vertex_to_string(Vertex v, int n);
Vertex vertex_from_string(const std::string& s);

// Union-find over arcs for one vertex.  circle_of[arc index] receives circle
// ids ordered by minimal arc label; returns the number of circles.
int compute_circles(const LinkDiagram& d, Vertex v, std::vector<int>& circle_of);

struct Smoothing {
  Vertex vertex = 0;
  int n = 0;
  std::vector<std::vector<int>> circles;  // arc labels in traversal order
  std::vector<int> circle_of;             // per arc index
  int circle_count() const { return static_cast<int>(circles.size()); }
};

Smoothing resolve(const LinkDiagram& d, Vertex v);
Smoothing resolve(const LinkDiagram& d, const std::string& word);

enum class EdgeKind { Merge, Split };

struct EdgeData {
  Vertex source = 0, target = 0;
  int crossing = -1;
  EdgeKind kind = EdgeKind::Merge;
  // circle_correspondence[source circle] = target circle (merge).  For a split
  // the split circle maps to split_targets.first and split_targets.second.
  std::vector<int> circle_correspondence;
  std::pair<int, int> merged{-1, -1};         // source circles (merge)
  std::pair<int, int> split_targets{-1, -1};  // target circles (split)
};

EdgeData edge_data(const LinkDiagram& d, Vertex v, int i);

// 0 at positive crossings, 1 at negative ones.
Vertex oriented_resolution(const LinkDiagram& d);

// Unnormalized Jones polynomial, unknot -> q + q^{-1}, computed by a
// recursive Kauffman-bracket skein expansion.
Laurent kauffman_jones(const LinkDiagram& d);

}  // namespace kcob
