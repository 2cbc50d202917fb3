#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kcob/linkdiag.hpp"

namespace kcob {

enum class MoveType { Birth, Death, Saddle, R1Plus, R1Minus, R2Plus, R2Minus, R3, Relabel, Square };

const char* move_name(MoveType t);

// One elementary move.  `arcs` holds the site arguments; `fresh` optionally
// fixes the labels of arcs created by the move (otherwise max+1, max+2, ...).
struct Move {
  MoveType type = MoveType::Birth;
  std::vector<int> arcs;
  std::string side;  // r1+: L+ L- R+ R-;  r2+: over|under, optional L|R in side2
  std::string side2;
  std::vector<int> fresh;
  std::vector<std::pair<int, int>> renames;  // relabel a=b
  int line = 0;                              // source line, for messages
};

std::string move_to_string(const Move& m);
Move parse_move(const std::string& text, int line = 0);

// Result of applying a move to a diagram, with the correspondence data the
// chain-map code needs.
struct MoveResult {
  LinkDiagram after;
  std::vector<int> old_of_new;  // per crossing of `after`: index in before, or -1
  std::vector<int> removed;     // crossings of before that disappear
  std::vector<int> added;       // crossings of after that are created
  // (before label, after label) pairs naming the same strand piece away from
  // the local site.
  std::vector<std::pair<int, int>> anchors;
  // site data
  int loop_arc = 0;          // birth/death loop; r1 kink loop
  int strand_arc = 0;        // r1: label of the strand carrying the kink (after r1-, before r1+)
  std::pair<int, int> bigon{0, 0};  // r2: the two bigon arcs (pm, qm)
  std::vector<int> triangle;        // r3: mid arcs
};

MoveResult apply_move(const LinkDiagram& d, const Move& m);

// Orientation-compatible saddle sites and Reidemeister sites, for randomized
// testing and movie search.
std::vector<Move> saddle_sites(const LinkDiagram& d);
std::vector<Move> reidemeister_sites(const LinkDiagram& d, bool include_r3 = true);

}  // namespace kcob
