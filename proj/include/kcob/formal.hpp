#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kcob/khcomplex.hpp"

namespace kcob::formal {

// Crossingless tangle in a disk: boundary points 0..nb-1 in circular order,
// a perfect matching of them, some closed circles, and a formal q-shift.
struct PlanarTangle {
  int nb = 0;
  std::vector<int> match;
  int circles = 0;
  int shift = 0;

  bool same_shape(const PlanarTangle& o) const { return nb == o.nb && match == o.match && circles == o.circles; }
  bool operator==(const PlanarTangle&) const = default;
  void validate() const;  // throws InputError
  static PlanarTangle empty(int circles = 0, int shift = 0);
};
std::string to_string(const PlanarTangle& t);

// Boundary cycles of src ∪ tgt: cycles through the boundary points first
// (ordered by smallest point), then source circles, then target circles.
struct CycleLayout {
  std::vector<int> cycle_of_point;
  std::vector<std::vector<int>> points;  // per arc cycle
  int arc_cycles = 0;
  int src_circle0 = 0, tgt_circle0 = 0;
  int total = 0;
};
CycleLayout cycle_layout(const PlanarTangle& src, const PlanarTangle& tgt);

// Morphism in canonical form: every surface is a union of disks, one per
// boundary cycle, each carrying at most one dot.  Key bit i = dot on the
// disk of cycle i.
struct DottedCobordism {
  PlanarTangle src, tgt;
  std::map<uint64_t, int64_t> terms;

  bool is_zero() const { return terms.empty(); }
  int cycles() const { return cycle_layout(src, tgt).total; }
  int term_degree(uint64_t dots) const;
  // Common degree of all terms; throws if inhomogeneous, 0 for the zero map.
  int degree() const;
  bool operator==(const DottedCobordism& o) const {
    return src == o.src && tgt == o.tgt && terms == o.terms;
  }
};
std::string to_string(const DottedCobordism& c);

DottedCobordism zero(const PlanarTangle& src, const PlanarTangle& tgt);
DottedCobordism identity(const PlanarTangle& t);
DottedCobordism add(const DottedCobordism& a, const DottedCobordism& b);
DottedCobordism scale(const DottedCobordism& a, int64_t c);
DottedCobordism negate(const DottedCobordism& a);
// f ∘ g; requires g.tgt == f.src.
DottedCobordism compose(const DottedCobordism& f, const DottedCobordism& g);
// ±identity between equal circle-free tangles.
int identity_sign(const DottedCobordism& c);

// Unnormalized surfaces.  Every boundary cycle belongs to exactly one
// component; components without cycles are closed.
struct RawComponent {
  std::vector<int> cycles;
  int genus = 0;
  int dots = 0;
};
struct RawTerm {
  int64_t coeff = 1;
  std::vector<RawComponent> comps;
};
struct RawCobordism {
  PlanarTangle src, tgt;
  std::vector<RawTerm> terms;
};

// Rewrites with sphere = 0, dotted sphere = 1, two dots = 0 and neck cutting
// until canonical.  seed 0 applies rules in a fixed order; other seeds pick
// terms, components and neck positions at random.
DottedCobordism normalize(const RawCobordism& w, uint64_t seed = 0);
// Glue f on top of g without evaluating anything.
RawCobordism stack(const DottedCobordism& f, const DottedCobordism& g);

// T12 + T34 - T13 - T24 for tubes joining four small disks on the components
// sites[i] of a single-term raw cobordism; returns the normalized residue.
DottedCobordism four_tube_residue(const RawCobordism& w, std::array<int, 4> sites);
bool check_4tu(const RawCobordism& w, std::array<int, 4> sites);

// ---- complexes ------------------------------------------------------------

// Sparse matrix of cobordisms, entry (row, col) maps object col to object row.
struct Matrix {
  size_t rows = 0, cols = 0;
  std::map<std::pair<size_t, size_t>, DottedCobordism> at;
};

struct FormalComplex {
  int hmin = 0;
  std::vector<std::vector<PlanarTangle>> objects;  // objects[k] sits in degree hmin + k
  std::vector<Matrix> d;                           // d[k]: objects[k] -> objects[k+1]
  size_t object_count() const;
  // Generators after applying a TQFT (2^circles per object).
  uint64_t generator_count() const;
};

// Per degree k, maps objects[k] of the source to objects[k] of the target.
using ChainMorphism = std::vector<Matrix>;

std::string dump(const FormalComplex& c);
// Checks d∘d = 0 and that every entry has degree 0.
bool check_complex(const FormalComplex& c, std::string* why = nullptr);

// Tangle diagram: crossings in the usual PD convention, the boundary labels
// in circular order (a label listed twice is a crossingless strand), loops.
struct TangleDiagram {
  std::vector<Crossing> crossings;
  std::vector<int> ends;
  std::vector<int> loops;
  static TangleDiagram from_link(const LinkDiagram& d);
};

// Cube of resolutions with saddle differentials; the object at vertex v
// carries the shift r + n+ - 2 n- with r the number of 1-resolutions.
// vertices (optional) receives the cube vertex of every object.
FormalComplex bracket(const TangleDiagram& t, uint64_t budget = kDefaultBudget,
                      std::vector<std::vector<Vertex>>* vertices = nullptr);
FormalComplex bracket(const LinkDiagram& d, uint64_t budget = kDefaultBudget,
                      std::vector<std::vector<Vertex>>* vertices = nullptr);

// C ≃ reduced, with f: C -> reduced, g: reduced -> C, and homotopies
// h (on C, degree -1: h[k] maps objects[k] to objects[k-1]) and h_reduced with
// g∘f - id = d h + h d and f∘g - id = d h' + h' d.
struct Equivalence {
  FormalComplex reduced;
  ChainMorphism f, g;
  ChainMorphism h, h_reduced;
  bool tracked = true;
};
// Checks both chain-map conditions and both homotopy identities exactly.
bool verify_equivalence(const FormalComplex& c, const Equivalence& e, std::string* why = nullptr);
Equivalence then(const FormalComplex& c, const Equivalence& first, const Equivalence& second);

// Replaces each circle by ∅{+1} ⊕ ∅{-1} (dotted cap / cup and cap / dotted
// cup); the new objects of one old object are ordered by a bitmask whose
// bit i means circle i went to ∅{-1}.
Equivalence deloop(const FormalComplex& c);
// Cancels ±identity entries, lowest degree first, then by column and row.
// With track = false only the reduced complex is produced.
Equivalence gauss_reduce(const FormalComplex& c, bool track = true);

// ---- TQFT ------------------------------------------------------------------

// Khovanov theories only: the canonical forms use two dots = 0.
// Column a (bit i = x on source circle i) of the matrix of c.
std::vector<std::map<uint64_t, Scalar>> tqft(const DottedCobordism& c, const FrobeniusTheory& t);
// Generators ordered by degree, object, label mask.
ChainComplex tqft(const FormalComplex& c, const FrobeniusTheory& t);
// Direct evaluation of a raw closed-boundary word by structure maps.
std::vector<std::map<uint64_t, Scalar>> tqft_raw(const RawCobordism& w, const FrobeniusTheory& t);

// ---- Reidemeister I ----------------------------------------------------------

// The complexes of the positive kink T and the arc T', with f: [T] -> [T'],
// g: [T'] -> [T] and h: [T]^1 -> [T]^0.
struct R1Proof {
  FormalComplex kink, arc;
  DottedCobordism d, f0, g0, h1;
};
R1Proof r1_morphisms(bool corrupt_h_dot = false);
// Closed-up degree-0 maps for a one-crossing positive kink diagram k whose
// original strand carries the given label (on the sphere both circles of the
// 0-smoothing look alike): f0 from the 0-smoothing to the unknot, g0 back.
std::pair<DottedCobordism, DottedCobordism> closed_r1_morphisms(const LinkDiagram& k, int strand);

struct R1Certificate {
  bool pass = false;
  std::vector<std::pair<std::string, bool>> steps;
  std::string failed_step;
  std::string trace;  // dumps of the morphisms and residues
};
R1Certificate verify_r1_proof(bool corrupt_h_dot = false);

}  // namespace kcob::formal
