#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kcob/frobenius.hpp"
#include "kcob/laurent.hpp"
#include "kcob/linalg.hpp"
#include "kcob/linkdiag.hpp"

namespace kcob {

using Gen = uint32_t;

constexpr uint64_t kDefaultBudget = uint64_t{1} << 26;

// Bigraded free complex with differential of bidegree (1,0).  Entries are
// stored as int64 coefficients; in the Bar-Natan theory every entry is an
// F2 coefficient times the unique power of H making it q-homogeneous.
struct ChainComplex {
  FrobeniusTheory theory;
  std::vector<int> hdeg, qdeg;
  std::vector<uint64_t> dptr{0};
  std::vector<Gen> dtgt;
  std::vector<int64_t> dval;

  size_t size() const { return hdeg.size(); }
  size_t nnz() const { return dtgt.size(); }
  // Full ring value of the k-th stored entry of column g.
  Scalar entry(Gen g, uint64_t k) const;
};

using ChainElement = std::map<Gen, Scalar>;

void add_term(ChainElement& e, Gen g, Scalar c, const Ring& R);
ChainElement add(const ChainElement& a, const ChainElement& b, const Ring& R);
ChainElement scale(const ChainElement& a, Scalar c, const Ring& R);
ChainElement apply_d(const ChainComplex& cc, const ChainElement& e);
bool is_zero(const ChainElement& e);

// Cube-of-resolutions complex of a diagram.
class GradedComplex {
 public:
  LinkDiagram diagram;
  FrobeniusTheory theory;
  ChainComplex cc;
  int n = 0;

  int circles(Vertex v) const { return ncirc_[v]; }
  // Circle at vertex v through the arc with the given label.
  int circle_of(Vertex v, int arc_label) const;
  int circle_of_index(Vertex v, int arc_index) const { return circle_of_[v * arcs_ + arc_index]; }
  Gen gen(Vertex v, uint64_t labels) const { return static_cast<Gen>(offset_[v] + labels); }
  std::pair<Vertex, uint64_t> decode(Gen g) const;
  uint64_t vertex_count() const { return uint64_t{1} << n; }
  int h_of(Vertex v) const;
  int q_of(Vertex v, uint64_t labels) const;

  // "0101" and "1x" style words.
  Gen gen_from_words(const std::string& vertex, const std::string& labels) const;
  std::string vertex_word(Gen g) const;
  std::string label_word(Gen g) const;

 private:
  friend GradedComplex build_complex(const LinkDiagram&, const FrobeniusTheory&, uint64_t);
  int arcs_ = 0;
  std::vector<uint64_t> offset_;
  std::vector<Vertex> order_;  // vertices in generator order
  std::vector<uint64_t> order_offset_;
  std::vector<uint8_t> ncirc_;
  std::vector<int16_t> circle_of_;
};

// Number of generators the complex would have; used for the budget check.
uint64_t count_generators(const LinkDiagram& d);

GradedComplex build_complex(const LinkDiagram& d, const FrobeniusTheory& t, uint64_t budget = kDefaultBudget);

// Max |coefficient| of d^2 over all generators; 0 means d^2 = 0.
bool check_d_squared(const ChainComplex& cc);

// Checks that every square face of the cube anticommutes (Z theory) by
// comparing the two paths generator by generator.
bool check_faces_anticommute(const GradedComplex& c);

struct HomologyGroup {
  int h = 0, q = 0;
  int64_t free = 0;                   // rank, or number of towers (Bar-Natan)
  std::vector<std::string> torsion;   // Z: prime-power orders; F2[H]: exponents k of F2[H]/H^k
  bool operator==(const HomologyGroup&) const = default;
};

struct HomologyModule {
  std::string theory;
  std::map<std::pair<int, int>, HomologyGroup> groups;
  bool operator==(const HomologyModule& o) const { return groups == o.groups; }
  int64_t total_free() const;
  std::string poincare() const;  // text form, e.g. "q^1 t^0 + ..."
  std::string to_text() const;
};

HomologyModule homology(const ChainComplex& cc);

// Generator-level cycle test; Khovanov theories use the merge criterion on
// 0-resolutions, the Bar-Natan theory applies d.
bool is_cycle(const GradedComplex& c, Gen g);

Laurent graded_euler(const ChainComplex& cc);

// Hom-dual complex: negated bigradings, transposed differential.
ChainComplex dualize(const ChainComplex& cc);

// H = 0 reduction of a Bar-Natan complex to the Khovanov complex over F2.
ChainComplex quotient_to_kh(const ChainComplex& cc);
ChainElement project_h0(const ChainElement& e, const Ring& from);

// ---- homology classes -----------------------------------------------------

// Homology of one (h,q) block of a Khovanov complex (Z or F2), with
// representatives and coordinates.
class BlockHomology {
 public:
  BlockHomology(const ChainComplex& cc, int h, int q);
  int h() const { return h_; }
  int q() const { return q_; }
  size_t summands() const { return orders_.size(); }
  // 0 for a free summand, otherwise the order of the cyclic summand.
  const std::vector<mpz_class>& orders() const { return orders_; }
  const std::vector<ChainElement>& reps() const { return reps_; }
  // Coordinates of a cycle (reduced modulo the orders).  Throws if not a cycle.
  std::vector<mpz_class> coords(const ChainElement& z) const;
  bool is_zero_class(const ChainElement& z) const;

 private:
  const ChainComplex* cc_;
  int h_, q_, mod_;
  std::vector<Gen> gens_;
  std::map<Gen, size_t> pos_;
  size_t rB_ = 0;
  ZMat Vinv_;                 // from the SNF of the outgoing differential
  ZMat P_;                    // from the SNF of the boundary coordinates
  std::vector<mpz_class> orders_;
  size_t trivial_ = 0;        // leading summands of order 1 (dropped)
  std::vector<ChainElement> reps_;
};

// Bar-Natan homology by column reduction at H = 1 with q-ordered columns.
class BNHomology {
 public:
  explicit BNHomology(const ChainComplex& cc);
  const HomologyModule& module() const { return module_; }
  // Smallest k with H^k z a boundary; -1 when no power works.
  int torsion_order(const ChainElement& z) const;
  bool is_zero_class(const ChainElement& z) const { return torsion_order(z) == 0; }
  // Free towers as (h, q) anchors with cycle representatives.
  const std::vector<std::pair<std::pair<int, int>, ChainElement>>& towers() const { return towers_; }
  // Finite bars: (h, q of generator, k).
  struct Bar {
    int h, q, k;
  };
  const std::vector<Bar>& bars() const { return bars_; }

 private:
  const ChainComplex* cc_;
  // per homological degree: generators in q-descending order and the
  // reduced boundary columns coming from degree h-1, keyed by low row
  struct Level {
    std::vector<Gen> gens;
    std::map<Gen, size_t> pos;
    std::map<size_t, std::pair<std::vector<size_t>, int>> pivot;  // low -> (reduced column, its index in level h-1)
  };
  std::map<int, Level> levels_;
  HomologyModule module_;
  std::vector<std::pair<std::pair<int, int>, ChainElement>> towers_;
  std::vector<Bar> bars_;
};

// Parse [[vertex word, label word, coeff], ...]; label letters 1, x, and for
// the Bar-Natan theory y = x + H.  Coefficients are integers or strings such
// as "H^2" or "1+H".
ChainElement parse_element(const GradedComplex& c, const std::string& json_text);
std::string element_to_string(const GradedComplex& c, const ChainElement& e);

}  // namespace kcob
