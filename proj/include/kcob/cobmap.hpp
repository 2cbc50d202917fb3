#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kcob/khcomplex.hpp"
#include "kcob/moves.hpp"

namespace kcob {

// A movie: frames[i] --moves[i]--> frames[i+1].  perms[i] is empty when the
// move result has the crossing order of frames[i+1]; otherwise crossing k of
// the result is crossing perms[i][k] of the next frame.
struct Movie {
  std::vector<LinkDiagram> frames;
  std::vector<Move> moves;
  std::vector<std::vector<int>> perms;

  // births + deaths - saddles - 2 * squares
  int euler_characteristic() const;
  bool has_r3() const;
  const LinkDiagram& source() const { return frames.front(); }
  const LinkDiagram& target() const { return frames.back(); }
};

Movie make_movie(const LinkDiagram& start, const std::vector<Move>& moves);
Movie parse_movie(const std::string& text);
std::string serialize_movie(const Movie& m);

// Crossing-order-insensitive diagram equality; perm[k] = index in b of a's crossing k.
bool equal_up_to_order(const LinkDiagram& a, const LinkDiagram& b, std::vector<int>* perm = nullptr);

Movie concat(const Movie& first, const Movie& second);
Movie reverse(const Movie& m);
Movie mirror(const Movie& m);
Movie reverse_mirror(const Movie& m);

enum class R3Mode { Strict, Permissive };

// Composite chain map of a movie, one complex per intermediate diagram.
class MovieMap {
 public:
  MovieMap(const Movie& m, const FrobeniusTheory& t, R3Mode mode = R3Mode::Strict, uint64_t budget = kDefaultBudget);

  const GradedComplex& source() const { return *complexes_.front(); }
  const GradedComplex& target() const { return *complexes_.back(); }
  size_t step_count() const { return steps_.size(); }
  const GradedComplex& complex(size_t i) const { return *complexes_[i]; }
  const std::string& step_name(size_t i) const { return steps_[i].name; }
  int step_q_degree(size_t i) const { return steps_[i].qdeg; }
  int q_degree() const;

  ChainElement apply_step(size_t i, const ChainElement& e) const;
  // Steps [from, to).
  ChainElement apply_range(size_t from, size_t to, const ChainElement& e) const;
  ChainElement apply(const ChainElement& e) const { return apply_range(0, steps_.size(), e); }

  // Exact d F = F d and bidegree (0, chi) for every step on every generator.
  // Returns the index of the first failing step, or -1.
  int verify(std::string* why = nullptr) const;
  // True when the map contains a permissive r3 step (unverified against the literature).
  bool uses_r3() const { return uses_r3_; }

 private:
  struct Step {
    std::string name;
    int qdeg = 0;
    std::function<ChainElement(Gen)> image;
  };
  std::vector<std::unique_ptr<GradedComplex>> complexes_;
  std::vector<Step> steps_;
  bool uses_r3_ = false;
};

// Element 1 of the complex of the empty diagram.
ChainElement empty_unit(const GradedComplex& c);

// Khovanov-theory homology map for one source bigrading: rows index target
// summands, columns source summands.
struct HomologyMapBlock {
  int h = 0, q = 0, q_target = 0;
  std::vector<mpz_class> source_orders, target_orders;  // 0 = free
  ZMat matrix;
  ZMat normalized;  // first nonzero entry positive (global sign)
};
std::vector<HomologyMapBlock> induced_on_homology(const MovieMap& f);

// H(Sigma)(1) for a movie from the empty diagram to the empty diagram.
Scalar closed_surface_value(const Movie& m, const FrobeniusTheory& t, R3Mode mode = R3Mode::Strict);

struct DifferenceClass {
  ChainElement delta;       // chain-level difference in the target complex
  bool zero = false;        // class vanishes
  int torsion_order = -1;   // Bar-Natan: smallest k with H^k delta = 0, -1 if none
  bool h_times_zero = false;  // Bar-Natan: H * delta vanishes
};
// movie_map(m1)(z) - movie_map(m2)(z); z defaults to 1 for empty sources.
DifferenceClass difference_class(const Movie& m1, const Movie& m2, const FrobeniusTheory& t,
                                 const ChainElement* source_class = nullptr, R3Mode mode = R3Mode::Strict);

// Bar-Natan: does a = c * b hold on homology?  Checked on a basis of cycles
// of every (h, q) slice of the source.
bool bn_equal_on_homology(const MovieMap& a, const MovieMap& b, Scalar c);

}  // namespace kcob
