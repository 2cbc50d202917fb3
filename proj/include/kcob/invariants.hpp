#pragma once

#include <map>
#include <string>
#include <vector>

#include "kcob/cobmap.hpp"

namespace kcob {

// Plamenevskaya's class: the braided smoothing (0 at positive letters, 1 at
// negative letters) of the closed braid with every circle labelled x.
struct PsiResult {
  LinkDiagram diagram;
  GradedComplex complex;
  ChainElement psi;
  int h = 0, q = 0;
  int writhe = 0, strands = 0;
  bool cycle = false;
  bool nonzero = false;  // class nonzero in homology (Khovanov theories)
};
PsiResult plamenevskaya(const std::vector<int>& word, int strands, const FrobeniusTheory& t);

// Lee-type generators of the Bar-Natan complex of d: one per orientation of
// the components, on the oriented resolution, with Seifert circles coloured
// x / y = x + H alternately across crossings.
struct BNGenerator {
  std::vector<char> flipped;  // per component, relative to d
  Vertex vertex = 0;
  ChainElement element;       // in the complex of d as given
  int h = 0, q = 0;
  bool cycle = false;
};
std::vector<BNGenerator> bn_generators(const GradedComplex& c);
// Same colouring restricted to circles that meet a 0-resolved crossing; the
// remaining circles carry 1.  Higher q than the Lee-type generators when some
// Seifert circle meets only 1-resolved crossings.
std::vector<BNGenerator> theta_cycles(const GradedComplex& c);

// Knot s-invariant from the two free towers of the Bar-Natan homology.
int s_invariant(const LinkDiagram& d, uint64_t budget = kDefaultBudget);

// Bar-Natan-Lee-Turner pages read off H-torsion: F2[H]/H^k generated at
// (h, q) adds one dimension at (h, q) and (h - 1, q - 2k) on pages 1..k.
struct TorsionProfile {
  // pages[r-1][(h, q)] = dimension on page r; the last page is stable.
  std::vector<std::map<std::pair<int, int>, int>> pages;
  int stable_page = 1;
  int towers = 0;
  int total(size_t page) const;
};
TorsionProfile torsion_profile(const LinkDiagram& d, uint64_t budget = kDefaultBudget);

// Map of C followed by its time reversal, compared with the identity on
// Khovanov homology of the source.
struct RibbonCertificate {
  bool pass = false;
  bool has_local_maxima = false;  // death moves present in C
  int blocks = 0;
  std::string failure;
};
RibbonCertificate ribbon_double_check(const Movie& c, const Movie& c_reversed, const FrobeniusTheory& t);

}  // namespace kcob
