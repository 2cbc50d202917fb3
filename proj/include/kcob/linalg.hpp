#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace kcob {

using ZMat = std::vector<std::vector<mpz_class>>;

ZMat zmat(size_t rows, size_t cols);

// Smith normal form U*A*V = diag(d_1,...,d_r,0,...) with d_i | d_{i+1}, d_i > 0.
// modulus 0 works over Z, modulus 2 over F2.  Transforms are optional.
struct SNF {
  std::vector<mpz_class> diag;  // nonzero invariant factors
  ZMat U, Uinv, V, Vinv;
  size_t rank() const { return diag.size(); }
};

SNF smith_normal_form(ZMat A, size_t ncols, int modulus, bool transforms);

// Sparse column matrix with int64 entries, used by homology rank/torsion
// computation.  Columns are sorted by row.
struct SparseColumns {
  size_t nrows = 0;
  std::vector<std::vector<std::pair<uint32_t, int64_t>>> cols;
};

struct RankTorsion {
  size_t rank = 0;
  std::vector<mpz_class> torsion;  // invariant factors > 1
};

// Unit-pivot elimination with a fill-reducing pivot order, then a dense Smith
// form of whatever is left.
RankTorsion sparse_rank_torsion(SparseColumns m, int modulus);

}  // namespace kcob
