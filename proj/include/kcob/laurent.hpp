#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace kcob {

// Laurent polynomial in one variable with checked 64-bit coefficients.
class Laurent {
 public:
  Laurent() = default;
  static Laurent monomial(int exp, int64_t coeff = 1);

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  Laurent operator+(const Laurent& o) const { Laurent r = *this; return r += o; }
  Laurent operator-(const Laurent& o) const { Laurent r = *this; return r -= o; }
  Laurent operator*(const Laurent& o) const;
  Laurent operator*(int64_t s) const;
  bool operator==(const Laurent& o) const { return c_ == o.c_; }
  bool operator!=(const Laurent& o) const { return c_ != o.c_; }

  int64_t coeff(int exp) const;
  void add_term(int exp, int64_t coeff);
  bool is_zero() const { return c_.empty(); }
  const std::map<int, int64_t>& terms() const { return c_; }

  // substitute q -> q^{-1}
  Laurent bar() const;
  std::string to_string(const std::string& var = "q") const;

 private:
  std::map<int, int64_t> c_;
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

}  // namespace kcob
