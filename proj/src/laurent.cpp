#include "kcob/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace kcob {

int64_t checked_add(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in addition");
  return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
  int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in multiplication");
  return r;
}

Laurent Laurent::monomial(int exp, int64_t coeff) {
  Laurent r;
  r.add_term(exp, coeff);
  return r;
}

void Laurent::add_term(int exp, int64_t coeff) {
  if (coeff == 0) return;
  auto it = c_.find(exp);
  if (it == c_.end()) {
    c_.emplace(exp, coeff);
    return;
  }
  it->second = checked_add(it->second, coeff);
  if (it->second == 0) c_.erase(it);
}

Laurent& Laurent::operator+=(const Laurent& o) {
  for (auto [e, c] : o.c_) add_term(e, c);
  return *this;
}

Laurent& Laurent::operator-=(const Laurent& o) {
  for (auto [e, c] : o.c_) add_term(e, checked_mul(c, -1));
  return *this;
}

Laurent Laurent::operator*(const Laurent& o) const {
  Laurent r;
  for (auto [e1, c1] : c_)
    for (auto [e2, c2] : o.c_) r.add_term(e1 + e2, checked_mul(c1, c2));
  return r;
}

Laurent Laurent::operator*(int64_t s) const {
  Laurent r;
  for (auto [e, c] : c_) r.add_term(e, checked_mul(c, s));
  return r;
}

int64_t Laurent::coeff(int exp) const {
  auto it = c_.find(exp);
  return it == c_.end() ? 0 : it->second;
}

Laurent Laurent::bar() const {
  Laurent r;
  for (auto [e, c] : c_) r.add_term(-e, c);
  return r;
}

std::string Laurent::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    auto [e, c] = *it;
    int64_t a = c < 0 ? -c : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (e == 0) {
      os << a;
      continue;
    }
    if (a != 1) os << a << "*";
    os << var;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

}  // namespace kcob
