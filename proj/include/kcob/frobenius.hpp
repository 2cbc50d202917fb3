#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace kcob {

enum class RingTag { Int, F2, F2H };

// A ring element.  Int and F2 use `z`; F2H uses `h`, a polynomial in H with
// F2 coefficients stored as a bitmask (bit k = coefficient of H^k).
struct Scalar {
  int64_t z = 0;
  uint64_t h = 0;
  bool operator==(const Scalar&) const = default;
};

struct Ring {
  RingTag tag = RingTag::Int;

  Scalar zero() const { return {}; }
  Scalar one() const { return from_int(1); }
  Scalar from_int(int64_t v) const;
  Scalar H() const;  // F2H only
  Scalar monomial(int64_t c, int hpow) const;  // c * H^hpow (hpow must be 0 off F2H)
  Scalar add(Scalar a, Scalar b) const;
  Scalar neg(Scalar a) const;
  Scalar sub(Scalar a, Scalar b) const { return add(a, neg(b)); }
  Scalar mul(Scalar a, Scalar b) const;
  bool is_zero(Scalar a) const { return a.z == 0 && a.h == 0; }
  bool is_one(Scalar a) const { return a == one(); }
  // For a monomial c*H^k returns k; -1 for zero, -2 for a non-monomial.
  int h_power(Scalar a) const;
  // Reduction to F2 at H = 0 (F2H) or mod 2 (Int).
  Scalar at_h0(Scalar a) const;
  std::string to_string(Scalar a) const;
  std::string name() const;
  bool operator==(const Ring& o) const { return tag == o.tag; }
};

enum class TheoryName { Khovanov, BarNatan };

using AlgElem = std::array<Scalar, 2>;  // coefficients of 1 and x
using Alg2 = std::array<Scalar, 4>;     // index 2a+b for a (x) b, a,b in {0=1, 1=x}

// Structure constants of a rank-2 Frobenius algebra.
struct FrobeniusTheory {
  TheoryName name = TheoryName::Khovanov;
  Ring ring;
  std::array<AlgElem, 4> m;  // m[2a+b]
  std::array<Alg2, 2> delta;
  AlgElem iota;
  std::array<Scalar, 2> eps;

  bool bn() const { return name == TheoryName::BarNatan; }
  std::string flag() const;  // kh-z, kh-f2, bn-f2h
};

// Throws InputError for unsupported (name, ring) pairs.
FrobeniusTheory make_theory(TheoryName name, Ring ring);
FrobeniusTheory theory_from_flag(const std::string& flag);

AlgElem alg_basis(const FrobeniusTheory& t, int label);
AlgElem multiply(const FrobeniusTheory& t, const AlgElem& a, const AlgElem& b);
Alg2 comultiply(const FrobeniusTheory& t, const AlgElem& a);
AlgElem unit(const FrobeniusTheory& t);
Scalar counit(const FrobeniusTheory& t, const AlgElem& a);
// Multiplication by x (the dot).
AlgElem times_x(const FrobeniusTheory& t, const AlgElem& a);

// q-degrees: deg(1)=+1, deg(x)=-1, deg(H)=-2.
int label_degree(int label);

struct AxiomReport {
  bool pass = true;
  std::vector<std::string> checked;
  std::string failure;  // first failing law and basis tensor
};

AxiomReport check_frobenius_axioms(const FrobeniusTheory& t);

// eps o (m o Delta)^g o iota.
Scalar closed_genus_value(const FrobeniusTheory& t, int genus);

// The H = 0 reduction of a Bar-Natan theory, as Khovanov constants over F2.
FrobeniusTheory reduce_h0(const FrobeniusTheory& t);

}  // namespace kcob
