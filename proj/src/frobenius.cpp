#include "kcob/frobenius.hpp"

#include <functional>
#include <sstream>

#include "kcob/errors.hpp"
#include "kcob/laurent.hpp"

namespace kcob {

namespace {

uint64_t clmul(uint64_t a, uint64_t b) {
  uint64_t r = 0;
  while (b) {
    int k = __builtin_ctzll(b);
    if (a && k > __builtin_clzll(a)) throw std::overflow_error("F2[H] degree exceeds 63");
    r ^= a << k;
    b &= b - 1;
  }
  return r;
}

}  // namespace

Scalar Ring::from_int(int64_t v) const {
  Scalar s;
  switch (tag) {
    case RingTag::Int: s.z = v; break;
    case RingTag::F2: s.z = v & 1; break;
    case RingTag::F2H: s.h = v & 1; break;
  }
  return s;
}

Scalar Ring::H() const {
  if (tag != RingTag::F2H) throw std::logic_error("H used outside F2[H]");
  return Scalar{0, 2};
}

Scalar Ring::monomial(int64_t c, int hpow) const {
  if (tag != RingTag::F2H) {
    if (hpow != 0) throw std::logic_error("H power outside F2[H]");
    return from_int(c);
  }
  if (hpow < 0 || hpow > 63) throw std::overflow_error("F2[H] degree out of range");
  return Scalar{0, (c & 1) ? (uint64_t{1} << hpow) : 0};
}

Scalar Ring::add(Scalar a, Scalar b) const {
  switch (tag) {
    case RingTag::Int: return Scalar{checked_add(a.z, b.z), 0};
    case RingTag::F2: return Scalar{(a.z ^ b.z) & 1, 0};
    case RingTag::F2H: return Scalar{0, a.h ^ b.h};
  }
  return {};
}

Scalar Ring::neg(Scalar a) const {
  if (tag == RingTag::Int) return Scalar{checked_mul(a.z, -1), 0};
  return a;
}

Scalar Ring::mul(Scalar a, Scalar b) const {
  switch (tag) {
    case RingTag::Int: return Scalar{checked_mul(a.z, b.z), 0};
    case RingTag::F2: return Scalar{a.z & b.z & 1, 0};
    case RingTag::F2H: return Scalar{0, clmul(a.h, b.h)};
  }
  return {};
}

int Ring::h_power(Scalar a) const {
  if (is_zero(a)) return -1;
  if (tag != RingTag::F2H) return 0;
  if (a.h & (a.h - 1)) return -2;
  return __builtin_ctzll(a.h);
}

Scalar Ring::at_h0(Scalar a) const {
  switch (tag) {
    case RingTag::Int: return Scalar{((a.z % 2) + 2) % 2, 0};
    case RingTag::F2: return a;
    case RingTag::F2H: return Scalar{static_cast<int64_t>(a.h & 1), 0};
  }
  return {};
}

std::string Ring::to_string(Scalar a) const {
  if (tag != RingTag::F2H) return std::to_string(a.z);
  if (a.h == 0) return "0";
  std::string out;
  for (int k = 63; k >= 0; --k) {
    if (!((a.h >> k) & 1)) continue;
    if (!out.empty()) out += " + ";
    out += k == 0 ? "1" : k == 1 ? "H" : "H^" + std::to_string(k);
  }
  return out;
}

std::string Ring::name() const {
  switch (tag) {
    case RingTag::Int: return "Z";
    case RingTag::F2: return "F2";
    case RingTag::F2H: return "F2[H]";
  }
  return "?";
}

std::string FrobeniusTheory::flag() const {
  if (bn()) return "bn-f2h";
  return ring.tag == RingTag::Int ? "kh-z" : "kh-f2";
}

FrobeniusTheory make_theory(TheoryName name, Ring ring) {
  if (name == TheoryName::BarNatan && ring.tag != RingTag::F2H)
    throw InputError("the Bar-Natan theory is only available over F2[H]");
  if (name == TheoryName::Khovanov && ring.tag == RingTag::F2H)
    throw InputError("the Khovanov theory is available over Z or F2, not F2[H]");
  FrobeniusTheory t;
  t.name = name;
  t.ring = ring;
  Scalar o = ring.one(), z = ring.zero();
  t.m[0] = {o, z};  // 1*1
  t.m[1] = {z, o};  // 1*x
  t.m[2] = {z, o};  // x*1
  t.m[3] = {z, name == TheoryName::BarNatan ? ring.H() : z};
  t.delta[0] = {name == TheoryName::BarNatan ? ring.H() : z, o, o, z};
  t.delta[1] = {z, z, z, o};
  t.iota = {o, z};
  t.eps = {z, o};
  return t;
}

FrobeniusTheory theory_from_flag(const std::string& flag) {
  if (flag == "kh-z") return make_theory(TheoryName::Khovanov, Ring{RingTag::Int});
  if (flag == "kh-f2") return make_theory(TheoryName::Khovanov, Ring{RingTag::F2});
  if (flag == "bn-f2h") return make_theory(TheoryName::BarNatan, Ring{RingTag::F2H});
  throw InputError("unknown theory '" + flag + "' (expected kh-z, kh-f2 or bn-f2h)");
}

AlgElem alg_basis(const FrobeniusTheory& t, int label) {
  AlgElem a{t.ring.zero(), t.ring.zero()};
  a[label] = t.ring.one();
  return a;
}

AlgElem multiply(const FrobeniusTheory& t, const AlgElem& a, const AlgElem& b) {
  const Ring& R = t.ring;
  AlgElem out{R.zero(), R.zero()};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Scalar c = R.mul(a[i], b[j]);
      if (R.is_zero(c)) continue;
      for (int l = 0; l < 2; ++l) out[l] = R.add(out[l], R.mul(c, t.m[2 * i + j][l]));
    }
  return out;
}

Alg2 comultiply(const FrobeniusTheory& t, const AlgElem& a) {
  const Ring& R = t.ring;
  Alg2 out{R.zero(), R.zero(), R.zero(), R.zero()};
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 4; ++k) out[k] = R.add(out[k], R.mul(a[i], t.delta[i][k]));
  return out;
}

AlgElem unit(const FrobeniusTheory& t) { return t.iota; }

Scalar counit(const FrobeniusTheory& t, const AlgElem& a) {
  const Ring& R = t.ring;
  return R.add(R.mul(a[0], t.eps[0]), R.mul(a[1], t.eps[1]));
}

AlgElem times_x(const FrobeniusTheory& t, const AlgElem& a) { return multiply(t, alg_basis(t, 1), a); }

int label_degree(int label) { return label == 0 ? 1 : -1; }

namespace {

// Tensor powers as dense coefficient vectors indexed by label words
// (bit i = label of factor i).
using Tens = std::vector<Scalar>;

struct AxiomChecker {
  const FrobeniusTheory& t;
  const Ring& R;
  AxiomReport rep;

  Tens zero(int k) const { return Tens(size_t{1} << k, R.zero()); }

  // Apply m to factors (i, i+1) of a k-fold tensor.
  Tens apply_m(const Tens& v, int k, int i) const {
    Tens out = zero(k - 1);
    for (size_t w = 0; w < v.size(); ++w) {
      if (R.is_zero(v[w])) continue;
      int a = (w >> i) & 1, b = (w >> (i + 1)) & 1;
      size_t lo = w & ((size_t{1} << i) - 1), hi = w >> (i + 2);
      for (int l = 0; l < 2; ++l) {
        Scalar c = R.mul(v[w], t.m[2 * a + b][l]);
        if (R.is_zero(c)) continue;
        size_t nw = lo | (size_t(l) << i) | (hi << (i + 1));
        out[nw] = R.add(out[nw], c);
      }
    }
    return out;
  }

  Tens apply_delta(const Tens& v, int k, int i) const {
    Tens out = zero(k + 1);
    for (size_t w = 0; w < v.size(); ++w) {
      if (R.is_zero(v[w])) continue;
      int a = (w >> i) & 1;
      size_t lo = w & ((size_t{1} << i) - 1), hi = w >> (i + 1);
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c) {
          Scalar s = R.mul(v[w], t.delta[a][2 * b + c]);
          if (R.is_zero(s)) continue;
          size_t nw = lo | (size_t(b) << i) | (size_t(c) << (i + 1)) | (hi << (i + 2));
          out[nw] = R.add(out[nw], s);
        }
    }
    return out;
  }

  Tens apply_eps(const Tens& v, int k, int i) const {
    Tens out = zero(k - 1);
    for (size_t w = 0; w < v.size(); ++w) {
      int a = (w >> i) & 1;
      Scalar s = R.mul(v[w], t.eps[a]);
      if (R.is_zero(s)) continue;
      size_t lo = w & ((size_t{1} << i) - 1), hi = w >> (i + 1);
      size_t nw = lo | (hi << i);
      out[nw] = R.add(out[nw], s);
    }
    return out;
  }

  Tens apply_iota(const Tens& v, int k, int i) const {
    Tens out = zero(k + 1);
    for (size_t w = 0; w < v.size(); ++w) {
      if (R.is_zero(v[w])) continue;
      size_t lo = w & ((size_t{1} << i) - 1), hi = w >> i;
      for (int l = 0; l < 2; ++l) {
        Scalar s = R.mul(v[w], t.iota[l]);
        if (R.is_zero(s)) continue;
        size_t nw = lo | (size_t(l) << i) | (hi << (i + 1));
        out[nw] = R.add(out[nw], s);
      }
    }
    return out;
  }

  Tens swap(const Tens& v) const {
    Tens out = zero(2);
    for (size_t w = 0; w < 4; ++w) out[((w & 1) << 1) | (w >> 1)] = v[w];
    return out;
  }

  Tens basis(int k, size_t w) const {
    Tens v = zero(k);
    v[w] = R.one();
    return v;
  }

  static std::string word(int k, size_t w) {
    std::string s;
    for (int i = 0; i < k; ++i) s += (i ? "(x)" : "") + std::string((w >> i) & 1 ? "x" : "1");
    return s;
  }

  void law(const std::string& name, int k, const std::function<Tens(const Tens&)>& lhs,
           const std::function<Tens(const Tens&)>& rhs) {
    rep.checked.push_back(name);
    if (!rep.pass) return;
    for (size_t w = 0; w < (size_t{1} << k); ++w) {
      Tens b = basis(k, w);
      if (lhs(b) != rhs(b)) {
        rep.pass = false;
        rep.failure = name + " fails on " + word(k, w);
        return;
      }
    }
  }

  void degrees() {
    rep.checked.push_back("degrees");
    auto deg_ok = [&](Scalar c, int expect_plus_label_deg, int label_deg) {
      int k = R.h_power(c);
      if (k == -1) return true;
      if (k == -2) return false;
      return label_deg - 2 * k == expect_plus_label_deg;
    };
    bool ok = true;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int l = 0; l < 2; ++l)
          ok &= deg_ok(t.m[2 * a + b][l], label_degree(a) + label_degree(b) - 1, label_degree(l));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < 2; ++c)
          ok &= deg_ok(t.delta[a][2 * b + c], label_degree(a) - 1, label_degree(b) + label_degree(c));
    for (int l = 0; l < 2; ++l) ok &= deg_ok(t.iota[l], 1, label_degree(l));
    for (int a = 0; a < 2; ++a) ok &= deg_ok(t.eps[a], label_degree(a) + 1, 0);
    if (!ok && rep.pass) {
      rep.pass = false;
      rep.failure = "a structure constant has the wrong q-degree";
    }
  }
};

}  // namespace

AxiomReport check_frobenius_axioms(const FrobeniusTheory& t) {
  AxiomChecker c{t, t.ring, {}};
  auto id = [](const Tens& v) { return v; };
  c.law("associativity m(m(x)id) = m(id(x)m)", 3, [&](const Tens& v) { return c.apply_m(c.apply_m(v, 3, 0), 2, 0); },
        [&](const Tens& v) { return c.apply_m(c.apply_m(v, 3, 1), 2, 0); });
  c.law("commutativity m = m o swap", 2, [&](const Tens& v) { return c.apply_m(v, 2, 0); },
        [&](const Tens& v) { return c.apply_m(c.swap(v), 2, 0); });
  c.law("unit m(iota(x)id) = id", 1, [&](const Tens& v) { return c.apply_m(c.apply_iota(v, 1, 0), 2, 0); }, id);
  c.law("coassociativity (D(x)id)D = (id(x)D)D", 1,
        [&](const Tens& v) { return c.apply_delta(c.apply_delta(v, 1, 0), 2, 0); },
        [&](const Tens& v) { return c.apply_delta(c.apply_delta(v, 1, 0), 2, 1); });
  c.law("cocommutativity swap o D = D", 1, [&](const Tens& v) { return c.swap(c.apply_delta(v, 1, 0)); },
        [&](const Tens& v) { return c.apply_delta(v, 1, 0); });
  c.law("counit (id(x)eps)D = id", 1, [&](const Tens& v) { return c.apply_eps(c.apply_delta(v, 1, 0), 2, 1); }, id);
  c.law("counit (eps(x)id)D = id", 1, [&](const Tens& v) { return c.apply_eps(c.apply_delta(v, 1, 0), 2, 0); }, id);
  c.law("Frobenius D o m = (m(x)id)(id(x)D)", 2, [&](const Tens& v) { return c.apply_delta(c.apply_m(v, 2, 0), 1, 0); },
        [&](const Tens& v) { return c.apply_m(c.apply_delta(v, 2, 1), 3, 0); });
  c.law("Frobenius D o m = (id(x)m)(D(x)id)", 2, [&](const Tens& v) { return c.apply_delta(c.apply_m(v, 2, 0), 1, 0); },
        [&](const Tens& v) { return c.apply_m(c.apply_delta(v, 2, 0), 3, 1); });
  c.degrees();
  return c.rep;
}

Scalar closed_genus_value(const FrobeniusTheory& t, int genus) {
  AlgElem a = unit(t);
  for (int g = 0; g < genus; ++g) {
    Alg2 d = comultiply(t, a);
    AlgElem s{t.ring.zero(), t.ring.zero()};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        AlgElem term = multiply(t, alg_basis(t, i), alg_basis(t, j));
        for (int l = 0; l < 2; ++l) s[l] = t.ring.add(s[l], t.ring.mul(d[2 * i + j], term[l]));
      }
    a = s;
  }
  return counit(t, a);
}

FrobeniusTheory reduce_h0(const FrobeniusTheory& t) {
  FrobeniusTheory r = t;
  r.name = TheoryName::Khovanov;
  r.ring = Ring{RingTag::F2};
  auto red = [&](Scalar s) { return t.ring.at_h0(s); };
  for (auto& e : r.m)
    for (auto& s : e) s = red(s);
  for (auto& e : r.delta)
    for (auto& s : e) s = red(s);
  for (auto& s : r.iota) s = red(s);
  for (auto& s : r.eps) s = red(s);
  return r;
}

}  // namespace kcob
