#include "kcob/khcomplex.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

namespace kcob {

// ---- elements ---------------------------------------------------------------

Scalar ChainComplex::entry(Gen g, uint64_t k) const {
  const Ring& R = theory.ring;
  if (!theory.bn()) return R.from_int(dval[k]);
  int hp = (qdeg[dtgt[k]] - qdeg[g]) / 2;
  return R.monomial(dval[k], hp);
}

void add_term(ChainElement& e, Gen g, Scalar c, const Ring& R) {
  if (R.is_zero(c)) return;
  auto it = e.find(g);
  if (it == e.end()) {
    e.emplace(g, c);
    return;
  }
  it->second = R.add(it->second, c);
  if (R.is_zero(it->second)) e.erase(it);
}

ChainElement add(const ChainElement& a, const ChainElement& b, const Ring& R) {
  ChainElement out = a;
  for (auto& [g, c] : b) add_term(out, g, c, R);
  return out;
}

ChainElement scale(const ChainElement& a, Scalar c, const Ring& R) {
  ChainElement out;
  for (auto& [g, s] : a) add_term(out, g, R.mul(s, c), R);
  return out;
}

ChainElement apply_d(const ChainComplex& cc, const ChainElement& e) {
  const Ring& R = cc.theory.ring;
  ChainElement out;
  for (auto& [g, s] : e)
    for (uint64_t k = cc.dptr[g]; k < cc.dptr[g + 1]; ++k) add_term(out, cc.dtgt[k], R.mul(s, cc.entry(g, k)), R);
  return out;
}

bool is_zero(const ChainElement& e) { return e.empty(); }

// ---- cube complex ----------------------------------------------------------

namespace {

Vertex bit_reverse(uint64_t r, int n) {
  Vertex v = 0;
  for (int i = 0; i < n; ++i)
    if ((r >> i) & 1) v |= Vertex{1} << (n - 1 - i);
  return v;
}

}  // namespace

uint64_t count_generators(const LinkDiagram& d) {
  int n = d.size();
  if (n > kMaxCrossings) return UINT64_MAX;
  std::vector<int> tmp;
  uint64_t total = 0;
  for (Vertex v = 0; v < (Vertex{1} << n); ++v) {
    int c = compute_circles(d, v, tmp);
    if (c >= 63) return UINT64_MAX;
    total += uint64_t{1} << c;
    if (total > (uint64_t{1} << 40)) return total;
  }
  return total;
}

int GradedComplex::circle_of(Vertex v, int arc_label) const {
  int idx = diagram.arc_index(arc_label);
  if (idx < 0) throw InputError("arc " + std::to_string(arc_label) + " not in diagram");
  return circle_of_index(v, idx);
}

std::pair<Vertex, uint64_t> GradedComplex::decode(Gen g) const {
  auto it = std::upper_bound(order_offset_.begin(), order_offset_.end(), uint64_t{g});
  size_t r = static_cast<size_t>(it - order_offset_.begin()) - 1;
  Vertex v = order_[r];
  return {v, g - offset_[v]};
}

int GradedComplex::h_of(Vertex v) const { return __builtin_popcountll(v) - diagram.n_minus(); }

int GradedComplex::q_of(Vertex v, uint64_t labels) const {
  int c = ncirc_[v];
  int nx = __builtin_popcountll(labels);
  return (c - 2 * nx) + h_of(v) + diagram.n_plus() - diagram.n_minus();
}

Gen GradedComplex::gen_from_words(const std::string& vword, const std::string& lword) const {
  if (static_cast<int>(vword.size()) != n)
    throw InputError("vertex word '" + vword + "' has length " + std::to_string(vword.size()) + ", expected " +
                     std::to_string(n));
  Vertex v = vertex_from_string(vword);
  if (static_cast<int>(lword.size()) != ncirc_[v])
    throw InputError("label word '" + lword + "' has length " + std::to_string(lword.size()) + ", vertex " + vword +
                     " has " + std::to_string(ncirc_[v]) + " circles");
  uint64_t L = 0;
  for (size_t i = 0; i < lword.size(); ++i) {
    if (lword[i] == 'x') L |= uint64_t{1} << i;
    else if (lword[i] != '1') throw InputError("label letters must be 1 or x, got '" + lword + "'");
  }
  return gen(v, L);
}

std::string GradedComplex::vertex_word(Gen g) const { return vertex_to_string(decode(g).first, n); }

std::string GradedComplex::label_word(Gen g) const {
  auto [v, L] = decode(g);
  std::string s;
  for (int i = 0; i < ncirc_[v]; ++i) s += ((L >> i) & 1) ? 'x' : '1';
  return s;
}

GradedComplex build_complex(const LinkDiagram& d, const FrobeniusTheory& t, uint64_t budget) {
  GradedComplex c;
  c.diagram = d;
  c.theory = t;
  c.cc.theory = t;
  const int n = d.size();
  c.n = n;
  if (n > 40 || (uint64_t{1} << n) > budget)
    throw BudgetError("diagram has " + std::to_string(n) + " crossings; the cube exceeds the generator budget of " +
                      std::to_string(budget) + " (raise it with --budget)");
  const uint64_t nv = uint64_t{1} << n;
  c.arcs_ = d.arc_count();
  c.ncirc_.resize(nv);
  c.circle_of_.resize(nv * c.arcs_);
  std::vector<int> tmp;
  uint64_t total = 0;
  for (Vertex v = 0; v < nv; ++v) {
    int k = compute_circles(d, v, tmp);
    if (k >= 40) throw BudgetError("smoothing with " + std::to_string(k) + " circles exceeds the generator budget");
    c.ncirc_[v] = static_cast<uint8_t>(k);
    for (int a = 0; a < c.arcs_; ++a) c.circle_of_[v * c.arcs_ + a] = static_cast<int16_t>(tmp[a]);
    total += uint64_t{1} << k;
    if (total > budget)
      throw BudgetError("complex exceeds the generator budget of " + std::to_string(budget) +
                        " generators (raise it with --budget)");
  }
  c.offset_.assign(nv, 0);
  c.order_.resize(nv);
  c.order_offset_.resize(nv);
  uint64_t off = 0;
  for (uint64_t r = 0; r < nv; ++r) {
    Vertex v = bit_reverse(r, n);
    c.order_[r] = v;
    c.order_offset_[r] = off;
    c.offset_[v] = off;
    off += uint64_t{1} << c.ncirc_[v];
  }
  ChainComplex& cc = c.cc;
  cc.hdeg.resize(total);
  cc.qdeg.resize(total);
  for (uint64_t r = 0; r < nv; ++r) {
    Vertex v = c.order_[r];
    for (uint64_t L = 0; L < (uint64_t{1} << c.ncirc_[v]); ++L) {
      Gen g = c.gen(v, L);
      cc.hdeg[g] = c.h_of(v);
      cc.qdeg[g] = c.q_of(v, L);
    }
  }
  const Ring& R = t.ring;
  auto stored = [&](Scalar s, int sign) -> int64_t {
    if (R.tag == RingTag::Int) return sign * s.z;
    return 1;
  };
  cc.dptr.assign(1, 0);
  cc.dptr.reserve(total + 1);
  // per vertex and crossing: target circle of each source circle
  std::vector<std::vector<int>> cmap(n);
  std::vector<int> kind(n), ca(n), cb(n), tc1(n), tc2(n);
  for (uint64_t r = 0; r < nv; ++r) {
    Vertex v = c.order_[r];
    const int kv = c.ncirc_[v];
    for (int i = 0; i < n; ++i) {
      if ((v >> i) & 1) continue;
      Vertex w = v | (Vertex{1} << i);
      auto& m = cmap[i];
      m.assign(kv, -1);
      ca[i] = cb[i] = tc1[i] = tc2[i] = -1;
      for (int a = 0; a < c.arcs_; ++a) {
        int s = c.circle_of_[v * c.arcs_ + a], tt = c.circle_of_[w * c.arcs_ + a];
        if (m[s] < 0) m[s] = tt;
        else if (m[s] != tt) {
          ca[i] = s;
          tc1[i] = std::min(m[s], tt);
          tc2[i] = std::max(m[s], tt);
        }
      }
      if (c.ncirc_[w] < kv) {
        kind[i] = 0;  // merge
        std::vector<int> seen(c.ncirc_[w], -1);
        for (int s = 0; s < kv; ++s) {
          if (seen[m[s]] >= 0) {
            ca[i] = seen[m[s]];
            cb[i] = s;
          }
          seen[m[s]] = s;
        }
      } else {
        kind[i] = 1;
      }
    }
    for (uint64_t L = 0; L < (uint64_t{1} << kv); ++L) {
      for (int i = 0; i < n; ++i) {
        if ((v >> i) & 1) continue;
        Vertex w = v | (Vertex{1} << i);
        int sign = (__builtin_popcountll(v & ((Vertex{1} << i) - 1)) & 1) ? -1 : 1;
        const auto& m = cmap[i];
        if (kind[i] == 0) {
          uint64_t T = 0;
          for (int s = 0; s < kv; ++s)
            if (s != ca[i] && s != cb[i] && ((L >> s) & 1)) T |= uint64_t{1} << m[s];
          int la = (L >> ca[i]) & 1, lb = (L >> cb[i]) & 1, tcirc = m[ca[i]];
          const AlgElem& prod = t.m[2 * la + lb];
          for (int l = 0; l < 2; ++l) {
            if (R.is_zero(prod[l])) continue;
            cc.dtgt.push_back(c.gen(w, T | (uint64_t(l) << tcirc)));
            cc.dval.push_back(stored(prod[l], sign));
          }
        } else {
          uint64_t T = 0;
          for (int s = 0; s < kv; ++s)
            if (s != ca[i] && ((L >> s) & 1)) T |= uint64_t{1} << m[s];
          int la = (L >> ca[i]) & 1;
          const Alg2& cop = t.delta[la];
          for (int b = 0; b < 2; ++b)
            for (int e = 0; e < 2; ++e) {
              Scalar s = cop[2 * b + e];
              if (R.is_zero(s)) continue;
              cc.dtgt.push_back(c.gen(w, T | (uint64_t(b) << tc1[i]) | (uint64_t(e) << tc2[i])));
              cc.dval.push_back(stored(s, sign));
            }
        }
      }
      cc.dptr.push_back(cc.dtgt.size());
    }
  }
  // generators were appended in generator order, so dptr lines up with Gen ids
  return c;
}

bool check_d_squared(const ChainComplex& cc) {
  for (Gen g = 0; g < cc.size(); ++g) {
    ChainElement e{{g, cc.theory.ring.one()}};
    if (!apply_d(cc, apply_d(cc, e)).empty()) return false;
  }
  return true;
}

bool check_faces_anticommute(const GradedComplex& c) {
  const ChainComplex& cc = c.cc;
  const Ring& R = cc.theory.ring;
  for (Gen g = 0; g < cc.size(); ++g) {
    auto [v, L] = c.decode(g);
    (void)L;
    // image grouped by the crossing changed
    std::map<int, ChainElement> first;
    for (uint64_t k = cc.dptr[g]; k < cc.dptr[g + 1]; ++k) {
      Vertex w = c.decode(cc.dtgt[k]).first;
      int i = __builtin_ctzll(w ^ v);
      add_term(first[i], cc.dtgt[k], cc.entry(g, k), R);
    }
    for (int i = 0; i < c.n; ++i)
      for (int j = i + 1; j < c.n; ++j) {
        if (((v >> i) & 1) || ((v >> j) & 1)) continue;
        Vertex target = v | (Vertex{1} << i) | (Vertex{1} << j);
        ChainElement sum;
        for (int a : {i, j}) {
          ChainElement img = apply_d(cc, first[a]);
          for (auto& [h, s] : img)
            if (c.decode(h).first == target) add_term(sum, h, s, R);
        }
        if (!sum.empty()) return false;
      }
  }
  return true;
}

// ---- homology ---------------------------------------------------------------

int64_t HomologyModule::total_free() const {
  int64_t t = 0;
  for (auto& [k, g] : groups) t += g.free;
  return t;
}

std::string HomologyModule::poincare() const {
  std::ostringstream os;
  bool first = true;
  for (auto& [k, g] : groups) {
    auto term = [&](const std::string& coef) {
      if (!first) os << " + ";
      first = false;
      os << coef << "t^" << g.h << "q^" << g.q;
    };
    if (g.free) term(g.free == 1 ? "" : std::to_string(g.free) + "*");
    for (auto& t : g.torsion) term(theory == "bn-f2h" ? "[H^" + t + "]" : "[Z/" + t + "]");
  }
  return first ? "0" : os.str();
}

std::string HomologyModule::to_text() const {
  std::ostringstream os;
  os << "h\tq\tfree\ttorsion\n";
  for (auto& [k, g] : groups) {
    os << g.h << "\t" << g.q << "\t" << g.free << "\t";
    for (size_t i = 0; i < g.torsion.size(); ++i) os << (i ? "," : "") << g.torsion[i];
    os << "\n";
  }
  return os.str();
}

namespace {

std::map<std::pair<int, int>, std::vector<Gen>> blocks(const ChainComplex& cc) {
  std::map<std::pair<int, int>, std::vector<Gen>> b;
  for (Gen g = 0; g < cc.size(); ++g) b[{cc.hdeg[g], cc.qdeg[g]}].push_back(g);
  return b;
}

}  // namespace

namespace {

// Z/n as a sum of Z/p^k.
std::vector<mpz_class> prime_power_parts(mpz_class n) {
  std::vector<mpz_class> out;
  for (mpz_class p = 2; p * p <= n; ++p) {
    mpz_class pk = 1;
    while (n % p == 0) {
      n /= p;
      pk *= p;
    }
    if (pk > 1) out.push_back(pk);
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

HomologyModule homology(const ChainComplex& cc) {
  if (cc.theory.bn()) return BNHomology(cc).module();
  HomologyModule M;
  M.theory = cc.theory.flag();
  const int mod = cc.theory.ring.tag == RingTag::Int ? 0 : 2;
  auto B = blocks(cc);
  std::map<std::pair<int, int>, RankTorsion> out;  // rank/torsion of d leaving (h,q)
  for (auto& [key, gens] : B) out[key];
  // blocks are independent; each worker writes only its own map slot
  std::vector<std::pair<const std::pair<int, int>, std::vector<Gen>>*> work;
  for (auto& kv : B) work.push_back(&kv);
  std::atomic<size_t> next{0};
  auto reduce_block = [&](const std::pair<int, int>& key, const std::vector<Gen>& gens) {
    auto tgt_it = B.find({key.first + 1, key.second});
    SparseColumns m;
    if (tgt_it != B.end()) {
      m.nrows = tgt_it->second.size();
      const auto& tg = tgt_it->second;
      m.cols.resize(gens.size());
      for (size_t j = 0; j < gens.size(); ++j) {
        Gen g = gens[j];
        std::map<uint32_t, int64_t> col;
        for (uint64_t k = cc.dptr[g]; k < cc.dptr[g + 1]; ++k) {
          auto pos = std::lower_bound(tg.begin(), tg.end(), cc.dtgt[k]) - tg.begin();
          col[static_cast<uint32_t>(pos)] += cc.dval[k];
        }
        for (auto& [r, v] : col)
          if (v) m.cols[j].push_back({r, v});
      }
      out.at(key) = sparse_rank_torsion(std::move(m), mod);
    }
  };
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (size_t i; (i = next++) < work.size();) {
      try {
        reduce_block(work[i]->first, work[i]->second);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  size_t nthreads = std::min<size_t>(std::max(1u, std::thread::hardware_concurrency()), work.size());
  if (cc.size() < 4096) nthreads = 1;
  std::vector<std::thread> pool;
  for (size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  for (auto& [key, gens] : B) {
    HomologyGroup hg;
    hg.h = key.first;
    hg.q = key.second;
    int64_t r_out = static_cast<int64_t>(out[key].rank);
    int64_t r_in = 0;
    auto in = out.find({key.first - 1, key.second});
    if (in != out.end()) {
      r_in = static_cast<int64_t>(in->second.rank);
      for (auto& t : in->second.torsion)
        for (auto& pp : prime_power_parts(t)) hg.torsion.push_back(pp.get_str());
      std::sort(hg.torsion.begin(), hg.torsion.end(),
                [](const std::string& a, const std::string& b) { return mpz_class(a) < mpz_class(b); });
    }
    hg.free = static_cast<int64_t>(gens.size()) - r_out - r_in;
    if (hg.free || !hg.torsion.empty()) M.groups[key] = hg;
  }
  return M;
}

bool is_cycle(const GradedComplex& c, Gen g) {
  if (!c.theory.bn()) {
    auto [v, L] = c.decode(g);
    bool crit = true;
    for (int i = 0; i < c.n && crit; ++i) {
      if ((v >> i) & 1) continue;
      Vertex w = v | (Vertex{1} << i);
      if (c.circles(w) >= c.circles(v)) {
        crit = false;
        break;
      }
      // the two merged circles are the ones through the crossing's slots
      const Crossing& x = c.diagram.crossings()[i];
      int s1 = c.circle_of(v, x.arc[0]), s2 = c.circle_of(v, x.arc[2]);
      if (!((L >> s1) & 1) || !((L >> s2) & 1)) crit = false;
    }
    return crit;
  }
  ChainElement e{{g, c.theory.ring.one()}};
  return apply_d(c.cc, e).empty();
}

Laurent graded_euler(const ChainComplex& cc) {
  Laurent p;
  for (Gen g = 0; g < cc.size(); ++g) p.add_term(cc.qdeg[g], (cc.hdeg[g] & 1) ? -1 : 1);
  return p;
}

ChainComplex dualize(const ChainComplex& cc) {
  ChainComplex d;
  d.theory = cc.theory;
  const size_t N = cc.size();
  d.hdeg.resize(N);
  d.qdeg.resize(N);
  for (size_t g = 0; g < N; ++g) {
    d.hdeg[g] = -cc.hdeg[g];
    d.qdeg[g] = -cc.qdeg[g];
  }
  std::vector<std::vector<std::pair<Gen, int64_t>>> cols(N);
  for (Gen g = 0; g < N; ++g)
    for (uint64_t k = cc.dptr[g]; k < cc.dptr[g + 1]; ++k) cols[cc.dtgt[k]].push_back({g, cc.dval[k]});
  d.dptr.assign(1, 0);
  for (size_t g = 0; g < N; ++g) {
    for (auto& [t, v] : cols[g]) {
      d.dtgt.push_back(t);
      d.dval.push_back(v);
    }
    d.dptr.push_back(d.dtgt.size());
  }
  return d;
}

ChainComplex quotient_to_kh(const ChainComplex& cc) {
  if (!cc.theory.bn()) throw InputError("quotient_to_kh needs a Bar-Natan complex");
  ChainComplex k;
  k.theory = make_theory(TheoryName::Khovanov, Ring{RingTag::F2});
  k.hdeg = cc.hdeg;
  k.qdeg = cc.qdeg;
  k.dptr.assign(1, 0);
  for (Gen g = 0; g < cc.size(); ++g) {
    for (uint64_t i = cc.dptr[g]; i < cc.dptr[g + 1]; ++i)
      if (cc.qdeg[cc.dtgt[i]] == cc.qdeg[g] && (cc.dval[i] & 1)) {
        k.dtgt.push_back(cc.dtgt[i]);
        k.dval.push_back(1);
      }
    k.dptr.push_back(k.dtgt.size());
  }
  return k;
}

ChainElement project_h0(const ChainElement& e, const Ring& from) {
  Ring F2{RingTag::F2};
  ChainElement out;
  for (auto& [g, s] : e) add_term(out, g, from.at_h0(s), F2);
  return out;
}

// ---- Khovanov block classes --------------------------------------------------

BlockHomology::BlockHomology(const ChainComplex& cc, int h, int q) : cc_(&cc), h_(h), q_(q) {
  if (cc.theory.bn()) throw std::logic_error("BlockHomology is for Khovanov theories");
  mod_ = cc.theory.ring.tag == RingTag::Int ? 0 : 2;
  std::vector<Gen> below, above;
  for (Gen g = 0; g < cc.size(); ++g) {
    if (cc.qdeg[g] != q) continue;
    if (cc.hdeg[g] == h) gens_.push_back(g);
    else if (cc.hdeg[g] == h - 1) below.push_back(g);
    else if (cc.hdeg[g] == h + 1) above.push_back(g);
  }
  for (size_t i = 0; i < gens_.size(); ++i) pos_[gens_[i]] = i;
  std::map<Gen, size_t> apos;
  for (size_t i = 0; i < above.size(); ++i) apos[above[i]] = i;
  const size_t n = gens_.size();
  ZMat B = zmat(above.size(), n);
  for (size_t j = 0; j < n; ++j) {
    Gen g = gens_[j];
    for (uint64_t k = cc.dptr[g]; k < cc.dptr[g + 1]; ++k) B[apos.at(cc.dtgt[k])][j] += static_cast<long>(cc.dval[k]);
  }
  SNF sb = smith_normal_form(std::move(B), n, mod_, true);
  rB_ = sb.rank();
  Vinv_ = std::move(sb.Vinv);
  const size_t k = n - rB_;
  // boundary coordinates in the kernel basis
  ZMat A = zmat(n, below.size());
  for (size_t j = 0; j < below.size(); ++j) {
    Gen g = below[j];
    for (uint64_t e = cc.dptr[g]; e < cc.dptr[g + 1]; ++e) {
      auto it = pos_.find(cc.dtgt[e]);
      if (it != pos_.end()) A[it->second][j] += static_cast<long>(cc.dval[e]);
    }
  }
  ZMat M = zmat(k, below.size());
  for (size_t i = 0; i < k; ++i)
    for (size_t j = 0; j < below.size(); ++j) {
      mpz_class s = 0;
      for (size_t l = 0; l < n; ++l)
        if (Vinv_[rB_ + i][l] != 0 && A[l][j] != 0) s += Vinv_[rB_ + i][l] * A[l][j];
      if (mod_) s = ((s % 2) + 2) % 2;
      M[i][j] = s;
    }
  SNF sm = smith_normal_form(std::move(M), below.size(), mod_, true);
  P_ = std::move(sm.U);
  trivial_ = 0;
  for (auto& d : sm.diag) {
    if (d == 1) ++trivial_;
    else orders_.push_back(d);
  }
  for (size_t i = sm.rank(); i < k; ++i) orders_.push_back(0);
  // representatives: V[:, rB:] * Pinv[:, i]
  const Ring& R = cc.theory.ring;
  for (size_t s = trivial_; s < k; ++s) {
    ChainElement rep;
    for (size_t l = 0; l < n; ++l) {
      mpz_class val = 0;
      for (size_t i = 0; i < k; ++i)
        if (sb.V[l][rB_ + i] != 0 && sm.Uinv[i][s] != 0) val += sb.V[l][rB_ + i] * sm.Uinv[i][s];
      if (mod_) val = ((val % 2) + 2) % 2;
      if (val != 0) add_term(rep, gens_[l], R.from_int(val.get_si()), R);
    }
    reps_.push_back(rep);
  }
}

std::vector<mpz_class> BlockHomology::coords(const ChainElement& z) const {
  const size_t n = gens_.size();
  std::vector<mpz_class> zv(n, 0);
  for (auto& [g, s] : z) {
    auto it = pos_.find(g);
    if (it == pos_.end()) throw InputError("element does not lie in bigrading (" + std::to_string(h_) + "," +
                                           std::to_string(q_) + ")");
    zv[it->second] = s.z;
  }
  std::vector<mpz_class> y(n, 0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t l = 0; l < n; ++l)
      if (Vinv_[i][l] != 0 && zv[l] != 0) y[i] += Vinv_[i][l] * zv[l];
    if (mod_) y[i] = ((y[i] % 2) + 2) % 2;
  }
  for (size_t i = 0; i < rB_; ++i)
    if (y[i] != 0) throw InputError("element is not a cycle");
  const size_t k = n - rB_;
  std::vector<mpz_class> out;
  for (size_t s = trivial_; s < k; ++s) {
    mpz_class v = 0;
    for (size_t i = 0; i < k; ++i)
      if (P_[s][i] != 0) v += P_[s][i] * y[rB_ + i];
    mpz_class ord = orders_[s - trivial_];
    if (mod_) v = ((v % 2) + 2) % 2;
    if (ord != 0) {
      v %= ord;
      if (v < 0) v += ord;
    }
    out.push_back(v);
  }
  return out;
}

bool BlockHomology::is_zero_class(const ChainElement& z) const {
  for (auto& c : coords(z))
    if (c != 0) return false;
  return true;
}

// ---- Bar-Natan homology -------------------------------------------------------

BNHomology::BNHomology(const ChainComplex& cc) : cc_(&cc) {
  if (!cc.theory.bn()) throw std::logic_error("BNHomology needs a Bar-Natan complex");
  module_.theory = "bn-f2h";
  for (Gen g = 0; g < cc.size(); ++g) levels_[cc.hdeg[g]].gens.push_back(g);
  for (auto& [h, L] : levels_) {
    std::stable_sort(L.gens.begin(), L.gens.end(), [&](Gen a, Gen b) { return cc.qdeg[a] > cc.qdeg[b]; });
    for (size_t i = 0; i < L.gens.size(); ++i) L.pos[L.gens[i]] = i;
  }
  // reduce d : level h -> level h+1; zero columns give cycles
  std::map<int, std::vector<std::vector<size_t>>> cycles;  // V columns of zero columns, per level
  std::map<int, std::vector<size_t>> cycle_pos;
  for (auto& [h, L] : levels_) {
    auto nxt = levels_.find(h + 1);
    std::vector<std::vector<size_t>> V(L.gens.size());
    std::vector<std::vector<size_t>> Rcols(L.gens.size());
    for (size_t j = 0; j < L.gens.size(); ++j) {
      Gen g = L.gens[j];
      std::vector<size_t> col;
      if (nxt != levels_.end()) {
        for (uint64_t k = cc.dptr[g]; k < cc.dptr[g + 1]; ++k)
          if (cc.dval[k] & 1) col.push_back(nxt->second.pos.at(cc.dtgt[k]));
        std::sort(col.begin(), col.end());
        // cancel duplicates mod 2
        std::vector<size_t> c2;
        for (size_t i = 0; i < col.size();) {
          size_t k = i;
          while (k < col.size() && col[k] == col[i]) ++k;
          if ((k - i) & 1) c2.push_back(col[i]);
          i = k;
        }
        col.swap(c2);
      }
      std::vector<size_t> v{j};
      auto sym = [](std::vector<size_t>& a, const std::vector<size_t>& b) {
        std::vector<size_t> r;
        std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
        a.swap(r);
      };
      while (!col.empty()) {
        auto it = nxt->second.pivot.find(col.back());
        if (it == nxt->second.pivot.end()) break;
        sym(col, it->second.first);
        // V of the pivot column; stored alongside in Rcols via index
        size_t pj = static_cast<size_t>(it->second.second);
        sym(v, V[pj]);
      }
      V[j] = v;
      if (col.empty()) {
        cycles[h].push_back(v);
        cycle_pos[h].push_back(j);
      } else {
        // second member records the column index for V lookup; q is recomputed
        nxt->second.pivot[col.back()] = {col, static_cast<int>(j)};
      }
      Rcols[j] = col;
    }
  }
  // pairing and towers
  for (auto& [h, L] : levels_) {
    auto prev = levels_.find(h - 1);
    const auto& cyc = cycles[h];
    const auto& cp = cycle_pos[h];
    for (size_t i = 0; i < cyc.size(); ++i) {
      size_t j = cp[i];
      Gen g = L.gens[j];
      int qj = cc.qdeg[g];
      auto pit = L.pivot.find(j);
      if (pit != L.pivot.end()) {
        Gen b = prev->second.gens[static_cast<size_t>(pit->second.second)];
        int k = (qj - cc.qdeg[b]) / 2;
        if (k > 0) {
          bars_.push_back({h, qj, k});
          auto& grp = module_.groups[{h, qj}];
          grp.h = h;
          grp.q = qj;
          grp.torsion.push_back(std::to_string(k));
        }
      } else {
        auto& grp = module_.groups[{h, qj}];
        grp.h = h;
        grp.q = qj;
        grp.free += 1;
        ChainElement rep;
        const Ring& R = cc.theory.ring;
        for (size_t p : cyc[i]) {
          Gen t = L.gens[p];
          add_term(rep, t, R.monomial(1, (cc.qdeg[t] - qj) / 2), R);
        }
        towers_.push_back({{h, qj}, rep});
      }
    }
  }
  for (auto& [k, g] : module_.groups) std::sort(g.torsion.begin(), g.torsion.end());
}

int BNHomology::torsion_order(const ChainElement& z) const {
  if (z.empty()) return 0;
  const ChainComplex& cc = *cc_;
  const Ring& R = cc.theory.ring;
  Gen g0 = z.begin()->first;
  int h = cc.hdeg[g0];
  int qz = cc.qdeg[g0] - 2 * R.h_power(z.begin()->second);
  auto lit = levels_.find(h);
  std::vector<size_t> col;
  for (auto& [g, s] : z) {
    if (cc.hdeg[g] != h) throw InputError("element is not homogeneous in h");
    int p = R.h_power(s);
    if (p < 0 || cc.qdeg[g] - 2 * p != qz) throw InputError("element is not q-homogeneous");
    col.push_back(lit->second.pos.at(g));
  }
  std::sort(col.begin(), col.end());
  auto prev = levels_.find(h - 1);
  int pstar = qz;
  while (!col.empty()) {
    auto it = lit->second.pivot.find(col.back());
    if (it == lit->second.pivot.end()) return -1;
    std::vector<size_t> r;
    std::set_symmetric_difference(col.begin(), col.end(), it->second.first.begin(), it->second.first.end(),
                                  std::back_inserter(r));
    col.swap(r);
    Gen b = prev->second.gens[static_cast<size_t>(it->second.second)];
    pstar = std::min(pstar, cc.qdeg[b]);
  }
  return (qz - pstar) / 2;
}

// ---- element I/O ---------------------------------------------------------------

namespace {

Scalar parse_coeff(const nlohmann::json& j, const Ring& R) {
  if (j.is_number_integer()) return R.from_int(j.get<int64_t>());
  if (!j.is_string()) throw InputError("coefficient must be an integer or a string");
  std::string s = j.get<std::string>();
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (R.tag != RingTag::F2H) {
    try {
      return R.from_int(std::stoll(s));
    } catch (...) {
      throw InputError("bad coefficient '" + s + "'");
    }
  }
  Scalar out;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, '+')) {
    if (term == "1") out = R.add(out, R.one());
    else if (term == "0") continue;
    else if (term == "H") out = R.add(out, R.H());
    else if (term.rfind("H^", 0) == 0) {
      int k;
      try {
        k = std::stoi(term.substr(2));
      } catch (...) {
        throw InputError("bad coefficient term '" + term + "'");
      }
      out = R.add(out, R.monomial(1, k));
    } else {
      throw InputError("bad coefficient term '" + term + "'");
    }
  }
  return out;
}

}  // namespace

ChainElement parse_element(const GradedComplex& c, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw InputError(std::string("class file is not valid JSON: ") + e.what());
  }
  if (!j.is_array()) throw InputError("class file must be a JSON list of [vertex, labels, coefficient]");
  const Ring& R = c.theory.ring;
  ChainElement out;
  for (auto& t : j) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_string() || !t[1].is_string())
      throw InputError("each class term must be [vertex word, label word, coefficient]");
    std::string vw = t[0].get<std::string>(), lw = t[1].get<std::string>();
    Scalar coeff = parse_coeff(t[2], R);
    // expand y = x + H*1
    std::vector<size_t> ys;
    for (size_t i = 0; i < lw.size(); ++i)
      if (lw[i] == 'y') {
        if (!c.theory.bn()) throw InputError("label y is only meaningful in the Bar-Natan theory");
        ys.push_back(i);
      }
    for (uint64_t mask = 0; mask < (uint64_t{1} << ys.size()); ++mask) {
      std::string w = lw;
      int hp = 0;
      for (size_t k = 0; k < ys.size(); ++k) {
        bool one = (mask >> k) & 1;
        w[ys[k]] = one ? '1' : 'x';
        hp += one;
      }
      Scalar s = R.mul(coeff, R.tag == RingTag::F2H ? R.monomial(1, hp) : R.one());
      add_term(out, c.gen_from_words(vw, w), s, R);
    }
  }
  return out;
}

std::string element_to_string(const GradedComplex& c, const ChainElement& e) {
  std::ostringstream os;
  bool first = true;
  for (auto& [g, s] : e) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.theory.ring.to_string(s) << ")" << c.vertex_word(g) << ":" << c.label_word(g);
  }
  return first ? "0" : os.str();
}

}  // namespace kcob
