#pragma once
// Sparse bivariate polynomials in s, t with the weight grading wt(s) = 2,
// wt(t) = 3, over ZZ or F_p, and polynomials in x (wt(x) = 1) over that ring
// with a y-parity flag. The grading makes every homogeneous polynomial a
// univariate in u = s^3/t^2 times a monomial, which is how gcd and
// squarefreeness are decided.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ecpn/fq.hpp"
#include "ecpn/unipoly.hpp"

namespace ecpn {

struct divide_error : std::runtime_error {
  std::string remainder;  // serialized remainder of the failed division
  divide_error(const std::string& msg, std::string rem)
      : std::runtime_error(msg), remainder(std::move(rem)) {}
};

struct ZRing {
  using C = BigInt;
  bool same(const ZRing&) const { return true; }
  bool is_zero(const C& a) const { return a.is_zero(); }
  C add(const C& a, const C& b) const { return a + b; }
  C sub(const C& a, const C& b) const { return a - b; }
  C neg(const C& a) const { return -a; }
  C mul(const C& a, const C& b) const { return a * b; }
  bool div(const C& a, const C& b, C& q) const {
    q = a / b;
    return q * b == a;
  }
  std::string str(const C& a) const { return a.str(); }
};

struct FpRing {
  uint64_t p = 0;
  using C = uint64_t;
  bool same(const FpRing& o) const { return p == o.p; }
  bool is_zero(C a) const { return a == 0; }
  C add(C a, C b) const { return fp_add(a, b, p); }
  C sub(C a, C b) const { return fp_sub(a, b, p); }
  C neg(C a) const { return fp_neg(a, p); }
  C mul(C a, C b) const { return fp_mul(a, b, p); }
  bool div(C a, C b, C& q) const {
    q = fp_mul(a, fp_inv(b, p), p);
    return true;
  }
  std::string str(C a) const { return std::to_string(a); }
};

// exponent key (exp_s, exp_t); map order = lex with s most significant, so
// rbegin() is the leading term
using BvKey = std::pair<unsigned, unsigned>;

template <class R>
struct WeightedBivar {
  R ring;
  std::map<BvKey, typename R::C> terms;  // no zero coefficients stored

  explicit WeightedBivar(R r = {}) : ring(r) {}
  bool is_zero() const { return terms.empty(); }
  void normalize() {
    for (auto it = terms.begin(); it != terms.end();)
      it = ring.is_zero(it->second) ? terms.erase(it) : std::next(it);
  }
};

using ZBivar = WeightedBivar<ZRing>;
using PBivar = WeightedBivar<FpRing>;

inline long monomial_weight(const BvKey& k) { return 2l * k.first + 3l * k.second; }

// residues (es, et) of a weight: the unique es in {0,1,2}, et in {0,1} with
// 2 es + 3 et = w (mod 6)
inline std::pair<unsigned, unsigned> weight_residues(long w) {
  return {static_cast<unsigned>((2 * (w % 3)) % 3), static_cast<unsigned>(w % 2)};
}

template <class R>
WeightedBivar<R> bv_const(R ring, typename R::C v) {
  WeightedBivar<R> r(ring);
  if (!ring.is_zero(v)) r.terms[{0, 0}] = std::move(v);
  return r;
}

template <class R>
WeightedBivar<R> bv_term(R ring, typename R::C v, unsigned es, unsigned et) {
  WeightedBivar<R> r(ring);
  if (!ring.is_zero(v)) r.terms[{es, et}] = std::move(v);
  return r;
}

template <class R>
bool bv_eq(const WeightedBivar<R>& a, const WeightedBivar<R>& b) {
  return a.terms == b.terms;
}

template <class R>
WeightedBivar<R> bv_add(const WeightedBivar<R>& a, const WeightedBivar<R>& b) {
  if (!a.ring.same(b.ring)) throw std::invalid_argument("bivar: mixed rings");
  WeightedBivar<R> r = a;
  for (const auto& [k, v] : b.terms) {
    auto it = r.terms.find(k);
    if (it == r.terms.end()) {
      r.terms.emplace(k, v);
    } else {
      it->second = r.ring.add(it->second, v);
      if (r.ring.is_zero(it->second)) r.terms.erase(it);
    }
  }
  return r;
}

template <class R>
WeightedBivar<R> bv_neg(const WeightedBivar<R>& a) {
  WeightedBivar<R> r = a;
  for (auto& [k, v] : r.terms) v = r.ring.neg(v);
  return r;
}

template <class R>
WeightedBivar<R> bv_sub(const WeightedBivar<R>& a, const WeightedBivar<R>& b) {
  return bv_add(a, bv_neg(b));
}

template <class R>
WeightedBivar<R> bv_scale(const typename R::C& c, const WeightedBivar<R>& a) {
  WeightedBivar<R> r(a.ring);
  if (a.ring.is_zero(c)) return r;
  for (const auto& [k, v] : a.terms) {
    auto prod = a.ring.mul(c, v);
    if (!a.ring.is_zero(prod)) r.terms.emplace(k, std::move(prod));
  }
  return r;
}

// nonzero input required; nullopt means inhomogeneous
template <class R>
std::optional<long> bv_weight_opt(const WeightedBivar<R>& a) {
  long w = monomial_weight(a.terms.begin()->first);
  for (const auto& [k, v] : a.terms)
    if (monomial_weight(k) != w) return std::nullopt;
  return w;
}

template <class R>
std::optional<long> bv_weight(const WeightedBivar<R>& a) {
  if (a.is_zero()) throw std::invalid_argument("weight of zero polynomial");
  return bv_weight_opt(a);
}

template <class R>
WeightedBivar<R> bv_mul(const WeightedBivar<R>& a, const WeightedBivar<R>& b) {
  if (!a.ring.same(b.ring)) throw std::invalid_argument("bivar: mixed rings");
  WeightedBivar<R> out(a.ring);
  if (a.is_zero() || b.is_zero()) return out;
  auto wa = bv_weight_opt(a), wb = bv_weight_opt(b);
  if (wa && wb) {
    // homogeneous fast path: both factors live on a dense u-lattice
    auto [es1, et1] = weight_residues(*wa);
    auto [es2, et2] = weight_residues(*wb);
    long D1 = (*wa - 2 * es1 - 3 * et1) / 6;
    long D2 = (*wb - 2 * es2 - 3 * et2) / 6;
    long w = *wa + *wb;
    auto [es, et] = weight_residues(w);
    long off = (es1 + es2 - es) / 3;  // 0 or 1
    long D = (w - 2 * es - 3 * et) / 6;
    std::vector<typename R::C> da(D1 + 1, typename R::C{}), db(D2 + 1, typename R::C{});
    for (const auto& [k, v] : a.terms) da[(k.first - es1) / 3] = v;
    for (const auto& [k, v] : b.terms) db[(k.first - es2) / 3] = v;
    if constexpr (std::is_same_v<R, FpRing>) {
      std::vector<unsigned __int128> acc(D1 + D2 + 1, 0);
      for (long i = 0; i <= D1; ++i) {
        if (!da[i]) continue;
        for (long j = 0; j <= D2; ++j)
          if (db[j]) acc[i + j] += static_cast<unsigned __int128>(da[i]) * db[j];
      }
      for (long i = 0; i <= D1 + D2; ++i) {
        uint64_t v = static_cast<uint64_t>(acc[i] % a.ring.p);
        if (v)
          out.terms[{static_cast<unsigned>(es + 3 * (i + off)),
                     static_cast<unsigned>(et + 2 * (D - i - off))}] = v;
      }
    } else {
      std::vector<typename R::C> acc(D1 + D2 + 1, typename R::C{});
      for (long i = 0; i <= D1; ++i) {
        if (a.ring.is_zero(da[i])) continue;
        for (long j = 0; j <= D2; ++j)
          if (!a.ring.is_zero(db[j])) acc[i + j] += da[i] * db[j];
      }
      for (long i = 0; i <= D1 + D2; ++i)
        if (!a.ring.is_zero(acc[i]))
          out.terms[{static_cast<unsigned>(es + 3 * (i + off)),
                     static_cast<unsigned>(et + 2 * (D - i - off))}] = std::move(acc[i]);
    }
    return out;
  }
  for (const auto& [ka, va] : a.terms)
    for (const auto& [kb, vb] : b.terms) {
      BvKey k{ka.first + kb.first, ka.second + kb.second};
      auto prod = a.ring.mul(va, vb);
      auto it = out.terms.find(k);
      if (it == out.terms.end()) {
        if (!a.ring.is_zero(prod)) out.terms.emplace(k, std::move(prod));
      } else {
        it->second = a.ring.add(it->second, prod);
        if (a.ring.is_zero(it->second)) out.terms.erase(it);
      }
    }
  return out;
}

template <class R>
std::string bv_to_string(const WeightedBivar<R>& a);

// quotient in *q on success; remainder in *rem on failure
template <class R>
bool bv_try_exact_div(const WeightedBivar<R>& a, const WeightedBivar<R>& b,
                      WeightedBivar<R>* q = nullptr, WeightedBivar<R>* rem = nullptr) {
  if (!a.ring.same(b.ring)) throw std::invalid_argument("bivar: mixed rings");
  if (b.is_zero()) throw std::invalid_argument("bivar: division by zero");
  WeightedBivar<R> quot(a.ring), r = a;
  const auto& [kb, cb] = *b.terms.rbegin();
  while (!r.is_zero()) {
    const auto& [kr, cr] = *r.terms.rbegin();
    typename R::C cq{};
    if (kr.first < kb.first || kr.second < kb.second || !r.ring.div(cr, cb, cq)) {
      if (rem) *rem = std::move(r);
      return false;
    }
    BvKey kq{kr.first - kb.first, kr.second - kb.second};
    WeightedBivar<R> piece = bv_term(a.ring, cq, kq.first, kq.second);
    quot.terms.emplace(kq, std::move(cq));
    r = bv_sub(r, bv_mul(piece, b));
  }
  if (q) *q = std::move(quot);
  return true;
}

template <class R>
WeightedBivar<R> bv_exact_div(const WeightedBivar<R>& a, const WeightedBivar<R>& b) {
  WeightedBivar<R> q(a.ring), rem(a.ring);
  if (!bv_try_exact_div(a, b, &q, &rem))
    throw divide_error("exact division failed, remainder " + bv_to_string(rem),
                       bv_to_string(rem));
  return q;
}

// Q-adic order of a; nullopt for the zero polynomial (order infinity)
template <class R>
std::optional<unsigned> bv_ord(const WeightedBivar<R>& a, const WeightedBivar<R>& q) {
  if (a.is_zero()) return std::nullopt;
  unsigned n = 0;
  WeightedBivar<R> cur = a, next(a.ring);
  while (bv_try_exact_div(cur, q, &next)) {
    cur = std::move(next);
    ++n;
  }
  return n;
}

inline PBivar bv_mod_p(const ZBivar& a, uint64_t p) {
  PBivar r(FpRing{p});
  for (const auto& [k, v] : a.terms) {
    BigInt m = v % p;
    if (m < 0) m += p;
    uint64_t c = m.convert_to<uint64_t>();
    if (c) r.terms[k] = c;
  }
  return r;
}

// --- dehomogenization to u = s^3/t^2 (F_p coefficients) ---

struct DehomForm {
  unsigned exp_s = 0;  // weight residue, in {0, 1, 2} out of dehomogenize
  unsigned exp_t = 0;  // exact t-adic order (residue plus lattice deficiency)
  UniPoly upoly;       // in u; may be divisible by u (s-powers beyond the residue)
};

// requires weight-homogeneous nonzero input; identity:
// a = s^exp_s * t^exp_t * t^(2 deg upoly) * upoly(s^3/t^2)
DehomForm bv_dehomogenize(const PBivar& a);
PBivar bv_rehomogenize(const DehomForm& d, long weight);

PBivar wb_gcd(const PBivar& a, const PBivar& b);

struct SquarefreeResult {
  bool squarefree = false;
  PBivar witness;  // a repeated factor when squarefree is false
};
SquarefreeResult wb_squarefree_check(const PBivar& a);

// evaluate at s = s0, t = t0 in a field of matching characteristic
Fq::Elem bv_eval(const PBivar& a, const FqPtr& F, const Fq::Elem& s0, const Fq::Elem& t0);

// --- polynomials in x over the bivariate ring ---

template <class R>
struct XPoly {
  R ring;
  std::vector<WeightedBivar<R>> c;  // c[d] multiplies x^d
  bool y_parity = false;            // true: the object is y * (this polynomial)

  explicit XPoly(R r = {}) : ring(r) {}
  XPoly(R r, std::vector<WeightedBivar<R>> coeffs, bool parity = false)
      : ring(r), c(std::move(coeffs)), y_parity(parity) {
    trim();
  }
  void trim() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  std::optional<int> degree() const {
    if (c.empty()) return std::nullopt;
    return static_cast<int>(c.size()) - 1;
  }
  const WeightedBivar<R>& lc() const { return c.back(); }
  WeightedBivar<R> coeff(size_t d) const {
    return d < c.size() ? c[d] : WeightedBivar<R>(ring);
  }
};

using ZXPoly = XPoly<ZRing>;
using PXPoly = XPoly<FpRing>;

template <class R>
XPoly<R> xp_const(R ring, WeightedBivar<R> b) {
  return XPoly<R>(ring, {std::move(b)});
}

template <class R>
XPoly<R> xp_from_int(R ring, typename R::C v) {
  return xp_const(ring, bv_const(ring, std::move(v)));
}

template <class R>
XPoly<R> xp_x(R ring) {
  return XPoly<R>(ring, {WeightedBivar<R>(ring), bv_const(ring, typename R::C{1})});
}

template <class R>
bool xp_eq(const XPoly<R>& a, const XPoly<R>& b) {
  if (a.y_parity != b.y_parity || a.c.size() != b.c.size()) return false;
  for (size_t i = 0; i < a.c.size(); ++i)
    if (!bv_eq(a.c[i], b.c[i])) return false;
  return true;
}

template <class R>
XPoly<R> xp_add(const XPoly<R>& a, const XPoly<R>& b) {
  if (!a.is_zero() && !b.is_zero() && a.y_parity != b.y_parity)
    throw std::logic_error("xpoly: adding mixed parities");
  XPoly<R> r(a.ring);
  r.y_parity = a.is_zero() ? b.y_parity : a.y_parity;
  r.c.resize(std::max(a.c.size(), b.c.size()), WeightedBivar<R>(a.ring));
  for (size_t i = 0; i < r.c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size()) r.c[i] = bv_add(a.c[i], b.c[i]);
    else if (i < a.c.size()) r.c[i] = a.c[i];
    else r.c[i] = b.c[i];
  }
  r.trim();
  return r;
}

template <class R>
XPoly<R> xp_neg(const XPoly<R>& a) {
  XPoly<R> r = a;
  for (auto& b : r.c) b = bv_neg(b);
  return r;
}

template <class R>
XPoly<R> xp_sub(const XPoly<R>& a, const XPoly<R>& b) {
  return xp_add(a, xp_neg(b));
}

template <class R>
XPoly<R> xp_mul(const XPoly<R>& a, const XPoly<R>& b) {
  if (a.y_parity && b.y_parity)
    throw std::logic_error("xpoly: product of two y-parity polynomials needs the curve relation");
  XPoly<R> r(a.ring);
  if (a.is_zero() || b.is_zero()) return r;
  r.y_parity = a.y_parity || b.y_parity;
  r.c.assign(a.c.size() + b.c.size() - 1, WeightedBivar<R>(a.ring));
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i].is_zero()) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      if (b.c[j].is_zero()) continue;
      r.c[i + j] = bv_add(r.c[i + j], bv_mul(a.c[i], b.c[j]));
    }
  }
  r.trim();
  return r;
}

template <class R>
XPoly<R> xp_scale(const typename R::C& v, const XPoly<R>& a) {
  XPoly<R> r = a;
  for (auto& b : r.c) b = bv_scale(v, b);
  r.trim();
  return r;
}

template <class R>
XPoly<R> xp_scale_bv(const WeightedBivar<R>& v, const XPoly<R>& a) {
  XPoly<R> r = a;
  for (auto& b : r.c) b = bv_mul(v, b);
  r.trim();
  return r;
}

template <class R>
XPoly<R> xp_exact_div_const(const XPoly<R>& a, const typename R::C& v) {
  XPoly<R> r = a;
  for (auto& b : r.c)
    for (auto& [k, coeff] : b.terms) {
      typename R::C q{};
      if (!a.ring.div(coeff, v, q))
        throw divide_error("constant division failed on coefficient " + a.ring.str(coeff),
                           a.ring.str(coeff));
      coeff = std::move(q);
    }
  for (auto& b : r.c) b.normalize();
  r.trim();
  return r;
}

template <class R>
std::optional<long> xp_weight(const XPoly<R>& a) {
  if (a.is_zero()) throw std::invalid_argument("weight of zero polynomial");
  std::optional<long> w;
  for (size_t d = 0; d < a.c.size(); ++d)
    for (const auto& [k, v] : a.c[d].terms) {
      long tw = static_cast<long>(d) + monomial_weight(k);
      if (!w) w = tw;
      else if (*w != tw) return std::nullopt;
    }
  return w;
}

inline PXPoly xp_mod_p(const ZXPoly& a, uint64_t p) {
  PXPoly r(FpRing{p});
  r.y_parity = a.y_parity;
  for (const auto& b : a.c) r.c.push_back(bv_mod_p(b, p));
  r.trim();
  return r;
}

// serialization: terms "coeff*s^a*t^b*x^d" ordered by x-degree descending,
// then s descending, then t descending; the coefficient is always printed
template <class R>
std::string xp_to_string(const XPoly<R>& a);

ZXPoly xp_parse_z(const std::string& text);
PXPoly xp_parse_p(const std::string& text, uint64_t p);

// evaluate the s,t coefficients at (s0, t0), leaving a univariate in x
UniPoly xp_eval_st(const PXPoly& a, const FqPtr& F, const Fq::Elem& s0, const Fq::Elem& t0);

}  // namespace ecpn
