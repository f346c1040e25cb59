#include "ecpn/bivar.hpp"

#include <algorithm>
#include <sstream>

namespace ecpn {

namespace {

void append_factor(std::string& s, const char* var, unsigned e) {
  if (!e) return;
  s += "*";
  s += var;
  if (e > 1) {
    s += "^";
    s += std::to_string(e);
  }
}

std::string term_str(const std::string& coeff, unsigned es, unsigned et, unsigned dx) {
  std::string s = coeff;
  append_factor(s, "s", es);
  append_factor(s, "t", et);
  append_factor(s, "x", dx);
  return s;
}

}  // namespace

template <class R>
std::string bv_to_string(const WeightedBivar<R>& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (auto it = a.terms.rbegin(); it != a.terms.rend(); ++it) {
    if (!out.empty()) out += " + ";
    out += term_str(a.ring.str(it->second), it->first.first, it->first.second, 0);
  }
  return out;
}

template <class R>
std::string xp_to_string(const XPoly<R>& a) {
  if (a.is_zero()) return "0";
  std::string out;
  for (size_t d = a.c.size(); d-- > 0;) {
    const auto& b = a.c[d];
    for (auto it = b.terms.rbegin(); it != b.terms.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += term_str(a.ring.str(it->second), it->first.first, it->first.second,
                      static_cast<unsigned>(d));
    }
  }
  return out;
}

template std::string bv_to_string<ZRing>(const ZBivar&);
template std::string bv_to_string<FpRing>(const PBivar&);
template std::string xp_to_string<ZRing>(const ZXPoly&);
template std::string xp_to_string<FpRing>(const PXPoly&);

namespace {

struct RawTerm {
  BigInt coeff;
  unsigned es = 0, et = 0, dx = 0;
};

unsigned parse_exp(const std::string& tok, size_t from) {
  if (from >= tok.size()) throw std::invalid_argument("parse: missing exponent in " + tok);
  unsigned e = 0;
  for (size_t i = from; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9')
      throw std::invalid_argument("parse: bad exponent in " + tok);
    e = e * 10 + static_cast<unsigned>(tok[i] - '0');
    if (e > 1000000) throw std::invalid_argument("parse: exponent out of range in " + tok);
  }
  return e;
}

std::vector<RawTerm> parse_terms(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("parse: empty polynomial text");
  if (text == "0") return {};
  std::vector<RawTerm> out;
  size_t pos = 0;
  while (true) {
    size_t next = text.find(" + ", pos);
    std::string term =
        next == std::string::npos ? text.substr(pos) : text.substr(pos, next - pos);
    if (term.empty()) throw std::invalid_argument("parse: empty term");
    RawTerm rt;
    size_t tp = 0;
    bool have_s = false, have_t = false, have_x = false;
    size_t star = term.find('*');
    std::string num = star == std::string::npos ? term : term.substr(0, star);
    if (num.empty() || (num.size() == 1 && num[0] == '-'))
      throw std::invalid_argument("parse: bad coefficient in " + term);
    for (size_t i = num[0] == '-' ? 1 : 0; i < num.size(); ++i)
      if (num[i] < '0' || num[i] > '9')
        throw std::invalid_argument("parse: bad coefficient in " + term);
    rt.coeff = BigInt(num);
    tp = star == std::string::npos ? term.size() : star + 1;
    while (tp < term.size()) {
      size_t stop = term.find('*', tp);
      std::string tok =
          stop == std::string::npos ? term.substr(tp) : term.substr(tp, stop - tp);
      if (tok.empty()) throw std::invalid_argument("parse: empty factor in " + term);
      unsigned e = 1;
      if (tok.size() > 1) {
        if (tok[1] != '^') throw std::invalid_argument("parse: bad factor " + tok);
        e = parse_exp(tok, 2);
      }
      switch (tok[0]) {
        case 's':
          if (have_s) throw std::invalid_argument("parse: duplicate s in " + term);
          have_s = true;
          rt.es = e;
          break;
        case 't':
          if (have_t) throw std::invalid_argument("parse: duplicate t in " + term);
          have_t = true;
          rt.et = e;
          break;
        case 'x':
          if (have_x) throw std::invalid_argument("parse: duplicate x in " + term);
          have_x = true;
          rt.dx = e;
          break;
        default:
          throw std::invalid_argument("parse: unknown variable in " + tok);
      }
      tp = stop == std::string::npos ? term.size() : stop + 1;
    }
    out.push_back(std::move(rt));
    if (next == std::string::npos) break;
    pos = next + 3;
  }
  return out;
}

}  // namespace

ZXPoly xp_parse_z(const std::string& text) {
  ZRing ring;
  auto raw = parse_terms(text);
  ZXPoly r(ring);
  for (const auto& rt : raw) {
    if (r.c.size() <= rt.dx) r.c.resize(rt.dx + 1, ZBivar(ring));
    auto& slot = r.c[rt.dx].terms[{rt.es, rt.et}];
    slot += rt.coeff;
  }
  for (auto& b : r.c) b.normalize();
  r.trim();
  return r;
}

PXPoly xp_parse_p(const std::string& text, uint64_t p) {
  FpRing ring{p};
  auto raw = parse_terms(text);
  PXPoly r(ring);
  for (const auto& rt : raw) {
    BigInt m = rt.coeff % p;
    if (m < 0) m += p;
    uint64_t c = m.convert_to<uint64_t>();
    if (r.c.size() <= rt.dx) r.c.resize(rt.dx + 1, PBivar(ring));
    auto& slot = r.c[rt.dx].terms[{rt.es, rt.et}];
    slot = fp_add(slot, c, p);
  }
  for (auto& b : r.c) b.normalize();
  r.trim();
  return r;
}

namespace {

unsigned u_order(const UniPoly& f) {
  unsigned i = 0;
  while (f.F->is_zero(f.c[i])) ++i;
  return i;
}

UniPoly shift_down(const UniPoly& f, unsigned k) {
  return UniPoly(f.F, std::vector<Fq::Elem>(f.c.begin() + k, f.c.end()), f.var);
}

}  // namespace

DehomForm bv_dehomogenize(const PBivar& a) {
  if (a.is_zero()) throw std::invalid_argument("dehomogenize: zero polynomial");
  auto w = bv_weight_opt(a);
  if (!w) throw std::invalid_argument("dehomogenize: inhomogeneous polynomial");
  auto [es, et] = weight_residues(*w);
  long D = (*w - 2 * es - 3 * et) / 6;
  FqPtr F = Fq::prime(a.ring.p);
  std::vector<Fq::Elem> slots(D + 1, F->zero());
  for (const auto& [k, v] : a.terms) slots[(k.first - es) / 3] = F->from_uint(v);
  long ihi = D;
  while (F->is_zero(slots[ihi])) --ihi;
  UniPoly up(F, std::vector<Fq::Elem>(slots.begin(), slots.begin() + ihi + 1), "u");
  return {es, static_cast<unsigned>(et + 2 * (D - ihi)), std::move(up)};
}

PBivar bv_rehomogenize(const DehomForm& d, long weight) {
  if (d.upoly.is_zero()) throw std::invalid_argument("rehomogenize: zero u-polynomial");
  const FqPtr& F = d.upoly.F;
  long deg = *d.upoly.degree();
  if (2l * d.exp_s + 3l * d.exp_t + 6 * deg != weight)
    throw std::invalid_argument("rehomogenize: weight inconsistent with form");
  PBivar r(FpRing{F->p()});
  for (long i = 0; i <= deg; ++i) {
    uint64_t c = d.upoly.c[i][0];
    if (c)
      r.terms[{static_cast<unsigned>(d.exp_s + 3 * i),
               static_cast<unsigned>(d.exp_t + 2 * (deg - i))}] = c;
  }
  return r;
}

PBivar wb_gcd(const PBivar& a, const PBivar& b) {
  auto monic_bv = [](const PBivar& v) {
    if (v.is_zero()) return v;
    return bv_scale(fp_inv(v.terms.rbegin()->second, v.ring.p), v);
  };
  if (a.is_zero()) return monic_bv(b);
  if (b.is_zero()) return monic_bv(a);
  DehomForm da = bv_dehomogenize(a), db = bv_dehomogenize(b);
  unsigned oa = u_order(da.upoly), ob = u_order(db.upoly);
  unsigned gs = std::min(da.exp_s + 3 * oa, db.exp_s + 3 * ob);
  unsigned gt = std::min(da.exp_t, db.exp_t);
  UniPoly g = up_gcd(shift_down(da.upoly, oa), shift_down(db.upoly, ob));
  DehomForm dg{gs, gt, std::move(g)};
  return bv_rehomogenize(dg, 2l * gs + 3l * gt + 6 * (*dg.upoly.degree()));
}

SquarefreeResult wb_squarefree_check(const PBivar& a) {
  DehomForm d = bv_dehomogenize(a);
  FpRing ring{a.ring.p};
  unsigned ou = u_order(d.upoly);
  if (d.exp_s + 3 * ou >= 2) return {false, bv_term(ring, uint64_t{1}, 1, 0)};
  if (d.exp_t >= 2) return {false, bv_term(ring, uint64_t{1}, 0, 1)};
  UniPoly prim = shift_down(d.upoly, ou);
  if (prim.degree() && *prim.degree() > 0) {
    for (const auto& [g, m] : up_squarefree_decomposition(prim))
      if (m >= 2) {
        DehomForm w{0, 0, g};
        return {false, bv_rehomogenize(w, 6 * (*g.degree()))};
      }
  }
  return {true, PBivar(ring)};
}

Fq::Elem bv_eval(const PBivar& a, const FqPtr& F, const Fq::Elem& s0, const Fq::Elem& t0) {
  if (F->p() != a.ring.p)
    throw std::invalid_argument("bv_eval: characteristic mismatch");
  unsigned ms = 0, mt = 0;
  for (const auto& [k, v] : a.terms) {
    ms = std::max(ms, k.first);
    mt = std::max(mt, k.second);
  }
  std::vector<Fq::Elem> ps(ms + 1, F->one()), pt(mt + 1, F->one());
  for (unsigned i = 1; i <= ms; ++i) ps[i] = F->mul(ps[i - 1], s0);
  for (unsigned i = 1; i <= mt; ++i) pt[i] = F->mul(pt[i - 1], t0);
  Fq::Elem acc = F->zero();
  for (const auto& [k, v] : a.terms)
    acc = F->add(acc, F->scal_mul(v, F->mul(ps[k.first], pt[k.second])));
  return acc;
}

UniPoly xp_eval_st(const PXPoly& a, const FqPtr& F, const Fq::Elem& s0, const Fq::Elem& t0) {
  std::vector<Fq::Elem> c;
  c.reserve(a.c.size());
  for (const auto& b : a.c) c.push_back(bv_eval(b, F, s0, t0));
  return UniPoly(F, std::move(c), "x");
}

}  // namespace ecpn
