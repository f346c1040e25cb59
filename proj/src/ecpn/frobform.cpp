#include "ecpn/frobform.hpp"

namespace ecpn {

namespace {

// first x-exponent with a surviving coefficient that is not a multiple of p,
// or -1 if the polynomial is supported on powers of x^p
long stray_exponent(const PXPoly& f, uint64_t p) {
  for (size_t d = 0; d < f.c.size(); ++d)
    if (!f.c[d].is_zero() && d % p != 0) return static_cast<long>(d);
  return -1;
}

bool weight_is(const PBivar& a, long w) {
  if (a.is_zero()) return true;
  auto got = bv_weight(a);
  return got && *got == w;
}

}  // namespace

ThetaData theta_from_psi(uint64_t p, const PXPoly& psi_mod_p) {
  ThetaData th;
  th.p = p;
  th.X_degree = static_cast<unsigned>((p - 1) / 2);
  if (long d = stray_exponent(psi_mod_p, p); d >= 0) {
    th.failure = "x^" + std::to_string(d) + " survives mod " + std::to_string(p) +
                 " outside the powers of x^" + std::to_string(p);
    return th;
  }
  long want_deg = static_cast<long>(p) * (p - 1) / 2;
  if (!psi_mod_p.degree() || *psi_mod_p.degree() != want_deg) {
    th.failure = "x-degree is not p(p-1)/2";
    return th;
  }
  for (unsigned i = 0; i <= th.X_degree; ++i) {
    unsigned j = th.X_degree - i;
    unsigned k = th.X_degree + static_cast<unsigned>(p) * i;
    PBivar co = psi_mod_p.coeff(static_cast<size_t>(p) * j);
    if (!weight_is(co, k)) {
      th.failure = "coefficient at X^" + std::to_string(j) +
                   " is not weight-homogeneous of weight " + std::to_string(k);
      return th;
    }
    th.a.emplace(k, std::move(co));
  }
  th.ok = true;
  return th;
}

ThetaData extract_theta(uint64_t p, PDivTable& tab) {
  if (tab.ring().p != p) throw std::invalid_argument("table characteristic mismatch");
  PXPoly psi = tab.get(p);
  psi.y_parity = false;
  return theta_from_psi(p, psi);
}

EtaData eta_from_sigma(uint64_t p, const SigmaPoly<FpRing>& sg) {
  EtaData et;
  et.p = p;
  long p2 = static_cast<long>(p) * p;
  if (!sg.x_part.degree() || *sg.x_part.degree() != p2 ||
      !bv_eq(sg.x_part.lc(), bv_const(sg.x_part.ring, uint64_t{1}))) {
    et.failure = "sigma mod p is not monic of x-degree p^2";
    return et;
  }
  if (long d = stray_exponent(sg.x_part, p); d >= 0) {
    et.failure = "x^" + std::to_string(d) +
                 " survives in the x-part outside the powers of x^" + std::to_string(p);
    return et;
  }
  if (long d = stray_exponent(sg.xt_part, p); d >= 0) {
    et.failure = "x^" + std::to_string(d) +
                 " survives in the xt-part outside the powers of x^" + std::to_string(p);
    return et;
  }
  for (unsigned i = 1; i <= p; ++i) {
    size_t xexp = static_cast<size_t>(p) * (p - i);
    PBivar bco = sg.x_part.coeff(xexp);
    PBivar cco = sg.xt_part.coeff(xexp);
    unsigned bi = static_cast<unsigned>(p) * i;
    if (!weight_is(bco, bi) || !weight_is(cco, static_cast<long>(bi) - 1)) {
      et.failure = "coefficient at X^" + std::to_string(p - i) +
                   " is not weight-homogeneous";
      return et;
    }
    et.b.emplace(bi, std::move(bco));
    et.c.emplace(bi - 1, std::move(cco));
  }
  et.ok = true;
  return et;
}

EtaData extract_eta(uint64_t p, PDivTable& tab) {
  if (tab.ring().p != p) throw std::invalid_argument("table characteristic mismatch");
  return eta_from_sigma(p, sigma_poly(static_cast<unsigned>(p), tab));
}

CRelationResult check_c_relation(uint64_t p, const EtaData& eta, PDivTable& tab) {
  FpRing ring{p};
  PXPoly cpart(ring);
  cpart.c.assign(static_cast<size_t>(p) * p - p + 1, PBivar(ring));
  for (unsigned i = 1; i <= p; ++i) {
    auto it = eta.c.find(static_cast<unsigned>(p) * i - 1);
    if (it != eta.c.end()) cpart.c[static_cast<size_t>(p) * (p - i)] = it->second;
  }
  cpart.trim();
  PXPoly psi = tab.get(static_cast<unsigned>(p));
  psi.y_parity = false;
  PXPoly sq = xp_mul(psi, psi);

  CRelationResult r;
  r.residual = xp_add(cpart, sq);
  r.holds = r.residual.is_zero();
  if (!sq.is_zero() && !cpart.is_zero() && cpart.degree() == sq.degree()) {
    const auto& [ke, ve] = *sq.lc().terms.rbegin();
    auto itc = cpart.lc().terms.find(ke);
    if (itc != cpart.lc().terms.end()) {
      uint64_t cand = fp_mul(itc->second, fp_inv(fp_neg(ve, p), p), p);
      if (cand && xp_eq(cpart, xp_scale(cand, xp_neg(sq)))) r.lambda = cand;
    }
  }
  return r;
}

UniPoly theta_specialize(const ThetaData& th, const FqPtr& F, const Fq::Elem& s0,
                         const Fq::Elem& t0) {
  std::vector<Fq::Elem> coeffs(th.X_degree + 1, F->zero());
  for (const auto& [k, co] : th.a) {
    unsigned i = (k - th.X_degree) / static_cast<unsigned>(th.p);
    coeffs[th.X_degree - i] = bv_eval(co, F, s0, t0);
  }
  return UniPoly(F, coeffs, "x");
}

UniPoly eta_specialize(const EtaData& et, const FqPtr& F, const Fq::Elem& s0,
                       const Fq::Elem& t0, const Fq::Elem& xt) {
  unsigned p = static_cast<unsigned>(et.p);
  std::vector<Fq::Elem> coeffs(p + 1, F->zero());
  coeffs[p] = F->one();
  for (unsigned i = 1; i <= p; ++i) {
    Fq::Elem v = F->zero();
    if (auto itb = et.b.find(p * i); itb != et.b.end())
      v = bv_eval(itb->second, F, s0, t0);
    if (auto itc = et.c.find(p * i - 1); itc != et.c.end())
      v = F->add(v, F->mul(xt, bv_eval(itc->second, F, s0, t0)));
    coeffs[p - i] = v;
  }
  return UniPoly(F, coeffs, "x");
}

}  // namespace ecpn
