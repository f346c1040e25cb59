#include "ecpn/supersingular.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecpn {

namespace {

void validate_p(uint64_t p) {
  if (p < 5 || !is_prime_u64(p))
    throw std::invalid_argument("supersingular data needs a prime p >= 5");
}

// an element of F_{p^2} lying in F_p is a constant in the polynomial basis
uint64_t base_coord(const Fq::Elem& a) {
  if (a.size() >= 2 && a[1] != 0)
    throw std::logic_error("orbit pairing produced a value outside the base field");
  return a[0];
}

Fq::Elem j_from_lambda(const FqPtr& F, const Fq::Elem& lam) {
  Fq::Elem l2 = F->mul(lam, lam);
  Fq::Elem q = F->add(F->sub(l2, lam), F->one());
  Fq::Elem num = F->mul(F->from_uint(256), F->mul(F->mul(q, q), q));
  Fq::Elem lm1 = F->sub(lam, F->one());
  Fq::Elem den = F->mul(l2, F->mul(lm1, lm1));
  if (F->is_zero(den)) throw std::logic_error("Hasse root at lambda = 0 or 1");
  return F->mul(num, F->inv(den));
}

UniPoly lagrange_interpolate(const FqPtr& F,
                             const std::vector<std::pair<Fq::Elem, Fq::Elem>>& pts,
                             const std::string& var) {
  UniPoly acc(F, var);
  for (size_t i = 0; i < pts.size(); ++i) {
    UniPoly num = up_const(F, F->one(), var);
    Fq::Elem den = F->one();
    for (size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      num = up_mul(num, UniPoly(F, {F->neg(pts[j].first), F->one()}, var));
      den = F->mul(den, F->sub(pts[i].first, pts[j].first));
    }
    acc = up_add(acc, up_scale(F->mul(pts[i].second, F->inv(den)), num));
  }
  return acc;
}

UniPoly strip_root(UniPoly f, const Fq::Elem& c) {
  const FqPtr& F = f.F;
  UniPoly lin(F, {F->neg(c), F->one()}, f.var);
  while (f.degree() && *f.degree() >= 1 && F->is_zero(up_eval(f, c)))
    f = up_divrem(f, lin).first;
  return f;
}

}  // namespace

UniPoly hasse_poly(uint64_t p) {
  validate_p(p);
  FqPtr F = Fq::prime(p);
  uint64_t h = (p - 1) / 2;
  std::vector<Fq::Elem> c(h + 1);
  uint64_t b = 1;  // binom(h, k) mod p, nonzero throughout because h < p
  for (uint64_t k = 0; k <= h; ++k) {
    c[k] = F->from_uint(fp_mul(b, b, p));
    if (k < h) b = fp_mul(fp_mul(b, h - k, p), fp_inv(k + 1, p), p);
  }
  return UniPoly(F, std::move(c), "lambda");
}

std::pair<int, int> e3_e4(uint64_t p) {
  validate_p(p);
  return {p % 3 == 2 ? 1 : 0, p % 4 == 3 ? 1 : 0};
}

UniPoly fss_via_resultant(uint64_t p) {
  validate_p(p);
  FqPtr F = Fq::prime(p);
  UniPoly H = hasse_poly(p);
  UniPoly lam = up_x(F, "lambda");
  UniPoly lm1 = up_sub(lam, up_const(F, F->one(), "lambda"));
  UniPoly A = up_mul(up_mul(lam, lam), up_mul(lm1, lm1));
  UniPoly q = up_add(up_sub(up_mul(lam, lam), lam), up_const(F, F->one(), "lambda"));
  UniPoly B = up_scale(F->from_uint(256), up_mul(up_mul(q, q), q));

  // Res_lambda(H, j A - B) has j-degree at most deg H, and the lambda-leading
  // coefficient of j A - B is the constant -256, so specializing j commutes
  // with taking the resultant. Evaluate at deg H + 1 points and interpolate.
  uint64_t h = (p - 1) / 2;
  std::vector<std::pair<Fq::Elem, Fq::Elem>> pts;
  pts.reserve(h + 1);
  for (uint64_t c = 0; c <= h; ++c) {
    Fq::Elem jc = F->from_uint(c);
    UniPoly G = up_sub(up_scale(jc, A), B);
    pts.emplace_back(jc, up_resultant(H, G));
  }
  UniPoly R = lagrange_interpolate(F, pts, "j");
  if (R.is_zero()) return R;

  UniPoly sf = up_const(F, F->one(), "j");
  for (const auto& part : up_squarefree_decomposition(R)) sf = up_mul(sf, part.first);
  sf = strip_root(std::move(sf), F->zero());
  sf = strip_root(std::move(sf), F->from_uint(1728 % p));
  return up_monic(sf);
}

SupersingularTable supersingular_table(uint64_t p, uint64_t seed) {
  validate_p(p);
  FqPtr Fp = Fq::prime(p);
  SupersingularTable tab(Fp);
  tab.p = p;
  tab.hasse = hasse_poly(p);
  tab.Fp2 = Fq::extension(p, 2);
  auto [e3, e4] = e3_e4(p);
  tab.e3 = e3;
  tab.e4 = e4;

  UniPoly g = up_gcd(tab.hasse, up_derivative(tab.hasse));
  tab.hasse_squarefree = g.degree() && *g.degree() == 0;

  auto roots = up_roots_in(tab.hasse, tab.Fp2, seed);
  unsigned mult_total = 0;
  std::vector<Fq::Elem> js;
  js.reserve(roots.size());
  for (const auto& [lam, mult] : roots) {
    mult_total += mult;
    js.push_back(j_from_lambda(tab.Fp2, lam));
  }
  tab.hasse_splits_over_Fp2 = mult_total == static_cast<unsigned>(*tab.hasse.degree());
  std::sort(js.begin(), js.end(),
            [&](const Fq::Elem& a, const Fq::Elem& b) { return tab.Fp2->cmp(a, b) < 0; });
  js.erase(std::unique(js.begin(), js.end(),
                       [&](const Fq::Elem& a, const Fq::Elem& b) { return tab.Fp2->eq(a, b); }),
           js.end());
  tab.j_set = std::move(js);

  Fq::Elem j0 = tab.Fp2->zero();
  Fq::Elem j1728 = tab.Fp2->from_uint(1728 % p);
  for (const auto& j : tab.j_set) {
    if (tab.Fp2->eq(j, j0)) tab.contains_0 = true;
    if (tab.Fp2->eq(j, j1728)) tab.contains_1728 = true;
  }

  // enumeration route: pair each Frobenius orbit of j_set minus {0, 1728}
  // into a linear or quadratic factor with base-field coefficients
  UniPoly fss = up_const(Fp, Fp->one(), "j");
  std::vector<bool> used(tab.j_set.size(), false);
  for (size_t i = 0; i < tab.j_set.size(); ++i) {
    if (used[i]) continue;
    const Fq::Elem& ji = tab.j_set[i];
    if (tab.Fp2->eq(ji, j0) || tab.Fp2->eq(ji, j1728)) continue;
    Fq::Elem jc = tab.Fp2->frob(ji);
    if (tab.Fp2->eq(jc, ji)) {
      fss = up_mul(fss, UniPoly(Fp, {Fp->from_uint(fp_neg(base_coord(ji), p)), Fp->one()}, "j"));
    } else {
      for (size_t k = i + 1; k < tab.j_set.size(); ++k)
        if (tab.Fp2->eq(tab.j_set[k], jc)) used[k] = true;
      uint64_t tr = base_coord(tab.Fp2->add(ji, jc));
      uint64_t nm = base_coord(tab.Fp2->mul(ji, jc));
      fss = up_mul(fss,
                   UniPoly(Fp, {Fp->from_uint(nm), Fp->from_uint(fp_neg(tr, p)), Fp->one()}, "j"));
    }
  }
  tab.fss = std::move(fss);
  tab.fss_resultant = fss_via_resultant(p);
  tab.routes_agree = up_eq(tab.fss, tab.fss_resultant);
  return tab;
}

BComparison compare_B_with_fss(const ThetaData& th, const SupersingularTable& ss) {
  if (th.p != ss.p) throw std::invalid_argument("theta data and table are for different primes");
  if (!th.ok) throw std::invalid_argument("theta extraction did not succeed");
  uint64_t p = th.p;
  FqPtr F = Fq::prime(p);
  BComparison out(F);
  out.p = p;

  const PBivar& a_lead = th.a.at(static_cast<unsigned>((p - 1) / 2));
  FpRing ring{p};
  PBivar mono = bv_term(ring, uint64_t{1}, static_cast<unsigned>(ss.e3),
                        static_cast<unsigned>(ss.e4));
  PBivar quot(ring), rem(ring);
  if (!bv_try_exact_div(a_lead, mono, &quot, &rem)) {
    out.failure = "leading coefficient is not divisible by the forced monomial";
    return out;
  }
  out.b_dehom = bv_dehomogenize(quot).upoly;

  // push fss through j = 1728 u / (u + 27/4); the image keeps degree d because
  // fss(1728) is nonzero
  const UniPoly& fss = ss.fss;
  if (fss.is_zero()) {
    out.failure = "table carries a zero fss";
    return out;
  }
  int d = *fss.degree();
  Fq::Elem inv1728 = F->inv(F->from_uint(1728 % p));
  Fq::Elem c274 = F->mul(F->from_uint(27), F->inv(F->from_uint(4)));
  UniPoly base(F, {F->mul(c274, inv1728), inv1728}, "u");
  std::vector<UniPoly> basepow(d + 1, up_const(F, F->one(), "u"));
  for (int i = 1; i <= d; ++i) basepow[i] = up_mul(basepow[i - 1], base);
  UniPoly g(F, "u");
  UniPoly upow = up_const(F, F->one(), "u");
  for (int i = 0; i <= d; ++i) {
    g = up_add(g, up_scale(fss.coeff(i), up_mul(upow, basepow[d - i])));
    if (i < d) upow = up_mul(upow, up_x(F, "u"));
  }
  out.g = g;

  if (g.is_zero()) {
    out.failure = "pushed-forward polynomial is zero";
    return out;
  }
  if (out.b_dehom.degree() != g.degree()) {
    out.failure = "degree mismatch between stripped leading coefficient and pushed-forward fss";
    return out;
  }
  Fq::Elem C = F->mul(out.b_dehom.lc(), F->inv(g.lc()));
  if (!up_eq(out.b_dehom, up_scale(C, g))) {
    out.failure = "no scalar relates the stripped leading coefficient to the pushed-forward fss";
    return out;
  }
  out.matched = true;
  out.C = C[0];
  return out;
}

}  // namespace ecpn
