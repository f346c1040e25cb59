#include "ecpn/unipoly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ecpn {

namespace {

void check_same_field(const UniPoly& a, const UniPoly& b) {
  if (a.F != b.F) throw std::invalid_argument("unipoly: mixed fields");
}

// Scratch-buffer convolution; one modular reduction per output coefficient.
std::vector<Fq::Elem> raw_mul(const FqPtr& F, const std::vector<Fq::Elem>& a,
                              const std::vector<Fq::Elem>& b) {
  if (a.empty() || b.empty()) return {};
  size_t n = a.size() + b.size() - 1;
  unsigned k = F->k();
  std::vector<Fq::Elem> out(n);
  std::vector<unsigned __int128> acc(2 * k - 1);
  for (size_t t = 0; t < n; ++t) {
    std::fill(acc.begin(), acc.end(), 0);
    size_t ilo = t >= b.size() ? t - b.size() + 1 : 0;
    size_t ihi = std::min(t, a.size() - 1);
    for (size_t i = ilo; i <= ihi; ++i) F->mul_acc(acc.data(), a[i], b[t - i]);
    out[t] = F->reduce_wide(acc.data());
  }
  return out;
}

}  // namespace

UniPoly up_from_u64(const FqPtr& F, const std::vector<uint64_t>& coeffs,
                    const std::string& var) {
  std::vector<Fq::Elem> c;
  c.reserve(coeffs.size());
  for (uint64_t v : coeffs) c.push_back(F->from_uint(v));
  return UniPoly(F, std::move(c), var);
}

UniPoly up_x(const FqPtr& F, const std::string& var) {
  return UniPoly(F, {F->zero(), F->one()}, var);
}

UniPoly up_const(const FqPtr& F, const Fq::Elem& v, const std::string& var) {
  return UniPoly(F, {v}, var);
}

bool up_eq(const UniPoly& a, const UniPoly& b) {
  check_same_field(a, b);
  return a.c == b.c;
}

UniPoly up_add(const UniPoly& a, const UniPoly& b) {
  check_same_field(a, b);
  std::vector<Fq::Elem> c(std::max(a.c.size(), b.c.size()), a.F->zero());
  for (size_t i = 0; i < c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size()) c[i] = a.F->add(a.c[i], b.c[i]);
    else if (i < a.c.size()) c[i] = a.c[i];
    else c[i] = b.c[i];
  }
  return UniPoly(a.F, std::move(c), a.var);
}

UniPoly up_sub(const UniPoly& a, const UniPoly& b) { return up_add(a, up_neg(b)); }

UniPoly up_neg(const UniPoly& a) {
  std::vector<Fq::Elem> c = a.c;
  for (auto& x : c) x = a.F->neg(x);
  return UniPoly(a.F, std::move(c), a.var);
}

UniPoly up_mul(const UniPoly& a, const UniPoly& b) {
  check_same_field(a, b);
  return UniPoly(a.F, raw_mul(a.F, a.c, b.c), a.var);
}

UniPoly up_scale(const Fq::Elem& s, const UniPoly& a) {
  std::vector<Fq::Elem> c = a.c;
  for (auto& x : c) x = a.F->mul(s, x);
  return UniPoly(a.F, std::move(c), a.var);
}

UniPoly up_monic(const UniPoly& a) {
  if (a.is_zero()) return a;
  return up_scale(a.F->inv(a.lc()), a);
}

std::pair<UniPoly, UniPoly> up_divrem(const UniPoly& a, const UniPoly& b) {
  check_same_field(a, b);
  if (b.is_zero()) throw std::invalid_argument("up_divrem: division by zero polynomial");
  const FqPtr& F = a.F;
  if (a.c.size() < b.c.size()) return {UniPoly(F, a.var), a};
  std::vector<Fq::Elem> rem = a.c;
  size_t db = b.c.size() - 1;
  std::vector<Fq::Elem> quot(a.c.size() - db, F->zero());
  Fq::Elem linv = F->inv(b.lc());
  for (size_t sh = rem.size() - db; sh-- > 0;) {
    Fq::Elem q = F->mul(rem[sh + db], linv);
    quot[sh] = q;
    if (!F->is_zero(q))
      for (size_t j = 0; j <= db; ++j) rem[sh + j] = F->sub(rem[sh + j], F->mul(q, b.c[j]));
  }
  UniPoly R(F, std::vector<Fq::Elem>(rem.begin(), rem.begin() + db), a.var);
  return {UniPoly(F, std::move(quot), a.var), std::move(R)};
}

UniPoly up_derivative(const UniPoly& a) {
  if (a.c.size() <= 1) return UniPoly(a.F, a.var);
  std::vector<Fq::Elem> c(a.c.size() - 1);
  for (size_t i = 1; i < a.c.size(); ++i) c[i - 1] = a.F->scal_mul(i % a.F->p(), a.c[i]);
  return UniPoly(a.F, std::move(c), a.var);
}

Fq::Elem up_eval(const UniPoly& a, const Fq::Elem& x) {
  Fq::Elem r = a.F->zero();
  for (size_t i = a.c.size(); i-- > 0;) r = a.F->add(a.F->mul(r, x), a.c[i]);
  return r;
}

UniPoly up_gcd(UniPoly a, UniPoly b) {
  check_same_field(a, b);
  while (!b.is_zero()) {
    UniPoly r = up_divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return up_monic(a);
}

UniPoly up_powmod(const UniPoly& base, const BigInt& e, const UniPoly& mod) {
  if (e < 0) throw std::invalid_argument("up_powmod: negative exponent");
  const FqPtr& F = base.F;
  UniPoly r = up_divrem(up_const(F, F->one(), base.var), mod).second;
  if (e == 0) return r;
  UniPoly b = up_divrem(base, mod).second;
  long top = static_cast<long>(msb(e));
  for (long i = top; i >= 0; --i) {
    if (i != top) r = up_divrem(up_mul(r, r), mod).second;
    if (bit_test(e, static_cast<unsigned>(i))) {
      if (i == top) r = b;
      else r = up_divrem(up_mul(r, b), mod).second;
    }
  }
  return r;
}

UniPoly up_compose_mod(const UniPoly& a, const UniPoly& b, const UniPoly& m) {
  const FqPtr& F = a.F;
  UniPoly r(F, a.var);
  for (size_t i = a.c.size(); i-- > 0;) {
    r = up_divrem(up_mul(r, b), m).second;
    if (!F->is_zero(a.c[i])) r = up_add(r, up_const(F, a.c[i], a.var));
  }
  return r;
}

namespace {

UniPoly coeff_frob(const UniPoly& a, unsigned j) {
  std::vector<Fq::Elem> c = a.c;
  for (auto& x : c) x = a.F->frob_iter(x, j);
  return UniPoly(a.F, std::move(c), a.var);
}

// sigma_j(a) composed with b mod m, where sigma_j is the coefficientwise
// p^j-power: computes a^{p^j} mod m when b = X^{p^j} mod m.
UniPoly twist_compose(const UniPoly& a, unsigned j, const UniPoly& b, const UniPoly& m) {
  return up_compose_mod(coeff_frob(a, j), b, m);
}

}  // namespace

UniPoly up_xq_mod(const UniPoly& f) {
  const FqPtr& F = f.F;
  if (!f.degree() || *f.degree() < 1)
    throw std::invalid_argument("up_xq_mod: modulus must have positive degree");
  UniPoly pi1 = up_powmod(up_x(F, f.var), BigInt(F->p()), f);
  unsigned r = F->k();
  if (r == 1) return pi1;
  // left-to-right binary on the exponent r of p
  unsigned top = 31;
  while (!((r >> top) & 1)) --top;
  UniPoly acc = pi1;
  unsigned j = 1;
  for (unsigned i = top; i-- > 0;) {
    acc = twist_compose(acc, j, acc, f);
    j *= 2;
    if ((r >> i) & 1) {
      acc = twist_compose(acc, 1, pi1, f);
      j += 1;
    }
  }
  return acc;
}

Fq::Elem up_resultant(const UniPoly& f, const UniPoly& g) {
  check_same_field(f, g);
  const FqPtr& F = f.F;
  if (f.is_zero() || g.is_zero()) return F->zero();
  int df = *f.degree(), dg = *g.degree();
  if (df == 0) return F->pow_u64(f.c[0], dg);
  if (dg == 0) return F->pow_u64(g.c[0], df);
  UniPoly A = f, B = g;
  bool neg = false;
  if (df < dg) {
    std::swap(A, B);
    if ((df & 1) && (dg & 1)) neg = !neg;
  }
  Fq::Elem gg = F->one(), h = F->one();
  for (;;) {
    int dA = *A.degree(), dB = *B.degree();
    int delta = dA - dB;
    if ((dA & 1) && (dB & 1)) neg = !neg;
    // pseudo-remainder lc(B)^{delta+1} * A mod B
    UniPoly R = up_scale(F->pow_u64(B.lc(), static_cast<uint64_t>(delta) + 1),
                         up_divrem(A, B).second);
    A = B;
    // exact division by g*h^delta
    Fq::Elem den = F->mul(gg, F->pow_u64(h, static_cast<uint64_t>(delta)));
    B = up_scale(F->inv(den), R);
    gg = A.lc();
    if (delta > 0) {
      // h = gg^delta * h^{1-delta}
      Fq::Elem num = F->pow_u64(gg, static_cast<uint64_t>(delta));
      Fq::Elem denh = F->pow_u64(h, static_cast<uint64_t>(delta - 1));
      h = F->mul(num, F->inv(denh));
    }
    if (B.is_zero()) return F->zero();
    if (*B.degree() == 0) {
      int dlast = *A.degree();
      // s * lc(B)^{dA} * h^{1-dA}
      Fq::Elem num = F->pow_u64(B.c[0], static_cast<uint64_t>(dlast));
      Fq::Elem res = dlast >= 1
                         ? F->mul(num, F->inv(F->pow_u64(h, static_cast<uint64_t>(dlast - 1))))
                         : num;
      return neg ? F->neg(res) : res;
    }
  }
}

namespace {

UniPoly pth_root_poly(const UniPoly& f) {
  const FqPtr& F = f.F;
  uint64_t p = F->p();
  std::vector<Fq::Elem> c;
  c.resize((f.c.size() + p - 1) / p, F->zero());
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (F->is_zero(f.c[i])) continue;
    if (i % p != 0) throw std::logic_error("pth_root_poly: not a p-th power");
    c[i / p] = F->pth_root(f.c[i]);
  }
  return UniPoly(F, std::move(c), f.var);
}

void sfd_inner(const UniPoly& f, unsigned mult,
               std::vector<std::pair<UniPoly, unsigned>>& out) {
  const FqPtr& F = f.F;
  if (!f.degree() || *f.degree() == 0) return;
  UniPoly fp = up_derivative(f);
  if (fp.is_zero()) {
    sfd_inner(pth_root_poly(f), mult * static_cast<unsigned>(F->p()), out);
    return;
  }
  UniPoly c = up_gcd(f, fp);
  UniPoly w = up_divrem(f, c).first;
  unsigned i = 1;
  while (w.degree() && *w.degree() > 0) {
    UniPoly y = up_gcd(w, c);
    UniPoly z = up_divrem(w, y).first;
    if (z.degree() && *z.degree() > 0) out.emplace_back(up_monic(z), mult * i);
    w = std::move(y);
    c = up_divrem(c, w).first;
    ++i;
  }
  if (c.degree() && *c.degree() > 0)
    sfd_inner(pth_root_poly(c), mult * static_cast<unsigned>(F->p()), out);
}

}  // namespace

std::vector<std::pair<UniPoly, unsigned>> up_squarefree_decomposition(const UniPoly& f) {
  if (f.is_zero()) throw std::invalid_argument("squarefree decomposition of zero");
  std::vector<std::pair<UniPoly, unsigned>> out;
  sfd_inner(up_monic(f), 1, out);
  return out;
}

namespace {

// Distinct-degree factorization of a monic squarefree f: list of (product of
// irreducibles of degree d, d).
std::vector<std::pair<UniPoly, unsigned>> ddf(const UniPoly& f) {
  std::vector<std::pair<UniPoly, unsigned>> out;
  if (!f.degree() || *f.degree() == 0) return out;
  UniPoly X = up_x(f.F, f.var);
  UniPoly pi = up_xq_mod(f);  // X^{|F|} mod f
  UniPoly h = pi;
  UniPoly fstar = f;
  unsigned d = 1;
  while (fstar.degree() && static_cast<int>(2 * d) <= *fstar.degree()) {
    UniPoly hm = up_divrem(h, fstar).second;
    UniPoly g = up_gcd(up_sub(hm, up_divrem(X, fstar).second), fstar);
    if (g.degree() && *g.degree() > 0) {
      out.emplace_back(g, d);
      fstar = up_divrem(fstar, g).first;
    }
    ++d;
    if (fstar.degree() && static_cast<int>(2 * d) <= *fstar.degree())
      h = up_compose_mod(h, pi, f);
  }
  if (fstar.degree() && *fstar.degree() > 0)
    out.emplace_back(fstar, static_cast<unsigned>(*fstar.degree()));
  return out;
}

// z^{(|F|^d - 1)/2} mod g via the norm ladder: (|F|^d-1)/2 = (p-1)/2 * N with
// N = 1 + p + ... + p^{rd-1}.
UniPoly half_power(const UniPoly& z, unsigned d, const UniPoly& g) {
  const FqPtr& F = z.F;
  unsigned m = F->k() * d;
  UniPoly pi1 = up_powmod(up_x(F, g.var), BigInt(F->p()), g);
  UniPoly Z = up_divrem(z, g).second;
  UniPoly P = pi1;
  unsigned top = 31;
  while (!((m >> top) & 1)) --top;
  unsigned j = 1;
  for (unsigned i = top; i-- > 0;) {
    // double: Z_{2j} = Z_j * sigma_j(Z_j)(P_j); P_{2j} = sigma_j(P_j)(P_j)
    UniPoly Zt = twist_compose(Z, j, P, g);
    Z = up_divrem(up_mul(Z, Zt), g).second;
    P = twist_compose(P, j, P, g);
    j *= 2;
    if ((m >> i) & 1) {
      UniPoly Zt1 = twist_compose(Z, 1, pi1, g);
      Z = up_divrem(up_mul(up_divrem(z, g).second, Zt1), g).second;
      P = twist_compose(P, 1, pi1, g);
      j += 1;
    }
  }
  return up_powmod(Z, BigInt((F->p() - 1) / 2), g);
}

void equal_degree_factor(const UniPoly& g, unsigned d, SplitMix64& rng,
                         std::vector<UniPoly>& out) {
  const FqPtr& F = g.F;
  if (!g.degree() || *g.degree() == 0) return;
  if (*g.degree() == static_cast<int>(d)) {
    out.push_back(up_monic(g));
    return;
  }
  for (int attempt = 0; attempt < 512; ++attempt) {
    // random z of degree < deg g
    std::vector<Fq::Elem> zc;
    int dg = *g.degree();
    for (int i = 0; i < dg; ++i) {
      Fq::Elem e(F->k());
      for (unsigned t = 0; t < F->k(); ++t) e[t] = rng.below(F->p());
      zc.push_back(std::move(e));
    }
    UniPoly z(F, std::move(zc), g.var);
    if (z.is_zero()) continue;
    UniPoly sh = up_gcd(z, g);
    if (sh.degree() && *sh.degree() > 0 && *sh.degree() < dg) {
      equal_degree_factor(sh, d, rng, out);
      equal_degree_factor(up_divrem(g, sh).first, d, rng, out);
      return;
    }
    UniPoly A = half_power(z, d, g);
    UniPoly h = up_gcd(up_sub(A, up_const(F, F->one(), g.var)), g);
    if (h.degree() && *h.degree() > 0 && *h.degree() < dg) {
      equal_degree_factor(h, d, rng, out);
      equal_degree_factor(up_divrem(g, h).first, d, rng, out);
      return;
    }
  }
  throw std::logic_error("equal_degree_factor: splitting did not converge");
}

int cmp_poly(const UniPoly& a, const UniPoly& b) {
  int da = a.degree() ? *a.degree() : -1;
  int db = b.degree() ? *b.degree() : -1;
  if (da != db) return da < db ? -1 : 1;
  for (int i = da; i >= 0; --i) {
    int c = a.F->cmp(a.c[i], b.c[i]);
    if (c) return c;
  }
  return 0;
}

}  // namespace

UniFactorization up_factor(const UniPoly& f, uint64_t seed) {
  if (f.is_zero()) throw std::invalid_argument("up_factor: zero polynomial");
  const FqPtr& F = f.F;
  UniFactorization out;
  out.unit = f.lc();
  SplitMix64 rng(seed ^ 0x6a09e667f3bcc908ull);
  for (const auto& [part, mult] : up_squarefree_decomposition(f)) {
    for (const auto& [prod, d] : ddf(part)) {
      std::vector<UniPoly> irr;
      equal_degree_factor(prod, d, rng, irr);
      for (auto& q : irr) out.factors.emplace_back(std::move(q), mult);
    }
  }
  std::sort(out.factors.begin(), out.factors.end(),
            [](const auto& x, const auto& y) { return cmp_poly(x.first, y.first) < 0; });
  return out;
}

bool up_is_irreducible(const UniPoly& f) {
  if (!f.degree() || *f.degree() < 1) return false;
  int d = *f.degree();
  if (d == 1) return true;
  UniPoly fm = up_monic(f);
  UniPoly X = up_x(f.F, f.var);
  UniPoly pi = up_xq_mod(fm);  // X^{|F|} mod f
  // X^{|F|^d} == X and gcd(X^{|F|^{d/l}} - X, f) = 1 for prime l | d
  auto power_j = [&](unsigned j) {
    // X^{|F|^j} mod f by composing pi with itself (coefficients fixed by |F|)
    UniPoly acc = pi;
    unsigned top = 31;
    while (!((j >> top) & 1)) --top;
    for (unsigned i = top; i-- > 0;) {
      acc = up_compose_mod(acc, acc, fm);
      if ((j >> i) & 1) acc = up_compose_mod(acc, pi, fm);
    }
    return acc;
  };
  UniPoly xd = power_j(static_cast<unsigned>(d));
  if (!up_eq(xd, up_divrem(X, fm).second)) return false;
  unsigned rem = static_cast<unsigned>(d);
  for (unsigned l = 2; l * l <= rem; ++l) {
    if (rem % l) continue;
    UniPoly g = up_gcd(up_sub(power_j(static_cast<unsigned>(d) / l), X), fm);
    if (!g.degree() || *g.degree() != 0) return false;
    while (rem % l == 0) rem /= l;
  }
  if (rem > 1) {
    UniPoly g = up_gcd(up_sub(power_j(static_cast<unsigned>(d) / rem), X), fm);
    if (!g.degree() || *g.degree() != 0) return false;
  }
  return true;
}

std::vector<std::pair<Fq::Elem, unsigned>> up_roots_in(const UniPoly& f, const FqPtr& big,
                                                       uint64_t seed) {
  if (f.is_zero()) throw std::invalid_argument("up_roots_in: zero polynomial");
  const FqPtr& F = f.F;
  UniPoly fb(big, f.var);
  if (F == big) {
    fb = f;
  } else {
    Embedding emb = up_embed(F, big, seed);
    std::vector<Fq::Elem> c;
    c.reserve(f.c.size());
    for (const auto& e : f.c) c.push_back(emb(e));
    fb = UniPoly(big, std::move(c), f.var);
  }
  std::vector<std::pair<Fq::Elem, unsigned>> roots;
  SplitMix64 rng(seed ^ 0xbb67ae8584caa73bull);
  for (const auto& [part, mult] : up_squarefree_decomposition(fb)) {
    UniPoly pi = up_xq_mod(part);
    UniPoly lin = up_gcd(up_sub(pi, up_divrem(up_x(big, f.var), part).second), part);
    if (!lin.degree() || *lin.degree() == 0) continue;
    std::vector<UniPoly> irr;
    equal_degree_factor(lin, 1, rng, irr);
    for (const auto& q : irr) roots.emplace_back(big->neg(q.c[0]), mult);
  }
  std::sort(roots.begin(), roots.end(), [&](const auto& a, const auto& b) {
    return big->cmp(a.first, b.first) < 0;
  });
  return roots;
}

Fq::Elem Embedding::operator()(const Fq::Elem& a) const {
  Fq::Elem r = to->zero();
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) r = to->add(r, to->scal_mul(a[i], basis_image[i]));
  return r;
}

Embedding up_embed(const FqPtr& from, const FqPtr& to, uint64_t seed) {
  if (from->p() != to->p()) throw std::invalid_argument("up_embed: different characteristic");
  if (to->k() % from->k() != 0)
    throw std::invalid_argument("up_embed: degree does not divide");
  Embedding e{from, to, {}};
  e.basis_image.push_back(to->one());
  if (from->k() == 1) return e;
  // root of the small modulus in the big field, canonical smallest
  FqPtr Fp = Fq::prime(from->p());
  std::vector<uint64_t> mc = from->modulus();
  mc.push_back(1);
  UniPoly m = up_from_u64(Fp, mc, "T");
  auto roots = up_roots_in(m, to, seed);
  if (roots.empty()) throw std::logic_error("up_embed: modulus has no root in target");
  const Fq::Elem& rho = roots.front().first;
  for (unsigned i = 1; i < from->k(); ++i)
    e.basis_image.push_back(to->mul(e.basis_image.back(), rho));
  return e;
}

std::string up_to_string(const UniPoly& a) {
  if (a.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = a.c.size(); i-- > 0;) {
    if (a.F->is_zero(a.c[i])) continue;
    if (!first) os << " + ";
    first = false;
    os << a.F->to_string(a.c[i]);
    if (i == 1) os << "*" << a.var;
    else if (i > 1) os << "*" << a.var << "^" << i;
  }
  return os.str();
}

}  // namespace ecpn
