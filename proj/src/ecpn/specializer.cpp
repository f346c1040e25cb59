#include "ecpn/specializer.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "ecpn/rng.hpp"

namespace ecpn {
namespace {

struct Pt {
  bool inf = true;
  Fq::Elem x, y;
};

Pt pt_add(const FqPtr& F, const Pt& a, const Pt& b, const Fq::Elem& s) {
  if (a.inf) return b;
  if (b.inf) return a;
  Fq::Elem lam;
  if (F->eq(a.x, b.x)) {
    if (!F->eq(a.y, b.y) || F->is_zero(a.y)) return Pt{};
    // tangent slope (3x^2 + s) / 2y
    Fq::Elem num = F->add(F->scal_mul(3, F->mul(a.x, a.x)), s);
    lam = F->mul(num, F->inv(F->scal_mul(2, a.y)));
  } else {
    lam = F->mul(F->sub(b.y, a.y), F->inv(F->sub(b.x, a.x)));
  }
  Fq::Elem x3 = F->sub(F->sub(F->mul(lam, lam), a.x), b.x);
  Fq::Elem y3 = F->sub(F->mul(lam, F->sub(a.x, x3)), a.y);
  return Pt{false, std::move(x3), std::move(y3)};
}

Pt pt_mul(const FqPtr& F, uint64_t m, Pt base, const Fq::Elem& s) {
  Pt acc;
  while (m) {
    if (m & 1) acc = pt_add(F, acc, base, s);
    base = pt_add(F, base, base, s);
    m >>= 1;
  }
  return acc;
}

Fq::Elem curve_rhs(const FqPtr& F, const Fq::Elem& x, const Fq::Elem& s,
                   const Fq::Elem& t) {
  return F->add(F->mul(F->mul(x, x), x), F->add(F->mul(s, x), t));
}

std::optional<Fq::Elem> sqrt_in(const FqPtr& F, const Fq::Elem& a, uint64_t seed) {
  if (F->is_zero(a)) return F->zero();
  if (!F->is_square(a)) return std::nullopt;
  UniPoly f(F, {F->neg(a), F->zero(), F->one()}, "y");
  UniFactorization fac = up_factor(f, seed);
  for (const auto& [g, mult] : fac.factors)
    if (g.degree() && *g.degree() == 1) return F->neg(g.c[0]);
  return std::nullopt;
}

Embedding identity_embed(const FqPtr& F) {
  Embedding e{F, F, {}};
  for (unsigned i = 0; i < F->k(); ++i) {
    Fq::Elem b = F->zero();
    b[i] = 1;
    e.basis_image.push_back(std::move(b));
  }
  return e;
}

// up_embed between equal fields may land on a conjugate root of the shared
// modulus, so the identity case is resolved here
Embedding embed_into(const FqPtr& from, const FqPtr& to, uint64_t seed) {
  if (from.get() == to.get()) return identity_embed(from);
  return up_embed(from, to, seed);
}

uint64_t pow_u64_checked(uint64_t b, unsigned e) {
  uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > UINT64_MAX / b) throw budget_error("modulus overflows 64 bits");
    r *= b;
  }
  return r;
}

}  // namespace

CurveSpec make_curve(FqPtr field, Fq::Elem s0, Fq::Elem t0) {
  if (!field) throw std::invalid_argument("make_curve: null field");
  const FqPtr& F = field;
  Fq::Elem disc = F->add(F->scal_mul(4, F->mul(F->mul(s0, s0), s0)),
                         F->mul(F->from_uint(27), F->mul(t0, t0)));
  if (F->is_zero(disc)) throw std::invalid_argument("make_curve: singular curve");
  return CurveSpec{std::move(field), std::move(s0), std::move(t0)};
}

uint64_t count_points(const CurveSpec& c, uint64_t enum_budget) {
  const FqPtr& F = c.field;
  uint64_t p = F->p();
  unsigned k = F->k();
  uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    q *= p;
    if (q > enum_budget) throw budget_error("field too large for the enumeration budget");
  }
  uint64_t total = 1;  // infinity
  std::vector<uint64_t> coords(k, 0);
  for (uint64_t step = 0; step < q; ++step) {
    Fq::Elem x = F->from_coords(coords);
    Fq::Elem rhs = curve_rhs(F, x, c.s0, c.t0);
    if (F->is_zero(rhs))
      total += 1;
    else if (F->is_square(rhs))
      total += 2;
    for (unsigned d = 0; d < k; ++d) {
      if (++coords[d] < p) break;
      coords[d] = 0;
    }
  }
  return total;
}

int64_t trace_from_count(const CurveSpec& c, uint64_t count) {
  BigInt q = c.field->order();
  uint64_t qu = static_cast<uint64_t>(q);
  int64_t a = static_cast<int64_t>(qu) + 1 - static_cast<int64_t>(count);
  long double bound = 2.0L * std::sqrt(static_cast<long double>(qu));
  if (std::llabs(a) > static_cast<long long>(bound) + 1)
    throw std::logic_error("trace_from_count: count violates the Hasse bound");
  return a;
}

CurveSpec twist_curve(const CurveSpec& c, const Fq::Elem& d) {
  const FqPtr& F = c.field;
  if (F->is_zero(d)) throw std::invalid_argument("twist_curve: zero twisting scalar");
  Fq::Elem d2 = F->mul(d, d);
  return make_curve(F, F->mul(d2, c.s0), F->mul(F->mul(d2, d), c.t0));
}

Classification classify(const CurveSpec& c, int64_t trace, const ThetaData& th,
                        const SupersingularTable& ss) {
  const FqPtr& F = c.field;
  uint64_t p = F->p();
  if (!th.ok || th.p != p || ss.p != p)
    throw std::invalid_argument("classify: table prime mismatch");

  Classification out;
  int64_t r = trace % static_cast<int64_t>(p);
  out.ordinary = r != 0;

  const PBivar& lead = th.a.begin()->second;
  out.lead_vanishes = F->is_zero(bv_eval(lead, F, c.s0, c.t0));

  // j = 1728 * 4 s^3 / (4 s^3 + 27 t^2)
  Fq::Elem s3 = F->scal_mul(4, F->mul(F->mul(c.s0, c.s0), c.s0));
  Fq::Elem disc = F->add(s3, F->mul(F->from_uint(27), F->mul(c.t0, c.t0)));
  Fq::Elem j = F->mul(F->mul(F->from_uint(1728 % p), s3), F->inv(disc));

  bool j_zero = F->is_zero(j);
  bool j_1728 = F->eq(j, F->from_uint(1728 % p));
  if (j_zero)
    out.j_in_ss_set = ss.contains_0;
  else if (j_1728)
    out.j_in_ss_set = ss.contains_1728;
  else if (F->k() == 1)
    out.j_in_ss_set = F->is_zero(up_eval(ss.fss, j));
  else {
    // carry fss into the extension coefficientwise
    Fq::Elem acc = F->zero(), pw = F->one();
    for (const Fq::Elem& co : ss.fss.c) {
      acc = F->add(acc, F->scal_mul(co[0], pw));
      pw = F->mul(pw, j);
    }
    out.j_in_ss_set = F->is_zero(acc);
  }

  bool supersingular = !out.ordinary;
  out.consistent = true;
  if (out.lead_vanishes && out.ordinary) {
    out.consistent = false;
    out.note = "leading coefficient vanishes on an ordinary curve";
  } else if (supersingular && !out.lead_vanishes && !j_zero && !j_1728) {
    out.consistent = false;
    out.note = "supersingular trace but nonvanishing leading coefficient";
  } else if (out.j_in_ss_set != supersingular) {
    out.consistent = false;
    out.note = "j-invariant membership disagrees with the trace test";
  }
  return out;
}

uint64_t frobenius_unit_root(uint64_t p, unsigned n, int64_t trace, uint64_t q) {
  if (p < 5 || !is_prime_u64(p)) throw std::invalid_argument("p must be a prime >= 5");
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  int64_t r = trace % static_cast<int64_t>(p);
  if (r < 0) r += static_cast<int64_t>(p);
  if (r == 0) throw std::invalid_argument("frobenius_unit_root: trace divisible by p");
  uint64_t m = pow_u64_checked(p, n);
  if (m >= (1ull << 31)) throw budget_error("modulus too large for the lifting routine");
  uint64_t a = static_cast<uint64_t>((trace % static_cast<int64_t>(m) +
                                      static_cast<int64_t>(m)) % static_cast<int64_t>(m));
  uint64_t qq = q % m;
  // Newton iteration on f(T) = T^2 - a T + q from the simple root mod p
  uint64_t x = static_cast<uint64_t>(r);
  for (unsigned i = 0; i < n + 2; ++i) {
    uint64_t fx = fp_add(fp_sub(fp_mul(x, x, m), fp_mul(a, x, m), m), qq, m);
    uint64_t dfx = fp_sub(fp_mul(2, x, m), a, m);
    x = fp_sub(x, fp_mul(fx, fp_inv(dfx, m), m), m);
  }
  uint64_t check = fp_add(fp_sub(fp_mul(x, x, m), fp_mul(a, x, m), m), qq, m);
  if (check != 0) throw std::logic_error("frobenius_unit_root: lift failed its defining equation");
  return x;
}

uint64_t unit_root_order(uint64_t root, uint64_t p, unsigned n) {
  uint64_t m = pow_u64_checked(p, n);
  root %= m;
  if (root % p == 0) throw std::invalid_argument("unit_root_order: not a unit");
  // group order p^{n-1}(p-1); divide out prime factors
  std::vector<uint64_t> primes;
  uint64_t rest = p - 1;
  for (uint64_t d = 2; d * d <= rest; ++d)
    if (rest % d == 0) {
      primes.push_back(d);
      while (rest % d == 0) rest /= d;
    }
  if (rest > 1) primes.push_back(rest);
  if (n >= 2) primes.push_back(p);
  uint64_t ord = (p - 1) * pow_u64_checked(p, n - 1);
  for (uint64_t ell : primes)
    while (ord % ell == 0 && fp_pow(root, ord / ell, m) == 1) ord /= ell;
  return ord;
}

TorsionTower torsion_tower(const CurveSpec& c, unsigned n, const ThetaData& th,
                           const EtaData& et, PDivTable& tab, uint64_t seed) {
  TorsionTower out;
  const FqPtr& F0 = c.field;
  uint64_t p = F0->p();
  unsigned k0 = F0->k();
  if (!th.ok || th.p != p || !et.ok || et.p != p || tab.ring().p != p)
    throw std::invalid_argument("torsion_tower: table prime mismatch");
  if (n < 1) throw std::invalid_argument("torsion_tower: n must be >= 1");
  if (n > 2) throw budget_error("torsion tower supports n <= 2");

  auto fail = [&out](std::string msg) {
    out.ok = false;
    out.failure = std::move(msg);
    return out;
  };

  // level 1: roots of theta are the p-th powers of p-torsion x-coordinates
  UniPoly th_spec = theta_specialize(th, F0, c.s0, c.t0);
  if (!th_spec.degree() || *th_spec.degree() != static_cast<int>((p - 1) / 2))
    return fail("specialized theta degenerates; the curve is not ordinary");
  UniFactorization f1 = up_factor(th_spec, seed);
  unsigned m1 = 0;
  for (const auto& [g, mult] : f1.factors) {
    unsigned dg = static_cast<unsigned>(*g.degree());
    if (mult != 1) return fail("specialized theta is not squarefree");
    if (m1 == 0) m1 = dg;
    if (dg != m1) return fail("theta factors have mixed degrees");
  }
  FqPtr F1 = m1 == 1 ? F0 : Fq::extension(p, k0 * m1);
  Embedding e01 = embed_into(F0, F1, seed);
  Fq::Elem s1 = e01(c.s0), t1 = e01(c.t0);

  auto roots = up_roots_in(f1.factors.front().first, F1, seed);
  if (roots.empty()) return fail("theta factor has no root in its splitting field");
  Fq::Elem X1 = roots.front().first;
  Fq::Elem x1 = F1->pth_root(X1);
  Fq::Elem rhs1 = curve_rhs(F1, x1, s1, t1);
  if (F1->is_zero(rhs1)) return fail("torsion x-coordinate lands on a 2-torsion point");
  bool y1_in = F1->is_square(rhs1);
  uint64_t d1 = static_cast<uint64_t>(m1) * (y1_in ? 1 : 2);

  // honest group-law validation of the order over the full level-1 field
  {
    FqPtr Fd = y1_in ? F1 : Fq::extension(p, k0 * m1 * 2);
    Embedding e1d = embed_into(F1, Fd, seed);
    Fq::Elem xd = e1d(x1), sd = e1d(s1), td = e1d(t1);
    Fq::Elem rhsd = curve_rhs(Fd, xd, sd, td);
    std::optional<Fq::Elem> yd = sqrt_in(Fd, rhsd, seed);
    if (!yd) return fail("torsion y-coordinate missing from its predicted field");
    Pt P{false, xd, *yd};
    if (P.inf || !pt_mul(Fd, p, P, sd).inf)
      return fail("group law does not annihilate the level-1 point at p");
    if (pt_mul(Fd, 1, P, sd).inf) return fail("level-1 point degenerates");
  }
  out.levels.push_back(TorsionLevel{1, m1, !y1_in, d1});

  if (n >= 2) {
    // level 2: roots of eta at xt = x1 are p-th powers of the x-coordinates
    // of points whose multiple by p lands on x1
    UniPoly eta_spec = eta_specialize(et, F1, s1, t1, x1);
    if (!eta_spec.degree() || *eta_spec.degree() != static_cast<int>(p))
      return fail("specialized eta degenerates");
    UniFactorization f2 = up_factor(eta_spec, seed);
    unsigned e2 = 0;
    for (const auto& [g, mult] : f2.factors) {
      unsigned dg = static_cast<unsigned>(*g.degree());
      if (mult != 1) return fail("specialized eta is not squarefree");
      if (e2 == 0) e2 = dg;
      if (dg != e2) return fail("eta factors have mixed degrees");
    }
    uint64_t m2 = static_cast<uint64_t>(m1) * e2;

    // minimal polynomial of x2 over F1: coefficientwise p-th root of the
    // factor satisfied by x2^p
    const UniPoly& g2 = f2.factors.front().first;
    std::vector<Fq::Elem> hc;
    hc.reserve(g2.c.size());
    for (const Fq::Elem& co : g2.c) hc.push_back(F1->pth_root(co));
    UniPoly h(F1, std::move(hc), "x");

    // the p-th power of the residue class must satisfy eta
    UniPoly Tp = up_powmod(up_x(F1), BigInt(p), h);
    if (!up_compose_mod(eta_spec, Tp, h).is_zero())
      return fail("eta does not vanish on the p-th power of the tower generator");

    // multiplication by p maps x2 to x1 exactly
    MultXMap<FpRing> mp = mult_by_m_x(static_cast<unsigned>(p), tab);
    UniPoly N = xp_eval_st(mp.num, F1, s1, t1);
    UniPoly D = xp_eval_st(mp.den, F1, s1, t1);
    UniPoly rn = up_divrem(N, h).second;
    UniPoly rd = up_divrem(D, h).second;
    if (rd.is_zero()) return fail("tower point collapses into the p-torsion");
    if (!up_eq(rn, up_scale(x1, rd)))
      return fail("multiplication by p misses the level-1 x-coordinate");

    // y-coordinate: x2^3 + s x2 + t is a square in F1[x]/(h) exactly when its
    // norm to F1 is a square there
    UniPoly zfull(F1, {t1, s1, F1->zero(), F1->one()}, "x");
    UniPoly z = up_divrem(zfull, h).second;
    if (z.is_zero()) return fail("level-2 x-coordinate lands on a 2-torsion point");
    Fq::Elem nrm = up_resultant(h, z);
    bool y2_in = F1->is_square(nrm);
    uint64_t d2 = m2 * (y2_in ? 1 : 2);
    out.levels.push_back(TorsionLevel{2, m2, !y2_in, d2});
  }

  out.ok = true;
  return out;
}

SpecializeReport run_specialization(const SpecializeConfig& cfg) {
  uint64_t p = cfg.p;
  if (p < 5 || !is_prime_u64(p)) throw std::invalid_argument("p must be a prime >= 5");
  if (cfg.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (cfg.n_max > 2) throw budget_error("torsion tower supports n <= 2");
  unsigned k = 0;
  for (uint64_t t = cfg.q; t > 1; t /= p) {
    if (t % p != 0) throw std::invalid_argument("q must be a positive power of p");
    ++k;
  }
  if (k == 0) throw std::invalid_argument("q must be a positive power of p");
  if (cfg.q > cfg.enum_budget) throw budget_error("field too large for the enumeration budget");

  SpecializeReport rep;
  rep.p = p;
  rep.q = cfg.q;
  rep.samples = cfg.samples;
  rep.n_max = cfg.n_max;
  rep.seed = cfg.seed;
  rep.all_matched = true;

  FqPtr F = k == 1 ? Fq::prime(p) : Fq::extension(p, k);
  PDivTable tab(FpRing{p}, cfg.cache_dir);
  ThetaData th = extract_theta(p, tab);
  EtaData et = extract_eta(p, tab);
  if (!th.ok || !et.ok) throw std::logic_error("extraction failed for a valid prime");
  SupersingularTable ss = supersingular_table(p, cfg.seed);

  SplitMix64 rng{cfg.seed ^ (p * 0x9e3779b97f4a7c15ull) ^ cfg.q};
  for (unsigned i = 0; i < cfg.samples; ++i) {
    Fq::Elem s0 = F->zero(), t0 = F->zero();
    while (true) {
      std::vector<uint64_t> sc(k), tc(k);
      for (auto& v : sc) v = rng.below(p);
      for (auto& v : tc) v = rng.below(p);
      s0 = F->from_coords(std::move(sc));
      t0 = F->from_coords(std::move(tc));
      Fq::Elem disc = F->add(F->scal_mul(4, F->mul(F->mul(s0, s0), s0)),
                             F->mul(F->from_uint(27), F->mul(t0, t0)));
      if (!F->is_zero(disc)) break;
    }
    CurveSpec c = make_curve(F, s0, t0);

    SampleRecord recd;
    recd.s_coords = s0;
    recd.t_coords = t0;
    recd.count = count_points(c, cfg.enum_budget);
    recd.trace = trace_from_count(c, recd.count);
    Classification cls = classify(c, recd.trace, th, ss);
    recd.ordinary = cls.ordinary;
    recd.class_consistent = cls.consistent;
    recd.ok = cls.consistent;
    if (!cls.consistent) {
      recd.note = cls.note;
      rep.all_matched = false;
    }

    if (cls.ordinary) {
      ++rep.ordinary_count;
      TorsionTower tower = torsion_tower(c, cfg.n_max, th, et, tab, cfg.seed + i);
      if (!tower.ok) {
        recd.ok = false;
        recd.note = tower.failure;
        rep.all_matched = false;
      } else {
        for (unsigned nn = 1; nn <= cfg.n_max; ++nn) {
          LevelComparison lc;
          lc.n = nn;
          lc.modulus = pow_u64_checked(p, nn);
          lc.unit_root = frobenius_unit_root(p, nn, recd.trace, cfg.q);
          lc.predicted = unit_root_order(lc.unit_root, p, nn);
          lc.observed = tower.levels[nn - 1].full_degree;
          uint64_t group = (p - 1) * pow_u64_checked(p, nn - 1);
          lc.divides_group_order = group % lc.predicted == 0;
          lc.match = lc.divides_group_order && lc.predicted == lc.observed;
          if (!lc.match) {
            recd.ok = false;
            rep.all_matched = false;
          }
          if (nn == 1) rep.max_observed_level1 = std::max(rep.max_observed_level1, lc.observed);
          recd.levels.push_back(lc);
        }
      }
    } else {
      ++rep.supersingular_count;
      if (recd.note.empty()) recd.note = "supersingular: no unit root, tower skipped";
    }
    rep.records.push_back(std::move(recd));
  }

  rep.notes = {
      "the inseparable part of the p-power map is invisible over a perfect field;"
      " only the exact-form extraction carries it",
      "specialization samples generic behavior; matching degrees corroborate the"
      " unit-root prediction without exhausting it",
  };
  return rep;
}

}  // namespace ecpn
