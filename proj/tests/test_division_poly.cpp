#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <set>

#include "doctest.h"
#include "ecpn/divpoly.hpp"
#include "ecpn/rng.hpp"

using namespace ecpn;

namespace {

// ---- reference group law over a small prime field, plain % arithmetic ----

uint64_t madd(uint64_t a, uint64_t b, uint64_t p) { return (a + b) % p; }
uint64_t msub(uint64_t a, uint64_t b, uint64_t p) { return (a + p - b) % p; }
uint64_t mmul(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
uint64_t mpow(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mmul(r, a, p);
    a = mmul(a, a, p);
    e >>= 1;
  }
  return r;
}
uint64_t minv(uint64_t a, uint64_t p) { return mpow(a, p - 2, p); }

struct ModCurve {
  uint64_t p, s, t;
};

struct Pt {
  bool inf = true;
  uint64_t x = 0, y = 0;
};

Pt pt_add(const ModCurve& c, const Pt& A, const Pt& B) {
  if (A.inf) return B;
  if (B.inf) return A;
  if (A.x == B.x && (A.y + B.y) % c.p == 0) return {};
  uint64_t lam;
  if (A.x == B.x && A.y == B.y) {
    uint64_t numv = madd(mmul(3, mmul(A.x, A.x, c.p), c.p), c.s, c.p);
    lam = mmul(numv, minv(mmul(2, A.y, c.p), c.p), c.p);
  } else {
    lam = mmul(msub(B.y, A.y, c.p), minv(msub(B.x, A.x, c.p), c.p), c.p);
  }
  uint64_t x3 = msub(msub(mmul(lam, lam, c.p), A.x, c.p), B.x, c.p);
  uint64_t y3 = msub(mmul(lam, msub(A.x, x3, c.p), c.p), A.y, c.p);
  return {false, x3, y3};
}

Pt pt_mul_naive(const ModCurve& c, const Pt& A, unsigned m) {
  Pt r{};
  for (unsigned i = 0; i < m; ++i) r = pt_add(c, r, A);
  return r;
}

uint64_t curve_rhs_at(const ModCurve& c, uint64_t x) {
  return madd(madd(mmul(x, mmul(x, x, c.p), c.p), mmul(c.s, x, c.p), c.p), c.t, c.p);
}

// evaluate the s,t,x coefficients of a mod-p polynomial with plain arithmetic
uint64_t eval_xp(const PXPoly& f, uint64_t s0, uint64_t t0, uint64_t x0) {
  uint64_t p = f.ring.p, acc = 0;
  for (size_t d = f.c.size(); d-- > 0;) {
    acc = mmul(acc, x0, p);
    uint64_t cv = 0;
    for (const auto& [k, v] : f.c[d].terms)
      cv = madd(cv, mmul(v, mmul(mpow(s0, k.first, p), mpow(t0, k.second, p), p), p), p);
    acc = madd(acc, cv, p);
  }
  return acc;
}

// ---- reference group law over an Fq extension, for roots with y outside F_p ----

struct FPt {
  bool inf = true;
  Fq::Elem x, y;
};

FPt fpt_add(const FqPtr& F, const Fq::Elem& s, const FPt& A, const FPt& B) {
  if (A.inf) return B;
  if (B.inf) return A;
  if (F->eq(A.x, B.x) && F->is_zero(F->add(A.y, B.y))) return {};
  Fq::Elem lam;
  if (F->eq(A.x, B.x)) {
    Fq::Elem numv = F->add(F->scal_mul(3, F->mul(A.x, A.x)), s);
    lam = F->mul(numv, F->inv(F->scal_mul(2, A.y)));
  } else {
    lam = F->mul(F->sub(B.y, A.y), F->inv(F->sub(B.x, A.x)));
  }
  Fq::Elem x3 = F->sub(F->sub(F->mul(lam, lam), A.x), B.x);
  Fq::Elem y3 = F->sub(F->mul(lam, F->sub(A.x, x3)), A.y);
  return {false, x3, y3};
}

FPt fpt_mul_naive(const FqPtr& F, const Fq::Elem& s, const FPt& A, unsigned m) {
  FPt r{};
  for (unsigned i = 0; i < m; ++i) r = fpt_add(F, s, r, A);
  return r;
}

std::vector<Fq::Elem> all_elements(const FqPtr& F) {
  std::vector<Fq::Elem> out;
  std::vector<uint64_t> coords(F->k(), 0);
  while (true) {
    out.push_back(F->from_coords(coords));
    size_t i = 0;
    while (i < coords.size() && ++coords[i] == F->p()) coords[i++] = 0;
    if (i == coords.size()) break;
  }
  return out;
}

long expected_weight(unsigned m) {
  return (m % 2) ? (static_cast<long>(m) * m - 1) / 2 : (static_cast<long>(m) * m - 4) / 2;
}

}  // namespace

TEST_CASE("base cases and frozen strings") {
  auto p1 = division_poly_z(1);
  CHECK(xp_to_string(p1) == "1");
  CHECK_FALSE(p1.y_parity);

  auto p2 = division_poly_z(2);
  CHECK(xp_to_string(p2) == "2");
  CHECK(p2.y_parity);

  auto p3 = division_poly_z(3);
  CHECK(xp_to_string(p3) == "3*x^4 + 6*s*x^2 + 12*t*x + -1*s^2");
  CHECK_FALSE(p3.y_parity);

  auto p4 = division_poly_z(4);
  CHECK(xp_to_string(p4) ==
        "4*x^6 + 20*s*x^4 + 80*t*x^3 + -20*s^2*x^2 + -16*s*t*x + -4*s^3 + -32*t^2");
  CHECK(p4.y_parity);

  CHECK_THROWS_AS(division_poly_z(0), std::invalid_argument);
  CHECK_THROWS_AS(division_poly_p(3, 4), std::invalid_argument);
  CHECK_THROWS_AS(division_poly_p(3, 3), std::invalid_argument);

  CHECK(xp_to_string(division_poly_p(3, 7)) == "3*x^4 + 6*s*x^2 + 5*t*x + 6*s^2");

  // the x^12 term of P_5 has coefficient 5, so it vanishes mod 5
  auto p5z = division_poly_z(5);
  REQUIRE(p5z.degree() == 12);
  auto p5 = division_poly_p(5, 5);
  REQUIRE(p5.degree().has_value());
  CHECK(*p5.degree() < 12);
  CHECK(xp_eq(p5, xp_mod_p(p5z, 5)));
}

TEST_CASE("degree, leading coefficient, weight ledger over Z") {
  ZDivTable tab{ZRing{}};
  tab.warm(25);
  for (unsigned m = 1; m <= 25; ++m) {
    const auto& P = tab.get(m);
    CAPTURE(m);
    CHECK(P.y_parity == (m % 2 == 0));
    long w = expected_weight(m);
    REQUIRE(P.degree() == static_cast<int>(w));
    auto wt = xp_weight(P);
    REQUIRE(wt.has_value());
    CHECK(*wt == w);
    CHECK(bv_eq(P.lc(), bv_const(ZRing{}, BigInt(m))));
  }
}

TEST_CASE("mod-p reduction commutes with the recurrence run in F_p") {
  ZDivTable ztab{ZRing{}};
  ztab.warm(15);
  for (uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    PDivTable ptab{FpRing{p}};
    for (unsigned m = 1; m <= 15; ++m) {
      CAPTURE(p);
      CAPTURE(m);
      CHECK(xp_eq(reduce_mod_p(ztab.get(m), p), ptab.get(m)));
    }
  }
}

TEST_CASE("multiplication-by-m map: frozen m=2 and degrees") {
  ZDivTable tab{ZRing{}};
  auto m2 = mult_by_m_x(2, tab);
  CHECK(xp_to_string(m2.num) == "1*x^4 + -2*s*x^2 + -8*t*x + 1*s^2");
  CHECK(xp_to_string(m2.den) == "4*x^3 + 4*s*x + 4*t");
  for (unsigned m = 2; m <= 5; ++m) {
    auto mm = mult_by_m_x(m, tab);
    CAPTURE(m);
    CHECK(mm.num.degree() == static_cast<int>(m * m));
    CHECK(mm.den.degree() == static_cast<int>(m * m - 1));
    CHECK_FALSE(mm.num.y_parity);
    CHECK_FALSE(mm.den.y_parity);
  }
  CHECK_THROWS_AS(mult_by_m_x(1, tab), std::invalid_argument);
}

TEST_CASE("multiplication-by-m map agrees with the group law over F_101") {
  const uint64_t p = 101;
  PDivTable tab{FpRing{p}};
  SplitMix64 rng{0x1d1f00d5u};
  unsigned trials = 0;
  while (trials < 10) {
    ModCurve c{p, rng.below(p), rng.below(p)};
    uint64_t disc = madd(mmul(4, mmul(c.s, mmul(c.s, c.s, p), p), p),
                         mmul(27, mmul(c.t, c.t, p), p), p);
    if (disc == 0) continue;
    uint64_t x0 = rng.below(p);
    uint64_t rhs = curve_rhs_at(c, x0);
    uint64_t y0 = p;
    for (uint64_t y = 0; y < p; ++y)
      if (mmul(y, y, p) == rhs) {
        y0 = y;
        break;
      }
    if (y0 == p) continue;
    Pt P{false, x0, y0};
    for (unsigned m : {2u, 3u, 5u}) {
      auto mm = mult_by_m_x(m, tab);
      uint64_t nv = eval_xp(mm.num, c.s, c.t, x0);
      uint64_t dv = eval_xp(mm.den, c.s, c.t, x0);
      Pt Q = pt_mul_naive(c, P, m);
      CAPTURE(c.s);
      CAPTURE(c.t);
      CAPTURE(x0);
      CAPTURE(m);
      if (Q.inf) {
        CHECK(dv == 0);
      } else {
        REQUIRE(dv != 0);
        CHECK(nv == mmul(Q.x, dv, p));
      }
    }
    ++trials;
  }
}

TEST_CASE("roots of psi_m are exactly the m-torsion x-coordinates") {
  for (uint64_t p : {5ull, 7ull}) {
    PDivTable tab{FpRing{p}};
    auto F2 = Fq::extension(p, 2);
    auto elems = all_elements(F2);
    std::vector<unsigned> ms;
    for (unsigned m = 2; m <= 6; ++m)
      if (m % p != 0) ms.push_back(m);
    for (unsigned m : ms) {
      const auto& P = tab.get(m);
      ModCurve c{p, 2 % p, 1};  // 4*8 + 27 != 0 mod 5 and mod 7
      CAPTURE(p);
      CAPTURE(m);

      // every rational m-torsion point evaluates the stored part (or its y
      // cofactor) to zero
      for (uint64_t x = 0; x < p; ++x)
        for (uint64_t y = 0; y < p; ++y) {
          if (mmul(y, y, p) != curve_rhs_at(c, x)) continue;
          Pt pt{false, x, y};
          if (!pt_mul_naive(c, pt, m).inf) continue;
          bool stored_zero = eval_xp(P, c.s, c.t, x) == 0;
          bool y_zero = (y == 0);
          CHECK((stored_zero || (P.y_parity && y_zero)));
        }

      // every root in F_p of the stored part gives an m-torsion point, with y
      // found in F_{p^2} when it is not rational
      Fq::Elem s2 = F2->from_uint(c.s), t2 = F2->from_uint(c.t);
      for (uint64_t x = 0; x < p; ++x) {
        if (eval_xp(P, c.s, c.t, x) != 0) continue;
        Fq::Elem xe = F2->from_uint(x);
        Fq::Elem rhs = F2->add(F2->add(F2->mul(xe, F2->mul(xe, xe)), F2->mul(s2, xe)), t2);
        FPt pt;
        for (const auto& y : elems)
          if (F2->eq(F2->mul(y, y), rhs)) {
            pt = {false, xe, y};
            break;
          }
        REQUIRE_FALSE(pt.inf);
        CHECK(fpt_mul_naive(F2, s2, pt, m).inf);
      }
    }
  }
}

TEST_CASE("specialized division polynomials are separable away from p") {
  const uint64_t p = 7;
  PDivTable tab{FpRing{p}};
  auto F = Fq::prime(p);
  SplitMix64 rng{0xabcdef12u};
  for (unsigned m = 2; m <= 6; ++m) {
    for (int trial = 0; trial < 3;) {
      uint64_t s0 = rng.below(p), t0 = rng.below(p);
      uint64_t disc = madd(mmul(4, mmul(s0, mmul(s0, s0, p), p), p),
                           mmul(27, mmul(t0, t0, p), p), p);
      if (disc == 0) continue;
      UniPoly f = xp_eval_st(tab.get(m), F, F->from_uint(s0), F->from_uint(t0));
      UniPoly g = up_gcd(f, up_derivative(f));
      CAPTURE(m);
      CAPTURE(s0);
      CAPTURE(t0);
      REQUIRE(g.degree().has_value());
      CHECK(*g.degree() == 0);
      ++trial;
    }
  }
}

TEST_CASE("sigma: x-degree p^2, monic, xt part, weights") {
  ZDivTable ztab{ZRing{}};
  for (unsigned p : {5u, 7u}) {
    auto sg = sigma_poly(p, ztab);
    CAPTURE(p);
    REQUIRE(sg.x_part.degree() == static_cast<int>(p * p));
    // computed leading coefficient: the x*P_p^2 term contributes p^2 on top of
    // -(p^2 - 1) from the product part, so sigma is monic in x
    CHECK(bv_eq(sg.x_part.lc(), bv_const(ZRing{}, BigInt(1))));
    ZXPoly pbare = ztab.get(p);
    pbare.y_parity = false;
    CHECK(xp_eq(sg.xt_part, xp_neg(xp_mul(pbare, pbare))));
    auto w0 = xp_weight(sg.x_part);
    auto w1 = xp_weight(sg.xt_part);
    REQUIRE(w0.has_value());
    REQUIRE(w1.has_value());
    CHECK(*w0 == static_cast<long>(p) * p);
    CHECK(*w1 == static_cast<long>(p) * p - 1);
    CHECK(xp_eq(sg.x_part, mult_by_m_x(p, ztab).num));
  }

  PDivTable ptab{FpRing{5}};
  auto sg5 = sigma_poly(5, ptab);
  REQUIRE(sg5.x_part.degree() == 25);
  CHECK(bv_eq(sg5.x_part.lc(), bv_const(FpRing{5}, uint64_t{1})));
  for (size_t d = 0; d < sg5.x_part.c.size(); ++d)
    if (!sg5.x_part.c[d].is_zero()) CHECK(d % 5 == 0);
  for (size_t d = 0; d < sg5.xt_part.c.size(); ++d)
    if (!sg5.xt_part.c[d].is_zero()) CHECK(d % 5 == 0);

  CHECK_THROWS_AS(sigma_poly(4, ztab), std::invalid_argument);
  CHECK_THROWS_AS(sigma_poly(3, ztab), std::invalid_argument);
}

TEST_CASE("disk cache: roundtrip, load path, corruption recovery") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "ecpn_divpoly_cache_test";
  fs::remove_all(dir);

  {
    ZDivTable tab{ZRing{}, dir};
    tab.warm(8);
  }
  CHECK(fs::exists(dir / "psi_Z_m3.poly"));
  CHECK(fs::exists(dir / "psi_Z_m8.poly"));

  ZDivTable ref{ZRing{}};

  // a planted shape-valid variant proves entries really load from disk
  {
    std::ofstream out(dir / "psi_Z_m3.poly", std::ios::trunc);
    out << "ring=Z m=3 parity=0\n3*x^4 + 6*s*x^2 + 12*t*x + -2*s^2\n";
  }
  {
    ZDivTable tab{ZRing{}, dir};
    CHECK_FALSE(xp_eq(tab.get(3), ref.get(3)));
    CHECK(xp_eq(tab.get(3), xp_parse_z("3*x^4 + 6*s*x^2 + 12*t*x + -2*s^2")));
  }

  // garbage body: recomputed and rewritten
  {
    std::ofstream out(dir / "psi_Z_m3.poly", std::ios::trunc);
    out << "ring=Z m=3 parity=0\nnot a polynomial\n";
  }
  {
    ZDivTable tab{ZRing{}, dir};
    CHECK(xp_eq(tab.get(3), ref.get(3)));
  }
  {
    std::ifstream in(dir / "psi_Z_m3.poly");
    std::string header, body;
    std::getline(in, header);
    std::getline(in, body);
    CHECK(header == "ring=Z m=3 parity=0");
    CHECK(body == "3*x^4 + 6*s*x^2 + 12*t*x + -1*s^2");
  }

  // wrong header field: never trusted
  {
    std::ofstream out(dir / "psi_Z_m5.poly", std::ios::trunc);
    out << "ring=Z m=5 parity=1\n" << xp_to_string(ref.get(4)) << "\n";
  }
  {
    ZDivTable tab{ZRing{}, dir};
    CHECK(xp_eq(tab.get(5), ref.get(5)));
  }

  // wrong leading coefficient fails the shape check
  {
    std::ofstream out(dir / "psi_Z_m3.poly", std::ios::trunc);
    out << "ring=Z m=3 parity=0\n4*x^4 + 6*s*x^2 + 12*t*x + -1*s^2\n";
  }
  {
    ZDivTable tab{ZRing{}, dir};
    CHECK(xp_eq(tab.get(3), ref.get(3)));
  }

  // mod-p cache files live under their own names
  {
    PDivTable tab{FpRing{5}, dir};
    tab.warm(6);
  }
  CHECK(fs::exists(dir / "psi_Fp5_m4.poly"));
  {
    PDivTable tab{FpRing{5}, dir};
    PDivTable fresh{FpRing{5}};
    for (unsigned m = 1; m <= 6; ++m) CHECK(xp_eq(tab.get(m), fresh.get(m)));
  }

  fs::remove_all(dir);
}
