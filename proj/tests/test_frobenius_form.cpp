#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <set>

#include "doctest.h"
#include "ecpn/frobform.hpp"
#include "ecpn/rng.hpp"

using namespace ecpn;

namespace {

// rebuild psi from the a-table by spreading X^j back to x^{p j}
PXPoly respread_theta(const ThetaData& th) {
  FpRing ring{th.p};
  PXPoly out(ring);
  out.c.assign(static_cast<size_t>(th.p) * th.X_degree + 1, PBivar(ring));
  for (const auto& [k, co] : th.a) {
    unsigned i = (k - th.X_degree) / static_cast<unsigned>(th.p);
    out.c[static_cast<size_t>(th.p) * (th.X_degree - i)] = co;
  }
  out.trim();
  return out;
}

UniPoly spread_exponents(const UniPoly& f, unsigned step) {
  std::vector<Fq::Elem> coeffs(f.c.size() * step + 1, f.F->zero());
  for (size_t i = 0; i < f.c.size(); ++i) coeffs[i * step] = f.c[i];
  return UniPoly(f.F, coeffs, f.var);
}

}  // namespace

TEST_CASE("theta for p=5 matches the hand-derived table") {
  PDivTable tab{FpRing{5}};
  ThetaData th = extract_theta(5, tab);
  REQUIRE(th.ok);
  CHECK(th.X_degree == 2);
  std::set<unsigned> keys;
  for (const auto& [k, v] : th.a) keys.insert(k);
  CHECK(keys == std::set<unsigned>{2, 7, 12});
  CHECK(bv_to_string(th.a.at(2)) == "2*s");
  CHECK(bv_to_string(th.a.at(7)) == "4*s^2*t");
  CHECK(bv_to_string(th.a.at(12)) == "1*s^6 + 3*s^3*t^2 + 4*t^4");
}

TEST_CASE("theta single-monomial coefficients for p=7 and p=11") {
  {
    PDivTable tab{FpRing{7}};
    ThetaData th = extract_theta(7, tab);
    REQUIRE(th.ok);
    REQUIRE(th.a.count(3) == 1);
    const auto& a3 = th.a.at(3);
    REQUIRE(a3.terms.size() == 1);
    CHECK(a3.terms.begin()->first == BvKey{0, 1});
  }
  {
    PDivTable tab{FpRing{11}};
    ThetaData th = extract_theta(11, tab);
    REQUIRE(th.ok);
    REQUIRE(th.a.count(5) == 1);
    const auto& a5 = th.a.at(5);
    REQUIRE(a5.terms.size() == 1);
    CHECK(a5.terms.begin()->first == BvKey{1, 1});
  }
}

TEST_CASE("theta extraction round-trips and carries the stated index set") {
  for (uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    PDivTable tab{FpRing{p}};
    ThetaData th = extract_theta(p, tab);
    CAPTURE(p);
    REQUIRE(th.ok);
    CHECK(th.failure.empty());
    CHECK(th.X_degree == (p - 1) / 2);

    std::set<unsigned> want;
    for (unsigned i = 0; i <= th.X_degree; ++i)
      want.insert(th.X_degree + static_cast<unsigned>(p) * i);
    std::set<unsigned> got;
    for (const auto& [k, v] : th.a) got.insert(k);
    CHECK(got == want);

    for (const auto& [k, v] : th.a) {
      if (v.is_zero()) continue;
      auto w = bv_weight(v);
      REQUIRE(w.has_value());
      CHECK(*w == k);
    }

    PXPoly psi = tab.get(static_cast<unsigned>(p));
    psi.y_parity = false;
    CHECK(xp_eq(respread_theta(th), psi));
  }
}

TEST_CASE("a stray monomial is a reported failure, not a crash") {
  PDivTable tab{FpRing{5}};
  PXPoly psi = tab.get(5);
  psi.y_parity = false;
  psi.c[3] = bv_const(FpRing{5}, uint64_t{1});
  ThetaData th = theta_from_psi(5, psi);
  CHECK_FALSE(th.ok);
  CHECK(th.failure.find("x^3") != std::string::npos);

  SigmaPoly<FpRing> sg = sigma_poly(5, tab);
  sg.xt_part.c[7] = bv_const(FpRing{5}, uint64_t{2});
  EtaData et = eta_from_sigma(5, sg);
  CHECK_FALSE(et.ok);
  CHECK(et.failure.find("x^7") != std::string::npos);
}

TEST_CASE("eta extraction round-trips against sigma") {
  for (uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    PDivTable tab{FpRing{p}};
    EtaData et = extract_eta(p, tab);
    CAPTURE(p);
    REQUIRE(et.ok);

    std::set<unsigned> bwant, cwant, bgot, cgot;
    for (unsigned i = 1; i <= p; ++i) {
      bwant.insert(static_cast<unsigned>(p) * i);
      cwant.insert(static_cast<unsigned>(p) * i - 1);
    }
    for (const auto& [k, v] : et.b) bgot.insert(k);
    for (const auto& [k, v] : et.c) cgot.insert(k);
    CHECK(bgot == bwant);
    CHECK(cgot == cwant);

    FpRing ring{p};
    SigmaPoly<FpRing> sg = sigma_poly(static_cast<unsigned>(p), tab);
    PXPoly xrebuilt(ring), xtrebuilt(ring);
    xrebuilt.c.assign(static_cast<size_t>(p) * p + 1, PBivar(ring));
    xtrebuilt.c.assign(static_cast<size_t>(p) * p + 1, PBivar(ring));
    xrebuilt.c[static_cast<size_t>(p) * p] = bv_const(ring, uint64_t{1});
    for (unsigned i = 1; i <= p; ++i) {
      xrebuilt.c[static_cast<size_t>(p) * (p - i)] = et.b.at(static_cast<unsigned>(p) * i);
      xtrebuilt.c[static_cast<size_t>(p) * (p - i)] = et.c.at(static_cast<unsigned>(p) * i - 1);
    }
    xrebuilt.trim();
    xtrebuilt.trim();
    CHECK(xp_eq(xrebuilt, sg.x_part));
    CHECK(xp_eq(xtrebuilt, sg.xt_part));
  }
}

TEST_CASE("constant c-coefficient is minus the square of the constant a-coefficient") {
  for (uint64_t p : {5ull, 7ull, 11ull}) {
    PDivTable tab{FpRing{p}};
    ThetaData th = extract_theta(p, tab);
    EtaData et = extract_eta(p, tab);
    REQUIRE(th.ok);
    REQUIRE(et.ok);
    unsigned kconst = static_cast<unsigned>((p * p - 1) / 2);
    const PBivar& aconst = th.a.at(kconst);
    const PBivar& ctop = et.c.at(static_cast<unsigned>(p * p - 1));
    CAPTURE(p);
    CHECK(bv_eq(ctop, bv_neg(bv_mul(aconst, aconst))));
  }
}

TEST_CASE("c-relation holds with the true leading coefficient") {
  for (uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
    PDivTable tab{FpRing{p}};
    EtaData et = extract_eta(p, tab);
    REQUIRE(et.ok);
    CRelationResult r = check_c_relation(p, et, tab);
    CAPTURE(p);
    CHECK(r.holds);
    CHECK(r.lambda == 1);
    CHECK(r.residual.is_zero());
  }

  // corrupting one coefficient leaves a nonzero residual
  PDivTable tab{FpRing{5}};
  EtaData et = extract_eta(5, tab);
  et.c[4] = bv_add(et.c[4], bv_term(FpRing{5}, uint64_t{1}, 2, 0));
  CRelationResult r = check_c_relation(5, et, tab);
  CHECK_FALSE(r.holds);
  CHECK_FALSE(r.residual.is_zero());
}

TEST_CASE("theta specialization at fixed points of F_5") {
  PDivTable tab{FpRing{5}};
  ThetaData th = extract_theta(5, tab);
  REQUIRE(th.ok);
  auto F = Fq::prime(5);

  UniPoly at01 = theta_specialize(th, F, F->from_uint(0), F->from_uint(1));
  CHECK(up_to_string(at01) == "4");

  UniPoly at11 = theta_specialize(th, F, F->from_uint(1), F->from_uint(1));
  CHECK(up_to_string(at11) == "2*x^2 + 4*x + 3");
}

TEST_CASE("eta specialization satisfies eta(x^p) = sigma at sample points") {
  SplitMix64 rng{0x5e7a5e7au};
  for (uint64_t p : {5ull, 7ull}) {
    PDivTable tab{FpRing{p}};
    EtaData et = extract_eta(p, tab);
    REQUIRE(et.ok);
    SigmaPoly<FpRing> sg = sigma_poly(static_cast<unsigned>(p), tab);
    auto F = Fq::prime(p);
    for (int trial = 0; trial < 5; ++trial) {
      Fq::Elem s0 = F->from_uint(rng.below(p));
      Fq::Elem t0 = F->from_uint(rng.below(p));
      Fq::Elem xt = F->from_uint(rng.below(p));
      UniPoly eta_sp = eta_specialize(et, F, s0, t0, xt);
      UniPoly lhs = spread_exponents(eta_sp, static_cast<unsigned>(p));
      UniPoly rhs = up_add(xp_eval_st(sg.x_part, F, s0, t0),
                           up_scale(xt, xp_eval_st(sg.xt_part, F, s0, t0)));
      CAPTURE(p);
      CAPTURE(trial);
      CHECK(up_eq(lhs, rhs));
    }
  }
}
