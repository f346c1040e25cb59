#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "ecpn/supersingular.hpp"

using namespace ecpn;

namespace {

const std::vector<uint64_t> kPrimes = {5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                                       47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

bool in_j_set(const SupersingularTable& tab, const Fq::Elem& v) {
  for (const auto& j : tab.j_set)
    if (tab.Fp2->eq(j, v)) return true;
  return false;
}

bool poly_squarefree(const UniPoly& f) {
  UniPoly g = up_gcd(f, up_derivative(f));
  return g.degree() && *g.degree() == 0;
}

}  // namespace

TEST_CASE("Hasse polynomial frozen values and shape") {
  UniPoly h5 = hasse_poly(5);
  CHECK(up_to_string(h5) == "1*lambda^2 + 4*lambda + 1");
  UniPoly h7 = hasse_poly(7);
  CHECK(up_to_string(h7) == "1*lambda^3 + 2*lambda^2 + 2*lambda + 1");

  for (uint64_t p : kPrimes) {
    UniPoly h = hasse_poly(p);
    FqPtr F = h.F;
    REQUIRE(h.degree());
    CHECK(*h.degree() == static_cast<int>((p - 1) / 2));
    CHECK(F->eq(h.lc(), F->one()));
    // nonvanishing at 0 and 1 keeps the j-map defined on every root
    CHECK(!F->is_zero(up_eval(h, F->zero())));
    CHECK(!F->is_zero(up_eval(h, F->one())));
  }

  CHECK_THROWS_AS(hasse_poly(3), std::invalid_argument);
  CHECK_THROWS_AS(hasse_poly(4), std::invalid_argument);
  CHECK_THROWS_AS(supersingular_table(9), std::invalid_argument);
}

TEST_CASE("supersingular j-invariants at small primes") {
  SupersingularTable t5 = supersingular_table(5);
  REQUIRE(t5.j_set.size() == 1);
  CHECK(t5.Fp2->is_zero(t5.j_set[0]));

  SupersingularTable t7 = supersingular_table(7);
  REQUIRE(t7.j_set.size() == 1);
  CHECK(t7.Fp2->eq(t7.j_set[0], t7.Fp2->from_uint(6)));

  SupersingularTable t11 = supersingular_table(11);
  REQUIRE(t11.j_set.size() == 2);
  CHECK(in_j_set(t11, t11.Fp2->zero()));
  CHECK(in_j_set(t11, t11.Fp2->from_uint(1728 % 11)));

  SupersingularTable t13 = supersingular_table(13);
  REQUIRE(t13.j_set.size() == 1);
  CHECK(t13.Fp2->eq(t13.j_set[0], t13.Fp2->from_uint(5)));
}

TEST_CASE("j-set bookkeeping across the prime range") {
  for (uint64_t p : kPrimes) {
    CAPTURE(p);
    SupersingularTable tab = supersingular_table(p);
    size_t expect = (p - 1) / 12 + (p % 3 == 2 ? 1 : 0) + (p % 4 == 3 ? 1 : 0);
    CHECK(tab.j_set.size() == expect);
    CHECK(tab.contains_0 == (p % 3 == 2));
    CHECK(tab.contains_1728 == (p % 4 == 3));
    CHECK(tab.e3 == (p % 3 == 2 ? 1 : 0));
    CHECK(tab.e4 == (p % 4 == 3 ? 1 : 0));
    CHECK(tab.hasse_squarefree);
    CHECK(tab.hasse_splits_over_Fp2);
    for (const auto& j : tab.j_set) CHECK(in_j_set(tab, tab.Fp2->frob(j)));
  }

  CHECK(e3_e4(5) == std::pair<int, int>{1, 0});
  CHECK(e3_e4(7) == std::pair<int, int>{0, 1});
  CHECK(e3_e4(11) == std::pair<int, int>{1, 1});
  CHECK(e3_e4(13) == std::pair<int, int>{0, 0});
}

TEST_CASE("fss routes agree and match frozen values") {
  for (uint64_t p : {5, 7, 11}) {
    CAPTURE(p);
    SupersingularTable tab = supersingular_table(static_cast<uint64_t>(p));
    CHECK(up_to_string(tab.fss) == "1");
  }
  SupersingularTable t13 = supersingular_table(13);
  CHECK(up_to_string(t13.fss) == "1*j + 8");
  CHECK(up_to_string(fss_via_resultant(13)) == "1*j + 8");
  SupersingularTable t37 = supersingular_table(37);
  REQUIRE(t37.fss.degree());
  CHECK(*t37.fss.degree() == 3);

  for (uint64_t p : kPrimes) {
    CAPTURE(p);
    SupersingularTable tab = supersingular_table(p);
    CHECK(tab.routes_agree);
    CHECK(up_eq(tab.fss, tab.fss_resultant));
    REQUIRE(tab.fss.degree());
    CHECK(*tab.fss.degree() == static_cast<int>((p - 1) / 12));
    FqPtr F = tab.fss.F;
    CHECK(F->eq(tab.fss.lc(), F->one()));
    CHECK(poly_squarefree(tab.fss));
    CHECK(!F->is_zero(up_eval(tab.fss, F->zero())));
    CHECK(!F->is_zero(up_eval(tab.fss, F->from_uint(1728 % p))));
  }
}

TEST_CASE("table construction is seed independent") {
  SupersingularTable a = supersingular_table(37, 1);
  SupersingularTable b = supersingular_table(37, 0xdeadbeef);
  REQUIRE(a.j_set.size() == b.j_set.size());
  for (size_t i = 0; i < a.j_set.size(); ++i) CHECK(a.Fp2->eq(a.j_set[i], b.j_set[i]));
  CHECK(up_eq(a.fss, b.fss));
  CHECK(up_eq(a.fss_resultant, b.fss_resultant));
}

TEST_CASE("theta leading coefficient matches pushed-forward fss") {
  for (uint64_t p : {5, 7, 11, 13, 17, 19}) {
    CAPTURE(p);
    PDivTable tab{FpRing{p}};
    ThetaData th = extract_theta(p, tab);
    REQUIRE(th.ok);
    SupersingularTable ss = supersingular_table(p);
    BComparison cmp = compare_B_with_fss(th, ss);
    CHECK(cmp.matched);
    CHECK(cmp.failure.empty());
    CHECK(cmp.C != 0);
    REQUIRE(cmp.b_dehom.degree());
    CHECK(*cmp.b_dehom.degree() == static_cast<int>((p - 1) / 12));
    CHECK(cmp.b_dehom.degree() == cmp.g.degree());
  }
}

TEST_CASE("B comparison reports corruption and input mismatches") {
  PDivTable tab13{FpRing{13}};
  ThetaData th = extract_theta(13, tab13);
  REQUIRE(th.ok);
  SupersingularTable ss = supersingular_table(13);

  ThetaData bad = th;
  PBivar& lead = bad.a.at(6);
  lead.terms[{0, 2}] = fp_add(lead.terms.count({0, 2}) ? lead.terms[{0, 2}] : 0, 1, 13);
  BComparison cmp = compare_B_with_fss(bad, ss);
  CHECK(!cmp.matched);
  CHECK(!cmp.failure.empty());

  SupersingularTable ss7 = supersingular_table(7);
  CHECK_THROWS_AS(compare_B_with_fss(th, ss7), std::invalid_argument);
  ThetaData notok = th;
  notok.ok = false;
  CHECK_THROWS_AS(compare_B_with_fss(notok, ss), std::invalid_argument);
}
