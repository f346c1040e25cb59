#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <vector>

#include "doctest.h"
#include "ecpn/verifier.hpp"

using namespace ecpn;

namespace {

ThetaData theta_for(uint64_t p) {
  PDivTable tab{FpRing{p}};
  ThetaData th = extract_theta(p, tab);
  REQUIRE(th.ok);
  return th;
}

const std::vector<std::string> kCheckIds = {
    "theta_extract",    "eta_extract",          "c_relation",
    "fss_routes",       "b_matches_fss",        "vanishing_propagation",
    "coeff_structure",  "eisenstein_theta",     "eisenstein_eta",
    "degree_ledger"};

}  // namespace

TEST_CASE("coefficient structure holds for small primes") {
  for (uint64_t p : {5, 7, 11, 13}) {
    CAPTURE(p);
    CoeffStructure cs = check_coefficient_structure(theta_for(p));
    CHECK(cs.passed);
    CHECK(cs.lead_squarefree);
    CHECK(cs.middles_divisible);
    CHECK(cs.lead_const_coprime);
    CHECK(cs.quotients.size() == (p + 1) / 2 - 2);
  }
}

TEST_CASE("coefficient structure reports a corrupted middle with its remainder") {
  ThetaData th = theta_for(13);
  th.a.at(19) = bv_term(FpRing{13}, uint64_t{1}, 2, 5);  // s^2 t^5, weight 19
  CoeffStructure cs = check_coefficient_structure(th);
  CHECK(!cs.passed);
  CHECK(!cs.middles_divisible);
  CHECK(cs.division_failure.find("remainder") != std::string::npos);
  CHECK(cs.division_failure.find("19") != std::string::npos);
}

TEST_CASE("vanishing propagation holds at every zero family") {
  for (uint64_t p : {5, 7, 11, 13}) {
    CAPTURE(p);
    VanishingReport vr = check_vanishing_propagation(theta_for(p), 6, 42);
    CHECK(vr.passed);
    CHECK(vr.conclusive);
    CHECK(vr.points_checked > 0);
    VanishingReport again = check_vanishing_propagation(theta_for(p), 6, 42);
    CHECK(again.points_checked == vr.points_checked);
  }
}

TEST_CASE("vanishing propagation catches planted violations") {
  // a middle that misses the u-root family
  ThetaData th13 = theta_for(13);
  th13.a.at(19) = bv_term(FpRing{13}, uint64_t{1}, 2, 5);
  VanishingReport vr = check_vanishing_propagation(th13, 4, 7);
  CHECK(!vr.passed);
  CHECK(vr.conclusive);
  CHECK(vr.failure.find("19") != std::string::npos);

  // a constant that vanishes along s = 0
  ThetaData th5 = theta_for(5);
  th5.a.at(12) = bv_term(FpRing{5}, uint64_t{1}, 6, 0);  // s^6, weight 12
  VanishingReport vr5 = check_vanishing_propagation(th5, 4, 7);
  CHECK(!vr5.passed);
  CHECK(vr5.failure.find("constant") != std::string::npos);
}

TEST_CASE("Eisenstein certificate for theta picks the forced uniformizer") {
  EisensteinCertificate c5 = eisenstein_certificate_theta(theta_for(5), 1);
  CHECK(c5.passed);
  CHECK(c5.has_lead);
  CHECK(bv_eq(c5.Q, bv_term(FpRing{5}, uint64_t{1}, 1, 0)));
  CHECK(c5.ord_lead == 1);
  REQUIRE(c5.ord_middle.size() == 1);
  REQUIRE(c5.ord_middle[0]);
  CHECK(*c5.ord_middle[0] == 2);
  CHECK(c5.ord_const == 0);

  EisensteinCertificate c7 = eisenstein_certificate_theta(theta_for(7), 1);
  CHECK(c7.passed);
  CHECK(bv_eq(c7.Q, bv_term(FpRing{7}, uint64_t{1}, 0, 1)));

  EisensteinCertificate c11 = eisenstein_certificate_theta(theta_for(11), 1);
  CHECK(c11.passed);
  CHECK(bv_eq(c11.Q, bv_term(FpRing{11}, uint64_t{1}, 1, 0)));

  // p = 13 has no forced monomial; the uniformizer is a rehomogenized factor
  EisensteinCertificate c13 = eisenstein_certificate_theta(theta_for(13), 1);
  CHECK(c13.passed);
  PBivar expect = bv_add(bv_term(FpRing{13}, uint64_t{1}, 3, 0),
                         bv_term(FpRing{13}, uint64_t{4}, 0, 2));
  CHECK(bv_eq(c13.Q, expect));
}

TEST_CASE("Eisenstein certificate for eta shares the theta uniformizer") {
  for (uint64_t p : {5, 7, 11, 13}) {
    CAPTURE(p);
    PDivTable tab{FpRing{p}};
    ThetaData th = extract_theta(p, tab);
    EtaData et = extract_eta(p, tab);
    REQUIRE(th.ok);
    REQUIRE(et.ok);
    EisensteinCertificate ct = eisenstein_certificate_theta(th, 1);
    REQUIRE(ct.passed);
    EisensteinCertificate ce = eisenstein_certificate_eta(et, ct.Q);
    CHECK(ce.passed);
    CHECK(!ce.has_lead);
    CHECK(ce.ord_middle.size() == p - 1);
    CHECK(ce.ord_const == 0);

    EtaData bad = et;
    PBivar& tail = bad.c.at(static_cast<unsigned>(p * p - 1));
    tail = bv_mul(ct.Q, tail);
    EisensteinCertificate cb = eisenstein_certificate_eta(bad, ct.Q);
    CHECK(!cb.passed);
    CHECK(cb.ord_const >= 1);
  }
}

TEST_CASE("degree ledger rows and totals") {
  DegreeLedger l51 = degree_ledger(5, 1);
  REQUIRE(l51.rows.size() == 2);
  CHECK(l51.rows[0].label == "floor 1");
  CHECK(l51.rows[0].sep == 2);
  CHECK(l51.rows[0].insep == 5);
  CHECK(l51.rows[1].label == "y step");
  CHECK(l51.sep_total == 4);
  CHECK(l51.insep_total == 5);

  DegreeLedger l52 = degree_ledger(5, 2);
  CHECK(l52.sep_total == 20);
  CHECK(l52.insep_total == 25);

  DegreeLedger l73 = degree_ledger(7, 3);
  REQUIRE(l73.rows.size() == 4);
  CHECK(l73.sep_total == 294);
  CHECK(l73.insep_total == 343);

  CHECK_THROWS_AS(degree_ledger(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(degree_ledger(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(degree_ledger(2147483647, 5), budget_error);
}

TEST_CASE("cost estimate gates large primes") {
  CHECK(verify_cost_estimate(23) == 6072);
  CHECK(verify_cost_estimate(29) == 15120);
  VerifyConfig low;
  low.budget = 10000;
  CHECK_THROWS_AS(run_all(29, 1, low), budget_error);
  CHECK_THROWS_AS(run_all(31, 1, low), budget_error);
}

TEST_CASE("run_all executes the whole battery and is deterministic") {
  VerifyConfig cfg;
  VerificationReport rep = run_all(5, 2, cfg);
  CHECK(rep.p == 5);
  CHECK(rep.n == 2);
  REQUIRE(rep.checks.size() == kCheckIds.size());
  for (size_t i = 0; i < kCheckIds.size(); ++i) {
    CAPTURE(kCheckIds[i]);
    CHECK(rep.checks[i].id == kCheckIds[i]);
    CHECK(rep.checks[i].status == "pass");
    CHECK(rep.checks[i].millis == -1);
  }
  CHECK(rep.all_passed);
  CHECK(!rep.any_failed);

  VerificationReport again = run_all(5, 2, cfg);
  REQUIRE(again.checks.size() == rep.checks.size());
  for (size_t i = 0; i < rep.checks.size(); ++i) {
    CHECK(again.checks[i].status == rep.checks[i].status);
    CHECK(again.checks[i].witness == rep.checks[i].witness);
  }

  cfg.timings = true;
  VerificationReport timedrep = run_all(7, 1, cfg);
  CHECK(timedrep.all_passed);
  for (const auto& c : timedrep.checks) CHECK(c.millis >= 0);

  CHECK_THROWS_AS(run_all(3, 1, cfg), std::invalid_argument);
  CHECK_THROWS_AS(run_all(5, 0, cfg), std::invalid_argument);
}

TEST_CASE("run_all passes at the edge of the low budget preset") {
  VerifyConfig low;
  low.budget = 10000;
  low.samples = 4;
  VerificationReport rep = run_all(23, 1, low);
  CHECK(rep.all_passed);
}
