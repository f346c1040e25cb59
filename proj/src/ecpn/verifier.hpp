#pragma once
// Machine checks for the structural claims at one prime: coefficient
// structure of the leading theta coefficient, vanishing propagation at its
// zeros, Eisenstein-shaped valuation certificates for theta and eta, a
// separable/inseparable degree ledger, and a runner that executes the whole
// battery and collects one report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ecpn/supersingular.hpp"

namespace ecpn {

struct CoeffStructure {
  uint64_t p = 0;
  bool lead_squarefree = false;
  PBivar squarefree_witness;          // a repeated factor when not squarefree
  bool middles_divisible = false;
  std::string division_failure;       // weight and remainder of a failing middle
  std::vector<PBivar> quotients;      // middle / lead, recorded not asserted
  bool lead_const_coprime = false;
  PBivar lead_const_gcd;
  bool passed = false;
};
CoeffStructure check_coefficient_structure(const ThetaData& th);

struct VanishingReport {
  uint64_t p = 0;
  unsigned points_checked = 0;
  bool conclusive = false;            // at least one zero of the lead was found
  bool passed = false;
  std::string failure;
};
VanishingReport check_vanishing_propagation(const ThetaData& th, unsigned samples,
                                            uint64_t seed);

struct EisensteinCertificate {
  uint64_t p = 0;
  PBivar Q;                           // uniformizing bivariate factor
  bool has_lead = false;              // theta fills the slot, eta's lead is a unit
  unsigned ord_lead = 0;
  std::vector<std::optional<unsigned>> ord_middle;  // nullopt: zero coefficient
  unsigned ord_const = 0;
  bool passed = false;
  std::string failure;
};
EisensteinCertificate eisenstein_certificate_theta(const ThetaData& th, uint64_t seed);
EisensteinCertificate eisenstein_certificate_eta(const EtaData& et, const PBivar& Q);

struct LedgerRow {
  std::string label;
  uint64_t sep = 1;
  uint64_t insep = 1;
};
struct DegreeLedger {
  uint64_t p = 0;
  unsigned n = 1;
  std::vector<LedgerRow> rows;
  uint64_t sep_total = 0;
  uint64_t insep_total = 0;
  bool certified = false;             // set once both certificates have passed
};
DegreeLedger degree_ledger(uint64_t p, unsigned n);

struct VerifyConfig {
  uint64_t seed = 1;
  unsigned samples = 8;               // vanishing-propagation points per family
  uint64_t budget = 1000000;          // polynomial-arithmetic unit cap
  std::filesystem::path cache_dir;
  bool timings = false;
};

struct CheckResult {
  std::string id;
  std::string status;                 // "pass", "fail", or "inconclusive"
  std::string witness;
  int64_t millis = -1;                // filled only when timings are requested
};
struct VerificationReport {
  uint64_t p = 0;
  unsigned n = 1;
  std::vector<CheckResult> checks;
  bool all_passed = false;            // every check reports "pass"
  bool any_failed = false;            // at least one check reports "fail"
};

// rough unit count for building psi_p mod p and everything derived from it
uint64_t verify_cost_estimate(uint64_t p);

// Runs the full battery at one prime: theta_extract, eta_extract, c_relation,
// fss_routes, b_matches_fss, vanishing_propagation, coeff_structure,
// eisenstein_theta, eisenstein_eta, degree_ledger. Throws budget_error when
// the cost estimate exceeds cfg.budget.
VerificationReport run_all(uint64_t p, unsigned n, const VerifyConfig& cfg = {});

}  // namespace ecpn
