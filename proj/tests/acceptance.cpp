// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cstdio>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "ecpn.h"
#include "ecpn/specializer.hpp"

using namespace ecpn;

namespace {

int failures = 0;

void report(const std::string& label, bool ok, const std::string& detail = "") {
  std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", label.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct PrimeCtx {
  explicit PrimeCtx(uint64_t prime)
      : p(prime), tab(FpRing{prime}), th(extract_theta(prime, tab)),
        et(extract_eta(prime, tab)), ss(supersingular_table(prime)) {}
  uint64_t p;
  PDivTable tab;
  ThetaData th;
  EtaData et;
  SupersingularTable ss;
};

const std::vector<uint64_t> kExtractPrimes = {5, 7, 11, 13, 17, 19, 23, 29, 31};
const std::vector<uint64_t> kEtaPrimes = {5, 7, 11, 13, 17, 19};
const std::vector<uint64_t> kAllPrimes = {5,  7,  11, 13, 17, 19, 23, 29,
                                          31, 37, 41, 43, 47, 53, 59, 61,
                                          67, 71, 73, 79, 83, 89, 97};

bool weight_homogeneous(const PBivar& a, unsigned k) {
  for (const auto& [key, coeff] : a.terms)
    if (2 * key.first + 3 * key.second != k) return false;
  return true;
}

bool squarefree_over_fp(const UniPoly& f) {
  if (!f.degree() || *f.degree() < 1) return true;
  UniPoly g = up_gcd(f, up_derivative(f));
  return g.degree() && *g.degree() == 0;
}

}  // namespace

int main() {
  std::map<uint64_t, std::unique_ptr<PrimeCtx>> ctx;

  {
    auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (uint64_t p : kExtractPrimes) {
      ctx.emplace(p, std::make_unique<PrimeCtx>(p));
      PrimeCtx& c = *ctx.at(p);
      const PXPoly& psi = c.tab.get(static_cast<unsigned>(p));
      for (size_t d = 0; d < psi.c.size(); ++d)
        if (!psi.c[d].is_zero() && d % p != 0) {
          ok = false;
          detail = "x-exponent not divisible by p at p=" + std::to_string(p);
        }
      if (!c.th.ok || c.th.X_degree != (p - 1) / 2 ||
          c.th.a.size() != (p + 1) / 2) {
        ok = false;
        detail = "extraction failed at p=" + std::to_string(p);
      }
      for (const auto& [k, poly] : c.th.a)
        if (!weight_homogeneous(poly, k)) {
          ok = false;
          detail = "weight mismatch at p=" + std::to_string(p);
        }
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > 300.0) {
      ok = false;
      detail = "runtime above the bound";
    }
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << "9 primes in " << secs << " s";
    report("criterion 1, theta structure over p in {5..31}", ok,
           detail.empty() ? os.str() : detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (uint64_t p : kEtaPrimes) {
      PrimeCtx& c = *ctx.at(p);
      SigmaPoly<FpRing> sg = sigma_poly(static_cast<unsigned>(p), c.tab);
      bool monic = sg.x_part.degree() &&
                   *sg.x_part.degree() == static_cast<int>(p * p) &&
                   bv_eq(sg.x_part.lc(), bv_const(FpRing{p}, uint64_t{1}));
      CRelationResult crel = check_c_relation(p, c.et, c.tab);
      if (!c.et.ok || c.et.b.size() != p || c.et.c.size() != p || !monic ||
          !crel.holds || crel.lambda != 1 || !crel.residual.is_zero()) {
        ok = false;
        detail = "p=" + std::to_string(p);
      }
    }
    report("criterion 2, eta extraction and the c-part identity", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (uint64_t p : kAllPrimes) {
      SupersingularTable ss = ctx.count(p) ? ctx.at(p)->ss : supersingular_table(p);
      unsigned want = static_cast<unsigned>((p - 1) / 12);
      unsigned got = ss.fss.degree() ? static_cast<unsigned>(*ss.fss.degree()) : 0;
      bool spot = true;
      if (p == 5 || p == 7 || p == 11) spot = up_to_string(ss.fss) == "1";
      if (p == 13) spot = up_to_string(ss.fss) == "1*j + 8";
      if (got != want || !squarefree_over_fp(ss.fss) ||
          ss.contains_0 != (p % 3 == 2) || ss.contains_1728 != (p % 4 == 3) ||
          !ss.routes_agree || !spot) {
        ok = false;
        detail = "p=" + std::to_string(p);
      }
    }
    report("criterion 3, supersingular tables for all primes 5..97", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (uint64_t p : kExtractPrimes) {
      PrimeCtx& c = *ctx.at(p);
      BComparison cmp = compare_B_with_fss(c.th, c.ss);
      if (!cmp.matched || cmp.C == 0) {
        ok = false;
        detail = "p=" + std::to_string(p) + (cmp.failure.empty() ? "" : ", " + cmp.failure);
      }
    }
    report("criterion 4, leading coefficient carries the supersingular polynomial", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (uint64_t p : kExtractPrimes) {
      CoeffStructure cs = check_coefficient_structure(ctx.at(p)->th);
      if (!cs.passed) {
        ok = false;
        detail = "p=" + std::to_string(p);
      }
    }
    report("criterion 5, coefficient divisibility ledger", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (uint64_t p : kExtractPrimes) {
      PrimeCtx& c = *ctx.at(p);
      EisensteinCertificate ct = eisenstein_certificate_theta(c.th, 1);
      if (!ct.passed) {
        ok = false;
        detail = "theta at p=" + std::to_string(p);
        continue;
      }
      EisensteinCertificate ce = eisenstein_certificate_eta(c.et, ct.Q);
      if (!ce.passed) {
        ok = false;
        detail = "eta at p=" + std::to_string(p);
      }
    }
    report("criterion 6, Eisenstein certificates for theta and eta", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    for (uint64_t p : {5ull, 7ull, 11ull, 13ull}) {
      SpecializeConfig cfg;
      cfg.p = p;
      cfg.q = p;
      cfg.samples = 160;
      cfg.n_max = 2;
      cfg.seed = 20260819;
      SpecializeReport rep = run_specialization(cfg);
      bool notes_ok = !rep.notes.empty() &&
                      rep.notes.front().find("inseparable") != std::string::npos;
      bool levels_ok = true;
      for (const SampleRecord& r : rep.records)
        if (r.ordinary) {
          if (r.levels.size() != 2) levels_ok = false;
          for (const LevelComparison& lc : r.levels)
            if (!lc.divides_group_order || !lc.match) levels_ok = false;
        }
      if (!rep.all_matched || rep.ordinary_count < 100 ||
          rep.max_observed_level1 != p - 1 || !notes_ok || !levels_ok) {
        ok = false;
        detail = "p=" + std::to_string(p) + ", ordinary=" +
                 std::to_string(rep.ordinary_count);
      }
    }
    report("criterion 7, specialization cross-oracle at p in {5,7,11,13}", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    ZDivTable ztab{ZRing{}};
    for (unsigned m = 1; m <= 25; ++m) {
      const ZXPoly& f = ztab.get(m);
      bool even = m % 2 == 0;
      int want_deg = even ? static_cast<int>((m * m - 4) / 2)
                          : static_cast<int>((m * m - 1) / 2);
      bool deg_ok = (want_deg == 0 && f.degree() && *f.degree() == 0) ||
                    (f.degree() && *f.degree() == want_deg);
      bool lc_ok = f.degree() && bv_eq(f.lc(), bv_const(ZRing{}, BigInt(m)));
      bool parity_ok = f.y_parity == even;
      unsigned want_w = m * m - 1 - (even ? 3 : 0);
      bool w_ok = true;
      for (size_t d = 0; d < f.c.size(); ++d)
        for (const auto& [key, coeff] : f.c[d].terms)
          if (2 * d + 4 * key.first + 6 * key.second != want_w) w_ok = false;
      if (!deg_ok || !lc_ok || !parity_ok || !w_ok) {
        ok = false;
        detail = "m=" + std::to_string(m);
      }
    }
    for (uint64_t p : {5ull, 7ull, 11ull, 13ull})
      for (unsigned m = 1; m <= 15; ++m)
        if (xp_to_string(xp_mod_p(ztab.get(m), p)) !=
            xp_to_string(ctx.at(p)->tab.get(m))) {
          ok = false;
          detail = "reduction mismatch at p=" + std::to_string(p) +
                   ", m=" + std::to_string(m);
        }
    report("criterion 8, division polynomial regression", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    ecpn_ctx* h = ecpn_ctx_new();
    for (auto [p, n] : std::vector<std::pair<uint64_t, unsigned>>{{5, 2}, {7, 1}}) {
      char* first = nullptr;
      char* second = nullptr;
      int rc1 = ecpn_verify_json(h, p, n, &first);
      int rc2 = ecpn_verify_json(h, p, n, &second);
      if (rc1 != ECPN_OK || rc2 != ECPN_OK || !first || !second ||
          std::string(first) != std::string(second)) {
        ok = false;
        detail = "p=" + std::to_string(p);
      }
      ecpn_string_free(first);
      ecpn_string_free(second);
    }
    ecpn_ctx_free(h);
    report("criterion 9, byte-identical repeated verification", ok, detail);
  }

  if (failures == 0) std::printf("all acceptance criteria satisfied\n");
  return failures == 0 ? 0 : 1;
}
