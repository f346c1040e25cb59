#include "ecpn/verifier.hpp"

#include <chrono>
#include <stdexcept>

#include "ecpn/rng.hpp"

namespace ecpn {

namespace {

void validate_p(uint64_t p) {
  if (p < 5 || !is_prime_u64(p))
    throw std::invalid_argument("verification needs a prime p >= 5");
}

uint64_t checked_mul(uint64_t a, uint64_t b) {
  unsigned __int128 w = static_cast<unsigned __int128>(a) * b;
  if (w > UINT64_MAX) throw budget_error("degree ledger exceeds the 64-bit range");
  return static_cast<uint64_t>(w);
}

void require_ok(const ThetaData& th) {
  if (!th.ok) throw std::invalid_argument("theta extraction did not succeed");
}

std::string ord_text(const std::optional<unsigned>& o) {
  return o ? std::to_string(*o) : "inf";
}

}  // namespace

CoeffStructure check_coefficient_structure(const ThetaData& th) {
  require_ok(th);
  CoeffStructure out;
  out.p = th.p;
  unsigned lead_k = static_cast<unsigned>((th.p - 1) / 2);
  unsigned const_k = static_cast<unsigned>((th.p * th.p - 1) / 2);
  const PBivar& lead = th.a.at(lead_k);
  const PBivar& cnst = th.a.at(const_k);
  if (th.a.size() < 3) throw std::logic_error("no middle coefficients at p >= 5");

  SquarefreeResult sq = wb_squarefree_check(lead);
  out.lead_squarefree = sq.squarefree;
  out.squarefree_witness = sq.witness;

  out.middles_divisible = true;
  for (const auto& [k, coeff] : th.a) {
    if (k == lead_k || k == const_k) continue;
    PBivar q(lead.ring), rem(lead.ring);
    if (coeff.is_zero()) {
      out.quotients.push_back(q);
      continue;
    }
    if (!bv_try_exact_div(coeff, lead, &q, &rem)) {
      out.middles_divisible = false;
      out.division_failure = "coefficient of weight " + std::to_string(k) +
                             " leaves remainder " + bv_to_string(rem);
      break;
    }
    out.quotients.push_back(std::move(q));
  }

  if (cnst.is_zero()) {
    out.lead_const_coprime = false;
    out.lead_const_gcd = lead;
  } else {
    PBivar g = wb_gcd(lead, cnst);
    out.lead_const_coprime =
        !g.is_zero() && g.terms.size() == 1 && g.terms.begin()->first == BvKey{0, 0};
    out.lead_const_gcd = std::move(g);
  }
  out.passed = out.lead_squarefree && out.middles_divisible && out.lead_const_coprime;
  return out;
}

VanishingReport check_vanishing_propagation(const ThetaData& th, unsigned samples,
                                            uint64_t seed) {
  require_ok(th);
  VanishingReport out;
  out.p = th.p;
  uint64_t p = th.p;
  FqPtr F2 = Fq::extension(p, 2);
  auto [e3, e4] = e3_e4(p);
  unsigned lead_k = static_cast<unsigned>((p - 1) / 2);
  unsigned const_k = static_cast<unsigned>((p * p - 1) / 2);
  const PBivar& lead = th.a.at(lead_k);

  SplitMix64 rng{seed ^ (p << 8)};
  auto rand_nonzero = [&]() {
    while (true) {
      Fq::Elem e = F2->from_coords({rng.below(p), rng.below(p)});
      if (!F2->is_zero(e)) return e;
    }
  };

  auto probe = [&](const Fq::Elem& s0, const Fq::Elem& t0) {
    if (!F2->is_zero(bv_eval(lead, F2, s0, t0))) {
      out.conclusive = true;
      out.failure = "claimed zero is not a zero of the leading coefficient";
      return false;
    }
    for (const auto& [k, coeff] : th.a) {
      if (k == lead_k) continue;
      bool zero = F2->is_zero(bv_eval(coeff, F2, s0, t0));
      if (k == const_k ? zero : !zero) {
        out.conclusive = true;
        out.failure = k == const_k
                          ? "constant coefficient vanishes at a zero of the lead"
                          : "coefficient of weight " + std::to_string(k) +
                                " fails to vanish at a zero of the lead";
        return false;
      }
    }
    ++out.points_checked;
    return true;
  };

  if (e3 == 1)
    for (unsigned i = 0; i < samples; ++i)
      if (!probe(F2->zero(), rand_nonzero())) return out;
  if (e4 == 1)
    for (unsigned i = 0; i < samples; ++i)
      if (!probe(rand_nonzero(), F2->zero())) return out;

  DehomForm df = bv_dehomogenize(lead);
  if (df.upoly.degree() && *df.upoly.degree() >= 1) {
    for (const auto& [u0, mult] : up_roots_in(df.upoly, F2, seed)) {
      if (F2->is_zero(u0)) continue;
      for (unsigned i = 0; i < samples; ++i) {
        Fq::Elem lam = rand_nonzero();
        Fq::Elem l2 = F2->mul(lam, lam);
        if (!probe(F2->mul(l2, u0), F2->mul(F2->mul(l2, lam), u0))) return out;
      }
    }
  }

  out.conclusive = out.points_checked > 0;
  out.passed = out.conclusive;
  if (!out.conclusive)
    out.failure = "no zero of the leading coefficient found over F_{p^2}";
  return out;
}

EisensteinCertificate eisenstein_certificate_theta(const ThetaData& th, uint64_t seed) {
  require_ok(th);
  EisensteinCertificate cert;
  cert.p = th.p;
  cert.has_lead = true;
  uint64_t p = th.p;
  unsigned lead_k = static_cast<unsigned>((p - 1) / 2);
  unsigned const_k = static_cast<unsigned>((p * p - 1) / 2);
  const PBivar& lead = th.a.at(lead_k);
  FpRing ring{p};
  auto [e3, e4] = e3_e4(p);
  if (e3 == 1) {
    cert.Q = bv_term(ring, uint64_t{1}, 1, 0);
  } else if (e4 == 1) {
    cert.Q = bv_term(ring, uint64_t{1}, 0, 1);
  } else {
    DehomForm df = bv_dehomogenize(lead);
    UniFactorization fac = up_factor(df.upoly, seed);
    if (fac.factors.empty()) {
      cert.failure = "leading coefficient has no nonunit factor";
      return cert;
    }
    const UniPoly& f0 = fac.factors.front().first;
    cert.Q = bv_rehomogenize(DehomForm{0, 0, f0}, 6l * (*f0.degree()));
  }

  auto ol = bv_ord(lead, cert.Q);
  cert.ord_lead = ol ? *ol : 0;
  bool middles_ok = true;
  for (const auto& [k, coeff] : th.a) {
    if (k == lead_k || k == const_k) continue;
    auto o = bv_ord(coeff, cert.Q);
    if (o && *o < 1) {
      middles_ok = false;
      if (cert.failure.empty())
        cert.failure = "coefficient of weight " + std::to_string(k) + " has order 0";
    }
    cert.ord_middle.push_back(o);
  }
  auto oc = bv_ord(th.a.at(const_k), cert.Q);
  if (!oc) {
    cert.failure = "constant coefficient is zero";
    return cert;
  }
  cert.ord_const = *oc;
  cert.passed = cert.ord_lead == 1 && middles_ok && cert.ord_const == 0;
  if (!cert.passed && cert.failure.empty())
    cert.failure = "order pattern (" + std::to_string(cert.ord_lead) + ", ..., " +
                   std::to_string(cert.ord_const) + ") is not (1, >=1, 0)";
  return cert;
}

EisensteinCertificate eisenstein_certificate_eta(const EtaData& et, const PBivar& Q) {
  if (!et.ok) throw std::invalid_argument("eta extraction did not succeed");
  EisensteinCertificate cert;
  cert.p = et.p;
  cert.Q = Q;
  cert.has_lead = false;
  uint64_t p = et.p;
  bool middles_ok = true;
  for (uint64_t i = 1; i < p; ++i) {
    auto o = bv_ord(et.c.at(static_cast<unsigned>(p * i - 1)), Q);
    if (o && *o < 1) {
      middles_ok = false;
      if (cert.failure.empty())
        cert.failure = "c coefficient at index " + std::to_string(p * i - 1) +
                       " has order 0";
    }
    cert.ord_middle.push_back(o);
  }
  auto oc = bv_ord(et.c.at(static_cast<unsigned>(p * p - 1)), Q);
  if (!oc) {
    cert.failure = "trailing c coefficient is zero";
    return cert;
  }
  cert.ord_const = *oc;
  cert.passed = middles_ok && cert.ord_const == 0;
  if (!cert.passed && cert.failure.empty())
    cert.failure = "trailing c coefficient has order " + std::to_string(cert.ord_const);
  return cert;
}

DegreeLedger degree_ledger(uint64_t p, unsigned n) {
  validate_p(p);
  if (n < 1) throw std::invalid_argument("degree ledger needs n >= 1");
  DegreeLedger led;
  led.p = p;
  led.n = n;
  led.rows.push_back({"floor 1", (p - 1) / 2, p});
  for (unsigned k = 2; k <= n; ++k)
    led.rows.push_back({"floor " + std::to_string(k), p, p});
  led.rows.push_back({"y step", 2, 1});
  uint64_t s = 1, i = 1;
  for (const auto& row : led.rows) {
    s = checked_mul(s, row.sep);
    i = checked_mul(i, row.insep);
  }
  led.sep_total = s;
  led.insep_total = i;
  return led;
}

uint64_t verify_cost_estimate(uint64_t p) {
  uint64_t D = (p * p - 1) / 2;
  return D * D / 12 + D;
}

VerificationReport run_all(uint64_t p, unsigned n, const VerifyConfig& cfg) {
  validate_p(p);
  if (n < 1) throw std::invalid_argument("run_all needs n >= 1");
  if (verify_cost_estimate(p) > cfg.budget)
    throw budget_error("prime too large for configured budget");

  VerificationReport rep;
  rep.p = p;
  rep.n = n;

  using clock = std::chrono::steady_clock;
  auto timed = [&](const std::string& id, auto&& fn) {
    CheckResult r;
    r.id = id;
    auto t0 = clock::now();
    try {
      fn(r);
    } catch (const std::exception& e) {
      r.status = "fail";
      r.witness = std::string("exception: ") + e.what();
    }
    if (cfg.timings)
      r.millis =
          std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - t0).count();
    rep.checks.push_back(std::move(r));
  };
  auto set = [](CheckResult& r, bool ok, std::string witness) {
    r.status = ok ? "pass" : "fail";
    r.witness = std::move(witness);
  };

  PDivTable tab(FpRing{p}, cfg.cache_dir);
  std::optional<ThetaData> th;
  std::optional<EtaData> et;
  std::optional<SupersingularTable> ss;
  std::optional<EisensteinCertificate> cert_theta;
  const char* kNoTheta = "skipped: theta extraction failed";
  const char* kNoEta = "skipped: eta extraction failed";

  timed("theta_extract", [&](CheckResult& r) {
    th = extract_theta(p, tab);
    set(r, th->ok,
        th->ok ? "X-degree " + std::to_string(th->X_degree) + ", weights verified"
               : th->failure);
  });

  timed("eta_extract", [&](CheckResult& r) {
    et = extract_eta(p, tab);
    set(r, et->ok,
        et->ok ? "monic of X-degree " + std::to_string(p) + ", weights verified"
               : et->failure);
  });

  timed("c_relation", [&](CheckResult& r) {
    if (!et || !et->ok) return set(r, false, kNoEta);
    CRelationResult cr = check_c_relation(p, *et, tab);
    set(r, cr.holds,
        cr.holds ? "c part equals -(psi mod p)^2, scalar 1"
                 : "residual nonzero, best scalar " + std::to_string(cr.lambda));
  });

  timed("fss_routes", [&](CheckResult& r) {
    ss = supersingular_table(p, cfg.seed);
    set(r, ss->routes_agree,
        ss->routes_agree
            ? "enumeration and resultant agree, degree " +
                  std::to_string(ss->fss.degree() ? *ss->fss.degree() : 0)
            : "enumeration " + up_to_string(ss->fss) + " vs resultant " +
                  up_to_string(ss->fss_resultant));
  });

  timed("b_matches_fss", [&](CheckResult& r) {
    if (!th || !th->ok) return set(r, false, kNoTheta);
    if (!ss) return set(r, false, "skipped: table construction failed");
    BComparison cmp = compare_B_with_fss(*th, *ss);
    set(r, cmp.matched,
        cmp.matched ? "scalar " + std::to_string(cmp.C) : cmp.failure);
  });

  timed("vanishing_propagation", [&](CheckResult& r) {
    if (!th || !th->ok) return set(r, false, kNoTheta);
    VanishingReport vr = check_vanishing_propagation(*th, cfg.samples, cfg.seed);
    if (!vr.conclusive) {
      r.status = "inconclusive";
      r.witness = vr.failure;
      return;
    }
    set(r, vr.passed,
        vr.passed ? std::to_string(vr.points_checked) + " zeros probed" : vr.failure);
  });

  timed("coeff_structure", [&](CheckResult& r) {
    if (!th || !th->ok) return set(r, false, kNoTheta);
    CoeffStructure cs = check_coefficient_structure(*th);
    std::string w;
    if (cs.passed) {
      w = "lead squarefree, " + std::to_string(cs.quotients.size()) +
          " middles exactly divisible, gcd(lead, const) = 1";
    } else if (!cs.lead_squarefree) {
      w = "lead not squarefree, witness " + bv_to_string(cs.squarefree_witness);
    } else if (!cs.middles_divisible) {
      w = cs.division_failure;
    } else {
      w = "gcd(lead, const) = " + bv_to_string(cs.lead_const_gcd);
    }
    set(r, cs.passed, std::move(w));
  });

  timed("eisenstein_theta", [&](CheckResult& r) {
    if (!th || !th->ok) return set(r, false, kNoTheta);
    cert_theta = eisenstein_certificate_theta(*th, cfg.seed);
    set(r, cert_theta->passed,
        cert_theta->passed
            ? "Q = " + bv_to_string(cert_theta->Q) + ", orders (1, >=1, 0)"
            : cert_theta->failure);
  });

  timed("eisenstein_eta", [&](CheckResult& r) {
    if (!et || !et->ok) return set(r, false, kNoEta);
    if (!cert_theta) return set(r, false, kNoTheta);
    EisensteinCertificate ce = eisenstein_certificate_eta(*et, cert_theta->Q);
    set(r, ce.passed,
        ce.passed ? "Q = " + bv_to_string(ce.Q) + ", c orders (>=1, ..., 0)"
                  : ce.failure);
  });

  timed("degree_ledger", [&](CheckResult& r) {
    DegreeLedger led = degree_ledger(p, n);
    bool certs = cert_theta && cert_theta->passed;
    for (const auto& c : rep.checks)
      if (c.id == "eisenstein_eta") certs = certs && c.status == "pass";
    led.certified = certs;
    set(r, led.certified,
        "separable " + std::to_string(led.sep_total) + ", inseparable " +
            std::to_string(led.insep_total) +
            (led.certified ? "" : ", certificates incomplete"));
  });

  rep.all_passed = true;
  for (const auto& c : rep.checks) {
    if (c.status != "pass") rep.all_passed = false;
    if (c.status == "fail") rep.any_failed = true;
  }
  return rep;
}

}  // namespace ecpn
