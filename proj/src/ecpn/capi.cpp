#include "ecpn.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "ecpn/specializer.hpp"

using ordered_json = nlohmann::ordered_json;
using namespace ecpn;

struct ecpn_ctx {
  std::string last_error;
  std::filesystem::path cache_dir;
  uint64_t seed = 1;
  uint64_t budget = 1000000;       // 0: unlimited
  uint64_t enum_budget = 1000000;
  unsigned samples = 8;
  unsigned jobs = 1;
  bool timings = false;
};

namespace {

int emit(char** out, const std::string& s) {
  char* buf = static_cast<char*>(std::malloc(s.size() + 1));
  if (!buf) return ECPN_ERR_INTERNAL;
  std::memcpy(buf, s.c_str(), s.size() + 1);
  *out = buf;
  return ECPN_OK;
}

template <class Fn>
int guarded(ecpn_ctx* ctx, Fn&& fn) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->last_error.clear();
  try {
    return fn();
  } catch (const budget_error& e) {
    ctx->last_error = e.what();
    return ECPN_ERR_BUDGET;
  } catch (const std::invalid_argument& e) {
    ctx->last_error = e.what();
    return ECPN_ERR_USAGE;
  } catch (const std::filesystem::filesystem_error& e) {
    ctx->last_error = e.what();
    return ECPN_ERR_IO;
  } catch (const std::ios_base::failure& e) {
    ctx->last_error = e.what();
    return ECPN_ERR_IO;
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return ECPN_ERR_INTERNAL;
  } catch (...) {
    ctx->last_error = "unknown error";
    return ECPN_ERR_INTERNAL;
  }
}

ordered_json coeff_map(const std::map<unsigned, PBivar>& m, const char* prefix) {
  ordered_json o = ordered_json::object();
  for (const auto& [k, poly] : m) o[prefix + std::to_string(k)] = bv_to_string(poly);
  return o;
}

// cost is estimated up front from the x-degree (p^2 - 1)/2 of the p-th
// division polynomial; 0 disables the bound
void gate_prime_budget(const ecpn_ctx* ctx, uint64_t p) {
  if (ctx->budget == 0) return;
  if (p > 100000 || verify_cost_estimate(p) > ctx->budget)
    throw budget_error("prime too large for configured budget");
}

}  // namespace

extern "C" {

ecpn_ctx* ecpn_ctx_new(void) { return new (std::nothrow) ecpn_ctx; }

void ecpn_ctx_free(ecpn_ctx* ctx) { delete ctx; }

int ecpn_set_cache_dir(ecpn_ctx* ctx, const char* path) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->cache_dir = path ? std::filesystem::path(path) : std::filesystem::path();
  return ECPN_OK;
}

int ecpn_set_seed(ecpn_ctx* ctx, uint64_t seed) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->seed = seed;
  return ECPN_OK;
}

int ecpn_set_budget(ecpn_ctx* ctx, uint64_t budget) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->budget = budget;
  return ECPN_OK;
}

int ecpn_set_enum_budget(ecpn_ctx* ctx, uint64_t budget) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->enum_budget = budget;
  return ECPN_OK;
}

int ecpn_set_samples(ecpn_ctx* ctx, unsigned samples) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->samples = samples;
  return ECPN_OK;
}

int ecpn_set_jobs(ecpn_ctx* ctx, unsigned jobs) {
  if (!ctx || jobs == 0) return ECPN_ERR_USAGE;
  ctx->jobs = jobs;
  return ECPN_OK;
}

int ecpn_set_timings(ecpn_ctx* ctx, int enabled) {
  if (!ctx) return ECPN_ERR_USAGE;
  ctx->timings = enabled != 0;
  return ECPN_OK;
}

const char* ecpn_last_error(const ecpn_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "";
}

const char* ecpn_version(void) { return "0.1.0"; }

void ecpn_string_free(char* s) { std::free(s); }

int ecpn_divpoly(ecpn_ctx* ctx, unsigned m, uint64_t p, char** out) {
  return guarded(ctx, [&] {
    if (!out) throw std::invalid_argument("null output pointer");
    if (m == 0) throw std::invalid_argument("m must be >= 1");
    if (ctx->budget != 0) {
      unsigned __int128 D = (static_cast<unsigned __int128>(m) * m - 1) / 2;
      if (D * D / 12 + D > ctx->budget)
        throw budget_error("index too large for configured budget");
    }
    std::string text;
    bool parity;
    if (p == 0) {
      ZXPoly f = division_poly_z(m);
      parity = f.y_parity;
      text = xp_to_string(f);
    } else {
      PXPoly f = division_poly_p(m, p);
      parity = f.y_parity;
      text = xp_to_string(f);
    }
    if (parity) text = "y * (" + text + ")";
    return emit(out, text);
  });
}

int ecpn_theta_json(ecpn_ctx* ctx, uint64_t p, char** out) {
  return guarded(ctx, [&] {
    if (!out) throw std::invalid_argument("null output pointer");
    gate_prime_budget(ctx, p);
    PDivTable tab(FpRing{p}, ctx->cache_dir);
    ThetaData th = extract_theta(p, tab);
    ordered_json o;
    o["p"] = p;
    o["ok"] = th.ok;
    if (!th.ok) o["failure"] = th.failure;
    o["X_degree"] = th.X_degree;
    o["coefficients"] = coeff_map(th.a, "a");
    int rc = emit(out, o.dump(2));
    return rc == ECPN_OK && !th.ok ? ECPN_ERR_VERIFY : rc;
  });
}

int ecpn_eta_json(ecpn_ctx* ctx, uint64_t p, char** out) {
  return guarded(ctx, [&] {
    if (!out) throw std::invalid_argument("null output pointer");
    gate_prime_budget(ctx, p);
    PDivTable tab(FpRing{p}, ctx->cache_dir);
    EtaData et = extract_eta(p, tab);
    ordered_json o;
    o["p"] = p;
    o["ok"] = et.ok;
    if (!et.ok) o["failure"] = et.failure;
    o["b"] = coeff_map(et.b, "b");
    o["c"] = coeff_map(et.c, "c");
    int rc = emit(out, o.dump(2));
    return rc == ECPN_OK && !et.ok ? ECPN_ERR_VERIFY : rc;
  });
}

int ecpn_ssj_json(ecpn_ctx* ctx, uint64_t p, char** out) {
  return guarded(ctx, [&] {
    if (!out) throw std::invalid_argument("null output pointer");
    SupersingularTable ss = supersingular_table(p, ctx->seed);
    ordered_json o;
    o["p"] = p;
    o["e3"] = ss.e3;
    o["e4"] = ss.e4;
    o["hasse_degree"] = (p - 1) / 2;
    o["hasse_squarefree"] = ss.hasse_squarefree;
    o["splits_over_Fp2"] = ss.hasse_splits_over_Fp2;
    o["j_count"] = ss.j_set.size();
    o["contains_0"] = ss.contains_0;
    o["contains_1728"] = ss.contains_1728;
    o["fss"] = up_to_string(ss.fss);
    o["fss_degree"] = ss.fss.degree() ? *ss.fss.degree() : 0;
    o["routes_agree"] = ss.routes_agree;
    ordered_json js = ordered_json::array();
    for (const Fq::Elem& e : ss.j_set) js.push_back(ss.Fp2->to_string(e));
    o["j_set"] = std::move(js);
    int rc = emit(out, o.dump(2));
    return rc == ECPN_OK && !ss.routes_agree ? ECPN_ERR_VERIFY : rc;
  });
}

int ecpn_verify_json(ecpn_ctx* ctx, uint64_t p, unsigned n, char** out) {
  return guarded(ctx, [&] {
    if (!out) throw std::invalid_argument("null output pointer");
    VerifyConfig cfg;
    cfg.seed = ctx->seed;
    cfg.samples = ctx->samples;
    cfg.budget = ctx->budget == 0 ? UINT64_MAX : ctx->budget;
    cfg.cache_dir = ctx->cache_dir;
    cfg.timings = ctx->timings;
    VerificationReport rep = run_all(p, n, cfg);
    ordered_json o;
    o["p"] = rep.p;
    o["n"] = rep.n;
    o["seed"] = cfg.seed;
    o["all_passed"] = rep.all_passed;
    o["any_failed"] = rep.any_failed;
    ordered_json checks = ordered_json::array();
    for (const CheckResult& c : rep.checks) {
      ordered_json e;
      e["id"] = c.id;
      e["status"] = c.status;
      if (!c.witness.empty()) e["witness"] = c.witness;
      if (ctx->timings && c.millis >= 0) e["millis"] = c.millis;
      checks.push_back(std::move(e));
    }
    o["checks"] = std::move(checks);
    int rc = emit(out, o.dump(2));
    return rc == ECPN_OK && rep.any_failed ? ECPN_ERR_VERIFY : rc;
  });
}

int ecpn_specialize_json(ecpn_ctx* ctx, uint64_t p, uint64_t q, unsigned samples,
                         unsigned n_max, char** out) {
  return guarded(ctx, [&] {
    if (!out) throw std::invalid_argument("null output pointer");
    gate_prime_budget(ctx, p);
    SpecializeConfig cfg;
    cfg.p = p;
    cfg.q = q;
    cfg.samples = samples;
    cfg.n_max = n_max;
    cfg.seed = ctx->seed;
    cfg.enum_budget = ctx->enum_budget;
    cfg.cache_dir = ctx->cache_dir;
    SpecializeReport rep = run_specialization(cfg);
    ordered_json o;
    o["p"] = rep.p;
    o["q"] = rep.q;
    o["samples"] = rep.samples;
    o["n_max"] = rep.n_max;
    o["seed"] = rep.seed;
    o["ordinary"] = rep.ordinary_count;
    o["supersingular"] = rep.supersingular_count;
    o["max_observed_level1"] = rep.max_observed_level1;
    o["all_matched"] = rep.all_matched;
    ordered_json records = ordered_json::array();
    for (const SampleRecord& r : rep.records) {
      ordered_json e;
      e["s"] = r.s_coords;
      e["t"] = r.t_coords;
      e["count"] = r.count;
      e["trace"] = r.trace;
      e["ordinary"] = r.ordinary;
      e["ok"] = r.ok;
      if (!r.note.empty()) e["note"] = r.note;
      ordered_json levels = ordered_json::array();
      for (const LevelComparison& lc : r.levels) {
        ordered_json le;
        le["n"] = lc.n;
        le["modulus"] = lc.modulus;
        le["unit_root"] = lc.unit_root;
        le["predicted"] = lc.predicted;
        le["observed"] = lc.observed;
        le["match"] = lc.match;
        levels.push_back(std::move(le));
      }
      e["levels"] = std::move(levels);
      records.push_back(std::move(e));
    }
    o["records"] = std::move(records);
    o["notes"] = rep.notes;
    int rc = emit(out, o.dump(2));
    return rc == ECPN_OK && !rep.all_matched ? ECPN_ERR_VERIFY : rc;
  });
}

}  // extern "C"
