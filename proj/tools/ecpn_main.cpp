#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ecpn.h"

namespace {

struct CtxGuard {
  ecpn_ctx* h = ecpn_ctx_new();
  ~CtxGuard() { ecpn_ctx_free(h); }
};

// 0 clean, 1 a verification check failed, 2 usage or resource trouble
int to_exit(ecpn_ctx* ctx, int rc) {
  switch (rc) {
    case ECPN_OK:
      return 0;
    case ECPN_ERR_VERIFY:
      return 1;
    default:
      std::fprintf(stderr, "error: %s\n", ecpn_last_error(ctx));
      return 2;
  }
}

bool parse_budget(const std::string& text, uint64_t& value) {
  if (text == "low") {
    value = 10000;
    return true;
  }
  if (text == "default") {
    value = 1000000;
    return true;
  }
  if (text == "high") {
    value = 0;  // unlimited
    return true;
  }
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    return false;
  value = std::strtoull(text.c_str(), nullptr, 10);
  return true;
}

std::string scalar_str(const nlohmann::ordered_json& v) {
  return v.is_string() ? v.get<std::string>() : v.dump();
}

void render_text(const nlohmann::ordered_json& v, const std::string& ind, std::string& out) {
  if (v.is_object()) {
    for (auto it = v.begin(); it != v.end(); ++it) {
      if (it.value().is_object() || it.value().is_array()) {
        out += ind + it.key() + ":\n";
        render_text(it.value(), ind + "  ", out);
      } else {
        out += ind + it.key() + ": " + scalar_str(it.value()) + "\n";
      }
    }
  } else if (v.is_array()) {
    if (v.empty()) {
      out += ind + "(empty)\n";
      return;
    }
    for (const auto& val : v) {
      if (val.is_object() || val.is_array()) {
        out += ind + "-\n";
        render_text(val, ind + "  ", out);
      } else {
        out += ind + "- " + scalar_str(val) + "\n";
      }
    }
  } else {
    out += ind + scalar_str(v) + "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact toolkit for Frobenius forms of division polynomials"};
  app.require_subcommand(1);

  std::string cache_dir;
  if (const char* env = std::getenv("ECPN_CACHE_DIR")) cache_dir = env;
  uint64_t seed = 1;
  std::string budget_text = "default";
  unsigned jobs = 1;
  bool timings = false;
  std::string output_path;
  std::string format = "json";
  app.add_option("--cache-dir", cache_dir,
                 "directory for division polynomial caches (overrides ECPN_CACHE_DIR)");
  app.add_option("--seed", seed, "seed for randomized probes and factoring");
  app.add_option("--budget", budget_text,
                 "computation cost bound: low, default, high, or a number")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "reserved; computations run single-threaded");
  app.add_flag("--timings", timings, "include wall-clock millisecond fields");
  app.add_option("--output", output_path, "write reports to a file instead of stdout");
  app.add_option("--format", format, "report rendering: json or text")->capture_default_str();

  unsigned dp_m = 0;
  std::string dp_ring = "Z";
  CLI::App* divpoly = app.add_subcommand("divpoly", "print a division polynomial");
  divpoly->fallthrough();
  divpoly->add_option("--m", dp_m, "index of the division polynomial")->required();
  divpoly->add_option("--ring", dp_ring, "Z or a prime modulus")->capture_default_str();

  uint64_t th_p = 0;
  CLI::App* theta = app.add_subcommand("theta", "Frobenius form of the p-th division polynomial");
  theta->fallthrough();
  theta->add_option("--p", th_p, "prime")->required();

  uint64_t et_p = 0;
  CLI::App* eta = app.add_subcommand("eta", "Frobenius form of the p-division kernel polynomial");
  eta->fallthrough();
  eta->add_option("--p", et_p, "prime")->required();

  uint64_t ss_p = 0;
  CLI::App* ssj = app.add_subcommand("ssj", "supersingular j-invariant table");
  ssj->fallthrough();
  ssj->add_option("--p", ss_p, "prime")->required();

  std::vector<uint64_t> vf_p;
  unsigned vf_n = 2;
  unsigned vf_samples = 8;
  CLI::App* verify = app.add_subcommand("verify", "run the structural checks for a prime");
  verify->fallthrough();
  verify->add_option("--primes,--p", vf_p, "primes, comma separated or repeated")
      ->required()
      ->delimiter(',');
  verify->add_option("--n", vf_n, "ledger depth")->capture_default_str();
  verify->add_option("--samples", vf_samples, "probe count for randomized checks")
      ->capture_default_str();

  uint64_t sp_p = 5, sp_q = 0;
  unsigned sp_samples = 100, sp_n = 2;
  uint64_t sp_enum = 1000000;
  CLI::App* specialize =
      app.add_subcommand("specialize", "cross-check unit-root orders on sampled curves");
  specialize->fallthrough();
  specialize->add_option("--p", sp_p, "prime")->capture_default_str();
  specialize->add_option("--q", sp_q, "field order, a power of p (default p)");
  specialize->add_option("--samples", sp_samples, "number of sampled curves")
      ->capture_default_str();
  specialize->add_option("--n", sp_n, "torsion tower height")->capture_default_str();
  specialize->add_option("--enum-budget", sp_enum, "largest field the counter enumerates")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  uint64_t budget = 0;
  if (!parse_budget(budget_text, budget)) {
    std::fprintf(stderr, "error: unrecognized budget '%s'\n", budget_text.c_str());
    return 2;
  }
  if (format != "json" && format != "text") {
    std::fprintf(stderr, "error: unrecognized format '%s'\n", format.c_str());
    return 2;
  }

  CtxGuard ctx;
  if (!ctx.h) {
    std::fprintf(stderr, "error: out of memory\n");
    return 2;
  }
  if (!cache_dir.empty()) ecpn_set_cache_dir(ctx.h, cache_dir.c_str());
  ecpn_set_seed(ctx.h, seed);
  ecpn_set_budget(ctx.h, budget);
  ecpn_set_timings(ctx.h, timings ? 1 : 0);
  if (ecpn_set_jobs(ctx.h, jobs) != ECPN_OK) {
    std::fprintf(stderr, "error: %s\n", ecpn_last_error(ctx.h));
    return 2;
  }

  std::string sink;
  auto add_payload = [&](char*& s) {
    if (!s) return;
    std::string text = s;
    ecpn_string_free(s);
    s = nullptr;
    if (format == "text") {
      auto parsed = nlohmann::ordered_json::parse(text, nullptr, false);
      if (!parsed.is_discarded()) {
        std::string rendered;
        render_text(parsed, "", rendered);
        text = std::move(rendered);
      }
    }
    sink += text;
    if (!sink.empty() && sink.back() != '\n') sink += '\n';
  };
  auto finish = [&](int code) {
    if (output_path.empty()) {
      std::fputs(sink.c_str(), stdout);
      return code;
    }
    std::ofstream f(output_path, std::ios::binary | std::ios::trunc);
    if (!f) {
      std::fprintf(stderr, "error: cannot write '%s'\n", output_path.c_str());
      return 2;
    }
    f << sink;
    return code;
  };

  char* out = nullptr;
  if (divpoly->parsed()) {
    uint64_t p = 0;
    if (dp_ring != "Z") {
      if (dp_ring.empty() || dp_ring.find_first_not_of("0123456789") != std::string::npos) {
        std::fprintf(stderr, "error: --ring expects Z or a prime modulus\n");
        return 2;
      }
      p = std::strtoull(dp_ring.c_str(), nullptr, 10);
    }
    int rc = ecpn_divpoly(ctx.h, dp_m, p, &out);
    add_payload(out);
    return finish(to_exit(ctx.h, rc));
  }
  if (theta->parsed()) {
    int rc = ecpn_theta_json(ctx.h, th_p, &out);
    add_payload(out);
    return finish(to_exit(ctx.h, rc));
  }
  if (eta->parsed()) {
    int rc = ecpn_eta_json(ctx.h, et_p, &out);
    add_payload(out);
    return finish(to_exit(ctx.h, rc));
  }
  if (ssj->parsed()) {
    int rc = ecpn_ssj_json(ctx.h, ss_p, &out);
    add_payload(out);
    return finish(to_exit(ctx.h, rc));
  }
  if (verify->parsed()) {
    ecpn_set_samples(ctx.h, vf_samples);
    std::sort(vf_p.begin(), vf_p.end());
    vf_p.erase(std::unique(vf_p.begin(), vf_p.end()), vf_p.end());
    int worst = 0;
    for (uint64_t p : vf_p) {
      int rc = ecpn_verify_json(ctx.h, p, vf_n, &out);
      add_payload(out);
      int code = to_exit(ctx.h, rc);
      if (code == 2) return finish(2);
      worst = std::max(worst, code);
    }
    return finish(worst);
  }
  if (specialize->parsed()) {
    ecpn_set_enum_budget(ctx.h, sp_enum);
    if (sp_q == 0) sp_q = sp_p;
    int rc = ecpn_specialize_json(ctx.h, sp_p, sp_q, sp_samples, sp_n, &out);
    add_payload(out);
    return finish(to_exit(ctx.h, rc));
  }
  return 2;
}
