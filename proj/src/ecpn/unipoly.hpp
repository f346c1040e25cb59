#pragma once
// Dense univariate polynomials over a shared Fq, coefficients stored ascending
// (most significant last), trailing zeros stripped so the zero polynomial is
// the empty list and its degree is reported as an absent optional rather than
// a sentinel value.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ecpn/fq.hpp"
#include "ecpn/rng.hpp"

namespace ecpn {

struct UniPoly {
  FqPtr F;
  std::vector<Fq::Elem> c;  // c[i] multiplies var^i
  std::string var = "x";

  explicit UniPoly(FqPtr field, std::string v = "x") : F(std::move(field)), var(std::move(v)) {}
  UniPoly(FqPtr field, std::vector<Fq::Elem> coeffs, std::string v = "x")
      : F(std::move(field)), c(std::move(coeffs)), var(std::move(v)) {
    trim();
  }

  void trim() {
    while (!c.empty() && F->is_zero(c.back())) c.pop_back();
  }
  bool is_zero() const { return c.empty(); }
  std::optional<int> degree() const {
    if (c.empty()) return std::nullopt;
    return static_cast<int>(c.size()) - 1;
  }
  const Fq::Elem& lc() const { return c.back(); }
  Fq::Elem coeff(size_t i) const { return i < c.size() ? c[i] : F->zero(); }
};

UniPoly up_from_u64(const FqPtr& F, const std::vector<uint64_t>& coeffs,
                    const std::string& var = "x");
UniPoly up_x(const FqPtr& F, const std::string& var = "x");
UniPoly up_const(const FqPtr& F, const Fq::Elem& v, const std::string& var = "x");

bool up_eq(const UniPoly& a, const UniPoly& b);
UniPoly up_add(const UniPoly& a, const UniPoly& b);
UniPoly up_sub(const UniPoly& a, const UniPoly& b);
UniPoly up_neg(const UniPoly& a);
UniPoly up_mul(const UniPoly& a, const UniPoly& b);
UniPoly up_scale(const Fq::Elem& s, const UniPoly& a);
UniPoly up_monic(const UniPoly& a);
std::pair<UniPoly, UniPoly> up_divrem(const UniPoly& a, const UniPoly& b);
UniPoly up_derivative(const UniPoly& a);
Fq::Elem up_eval(const UniPoly& a, const Fq::Elem& x);

// gcd(f, 0) = monic(f); gcd(0, 0) = 0. Result is monic when nonzero.
UniPoly up_gcd(UniPoly a, UniPoly b);

UniPoly up_powmod(const UniPoly& base, const BigInt& e, const UniPoly& mod);
// a(b) mod m
UniPoly up_compose_mod(const UniPoly& a, const UniPoly& b, const UniPoly& m);
// X^{|F|} mod f, computed by Frobenius composition doubling with a
// coefficientwise Frobenius twist at each combine step.
UniPoly up_xq_mod(const UniPoly& f);

// Resultant via the subresultant polynomial-remainder sequence.
// Res(x-a, x-b) = a-b orientation; Res(f,g) = (-1)^{deg f deg g} Res(g,f).
Fq::Elem up_resultant(const UniPoly& f, const UniPoly& g);

// Squarefree decomposition in characteristic p: returns monic pairwise-coprime
// squarefree g_i with multiplicities m_i such that prod g_i^{m_i} = monic(f).
std::vector<std::pair<UniPoly, unsigned>> up_squarefree_decomposition(const UniPoly& f);

// Full factorization: scalar * prod of monic irreducible^mult, factors sorted
// by (degree, coefficient tuple from leading coefficient down, each element by
// coordinate tuple). Equal-degree splitting is randomized from `seed` but the
// sorted output is deterministic.
struct UniFactorization {
  Fq::Elem unit;
  std::vector<std::pair<UniPoly, unsigned>> factors;
};
UniFactorization up_factor(const UniPoly& f, uint64_t seed);

bool up_is_irreducible(const UniPoly& f);

// Roots of f in the extension field big (same characteristic), sorted by
// coordinate tuple, with multiplicities. Coefficients of f are carried into
// `big` by the canonical embedding (see up_embed).
std::vector<std::pair<Fq::Elem, unsigned>> up_roots_in(const UniPoly& f, const FqPtr& big,
                                                       uint64_t seed);

// Canonical embedding F_{p^k} -> F_{p^K} for k | K: the image of the small
// field's generator is the smallest root (by coordinate tuple) of the small
// modulus in the big field. Returns the image of each small basis power so
// elements map by linear combination.
struct Embedding {
  FqPtr from, to;
  std::vector<Fq::Elem> basis_image;  // image of T_small^i, i = 0..k-1
  Fq::Elem operator()(const Fq::Elem& a) const;
};
Embedding up_embed(const FqPtr& from, const FqPtr& to, uint64_t seed);

std::string up_to_string(const UniPoly& a);

}  // namespace ecpn
