#pragma once
// Mod-p structure extraction: psi_p mod p collapses to a polynomial theta in
// x^p, and sigma mod p collapses to a polynomial eta in x^p. Extraction
// verifies the collapse (every surviving x-exponent is a multiple of p) and
// reports a structured failure instead of throwing when it does not hold.

#include <map>
#include <string>

#include "ecpn/divpoly.hpp"

namespace ecpn {

struct ThetaData {
  uint64_t p = 0;
  bool ok = false;
  std::string failure;
  unsigned X_degree = 0;          // (p-1)/2
  std::map<unsigned, PBivar> a;   // weight k -> coefficient; X^{(p-1)/2 - i}
                                  // carries a_k with k = (p-1)/2 + p i
};

ThetaData theta_from_psi(uint64_t p, const PXPoly& psi_mod_p);
ThetaData extract_theta(uint64_t p, PDivTable& tab);

struct EtaData {
  uint64_t p = 0;
  bool ok = false;
  std::string failure;
  std::map<unsigned, PBivar> b;   // index p i, 1 <= i <= p; X^{p-i} carries
  std::map<unsigned, PBivar> c;   // b_{p i} + xt * c_{p i - 1}
};

EtaData eta_from_sigma(uint64_t p, const SigmaPoly<FpRing>& sg);
EtaData extract_eta(uint64_t p, PDivTable& tab);

struct CRelationResult {
  bool holds = false;    // the c-part equals -(psi_p mod p)^2 as printed
  uint64_t lambda = 0;   // scalar with c-part == lambda * -(psi_p mod p)^2,
                         // 0 when no scalar multiple matches; 1 when holds
  PXPoly residual;       // c-part + (psi_p mod p)^2
};

CRelationResult check_c_relation(uint64_t p, const EtaData& eta, PDivTable& tab);

// specializations to a concrete field of characteristic p
UniPoly theta_specialize(const ThetaData& th, const FqPtr& F, const Fq::Elem& s0,
                         const Fq::Elem& t0);
UniPoly eta_specialize(const EtaData& et, const FqPtr& F, const Fq::Elem& s0,
                       const Fq::Elem& t0, const Fq::Elem& xt);

}  // namespace ecpn
