#pragma once
// Supersingular locus data for a prime p >= 5: the Hasse polynomial in the
// Legendre parameter, the set of supersingular j-invariants inside F_{p^2},
// and the monic squarefree polynomial fss whose roots are the supersingular
// j-invariants other than 0 and 1728. fss is computed two independent ways
// (orbit enumeration over F_{p^2} and a resultant kept inside F_p[j]) and the
// table records whether they agree.

#include <string>
#include <utility>
#include <vector>

#include "ecpn/frobform.hpp"

namespace ecpn {

UniPoly hasse_poly(uint64_t p);               // in lambda over F_p
std::pair<int, int> e3_e4(uint64_t p);

struct SupersingularTable {
  explicit SupersingularTable(FqPtr base_field)
      : hasse(base_field, "lambda"), fss(base_field, "j"), fss_resultant(std::move(base_field), "j") {}

  uint64_t p = 0;
  UniPoly hasse;
  FqPtr Fp2;
  std::vector<Fq::Elem> j_set;                // sorted, deduplicated
  UniPoly fss;                                // enumeration route, monic in j
  UniPoly fss_resultant;                      // resultant route
  bool routes_agree = false;
  int e3 = 0, e4 = 0;
  bool contains_0 = false, contains_1728 = false;
  // recorded findings about where the Hasse roots actually live
  bool hasse_squarefree = false;
  bool hasse_splits_over_Fp2 = false;
};

SupersingularTable supersingular_table(uint64_t p, uint64_t seed = 0x5537ab1e5ull);

UniPoly fss_via_resultant(uint64_t p);

struct BComparison {
  explicit BComparison(FqPtr base_field)
      : b_dehom(base_field, "u"), g(std::move(base_field), "u") {}

  uint64_t p = 0;
  bool matched = false;
  std::string failure;
  UniPoly b_dehom;   // leading theta coefficient, monomial-stripped, in u
  UniPoly g;         // fss pushed through j = 1728 u / (u + 27/4), in u
  uint64_t C = 0;    // scalar with b_dehom == C * g when matched
};

BComparison compare_B_with_fss(const ThetaData& th, const SupersingularTable& ss);

}  // namespace ecpn
