#pragma once
// Finite-field specializations used as an independent cross-oracle: count
// points on concrete curves, classify them through the leading theta
// coefficient and the supersingular table, Hensel-lift the Frobenius unit
// root, and climb the p-power torsion tower by factoring the specialized
// theta and eta polynomials. The observed minimal field degrees are compared
// against the multiplicative order of the unit root.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ecpn/verifier.hpp"

namespace ecpn {

struct CurveSpec {
  FqPtr field;
  Fq::Elem s0, t0;
};
// validates that 4 s0^3 + 27 t0^2 is nonzero
CurveSpec make_curve(FqPtr field, Fq::Elem s0, Fq::Elem t0);

// affine points plus the point at infinity; throws budget_error when the
// field order exceeds the enumeration budget
uint64_t count_points(const CurveSpec& c, uint64_t enum_budget = 1000000);

// q + 1 - count, checked against the Hasse bound
int64_t trace_from_count(const CurveSpec& c, uint64_t count);

// (s, t) -> (d^2 s, d^3 t); a nonsquare d gives the quadratic twist
CurveSpec twist_curve(const CurveSpec& c, const Fq::Elem& d);

struct Classification {
  bool ordinary = false;
  bool lead_vanishes = false;   // leading theta coefficient at (s0, t0)
  bool j_in_ss_set = false;
  bool consistent = false;      // the three routes tell one story
  std::string note;
};
Classification classify(const CurveSpec& c, int64_t trace, const ThetaData& th,
                        const SupersingularTable& ss);

// unit root of T^2 - trace T + q over Z/p^n, the lift of trace mod p
uint64_t frobenius_unit_root(uint64_t p, unsigned n, int64_t trace, uint64_t q);
// multiplicative order in (Z/p^n)^*
uint64_t unit_root_order(uint64_t root, uint64_t p, unsigned n);

struct TorsionLevel {
  unsigned level = 1;
  uint64_t x_degree = 0;        // [F_q(x_k) : F_q]
  bool y_needs_quadratic = false;
  uint64_t full_degree = 0;     // [F_q(x_k, y_k) : F_q]
};
struct TorsionTower {
  bool ok = false;
  std::string failure;
  std::vector<TorsionLevel> levels;
};
// Observed tower of minimal fields carrying points of order p^k, k = 1..n,
// for an ordinary curve. Level 1 additionally validates the point order with
// honest affine arithmetic; level 2 certifies it through the x-coordinate
// multiplication-by-p identity. n <= 2.
TorsionTower torsion_tower(const CurveSpec& c, unsigned n, const ThetaData& th,
                           const EtaData& et, PDivTable& tab, uint64_t seed);

struct SpecializeConfig {
  uint64_t p = 5;
  uint64_t q = 5;               // a power of p
  unsigned samples = 100;
  unsigned n_max = 2;
  uint64_t seed = 1;
  uint64_t enum_budget = 1000000;
  std::filesystem::path cache_dir;
};

struct LevelComparison {
  unsigned n = 1;
  uint64_t modulus = 0;         // p^n
  uint64_t unit_root = 0;
  uint64_t predicted = 0;       // order of the unit root mod p^n
  uint64_t observed = 0;        // full degree from the torsion tower
  bool divides_group_order = false;
  bool match = false;
};
struct SampleRecord {
  std::vector<uint64_t> s_coords, t_coords;
  uint64_t count = 0;
  int64_t trace = 0;
  bool ordinary = false;
  bool class_consistent = false;
  std::vector<LevelComparison> levels;  // empty for supersingular samples
  bool ok = false;
  std::string note;
};
struct SpecializeReport {
  uint64_t p = 0, q = 0;
  unsigned samples = 0, n_max = 1;
  uint64_t seed = 0;
  std::vector<SampleRecord> records;
  unsigned ordinary_count = 0, supersingular_count = 0;
  uint64_t max_observed_level1 = 0;
  bool all_matched = false;
  std::vector<std::string> notes;
};
SpecializeReport run_specialization(const SpecializeConfig& cfg);

}  // namespace ecpn
