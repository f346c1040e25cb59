#pragma once
// Division polynomials of y^2 = x^3 + s x + t, stored with the y factor
// stripped: psi_m = P_m for odd m, psi_m = y * P_m for even m. A table
// memoizes P_m per coefficient ring and can persist entries to a cache
// directory, one polynomial per file.

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "ecpn/bivar.hpp"

namespace ecpn {

// x^3 + s x + t
template <class R>
XPoly<R> curve_rhs(R ring);

std::string divpoly_cache_name(const ZRing&, unsigned m);
std::string divpoly_cache_name(const FpRing&, unsigned m);

template <class R>
class DivPolyTable {
 public:
  explicit DivPolyTable(R ring, std::filesystem::path cache_dir = {});

  // P_m for m >= 1; the reference stays valid for the table's lifetime.
  // Single writer: warm the table before sharing it read-only.
  const XPoly<R>& get(unsigned m);
  void warm(unsigned m_max);
  const R& ring() const { return ring_; }

 private:
  XPoly<R> compute(unsigned m);
  std::optional<XPoly<R>> load_cached(unsigned m) const;
  void store_cached(unsigned m, const XPoly<R>& P) const;
  bool shape_ok(unsigned m, const XPoly<R>& P) const;

  R ring_;
  std::filesystem::path cache_dir_;
  XPoly<R> e2_;  // (x^3 + s x + t)^2, standing in for y^4 in the odd recurrence
  std::map<unsigned, XPoly<R>> memo_;
};

using ZDivTable = DivPolyTable<ZRing>;
using PDivTable = DivPolyTable<FpRing>;

ZXPoly division_poly_z(unsigned m);
PXPoly division_poly_p(unsigned m, uint64_t p);

inline PXPoly reduce_mod_p(const ZXPoly& a, uint64_t p) { return xp_mod_p(a, p); }

// x-coordinate of multiplication by m as a rational map num/den in x alone
template <class R>
struct MultXMap {
  XPoly<R> num, den;
};

template <class R>
MultXMap<R> mult_by_m_x(unsigned m, DivPolyTable<R>& tab);  // m >= 2

// sigma = x_part(x) + xt * xt_part(x); for a fixed xt its roots in x are the
// x-coordinates of the points whose multiple by p has x-coordinate xt
template <class R>
struct SigmaPoly {
  XPoly<R> x_part, xt_part;
};

template <class R>
SigmaPoly<R> sigma_poly(unsigned p, DivPolyTable<R>& tab);

}  // namespace ecpn
