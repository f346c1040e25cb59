#pragma once
// Finite fields F_{p^k} for odd machine-word primes p, on a polynomial basis
// F_p[T]/(M) with a deterministic modulus M: the lexicographically first monic
// irreducible of degree k (coefficient tuples (c_{k-1},...,c_0) compared as
// base-p counters, most significant coefficient first). Field objects are
// immutable and shared; elements are fixed-length coordinate vectors.

#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ecpn {

using BigInt = boost::multiprecision::cpp_int;

struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scalar arithmetic mod p. p < 2^31, so a 128-bit product reduction covers
// every pair of residues.
inline uint64_t fp_add(uint64_t a, uint64_t b, uint64_t p) {
  uint64_t s = a + b;
  return s >= p ? s - p : s;
}
inline uint64_t fp_sub(uint64_t a, uint64_t b, uint64_t p) {
  return a >= b ? a - b : a + p - b;
}
inline uint64_t fp_neg(uint64_t a, uint64_t p) { return a ? p - a : 0; }
inline uint64_t fp_mul(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}
uint64_t fp_pow(uint64_t a, uint64_t e, uint64_t p);
uint64_t fp_inv(uint64_t a, uint64_t p);
bool is_prime_u64(uint64_t n);

class Fq;
using FqPtr = std::shared_ptr<const Fq>;

class Fq {
 public:
  // Coordinate vector of length k(); entry i multiplies T^i.
  using Elem = std::vector<uint64_t>;

  // Shared, memoized constructors. Both validate 5 <= p < 2^31, p prime.
  static FqPtr prime(uint64_t p);
  static FqPtr extension(uint64_t p, unsigned k);

  uint64_t p() const { return p_; }
  unsigned k() const { return k_; }
  BigInt order() const;                       // p^k
  // Monic modulus coefficients c_0..c_{k-1} (the T^k coefficient 1 is
  // implicit). Empty for k = 1.
  const std::vector<uint64_t>& modulus() const { return mod_; }

  Elem zero() const { return Elem(k_, 0); }
  Elem one() const;
  Elem from_uint(uint64_t v) const;           // embed integer residue
  Elem from_coords(std::vector<uint64_t> v) const;  // validates length/range
  Elem gen() const;                           // T (only k >= 2)

  bool is_zero(const Elem& a) const;
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  // Total order on elements by coordinate tuple (c_0, c_1, ...); used for
  // canonical sorting of roots and factors.
  int cmp(const Elem& a, const Elem& b) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem neg(const Elem& a) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scal_mul(uint64_t c, const Elem& a) const;
  Elem inv(const Elem& a) const;              // throws on zero
  Elem pow(const Elem& a, const BigInt& e) const;  // e >= 0
  Elem pow_u64(const Elem& a, uint64_t e) const;

  Elem frob(const Elem& a) const;             // a^p
  Elem frob_iter(const Elem& a, unsigned j) const;  // a^{p^j}, j reduced mod k
  Elem pth_root(const Elem& a) const;         // unique p-th root
  bool is_square(const Elem& a) const;        // nonzero quadratic residue test

  // Hot-path support for polynomial kernels: accumulate the coordinate
  // convolution of a*b into acc (2k-1 slots, unreduced), and fold an
  // accumulator back to a reduced element. Lets a caller batch many products
  // into one modular reduction.
  void mul_acc(unsigned __int128* acc, const Elem& a, const Elem& b) const;
  Elem reduce_wide(unsigned __int128* acc) const;

  std::string to_string(const Elem& a) const; // "3" or "[3,1]"

 private:
  Fq(uint64_t p, unsigned k, std::vector<uint64_t> mod);
  void build_frob_table() const;

  uint64_t p_;
  unsigned k_;
  std::vector<uint64_t> mod_;                 // length k_ (k_ == 1: empty? see cpp)
  // frob_pow2_[j][l] = T^{l * p^{2^j}}: the images of the basis under the
  // 2^j-fold Frobenius, so one application is a k x k matrix-vector product.
  // Built lazily for k >= 2.
  mutable std::vector<std::vector<Elem>> frob_pow2_;
  mutable std::once_flag frob_once_;
};

}  // namespace ecpn
