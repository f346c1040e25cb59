#include "ecpn/fq.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ecpn {

uint64_t fp_pow(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = fp_mul(r, a, p);
    a = fp_mul(a, a, p);
    e >>= 1;
  }
  return r;
}

uint64_t fp_inv(uint64_t a, uint64_t p) {
  a %= p;
  if (a == 0) throw std::invalid_argument("fp_inv: zero");
  // extended Euclid on (a, p)
  int64_t t = 0, newt = 1;
  int64_t r = static_cast<int64_t>(p), newr = static_cast<int64_t>(a);
  while (newr != 0) {
    int64_t q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (t < 0) t += static_cast<int64_t>(p);
  return static_cast<uint64_t>(t);
}

bool is_prime_u64(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  for (uint64_t d = 17; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

namespace {

// Raw dense F_p[T] helpers used only for modulus search and inversion.
// Vectors are coefficient lists, ascending degree, no trailing zeros.
using Vec = std::vector<uint64_t>;

void vtrim(Vec& v) {
  while (!v.empty() && v.back() == 0) v.pop_back();
}

Vec vmulmod(const Vec& a, const Vec& b, const Vec& mod, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) acc[i + j] += (unsigned __int128)a[i] * b[j];
  }
  // mod is monic of degree m = mod.size() - 1
  size_t m = mod.size() - 1;
  for (size_t i = acc.size(); i-- > m;) {
    uint64_t v = static_cast<uint64_t>(acc[i] % p);
    if (!v) continue;
    for (size_t j = 0; j < m; ++j)
      acc[i - m + j] += (unsigned __int128)(p - mod[j] % p) * v;
  }
  Vec out(std::min(acc.size(), m));
  for (size_t i = 0; i < out.size(); ++i) out[i] = static_cast<uint64_t>(acc[i] % p);
  vtrim(out);
  return out;
}

Vec vpowmod(Vec base, uint64_t e, const Vec& mod, uint64_t p) {
  Vec r{1};
  while (e) {
    if (e & 1) r = vmulmod(r, base, mod, p);
    base = vmulmod(base, base, mod, p);
    e >>= 1;
  }
  return r;
}

Vec vrem(Vec a, const Vec& b, uint64_t p) {
  vtrim(a);
  size_t db = b.size() - 1;
  uint64_t linv = fp_inv(b.back(), p);
  while (a.size() > db) {
    uint64_t c = fp_mul(a.back(), linv, p);
    size_t sh = a.size() - 1 - db;
    if (c)
      for (size_t j = 0; j < b.size(); ++j)
        a[sh + j] = fp_sub(a[sh + j], fp_mul(c, b[j], p), p);
    vtrim(a);
    if (a.empty()) break;
  }
  return a;
}

Vec vgcd(Vec a, Vec b, uint64_t p) {
  vtrim(a);
  vtrim(b);
  while (!b.empty()) {
    Vec r = vrem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    uint64_t linv = fp_inv(a.back(), p);
    for (auto& c : a) c = fp_mul(c, linv, p);
  }
  return a;
}

// Composition a(b) mod `mod` over F_p, Horner.
Vec vcompose(const Vec& a, const Vec& b, const Vec& mod, uint64_t p) {
  Vec r;
  for (size_t i = a.size(); i-- > 0;) {
    r = vmulmod(r, b, mod, p);
    if (a[i]) {
      if (r.empty()) r.push_back(a[i]);
      else r[0] = fp_add(r[0], a[i], p);
    }
  }
  return r;
}

// X^{p^e} mod f via composition doubling (coefficients are in F_p, so the
// coefficientwise Frobenius is the identity).
Vec vfrobpow(const Vec& f, uint64_t e, uint64_t p) {
  Vec x{0, 1};
  Vec pi = vpowmod(x, p, f, p);  // X^p mod f
  Vec acc;                        // X^{p^bits}
  bool have = false;
  Vec sq = pi;
  uint64_t bits = e;
  while (bits) {
    if (bits & 1) {
      acc = have ? vcompose(acc, sq, f, p) : sq;
      have = true;
    }
    bits >>= 1;
    if (bits) sq = vcompose(sq, sq, f, p);
  }
  return have ? acc : x;
}

bool vis_irreducible(const Vec& f, uint64_t p) {
  size_t d = f.size() - 1;
  if (d == 0) return false;
  if (d == 1) return true;
  // Rabin: X^{p^d} == X mod f, and gcd(X^{p^{d/l}} - X, f) = 1 for primes l|d
  Vec xp = vfrobpow(f, d, p);
  Vec x{0, 1};
  Vec diff = xp;
  if (diff.size() < 2) diff.resize(2, 0);
  diff[1] = fp_sub(diff[1], 1, p);
  vtrim(diff);
  if (!diff.empty()) return false;
  size_t rem = d;
  for (size_t l = 2; l * l <= rem; ++l) {
    if (rem % l) continue;
    Vec g = vfrobpow(f, d / l, p);
    if (g.size() < 2) g.resize(2, 0);
    g[1] = fp_sub(g[1], 1, p);
    vtrim(g);
    Vec gg = vgcd(g, f, p);
    if (gg.size() != 1) return false;
    while (rem % l == 0) rem /= l;
  }
  if (rem > 1) {
    Vec g = vfrobpow(f, d / rem, p);
    if (g.size() < 2) g.resize(2, 0);
    g[1] = fp_sub(g[1], 1, p);
    vtrim(g);
    Vec gg = vgcd(g, f, p);
    if (gg.size() != 1) return false;
  }
  return true;
}

std::vector<uint64_t> find_modulus(uint64_t p, unsigned k) {
  // Enumerate monic candidates T^k + c_{k-1}T^{k-1} + ... + c_0 in increasing
  // (c_{k-1},...,c_0) order, i.e. counting the coefficient word upward.
  std::vector<uint64_t> c(k, 0);
  for (;;) {
    // increment base-p counter, least significant digit = c_0... the tuple is
    // ordered most-significant-first, so c_0 is the fastest digit.
    Vec f(c);
    f.push_back(1);
    if (vis_irreducible(f, p)) return c;
    unsigned i = 0;
    for (; i < k; ++i) {
      if (++c[i] < p) break;
      c[i] = 0;
    }
    if (i == k) throw std::logic_error("find_modulus: exhausted");  // unreachable
  }
}

struct FieldKey {
  uint64_t p;
  unsigned k;
  bool operator<(const FieldKey& o) const { return p < o.p || (p == o.p && k < o.k); }
};

std::mutex g_registry_mutex;
std::map<FieldKey, FqPtr>& registry() {
  static std::map<FieldKey, FqPtr> r;
  return r;
}

}  // namespace

Fq::Fq(uint64_t p, unsigned k, std::vector<uint64_t> mod)
    : p_(p), k_(k), mod_(std::move(mod)) {}

static void validate_p(uint64_t p) {
  if (p < 5 || p >= (1ull << 31) || !is_prime_u64(p))
    throw std::invalid_argument("field characteristic must be a prime in [5, 2^31)");
}

FqPtr Fq::prime(uint64_t p) { return extension(p, 1); }

FqPtr Fq::extension(uint64_t p, unsigned k) {
  validate_p(p);
  if (k == 0 || k > 4096) throw std::invalid_argument("extension degree out of range");
  {
    std::lock_guard<std::mutex> lock(g_registry_mutex);
    auto it = registry().find({p, k});
    if (it != registry().end()) return it->second;
  }
  std::vector<uint64_t> mod;
  if (k >= 2) mod = find_modulus(p, k);
  FqPtr f(new Fq(p, k, std::move(mod)));
  std::lock_guard<std::mutex> lock(g_registry_mutex);
  auto [it, inserted] = registry().emplace(FieldKey{p, k}, f);
  return it->second;
}

BigInt Fq::order() const {
  BigInt q = 1;
  for (unsigned i = 0; i < k_; ++i) q *= p_;
  return q;
}

Fq::Elem Fq::one() const {
  Elem e(k_, 0);
  e[0] = 1;
  return e;
}

Fq::Elem Fq::from_uint(uint64_t v) const {
  Elem e(k_, 0);
  e[0] = v % p_;
  return e;
}

Fq::Elem Fq::from_coords(std::vector<uint64_t> v) const {
  if (v.size() > k_) throw std::invalid_argument("from_coords: too many coordinates");
  v.resize(k_, 0);
  for (auto& x : v) x %= p_;
  return v;
}

Fq::Elem Fq::gen() const {
  if (k_ < 2) throw std::invalid_argument("gen: prime field has no basis generator");
  Elem e(k_, 0);
  e[1] = 1;
  return e;
}

bool Fq::is_zero(const Elem& a) const {
  for (uint64_t x : a)
    if (x) return false;
  return true;
}

int Fq::cmp(const Elem& a, const Elem& b) const {
  for (unsigned i = 0; i < k_; ++i) {
    if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
  }
  return 0;
}

Fq::Elem Fq::add(const Elem& a, const Elem& b) const {
  Elem r(k_);
  for (unsigned i = 0; i < k_; ++i) r[i] = fp_add(a[i], b[i], p_);
  return r;
}

Fq::Elem Fq::sub(const Elem& a, const Elem& b) const {
  Elem r(k_);
  for (unsigned i = 0; i < k_; ++i) r[i] = fp_sub(a[i], b[i], p_);
  return r;
}

Fq::Elem Fq::neg(const Elem& a) const {
  Elem r(k_);
  for (unsigned i = 0; i < k_; ++i) r[i] = fp_neg(a[i], p_);
  return r;
}

Fq::Elem Fq::scal_mul(uint64_t c, const Elem& a) const {
  c %= p_;
  Elem r(k_);
  for (unsigned i = 0; i < k_; ++i) r[i] = fp_mul(c, a[i], p_);
  return r;
}

Fq::Elem Fq::mul(const Elem& a, const Elem& b) const {
  if (k_ == 1) return Elem{fp_mul(a[0], b[0], p_)};
  std::vector<unsigned __int128> acc(2 * k_ - 1, 0);
  for (unsigned i = 0; i < k_; ++i) {
    if (!a[i]) continue;
    unsigned __int128 ai = a[i];
    for (unsigned j = 0; j < k_; ++j) acc[i + j] += ai * b[j];
  }
  for (size_t i = acc.size(); i-- > k_;) {
    uint64_t v = static_cast<uint64_t>(acc[i] % p_);
    if (!v) continue;
    for (unsigned j = 0; j < k_; ++j)
      acc[i - k_ + j] += (unsigned __int128)(p_ - mod_[j]) * v;
  }
  Elem r(k_);
  for (unsigned i = 0; i < k_; ++i) r[i] = static_cast<uint64_t>(acc[i] % p_);
  return r;
}

void Fq::mul_acc(unsigned __int128* acc, const Elem& a, const Elem& b) const {
  for (unsigned i = 0; i < k_; ++i) {
    if (!a[i]) continue;
    unsigned __int128 ai = a[i];
    for (unsigned j = 0; j < k_; ++j) acc[i + j] += ai * b[j];
  }
}

Fq::Elem Fq::reduce_wide(unsigned __int128* acc) const {
  if (k_ == 1) return Elem{static_cast<uint64_t>(acc[0] % p_)};
  for (size_t i = 2 * k_ - 1; i-- > k_;) {
    uint64_t v = static_cast<uint64_t>(acc[i] % p_);
    if (!v) continue;
    for (unsigned j = 0; j < k_; ++j)
      acc[i - k_ + j] += (unsigned __int128)(p_ - mod_[j]) * v;
  }
  Elem r(k_);
  for (unsigned i = 0; i < k_; ++i) r[i] = static_cast<uint64_t>(acc[i] % p_);
  return r;
}

Fq::Elem Fq::inv(const Elem& a) const {
  if (is_zero(a)) throw std::invalid_argument("Fq::inv: zero element");
  if (k_ == 1) return Elem{fp_inv(a[0], p_)};
  // extended Euclid between the coordinate polynomial and the modulus
  Vec r0 = mod_;
  r0.push_back(1);
  Vec r1(a);
  vtrim(r1);
  Vec t0, t1{1};
  while (!r1.empty()) {
    // q, r = divmod(r0, r1)
    Vec q;
    Vec rem = r0;
    uint64_t linv = fp_inv(r1.back(), p_);
    size_t d1 = r1.size() - 1;
    if (rem.size() >= r1.size()) q.assign(rem.size() - d1, 0);
    while (rem.size() >= r1.size() && !rem.empty()) {
      uint64_t c = fp_mul(rem.back(), linv, p_);
      size_t sh = rem.size() - 1 - d1;
      q[sh] = c;
      if (c)
        for (size_t j = 0; j < r1.size(); ++j)
          rem[sh + j] = fp_sub(rem[sh + j], fp_mul(c, r1[j], p_), p_);
      vtrim(rem);
    }
    // t0, t1 = t1, t0 - q*t1
    Vec qt(q.size() + t1.size(), 0);
    if (!q.empty() && !t1.empty()) {
      qt.assign(q.size() + t1.size() - 1, 0);
      for (size_t i = 0; i < q.size(); ++i)
        for (size_t j = 0; j < t1.size(); ++j)
          qt[i + j] = fp_add(qt[i + j], fp_mul(q[i], t1[j], p_), p_);
    } else {
      qt.clear();
    }
    Vec nt(std::max(t0.size(), qt.size()), 0);
    for (size_t i = 0; i < nt.size(); ++i) {
      uint64_t x = i < t0.size() ? t0[i] : 0;
      uint64_t y = i < qt.size() ? qt[i] : 0;
      nt[i] = fp_sub(x, y, p_);
    }
    vtrim(nt);
    t0 = std::move(t1);
    t1 = std::move(nt);
    r0 = std::move(r1);
    r1 = std::move(rem);
  }
  // r0 is the (constant) gcd; modulus irreducible so it is nonzero
  uint64_t c = fp_inv(r0[0], p_);
  Elem out(k_, 0);
  for (size_t i = 0; i < t0.size() && i < k_; ++i) out[i] = fp_mul(t0[i], c, p_);
  return out;
}

Fq::Elem Fq::pow_u64(const Elem& a, uint64_t e) const {
  Elem r = one();
  Elem base = a;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

Fq::Elem Fq::pow(const Elem& a, const BigInt& e) const {
  if (e < 0) throw std::invalid_argument("Fq::pow: negative exponent");
  Elem r = one();
  Elem base = a;
  BigInt m = e;
  while (m > 0) {
    if ((m & 1) != 0) r = mul(r, base);
    base = mul(base, base);
    m >>= 1;
  }
  return r;
}

void Fq::build_frob_table() const {
  // frob_pow2_[j][l] = T^{l*p^{2^j}} for l = 0..k-1
  unsigned levels = 1;
  while ((1u << levels) < k_) ++levels;
  frob_pow2_.resize(levels + 1);
  Elem w = pow_u64(gen(), p_);  // T^p
  for (unsigned j = 0; j <= levels; ++j) {
    auto& mat = frob_pow2_[j];
    mat.resize(k_);
    mat[0] = one();
    for (unsigned l = 1; l < k_; ++l) mat[l] = mul(mat[l - 1], w);
    if (j < levels) {
      // w <- frob^{2^j}(w) = coordinate polynomial of w evaluated via mat
      Elem nw = zero();
      for (unsigned l = 0; l < k_; ++l)
        if (w[l]) nw = add(nw, scal_mul(w[l], mat[l]));
      w = std::move(nw);
    }
  }
}

Fq::Elem Fq::frob_iter(const Elem& a, unsigned j) const {
  if (k_ == 1) return a;
  j %= k_;
  if (j == 0) return a;
  std::call_once(frob_once_, [this] { build_frob_table(); });
  Elem r = a;
  unsigned bit = 0;
  unsigned rem = j;
  while (rem) {
    if (rem & 1) {
      const auto& mat = frob_pow2_[bit];
      std::vector<unsigned __int128> acc(k_, 0);
      for (unsigned l = 0; l < k_; ++l) {
        if (!r[l]) continue;
        unsigned __int128 c = r[l];
        const Elem& col = mat[l];
        for (unsigned i = 0; i < k_; ++i) acc[i] += c * col[i];
      }
      for (unsigned i = 0; i < k_; ++i) r[i] = static_cast<uint64_t>(acc[i] % p_);
    }
    rem >>= 1;
    ++bit;
  }
  return r;
}

Fq::Elem Fq::frob(const Elem& a) const { return frob_iter(a, 1); }

Fq::Elem Fq::pth_root(const Elem& a) const { return frob_iter(a, k_ - 1); }

bool Fq::is_square(const Elem& a) const {
  if (is_zero(a)) throw std::invalid_argument("is_square: zero element");
  BigInt e = (order() - 1) / 2;
  Elem r = pow(a, e);
  return eq(r, one());
}

std::string Fq::to_string(const Elem& a) const {
  if (k_ == 1) return std::to_string(a[0]);
  std::ostringstream os;
  os << '[';
  for (unsigned i = 0; i < k_; ++i) {
    if (i) os << ',';
    os << a[i];
  }
  os << ']';
  return os.str();
}

}  // namespace ecpn
