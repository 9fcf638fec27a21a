#include "mds/arith.hpp"

#include <cmath>
#include <numeric>

namespace mds {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

int jacobi(i64 a, i64 n) {
  if (n <= 0 || (n & 1) == 0) throw DomainError("jacobi: modulus must be odd and positive");
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const i64 r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

int kronecker(i64 top, i64 bottom) {
  if (bottom < 1) throw DomainError("kronecker: bottom must be >= 1");
  int result = 1;
  while ((bottom & 1) == 0) {
    bottom >>= 1;
    if ((top & 1) == 0) return 0;
    const i64 r = ((top % 8) + 8) % 8;
    if (r == 3 || r == 5) result = -result;
  }
  if (bottom == 1) return result;
  return result * jacobi(top, bottom);
}

std::vector<PrimePower> factorize(u64 m) {
  std::vector<PrimePower> out;
  if (m == 0) throw DomainError("factorize: m must be positive");
  for (u64 p = 2; p * p <= m; p += (p == 2 ? 1 : 2)) {
    if (m % p == 0) {
      int e = 0;
      while (m % p == 0) {
        m /= p;
        ++e;
      }
      out.push_back({p, e});
    }
  }
  if (m > 1) out.push_back({m, 1});
  return out;
}

std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

bool is_squarefree(u64 n) {
  for (const auto& pp : factorize(n))
    if (pp.e > 1) return false;
  return true;
}

std::pair<u64, u64> squarefree_split(u64 n) {
  u64 n0 = 1, n1 = 1;
  for (const auto& [p, e] : factorize(n)) {
    if (e & 1) n0 *= p;
    for (int i = 0; i < e / 2; ++i) n1 *= p;
  }
  return {n0, n1};
}

int valuation(u64 n, u64 p) {
  int a = 0;
  while (n % p == 0) {
    n /= p;
    ++a;
  }
  return a;
}

SpfTable::SpfTable(u64 limit) : spf_(limit + 1, 0) {
  for (u64 i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (u64 j = i; j <= limit; j += i)
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
  }
}

std::vector<PrimePower> SpfTable::factorize(u64 n) const {
  std::vector<PrimePower> out;
  while (n > 1) {
    const u64 p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

u64 SquareFreeFamily::count_upto(u64 x) const {
  u64 c = 0;
  const u64 hi = std::min(x, limit_);
  for (u64 d = 1; d <= hi; d += 2) c += bits_[d];
  return c;
}

std::vector<u64> SquareFreeFamily::members(u64 lo, u64 hi) const {
  std::vector<u64> out;
  hi = std::min(hi, limit_);
  for (u64 d = std::max<u64>(lo, 1); d <= hi; ++d)
    if (bits_[d]) out.push_back(d);
  return out;
}

SquareFreeFamily sieve_family(u64 x_max) {
  if (x_max < 1) throw DomainError("sieve_family: X_max must be >= 1");
  if (x_max > tolerances().sieve_max)
    throw ResourceLimitError("sieve_family: X_max " + std::to_string(x_max) +
                             " exceeds the configured bound " +
                             std::to_string(tolerances().sieve_max));
  std::vector<bool> bits(x_max + 1, false);
  for (u64 d = 1; d <= x_max; d += 2) bits[d] = true;
  for (u64 p = 3; p * p <= x_max; p += 2) {
    const u64 q = p * p;
    // odd multiples of p^2 only; even d are already cleared
    for (u64 j = q; j <= x_max; j += 2 * q) bits[j] = false;
  }
  return SquareFreeFamily(x_max, std::move(bits));
}

namespace {

u64 binom(u64 n, u64 r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  u64 out = 1;
  for (u64 i = 1; i <= r; ++i) out = out * (n - r + i) / i;
  return out;
}

}  // namespace

u64 tau_k(int k, u64 m) {
  if (k < 1 || m < 1) throw DomainError("tau_k: k, m must be positive");
  u64 out = 1;
  for (const auto& [p, e] : factorize(m)) out *= binom(static_cast<u64>(e + k - 1), k - 1);
  return out;
}

cplx f_weight_local(const std::vector<cplx>& t, u64 p, int e) {
  // coefficient of y^e in prod_j 1/(1 - y p^{-t_j})
  std::vector<cplx> poly(e + 1, cplx(0.0));
  poly[0] = 1.0;
  const double lp = std::log(static_cast<double>(p));
  for (const cplx& tj : t) {
    const cplx x = std::exp(-tj * lp);
    for (int i = 1; i <= e; ++i) poly[i] += x * poly[i - 1];
  }
  return poly[e];
}

cplx f_weight(const std::vector<cplx>& t, const std::vector<PrimePower>& fac) {
  cplx out = 1.0;
  if (t.empty()) return fac.empty() ? out : cplx(0.0);
  for (const auto& [p, e] : fac) out *= f_weight_local(t, p, e);
  return out;
}

cplx f_weight(const std::vector<cplx>& t, u64 m) {
  if (m < 1) throw DomainError("f_weight: m must be positive");
  return f_weight(t, factorize(m));
}

int mobius(u64 m) {
  int mu = 1;
  for (const auto& pp : factorize(m)) {
    if (pp.e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

Rational a_weight(u64 n) {
  Rational out = 1;
  for (const auto& pp : factorize(n)) out *= Rational(BigInt(pp.p), BigInt(pp.p + 1));
  return out;
}

double a_weight_double(u64 n) {
  double out = 1.0;
  for (const auto& pp : factorize(n)) out *= double(pp.p) / double(pp.p + 1);
  return out;
}

u64 euler_phi(u64 n) {
  u64 out = n;
  for (const auto& pp : factorize(n)) out = out / pp.p * (pp.p - 1);
  return out;
}

}  // namespace mds
