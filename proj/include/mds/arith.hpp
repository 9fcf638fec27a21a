// Integer and multiplicative-function arithmetic.
#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cstdint>
#include <utility>
#include <vector>

#include "mds/common.hpp"

namespace mds {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

struct PrimePower {
  u64 p;
  int e;
};

/// Jacobi symbol (a/n) for odd n >= 1.
int jacobi(i64 a, i64 n);

/// Kronecker symbol (top/bottom) for bottom >= 1, odd or even.
int kronecker(i64 top, i64 bottom);

/// chi_{8d}(n) = (8d/n).
inline int chi8d(i64 d, i64 n) { return kronecker(8 * d, n); }

/// Trial-division factorization with primes in increasing order.
std::vector<PrimePower> factorize(u64 m);

std::vector<u64> primes_up_to(u64 limit);

bool is_prime(u64 n);
bool is_squarefree(u64 n);

/// n = n0 * n1^2 with n0 square-free.
std::pair<u64, u64> squarefree_split(u64 n);

/// p-adic valuation of n (n > 0).
int valuation(u64 n, u64 p);

/// Smallest-prime-factor table on [0, limit].
class SpfTable {
 public:
  explicit SpfTable(u64 limit);
  u64 limit() const { return spf_.size() - 1; }
  u64 spf(u64 n) const { return spf_[n]; }
  std::vector<PrimePower> factorize(u64 n) const;

 private:
  std::vector<std::uint32_t> spf_;
};

/// Indicator of odd square-free integers on [1, limit].
class SquareFreeFamily {
 public:
  SquareFreeFamily() = default;
  SquareFreeFamily(u64 limit, std::vector<bool> bits)
      : limit_(limit), bits_(std::move(bits)) {}

  u64 limit() const { return limit_; }
  bool contains(u64 d) const { return d >= 1 && d <= limit_ && bits_[d]; }
  u64 count_upto(u64 x) const;
  /// Flagged d in the closed interval [lo, hi], ascending.
  std::vector<u64> members(u64 lo, u64 hi) const;

 private:
  u64 limit_ = 0;
  std::vector<bool> bits_;
};

/// Sieve the odd square-free integers up to x_max. Throws ResourceLimitError
/// above tolerances().sieve_max.
SquareFreeFamily sieve_family(u64 x_max);

/// Number of ordered k-tuples with product m.
u64 tau_k(int k, u64 m);

/// Local factor of f_t at p^e: sum over compositions e = e1+..+ek of
/// prod p^{-e_j t_j}.
cplx f_weight_local(const std::vector<cplx>& t, u64 p, int e);

/// f_{t_1..t_k}(m) = sum over m = n_1...n_k of prod n_j^{-t_j}.
cplx f_weight(const std::vector<cplx>& t, u64 m);
cplx f_weight(const std::vector<cplx>& t, const std::vector<PrimePower>& fac);

int mobius(u64 m);

/// a(n) = prod_{p | n} (1 + 1/p)^{-1}, exact.
Rational a_weight(u64 n);
double a_weight_double(u64 n);

u64 euler_phi(u64 n);

}  // namespace mds
