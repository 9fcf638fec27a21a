#include "mds/gauss.hpp"

#include <cmath>

#include "mds/arith.hpp"
#include "mds/numerics.hpp"

namespace mds {

cplx unit_root(i64 r, i64 n) {
  r %= n;
  if (r < 0) r += n;
  // fold into [-n/2, n/2] to keep the angle small
  if (2 * r > n) r -= n;
  const double th = 2.0 * kPi * double(r) / double(n);
  return {std::cos(th), std::sin(th)};
}

cplx tau_sum(u64 n, const Character& chi, i64 l) {
  if (n < 1) throw DomainError("tau_sum: modulus must be >= 1");
  if (n == 1) return 1.0;
  const i64 nn = static_cast<i64>(n);
  i64 lr = l % nn;
  if (lr < 0) lr += nn;
  CompensatedSum s;
  for (i64 j = 0; j < nn; ++j) {
    const cplx c = chi(j);
    if (c == cplx(0.0)) continue;
    // j*l mod n computed in 128-bit to avoid overflow for large moduli
    const i64 r = static_cast<i64>((static_cast<__int128>(j) * lr) % nn);
    s.add(c * unit_root(r, nn));
  }
  return s.value();
}

cplx tau_jacobi(u64 n, i64 l) {
  if ((n & 1) == 0) throw DomainError("tau_jacobi: n must be odd");
  const i64 nn = static_cast<i64>(n);
  return tau_sum(n, [nn](i64 j) { return cplx(jacobi(j, nn)); }, l);
}

cplx g_modified_direct(u64 n, i64 l) {
  if ((n & 1) == 0) throw DomainError("g_modified: n must be odd");
  const cplx t = tau_jacobi(n, l);
  return (n % 4 == 1) ? t : cplx(0.0, -1.0) * t;
}

double g_prime_power(u64 p, int k, i64 l) {
  if (p < 3 || (p & 1) == 0 || !is_prime(p)) throw DomainError("g_prime_power: p must be an odd prime");
  if (k < 1) throw DomainError("g_prime_power: k must be >= 1");
  if (l == 0) throw DomainError("g_prime_power: l must be nonzero");
  const u64 al = static_cast<u64>(l < 0 ? -l : l);
  const int a = valuation(al, p);
  double pa = 1.0;
  for (int i = 0; i < a; ++i) pa *= double(p);
  if (k <= a) {
    if (k % 2 == 1) return 0.0;
    double pk = 1.0;
    for (int i = 0; i < k; ++i) pk *= double(p);
    return pk - pk / double(p);
  }
  if (k == a + 1) {
    if (k % 2 == 0) return -pa;
    i64 rest = l;
    for (int i = 0; i < a; ++i) rest /= static_cast<i64>(p);
    return double(jacobi(rest, static_cast<i64>(p))) * pa * std::sqrt(double(p));
  }
  return 0.0;
}

cplx g_modified(u64 n, i64 l) {
  if ((n & 1) == 0) throw DomainError("g_modified: n must be odd");
  double out = 1.0;
  for (const auto& [p, e] : factorize(n)) {
    out *= g_prime_power(p, e, l);
    if (out == 0.0) break;
  }
  return out;
}

}  // namespace mds
