// Gauss sums, modified (multiplicative) Gauss sums and the prime-power
// closed form.
#pragma once

#include <functional>

#include "mds/common.hpp"

namespace mds {

using Character = std::function<cplx(i64)>;

/// e(r/n) with r reduced modulo n before the trigonometric call.
cplx unit_root(i64 r, i64 n);

/// tau(chi, l) = sum_{j mod n} chi(j) e(j l / n). At n = 1 the value is 1.
cplx tau_sum(u64 n, const Character& chi, i64 l);

/// tau((./n), l) for the Jacobi symbol, n odd.
cplx tau_jacobi(u64 n, i64 l);

/// G((./n), l) from the definition (brute force, O(n)).
cplx g_modified_direct(u64 n, i64 l);

/// G((./n), l) via multiplicativity and g_prime_power.
cplx g_modified(u64 n, i64 l);

/// Closed-form G((./p^k), l) for an odd prime p and k >= 1.
double g_prime_power(u64 p, int k, i64 l);

}  // namespace mds
