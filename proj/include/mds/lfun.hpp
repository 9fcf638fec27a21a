// Riemann zeta, quadratic Dirichlet L-functions and the K-series.
#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "mds/arith.hpp"
#include "mds/numerics.hpp"

namespace mds {

/// Riemann zeta by Euler-Maclaurin (8 Bernoulli terms, N = 50 + 2|Im s|);
/// reflection formula for Re s < -1. PoleError at s = 1.
cplx zeta(cplx s);
TailResult zeta_with_bound(cplx s);

/// Smoothed approximate functional equation for a real primitive character
/// of conductor q and parity delta (0 even, 1 odd). The weight is the
/// regularized incomplete gamma Q((s+delta)/2, pi n^2 / q), i.e. the Mellin
/// image of the theta-function Gaussian e^{-pi n^2 x / q}.
///
/// Two modes: direct kernel evaluation per term, or a cubic-Hermite table in
/// log x built once (used for family sweeps).
class QuadraticAfe {
 public:
  QuadraticAfe(cplx s, int delta, double q_max, bool tabulate);

  cplx s() const { return s_; }
  int delta() const { return delta_; }
  double q_max() const { return q_max_; }

  /// Number of terms used for conductor q.
  u64 length(double q) const;

  /// L(s, chi) with chi(n) supplied as int8 values chi[0..length(q)].
  cplx evaluate(double q, const std::int8_t* chi) const;

 private:
  cplx first_kernel(double x) const;   // Q(a, x^2)
  cplx second_kernel(double x) const;  // Q(b, x^2)
  cplx table_lookup(const std::vector<cplx>& val, const std::vector<cplx>& der, double y) const;

  cplx s_;
  int delta_;
  double q_max_;
  bool tab_;
  bool b_pole_ = false;
  cplx a_, b_, gamma_ab_;
  double z_cut_;
  double y_min_ = 0, y_max_ = 0, h_ = 0;
  std::vector<cplx> t1_, d1_, t2_, d2_;
  std::vector<cplx> pow_s_, pow_1ms_;  // n^{-s}, n^{s-1}
};

/// L(s, (./n0)) for square-free odd n0 > 1 (primitive Jacobi character).
cplx l_primitive_jacobi(cplx s, u64 n0);

/// L(s, (./n)) for odd n >= 1 via n = n0 n1^2 and the finite Euler factor.
cplx l_quadratic(cplx s, u64 n);

/// L(s, chi_{8d}) for odd square-free d.
cplx l_chi8d(cplx s, u64 d);

/// K(s, (./n)) = sum_l tau((./n), l)/sqrt(n) l^{-s}, Re s > 3/2.
TailResult k_series(cplx s, u64 n);

/// Residual |L(s,(./n)) - n^{1/2-s} X_pm(s) K(1-s,(./n))|. swap_parity
/// deliberately uses the wrong gamma factor (negative control).
double fe_residual(cplx s, u64 n, bool swap_parity = false);

/// L_D(w, n) = sum* chi_{8d}(n) d^{-w} via the closed form, Re w > 1.
cplx l_D(cplx w, u64 n);

/// Truncated sum* over odd square-free d <= D (oracle for l_D).
cplx l_D_direct(cplx w, u64 n, u64 D);

/// Batch evaluator of L(s_j, chi_{8d}) for a fixed point set, d <= d_max.
class FamilyEvaluator {
 public:
  FamilyEvaluator(const std::vector<cplx>& s_points, u64 d_max);

  const std::vector<cplx>& points() const { return s_; }
  u64 d_max() const { return d_max_; }

  /// out[j] = L(s_j, chi_{8d}). Thread-safe.
  void evaluate(u64 d, std::vector<cplx>& out) const;

 private:
  std::vector<cplx> s_;
  u64 d_max_;
  std::vector<std::unique_ptr<QuadraticAfe>> afe_;
  std::unique_ptr<SpfTable> spf_;
  u64 n_max_;
};

}  // namespace mds
