// Special functions and summation helpers shared by lfun/recipe/moments.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mds/common.hpp"

namespace mds {

constexpr double kPi = 3.14159265358979323846264338327950288;

/// Branch-consistent log Gamma for complex z (exp() of it is Gamma(z)).
cplx lgamma_c(cplx z);

/// Gamma(a)/Gamma(b); PoleError if a is a pole of Gamma.
cplx gamma_ratio(cplx a, cplx b);

bool is_gamma_pole(cplx z, double eps = 1e-13);

/// Regularized upper incomplete gamma Q(a, z) = Gamma(a, z)/Gamma(a) for
/// complex a (not a pole) and real z > 0.
cplx gamma_q(cplx a, double z);

/// Upper incomplete gamma Gamma(-m, z) for integer m >= 0, z > 0.
double upper_gamma_nonpositive(int m, double z);

/// Bernoulli number B_{2k}, k = 0..10.
double bernoulli2k(int k);

struct TailResult {
  cplx value;
  double error_bound;
};

/// sum_{j >= J} (j + c)^{-s} by Euler-Maclaurin with `terms` Bernoulli
/// corrections; s != 1, J + c > 0.
TailResult hurwitz_tail(cplx s, double c, double J, int terms = 8);

/// sum_{m >= 1} coeff[m mod q] m^{-s}; coeff has length q. Accurate when
/// sum of coeff is zero or Re s > 1 (otherwise the continued value is returned).
TailResult periodic_series(const std::vector<cplx>& coeff, cplx s);

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(cplx x) {
    add_real(re_, ce_re_, x.real());
    add_real(im_, ce_im_, x.imag());
  }
  cplx value() const { return {re_ + ce_re_, im_ + ce_im_}; }

 private:
  static void add_real(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0, ce_re_ = 0, im_ = 0, ce_im_ = 0;
};

/// Adaptive Gauss-Kronrod integral of a complex function on [a, b].
cplx integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
               double* err = nullptr);

/// Fixed rule: 20-point Gauss-Legendre on each of `panels` equal panels.
cplx integrate_panels(const std::function<cplx(double)>& f, double a, double b, int panels);

/// Ordinary least squares y = a + b x; returns slope and its standard error.
struct LinearFit {
  double intercept;
  double slope;
  double slope_stderr;
};
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mds
