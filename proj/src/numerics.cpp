#include "mds/numerics.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>

#include <array>
#include <cmath>

namespace mds {

namespace {

constexpr std::array<double, 11> kB2k = {
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
};

// log sin(w), stable for large |Im w|.
cplx log_sin(cplx w) {
  const cplx I(0.0, 1.0);
  if (w.imag() > 15.0) return -I * w + std::log(1.0 - std::exp(2.0 * I * w)) + std::log(I / 2.0);
  if (w.imag() < -15.0) return I * w + std::log(1.0 - std::exp(-2.0 * I * w)) - std::log(2.0 * I);
  return std::log(std::sin(w));
}

cplx lgamma_stirling(cplx z) {
  // requires |z| large (>= 15); 10 correction terms
  const cplx z2 = z * z;
  cplx zpow = z;
  cplx corr = 0.0;
  for (int k = 1; k <= 10; ++k) {
    corr += kB2k[k] / (2.0 * k * (2.0 * k - 1.0) * zpow);
    zpow *= z2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + corr;
}

}  // namespace

double bernoulli2k(int k) { return kB2k.at(k); }

bool is_gamma_pole(cplx z, double eps) {
  if (std::abs(z.imag()) > eps || z.real() > 0.5) return false;
  return std::abs(z.real() - std::round(z.real())) < eps;
}

cplx lgamma_c(cplx z) {
  if (is_gamma_pole(z)) throw PoleError("lgamma_c: pole of Gamma");
  if (z.real() < 0.5) return std::log(kPi) - log_sin(kPi * z) - lgamma_c(1.0 - z);
  cplx shift = 0.0;
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  return lgamma_stirling(z) - shift;
}

cplx gamma_ratio(cplx a, cplx b) {
  if (is_gamma_pole(a)) throw PoleError("gamma_ratio: numerator at a pole of Gamma");
  if (is_gamma_pole(b)) return 0.0;
  return std::exp(lgamma_c(a) - lgamma_c(b));
}

cplx gamma_q(cplx a, double z) {
  if (z <= 0) throw DomainError("gamma_q: z must be positive");
  if (is_gamma_pole(a)) return 0.0;
  const double lz = std::log(z);
  if (z < std::abs(a) + 2.0) {
    // P(a,z) = z^a e^{-z} / Gamma(a+1) * sum z^n / (a+1)_n
    cplx term = 1.0, sum = 1.0;
    for (int n = 1; n < 2000; ++n) {
      term *= z / (a + double(n));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    const cplx p = std::exp(a * lz - z - lgamma_c(a + 1.0)) * sum;
    return 1.0 - p;
  }
  // Legendre continued fraction for Gamma(a,z) e^{z} z^{-a}, modified Lentz
  const double tiny = 1e-300;
  cplx b = z + 1.0 - a;
  cplx c = 1.0 / tiny;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 5000; ++i) {
    const cplx an = -double(i) * (double(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const cplx delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(a * lz - z - lgamma_c(a)) * h;
}

double upper_gamma_nonpositive(int m, double z) {
  if (m < 0 || z <= 0) throw DomainError("upper_gamma_nonpositive: needs m >= 0, z > 0");
  // Gamma(b, z) = (Gamma(b+1, z) - z^b e^{-z}) / b, downward from E_1
  double g = boost::math::expint(1, z);
  for (int j = 1; j <= m; ++j) g = (g - std::pow(z, -double(j)) * std::exp(-z)) / (-double(j));
  return g;
}

TailResult hurwitz_tail(cplx s, double c, double J, int terms) {
  if (std::abs(s - 1.0) < 1e-15) throw PoleError("hurwitz_tail: s = 1");
  const double x = J + c;
  if (x <= 0) throw DomainError("hurwitz_tail: J + c must be positive");
  const double lx = std::log(x);
  const cplx xs = std::exp(-s * lx);  // x^{-s}
  cplx total = x * xs / (s - 1.0) + 0.5 * xs;
  // rising factorial (s)_{2k-1} and x^{-s-2k+1}
  cplx rising = s;
  cplx xpow = xs / x;
  double fact = 2.0;  // (2k)!
  cplx last = 0.0;
  for (int k = 1; k <= terms + 1; ++k) {
    const cplx term = kB2k[k] / fact * rising * xpow;
    if (k <= terms)
      total += term;
    else
      last = term;
    rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
    xpow /= x * x;
    fact *= double(2 * k + 1) * double(2 * k + 2);
  }
  // the remainder is bounded by a small multiple of the first omitted term
  const double bound = std::abs(last) * std::abs(s + double(2 * terms + 1)) /
                       std::max(1e-300, s.real() + double(2 * terms + 1));
  return {total, 2.0 * bound};
}

TailResult periodic_series(const std::vector<cplx>& coeff, cplx s) {
  const std::size_t q = coeff.size();
  if (q == 0) return {0.0, 0.0};
  const double J = 20.0 + std::ceil(std::abs(s));
  const double qd = double(q);
  CompensatedSum sum;
  double err = 0.0;
  for (std::size_t a = 1; a <= q; ++a) {
    const cplx c = coeff[a % q];
    if (c == cplx(0.0)) continue;
    const double off = double(a) / qd;
    CompensatedSum part;
    for (int j = 0; j < int(J); ++j) part.add(std::exp(-s * std::log(double(j) + off)));
    const auto tail = hurwitz_tail(s, off, J);
    part.add(tail.value);
    sum.add(c * part.value());
    err += std::abs(c) * tail.error_bound;
  }
  const cplx qs = std::exp(-s * std::log(qd));
  return {qs * sum.value(), err * std::abs(qs)};
}

cplx integrate(const std::function<cplx(double)>& f, double a, double b, double abs_tol, double* err) {
  double e = 0.0;
  const cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, 20, abs_tol / std::max(1e-300, std::abs(b - a)), &e);
  if (err) *err = e;
  return v;
}

cplx integrate_panels(const std::function<cplx(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  CompensatedSum sum;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    sum.add(boost::math::quadrature::gauss<double, 20>::integrate(f, lo, lo + h));
  }
  return sum.value();
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("least_squares: need >= 2 paired samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double b = sxy / sxx;
  const double a = my - b * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) rss += std::pow(y[i] - a - b * x[i], 2);
  const double se = n > 2 ? std::sqrt(rss / double(n - 2) / sxx) : 0.0;
  return {a, b, se};
}

}  // namespace mds
