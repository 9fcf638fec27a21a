#include "mds/lfun.hpp"

#include <cmath>
#include <map>
#include <tuple>

#include "mds/gauss.hpp"
#include "mds/recipe.hpp"

namespace mds {

TailResult zeta_with_bound(cplx s) {
  if (std::abs(s - 1.0) < 1e-14) throw PoleError("zeta: pole at s = 1");
  if (s.real() < -1.0) {
    const cplx one_minus = 1.0 - s;
    const TailResult z = zeta_with_bound(one_minus);
    const cplx factor = std::exp(s * std::log(2.0) + (s - 1.0) * std::log(kPi) + lgamma_c(one_minus)) *
                        std::sin(kPi * s / 2.0);
    return {factor * z.value, std::abs(factor) * z.error_bound};
  }
  const int N = 50 + static_cast<int>(std::ceil(2.0 * std::abs(s.imag())));
  CompensatedSum sum;
  for (int n = 1; n < N; ++n) sum.add(std::exp(-s * std::log(double(n))));
  const TailResult tail = hurwitz_tail(s, 0.0, double(N), 8);
  sum.add(tail.value);
  return {sum.value(), tail.error_bound};
}

cplx zeta(cplx s) { return zeta_with_bound(s).value; }

// ---------------------------------------------------------------------------

QuadraticAfe::QuadraticAfe(cplx s, int delta, double q_max, bool tabulate)
    : s_(s), delta_(delta), q_max_(q_max), tab_(tabulate) {
  if (delta != 0 && delta != 1) throw DomainError("QuadraticAfe: parity must be 0 or 1");
  a_ = (s + double(delta)) / 2.0;
  b_ = (1.0 - s + double(delta)) / 2.0;
  // At a pole of Gamma(b) the product Gamma(b) Q(b, z) = Gamma(b, z) stays
  // finite, so the second kernel carries Gamma(b, z) / Gamma(a) instead.
  b_pole_ = is_gamma_pole(b_);
  gamma_ab_ = b_pole_ ? cplx(1.0) : gamma_ratio(b_, a_);

  // Smallest z beyond which both kernels, inflated by the worst-case power of
  // n, drop below the configured floor.
  const double floor = tolerances().afe_kernel_floor;
  const double grow = std::abs(s.real() - 0.5) + 1.0;
  const double gab = std::max(1.0, std::abs(gamma_ab_)) * std::pow(std::max(1.0, q_max / kPi), std::abs(s.real() - 0.5));
  z_cut_ = std::max(std::abs(a_), std::abs(b_)) + 1.0;
  for (; z_cut_ < 5000.0; z_cut_ += 0.5) {
    const double inflate = std::pow(z_cut_ * q_max / kPi, grow / 2.0);
    if (std::abs(gamma_q(a_, z_cut_)) * inflate < floor && std::abs(second_kernel(std::sqrt(z_cut_))) * gab * inflate < floor)
      break;
  }

  const u64 nmax = length(q_max);
  pow_s_.resize(nmax + 1);
  pow_1ms_.resize(nmax + 1);
  for (u64 n = 1; n <= nmax; ++n) {
    const double ln = std::log(double(n));
    pow_s_[n] = std::exp(-s * ln);
    pow_1ms_[n] = std::exp((s - 1.0) * ln);
  }

  if (tab_) {
    h_ = 1e-3;
    y_min_ = 0.5 * std::log(kPi / q_max) - 0.01;
    y_max_ = 0.5 * std::log(z_cut_) + 0.01;
    const std::size_t m = static_cast<std::size_t>(std::ceil((y_max_ - y_min_) / h_)) + 2;
    t1_.resize(m);
    d1_.resize(m);
    t2_.resize(m);
    d2_.resize(m);
    const cplx lga = lgamma_c(a_), lgb = b_pole_ ? cplx(0.0) : lgamma_c(b_);
    for (std::size_t i = 0; i < m; ++i) {
      const double y = y_min_ + h_ * double(i);
      const double z = std::exp(2.0 * y);
      t1_[i] = gamma_q(a_, z);
      t2_[i] = second_kernel(std::exp(y));
      // d/dy Q(c, e^{2y}) = -2 e^{-z} z^c / Gamma(c)
      d1_[i] = -2.0 * std::exp(a_ * (2.0 * y) - z - lga);
      d2_[i] = b_pole_ ? -2.0 * std::exp(b_ * (2.0 * y) - z - lga) : -2.0 * std::exp(b_ * (2.0 * y) - z - lgb);
    }
  }
}

u64 QuadraticAfe::length(double q) const {
  const double spec_len = std::ceil(tolerances().afe_length_factor * std::sqrt(q * (1.0 + std::abs(s_.imag()))));
  const double kernel_len = std::floor(std::sqrt(z_cut_ * q / kPi)) + 1.0;
  return static_cast<u64>(std::max(1.0, std::min(spec_len, kernel_len)));
}

cplx QuadraticAfe::first_kernel(double x) const { return gamma_q(a_, x * x); }
cplx QuadraticAfe::second_kernel(double x) const {
  if (!b_pole_) return gamma_q(b_, x * x);
  return upper_gamma_nonpositive(static_cast<int>(std::lround(-b_.real())), x * x) / std::exp(lgamma_c(a_));
}

cplx QuadraticAfe::table_lookup(const std::vector<cplx>& val, const std::vector<cplx>& der, double y) const {
  const double u = (y - y_min_) / h_;
  std::size_t i = static_cast<std::size_t>(u);
  if (u < 0) i = 0;
  if (i + 1 >= val.size()) return 0.0;
  const double t = u - double(i);
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * val[i] + h10 * h_ * der[i] + h01 * val[i + 1] + h11 * h_ * der[i + 1];
}

cplx QuadraticAfe::evaluate(double q, const std::int8_t* chi) const {
  if (q > q_max_ * (1 + 1e-12)) throw DomainError("QuadraticAfe: conductor above table range");
  const u64 N = length(q);
  const double c = std::sqrt(kPi / q);
  const double yq = 0.5 * std::log(kPi / q);
  cplx sum1 = 0.0, sum2 = 0.0;
  for (u64 n = 1; n <= N; ++n) {
    const int ch = chi[n];
    if (ch == 0) continue;
    cplx k1, k2;
    if (tab_) {
      const double y = std::log(double(n)) + yq;
      k1 = table_lookup(t1_, d1_, y);
      k2 = table_lookup(t2_, d2_, y);
    } else {
      const double x = c * double(n);
      k1 = first_kernel(x);
      k2 = second_kernel(x);
    }
    if (ch > 0) {
      sum1 += pow_s_[n] * k1;
      sum2 += pow_1ms_[n] * k2;
    } else {
      sum1 -= pow_s_[n] * k1;
      sum2 -= pow_1ms_[n] * k2;
    }
  }
  const cplx c2 = std::exp((s_ - 0.5) * std::log(kPi / q)) * gamma_ab_;
  return sum1 + c2 * sum2;
}

// ---------------------------------------------------------------------------

namespace {

// Per-thread cache of tabulated AFE objects keyed by (s, parity).
const QuadraticAfe& cached_afe(cplx s, int delta, double q) {
  using Key = std::tuple<double, double, int>;
  thread_local std::map<Key, std::unique_ptr<QuadraticAfe>> cache;
  auto& slot = cache[Key{s.real(), s.imag(), delta}];
  if (!slot || slot->q_max() < q) slot = std::make_unique<QuadraticAfe>(s, delta, std::max(2.0 * q, 4096.0), true);
  return *slot;
}

template <class ChiFn>
cplx afe_with(cplx s, int delta, double q, ChiFn chi_of) {
  const QuadraticAfe& afe = cached_afe(s, delta, q);
  const u64 N = afe.length(q);
  thread_local std::vector<std::int8_t> chi;
  chi.assign(N + 1, 0);
  for (u64 n = 1; n <= N; ++n) chi[n] = static_cast<std::int8_t>(chi_of(n));
  return afe.evaluate(q, chi.data());
}

}  // namespace

cplx l_primitive_jacobi(cplx s, u64 n0) {
  if ((n0 & 1) == 0 || n0 < 3) throw DomainError("l_primitive_jacobi: n0 must be odd and > 1");
  const int delta = (n0 % 4 == 1) ? 0 : 1;
  const i64 m = static_cast<i64>(n0);
  return afe_with(s, delta, double(n0), [m](u64 n) { return jacobi(static_cast<i64>(n), m); });
}

cplx l_quadratic(cplx s, u64 n) {
  if (n < 1 || (n & 1) == 0) throw DomainError("l_quadratic: n must be odd and positive");
  const auto [n0, n1] = squarefree_split(n);
  cplx val;
  if (n0 == 1) {
    if (std::abs(s - 1.0) < 1e-14) throw PoleError("l_quadratic: pole at s = 1 for square n");
    val = zeta(s);
  } else {
    val = l_primitive_jacobi(s, n0);
  }
  if (n1 > 1) {
    for (const auto& pp : factorize(n1)) {
      const int c = jacobi(static_cast<i64>(pp.p), static_cast<i64>(n0));
      val *= 1.0 - double(c) * std::exp(-s * std::log(double(pp.p)));
    }
  }
  return val;
}

cplx l_chi8d(cplx s, u64 d) {
  if ((d & 1) == 0 || d == 0) throw DomainError("l_chi8d: d must be odd and positive");
  if (!is_squarefree(d)) throw DomainError("l_chi8d: d must be square-free");
  const i64 top = 8 * static_cast<i64>(d);
  return afe_with(s, 0, double(8 * d), [top](u64 n) { return kronecker(top, static_cast<i64>(n)); });
}

TailResult k_series(cplx s, u64 n) {
  if (s.real() <= 1.5) throw ConvergenceError("k_series: requires Re s > 3/2");
  if ((n & 1) == 0 || n == 0) throw DomainError("k_series: n must be odd and positive");
  std::vector<cplx> coeff(n);
  const double rn = std::sqrt(double(n));
  const cplx rot = (n % 4 == 1) ? cplx(1.0) : cplx(0.0, 1.0);  // tau = rot * G
  for (u64 a = 0; a < n; ++a) {
    const i64 l = (a == 0) ? static_cast<i64>(n) : static_cast<i64>(a);
    coeff[a] = rot * g_modified(n, l) / rn;
  }
  return periodic_series(coeff, s);
}

double fe_residual(cplx s, u64 n, bool swap_parity) {
  bool even = (n % 4 == 1);
  if (swap_parity) even = !even;
  const cplx L = l_quadratic(s, n);
  const cplx K = k_series(1.0 - s, n).value;
  const cplx rhs = std::exp((0.5 - s) * std::log(double(n))) * gamma_X_pm(s, even) * K;
  return std::abs(L - rhs);
}

cplx l_D(cplx w, u64 n) {
  if ((n & 1) == 0 || n == 0) throw DomainError("l_D: n must be odd and positive");
  if (w == cplx(1.0) && squarefree_split(n).first == 1) throw PoleError("l_D: pole at w = 1 for square n");
  if (w.real() <= 1.0) throw ConvergenceError("l_D: requires Re w > 1");
  const double eight = kronecker(8, static_cast<i64>(n));
  const cplx num = l_quadratic(w, n) * (1.0 - double(jacobi(2, static_cast<i64>(n))) * std::exp(-w * std::log(2.0)));
  cplx den = zeta(2.0 * w) * (1.0 - std::exp(-2.0 * w * std::log(2.0)));
  for (const auto& pp : factorize(n)) den *= 1.0 - std::exp(-2.0 * w * std::log(double(pp.p)));
  return eight * num / den;
}

cplx l_D_direct(cplx w, u64 n, u64 D) {
  const SquareFreeFamily fam = sieve_family(D);
  CompensatedSum sum;
  for (u64 d = 1; d <= D; d += 2) {
    if (!fam.contains(d)) continue;
    const int c = chi8d(static_cast<i64>(d), static_cast<i64>(n));
    if (c != 0) sum.add(double(c) * std::exp(-w * std::log(double(d))));
  }
  return sum.value();
}

// ---------------------------------------------------------------------------

FamilyEvaluator::FamilyEvaluator(const std::vector<cplx>& s_points, u64 d_max)
    : s_(s_points), d_max_(d_max), n_max_(1) {
  const double q_max = 8.0 * double(d_max);
  for (const cplx& s : s_) {
    afe_.push_back(std::make_unique<QuadraticAfe>(s, 0, q_max, true));
    n_max_ = std::max(n_max_, afe_.back()->length(q_max));
  }
  spf_ = std::make_unique<SpfTable>(n_max_ + 1);
}

void FamilyEvaluator::evaluate(u64 d, std::vector<cplx>& out) const {
  if (d > d_max_) throw DomainError("FamilyEvaluator: d above configured range");
  const double q = 8.0 * double(d);
  u64 N = 1;
  for (const auto& a : afe_) N = std::max(N, a->length(q));
  thread_local std::vector<std::int8_t> chi;
  chi.assign(N + 1, 0);
  chi[1] = 1;
  const i64 top = 8 * static_cast<i64>(d);
  for (u64 n = 3; n <= N; n += 2) {
    const u64 p = spf_->spf(n);
    chi[n] = (p == n) ? static_cast<std::int8_t>(kronecker(top, static_cast<i64>(p)))
                      : static_cast<std::int8_t>(chi[p] * chi[n / p]);
  }
  out.resize(afe_.size());
  for (std::size_t j = 0; j < afe_.size(); ++j) out[j] = afe_[j]->evaluate(q, chi.data());
}

}  // namespace mds
