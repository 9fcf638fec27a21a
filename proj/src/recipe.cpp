#include "mds/recipe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "mds/arith.hpp"
#include "mds/lfun.hpp"

namespace mds {

cplx gamma_X(cplx s) {
  return std::exp((s - 0.5) * std::log(kPi / 8.0)) * gamma_ratio((1.0 - s) / 2.0, s / 2.0);
}

cplx gamma_X_pm(cplx s, bool even) {
  const cplx pre = std::exp((s - 0.5) * std::log(kPi));
  if (even) return pre * gamma_ratio((1.0 - s) / 2.0, s / 2.0);
  return cplx(0.0, -1.0) * pre * gamma_ratio((2.0 - s) / 2.0, (1.0 + s) / 2.0);
}

TestFunction test_function(const std::string& id) {
  TestFunction f;
  f.id = id;
  if (id == "bump") {
    f.u0 = 0.75;
    f.u1 = 1.25;
    f.eval = [](double u) {
      const double v = 4.0 * (u - 1.0);
      return std::abs(v) < 1.0 ? std::exp(-1.0 / (1.0 - v * v)) : 0.0;
    };
  } else if (id == "wide") {
    f.u0 = 0.5;
    f.u1 = 1.5;
    f.eval = [](double u) {
      const double v = 2.0 * (u - 1.0);
      return std::abs(v) < 1.0 ? std::exp(-1.0 / (1.0 - v * v)) : 0.0;
    };
  } else {
    throw DomainError("unknown test function id '" + id + "'");
  }
  return f;
}

cplx mellin(const TestFunction& f, cplx s, double* err) {
  const cplx sm1 = s - 1.0;
  return integrate([&](double u) { return f.eval(u) * std::exp(sm1 * std::log(u)); }, f.u0, f.u1,
                   tolerances().mellin_abs, err);
}

// ---------------------------------------------------------------------------
// Prime tails and local-factor expansions

namespace {

const std::vector<u64>& primes_cached(u64 limit) {
  static std::mutex mu;
  static std::vector<u64> primes;
  static u64 have = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (limit > have) {
    have = std::max<u64>(limit, 100000);
    primes = primes_up_to(have);
  }
  return primes;
}

double min_real(const std::vector<cplx>& S) {
  double m = 1e300;
  for (const cplx& s : S) m = std::min(m, s.real());
  return m;
}

// sum over p > P of p^{-beta}, upper estimate by the logarithmic integral.
double prime_tail_estimate(double beta, double P) {
  if (beta <= 1.0) return 1e300;
  return std::pow(P, 1.0 - beta) / ((beta - 1.0) * std::log(P));
}

// Monomial in the local variables x_j = p^{-s_j} times p^{-pexp}.
using MonoKey = std::pair<std::vector<int>, int>;
using MonoMap = std::map<MonoKey, double>;

// Adds coef * prod_i p_{m_i}(x) * p^{-pexp}, with p_m the power sums.
void add_powersum_product(MonoMap& out, int k, double coef, const std::vector<int>& ms, int pexp) {
  const int r = static_cast<int>(ms.size());
  std::vector<int> idx(r, 0);
  while (true) {
    std::vector<int> cnt(k, 0);
    for (int i = 0; i < r; ++i) cnt[idx[i]] += ms[i];
    out[{cnt, pexp}] += coef;
    int pos = r - 1;
    while (pos >= 0 && ++idx[pos] == k) idx[pos--] = 0;
    if (pos < 0) break;
  }
}

// h2 = (p1^2 + p2)/2
void add_h2(MonoMap& out, int k, double coef, int pexp) {
  add_powersum_product(out, k, coef / 2, {1, 1}, pexp);
  add_powersum_product(out, k, coef / 2, {2}, pexp);
}

// h2^2 = (p1^4 + 2 p1^2 p2 + p2^2)/4
void add_h2_squared(MonoMap& out, int k, double coef, int pexp) {
  add_powersum_product(out, k, coef / 4, {1, 1, 1, 1}, pexp);
  add_powersum_product(out, k, coef / 2, {1, 1, 2}, pexp);
  add_powersum_product(out, k, coef / 4, {2, 2}, pexp);
}

// q' = p4/4 + p1 p3/3 - p1^4/12, the quartic part of log B
void add_qprime(MonoMap& out, int k, double coef, int pexp) {
  add_powersum_product(out, k, coef / 4, {4}, pexp);
  add_powersum_product(out, k, coef / 3, {1, 3}, pexp);
  add_powersum_product(out, k, -coef / 12, {1, 1, 1, 1}, pexp);
}

// Terms shared by both expansions: log(1 - r/(p+1)) with r = (B-1)/B,
// r = h2 + q' - h2^2/2 + O(x^6), 1/(p+1) = 1/p - 1/p^2 + ...
void add_ratio_part(MonoMap& out, int k) {
  for (int pe = 1; pe <= 2; ++pe) {
    const double sgn = (pe == 1) ? -1.0 : 1.0;
    add_h2(out, k, sgn, pe);
    add_qprime(out, k, sgn, pe);
    add_h2_squared(out, k, -0.5 * sgn, pe);
  }
  add_h2_squared(out, k, -0.5, 2);  // -r^2 / (2 (p+1)^2)
}

// log E_p for large p (zeta factors removed), through total degree 6.
MonoMap factored_expansion(int k) {
  MonoMap m;
  add_powersum_product(m, k, 1.0 / 3, {1, 3}, 0);
  add_powersum_product(m, k, -1.0 / 12, {1, 1, 1, 1}, 0);
  add_powersum_product(m, k, -1.0 / 4, {2, 2}, 0);
  add_powersum_product(m, k, 1.0 / 5, {1, 5}, 0);
  add_powersum_product(m, k, -1.0 / 9, {3, 3}, 0);
  add_powersum_product(m, k, -1.0 / 9, {1, 1, 1, 3}, 0);
  add_powersum_product(m, k, 1.0 / 45, {1, 1, 1, 1, 1, 1}, 0);
  add_ratio_part(m, k);
  return m;
}

// log F_p for large p (diagonal local factor), through total degree 6.
MonoMap diagonal_expansion(int k) {
  MonoMap m;
  add_h2(m, k, 1.0, 0);
  add_qprime(m, k, 1.0, 0);
  add_powersum_product(m, k, 1.0 / 6, {6}, 0);
  add_powersum_product(m, k, 1.0 / 5, {1, 5}, 0);
  add_powersum_product(m, k, 1.0 / 18, {3, 3}, 0);
  add_powersum_product(m, k, -1.0 / 9, {1, 1, 1, 3}, 0);
  add_powersum_product(m, k, 1.0 / 45, {1, 1, 1, 1, 1, 1}, 0);
  add_ratio_part(m, k);
  return m;
}

cplx expansion_tail(const MonoMap& mono, const std::vector<cplx>& S, u64 P) {
  CompensatedSum sum;
  for (const auto& [key, coef] : mono) {
    if (std::abs(coef) < 1e-13) continue;
    cplx alpha = double(key.second);
    for (std::size_t j = 0; j < S.size(); ++j) alpha += double(key.first[j]) * S[j];
    sum.add(coef * prime_tail(alpha, P));
  }
  return sum.value();
}

// Relative error of the truncated expansion, summed over p > P.
double expansion_error(int k, double sigma, u64 P) {
  const double Pd = double(P);
  const double kk = double(std::max(k, 1));
  return std::pow(kk, 8) * prime_tail_estimate(8 * sigma, Pd) +
         std::pow(kk, 6) * prime_tail_estimate(1 + 6 * sigma, Pd) +
         std::pow(kk, 4) * prime_tail_estimate(3 + 4 * sigma, Pd) +
         std::pow(kk, 2) * prime_tail_estimate(3 + 2 * sigma, Pd);
}

cplx pow_neg(u64 p, cplx s) { return std::exp(-s * std::log(double(p))); }

}  // namespace

cplx prime_tail(cplx alpha, u64 P) {
  if (alpha.real() <= 1.0) throw ConvergenceError("prime_tail: requires Re alpha > 1");
  const auto& primes = primes_cached(P);
  const double lP = std::log(double(P));
  CompensatedSum sum;
  for (int m = 1; m < 200; ++m) {
    const cplx s = double(m) * alpha;
    if (s.real() * lP > 50.0) break;
    const int mu = mobius(static_cast<u64>(m));
    if (mu == 0) continue;
    // log of zeta with the primes <= P removed; close to 0, so the principal
    // branch is the right one
    cplx log_zp = std::log(zeta(s));
    for (u64 p : primes) {
      if (p > P) break;
      log_zp += std::log(1.0 - pow_neg(p, s));
    }
    sum.add(double(mu) / double(m) * log_zp);
  }
  return sum.value();
}

cplx e_local_factor(const std::vector<cplx>& S, u64 p) {
  cplx pm = 1.0, pp = 1.0, zeta_inv = 1.0;
  std::vector<cplx> x(S.size());
  for (std::size_t j = 0; j < S.size(); ++j) {
    x[j] = pow_neg(p, S[j]);
    pm /= 1.0 - x[j];
    pp /= 1.0 + x[j];
    zeta_inv *= 1.0 - x[j] * x[j];
    for (std::size_t i = 0; i < j; ++i) zeta_inv *= 1.0 - x[i] * x[j];
  }
  const cplx B = 0.5 * (pm + pp);
  const double pd = double(p);
  return (1.0 + pd * B) / (pd + 1.0) * zeta_inv;
}

TValue t_factored(const std::vector<cplx>& S, u64 prime_cutoff) {
  const u64 P = prime_cutoff ? prime_cutoff : tolerances().euler_prime_cutoff;
  const cplx pref = 2.0 / (3.0 * zeta(2.0));
  const int k = static_cast<int>(S.size());
  if (k == 0) return {pref, 0.0};
  const double sigma = min_real(S);
  if (sigma <= 0.26) throw ConvergenceError("t_factored: requires Re s_j > 1/4 (with margin)");
  for (int i = 0; i < k; ++i) {
    if (std::abs(2.0 * S[i] - 1.0) < 1e-12) throw PoleError("t_factored: zeta(2 s_j) pole at s_j = 1/2");
    for (int j = 0; j < i; ++j)
      if (std::abs(S[i] + S[j] - 1.0) < 1e-12) throw PoleError("t_factored: zeta(s_i + s_j) pole");
  }
  cplx zeta_part = 1.0, two_part = 1.0;
  for (int i = 0; i < k; ++i) {
    zeta_part *= zeta(2.0 * S[i]);
    two_part *= 1.0 - pow_neg(2, 2.0 * S[i]);
    for (int j = 0; j < i; ++j) {
      zeta_part *= zeta(S[i] + S[j]);
      two_part *= 1.0 - pow_neg(2, S[i] + S[j]);
    }
  }
  cplx log_e = 0.0;
  for (u64 p : primes_cached(P)) {
    if (p > P) break;
    if (p == 2) continue;
    log_e += std::log(e_local_factor(S, p));
  }
  log_e += expansion_tail(factored_expansion(k), S, P);
  const cplx value = pref * zeta_part * two_part * std::exp(log_e);
  return {value, std::abs(value) * expansion_error(k, sigma, P)};
}

TValue t_diagonal_euler(const std::vector<cplx>& S, u64 prime_cutoff) {
  const u64 P = prime_cutoff ? prime_cutoff : tolerances().euler_prime_cutoff;
  const cplx pref = 2.0 / (3.0 * zeta(2.0));
  const int k = static_cast<int>(S.size());
  if (k == 0) return {pref, 0.0};
  const double sigma = min_real(S);
  if (sigma <= 0.5) throw ConvergenceError("t_diagonal_euler: requires Re s_j > 1/2");
  cplx log_f = 0.0;
  for (u64 p : primes_cached(P)) {
    if (p > P) break;
    if (p == 2) continue;
    // sum over exponent tuples with even total e of a(p^e) prod x_j^{e_j}
    const double ap = double(p) / double(p + 1);
    const double decay = std::pow(double(p), -sigma);
    cplx local = 1.0;
    for (int e = 2; e < 400; e += 2) {
      const cplx h = f_weight_local(S, p, e);
      local += ap * h;
      if (std::abs(h) < 1e-19 && std::pow(decay, e) * std::pow(double(e + k), k) < 1e-19) break;
    }
    log_f += std::log(local);
  }
  log_f += expansion_tail(diagonal_expansion(k), S, P);
  const cplx value = pref * std::exp(log_f);
  const double err = expansion_error(k, sigma, P) + std::pow(double(k), 8) * prime_tail_estimate(8 * sigma, double(P));
  return {value, std::abs(value) * err};
}

TValue t_diagonal(const std::vector<cplx>& S, u64 cutoff) {
  const cplx pref = 2.0 / (3.0 * zeta(2.0));
  const int k = static_cast<int>(S.size());
  if (k == 0) return {pref, 0.0};
  const double sigma = min_real(S);
  if (sigma <= 0.5) throw ConvergenceError("t_diagonal: requires Re s_j > 1/2");
  const u64 M = static_cast<u64>(std::floor(std::sqrt(double(cutoff))));
  SpfTable spf(std::max<u64>(M, 2));
  CompensatedSum sum;
  for (u64 m = 1; m <= M; m += 2) {
    cplx g = a_weight_double(m);
    for (const auto& [p, e] : spf.factorize(m)) g *= f_weight_local(S, p, 2 * e);
    sum.add(g);
  }
  const cplx value = pref * sum.value();
  // Rankin: sum_{m > M} |g(m)| <= M^{-eps} sum |g(m)| m^{eps}, and the last
  // sum is the diagonal series at Re S - eps/2.
  double bound = 1e300;
  for (int i = 1; i <= 8; ++i) {
    const double eps = (2.0 * sigma - 1.0) * double(i) / 9.0;
    std::vector<cplx> shifted;
    for (const cplx& s : S) shifted.push_back(s.real() - eps / 2.0);
    const double tabs = std::abs(t_factored(shifted).value);
    bound = std::min(bound, std::pow(double(std::max<u64>(M, 1)), -eps) * tabs);
  }
  return {value, bound};
}

// ---------------------------------------------------------------------------

std::vector<std::vector<int>> swap_subsets(int k, int max_size) {
  std::vector<std::vector<int>> out;
  for (int size = 0; size <= std::min(k, max_size); ++size) {
    std::vector<bool> sel(k, false);
    std::fill(sel.begin(), sel.begin() + size, true);
    do {
      std::vector<int> J;
      for (int i = 0; i < k; ++i)
        if (sel[i]) J.push_back(i);
      out.push_back(J);
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }
  return out;
}

std::string subset_label(const std::vector<int>& J) {
  std::string out = "{";
  for (std::size_t i = 0; i < J.size(); ++i) out += (i ? "," : "") + std::to_string(J[i] + 1);
  return out + "}";
}

cplx SwapTermSet::total() const {
  CompensatedSum s;
  for (const auto& t : terms) {
    if (std::isnan(t.value.real())) throw ConvergenceError("swap term J=" + subset_label(t.J) + ": " + t.note);
    s.add(t.value);
  }
  return s.value();
}

SwapTermSet swap_terms(const std::vector<cplx>& S, int max_swap, double X, const TestFunction& f) {
  SwapTermSet out;
  out.S = S;
  out.X = X;
  const int k = static_cast<int>(S.size());
  for (const auto& J : swap_subsets(k, max_swap)) {
    RecipeTerm r;
    r.J = J;
    r.exponent = 1.0 + 0.5 * double(J.size());
    r.gamma_product = 1.0;
    r.swapped_point = S;
    for (int j : J) {
      r.exponent -= S[j];
      r.gamma_product *= gamma_X(S[j]);
      r.swapped_point[j] = 1.0 - S[j];
    }
    try {
      r.t_value = t_factored(r.swapped_point).value;
    } catch (const PoleError& e) {
      throw PoleError("swap term J=" + subset_label(J) + ": " + e.what());
    } catch (const ConvergenceError& e) {
      // outside the range where T can be evaluated; the record stays, without a value
      r.t_value = cplx(std::nan(""), std::nan(""));
      r.note = e.what();
    }
    r.mellin_value = mellin(f, r.exponent);
    r.value = std::exp(r.exponent * std::log(X)) * r.mellin_value * r.gamma_product * r.t_value;
    out.terms.push_back(std::move(r));
  }
  return out;
}

}  // namespace mds
