#include "mds/moments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "mds/arith.hpp"
#include "mds/gauss.hpp"
#include "mds/lfun.hpp"

namespace mds {

namespace {

struct Window {
  u64 lo = 1, hi = 0;  // inclusive range of d with f(d/X) possibly nonzero
};

Window support_window(const TestFunction& f, double X) {
  Window w;
  w.lo = static_cast<u64>(std::max(1.0, std::floor(f.u0 * X) + 1.0));
  w.hi = static_cast<u64>(std::max(0.0, std::ceil(f.u1 * X) - 1.0));
  return w;
}

// Runs body(b) for b in [0, n) on `workers` threads. The first exception is
// rethrown after all threads join.
void parallel_blocks(u64 n, int workers, const std::function<void(u64)>& body) {
  std::atomic<u64> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto loop = [&] {
    for (;;) {
      const u64 b = next.fetch_add(1);
      if (b >= n) return;
      try {
        body(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < std::max(1, workers); ++i) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string hexfloat(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", x);
  return buf;
}

// L-value cache keyed by the point set and the d-range.
class LValueCache {
 public:
  LValueCache(const std::vector<cplx>& points, u64 lo, u64 hi) : width_(points.size()) {
    const char* dir = std::getenv("MDS_CACHE_DIR");
    if (!dir || !*dir || points.empty()) return;
    std::ostringstream key;
    key << "lvalues v1 afe_factor=" << hexfloat(tolerances().afe_length_factor)
        << " floor=" << hexfloat(tolerances().afe_kernel_floor) << " d=" << lo << ".." << hi << " s=";
    for (const cplx& s : points) key << hexfloat(s.real()) << "," << hexfloat(s.imag()) << ";";
    key_ = key.str();
    char name[64];
    std::snprintf(name, sizeof name, "/lvalues_%016zx.txt", std::hash<std::string>{}(key_));
    path_ = std::string(dir) + name;
    enabled_ = true;
    load();
  }

  bool enabled() const { return enabled_; }
  bool loaded() const { return loaded_; }

  const std::vector<cplx>* find(u64 d) const {
    auto it = values_.find(d);
    return it == values_.end() ? nullptr : &it->second;
  }

  void save(const std::vector<std::pair<u64, std::vector<cplx>>>& rows) const {
    if (!enabled_ || loaded_) return;
    const std::string tmp = path_ + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) return;
      out << key_ << "\n";
      for (const auto& [d, v] : rows) {
        out << d;
        for (const cplx& z : v) out << ' ' << hexfloat(z.real()) << ' ' << hexfloat(z.imag());
        out << '\n';
      }
    }
    std::rename(tmp.c_str(), path_.c_str());
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    if (!std::getline(in, line) || line != key_) return;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      u64 d;
      ls >> d;
      std::vector<cplx> v(width_);
      for (auto& z : v) {
        std::string re, im;
        ls >> re >> im;
        z = cplx(std::strtod(re.c_str(), nullptr), std::strtod(im.c_str(), nullptr));
      }
      if (!ls.fail()) values_.emplace(d, std::move(v));
    }
    loaded_ = true;
  }

  std::size_t width_;
  bool enabled_ = false, loaded_ = false;
  std::string key_, path_;
  std::unordered_map<u64, std::vector<cplx>> values_;
};

double min_real_part(const std::vector<cplx>& S) {
  double m = 1e300;
  for (const cplx& s : S) m = std::min(m, s.real());
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------

FamilyPlan plan_family_run(const FamilyRun& run) {
  if (run.scales.empty()) throw DomainError("family run: no scales given");
  if (run.block_size == 0) throw DomainError("family run: block size must be positive");
  FamilyPlan p;
  p.d_lo = ~u64(0);
  for (double X : run.scales) {
    if (!(X > 0)) throw DomainError("family run: scales must be positive");
    const Window w = support_window(run.f, X);
    p.d_lo = std::min(p.d_lo, w.lo);
    p.d_hi = std::max(p.d_hi, w.hi);
  }
  if (p.d_hi < p.d_lo) p.d_hi = p.d_lo;
  p.block_size = run.block_size;
  p.blocks = (p.d_hi - p.d_lo) / run.block_size + 1;
  const SquareFreeFamily fam = sieve_family(p.d_hi);
  for (double X : run.scales) {
    const Window w = support_window(run.f, X);
    for (u64 d = w.lo; d <= w.hi; ++d)
      if (fam.contains(d) && run.f.eval(double(d) / X) != 0.0) ++p.family_size;
  }
  for (const cplx& s : run.points) {
    const QuadraticAfe afe(s, 0, 8.0 * double(p.d_hi), false);
    p.max_afe_length = std::max(p.max_afe_length, afe.length(8.0 * double(p.d_hi)));
  }
  return p;
}

std::vector<std::vector<cplx>> family_sums(const FamilyRun& run) {
  const FamilyPlan plan = plan_family_run(run);
  for (const auto& prod : run.products)
    for (int i : prod)
      if (i < 0 || i >= static_cast<int>(run.points.size())) throw DomainError("family run: bad point index");
  bool need_l = false;
  for (const auto& prod : run.products) need_l = need_l || !prod.empty();

  const SquareFreeFamily fam = sieve_family(plan.d_hi);
  std::vector<Window> windows;
  for (double X : run.scales) windows.push_back(support_window(run.f, X));

  LValueCache cache(run.points, plan.d_lo, plan.d_hi);
  std::unique_ptr<FamilyEvaluator> evaluator;
  if (need_l && !cache.loaded()) evaluator = std::make_unique<FamilyEvaluator>(run.points, plan.d_hi);

  const std::size_t nx = run.scales.size(), np = run.products.size();
  // partial[b][x * np + p]
  std::vector<std::vector<cplx>> partial(plan.blocks);
  std::vector<std::vector<std::pair<u64, std::vector<cplx>>>> fresh(cache.enabled() ? plan.blocks : 0);

  parallel_blocks(plan.blocks, run.workers, [&](u64 b) {
    std::vector<CompensatedSum> acc(nx * np);
    std::vector<cplx> lv;
    const u64 lo = plan.d_lo + b * plan.block_size;
    const u64 hi = std::min(plan.d_hi, lo + plan.block_size - 1);
    for (u64 d = lo; d <= hi; ++d) {
      if (!fam.contains(d)) continue;
      bool any = false;
      for (std::size_t x = 0; x < nx && !any; ++x) any = d >= windows[x].lo && d <= windows[x].hi;
      if (!any) continue;
      if (need_l) {
        if (const auto* hit = cache.loaded() ? cache.find(d) : nullptr) {
          lv = *hit;
        } else {
          if (!evaluator) throw MdsError("L-value cache incomplete at d=" + std::to_string(d));
          try {
            evaluator->evaluate(d, lv);
          } catch (const MdsError& e) {
            throw MdsError("L-evaluation failed at d=" + std::to_string(d) + ": " + e.what());
          }
          if (cache.enabled()) fresh[b].emplace_back(d, lv);
        }
      }
      for (std::size_t x = 0; x < nx; ++x) {
        if (d < windows[x].lo || d > windows[x].hi) continue;
        const double wgt = run.f.eval(double(d) / run.scales[x]);
        if (wgt == 0.0) continue;
        for (std::size_t p = 0; p < np; ++p) {
          cplx v = wgt;
          for (int i : run.products[p]) v *= lv[i];
          acc[x * np + p].add(v);
        }
      }
    }
    partial[b].resize(nx * np);
    for (std::size_t i = 0; i < nx * np; ++i) partial[b][i] = acc[i].value();
  });

  if (cache.enabled() && !cache.loaded() && need_l) {
    std::vector<std::pair<u64, std::vector<cplx>>> rows;
    for (auto& f : fresh) rows.insert(rows.end(), f.begin(), f.end());
    cache.save(rows);
  }

  std::vector<std::vector<cplx>> out(nx, std::vector<cplx>(np));
  for (std::size_t i = 0; i < nx * np; ++i) {
    CompensatedSum s;
    for (u64 b = 0; b < plan.blocks; ++b) s.add(partial[b][i]);
    out[i / np][i % np] = s.value();
  }
  return out;
}

cplx empirical_moment(const std::vector<cplx>& S, double X, const TestFunction& f, int workers) {
  FamilyRun run;
  run.points = S;
  std::vector<int> all(S.size());
  for (std::size_t i = 0; i < S.size(); ++i) all[i] = static_cast<int>(i);
  run.products = {all};
  run.scales = {X};
  run.f = f;
  run.workers = workers;
  return family_sums(run)[0][0];
}

cplx predicted_moment(const std::vector<cplx>& S, double X, const TestFunction& f, int max_swap) {
  const int k = static_cast<int>(S.size());
  return swap_terms(S, max_swap < 0 ? k : max_swap, X, f).total();
}

double target_exponent(const std::vector<cplx>& S) {
  double e = (4.0 + 3.0 * double(S.size())) / 8.0;
  for (const cplx& s : S) e -= s.real() / 2.0;
  return e;
}

std::vector<ExperimentReport> residual_studies(const std::vector<MomentRequest>& reqs) {
  std::vector<ExperimentReport> out(reqs.size());
  // group requests by test function so each group shares one sweep
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t r = 0; r < reqs.size(); ++r) {
    const auto& q = reqs[r];
    if (q.scales.size() < 4) throw DomainError("residual study: need at least 4 scales");
    if (!std::is_sorted(q.scales.begin(), q.scales.end()) || q.scales.front() < 1e3)
      throw DomainError("residual study: scales must be increasing and >= 1e3");
    if (std::log10(q.scales.back() / q.scales.front()) < 1.5 - 1e-9)
      throw DomainError("residual study: scales must span at least 1.5 decades");
    groups[q.f_id].push_back(r);
  }
  for (const auto& [fid, members] : groups) {
    FamilyRun run;
    run.f = test_function(fid);
    std::vector<std::vector<int>> prod_of(reqs.size());
    for (std::size_t r : members) {
      run.workers = std::max(run.workers, reqs[r].workers);
      std::vector<int> prod;
      for (const cplx& s : reqs[r].S) {
        auto it = std::find(run.points.begin(), run.points.end(), s);
        if (it == run.points.end()) {
          run.points.push_back(s);
          it = run.points.end() - 1;
        }
        prod.push_back(static_cast<int>(it - run.points.begin()));
      }
      run.products.push_back(prod);
      for (double X : reqs[r].scales) run.scales.push_back(X);
    }
    std::sort(run.scales.begin(), run.scales.end());
    run.scales.erase(std::unique(run.scales.begin(), run.scales.end()), run.scales.end());
    const auto sums = family_sums(run);

    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::size_t r = members[m];
      const MomentRequest& q = reqs[r];
      ExperimentReport& rep = out[r];
      rep.request = q;
      const int k = static_cast<int>(q.S.size());
      const int ms = q.max_swap < 0 ? k : std::min(q.max_swap, k);
      std::vector<double> lx, ly;
      for (double X : q.scales) {
        const std::size_t xi = std::lower_bound(run.scales.begin(), run.scales.end(), X) - run.scales.begin();
        ExperimentRow row;
        row.X = X;
        row.empirical = sums[xi][m];
        row.predicted = swap_terms(q.S, ms, X, run.f).total();
        row.residual_abs = std::abs(row.empirical - row.predicted);
        rep.rows.push_back(row);
        lx.push_back(std::log(X));
        ly.push_back(std::log(std::max(row.residual_abs, 1e-300)));
      }
      rep.fit = least_squares(lx, ly);
      rep.target = target_exponent(q.S);
      rep.smallest_main_exponent = 1e300;
      for (const auto& J : swap_subsets(k, ms)) {
        double e = 1.0 + 0.5 * double(J.size());
        for (int j : J) e -= q.S[j].real();
        rep.smallest_main_exponent = std::min(rep.smallest_main_exponent, e);
      }
      rep.band_lo = rep.target - tolerances().band_halfwidth;
      rep.band_hi = std::min(rep.target + tolerances().band_halfwidth, rep.smallest_main_exponent);
      rep.pass = rep.fit.slope >= rep.band_lo && rep.fit.slope < rep.band_hi;
    }
  }
  return out;
}

ExperimentReport residual_study(const MomentRequest& req) { return residual_studies({req})[0]; }

// ---------------------------------------------------------------------------
// Dirichlet polynomial moments

namespace {

// sum_{n >= 1} chi_8d(n) n^{-s} W(n/N) by Poisson summation for the primitive
// even character of conductor q = 8d (Gauss sum sqrt q):
//   (1/sqrt q) sum_{l >= 1} chi(l) G^(l/q),  G^(xi) = 2 int g(x) cos(2 pi x xi) dx.
class PoissonDual {
 public:
  PoissonDual(cplx s, double N, const TestFunction& W) : s_(s), N_(N), W_(W) {
    const double rho = 0.5 * (W.u1 - W.u0);
    // the bump's Fourier transform at frequency Omega (in u) is below
    // exp(-sqrt(2 Omega rho)); 60 e-folds is far past double precision
    omega_stop_ = 1800.0 / rho;
    // trapezoid spacing resolving frequencies up to 2 omega_stop without aliasing
    M_ = static_cast<std::size_t>(std::ceil((W.u1 - W.u0) * 2.0 * omega_stop_ / (2.0 * kPi))) + 1;
    du_ = (W.u1 - W.u0) / double(M_);
    h_.resize(M_ + 1);
    for (std::size_t i = 0; i <= M_; ++i) {
      const double u = W.u0 + du_ * double(i);
      const double wv = W.eval(u);
      h_[i] = wv == 0.0 ? cplx(0.0) : wv * std::exp(-s * std::log(u));
    }
    scale_ = 2.0 * std::exp((1.0 - s) * std::log(N));
  }

  cplx sum(u64 d) const {
    const double q = 8.0 * double(d);
    const i64 top = 8 * static_cast<i64>(d);
    const u64 l_max = static_cast<u64>(std::ceil(omega_stop_ * q / (2.0 * kPi * N_)));
    CompensatedSum total;
    for (u64 l = 1; l <= l_max; ++l) {
      const int c = kronecker(top, static_cast<i64>(l));
      if (c == 0) continue;
      const double omega = 2.0 * kPi * N_ * double(l) / q;
      total.add(double(c) * cosine_integral(omega));
    }
    return scale_ * total.value() / std::sqrt(q);
  }

  u64 nodes() const { return M_ + 1; }

 private:
  // du * sum h_i cos(omega u_i), with e^{i omega u} advanced by rotation and
  // re-anchored every 64 steps
  cplx cosine_integral(double omega) const {
    const cplx step = std::polar(1.0, omega * du_);
    cplx acc_re = 0.0;
    cplx z;
    for (std::size_t i = 0; i <= M_; ++i) {
      if (i % 64 == 0) z = std::polar(1.0, omega * (W_.u0 + du_ * double(i)));
      acc_re += h_[i] * z.real();
      z *= step;
    }
    return acc_re * du_;
  }

  cplx s_;
  double N_;
  TestFunction W_;
  double omega_stop_ = 0, du_ = 0;
  std::size_t M_ = 0;
  std::vector<cplx> h_;
  cplx scale_;
};

bool use_poisson(const std::vector<cplx>& S, double N, const TestFunction& W, bool force_direct) {
  return !force_direct && S.size() == 1 && W.u1 * N > 20000.0;
}

}  // namespace

cplx polynomial_moment_empirical(const std::vector<cplx>& S, double X, double N, const TestFunction& f,
                                 const TestFunction& W, int workers, bool force_direct, std::string* method) {
  if (!(N >= 1.0)) throw DomainError("polynomial moment: N must be >= 1");
  const Window win = support_window(f, X);
  const SquareFreeFamily fam = sieve_family(std::max<u64>(win.hi, 1));
  const u64 block = 512;
  const u64 blocks = win.hi >= win.lo ? (win.hi - win.lo) / block + 1 : 0;
  std::vector<cplx> partial(blocks);
  const bool poisson = use_poisson(S, N, W, force_direct);
  if (method) *method = poisson ? "poisson" : "direct";

  if (poisson) {
    const PoissonDual dual(S[0], N, W);
    parallel_blocks(blocks, workers, [&](u64 b) {
      CompensatedSum acc;
      const u64 lo = win.lo + b * block, hi = std::min(win.hi, lo + block - 1);
      for (u64 d = lo; d <= hi; ++d) {
        if (!fam.contains(d)) continue;
        const double wgt = f.eval(double(d) / X);
        if (wgt != 0.0) acc.add(wgt * dual.sum(d));
      }
      partial[b] = acc.value();
    });
  } else {
    const u64 n_lo = static_cast<u64>(std::max(1.0, std::floor(W.u0 * N)));
    const u64 n_hi = static_cast<u64>(std::ceil(W.u1 * N));
    if (double(n_hi - n_lo) * double(blocks * block) > 5e11)
      throw ResourceLimitError("polynomial moment: direct sum too large");
    std::vector<u64> ns;
    std::vector<cplx> coef;
    for (u64 n = n_lo; n <= n_hi; n += 1) {
      if ((n & 1) == 0) continue;  // chi_8d(n) = 0 for even n
      const double wv = W.eval(double(n) / N);
      if (wv == 0.0) continue;
      ns.push_back(n);
      coef.push_back(wv * f_weight(S, n));
    }
    parallel_blocks(blocks, workers, [&](u64 b) {
      CompensatedSum acc;
      const u64 lo = win.lo + b * block, hi = std::min(win.hi, lo + block - 1);
      for (u64 d = lo; d <= hi; ++d) {
        if (!fam.contains(d)) continue;
        const double wgt = f.eval(double(d) / X);
        if (wgt == 0.0) continue;
        const i64 top = 8 * static_cast<i64>(d);
        CompensatedSum inner;
        for (std::size_t i = 0; i < ns.size(); ++i) {
          const int c = kronecker(top, static_cast<i64>(ns[i]));
          if (c != 0) inner.add(double(c) * coef[i]);
        }
        acc.add(wgt * inner.value());
      }
      partial[b] = acc.value();
    });
  }
  CompensatedSum total;
  for (const cplx& v : partial) total.add(v);
  return total.value();
}

cplx polynomial_moment_diagonal(const std::vector<cplx>& S, double X, double N, const TestFunction& f,
                                const TestFunction& W) {
  // sum over odd squares n = m^2 of a(m) f_S(n) W(n/N)
  const cplx f1 = mellin(f, 1.0);
  const u64 m_lo = static_cast<u64>(std::floor(std::sqrt(std::max(0.0, W.u0 * N))));
  const u64 m_hi = static_cast<u64>(std::ceil(std::sqrt(W.u1 * N)));
  CompensatedSum sq;
  for (u64 m = std::max<u64>(1, m_lo); m <= m_hi; ++m) {
    if ((m & 1) == 0) continue;
    const double n = double(m) * double(m);
    const double wv = W.eval(n / N);
    if (wv == 0.0) continue;
    sq.add(a_weight_double(m) * f_weight(S, m * m) * wv);
  }
  return X * f1 * (2.0 / (3.0 * zeta(2.0))) * sq.value();
}

cplx polynomial_moment_one_swap(const std::vector<cplx>& S, double X, double N, const TestFunction& f,
                                const TestFunction& W, double* contour_height) {
  const int k = static_cast<int>(S.size());
  // 1-swap terms: (1/2 pi) int W~(a+it) N^{a+it} X^{e} f~(e) X(s_j+u) T(S_j(u)) dt,
  // e = 3/2 - s_j - u, S_j(u) = {s_i + u (i != j), 1 - s_j - u}
  const double a = 0.1;
  const double lX = std::log(X), lN = std::log(N);
  const u64 contour_primes = 1000;
  CompensatedSum one;
  for (int j = 0; j < k; ++j) {
    auto weight = [&](double t) {
      const cplx u(a, t);
      const cplx e = 1.5 - S[j] - u;
      return mellin(W, u) * mellin(f, e);
    };
    const double ref = std::abs(weight(0.0));
    double H = 20.0;
    while (H < 3000.0 && std::abs(weight(H)) + std::abs(weight(-H)) > 1e-11 * ref) H += 20.0;
    if (contour_height) *contour_height = std::max(*contour_height, H);
    auto integrand = [&](double t) -> cplx {
      const cplx u(a, t);
      const cplx e = 1.5 - S[j] - u;
      std::vector<cplx> pt(S.size());
      for (int i = 0; i < k; ++i) pt[i] = S[i] + u;
      pt[j] = 1.0 - S[j] - u;
      const cplx val = mellin(W, u) * std::exp(u * lN + e * lX) * mellin(f, e) * gamma_X(S[j] + u) *
                       t_factored(pt, contour_primes).value;
      return val / (2.0 * kPi);
    };
    // integrand phase speed: |log(N/X)| from the powers, log t from the gamma factor
    const double freq = std::abs(lN - lX) + std::log(2.0 + H) + 2.0;
    // 20-point Gauss panels spanning two oscillations each
    const int panels = static_cast<int>(std::ceil(H * freq / (2.0 * kPi))) + 4;
    one.add(integrate_panels(integrand, -H, H, panels));
  }
  return one.value();
}

PolyMomentResult dirichlet_polynomial_moment(const std::vector<cplx>& S, double X, double N,
                                             const TestFunction& f, const TestFunction& W, int workers,
                                             bool force_direct) {
  PolyMomentResult r;
  r.X = X;
  r.N = N;
  r.empirical = polynomial_moment_empirical(S, X, N, f, W, workers, force_direct, &r.method);
  r.diagonal = polynomial_moment_diagonal(S, X, N, f, W);
  r.one_swap = polynomial_moment_one_swap(S, X, N, f, W, &r.contour_height);
  r.residual_abs = std::abs(r.empirical - r.diagonal - r.one_swap);
  r.residual_diag_abs = std::abs(r.empirical - r.diagonal);
  return r;
}

// ---------------------------------------------------------------------------
// Identities

int psi8(int index, i64 m) {
  if ((m & 1) == 0) return 0;
  const i64 r = ((m % 8) + 8) % 8;
  const int m4 = (r % 4 == 1) ? 1 : -1;
  const int m8 = (r == 1 || r == 7) ? 1 : -1;
  switch (index) {
    case 0: return 1;
    case 1: return m4;
    case 2: return m8;
    case 3: return m4 * m8;
    default: throw DomainError("psi8: index must be 0..3");
  }
}

namespace {

// L(s_j, chi_8d) for every odd square-free d <= D.
class ChiLTable {
 public:
  ChiLTable(const std::vector<cplx>& S, u64 D) : k_(S.size()), D_(D) {
    fam_ = sieve_family(std::max<u64>(D, 1));
    vals_.assign((D + 1) * std::max<std::size_t>(k_, 1), cplx(0.0));
    if (k_ == 0) return;
    FamilyEvaluator ev(S, std::max<u64>(D, 1));
    std::vector<cplx> out;
    for (u64 d = 1; d <= D; d += 2) {
      if (!fam_.contains(d)) continue;
      ev.evaluate(d, out);
      for (std::size_t j = 0; j < k_; ++j) vals_[d * k_ + j] = out[j];
    }
  }
  bool squarefree(u64 d) const { return fam_.contains(d); }
  cplx at(u64 d, std::size_t j) const { return vals_[d * k_ + j]; }

 private:
  std::size_t k_;
  u64 D_;
  SquareFreeFamily fam_;
  std::vector<cplx> vals_;
};

double zeta_real_product(const std::vector<cplx>& S) {
  double z = 1.0;
  for (const cplx& s : S) {
    if (s.real() <= 1.0) return std::numeric_limits<double>::infinity();
    z *= zeta(s.real()).real();
  }
  return z;
}

cplx a_direct_table(const ChiLTable& tab, const std::vector<cplx>& S, cplx w, u64 D) {
  CompensatedSum sum;
  for (u64 d = 1; d <= D; d += 2) {
    if (!tab.squarefree(d)) continue;
    cplx v = std::exp(-w * std::log(double(d)));
    for (std::size_t j = 0; j < S.size(); ++j) v *= tab.at(d, j);
    sum.add(v);
  }
  return sum.value();
}

cplx a_c_first_table(const ChiLTable& tab, const std::vector<cplx>& S, cplx w, u64 c, u64 D) {
  CompensatedSum sum;
  for (u64 d = 1; d <= D; d += 2) {
    const auto [d0, d1] = squarefree_split(d);
    cplx v = std::exp(-w * std::log(double(d)));
    for (std::size_t j = 0; j < S.size(); ++j) v *= tab.at(d0, j);
    // Euler factors removed by the imprimitive modulus 8 c^2 d
    if (!S.empty()) {
      std::vector<u64> ps;
      for (const auto& pp : factorize(c * d1)) ps.push_back(pp.p);
      const i64 top = 8 * static_cast<i64>(d0);
      for (u64 p : ps) {
        const int ch = kronecker(top, static_cast<i64>(p));
        if (ch == 0) continue;
        for (const cplx& s : S) v *= 1.0 - double(ch) * std::exp(-s * std::log(double(p)));
      }
    }
    sum.add(v);
  }
  return sum.value();
}

double a_tail(const std::vector<cplx>& S, cplx w, u64 D) {
  if (w.real() <= 1.0) return std::numeric_limits<double>::infinity();
  return zeta_real_product(S) * std::pow(double(D), 1.0 - w.real()) / (w.real() - 1.0);
}

IdentityResult finish(std::string name, cplx lhs, cplx rhs, double tail) {
  IdentityResult r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = std::abs(lhs - rhs);
  r.tail_bound = tail;
  r.tolerance = tolerances().identity_abs;
  r.pass = r.residual < r.tolerance;
  return r;
}

std::string point_label(const std::vector<cplx>& S, cplx w) {
  std::ostringstream o;
  o << "S=(";
  for (std::size_t i = 0; i < S.size(); ++i) {
    o << (i ? "," : "") << S[i].real();
    if (S[i].imag() != 0) o << (S[i].imag() > 0 ? "+" : "") << S[i].imag() << "i";
  }
  o << ") w=" << w.real();
  if (w.imag() != 0) o << (w.imag() > 0 ? "+" : "") << w.imag() << "i";
  return o.str();
}

}  // namespace

TailResult a_direct(const std::vector<cplx>& S, cplx w, u64 D) {
  const ChiLTable tab(S, D);
  return {a_direct_table(tab, S, w, D), a_tail(S, w, D)};
}

cplx l_chi8c2d(cplx s, u64 c, u64 d) {
  if ((c & 1) == 0 || (d & 1) == 0 || c == 0 || d == 0) throw DomainError("l_chi8c2d: c and d must be odd");
  const auto [d0, d1] = squarefree_split(d);
  cplx v = l_chi8d(s, d0);
  const i64 top = 8 * static_cast<i64>(d0);
  for (const auto& pp : factorize(c * d1)) {
    const int ch = kronecker(top, static_cast<i64>(pp.p));
    if (ch != 0) v *= 1.0 - double(ch) * std::exp(-s * std::log(double(pp.p)));
  }
  return v;
}

TailResult a_c_first(const std::vector<cplx>& S, cplx w, u64 c, u64 D) {
  if ((c & 1) == 0) throw DomainError("a_c_first: c must be odd");
  const ChiLTable tab(S, D);
  return {a_c_first_table(tab, S, w, c, D), a_tail(S, w, D)};
}

TailResult a_c_second(const std::vector<cplx>& S, cplx w, u64 c, u64 n_max) {
  if ((c & 1) == 0) throw DomainError("a_c_second: c must be odd");
  if (w.real() <= 1.0) throw ConvergenceError("a_c_second: requires Re w > 1");
  const cplx two_w = std::exp(-w * std::log(2.0));
  CompensatedSum sum;
  for (u64 m = 1; m <= n_max; m += 2) {
    if (std::gcd(m, c) != 1) continue;
    const cplx fw = f_weight(S, m);
    if (fw == cplx(0.0)) continue;
    const int psi2 = jacobi(2, static_cast<i64>(m));
    // L(w, (./m) psi_1): drop the Euler factor at 2
    const cplx L = l_quadratic(w, m) * (1.0 - double(psi2) * two_w);
    sum.add(double(psi2) * L * fw);
  }
  const double sig = min_real_part(S);
  double tail = std::numeric_limits<double>::infinity();
  if (S.empty()) {
    tail = 0.0;
  } else if (sig > 1.0) {
    const double lg = std::log(double(n_max));
    tail = zeta(w.real()).real() * std::pow(double(n_max), 1.0 - sig) * std::pow(lg + 1.0, double(S.size()) - 1.0) /
           (sig - 1.0);
  }
  return {sum.value(), tail};
}

IdentityResult identity_check_a_c(const std::vector<cplx>& S, cplx w, u64 c, u64 cutoff) {
  const TailResult lhs = a_c_first(S, w, c, cutoff);
  const TailResult rhs = a_c_second(S, w, c, cutoff);
  return finish("A_(c) d-sum vs n-sum, c=" + std::to_string(c) + " " + point_label(S, w), lhs.value, rhs.value,
                lhs.error_bound + rhs.error_bound);
}

IdentityResult mobius_assembly_check(const std::vector<cplx>& S, cplx w, u64 D, u64 c_max) {
  const ChiLTable tab(S, D);
  const cplx lhs = a_direct_table(tab, S, w, D);
  CompensatedSum rhs;
  for (u64 c = 1; c <= c_max; c += 2) {
    const int mu = mobius(c);
    if (mu == 0) continue;
    rhs.add(double(mu) * std::exp(-2.0 * w * std::log(double(c))) * a_c_first_table(tab, S, w, c, D));
  }
  // |A_(c)| <= zeta(Re w) prod zeta(Re s_j); the c-tail is bounded by sum_{c > c_max} c^{-2 Re w}
  const double ac_bound = zeta(w.real()).real() * zeta_real_product(S);
  const double c_tail = ac_bound * std::pow(double(c_max), 1.0 - 2.0 * w.real()) / (2.0 * w.real() - 1.0);
  return finish("Moebius assembly " + point_label(S, w), lhs, rhs.value(), 2.0 * a_tail(S, w, D) + c_tail);
}

IdentityResult interchange_check(const std::vector<cplx>& S, cplx w, u64 D, u64 n_max) {
  const TailResult lhs = a_direct(S, w, D);
  CompensatedSum rhs;
  for (u64 n = 1; n <= n_max; n += 2) {
    const cplx fw = f_weight(S, n);
    if (fw == cplx(0.0)) continue;
    rhs.add(fw * l_D(w, n));
  }
  const double sig = min_real_part(S);
  const double rhs_tail = S.empty() ? 0.0
                                    : zeta(w.real()).real() * std::pow(double(n_max), 1.0 - sig) *
                                          std::pow(std::log(double(n_max)) + 1.0, double(S.size()) - 1.0) / (sig - 1.0);
  return finish("family-first interchange " + point_label(S, w), lhs.value, rhs.value(),
                lhs.error_bound + rhs_tail);
}

IdentityResult l_d_check(cplx w, u64 n, u64 D) {
  const cplx closed = l_D(w, n);
  const cplx direct = l_D_direct(w, n, D);
  const double tail = std::pow(double(D), 1.0 - w.real()) / (w.real() - 1.0);
  return finish("L_D closed form n=" + std::to_string(n) + " " + point_label({}, w), direct, closed, tail);
}

TailResult d_direct(const std::vector<cplx>& t, cplx s, int psi, u64 n, u64 c, u64 m_max) {
  if (s.real() <= 1.5) throw ConvergenceError("d_direct: requires Re s > 3/2");
  const SpfTable spf(std::max<u64>(m_max, 2));
  CompensatedSum sum;
  const cplx ex = s + 0.5;
  for (u64 m = 1; m <= m_max; m += 2) {
    if (std::gcd(m, c) != 1) continue;
    const int ps = psi8(psi, static_cast<i64>(m));
    const auto fac = spf.factorize(m);
    double G = 1.0;
    for (const auto& pp : fac) {
      G *= g_prime_power(pp.p, pp.e, static_cast<i64>(n));
      if (G == 0.0) break;
    }
    if (G == 0.0) continue;
    sum.add(double(ps) * G * f_weight(t, fac) * std::exp(-ex * std::log(double(m))));
  }
  // |G| <= m, |f_t| <= tau_k
  const double sig = s.real();
  const double lg = std::log(double(m_max));
  const double tail = std::pow(double(m_max), 1.5 - sig) * std::pow(lg + 1.0, double(t.size()) - 1.0) / (sig - 1.5);
  return {sum.value(), tail};
}

cplx d_euler(const std::vector<cplx>& t, cplx s, int psi, u64 n, u64 c, u64 prime_cutoff) {
  if (s.real() <= 0.5) throw ConvergenceError("d_euler: requires Re s > 1/2");
  for (const cplx& tj : t)
    if (tj.real() < 0) throw DomainError("d_euler: requires Re t_j >= 0");
  const u64 P = prime_cutoff ? prime_cutoff : tolerances().euler_prime_cutoff;
  const i64 nn = static_cast<i64>(n);
  auto chi = [&](i64 m) { return (m & 1) ? psi8(psi, m) * kronecker(4 * nn, m) : 0; };

  // L(s + t_j, chi) / L(2s + 2t_j, chi^2), chi periodic modulo 8n
  const u64 period = 8 * n;
  std::vector<cplx> c1(period), c2(period);
  for (u64 a = 0; a < period; ++a) {
    const int v = chi(static_cast<i64>(a));
    c1[a] = double(v);
    c2[a] = double(v * v);
  }
  cplx value = 1.0;
  for (const cplx& tj : t) value *= periodic_series(c1, s + tj).value / periodic_series(c2, 2.0 * (s + tj)).value;

  // the L-quotient carries the factor (1 + chi(p) p^{-s-t_j}) at p | c, which
  // is not part of D
  for (const auto& pp : factorize(c)) {
    const int v = chi(static_cast<i64>(pp.p));
    if (v == 0) continue;
    for (const cplx& tj : t) value /= 1.0 + double(v) * std::exp(-(s + tj) * std::log(double(pp.p)));
  }

  // P_2: the finitely many local factors at p | n, p not dividing 2c
  for (const auto& pp : factorize(n)) {
    if (pp.p == 2 || c % pp.p == 0) continue;
    cplx local = 1.0;
    for (int e = 1; e <= pp.e + 2; ++e) {
      const double G = g_prime_power(pp.p, e, nn);
      if (G == 0.0) continue;
      const u64 pe = static_cast<u64>(std::llround(std::pow(double(pp.p), e)));
      local += double(psi8(psi, static_cast<i64>(pe))) * G * f_weight_local(t, pp.p, e) *
               std::exp(-double(e) * (s + 0.5) * std::log(double(pp.p)));
    }
    value *= local;
  }

  // E: P_1 local factors divided by the L-quotient's local factors
  const std::vector<u64> primes = primes_up_to(P);
  cplx log_e = 0.0;
  for (u64 p : primes) {
    if (p == 2 || c % p == 0 || n % p == 0) continue;
    const int v = chi(static_cast<i64>(p));
    cplx num = 1.0, den = 1.0;
    for (const cplx& tj : t) {
      const cplx x = std::exp(-(s + tj) * std::log(double(p)));
      num += double(v) * x;
      den *= 1.0 + double(v) * x;
    }
    log_e += std::log(num / den);
  }
  return value * std::exp(log_e);
}

IdentityResult d_euler_check(const std::vector<cplx>& t, cplx s, int psi, u64 n, u64 c, u64 m_max) {
  const TailResult lhs = d_direct(t, s, psi, n, c, m_max);
  const cplx rhs = d_euler(t, s, psi, n, c);
  std::ostringstream name;
  name << "Euler product for D, psi=" << psi << " n=" << n << " c=" << c << " " << point_label(t, s);
  return finish(name.str(), lhs.value, rhs, lhs.error_bound);
}

ResidueResult residue_check(const std::vector<cplx>& S, u64 n_max) {
  ResidueResult r;
  r.w = {1.1, 1.05, 1.025};
  std::vector<cplx> coef((n_max + 1), 0.0);
  for (u64 n = 1; n <= n_max; n += 2) coef[n] = f_weight(S, n);
  for (double w : r.w) {
    CompensatedSum sum;
    for (u64 n = 1; n <= n_max; n += 2)
      if (coef[n] != cplx(0.0)) sum.add(coef[n] * l_D(w, n));
    r.scaled.push_back((w - 1.0) * sum.value());
  }
  // quadratic through (h_i, y_i), h = w - 1, evaluated at h = 0
  cplx ext = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    double wt = 1.0;
    for (std::size_t j = 0; j < 3; ++j)
      if (j != i) wt *= (0.0 - (r.w[j] - 1.0)) / ((r.w[i] - 1.0) - (r.w[j] - 1.0));
    ext += wt * r.scaled[i];
  }
  r.extrapolated = ext;
  r.target = t_factored(S).value;
  r.rel_error = std::abs(ext - r.target) / std::abs(r.target);
  return r;
}

}  // namespace mds
