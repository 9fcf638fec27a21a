#include <catch_amalgamated.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "mds/arith.hpp"
#include "mds/lfun.hpp"
#include "mds/recipe.hpp"

using namespace mds;

namespace {

double x_real_oracle(double s) {
  return std::pow(kPi / 8, s - 0.5) * boost::math::tgamma((1 - s) / 2) / boost::math::tgamma(s / 2);
}

}  // namespace

TEST_CASE("gamma_X", "[recipe]") {
  CHECK(std::abs(gamma_X(0.5) - cplx(1)) < 1e-14);
  CHECK(std::abs(gamma_X(0.3) * gamma_X(0.7) - cplx(1)) < 1e-12);
  CHECK(std::abs(gamma_X(0.25) - x_real_oracle(0.25)) < 1e-12);
  for (double re = -2.3; re < 3; re += 0.37)
    for (double im = -20; im <= 20; im += 3.1) {
      const cplx s(re, im);
      REQUIRE(std::abs(gamma_X(s) * gamma_X(1.0 - s) - cplx(1)) < 1e-12);
    }
}

TEST_CASE("gamma_X_pm", "[recipe]") {
  CHECK(std::abs(gamma_X_pm(0.5, true) - cplx(1)) < 1e-14);
  CHECK(std::abs(gamma_X_pm(0.5, false) - cplx(0, -1)) < 1e-14);
  // even case: pi^{s-1/2} Gamma((1-s)/2) / Gamma(s/2)
  const double s = 0.2;
  const double expect = std::pow(kPi, s - 0.5) * boost::math::tgamma((1 - s) / 2) / boost::math::tgamma(s / 2);
  CHECK(std::abs(gamma_X_pm(s, true) - expect) < 1e-12);
}

TEST_CASE("test functions and Mellin transforms", "[recipe]") {
  const TestFunction f = test_function("bump");
  CHECK(f.eval(0.75) == 0.0);
  CHECK(f.eval(1.25) == 0.0);
  CHECK(f.eval(1.0) > 0.0);
  CHECK_THROWS_AS(test_function("nope"), DomainError);

  // Riemann sums on 10^6 points (the integrand vanishes to all orders at the ends)
  const int M = 1000000;
  const double h = (f.u1 - f.u0) / M;
  const cplx pts[] = {1.0, 2.0, cplx(1, 40), cplx(0.5, 30), cplx(0.25, -7)};
  for (cplx s : pts) {
    cplx sum = 0;
    for (int i = 1; i < M; ++i) {
      const double u = f.u0 + i * h;
      sum += f.eval(u) * std::pow(u, s - 1.0);
    }
    CHECK(std::abs(mellin(f, s) - sum * h) < 1e-12);
  }
  // oscillation shrinks the transform away from the real axis
  CHECK(std::abs(mellin(f, cplx(1, 40))) < 0.1 * std::abs(mellin(f, 1.0)));
}

TEST_CASE("T(S) diagonal and factored forms", "[recipe]") {
  SECTION("k = 0 is 4/pi^2") {
    CHECK(std::abs(t_factored({}).value - cplx(4 / (kPi * kPi))) < 1e-12);
    CHECK(std::abs(t_diagonal({}, 10).value - cplx(4 / (kPi * kPi))) < 1e-12);
  }
  SECTION("k = 1 at 0.8 against the odd-square sum") {
    const u64 M = 2000000;
    long double sum = 0;
    for (i64 m = static_cast<i64>(M | 1); m >= 1; m -= 2)
      sum += a_weight_double(static_cast<u64>(m)) * std::pow(static_cast<long double>(m), -1.6L);
    // tail of sum_{m > M odd} a(m) m^{-1.6} lies between 0 and (1/2) M^{-0.6}/0.6
    const double base = 4 / (kPi * kPi) * static_cast<double>(sum);
    const double tail = 4 / (kPi * kPi) * 0.5 * std::pow(double(M), -0.6) / 0.6;
    const cplx t = t_factored({0.8}).value;
    CHECK(t.real() >= base - 1e-9);
    CHECK(t.real() <= base + tail + 1e-9);
    CHECK(std::abs(t - t_diagonal_euler({0.8}).value) < 1e-8);
  }
  SECTION("k = 2 at (2, 2) and (0.6, 0.7)") {
    CHECK(std::abs(t_factored({2.0, 2.0}).value - t_diagonal({2.0, 2.0}, 1000000).value) < 1e-9);
    CHECK(std::abs(t_factored({0.6, 0.7}).value - t_diagonal_euler({0.6, 0.7}).value) < 1e-6);
  }
  SECTION("pole direction near s = 1/2") {
    const double a = t_factored({0.52}).value.real(), b = t_factored({0.51}).value.real();
    CHECK(b > a);
    CHECK(a > 0);
  }
}

TEST_CASE("T(S) factored vs diagonal at random points", "[recipe][property]") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> re(0.6, 2.0), im(-4.0, 4.0);
  for (int i = 0; i < 20; ++i) {
    const int k = 1 + i % 3;
    std::vector<cplx> S;
    for (int j = 0; j < k; ++j) S.emplace_back(re(rng), im(rng));
    REQUIRE(std::abs(t_factored(S).value - t_diagonal_euler(S).value) < 1e-6);
  }
}

TEST_CASE("T(S) is symmetric in S", "[recipe][property]") {
  std::vector<cplx> S = {cplx(0.7, 1), 0.9, cplx(1.3, -2)};
  const cplx base = t_factored(S).value;
  std::sort(S.begin(), S.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  do {
    REQUIRE(std::abs(t_factored(S).value - base) < 1e-12 * std::abs(base));
  } while (std::next_permutation(S.begin(), S.end(), [](cplx a, cplx b) { return a.real() < b.real(); }));
}

TEST_CASE("swap_terms records", "[recipe]") {
  const TestFunction f = test_function("bump");
  SECTION("k = 1") {
    const SwapTermSet set = swap_terms({0.6}, 1, 1e5, f);
    REQUIRE(set.terms.size() == 2);
    CHECK(std::abs(set.terms[0].exponent - cplx(1)) < 1e-15);
    CHECK(std::abs(set.terms[0].gamma_product - cplx(1)) < 1e-15);
    CHECK(std::abs(set.terms[1].exponent - cplx(0.9)) < 1e-15);
    const cplx diag = 1e5 * mellin(f, 1.0) * t_factored({0.6}).value;
    CHECK(std::abs(set.terms[0].value - diag) < 1e-9 * std::abs(diag));
    CHECK(std::isfinite(set.total().real()));
  }
  SECTION("k = 2 and k = 3") {
    // equal points would put zeta(s_1 + s_2) at its pole in the 1-swap terms
    CHECK_THROWS(swap_terms({0.6, 0.6}, 2, 1e5, f));
    const SwapTermSet two = swap_terms({0.6, 0.65}, 2, 1e5, f);
    REQUIRE(two.terms.size() == 4);
    CHECK(std::abs(two.terms[3].exponent - cplx(0.75)) < 1e-15);
    CHECK(subset_label(two.terms[3].J) == "{1,2}");
    CHECK(swap_terms({0.6, 0.7, 0.8}, 3, 1e5, f).terms.size() == 8);
    CHECK(swap_subsets(3, 1).size() == 4);
  }
  SECTION("s -> 1 - s exchanges the records") {
    const double s = 0.63;
    const SwapTermSet a = swap_terms({s}, 1, 1e5, f), b = swap_terms({1 - s}, 1, 1e5, f);
    // (gamma product, swapped point) pairs agree as sets once b is rescaled by X(s)
    auto key = [](cplx g, const std::vector<cplx>& p) { return std::make_pair(g, p[0]); };
    std::vector<std::pair<cplx, cplx>> ka, kb;
    for (const auto& t : a.terms) ka.push_back(key(t.gamma_product, t.swapped_point));
    for (const auto& t : b.terms) kb.push_back(key(t.gamma_product * gamma_X(s), t.swapped_point));
    REQUIRE(ka.size() == kb.size());
    for (const auto& x : ka) {
      bool found = false;
      for (const auto& y : kb)
        if (std::abs(x.first - y.first) < 1e-12 && std::abs(x.second - y.second) < 1e-12) found = true;
      CHECK(found);
    }
  }
}
