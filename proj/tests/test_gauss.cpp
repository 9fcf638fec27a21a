#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "mds/arith.hpp"
#include "mds/gauss.hpp"
#include "mds/numerics.hpp"

using namespace mds;

namespace {

// Independent definitional sums in long double with exact reduction of j*l mod n.
cplx tau_oracle(u64 n, i64 l, const std::function<int(i64)>& chi) {
  if (n == 1) return 1.0;
  long double re = 0, im = 0;
  const i64 ln = ((l % static_cast<i64>(n)) + static_cast<i64>(n)) % static_cast<i64>(n);
  for (u64 j = 0; j < n; ++j) {
    const int c = chi(static_cast<i64>(j));
    if (c == 0) continue;
    const long double ang = 2.0L * 3.141592653589793238462643383279502884L *
                            static_cast<long double>((j * static_cast<u64>(ln)) % n) / static_cast<long double>(n);
    re += c * std::cos(ang);
    im += c * std::sin(ang);
  }
  return {static_cast<double>(re), static_cast<double>(im)};
}

cplx g_oracle(u64 n, i64 l) {
  const cplx t = tau_oracle(n, l, [n](i64 j) { return jacobi(j, static_cast<i64>(n)); });
  return (n % 4 == 1) ? t : cplx(0, -1) * t;
}

}  // namespace

TEST_CASE("tau_sum examples", "[gauss]") {
  Character leg3 = [](i64 j) { return cplx(jacobi(j, 3)); };
  CHECK(std::abs(tau_sum(3, leg3, 1) - cplx(0, std::sqrt(3.0))) < 1e-12);
  for (i64 l : {-3, 0, 1, 7}) CHECK(std::abs(tau_sum(1, leg3, l) - cplx(1)) < 1e-15);

  // primitive quartic character mod 5 with chi(2) = i
  auto chi5 = [](i64 j) -> cplx {
    const i64 r = ((j % 5) + 5) % 5;
    switch (r) {
      case 1: return 1;
      case 2: return cplx(0, 1);
      case 4: return -1;
      case 3: return cplx(0, -1);
      default: return 0;
    }
  };
  CHECK(std::abs(tau_sum(5, chi5, 2) - std::conj(chi5(2)) * tau_sum(5, chi5, 1)) < 1e-12);
}

TEST_CASE("g_modified examples", "[gauss]") {
  CHECK(std::abs(g_modified(3, 1) - cplx(std::sqrt(3.0))) < 1e-12);
  CHECK(std::abs(g_modified(15, 2) - g_modified(3, 2) * g_modified(5, 2)) < 1e-12);
  CHECK(std::abs(g_modified(15, 2) - g_oracle(15, 2)) < 1e-12);
  CHECK(std::abs(g_modified(1, 7) - cplx(1)) < 1e-15);
}

TEST_CASE("g_prime_power cases", "[gauss]") {
  CHECK(g_prime_power(5, 2, 5) == Catch::Approx(-5.0));
  CHECK(std::abs(g_oracle(25, 5) - cplx(-5)) < 1e-10);
  CHECK(g_prime_power(3, 1, 1) == Catch::Approx(std::sqrt(3.0)));
  CHECK(g_prime_power(7, 3, 7) == 0.0);
  CHECK(std::abs(g_oracle(343, 7)) < 1e-9);
  CHECK_THROWS_AS(g_prime_power(9, 1, 1), DomainError);
  CHECK_THROWS_AS(g_prime_power(3, 0, 1), DomainError);
}

TEST_CASE("g_prime_power matches the definitional sum", "[gauss][property]") {
  double worst = 0;
  for (u64 p = 3; p <= 400; p += 2) {
    if (!is_prime(p)) continue;
    u64 q = p;
    for (int k = 1; q <= 400; ++k, q *= p)
      for (i64 l = 1; l <= 400; ++l) worst = std::max(worst, std::abs(cplx(g_prime_power(p, k, l)) - g_oracle(q, l)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("g_modified is multiplicative on coprime odd moduli", "[gauss][property]") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<u64> odd(0, 60);
  std::uniform_int_distribution<i64> ell(1, 500);
  int tested = 0;
  while (tested < 500) {
    const u64 m = 2 * odd(rng) + 1, n = 2 * odd(rng) + 1;
    if (std::gcd(m, n) != 1) continue;
    const i64 l = ell(rng);
    REQUIRE(std::abs(g_modified(m * n, l) - g_modified(m, l) * g_modified(n, l)) < 1e-9);
    ++tested;
  }
}

TEST_CASE("primitive relation tau(chi, l) = chi(l) tau(chi, 1)", "[gauss][property]") {
  for (u64 n = 3; n <= 99; n += 2) {
    if (!is_squarefree(n)) continue;
    const cplx t1 = tau_jacobi(n, 1);
    for (i64 l = 1; l < static_cast<i64>(n); ++l)
      REQUIRE(std::abs(tau_jacobi(n, l) - double(jacobi(l, static_cast<i64>(n))) * t1) < 1e-9);
  }
}

TEST_CASE("Gauss sum magnitudes", "[gauss][property]") {
  for (u64 n = 1; n <= 199; n += 2)
    for (i64 l = 1; l <= 60; ++l) {
      const double a = std::abs(tau_jacobi(n, l));
      REQUIRE(a / std::sqrt(double(n)) <= std::sqrt(double(n)) + 1e-9);
      if (is_squarefree(n) && std::gcd(static_cast<u64>(l), n) == 1) REQUIRE(a == Catch::Approx(std::sqrt(double(n))));
    }
}

TEST_CASE("unit_root reduces its argument", "[gauss]") {
  const i64 n = 999983;
  CHECK(std::abs(unit_root(n * 123456 + 1, n) - unit_root(1, n)) < 1e-15);
  CHECK(std::abs(unit_root(-1, 4) - cplx(0, -1)) < 1e-15);
}
