#include <catch_amalgamated.hpp>

#include <cmath>

#include "mds/arith.hpp"
#include "mds/lfun.hpp"
#include "mds/moments.hpp"

using namespace mds;

namespace {

// L(2, chi_8d) from the generalized Bernoulli number of the even primitive
// character mod q = 8d: L(2) = (sqrt q / 2) (2 pi / q)^2 B_{2,chi} / 2.
double l2_bernoulli(u64 d) {
  const u64 q = 8 * d;
  long double b2 = 0;
  for (u64 a = 1; a <= q; ++a) {
    const int c = kronecker(static_cast<i64>(q), static_cast<i64>(a));
    if (c == 0) continue;
    const long double x = static_cast<long double>(a) / q;
    b2 += c * (x * x - x + 1.0L / 6.0L);
  }
  b2 *= q;
  return static_cast<double>(std::sqrt(static_cast<long double>(q)) / 2 *
                             std::pow(2 * static_cast<long double>(kPi) / q, 2) * b2 / 2);
}

}  // namespace

TEST_CASE("family count (k = 0)", "[moments]") {
  const TestFunction f = test_function("bump");
  const double X = 1e5;
  const cplx e = empirical_moment({}, X, f);
  const cplx main = 4.0 / (kPi * kPi) * X * mellin(f, 1.0);
  CHECK(std::abs(e - main) < 5 * std::sqrt(X));
  CHECK(std::abs(predicted_moment({}, X, f, 0) - main) < 1e-9 * std::abs(main));
}

TEST_CASE("first moment at s = 2 against Bernoulli values", "[moments]") {
  const TestFunction f = test_function("bump");
  const double X = 1e4;
  const auto fam = sieve_family(static_cast<u64>(f.u1 * X) + 1);
  long double ref = 0;
  for (u64 d : fam.members(static_cast<u64>(f.u0 * X), static_cast<u64>(f.u1 * X) + 1))
    ref += f.eval(d / X) * l2_bernoulli(d);
  const cplx e = empirical_moment({2.0}, X, f);
  CHECK(std::abs(e - cplx(static_cast<double>(ref))) < 1e-8 * std::abs(e));
}

TEST_CASE("family plan respects the support of f", "[moments]") {
  FamilyRun run;
  run.points = {0.6};
  run.products = {{0}};
  run.scales = {1e3};
  run.f = test_function("bump");
  const FamilyPlan p = plan_family_run(run);
  CHECK(p.d_lo >= 750);
  CHECK(p.d_hi <= 1250);
  CHECK(p.family_size == sieve_family(1250).members(751, 1249).size());
}

TEST_CASE("family sums are identical for every worker count", "[moments][property]") {
  const TestFunction f = test_function("bump");
  const cplx one = empirical_moment({0.6, cplx(0.7, 2)}, 3e4, f, 1);
  for (int w : {2, 3, 8}) {
    const cplx many = empirical_moment({0.6, cplx(0.7, 2)}, 3e4, f, w);
    REQUIRE(one.real() == many.real());
    REQUIRE(one.imag() == many.imag());
  }
}

TEST_CASE("predictions", "[moments]") {
  const TestFunction f = test_function("bump");
  const double X = 1e5;
  const cplx expect = X * mellin(f, 1.0) * t_factored({0.6}).value +
                      std::pow(X, 0.9) * mellin(f, 0.9) * gamma_X(0.6) * t_factored({0.4}).value;
  CHECK(std::abs(predicted_moment({0.6}, X, f, 1) - expect) < 1e-9 * std::abs(expect));
  CHECK(std::abs(predicted_moment({0.6}, X, f, 0) - X * mellin(f, 1.0) * t_factored({0.6}).value) < 1e-6);
  CHECK(target_exponent({0.6}) == Catch::Approx(0.575));
  CHECK(target_exponent({}) == Catch::Approx(0.5));
}

TEST_CASE("residual study input validation", "[moments]") {
  MomentRequest r;
  r.S = {0.6};
  r.scales = {1e4, 3e4, 1e5};
  CHECK_THROWS_AS(residual_study(r), DomainError);
  r.scales = {1e4, 2e4, 3e4, 4e4};
  CHECK_THROWS_AS(residual_study(r), DomainError);  // spans less than 1.5 decades
}

TEST_CASE("family count residual grows no faster than sqrt X", "[moments]") {
  MomentRequest r;
  r.scales = {1e4, 3e4, 1e5, 3e5, 1e6};
  const ExperimentReport rep = residual_study(r);
  CHECK(rep.target == Catch::Approx(0.5));
  // smooth weights make the true error much smaller than X^{1/2}
  CHECK(rep.fit.slope < rep.band_hi);
  CHECK(rep.rows.back().residual_abs < std::sqrt(1e6));
}

TEST_CASE("polynomial moment with N = 1", "[moments]") {
  const TestFunction f = test_function("bump"), W = test_function("bump");
  const double X = 2e3;
  std::string method;
  const cplx e = polynomial_moment_empirical({0.6}, X, 1.0, f, W, 1, true, &method);
  const auto fam = sieve_family(static_cast<u64>(f.u1 * X) + 1);
  double ref = 0;
  for (u64 d : fam.members(1, static_cast<u64>(f.u1 * X) + 1)) ref += f.eval(d / X) * W.eval(1.0);
  CHECK(method == "direct");
  CHECK(std::abs(e - cplx(ref)) < 1e-10 * ref);
}

TEST_CASE("identities in the region of absolute convergence", "[moments]") {
  SECTION("A_(c) two expressions") {
    CHECK(identity_check_a_c({2.5}, 2.5, 1, 20000).pass);
    CHECK(identity_check_a_c({2.5, cplx(3, 1)}, 3.0, 7, 20000).pass);
    // closer to the boundary only the truncation bound holds
    for (const IdentityResult& r : {identity_check_a_c({2.0}, 2.0, 1, 20000), identity_check_a_c({1.5}, 1.5, 3, 200000)})
      CHECK(r.residual <= r.tail_bound);
  }
  SECTION("Moebius assembly") {
    CHECK(mobius_assembly_check({2.5}, 2.5, 20000, 99).pass);
    const IdentityResult r = mobius_assembly_check({2.0}, 2.0, 20000, 99);
    CHECK(r.residual <= r.tail_bound);
  }
  SECTION("interchange") { CHECK(interchange_check({2.5}, 2.5, 20000, 20000).pass); }
  SECTION("L_D closed form") { CHECK(l_d_check(2.0, 15, 200000).pass); }
  SECTION("Euler product for D") {
    CHECK(d_euler_check({0.0}, 2.0, 0, 1, 1).residual < 1e-6);
    CHECK(d_euler_check({0.0, 0.5}, 2.0, 0, 5, 3).residual < 1e-5);
  }
  SECTION("psi8 characters") {
    for (i64 m = 1; m < 64; m += 2) {
      CHECK(psi8(0, m) == 1);
      CHECK(psi8(1, m) == jacobi(-1, m));
      CHECK(psi8(2, m) == jacobi(2, m));
      CHECK(psi8(3, m) == jacobi(-2, m));
    }
  }
}

TEST_CASE("residue at w = 1 reproduces T(S)", "[moments]") {
  const ResidueResult r = residue_check({2.0}, 10000);
  CHECK(r.rel_error < 0.02);
  CHECK(std::abs(r.target - t_factored({2.0}).value) < 1e-12);
}
