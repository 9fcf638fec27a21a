// Recipe ingredients: gamma factors, the arithmetic factor T(S), test
// functions and swap terms.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mds/common.hpp"
#include "mds/numerics.hpp"

namespace mds {

/// X(s) = (pi/8)^{s-1/2} Gamma((1-s)/2) / Gamma(s/2).
cplx gamma_X(cplx s);

/// X_+(s) (even) or X_-(s) (odd).
cplx gamma_X_pm(cplx s, bool even);

/// Smooth compactly supported weight on (u0, u1).
struct TestFunction {
  std::string id;
  double u0 = 0.75;
  double u1 = 1.25;
  std::function<double(double)> eval;
};

/// Known ids: "bump" (default, support (3/4, 5/4)) and "wide" (support
/// (1/2, 3/2)). Throws DomainError for anything else.
TestFunction test_function(const std::string& id);

/// Mellin transform int f(u) u^{s-1} du by adaptive quadrature.
cplx mellin(const TestFunction& f, cplx s, double* err = nullptr);

struct TValue {
  cplx value;
  double error_bound;
};

/// Definitional diagonal sum, truncated at n_1...n_k <= cutoff, with a
/// Rankin-type tail bound. Requires Re s_j > 1/2.
TValue t_diagonal(const std::vector<cplx>& S, u64 cutoff);

/// Diagonal local factors taken one prime at a time (no zeta extraction),
/// with the prime tail summed through prime zeta values. Re s_j > 1/2.
TValue t_diagonal_euler(const std::vector<cplx>& S, u64 prime_cutoff = 0);

/// Zeta factorization times the Euler product E(S). Re s_j > 1/4.
TValue t_factored(const std::vector<cplx>& S, u64 prime_cutoff = 0);

/// Local factor E_p(S) at an odd prime (closed form).
cplx e_local_factor(const std::vector<cplx>& S, u64 p);

/// sum_{p > P} p^{-alpha} for Re alpha > 1.
cplx prime_tail(cplx alpha, u64 P);

struct RecipeTerm {
  std::vector<int> J;    // 0-based indices swapped
  cplx exponent;         // 1 + |J|/2 - sum_J s_j
  cplx gamma_product;    // prod_J X(s_j)
  std::vector<cplx> swapped_point;
  cplx t_value;
  cplx mellin_value;     // f~(exponent)
  cplx value;            // X^exponent f~ gamma T; NaN when T is out of range
  std::string note;      // why value is missing
};

struct SwapTermSet {
  std::vector<cplx> S;
  double X;
  std::vector<RecipeTerm> terms;
  /// Throws ConvergenceError if any record lacks a value.
  cplx total() const;
};

/// One record per J with |J| <= max_swap, ordered by |J| then lexicographically.
SwapTermSet swap_terms(const std::vector<cplx>& S, int max_swap, double X, const TestFunction& f);

/// "{1,3}" style label with 1-based indices.
std::string subset_label(const std::vector<int>& J);

/// Subsets of {0..k-1} with size <= max_size in the canonical order above.
std::vector<std::vector<int>> swap_subsets(int k, int max_size);

}  // namespace mds
