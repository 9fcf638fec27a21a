// Family moments, recipe predictions, residual-decay studies and the
// identity checks for the multiple Dirichlet series A(s_1..s_k, w).
#pragma once

#include <string>
#include <vector>

#include "mds/common.hpp"
#include "mds/numerics.hpp"
#include "mds/recipe.hpp"

namespace mds {

/// One family sweep: for every scale X and every product (a list of indices
/// into `points`), the sum over odd square-free d of f(d/X) prod L(s_i, chi_8d).
/// An empty product counts the family with weight f.
struct FamilyRun {
  std::vector<cplx> points;
  std::vector<std::vector<int>> products;
  std::vector<double> scales;
  TestFunction f;
  int workers = 1;
  u64 block_size = 2048;
};

struct FamilyPlan {
  u64 d_lo = 0, d_hi = 0;
  u64 block_size = 0, blocks = 0;
  u64 family_size = 0;     // number of d carrying nonzero weight
  u64 max_afe_length = 0;  // terms per L-value at the top conductor
};

FamilyPlan plan_family_run(const FamilyRun& run);

/// result[x][p]. Bit-identical for every worker count: blocks of d are summed
/// independently and merged in block order. Uses MDS_CACHE_DIR for L-values
/// when set.
std::vector<std::vector<cplx>> family_sums(const FamilyRun& run);

cplx empirical_moment(const std::vector<cplx>& S, double X, const TestFunction& f, int workers = 1);

/// Sum of the swap terms with |J| <= max_swap.
cplx predicted_moment(const std::vector<cplx>& S, double X, const TestFunction& f, int max_swap);

/// e_k = (4 + 3k)/8 - sum Re(s_j)/2
double target_exponent(const std::vector<cplx>& S);

struct MomentRequest {
  std::vector<cplx> S;
  std::vector<double> scales;
  std::string f_id = "bump";
  int max_swap = -1;  // -1: all of them
  int workers = 1;
};

struct ExperimentRow {
  double X = 0;
  cplx empirical, predicted;
  double residual_abs = 0;
};

struct ExperimentReport {
  MomentRequest request;
  std::vector<ExperimentRow> rows;
  LinearFit fit{};
  double target = 0;
  double band_lo = 0, band_hi = 0;
  double smallest_main_exponent = 0;
  bool pass = false;
};

/// Several studies sharing one family sweep (the union of points and scales).
std::vector<ExperimentReport> residual_studies(const std::vector<MomentRequest>& reqs);
ExperimentReport residual_study(const MomentRequest& req);

// ---------------------------------------------------------------------------
// Long Dirichlet polynomials averaged over the family

struct PolyMomentResult {
  double X = 0, N = 0;
  cplx empirical;
  cplx diagonal;  // J = {} term, exact finite sum over squares
  cplx one_swap;  // |J| = 1 terms, contour at Re u = a
  double residual_abs = 0;       // |empirical - diagonal - one_swap|
  double residual_diag_abs = 0;  // |empirical - diagonal|
  std::string method;            // "direct" or "poisson"
  double contour_height = 0;
};

/// sum* f(d/X) sum_n chi_8d(n_1..n_k) prod n_j^{-s_j} W(n_1..n_k / N).
PolyMomentResult dirichlet_polynomial_moment(const std::vector<cplx>& S, double X, double N,
                                             const TestFunction& f, const TestFunction& W, int workers = 1,
                                             bool force_direct = false);

/// Diagonal term X f~(1) (2/(3 zeta(2))) sum_{m odd} a(m) f_S(m^2) W(m^2/N).
cplx polynomial_moment_diagonal(const std::vector<cplx>& S, double X, double N, const TestFunction& f,
                                const TestFunction& W);

/// Sum of the |J| = 1 contour integrals at Re u = 1/10.
cplx polynomial_moment_one_swap(const std::vector<cplx>& S, double X, double N, const TestFunction& f,
                                const TestFunction& W, double* contour_height = nullptr);

/// The empirical side alone.
cplx polynomial_moment_empirical(const std::vector<cplx>& S, double X, double N, const TestFunction& f,
                                 const TestFunction& W, int workers, bool force_direct, std::string* method);

// ---------------------------------------------------------------------------
// Identities in regions of absolute convergence

/// Characters modulo 8 on odd integers: 0 principal, 1 (-4/.), 2 (8/.), 3 (-8/.).
int psi8(int index, i64 m);

struct IdentityResult {
  std::string name;
  cplx lhs, rhs;
  double residual = 0;
  double tail_bound = 0;
  double tolerance = 0;
  bool pass = false;
};

/// A(S, w) = sum* prod L(s_j, chi_8d) d^{-w} truncated at d <= D.
TailResult a_direct(const std::vector<cplx>& S, cplx w, u64 D);

/// L(s, chi_{8 c^2 d}) for odd c, d >= 1 (imprimitive in general).
cplx l_chi8c2d(cplx s, u64 c, u64 d);

/// A_(c) from its d-sum (first expression), d <= D.
TailResult a_c_first(const std::vector<cplx>& S, cplx w, u64 c, u64 D);

/// A_(c) from its n-sum with L(w, (./n) psi_1) (second expression), n <= n_max.
TailResult a_c_second(const std::vector<cplx>& S, cplx w, u64 c, u64 n_max);

/// First vs second expression of A_(c).
IdentityResult identity_check_a_c(const std::vector<cplx>& S, cplx w, u64 c, u64 cutoff);

/// A vs sum_c mu(c) psi_1(c) c^{-2w} A_(c), with c <= c_max.
IdentityResult mobius_assembly_check(const std::vector<cplx>& S, cplx w, u64 D, u64 c_max);

/// A vs sum_n f_S(n) L_D(w, n) (sum over the family first).
IdentityResult interchange_check(const std::vector<cplx>& S, cplx w, u64 D, u64 n_max);

/// Closed form of L_D(w, n) vs its truncated defining sum.
IdentityResult l_d_check(cplx w, u64 n, u64 D);

/// D_t(s; psi, n, c) as a direct m-sum.
TailResult d_direct(const std::vector<cplx>& t, cplx s, int psi, u64 n, u64 c, u64 m_max);

/// D_t(s; psi, n, c) assembled as L-quotients times the Euler product Z_{c,n}.
cplx d_euler(const std::vector<cplx>& t, cplx s, int psi, u64 n, u64 c, u64 prime_cutoff = 0);

IdentityResult d_euler_check(const std::vector<cplx>& t, cplx s, int psi, u64 n, u64 c, u64 m_max = 2000000);

struct ResidueResult {
  std::vector<double> w;
  std::vector<cplx> scaled;  // (w - 1) A(S, w)
  cplx extrapolated;
  cplx target;  // T(S)
  double rel_error = 0;
};

/// (w - 1) A(S, w) at w = 1 + 1/10, 1 + 1/20, 1 + 1/40 through the
/// interchanged sum, then quadratic Richardson extrapolation to w = 1.
ResidueResult residue_check(const std::vector<cplx>& S, u64 n_max);

}  // namespace mds
