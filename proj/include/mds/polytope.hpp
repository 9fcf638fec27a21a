// Exact rational polyhedra: H/V conversion by double description, the
// involutions sigma_J, convex hulls of unions and the continuation region.
#pragma once

#include <string>
#include <vector>

#include "mds/arith.hpp"

namespace mds {

using QVec = std::vector<Rational>;

/// a . x >= b
struct HRow {
  QVec a;
  Rational b;
  bool operator==(const HRow& o) const { return a == o.a && b == o.b; }
};

struct RationalPolyhedron {
  int dim = 0;
  bool has_h = false, has_v = false;
  bool canonical_h = false, canonical_v = false;
  std::vector<HRow> rows;
  std::vector<QVec> vertices, rays;
};

RationalPolyhedron from_hrep(int dim, std::vector<HRow> rows);
RationalPolyhedron from_vrep(int dim, std::vector<QVec> vertices, std::vector<QVec> rays);

/// Extremal points and rays of {x : A x >= b}, canonical. Throws
/// EmptyPolyhedronError, or DegeneratePolyhedronError when the polyhedron
/// has a lineality space or (unless allowed) is not full-dimensional.
RationalPolyhedron h_to_v(const RationalPolyhedron& P, bool allow_degenerate = false);

/// Irredundant canonical inequalities; an affine hull of lower dimension shows
/// up as pairs a.x >= b, -a.x >= -b. DegeneratePolyhedronError without vertices.
RationalPolyhedron v_to_h(const RationalPolyhedron& P);

/// Both representations in canonical form.
RationalPolyhedron canonicalize(const RationalPolyhedron& P);

/// Canonical equality (both sides canonicalized as needed).
bool same_polyhedron(const RationalPolyhedron& P, const RationalPolyhedron& Q);

/// Rank test on the tight subsystems: every vertex has tight rank n, every ray
/// tight rank n-1 in the homogeneous system, and all generators are feasible.
bool verify_extremality(const RationalPolyhedron& P, std::string* why = nullptr);

/// Row with integer primitive a (b rational scaled alongside).
HRow normalize_row(const HRow& r);
/// Integer vector with gcd 1 in the same direction.
QVec primitive_direction(const QVec& r);

/// sigma_J on (x_1..x_k, z): x_j -> 1 - x_j (j in J), z -> z + sum_J x_j - |J|/2.
struct AffineInvolution {
  int k = 0;
  std::vector<int> J;  // 0-based
  QVec apply(const QVec& x) const;
  QVec apply_linear(const QVec& r) const;
};

RationalPolyhedron apply_sigma(const RationalPolyhedron& P, const std::vector<int>& J);
RationalPolyhedron hull_union(const std::vector<RationalPolyhedron>& Ps);

/// Closure of the base region {x_j >= 1/2, z >= 1/2, 2 x_j + z >= 2}.
RationalPolyhedron region_R(int k);
/// Convex hull of the 2^k images sigma_J(R), k <= 6.
RationalPolyhedron region_S(int k);
/// The type-t level-l half-spaces as generated (not canonical). `perturb`
/// replaces the constant 7/4 of the first type-1 level-0 row by 3/2.
RationalPolyhedron theorem_region_hrep(int k, bool perturb = false);

struct RegionCheck {
  bool ok = false;
  std::vector<std::string> report;
};

/// Canonical equality of region_S(k) with the half-space family, plus the
/// vertex set {sigma_J(P)} (and Q = (1/2..1/2, 1) for k >= 5).
RegionCheck verify_region_theorem(int k, bool perturb = false);

/// Ray set equals {v_j} u {w_j = v_{k+1} - v_j}; v_{k+1} lies in the cone but
/// is not extremal. drop_w1 removes w_1 from the expectation (negative control).
RegionCheck verify_rays(int k, bool drop_w1 = false);

std::string format_rational(const Rational& q);
Rational parse_rational(const std::string& s);

/// `H n_rows dim` + rows `a1 .. an b`, then `V n_vert n_rays dim` + generators.
std::string to_text(const RationalPolyhedron& P);
RationalPolyhedron from_text(const std::string& text);

}  // namespace mds
