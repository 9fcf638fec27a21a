#include "mds/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>

#include "mds/common.hpp"

namespace mds {

namespace {

using IVec = std::vector<BigInt>;

// ---------------------------------------------------------------------------
// Exact linear algebra over Q

int rank_of(std::vector<QVec> m) {
  if (m.empty()) return 0;
  const std::size_t cols = m[0].size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(m.size()); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (std::size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Reduced row echelon form, zero rows removed.
std::vector<QVec> rref(std::vector<QVec> m) {
  if (m.empty()) return m;
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    Rational inv = 1 / m[rank][c];
    for (std::size_t j = 0; j < cols; ++j) m[rank][j] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      Rational f = m[r][c];
      for (std::size_t j = 0; j < cols; ++j) m[r][j] -= f * m[rank][j];
    }
    ++rank;
  }
  m.resize(rank);
  return m;
}

// Basis of {y : m y = 0}.
std::vector<QVec> nullspace(const std::vector<QVec>& m, std::size_t cols) {
  std::vector<QVec> r = rref(m);
  std::vector<int> pivot_col;
  for (const auto& row : r) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    pivot_col.push_back(static_cast<int>(c));
  }
  std::vector<QVec> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(f)) != pivot_col.end()) continue;
    QVec y(cols, Rational(0));
    y[f] = 1;
    for (std::size_t i = 0; i < r.size(); ++i) y[pivot_col[i]] = -r[i][f];
    basis.push_back(std::move(y));
  }
  return basis;
}

BigInt lcm_den(const QVec& v) {
  BigInt l = 1;
  for (const auto& q : v) l = boost::multiprecision::lcm(l, BigInt(denominator(q)));
  return l;
}

IVec to_primitive_int(const QVec& v) {
  BigInt l = lcm_den(v);
  IVec out(v.size());
  BigInt g = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = BigInt(numerator(Rational(v[i] * l)));
    g = boost::multiprecision::gcd(g, out[i]);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

void make_primitive(IVec& v) {
  BigInt g = 0;
  for (const auto& x : v) g = boost::multiprecision::gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
}

QVec to_q(const IVec& v) {
  QVec q(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) q[i] = Rational(v[i]);
  return q;
}

BigInt dot(const IVec& a, const IVec& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

Rational dot(const QVec& a, const QVec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// ---------------------------------------------------------------------------
// Double description for a pointed cone {y : R y >= 0}

using Bits = std::vector<std::uint64_t>;

bool subset_of(const Bits& a, const Bits& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

int popcount(const Bits& a) {
  int c = 0;
  for (auto w : a) c += std::popcount(w);
  return c;
}

struct DdRay {
  IVec v;
  Bits zero;
};

// Extreme rays of {y : rows y >= 0}. The rows must have full column rank.
std::vector<IVec> extreme_rays(const std::vector<IVec>& rows, std::size_t d) {
  const std::size_t m = rows.size();
  const std::size_t words = (m + 63) / 64;

  // Pick d independent rows greedily.
  std::vector<std::size_t> basis_idx;
  std::vector<QVec> echelon;
  for (std::size_t i = 0; i < m && basis_idx.size() < d; ++i) {
    std::vector<QVec> trial = echelon;
    trial.push_back(to_q(rows[i]));
    if (rank_of(trial) > static_cast<int>(echelon.size())) {
      echelon = std::move(trial);
      basis_idx.push_back(i);
    }
  }
  if (basis_idx.size() < d) throw DegeneratePolyhedronError("double description: cone is not pointed");

  std::vector<std::size_t> order = basis_idx;
  for (std::size_t i = 0; i < m; ++i)
    if (std::find(basis_idx.begin(), basis_idx.end(), i) == basis_idx.end()) order.push_back(i);

  // Initial rays: columns of B^{-1}, obtained as rref of [B | I].
  std::vector<QVec> aug(d, QVec(2 * d, Rational(0)));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) aug[i][j] = Rational(rows[basis_idx[i]][j]);
    aug[i][d + i] = 1;
  }
  aug = rref(aug);
  std::vector<DdRay> rays;
  for (std::size_t c = 0; c < d; ++c) {
    QVec col(d);
    for (std::size_t i = 0; i < d; ++i) col[i] = aug[i][d + c];
    DdRay r{to_primitive_int(col), Bits(words, 0)};
    for (std::size_t i = 0; i < d; ++i)
      if (i != c) r.zero[i / 64] |= std::uint64_t(1) << (i % 64);
    rays.push_back(std::move(r));
  }

  for (std::size_t step = d; step < m; ++step) {
    const IVec& row = rows[order[step]];
    std::vector<std::size_t> pos, neg, zer;
    std::vector<BigInt> val(rays.size());
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(row, rays[i].v);
      if (val[i] > 0) {
        pos.push_back(i);
      } else if (val[i] < 0) {
        neg.push_back(i);
      } else {
        zer.push_back(i);
      }
    }
    std::vector<DdRay> next;
    const int need = static_cast<int>(d) - 2;
    for (std::size_t a : pos) {
      for (std::size_t b : neg) {
        Bits common(words);
        for (std::size_t w = 0; w < words; ++w) common[w] = rays[a].zero[w] & rays[b].zero[w];
        if (popcount(common) < need) continue;
        bool adjacent = true;
        for (std::size_t c = 0; c < rays.size() && adjacent; ++c)
          if (c != a && c != b && subset_of(common, rays[c].zero)) adjacent = false;
        if (!adjacent) continue;
        DdRay nr;
        nr.v.resize(d);
        BigInt pa = val[a], nb = -val[b];
        for (std::size_t j = 0; j < d; ++j) nr.v[j] = pa * rays[b].v[j] + nb * rays[a].v[j];
        make_primitive(nr.v);
        nr.zero = common;
        nr.zero[step / 64] |= std::uint64_t(1) << (step % 64);
        next.push_back(std::move(nr));
      }
    }
    for (std::size_t i : zer) rays[i].zero[step / 64] |= std::uint64_t(1) << (step % 64);
    for (std::size_t i : pos) next.push_back(std::move(rays[i]));
    for (std::size_t i : zer) next.push_back(std::move(rays[i]));
    rays = std::move(next);
  }
  std::vector<IVec> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.v));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical ordering

bool qvec_less(const QVec& a, const QVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

Rational l1(const QVec& a) {
  Rational s = 0;
  for (const auto& x : a) s += abs(x);
  return s;
}

bool row_less(const HRow& x, const HRow& y) {
  Rational nx = l1(x.a), ny = l1(y.a);
  if (nx != ny) return nx < ny;
  if (x.a != y.a) return qvec_less(y.a, x.a);  // lexicographically descending
  return x.b < y.b;
}

void sort_unique_rows(std::vector<HRow>& rows) {
  std::sort(rows.begin(), rows.end(), row_less);
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
}

void sort_unique(std::vector<QVec>& v) {
  std::sort(v.begin(), v.end(), qvec_less);
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void check_dims(int dim, const std::vector<QVec>& v, const char* what) {
  for (const auto& x : v)
    if (static_cast<int>(x.size()) != dim) throw DomainError(std::string(what) + ": dimension mismatch");
}

RationalPolyhedron ensure_v(const RationalPolyhedron& P) { return P.has_v ? P : h_to_v(P, true); }

}  // namespace

// ---------------------------------------------------------------------------

HRow normalize_row(const HRow& r) {
  BigInt l = lcm_den(r.a);
  BigInt g = 0;
  for (const auto& q : r.a) g = boost::multiprecision::gcd(g, BigInt(numerator(Rational(q * l))));
  if (g == 0) return r;
  Rational scale = Rational(l) / Rational(g);
  HRow out;
  out.a.reserve(r.a.size());
  for (const auto& q : r.a) out.a.push_back(q * scale);
  out.b = r.b * scale;
  return out;
}

QVec primitive_direction(const QVec& r) { return to_q(to_primitive_int(r)); }

RationalPolyhedron from_hrep(int dim, std::vector<HRow> rows) {
  if (dim < 1) throw DomainError("from_hrep: dimension must be positive");
  for (const auto& r : rows)
    if (static_cast<int>(r.a.size()) != dim) throw DomainError("from_hrep: row dimension mismatch");
  RationalPolyhedron P;
  P.dim = dim;
  P.has_h = true;
  P.rows = std::move(rows);
  return P;
}

RationalPolyhedron from_vrep(int dim, std::vector<QVec> vertices, std::vector<QVec> rays) {
  if (dim < 1) throw DomainError("from_vrep: dimension must be positive");
  check_dims(dim, vertices, "from_vrep");
  check_dims(dim, rays, "from_vrep");
  RationalPolyhedron P;
  P.dim = dim;
  P.has_v = true;
  P.vertices = std::move(vertices);
  P.rays = std::move(rays);
  return P;
}

RationalPolyhedron h_to_v(const RationalPolyhedron& P, bool allow_degenerate) {
  if (!P.has_h) throw DomainError("h_to_v: no H-representation");
  const std::size_t n = P.dim;
  std::vector<QVec> A;
  for (const auto& r : P.rows) A.push_back(r.a);
  if (rank_of(A) < static_cast<int>(n))
    throw DegeneratePolyhedronError("h_to_v: polyhedron contains a line (constraint matrix has rank < n)");

  // Homogenized cone {(x, x0) : a.x - b x0 >= 0, x0 >= 0}.
  std::vector<IVec> rows;
  for (const auto& r : P.rows) {
    QVec h = r.a;
    h.push_back(-r.b);
    rows.push_back(to_primitive_int(h));
  }
  IVec last(n + 1, BigInt(0));
  last[n] = 1;
  rows.push_back(last);

  RationalPolyhedron out = P;
  out.vertices.clear();
  out.rays.clear();
  for (const auto& y : extreme_rays(rows, n + 1)) {
    if (y[n] > 0) {
      QVec v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = Rational(y[i], y[n]);
      out.vertices.push_back(std::move(v));
    } else {
      QVec r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = Rational(y[i]);
      out.rays.push_back(std::move(r));
    }
  }
  if (out.vertices.empty()) throw EmptyPolyhedronError("h_to_v: polyhedron is empty");
  sort_unique(out.vertices);
  sort_unique(out.rays);
  if (!allow_degenerate) {
    std::vector<QVec> span = out.rays;
    for (std::size_t i = 1; i < out.vertices.size(); ++i) {
      QVec d(n);
      for (std::size_t j = 0; j < n; ++j) d[j] = out.vertices[i][j] - out.vertices[0][j];
      span.push_back(std::move(d));
    }
    if (rank_of(span) < static_cast<int>(n))
      throw DegeneratePolyhedronError("h_to_v: polyhedron is not full-dimensional");
  }
  out.has_v = true;
  out.canonical_v = true;
  std::string why;
  if (!verify_extremality(out, &why)) throw MdsError("h_to_v: extremality oracle rejected output: " + why);
  return out;
}

RationalPolyhedron v_to_h(const RationalPolyhedron& P) {
  if (!P.has_v) throw DomainError("v_to_h: no V-representation");
  if (P.vertices.empty()) throw DegeneratePolyhedronError("v_to_h: no vertices");
  const std::size_t n = P.dim;
  // Valid inequalities (a, c) with a.x + c >= 0 form the cone {G y >= 0}.
  std::vector<QVec> G;
  for (const auto& v : P.vertices) {
    QVec g = v;
    g.push_back(Rational(1));
    G.push_back(std::move(g));
  }
  for (const auto& r : P.rays) {
    QVec g = r;
    g.push_back(Rational(0));
    G.push_back(std::move(g));
  }
  std::vector<QVec> lin = rref(nullspace(G, n + 1));

  std::vector<IVec> rows;
  for (const auto& g : G) rows.push_back(to_primitive_int(g));
  for (const auto& l : lin) {
    IVec p = to_primitive_int(l);
    IVec m = p;
    for (auto& x : m) x = -x;
    rows.push_back(std::move(p));
    rows.push_back(std::move(m));
  }

  RationalPolyhedron out = P;
  out.rows.clear();
  for (const auto& y : extreme_rays(rows, n + 1)) {
    bool trivial = true;
    for (std::size_t i = 0; i < n; ++i)
      if (y[i] != 0) trivial = false;
    if (trivial) continue;
    HRow r;
    for (std::size_t i = 0; i < n; ++i) r.a.push_back(Rational(y[i]));
    r.b = -Rational(y[n]);
    out.rows.push_back(normalize_row(r));
  }
  for (const auto& l : lin) {
    HRow r;
    r.a.assign(l.begin(), l.begin() + n);
    r.b = -l[n];
    r = normalize_row(r);
    HRow neg = r;
    for (auto& x : neg.a) x = -x;
    neg.b = -neg.b;
    out.rows.push_back(r);
    out.rows.push_back(neg);
  }
  sort_unique_rows(out.rows);
  out.has_h = true;
  out.canonical_h = true;
  return out;
}

RationalPolyhedron canonicalize(const RationalPolyhedron& P) {
  RationalPolyhedron V = P.has_v ? P : h_to_v(P, true);
  if (!V.canonical_v) {
    // Hull of the given generators: facets first, then the extremal subset.
    RationalPolyhedron H = v_to_h(V);
    H.has_v = false;
    V = h_to_v(H, true);
  }
  RationalPolyhedron out = V.canonical_h ? V : v_to_h(V);
  out.canonical_v = true;
  return out;
}

bool same_polyhedron(const RationalPolyhedron& P, const RationalPolyhedron& Q) {
  if (P.dim != Q.dim) return false;
  RationalPolyhedron a = canonicalize(P), b = canonicalize(Q);
  return a.rows == b.rows && a.vertices == b.vertices && a.rays == b.rays;
}

bool verify_extremality(const RationalPolyhedron& P, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  const int n = P.dim;
  for (std::size_t i = 0; i < P.vertices.size(); ++i) {
    std::vector<QVec> tight;
    for (const auto& r : P.rows) {
      Rational s = dot(r.a, P.vertices[i]);
      if (s < r.b) return fail("vertex " + std::to_string(i) + " violates a row");
      if (s == r.b) tight.push_back(r.a);
    }
    if (rank_of(tight) != n) return fail("vertex " + std::to_string(i) + " has tight rank < n");
  }
  for (std::size_t i = 0; i < P.rays.size(); ++i) {
    std::vector<QVec> tight;
    for (const auto& r : P.rows) {
      Rational s = dot(r.a, P.rays[i]);
      if (s < 0) return fail("ray " + std::to_string(i) + " leaves the polyhedron");
      if (s == 0) tight.push_back(r.a);
    }
    if (rank_of(tight) != n - 1) return fail("ray " + std::to_string(i) + " has tight rank != n-1");
  }
  return true;
}

// ---------------------------------------------------------------------------

QVec AffineInvolution::apply(const QVec& x) const {
  QVec y = x;
  for (int j : J) {
    y[j] = 1 - x[j];
    y[k] += x[j] - Rational(1, 2);
  }
  return y;
}

QVec AffineInvolution::apply_linear(const QVec& r) const {
  QVec y = r;
  for (int j : J) {
    y[j] = -r[j];
    y[k] += r[j];
  }
  return y;
}

RationalPolyhedron apply_sigma(const RationalPolyhedron& P, const std::vector<int>& J) {
  const int k = P.dim - 1;
  for (int j : J)
    if (j < 0 || j >= k) throw DomainError("apply_sigma: index out of range");
  RationalPolyhedron V = ensure_v(P);
  AffineInvolution s{k, J};
  RationalPolyhedron out;
  out.dim = P.dim;
  out.has_v = true;
  for (const auto& v : V.vertices) out.vertices.push_back(s.apply(v));
  for (const auto& r : V.rays) out.rays.push_back(primitive_direction(s.apply_linear(r)));
  sort_unique(out.vertices);
  sort_unique(out.rays);
  out.canonical_v = V.canonical_v;  // an affine bijection maps extremal sets onto extremal sets
  return out;
}

RationalPolyhedron hull_union(const std::vector<RationalPolyhedron>& Ps) {
  if (Ps.empty()) throw DomainError("hull_union: no polyhedra");
  RationalPolyhedron U;
  U.dim = Ps[0].dim;
  U.has_v = true;
  for (const auto& P : Ps) {
    if (P.dim != U.dim) throw DomainError("hull_union: dimension mismatch");
    RationalPolyhedron V = ensure_v(P);
    U.vertices.insert(U.vertices.end(), V.vertices.begin(), V.vertices.end());
    for (const auto& r : V.rays) U.rays.push_back(primitive_direction(r));
  }
  sort_unique(U.vertices);
  sort_unique(U.rays);
  return canonicalize(U);
}

// ---------------------------------------------------------------------------

RationalPolyhedron region_R(int k) {
  if (k < 1 || k > 6) throw DomainError("region_R: k must be in 1..6");
  const int n = k + 1;
  std::vector<HRow> rows;
  auto unit = [&](int i, Rational c) {
    QVec a(n, Rational(0));
    a[i] = c;
    return a;
  };
  for (int j = 0; j <= k; ++j) rows.push_back({unit(j, 1), Rational(1, 2)});
  for (int j = 0; j < k; ++j) {
    QVec a = unit(j, 2);
    a[k] = 1;
    rows.push_back({a, Rational(2)});
  }
  return h_to_v(from_hrep(n, rows));
}

RationalPolyhedron region_S(int k) {
  RationalPolyhedron R = region_R(k);
  std::vector<RationalPolyhedron> images;
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> J;
    for (int j = 0; j < k; ++j)
      if (mask >> j & 1u) J.push_back(j);
    images.push_back(apply_sigma(R, J));
  }
  return hull_union(images);
}

RationalPolyhedron theorem_region_hrep(int k, bool perturb) {
  if (k < 1 || k > 6) throw DomainError("theorem_region_hrep: k must be in 1..6");
  const int n = k + 1;
  std::vector<HRow> rows;
  bool perturbed = false;
  // Type 0: sum_L x + z >= (1 + l)/2.
  for (unsigned L = 0; L < (1u << k); ++L) {
    QVec a(n, Rational(0));
    for (int j = 0; j < k; ++j)
      if (L >> j & 1u) a[j] = 1;
    a[k] = 1;
    rows.push_back({a, Rational(1 + std::popcount(L), 2)});
  }
  // Type t in 1..4: sum_I x + 2 sum_L x + 2 z >= (4 + 3t)/4 + l, I and L disjoint.
  for (unsigned I = 1; I < (1u << k); ++I) {
    const int t = std::popcount(I);
    if (t > 4) continue;
    for (unsigned L = 0; L < (1u << k); ++L) {
      if (L & I) continue;
      const int l = std::popcount(L);
      QVec a(n, Rational(0));
      for (int j = 0; j < k; ++j) {
        if (I >> j & 1u) a[j] = 1;
        if (L >> j & 1u) a[j] = 2;
      }
      a[k] = 2;
      Rational b = Rational(4 + 3 * t, 4) + l;
      if (perturb && !perturbed && t == 1 && l == 0) {
        b = Rational(3, 2);
        perturbed = true;
      }
      rows.push_back({a, b});
    }
  }
  return from_hrep(n, rows);
}

namespace {

std::string vec_text(const QVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += format_rational(v[i]);
  }
  return s + ")";
}

std::string row_text(const HRow& r) { return vec_text(r.a) + " . x >= " + format_rational(r.b); }

template <class T, class Less, class Fmt>
void diff_sets(std::vector<T> a, std::vector<T> b, Less less, Fmt fmt, const std::string& what,
               const std::string& left, const std::string& right, std::vector<std::string>& report) {
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  std::vector<T> only_a, only_b;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(only_a), less);
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(only_b), less);
  for (const auto& x : only_a) report.push_back(what + " only in " + left + ": " + fmt(x));
  for (const auto& x : only_b) report.push_back(what + " only in " + right + ": " + fmt(x));
}

}  // namespace

RegionCheck verify_region_theorem(int k, bool perturb) {
  RegionCheck out;
  RationalPolyhedron S = region_S(k);
  RationalPolyhedron T = canonicalize(theorem_region_hrep(k, perturb));
  diff_sets(S.rows, T.rows, row_less, row_text, "facet", "hull", "half-space family", out.report);
  diff_sets(S.vertices, T.vertices, qvec_less, vec_text, "vertex", "hull", "half-space family", out.report);
  diff_sets(S.rays, T.rays, qvec_less, vec_text, "ray", "hull", "half-space family", out.report);

  // Extremal points: sigma_J(P) for all J, and Q from k = 5 on.
  std::vector<QVec> expected;
  QVec Pt(k + 1, Rational(3, 4));
  Pt[k] = Rational(1, 2);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    AffineInvolution s{k, {}};
    for (int j = 0; j < k; ++j)
      if (mask >> j & 1u) s.J.push_back(j);
    expected.push_back(s.apply(Pt));
  }
  if (k >= 5) {
    QVec Q(k + 1, Rational(1, 2));
    Q[k] = 1;
    expected.push_back(Q);
  }
  sort_unique(expected);
  diff_sets(S.vertices, expected, qvec_less, vec_text, "vertex", "hull", "expected vertex set", out.report);
  out.ok = out.report.empty();
  out.report.insert(out.report.begin(), "k=" + std::to_string(k) + ": " + std::to_string(S.rows.size()) +
                                            " facets, " + std::to_string(S.vertices.size()) + " vertices, " +
                                            std::to_string(S.rays.size()) + " rays");
  return out;
}

RegionCheck verify_rays(int k, bool drop_w1) {
  RegionCheck out;
  RationalPolyhedron S = region_S(k);
  const int n = k + 1;
  std::vector<QVec> expected;
  QVec vz(n, Rational(0));
  vz[k] = 1;
  for (int j = 0; j < k; ++j) {
    QVec v(n, Rational(0));
    v[j] = 1;
    expected.push_back(v);
    if (drop_w1 && j == 0) continue;
    QVec w = vz;
    w[j] = -1;
    expected.push_back(w);
  }
  sort_unique(expected);
  diff_sets(S.rays, expected, qvec_less, vec_text, "ray", "hull", "expected ray set", out.report);
  // v_{k+1} lies in the recession cone but is not extremal.
  if (std::find(S.rays.begin(), S.rays.end(), vz) != S.rays.end())
    out.report.push_back("v_{k+1} reported as an extremal ray");
  bool in_cone = true;
  for (const auto& r : S.rows)
    if (dot(r.a, vz) < 0) in_cone = false;
  if (!in_cone) out.report.push_back("v_{k+1} is not in the recession cone");
  out.ok = out.report.empty();
  return out;
}

// ---------------------------------------------------------------------------

std::string format_rational(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

Rational parse_rational(const std::string& s) {
  try {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(BigInt(s));
    BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
    if (den == 0) throw DomainError("parse_rational: zero denominator in '" + s + "'");
    return Rational(num, den);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("parse_rational: malformed literal '" + s + "'");
  }
}

std::string to_text(const RationalPolyhedron& P) {
  std::ostringstream os;
  if (P.has_h) {
    os << "H " << P.rows.size() << ' ' << P.dim << '\n';
    for (const auto& r : P.rows) {
      for (const auto& x : r.a) os << format_rational(x) << ' ';
      os << format_rational(r.b) << '\n';
    }
  }
  if (P.has_v) {
    os << "V " << P.vertices.size() << ' ' << P.rays.size() << ' ' << P.dim << '\n';
    auto line = [&](const QVec& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << format_rational(v[i]);
      os << '\n';
    };
    for (const auto& v : P.vertices) line(v);
    for (const auto& r : P.rays) line(r);
  }
  return os.str();
}

RationalPolyhedron from_text(const std::string& text) {
  std::istringstream is(text);
  RationalPolyhedron P;
  std::string tag;
  auto read_q = [&]() {
    std::string tok;
    if (!(is >> tok)) throw DomainError("from_text: unexpected end of input");
    return parse_rational(tok);
  };
  auto set_dim = [&](int d) {
    if (d < 1) throw DomainError("from_text: bad dimension");
    if (P.dim != 0 && P.dim != d) throw DomainError("from_text: inconsistent dimensions");
    P.dim = d;
  };
  while (is >> tag) {
    if (tag == "H") {
      long rows = -1;
      int d = 0;
      if (!(is >> rows >> d) || rows < 0) throw DomainError("from_text: bad H header");
      set_dim(d);
      for (long i = 0; i < rows; ++i) {
        HRow r;
        for (int j = 0; j < d; ++j) r.a.push_back(read_q());
        r.b = read_q();
        P.rows.push_back(std::move(r));
      }
      P.has_h = true;
    } else if (tag == "V") {
      long nv = -1, nr = -1;
      int d = 0;
      if (!(is >> nv >> nr >> d) || nv < 0 || nr < 0) throw DomainError("from_text: bad V header");
      set_dim(d);
      auto read_vec = [&]() {
        QVec v;
        for (int j = 0; j < d; ++j) v.push_back(read_q());
        return v;
      };
      for (long i = 0; i < nv; ++i) P.vertices.push_back(read_vec());
      for (long i = 0; i < nr; ++i) P.rays.push_back(read_vec());
      P.has_v = true;
    } else {
      throw DomainError("from_text: unknown section '" + tag + "'");
    }
  }
  if (!P.has_h && !P.has_v) throw DomainError("from_text: empty input");
  return P;
}

}  // namespace mds
