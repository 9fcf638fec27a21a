// Shared types, error hierarchy and the central tolerance record.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mds {

using cplx = std::complex<double>;
using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Base class of every error raised by the library.
class MdsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public MdsError {
 public:
  using MdsError::MdsError;
};

/// Evaluation requested at (or numerically on top of) a pole.
class PoleError : public MdsError {
 public:
  using MdsError::MdsError;
};

/// A series or quadrature was asked for outside its rigorous regime.
class ConvergenceError : public MdsError {
 public:
  using MdsError::MdsError;
};

/// A request would exceed a configured memory/size bound.
class ResourceLimitError : public MdsError {
 public:
  using MdsError::MdsError;
};

/// Polyhedral computations: empty input or non-full-dimensional input.
class EmptyPolyhedronError : public MdsError {
 public:
  using MdsError::MdsError;
};
class DegeneratePolyhedronError : public MdsError {
 public:
  using MdsError::MdsError;
};

/// All numeric tolerances and truncation knobs in one place. Defaults are the
/// values used by the acceptance suite; the CLI can override any of them.
struct Tolerances {
  double zeta_tail = 1e-12;          // Euler-Maclaurin remainder target
  double kseries_tail = 1e-9;        // K(s, chi) truncation
  double mellin_abs = 1e-10;         // test-function Mellin transforms
  double euler_tail = 1e-9;          // E(S) prime tail target
  u64 euler_prime_cutoff = 10000;    // primes handled exactly in E(S)
  double afe_length_factor = 10.0;   // AFE length = factor * sqrt(q (1+|Im s|))
  double afe_kernel_floor = 1e-18;   // stop AFE sums once the kernel drops below
  u64 sieve_max = 4000000000ULL;     // largest X accepted by sieve_family
  double gauss_abs = 1e-9;
  double fe_abs = 1e-7;
  double tdiag_vs_tfact = 1e-6;
  double identity_abs = 1e-5;
  double band_halfwidth = 0.15;      // residual-decay slope band around e_k
  double poly_residual_ratio = 0.1;  // polymoment residual vs the 1-swap term
};

/// Process-wide tolerance record (read-mostly; set before launching workers).
Tolerances& tolerances();

}  // namespace mds
