#pragma once

// Shared vocabulary for the cmt library: scalar type, error reporting,
// default tolerances and the seeded random source.

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

namespace cmt {

using cplx = std::complex<double>;

enum class ErrorCode {
  ZeroPolynomial,
  DuplicateNodes,
  SpectraCollide,
  NonConvergence,
  SizeMismatch,
  SizeCap,
  DefectiveOrClustered,
  ConditioningFailure,
  NotInverse,
  RepeatedEigenvalue,
  NotSimpleSpectrum,
  WilsonFormViolation,
  MembershipLost,
  GenericityExhausted,
  PreconditionViolated,
  DuplicatePoints,
  DuplicateSpaceSizes,
  VerificationFailed,
  MalformedInput,
  DegreeCap,
  InvalidArgument,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorCode::DuplicateNodes: return "DuplicateNodes";
    case ErrorCode::SpectraCollide: return "SpectraCollide";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::SizeCap: return "SizeCap";
    case ErrorCode::DefectiveOrClustered: return "DefectiveOrClustered";
    case ErrorCode::ConditioningFailure: return "ConditioningFailure";
    case ErrorCode::NotInverse: return "NotInverse";
    case ErrorCode::RepeatedEigenvalue: return "RepeatedEigenvalue";
    case ErrorCode::NotSimpleSpectrum: return "NotSimpleSpectrum";
    case ErrorCode::WilsonFormViolation: return "WilsonFormViolation";
    case ErrorCode::MembershipLost: return "MembershipLost";
    case ErrorCode::GenericityExhausted: return "GenericityExhausted";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::DuplicateSpaceSizes: return "DuplicateSpaceSizes";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
    case ErrorCode::MalformedInput: return "MalformedInput";
    case ErrorCode::DegreeCap: return "DegreeCap";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Default numerical tolerances. Every operation that uses one of these
/// also accepts an explicit override.
struct Tolerances {
  double coeff = 1e-12;      // trailing polynomial coefficients below this are dropped
  double spec = 1e-8;        // minimum separation of distinct nodes / eigenvalues
  double interp = 1e-8;      // interpolation residual bound (relative to value scale)
  double rank = 1e-9;        // relative pivot threshold for rank
  double membership = 1e-7;  // relative residual bound for rank([X,Y]+I) = 1 after moves
  double canon = 1e-7;       // canonical-form equality
  double wilson = 1e-6;      // off-diagonal Wilson residual accepted by canonicalize
  double recon = 1e-8;       // eigen-decomposition reconstruction
  double root = 1e-10;       // root-finder backward error
  int root_max_iter = 500;
  std::size_t size_cap = 16;
  int degree_cap = 64;
};

inline constexpr Tolerances kDefaultTolerances{};

/// Seeded random source. Doubles are built directly from the 64-bit engine
/// output so that sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

  cplx in_disk(double radius) { return in_annulus(0.0, radius); }

  /// Uniform (area measure) in { rmin <= |z| <= rmax }.
  cplx in_annulus(double rmin, double rmax) {
    const double u = uniform();
    const double r = std::sqrt(rmin * rmin + u * (rmax * rmax - rmin * rmin));
    const double theta = 2.0 * std::numbers::pi * uniform();
    return std::polar(r, theta);
  }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used to derive independent child seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace cmt
