#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace twistchain {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Vector2 = Eigen::Vector2cd;

/// Max-norm residual of a comparison, kept both as an absolute value and
/// relative to the magnitude of the quantities compared.
struct Residual {
  double abs = 0.0;
  double rel = 0.0;

  /// Combine with another residual, keeping the worst of each field.
  Residual& join(const Residual& other) {
    abs = std::max(abs, other.abs);
    rel = std::max(rel, other.rel);
    return *this;
  }

  static Residual of(double abs_err, double scale) {
    Residual r;
    r.abs = abs_err;
    r.rel = (abs_err == 0.0) ? 0.0 : abs_err / std::max(scale, 1e-300);
    return r;
  }

  template <typename A, typename B>
  static Residual compare(const Eigen::MatrixBase<A>& lhs, const Eigen::MatrixBase<B>& rhs) {
    const double abs_err = (lhs - rhs).cwiseAbs().maxCoeff();
    const double scale =
        std::max(lhs.cwiseAbs().maxCoeff(), rhs.cwiseAbs().maxCoeff());
    return of(abs_err, scale);
  }

  static Residual compare(Complex lhs, Complex rhs) {
    return of(std::abs(lhs - rhs), std::max(std::abs(lhs), std::abs(rhs)));
  }
};

// Error taxonomy. Everything derives from std::runtime_error so callers can
// catch coarsely; the CLI maps ConfigError to its usage/config exit status.

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Twist factorization rejected (violated constraint, mu-degeneracy, ...).
struct DegenerateFactorization : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear solve hit a (numerically) singular matrix.
struct SingularSolve : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Null twist with vanishing trace where a nonzero trace is required.
struct TraceZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation point collides with a pole of the rational kernels.
struct PoleAtRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Root solver exhausted its iteration/start budget without a solution.
struct NoConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A constructed state vector is numerically zero.
struct DegenerateVector : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigenvalue pairing between two families is ambiguous.
struct PairingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Principal matrix logarithm undefined for the requested matrix.
struct LogBranchFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inhomogeneities violate the genericity needed by the requested routine.
struct NonGenericTheta : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hilbert-space dimension exceeds the dense-solver cap.
struct DimensionCap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace twistchain
