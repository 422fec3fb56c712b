#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "twistchain/hilbert.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/rng.hpp"
#include "twistchain/types.hpp"
#include "twistchain/yangian.hpp"

namespace twistchain {

/// Q-polynomial in root form, q(z) = prod_i (z - u_i)/c. Monic up to the
/// c^{-deg} prefactor, which is exactly the normalization that makes the
/// inhomogeneous T-Q equations hold with a bare (rho1+rho2)F(z) term.
struct QPolynomial {
  std::vector<Complex> roots;
  Complex c{1.0, 0.0};

  int degree() const { return static_cast<int>(roots.size()); }
  Complex operator()(Complex z) const {
    Complex p{1.0, 0.0};
    for (const Complex& r : roots) p *= (z - r) / c;
    return p;
  }
};

QPolynomial q_from_roots(std::span<const Complex> roots, Complex c);

/// Scalar eigenvalue function z -> Lambda(z).
using EigenvalueFn = std::function<Complex(Complex)>;

enum class TqKind { DiagPlus, DiagMinus, InhomPlus, InhomMinus };

/// l.h.s. - r.h.s. of the selected T-Q equation at z:
///   diag_plus:   L(z)q(z) - kt l1(z)q(z-c) - k  l2(z)q(z+c)
///   diag_minus:  L(z)q(z) - k  l1(z)q(z-c) - kt l2(z)q(z+c)
///   inhom_plus:  L(z)Q(z) - (kt-r1)l1(z)Q(z-c) - (k-r2)l2(z)Q(z+c) - (r1+r2)F(z)
///   inhom_minus: L(z)Q(z) - (k-r2)l1(z)Q(z-c) - (kt-r1)l2(z)Q(z+c) - (r1+r2)F(z)
/// The factorization pointer is required for the inhomogeneous kinds.
Complex tq_residual(const ChainSpec& spec, const Twist& twist,
                    const TwistFactorization* fact, const QPolynomial& q,
                    const EigenvalueFn& lambda_big, Complex z, TqKind kind);

enum class WronskianKind { Diagonal, Modified, Mixed };

struct WronskianReport {
  WronskianKind kind = WronskianKind::Diagonal;
  std::vector<Complex> grid;
  /// Worst relative residual of the kind's difference identity on the grid.
  double max_residual = 0.0;
  /// Diagonal kind: the measured constant and its distance to k_tilde - k.
  Complex constant_value{0.0, 0.0};
  double constant_residual = 0.0;
  /// Mixed kind: relative error of alpha+ alpha- = (kt - rho1)(k - rho2).
  double identity_residual = 0.0;
  bool degree_ok = true;
  bool window_limited = false;
  bool pass = false;
};

/// Grid of z samples keeping z and z+c away from the zeros of the
/// denominator polynomial lambda(z), inside |z| <= 10 (1 + max|theta|).
std::vector<Complex> wronskian_grid(const ChainSpec& spec, Rng& rng, int n = 16);

/// W_d(z) = (kt q+(z-c) q-(z) - k q+(z) q-(z-c)) / lambda(z) is constant in
/// z and equals kt - k; also enforces deg q+ + deg q- = S.
WronskianReport wronskian_diag(const ChainSpec& spec, const Twist& twist,
                               const QPolynomial& q_plus, const QPolynomial& q_minus,
                               std::span<const Complex> grid, double tol = 1e-9);

/// W(z) = ((kt-r1) Q+(z-c) Q-(z) - (k-r2) Q+(z) Q-(z-c)) / lambda(z)
/// satisfies W(z) - W(z+c) = (r1+r2)(Q+(z) - Q-(z)); both degrees are S.
WronskianReport wronskian_modified(const ChainSpec& spec,
                                   const TwistFactorization& fact,
                                   const QPolynomial& q_plus, const QPolynomial& q_minus,
                                   std::span<const Complex> grid, double tol = 1e-8);

/// Mixed identity: with (a+, a-) the twist eigenvalues paired to q's usual
/// T-Q equation and beta = a- / (kt - rho1),
///   W(z) = beta^{z/c} (a+ q(z-c) Q+(z) - (kt-rho1) q(z) Q+(z-c)) / lambda(z)
/// satisfies W(z) - W(z+c) = beta^{z/c} (rho1+rho2) q(z). Verifies
/// a+ a- = (kt-rho1)(k-rho2) first; rejects non-invertible twists. The
/// z/c power uses the principal logarithm.
WronskianReport wronskian_mixed(const ChainSpec& spec, const TwistFactorization& fact,
                                const QPolynomial& q, Complex alpha_plus,
                                Complex alpha_minus, const QPolynomial& q_cap_plus,
                                std::span<const Complex> grid, double tol = 1e-8);

/// Eigenvalues of the 2x2 twist matrix, in a deterministic order.
std::pair<Complex, Complex> twist_eigenvalues(const Twist& twist);

struct UsualTqSolution {
  QPolynomial q;
  Complex alpha_plus{0.0, 0.0};
  Complex alpha_minus{0.0, 0.0};
  double residual = 0.0;  // validation residual at fresh points
};

/// Solve the usual (homogeneous) T-Q equation
///   Lambda(z) q(z) = a+ l1(z) q(z-c) + a- l2(z) q(z+c)
/// for a polynomial q by linear collocation, scanning degrees 0..max_degree
/// and both assignments of (a1, a2) to (a+, a-). Throws PairingFailure when
/// no degree/assignment fits.
UsualTqSolution solve_usual_tq(const ChainSpec& spec, const EigenvalueFn& lambda_big,
                               Complex a1, Complex a2, int max_degree, Rng& rng,
                               double fit_tol = 1e-8);

struct EigenvaluePairing {
  std::vector<std::pair<int, int>> pairs;  // (index into a, index into b)
  double max_distance = 0.0;
};

/// Greedy minimal-distance pairing of two families of eigenvalue tuples
/// (sampled at common z points); only pairs within tol are accepted.
EigenvaluePairing pair_by_eigenvalue(const std::vector<std::vector<Complex>>& a,
                                     const std::vector<std::vector<Complex>>& b,
                                     double tol = 1e-6);

}  // namespace twistchain
