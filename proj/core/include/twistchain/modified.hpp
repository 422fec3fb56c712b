#pragma once

#include <optional>
#include <span>
#include <utility>

#include "twistchain/yangian.hpp"

namespace twistchain {

enum class FactorizationMode { EqualRho, Custom };

/// Factorization K = B D A of an invertible non-diagonal twist, with
/// D = diag(k_tilde - rho1, k - rho2) and A, B the det-1 dressing matrices.
/// The scalars satisfy  k_plus k_minus - (rho1 k + rho2 k_tilde) + rho1 rho2 = 0.
struct TwistFactorization {
  Twist twist;
  FactorizationMode mode = FactorizationMode::EqualRho;
  Complex rho1{0.0, 0.0};
  Complex rho2{0.0, 0.0};
  Complex mu{1.0, 0.0};  // 1 / (1 - rho1 rho2 / (k_plus k_minus))
  Matrix2 a, b, d;
  /// Which root of the equal-rho quadratic was taken (0: canonical "minus"
  /// branch, 1: "plus"); recorded for reproducibility of reports.
  int branch = 0;
  /// False after gauge_factorization (A, B no longer in canonical form; the
  /// closed-form linear combinations for nu in terms of t no longer apply,
  /// the sandwich A T B always does).
  bool canonical = true;

  Complex alpha_plus() const { return twist.k_tilde - rho1; }
  Complex alpha_minus() const { return twist.k - rho2; }
  Complex rho_sum() const { return rho1 + rho2; }
};

/// Factor a twist. EqualRho solves rho^2 - (k_tilde + k) rho + k_plus k_minus = 0
/// and takes the smaller-modulus root (ties: nonnegative imaginary part).
/// Custom takes rho1 and solves the constraint linearly for rho2.
/// Throws DegenerateFactorization when k_plus k_minus = 0, when mu
/// degenerates, or when Custom is called with rho1 = k_tilde.
TwistFactorization factorize_twist(const Twist& twist, FactorizationMode mode,
                                   std::optional<Complex> rho1 = std::nullopt);

/// Apply the residual gauge freedom A -> C^{-1}A, B -> B C with
/// C = diag(c1, c2) (any diagonal C commutes with D). Scalars are unchanged.
TwistFactorization gauge_factorization(const TwistFactorization& fact, Complex c1,
                                       Complex c2);

/// Degenerate-twist preset: twist (k_tilde, eps, eps, k) factorized in Custom
/// mode with rho1 = eps. As eps -> 0 this approaches the special point
/// rho_i = k_plus rhobar_i with rhobar_1 k + rhobar_2 k_tilde = 0, while the
/// exact factorization constraint holds at finite eps.
std::pair<Twist, TwistFactorization> bgood_preset(Complex k_tilde, Complex k,
                                                  double eps = 1e-3);

/// The rank-one twist V with Tr(V T(u)) = nu_ij(u), namely V = B E_ji A.
Matrix2 null_twist_for(const TwistFactorization& fact, int i, int j);

/// Transfer matrix of an arbitrary 2x2 twist V (used with det V = 0).
Matrix null_transfer(const ChainSpec& spec, const Matrix2& v, Complex u);
Matrix null_transfer(const Matrix2& v, const Monodromy& sample);

/// Modified monodromy entry nu_ij(u) = (A T(u) B)_ij.
Matrix nu_entry(const ChainSpec& spec, const TwistFactorization& fact, int i, int j,
                Complex u);

/// Family view of the modified entries (per-u monodromy sample cached).
OperatorFamily nu_family(const ChainSpec& spec, const TwistFactorization& fact);

/// F(z) = prod_i prod_{k=0}^{2s_i} (z - theta_i + c(s_i - k + 1/2))/c,
/// the fixed polynomial of the inhomogeneous terms; equals
/// lambda1(z) * aux_lambda(z).
Complex big_f(const ChainSpec& spec, Complex z);
std::vector<Complex> big_f_roots(const ChainSpec& spec);

/// Residuals of the eight weight-vector actions (the six modified-entry
/// actions and the two transfer actions with the kappa/mu corrections),
/// maximized over the given spectral points.
Residual check_weight_actions(const ChainSpec& spec, const TwistFactorization& fact,
                              std::span<const Complex> zs);

/// Residual of the null-twisted product identity at #us = S:
///   nu(z) nu(ubar) = Tr(V) (F(z) g(z,ubar) nu(ubar)
///                    + sum_i g(u_i,z) F(u_i) g(u_i,ubar_i) nu(z) nu(ubar_i)).
/// Requires det V = 0 and Tr V != 0 (throws TraceZero otherwise).
Residual check_null_product_identity(const ChainSpec& spec, const Matrix2& v,
                                     std::span<const Complex> us, Complex z);

/// Residual of the vanishing product t_ij(z) t_ij(u_1)...t_ij(u_S) = 0 for
/// the off-diagonal entries (i != j), the trace-zero edge of the identity.
Residual check_offdiag_product_vanishes(const ChainSpec& spec, int i, int j,
                                        std::span<const Complex> us, Complex z);

}  // namespace twistchain
