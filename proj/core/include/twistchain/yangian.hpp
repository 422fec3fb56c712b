#pragma once

#include <array>
#include <functional>
#include <span>

#include "twistchain/hilbert.hpp"
#include "twistchain/types.hpp"

namespace twistchain {

/// The 2x2 twist matrix K = [[k_tilde, k_plus], [k_minus, k]] closing the
/// transfer-matrix trace.
struct Twist {
  Complex k_tilde{1.0, 0.0};
  Complex k_plus{0.0, 0.0};
  Complex k_minus{0.0, 0.0};
  Complex k{1.0, 0.0};

  Matrix2 matrix() const {
    Matrix2 m;
    m << k_tilde, k_plus, k_minus, k;
    return m;
  }
  Complex det() const { return k_tilde * k - k_plus * k_minus; }
  bool diagonal(double tol = 1e-14) const {
    return std::abs(k_plus) <= tol && std::abs(k_minus) <= tol;
  }
  bool symmetric(double tol = 1e-14) const {
    return std::abs(k_plus - k_minus) <= tol;
  }
};

/// Monodromy sample: the four operator entries t_ij(u) at one spectral
/// point, each a dense matrix on the full chain space.
struct Monodromy {
  Complex u{0.0, 0.0};
  std::array<Matrix, 4> t;  // row-major: t11, t12, t21, t22

  /// 1-based auxiliary-space indices.
  const Matrix& entry(int i, int j) const { return t[2 * (i - 1) + (j - 1)]; }
  Matrix& entry(int i, int j) { return t[2 * (i - 1) + (j - 1)]; }
};

/// Any family u -> operator entries (monodromy or its modified cousins);
/// indices are 1-based.
using OperatorFamily = std::function<Matrix(int i, int j, Complex u)>;

/// One Lax-matrix entry of the given site, embedded in the full space.
Matrix lax_entry(const ChainSpec& spec, int site, int i, int j, Complex u);

/// Ordered product of the per-site Lax matrices, site 0 leftmost.
Monodromy monodromy(const ChainSpec& spec, Complex u);

/// Twisted transfer matrix t(u) = tr(K T(u)).
Matrix transfer(const Twist& twist, const Monodromy& sample);
Matrix transfer(const ChainSpec& spec, const Twist& twist, Complex u);

/// Rational 4x4 R-matrix R(u) = (u/c)·Id + P on C^2 (x) C^2.
Matrix r_matrix(Complex u, Complex c);

/// Residual of the exchange relation
///   R_ab(u-v) T_a(u) T_b(v) = T_b(v) T_a(u) R_ab(u-v)
/// on C^2 (x) C^2 (x) H.
Residual check_rtt(const ChainSpec& spec, Complex u, Complex v);

/// Residual of R12 R13 R23 = R23 R13 R12 on (C^2)^3.
Residual yang_baxter_residual(Complex u, Complex v, Complex w, Complex c);

/// The involution T(u) -> T^t(-u) (transpose in the auxiliary space): given
/// a sample at u, returns the image family evaluated at -u.
Monodromy apply_phi(const Monodromy& sample);

enum class ActionPattern {
  SameRow,     // entries (i,j) then (i,k), j != k
  SameColumn,  // entries (i,j) then (k,j), i != k
};

/// Residual of the multiple-commutation identity that moves one operator
/// entry through a product of entries sharing a row or a column. Valid for
/// the monodromy entries and for any family obeying the same exchange
/// algebra.
Residual check_multiple_action(const OperatorFamily& op, ActionPattern pattern, int i,
                               int j, int k, Complex v, std::span<const Complex> us,
                               Complex c);

/// Family view of the monodromy entries (one sample built per distinct u).
OperatorFamily monodromy_family(const ChainSpec& spec);

/// Residual of the large-u expansion: the leading coefficient of T(u) is
/// (1/c)^N Id and the subleading one is
///   (1/c)^{N-1} ([[N/2 + S^z, S^-], [S^+, N/2 - S^z]] - (sum_i theta_i/c))
/// (coefficients extracted by interpolation at N+1 circle nodes).
Residual check_large_u(const ChainSpec& spec);

/// Max residual of [t(z_a), t(z_b)] over all pairs from zs.
Residual check_commuting_family(const ChainSpec& spec, const Twist& twist,
                                std::span<const Complex> zs);

/// Residual of [S^z, t(u)] = k_plus t21(u) - k_minus t12(u).
Residual check_sz_twist_relation(const ChainSpec& spec, const Twist& twist, Complex u);

}  // namespace twistchain
