#pragma once

#include <utility>
#include <vector>

#include "twistchain/types.hpp"

namespace twistchain {

/// Irreducible su(2) spin representation of one site. Basis ordering is
/// highest weight first: index k carries the S^z eigenvalue s - k, so the
/// first basis vector is |s, s> and the last is |s, -s>.
struct SpinRep {
  int twos = 1;  // 2s, stored exactly as an integer
  Matrix sz, sp, sm, id;

  double spin() const { return 0.5 * twos; }
  Eigen::Index dim() const { return twos + 1; }
};

/// Build the spin-s representation from 2s (throws on 2s < 1).
SpinRep spin_rep(int twos);

/// An inhomogeneous chain: per-site spins 2s_i, inhomogeneities theta_i and
/// the global scale c. Site 0 is the slowest Kronecker index (leftmost
/// tensor factor).
struct ChainSpec {
  std::vector<int> twos;
  std::vector<Complex> thetas;
  Complex c{1.0, 0.0};

  ChainSpec() = default;
  ChainSpec(std::vector<int> twos_in, std::vector<Complex> thetas_in, Complex c_in);

  int n_sites() const { return static_cast<int>(twos.size()); }
  /// Total Hilbert-space dimension, prod_i (2s_i + 1).
  Eigen::Index dim() const;
  /// S = sum_i 2s_i: the number of creation operators that saturates the chain.
  int total_twos() const;
  double max_abs_theta() const;
  /// True when all pairwise theta differences exceed tol.
  bool generic_thetas(double tol = 1e-8) const;
};

/// Embed a one-site operator into the full chain (identity elsewhere).
Matrix embed_site(const ChainSpec& spec, int site, const Matrix& local_op);

/// Total S^z, S^+, S^- on the chain.
Matrix total_sz(const ChainSpec& spec);
Matrix total_sp(const ChainSpec& spec);
Matrix total_sm(const ChainSpec& spec);

/// The two weight vectors: all-highest |0> (first basis vector) and
/// all-lowest |0^> (last basis vector).
std::pair<Vector, Vector> weight_vectors(const ChainSpec& spec);

/// Weight functions of the chain,
///   lambda1(u) = prod_i (u - theta_i + c(s_i + 1/2))/c,
///   lambda2(u) = prod_i (u - theta_i - c(s_i - 1/2))/c.
std::pair<Complex, Complex> lambda_weights(const ChainSpec& spec, Complex u);

/// Auxiliary weight polynomial lambda(z) = prod_i prod_{k=1}^{2s_i}
/// (z - theta_i + c(s_i - k + 1/2))/c; it satisfies
/// lambda1(u)/lambda2(u) = lambda(u + c)/lambda(u).
Complex aux_lambda(const ChainSpec& spec, Complex z);

/// Root lists of the above, handy for solver seeding and pole avoidance.
std::vector<Complex> lambda1_roots(const ChainSpec& spec);
std::vector<Complex> lambda2_roots(const ChainSpec& spec);
std::vector<Complex> aux_lambda_roots(const ChainSpec& spec);

/// The descending lattice attached to site i: theta_i + c(s_i + 1/2 - j)
/// for j = 1..2s_i. These are the distinguished evaluation points of the
/// separated basis.
std::vector<Complex> site_lattice(const ChainSpec& spec, int site);

}  // namespace twistchain
