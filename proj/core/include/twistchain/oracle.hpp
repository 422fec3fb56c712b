#pragma once

#include <span>
#include <vector>

#include "twistchain/hilbert.hpp"
#include "twistchain/types.hpp"
#include "twistchain/yangian.hpp"

namespace twistchain {

/// Dense spectra of the transfer matrix at a few spectral points, with a
/// joint eigenbasis when the sampled family is cleanly simultaneously
/// diagonalizable.
struct SpectrumReport {
  std::vector<Complex> z_samples;
  /// eigenvalues[k][j]: j-th eigenvalue at z_samples[k]. When joint_ok the
  /// index j is consistent across k (same eigenvector); otherwise each z is
  /// independently sorted and `degenerate` flags ambiguous columns.
  std::vector<std::vector<Complex>> eigenvalues;
  Matrix joint_eigenbasis;  // columns; empty unless joint_ok
  bool joint_ok = false;
  double joint_leakage = 0.0;  // worst relative off-diagonal mass
  std::vector<bool> degenerate;  // per z: some eigenvalue gap below 1e-8
  Eigen::Index dim = 0;
};

/// Dense diagonalization of t(z) at every sample. Throws DimensionCap when
/// the chain dimension exceeds the cap. An ill-conditioned eigenbasis is
/// reported through joint_ok = false (per-z fallback), never fatal.
SpectrumReport diagonalize_transfer(const ChainSpec& spec, const Twist& twist,
                                    std::span<const Complex> z_samples,
                                    Eigen::Index dim_cap = 4096);

/// Per-eigenstate tuples (Lambda(z_0), ..., Lambda(z_{K-1})). Uses the joint
/// basis when available, otherwise nearest-continuation curve tracking.
std::vector<std::vector<Complex>> eigen_tuples(const SpectrumReport& report);

struct MatchReport {
  Eigen::Index dim = 0;
  int n_predictions = 0;
  /// assignment[p]: eigen-tuple index claimed by prediction p, or -1.
  std::vector<int> assignment;
  /// Worst relative distance per prediction (infinity when unmatched).
  std::vector<double> distances;
  int matched = 0;
  double coverage = 0.0;  // matched / dim
  double max_matched_distance = 0.0;
};

/// Greedy multiplicity-respecting assignment of predicted eigenvalue tuples
/// to oracle eigen-tuples; each oracle column is claimed at most once and a
/// prediction only matches within `tol` (relative, per sample point).
MatchReport match_spectrum(const SpectrumReport& report,
                           const std::vector<std::vector<Complex>>& predicted,
                           double tol = 1e-6);

/// Max relative residual of the trace and determinant identities
///   sum eigenvalues = Tr t(z),  prod eigenvalues = det t(z)
/// over the sampled points.
Residual spectrum_self_check(const ChainSpec& spec, const Twist& twist,
                             const SpectrumReport& report);

}  // namespace twistchain
