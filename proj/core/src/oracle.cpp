#include "twistchain/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace twistchain {

namespace {

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

bool near_degenerate(const std::vector<Complex>& eigs) {
  double scale = 1.0;
  for (const Complex& e : eigs) scale = std::max(scale, std::abs(e));
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    for (std::size_t j = i + 1; j < eigs.size(); ++j) {
      if (std::abs(eigs[i] - eigs[j]) < 1e-8 * scale) return true;
    }
  }
  return false;
}

}  // namespace

SpectrumReport diagonalize_transfer(const ChainSpec& spec, const Twist& twist,
                                    std::span<const Complex> z_samples,
                                    Eigen::Index dim_cap) {
  SpectrumReport report;
  report.dim = spec.dim();
  if (report.dim > dim_cap) {
    throw DimensionCap("chain dimension " + std::to_string(report.dim) +
                       " exceeds the dense-diagonalization cap " +
                       std::to_string(dim_cap));
  }
  report.z_samples.assign(z_samples.begin(), z_samples.end());
  if (z_samples.empty()) return report;

  std::vector<Matrix> ts;
  ts.reserve(z_samples.size());
  for (const Complex& z : z_samples) ts.push_back(transfer(spec, twist, z));

  // Joint-basis attempt: diagonalize the first sample and require the rest
  // of the family to be near-diagonal in that basis.
  Eigen::ComplexEigenSolver<Matrix> es(ts.front(), /*computeEigenvectors=*/true);
  const Matrix v = es.eigenvectors();
  Eigen::PartialPivLU<Matrix> lu(v);
  const Matrix vinv = lu.solve(Matrix::Identity(report.dim, report.dim));
  const double basis_error =
      (v * vinv - Matrix::Identity(report.dim, report.dim)).cwiseAbs().maxCoeff();

  bool joint = basis_error < 1e-8;
  double leakage = 0.0;
  std::vector<std::vector<Complex>> joint_eigs;
  if (joint) {
    for (const Matrix& t : ts) {
      const Matrix x = vinv * t * v;
      const double scale = std::max(t.cwiseAbs().maxCoeff(), 1e-300);
      const double off =
          (x - x.diagonal().asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff();
      leakage = std::max(leakage, off / scale);
      std::vector<Complex> eigs(static_cast<std::size_t>(report.dim));
      for (Eigen::Index j = 0; j < report.dim; ++j) {
        eigs[static_cast<std::size_t>(j)] = x(j, j);
      }
      joint_eigs.push_back(std::move(eigs));
    }
    joint = leakage <= 1e-8;
  }
  report.joint_leakage = leakage;

  if (joint) {
    report.joint_ok = true;
    report.joint_eigenbasis = v;
    report.eigenvalues = std::move(joint_eigs);
    for (const auto& eigs : report.eigenvalues) {
      report.degenerate.push_back(near_degenerate(eigs));
    }
    return report;
  }

  // Fallback: independent diagonalization per sample, sorted for stability.
  for (const Matrix& t : ts) {
    Eigen::ComplexEigenSolver<Matrix> per(t, /*computeEigenvectors=*/false);
    std::vector<Complex> eigs(static_cast<std::size_t>(report.dim));
    for (Eigen::Index j = 0; j < report.dim; ++j) {
      eigs[static_cast<std::size_t>(j)] = per.eigenvalues()(j);
    }
    std::sort(eigs.begin(), eigs.end(), complex_less);
    report.degenerate.push_back(near_degenerate(eigs));
    report.eigenvalues.push_back(std::move(eigs));
  }
  return report;
}

std::vector<std::vector<Complex>> eigen_tuples(const SpectrumReport& report) {
  const std::size_t n = static_cast<std::size_t>(report.dim);
  const std::size_t k = report.z_samples.size();
  std::vector<std::vector<Complex>> tuples(n, std::vector<Complex>(k));
  if (k == 0) return tuples;

  if (report.joint_ok) {
    for (std::size_t zi = 0; zi < k; ++zi) {
      for (std::size_t j = 0; j < n; ++j) tuples[j][zi] = report.eigenvalues[zi][j];
    }
    return tuples;
  }

  // Nearest-continuation: thread each curve from z_0 by greedily pairing
  // consecutive eigenvalue sets.
  std::vector<std::size_t> current(n);
  for (std::size_t j = 0; j < n; ++j) {
    tuples[j][0] = report.eigenvalues[0][j];
    current[j] = j;
  }
  for (std::size_t zi = 1; zi < k; ++zi) {
    const auto& prev = report.eigenvalues[zi - 1];
    const auto& next = report.eigenvalues[zi];
    // Greedy global-minimum pairing between consecutive samples.
    std::vector<bool> prev_used(n, false), next_used(n, false);
    std::vector<std::size_t> to_next(n, 0);
    for (std::size_t round = 0; round < n; ++round) {
      double best = std::numeric_limits<double>::infinity();
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (prev_used[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
          if (next_used[j]) continue;
          const double d = std::abs(prev[i] - next[j]);
          if (d < best) {
            best = d;
            bi = i;
            bj = j;
          }
        }
      }
      prev_used[bi] = true;
      next_used[bj] = true;
      to_next[bi] = bj;
    }
    for (std::size_t j = 0; j < n; ++j) {
      current[j] = to_next[current[j]];
      tuples[j][zi] = next[current[j]];
    }
  }
  return tuples;
}

MatchReport match_spectrum(const SpectrumReport& report,
                           const std::vector<std::vector<Complex>>& predicted,
                           double tol) {
  MatchReport out;
  out.dim = report.dim;
  out.n_predictions = static_cast<int>(predicted.size());
  out.assignment.assign(predicted.size(), -1);
  out.distances.assign(predicted.size(), std::numeric_limits<double>::infinity());
  if (report.dim == 0 || predicted.empty()) return out;

  const auto tuples = eigen_tuples(report);
  const std::size_t k = report.z_samples.size();

  auto tuple_distance = [&](const std::vector<Complex>& a,
                            const std::vector<Complex>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      d = std::max(d, std::abs(a[i] - b[i]) / (1.0 + std::abs(b[i])));
    }
    return d;
  };

  std::vector<bool> eigen_used(tuples.size(), false);
  std::vector<bool> pred_used(predicted.size(), false);
  for (std::size_t round = 0; round < predicted.size(); ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bp = 0, be = 0;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      if (pred_used[p] || predicted[p].size() != k) continue;
      for (std::size_t e = 0; e < tuples.size(); ++e) {
        if (eigen_used[e]) continue;
        const double d = tuple_distance(predicted[p], tuples[e]);
        if (d < best) {
          best = d;
          bp = p;
          be = e;
        }
      }
    }
    if (!std::isfinite(best) || best > tol) break;
    pred_used[bp] = true;
    eigen_used[be] = true;
    out.assignment[bp] = static_cast<int>(be);
    out.distances[bp] = best;
    ++out.matched;
    out.max_matched_distance = std::max(out.max_matched_distance, best);
  }
  out.coverage = static_cast<double>(out.matched) / static_cast<double>(report.dim);
  return out;
}

Residual spectrum_self_check(const ChainSpec& spec, const Twist& twist,
                             const SpectrumReport& report) {
  Residual worst;
  for (std::size_t zi = 0; zi < report.z_samples.size(); ++zi) {
    const Matrix t = transfer(spec, twist, report.z_samples[zi]);
    Complex sum{0.0, 0.0}, prod{1.0, 0.0};
    for (const Complex& e : report.eigenvalues[zi]) {
      sum += e;
      prod *= e;
    }
    worst.join(Residual::compare(sum, t.trace()));
    worst.join(Residual::compare(prod, Complex{t.determinant()}));
  }
  return worst;
}

}  // namespace twistchain
