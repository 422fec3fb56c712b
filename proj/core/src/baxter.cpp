#include "twistchain/baxter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace twistchain {

namespace {

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

Complex principal_power(Complex base, Complex exponent) {
  return std::exp(exponent * std::log(base));
}

/// Roots of a monic polynomial z^n + a_{n-1} z^{n-1} + ... + a_0 given the
/// ascending coefficients (a_0..a_{n-1}), via the companion matrix.
std::vector<Complex> monic_roots(const std::vector<Complex>& low_coeffs) {
  const int n = static_cast<int>(low_coeffs.size());
  if (n == 0) return {};
  Matrix companion = Matrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -low_coeffs[static_cast<std::size_t>(i)];
  Eigen::ComplexEigenSolver<Matrix> es(companion, /*computeEigenvectors=*/false);
  std::vector<Complex> roots(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
  std::sort(roots.begin(), roots.end(), complex_less);
  return roots;
}

double scale_max(std::initializer_list<double> values) {
  double s = 1e-300;
  for (double v : values) s = std::max(s, v);
  return s;
}

}  // namespace

QPolynomial q_from_roots(std::span<const Complex> roots, Complex c) {
  QPolynomial q;
  q.roots.assign(roots.begin(), roots.end());
  q.c = c;
  return q;
}

Complex tq_residual(const ChainSpec& spec, const Twist& twist,
                    const TwistFactorization* fact, const QPolynomial& q,
                    const EigenvalueFn& lambda_big, Complex z, TqKind kind) {
  const Complex c = spec.c;
  const auto [l1, l2] = lambda_weights(spec, z);
  const Complex qm = q(z - c), q0 = q(z), qp = q(z + c);
  Complex left{0.0, 0.0}, right{0.0, 0.0};
  switch (kind) {
    case TqKind::DiagPlus:
      left = lambda_big(z) * q0;
      right = twist.k_tilde * l1 * qm + twist.k * l2 * qp;
      break;
    case TqKind::DiagMinus:
      left = lambda_big(z) * q0;
      right = twist.k * l1 * qm + twist.k_tilde * l2 * qp;
      break;
    case TqKind::InhomPlus:
    case TqKind::InhomMinus: {
      if (fact == nullptr) {
        throw std::invalid_argument("inhomogeneous T-Q kinds need a factorization");
      }
      const Complex ap = fact->alpha_plus(), am = fact->alpha_minus();
      const Complex c_low = (kind == TqKind::InhomPlus) ? ap : am;
      const Complex c_high = (kind == TqKind::InhomPlus) ? am : ap;
      left = lambda_big(z) * q0;
      right = c_low * l1 * qm + c_high * l2 * qp + fact->rho_sum() * big_f(spec, z);
      break;
    }
  }
  return left - right;
}

std::vector<Complex> wronskian_grid(const ChainSpec& spec, Rng& rng, int n) {
  const Complex c = spec.c;
  const double window = 10.0 * (1.0 + spec.max_abs_theta());
  const double radius =
      std::min(window, 2.0 * (1.0 + spec.max_abs_theta() +
                              std::abs(c) * (0.5 * spec.total_twos() + 1.0)));
  const auto poles = aux_lambda_roots(spec);
  const double clearance = 0.05 * (1.0 + spec.max_abs_theta());

  std::vector<Complex> grid;
  grid.reserve(static_cast<std::size_t>(n));
  int guard = 0;
  while (static_cast<int>(grid.size()) < n && guard < 200 * n) {
    ++guard;
    const Complex z = rng.annulus(0.1 * radius, radius);
    bool clear = true;
    for (const Complex& p : poles) {
      if (std::abs(z - p) < clearance || std::abs(z + c - p) < clearance) {
        clear = false;
        break;
      }
    }
    if (clear) grid.push_back(z);
  }
  if (static_cast<int>(grid.size()) < n) {
    throw NonGenericTheta("could not place a Wronskian grid away from lambda zeros");
  }
  return grid;
}

WronskianReport wronskian_diag(const ChainSpec& spec, const Twist& twist,
                               const QPolynomial& q_plus, const QPolynomial& q_minus,
                               std::span<const Complex> grid, double tol) {
  WronskianReport report;
  report.kind = WronskianKind::Diagonal;
  report.grid.assign(grid.begin(), grid.end());
  report.degree_ok = q_plus.degree() + q_minus.degree() == spec.total_twos();

  const Complex c = spec.c;
  const Complex target = twist.k_tilde - twist.k;
  auto w_and_scale = [&](Complex z) {
    const Complex t1 = twist.k_tilde * q_plus(z - c) * q_minus(z);
    const Complex t2 = twist.k * q_plus(z) * q_minus(z - c);
    const Complex lam = aux_lambda(spec, z);
    return std::pair<Complex, double>{(t1 - t2) / lam,
                                      (std::abs(t1) + std::abs(t2)) / std::abs(lam)};
  };

  Complex mean{0.0, 0.0};
  for (const Complex& z : grid) {
    const auto [w0, s0] = w_and_scale(z);
    const auto [w1, s1] = w_and_scale(z + c);
    mean += w0;
    report.max_residual = std::max(
        report.max_residual, std::abs(w0 - w1) / scale_max({s0, s1}));
    report.constant_residual =
        std::max(report.constant_residual, std::abs(w0 - target) / (1.0 + std::abs(target)));
  }
  if (!grid.empty()) mean /= static_cast<double>(grid.size());
  report.constant_value = mean;
  report.pass = report.degree_ok && report.max_residual <= tol &&
                report.constant_residual <= tol;
  return report;
}

WronskianReport wronskian_modified(const ChainSpec& spec,
                                   const TwistFactorization& fact,
                                   const QPolynomial& q_plus, const QPolynomial& q_minus,
                                   std::span<const Complex> grid, double tol) {
  WronskianReport report;
  report.kind = WronskianKind::Modified;
  report.grid.assign(grid.begin(), grid.end());
  report.degree_ok = q_plus.degree() == spec.total_twos() &&
                     q_minus.degree() == spec.total_twos();

  const Complex c = spec.c;
  const Complex ap = fact.alpha_plus(), am = fact.alpha_minus();
  auto w_and_scale = [&](Complex z) {
    const Complex t1 = ap * q_plus(z - c) * q_minus(z);
    const Complex t2 = am * q_plus(z) * q_minus(z - c);
    const Complex lam = aux_lambda(spec, z);
    return std::pair<Complex, double>{(t1 - t2) / lam,
                                      (std::abs(t1) + std::abs(t2)) / std::abs(lam)};
  };

  for (const Complex& z : grid) {
    const auto [w0, s0] = w_and_scale(z);
    const auto [w1, s1] = w_and_scale(z + c);
    const Complex rhs = fact.rho_sum() * (q_plus(z) - q_minus(z));
    report.max_residual =
        std::max(report.max_residual,
                 std::abs(w0 - w1 - rhs) / scale_max({s0, s1, std::abs(rhs)}));
  }
  report.pass = report.degree_ok && report.max_residual <= tol;
  return report;
}

WronskianReport wronskian_mixed(const ChainSpec& spec, const TwistFactorization& fact,
                                const QPolynomial& q, Complex alpha_plus,
                                Complex alpha_minus, const QPolynomial& q_cap_plus,
                                std::span<const Complex> grid, double tol) {
  WronskianReport report;
  report.kind = WronskianKind::Mixed;
  report.grid.assign(grid.begin(), grid.end());
  report.window_limited = true;
  report.degree_ok = q_cap_plus.degree() == spec.total_twos();

  if (std::abs(alpha_minus) < 1e-14 || std::abs(fact.twist.det()) < 1e-14) {
    throw DegenerateFactorization("mixed Wronskian needs an invertible twist");
  }
  const Complex ap_d = fact.alpha_plus();  // k_tilde - rho1
  const Complex am_d = fact.alpha_minus();  // k - rho2
  report.identity_residual =
      std::abs(alpha_plus * alpha_minus - ap_d * am_d) /
      (1.0 + std::abs(ap_d * am_d));
  if (report.identity_residual > 1e-6) {
    throw DegenerateFactorization(
        "twist eigenvalues do not match the factorization diagonal");
  }

  const Complex c = spec.c;
  const Complex beta = alpha_minus / ap_d;
  auto w_and_scale = [&](Complex z) {
    const Complex pre = principal_power(beta, z / c);
    const Complex t1 = alpha_plus * q(z - c) * q_cap_plus(z);
    const Complex t2 = ap_d * q(z) * q_cap_plus(z - c);
    const Complex lam = aux_lambda(spec, z);
    return std::pair<Complex, double>{
        pre * (t1 - t2) / lam,
        std::abs(pre) * (std::abs(t1) + std::abs(t2)) / std::abs(lam)};
  };

  for (const Complex& z : grid) {
    const auto [w0, s0] = w_and_scale(z);
    const auto [w1, s1] = w_and_scale(z + c);
    const Complex rhs = principal_power(beta, z / c) * fact.rho_sum() * q(z);
    report.max_residual =
        std::max(report.max_residual,
                 std::abs(w0 - w1 - rhs) / scale_max({s0, s1, std::abs(rhs)}));
  }
  report.pass = report.degree_ok && report.max_residual <= tol;
  return report;
}

std::pair<Complex, Complex> twist_eigenvalues(const Twist& twist) {
  const Complex tr = twist.k_tilde + twist.k;
  const Complex disc = std::sqrt(tr * tr - 4.0 * twist.det());
  Complex a = (tr + disc) / 2.0;
  Complex b = (tr - disc) / 2.0;
  if (complex_less(b, a)) std::swap(a, b);
  return {a, b};
}

UsualTqSolution solve_usual_tq(const ChainSpec& spec, const EigenvalueFn& lambda_big,
                               Complex a1, Complex a2, int max_degree, Rng& rng,
                               double fit_tol) {
  const Complex c = spec.c;
  const double radius = 1.5 + spec.max_abs_theta() + 2.0 * std::abs(c);

  auto equation_residual = [&](const QPolynomial& q, Complex ap, Complex am,
                               Complex z) {
    const auto [l1, l2] = lambda_weights(spec, z);
    const Complex lhs = lambda_big(z) * q(z);
    const Complex t1 = ap * l1 * q(z - c);
    const Complex t2 = am * l2 * q(z + c);
    return std::abs(lhs - t1 - t2) /
           scale_max({std::abs(lhs), std::abs(t1), std::abs(t2)});
  };

  for (int degree = 0; degree <= max_degree; ++degree) {
    for (int swap = 0; swap < 2; ++swap) {
      const Complex ap = (swap == 0) ? a1 : a2;
      const Complex am = (swap == 0) ? a2 : a1;

      QPolynomial q;
      q.c = c;
      if (degree > 0) {
        // Collocate the monic polynomial qt(z) = z^deg + sum b_k z^k; the
        // c^{-deg} prefactor cancels from the homogeneous equation.
        const int n_nodes = 2 * (spec.n_sites() + degree) + 5;
        Matrix g(n_nodes, degree);
        Vector rhs(n_nodes);
        Rng node_rng = rng.child(1000 + static_cast<std::uint64_t>(2 * degree + swap));
        for (int row = 0; row < n_nodes; ++row) {
          const Complex z = node_rng.annulus(0.3 * radius, radius);
          const auto [l1, l2] = lambda_weights(spec, z);
          const Complex lam = lambda_big(z);
          Complex zm{1.0, 0.0}, z0{1.0, 0.0}, zp{1.0, 0.0};
          for (int k = 0; k < degree; ++k) {
            g(row, k) = lam * z0 - ap * l1 * zm - am * l2 * zp;
            zm *= z - c;
            z0 *= z;
            zp *= z + c;
          }
          rhs(row) = -(lam * z0 - ap * l1 * zm - am * l2 * zp);
        }
        const Vector coeffs = g.colPivHouseholderQr().solve(rhs);
        if (!coeffs.allFinite()) continue;
        std::vector<Complex> low(static_cast<std::size_t>(degree));
        for (int k = 0; k < degree; ++k) low[static_cast<std::size_t>(k)] = coeffs(k);
        q.roots = monic_roots(low);
      }

      Rng check_rng = rng.child(2000 + static_cast<std::uint64_t>(2 * degree + swap));
      double worst = 0.0;
      for (int v = 0; v < 12; ++v) {
        const Complex z = check_rng.annulus(0.3 * radius, radius);
        worst = std::max(worst, equation_residual(q, ap, am, z));
      }
      if (worst <= fit_tol) {
        UsualTqSolution solution;
        solution.q = std::move(q);
        solution.alpha_plus = ap;
        solution.alpha_minus = am;
        solution.residual = worst;
        return solution;
      }
    }
  }
  throw PairingFailure("no polynomial q satisfies the usual T-Q equation up to degree " +
                       std::to_string(max_degree));
}

EigenvaluePairing pair_by_eigenvalue(const std::vector<std::vector<Complex>>& a,
                                     const std::vector<std::vector<Complex>>& b,
                                     double tol) {
  EigenvaluePairing out;
  std::vector<bool> a_used(a.size(), false), b_used(b.size(), false);
  const std::size_t rounds = std::min(a.size(), b.size());
  for (std::size_t round = 0; round < rounds; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a_used[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b_used[j] || b[j].size() != a[i].size()) continue;
        double d = 0.0;
        for (std::size_t k = 0; k < a[i].size(); ++k) {
          d = std::max(d, std::abs(a[i][k] - b[j][k]) / (1.0 + std::abs(a[i][k])));
        }
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (!std::isfinite(best) || best > tol) break;
    a_used[bi] = true;
    b_used[bj] = true;
    out.pairs.emplace_back(static_cast<int>(bi), static_cast<int>(bj));
    out.max_distance = std::max(out.max_distance, best);
  }
  return out;
}

}  // namespace twistchain
