#include "twistchain/sov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <unsupported/Eigen/MatrixFunctions>

#include "twistchain/kernels.hpp"

namespace twistchain {

namespace {

Complex sinhc(Complex r) {
  if (std::abs(r) < 1e-4) {
    const Complex r2 = r * r;
    return 1.0 + r2 / 6.0 + r2 * r2 / 120.0;
  }
  return std::sinh(r) / r;
}

}  // namespace

Matrix2 exp2_traceless(const Matrix2& x) {
  const Complex r = std::sqrt(x(0, 0) * x(0, 0) + x(0, 1) * x(1, 0));
  return std::cosh(r) * Matrix2::Identity() + sinhc(r) * x;
}

std::array<Complex, 4> exponential_params(const Matrix2& m) {
  const Complex det = m.determinant();
  if (std::abs(det) < 1e-14) {
    throw LogBranchFailure("exponential matching needs an invertible matrix");
  }
  Complex a0 = std::sqrt(det);  // principal branch: Re a0 >= 0
  Matrix2 unit = m / a0;
  Complex t = unit.trace() / 2.0;
  if (std::abs(t + 1.0) < 1e-12) {
    // log has its branch cut at -1; absorb the sign in a0 instead.
    a0 = -a0;
    unit = -unit;
    t = -t;
  }

  const Complex disc = std::sqrt(t * t - 1.0);
  Complex m_big = t + disc;
  if (std::abs(m_big) < std::abs(t - disc)) m_big = t - disc;
  const Complex x = std::log(m_big);
  const Complex s = std::sinh(x);

  Matrix2 gen;
  if (std::abs(s) >= 1e-8) {
    gen = (x / s) * (unit - t * Matrix2::Identity());
  } else {
    // t ~ 1: unit is I + N with N nilpotent, and log(I + N) = N.
    gen = unit - Matrix2::Identity();
  }

  const Matrix2 rebuilt = a0 * exp2_traceless(gen);
  const double err = (rebuilt - m).cwiseAbs().maxCoeff() /
                     std::max(m.cwiseAbs().maxCoeff(), 1e-300);
  if (err > 1e-10) {
    throw LogBranchFailure("principal-branch exponential matching failed");
  }
  return {a0, gen(0, 1), gen(1, 0), gen(0, 0)};
}

void require_generic_thetas(const ChainSpec& spec, double tol) {
  int max_twos = 0;
  for (int t : spec.twos) max_twos = std::max(max_twos, t);
  const int span = 2 * max_twos;
  for (int i = 0; i < spec.n_sites(); ++i) {
    for (int j = 0; j < spec.n_sites(); ++j) {
      if (i == j) continue;
      for (int m = -span; m <= span; ++m) {
        const Complex diff = spec.thetas[static_cast<std::size_t>(i)] -
                             spec.thetas[static_cast<std::size_t>(j)] +
                             static_cast<double>(m) * spec.c;
        if (std::abs(diff) < tol) {
          throw NonGenericTheta("inhomogeneities collide modulo c-shifts (sites " +
                                std::to_string(i) + ", " + std::to_string(j) + ")");
        }
      }
    }
  }
}

namespace {

/// The per-site group element a0 exp(a+ S+ + a- S- + 2 a3 S3) in the spin
/// representation of the site.
Matrix site_group_element(const SpinRep& rep, const std::array<Complex, 4>& params) {
  const Matrix gen =
      params[1] * rep.sp + params[2] * rep.sm + 2.0 * params[3] * rep.sz;
  return params[0] * gen.exp();
}

SovBasis build_with(const ChainSpec& spec, const TwistFactorization& fact) {
  SovBasis basis;
  basis.fact = fact;
  basis.dim = spec.dim();
  basis.a_site = fact.a;
  basis.a_params = exponential_params(fact.a);

  // |y> = A_1^{-1} ... A_N^{-1} |0^>; the embedded factors commute.
  auto [up, down] = weight_vectors(spec);
  (void)up;
  Vector y = down;
  for (int site = 0; site < spec.n_sites(); ++site) {
    const SpinRep rep = spin_rep(spec.twos[static_cast<std::size_t>(site)]);
    const Matrix local = site_group_element(rep, basis.a_params);
    y = embed_site(spec, site, local.inverse()) * y;
  }
  basis.y = y;

  // Mixed-radix label enumeration, site 0 most significant.
  const int n = spec.n_sites();
  std::vector<int> radix(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    radix[static_cast<std::size_t>(i)] = spec.twos[static_cast<std::size_t>(i)] + 1;
  }
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(n), 1);
  for (int i = n - 2; i >= 0; --i) {
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i + 1)] * radix[static_cast<std::size_t>(i + 1)];
  }

  basis.labels.assign(static_cast<std::size_t>(basis.dim), {});
  basis.vectors.resize(basis.dim, basis.dim);
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  // nu22 at the site lattice points, built once per point.
  std::vector<std::vector<Matrix>> ladder(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto lattice = site_lattice(spec, i);
    ladder[static_cast<std::size_t>(i)].reserve(lattice.size());
    for (const Complex& point : lattice) {
      ladder[static_cast<std::size_t>(i)].push_back(
          nu_entry(spec, fact, 2, 2, point));
    }
  }

  for (Eigen::Index idx = 0; idx < basis.dim; ++idx) {
    basis.labels[static_cast<std::size_t>(idx)] = label;
    if (idx == 0) {
      basis.vectors.col(0) = y;
    } else {
      int site = n - 1;
      while (label[static_cast<std::size_t>(site)] == 0) --site;
      const int j = label[static_cast<std::size_t>(site)];  // 1-based rung
      const Eigen::Index pred = idx - stride[static_cast<std::size_t>(site)];
      basis.vectors.col(idx) =
          ladder[static_cast<std::size_t>(site)][static_cast<std::size_t>(j - 1)] *
          basis.vectors.col(pred);
    }
    if (basis.vectors.col(idx).norm() < 1e-150) {
      throw DegenerateVector("separated basis vector collapsed to zero");
    }
    // advance mixed-radix counter
    for (int i = n - 1; i >= 0; --i) {
      if (++label[static_cast<std::size_t>(i)] < radix[static_cast<std::size_t>(i)]) break;
      label[static_cast<std::size_t>(i)] = 0;
    }
  }

  Eigen::ColPivHouseholderQR<Matrix> qr(basis.vectors);
  const auto diag = qr.matrixR().diagonal().cwiseAbs();
  basis.rank_ratio = diag.minCoeff() / std::max(diag.maxCoeff(), 1e-300);
  if (qr.rank() < basis.dim) {
    throw DegenerateVector("separated basis matrix is rank-deficient");
  }
  return basis;
}

}  // namespace

SovBasis build_sov_basis(const ChainSpec& spec, const TwistFactorization& fact) {
  require_generic_thetas(spec);
  const Matrix2 ab = fact.a * fact.b;
  const double ab_scale = ab.cwiseAbs().maxCoeff();
  if (ab.cwiseAbs().minCoeff() < 1e-10 * ab_scale) {
    throw DegenerateFactorization("separated basis needs AB with nonzero entries");
  }

  try {
    return build_with(spec, fact);
  } catch (const LogBranchFailure&) {
    // Retry within the residual diagonal gauge freedom A -> C^{-1} A.
    const Complex gammas[] = {{0.3, 0.7}, {1.7, -0.4}, {0.5, 1.1}};
    for (const Complex& gamma : gammas) {
      try {
        return build_with(spec, gauge_factorization(fact, {1.0, 0.0}, gamma));
      } catch (const LogBranchFailure&) {
        continue;
      }
    }
    throw;
  }
}

Complex lambda12(const ChainSpec& spec, std::span<const int> label, Complex z) {
  const Complex c = spec.c;
  Complex value{1.0, 0.0};
  for (int i = 0; i < spec.n_sites(); ++i) {
    const auto lattice = site_lattice(spec, i);
    const int k = label[static_cast<std::size_t>(i)];
    for (int j = 1; j <= spec.twos[static_cast<std::size_t>(i)]; ++j) {
      const Complex point = lattice[static_cast<std::size_t>(j - 1)];
      value *= (j <= k) ? kernel_h(z - c, point, c) : kernel_h(z, point, c);
    }
  }
  return value;
}

Complex sov_safe_z(const ChainSpec& spec, Rng& rng) {
  const double radius =
      1.0 + spec.max_abs_theta() + std::abs(spec.c) * (0.5 * spec.total_twos() + 1.0);
  const double clearance = 0.05 * (1.0 + spec.max_abs_theta());
  for (int attempt = 0; attempt < 400; ++attempt) {
    const Complex z = rng.annulus(0.2 * radius, 1.3 * radius);
    bool clear = true;
    for (int i = 0; i < spec.n_sites() && clear; ++i) {
      for (const Complex& point : site_lattice(spec, i)) {
        if (std::abs(z - point) < clearance ||
            std::abs(z - (point - spec.c)) < clearance) {
          clear = false;
          break;
        }
      }
    }
    if (clear) return z;
  }
  throw NonGenericTheta("no z sample clear of the separated lattice");
}

SovReport check_sov_spectrum(const ChainSpec& spec, const TwistFactorization& fact,
                             std::span<const Complex> zs) {
  const SovBasis basis = build_sov_basis(spec, fact);
  return check_sov_spectrum(spec, basis, zs);
}

SovReport check_sov_spectrum(const ChainSpec& spec, const SovBasis& basis,
                             std::span<const Complex> zs) {
  SovReport report;
  const TwistFactorization& fact = basis.fact;
  const Complex c = spec.c;
  const Eigen::Index dim = basis.dim;
  const Matrix2 ab = fact.a * fact.b;
  const Complex c_eig = ab(0, 1);  // equals mu (rho1 + rho2) / k_minus

  report.min_gap = std::numeric_limits<double>::infinity();

  for (const Complex& z : zs) {
    const Matrix nu12 = nu_entry(spec, fact, 1, 2, z);
    const double nu_scale = nu12.cwiseAbs().maxCoeff();
    const auto [l1, l2] = lambda_weights(spec, z);
    (void)l1;

    // Reference-vector action.
    const double vac = (nu12 * basis.y - c_eig * l2 * basis.y).norm() /
                       (nu_scale * basis.y.norm());
    report.vacuum_residual = std::max(report.vacuum_residual, vac);

    const Complex fz = big_f(spec, z);
    std::vector<Complex> denominators(static_cast<std::size_t>(dim));
    std::vector<Complex> formula(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Complex denom = lambda12(spec, basis.labels[static_cast<std::size_t>(k)], z);
      if (std::abs(denom) < 1e-12) {
        throw PoleAtRoot("z sample hits a zero of Lambda12");
      }
      denominators[static_cast<std::size_t>(k)] = denom;
      formula[static_cast<std::size_t>(k)] = c_eig * fz / denom;
    }

    // Eigen-relations and the inverse action
    // F(z) nu12(z)^{-1} |Y(k)> = (1/c_eig) Lambda12(z,k) |Y(k)>.
    Eigen::PartialPivLU<Matrix> lu(nu12);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Vector& yk = basis.vectors.col(k);
      const Complex lam = formula[static_cast<std::size_t>(k)];
      const double res = (nu12 * yk - lam * yk).norm() / (nu_scale * yk.norm());
      report.eigen_residual = std::max(report.eigen_residual, res);

      const Vector lhs = fz * lu.solve(yk);
      const Vector rhs =
          (denominators[static_cast<std::size_t>(k)] / c_eig) * yk;
      const double inv_res = (lhs - rhs).norm() / std::max(lhs.norm(), rhs.norm());
      report.inverse_residual = std::max(report.inverse_residual, inv_res);
    }

    // Pairwise distinctness of the formula eigenvalues.
    for (Eigen::Index a = 0; a < dim; ++a) {
      for (Eigen::Index b = a + 1; b < dim; ++b) {
        const Complex ea = formula[static_cast<std::size_t>(a)];
        const Complex eb = formula[static_cast<std::size_t>(b)];
        const double gap =
            std::abs(ea - eb) / (1.0 + std::max(std::abs(ea), std::abs(eb)));
        report.min_gap = std::min(report.min_gap, gap);
      }
    }

    // Dense diagonalization must reproduce the same multiset.
    Eigen::ComplexEigenSolver<Matrix> es(nu12, /*computeEigenvectors=*/false);
    std::vector<bool> used(static_cast<std::size_t>(dim), false);
    double worst = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Complex lam = formula[static_cast<std::size_t>(k)];
      double best = std::numeric_limits<double>::infinity();
      Eigen::Index bj = -1;
      for (Eigen::Index j = 0; j < dim; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double d = std::abs(lam - es.eigenvalues()(j)) / (1.0 + std::abs(lam));
        if (d < best) {
          best = d;
          bj = j;
        }
      }
      used[static_cast<std::size_t>(bj)] = true;
      worst = std::max(worst, best);
    }
    report.diag_match = std::max(report.diag_match, worst);
  }

  // Overlap formula: <0^| A_1 ... A_N |Y(k)> = prod (AB)_22 lambda1(theta_ij).
  auto [up, down] = weight_vectors(spec);
  (void)up;
  Vector bra = down;
  for (int site = 0; site < spec.n_sites(); ++site) {
    const SpinRep rep = spin_rep(spec.twos[static_cast<std::size_t>(site)]);
    const Matrix local = basis.a_params[0] * (basis.a_params[1] * rep.sp +
                                              basis.a_params[2] * rep.sm +
                                              2.0 * basis.a_params[3] * rep.sz)
                                                 .exp();
    bra = embed_site(spec, site, local).transpose() * bra;
  }
  for (Eigen::Index k = 0; k < dim; ++k) {
    const Complex measured = bra.transpose() * basis.vectors.col(k);
    Complex predicted{1.0, 0.0};
    const auto& label = basis.labels[static_cast<std::size_t>(k)];
    for (int i = 0; i < spec.n_sites(); ++i) {
      const auto lattice = site_lattice(spec, i);
      for (int j = 1; j <= label[static_cast<std::size_t>(i)]; ++j) {
        const auto [w1, w2] = lambda_weights(spec, lattice[static_cast<std::size_t>(j - 1)]);
        (void)w2;
        predicted *= ab(1, 1) * w1;
      }
    }
    report.overlap_residual =
        std::max(report.overlap_residual, Residual::compare(measured, predicted).rel);
  }

  // Large-z leading behaviour: (1/c_eig) Lambda12(z) ~ (1/Tr V12)(z/c)^S with
  // Tr V12 = c_eig, so Lambda12(z)/(z/c)^S -> 1.
  {
    const double big = 1e5 * (1.0 + spec.max_abs_theta() + std::abs(c));
    const Complex z_big = big * Complex{0.9313, 0.3642};
    Complex zs_pow{1.0, 0.0};
    for (int k = 0; k < spec.total_twos(); ++k) zs_pow *= z_big / c;
    for (Eigen::Index k = 0; k < dim; ++k) {
      const Complex ratio =
          lambda12(spec, basis.labels[static_cast<std::size_t>(k)], z_big) / zs_pow;
      report.leading_residual =
          std::max(report.leading_residual, std::abs(ratio - 1.0));
    }
  }

  report.distinct = report.min_gap > 1e-8;
  report.pass = report.vacuum_residual <= 1e-10 && report.eigen_residual <= 1e-8 &&
                report.inverse_residual <= 1e-8 && report.overlap_residual <= 1e-9 &&
                report.diag_match <= 1e-8 && report.distinct &&
                report.leading_residual <= 1e-3;
  return report;
}

double null_twist_min_gap(const ChainSpec& spec, const Matrix2& v,
                          std::span<const Complex> zs) {
  if (std::abs(v.trace()) < 1e-14) {
    throw TraceZero("null twist with zero trace has no simple spectrum claim");
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (const Complex& z : zs) {
    const Matrix t = null_transfer(spec, v, z);
    Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/false);
    for (Eigen::Index a = 0; a < es.eigenvalues().size(); ++a) {
      for (Eigen::Index b = a + 1; b < es.eigenvalues().size(); ++b) {
        const Complex ea = es.eigenvalues()(a), eb = es.eigenvalues()(b);
        min_gap = std::min(min_gap, std::abs(ea - eb) /
                                        (1.0 + std::max(std::abs(ea), std::abs(eb))));
      }
    }
  }
  return min_gap;
}

}  // namespace twistchain
