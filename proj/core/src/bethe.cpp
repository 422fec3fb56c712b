#include "twistchain/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>

#include "twistchain/kernels.hpp"
#include "twistchain/poly.hpp"

namespace twistchain {

namespace {

bool complex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

std::vector<Complex> canonical_roots(std::span<const Complex> roots) {
  std::vector<Complex> out(roots.begin(), roots.end());
  std::sort(out.begin(), out.end(), complex_less);
  return out;
}

Complex pow_int(Complex base, int n) {
  Complex p{1.0, 0.0};
  for (int i = 0; i < n; ++i) p *= base;
  return p;
}

RootPoly weight_poly(const ChainSpec& spec, int which) {
  RootPoly p;
  p.roots = (which == 1) ? lambda1_roots(spec) : lambda2_roots(spec);
  p.scale = Complex{1.0, 0.0} / pow_int(spec.c, spec.n_sites());
  return p;
}

RootPoly big_f_poly(const ChainSpec& spec) {
  RootPoly p;
  p.roots = big_f_roots(spec);
  p.scale = Complex{1.0, 0.0} / pow_int(spec.c, static_cast<int>(p.roots.size()));
  return p;
}

double root_scale(std::span<const Complex> roots) {
  double m = 0.0;
  for (const Complex& r : roots) m = std::max(m, std::abs(r));
  return 1.0 + m;
}

void guard_distinct(std::span<const Complex> roots, double tol) {
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (std::abs(roots[i] - roots[j]) <= tol) {
        throw PoleAtRoot("coincident Bethe roots");
      }
    }
  }
}

void guard_count(const BetheProblem& problem, std::size_t count) {
  if (is_modified(problem.mode) &&
      count != static_cast<std::size_t>(problem.spec.total_twos())) {
    throw std::invalid_argument("modified modes require #roots = S");
  }
}

}  // namespace

bool is_modified(BetheMode mode) {
  return mode == BetheMode::ModifiedUp || mode == BetheMode::ModifiedDown;
}

bool is_up(BetheMode mode) {
  return mode == BetheMode::DiagonalUp || mode == BetheMode::ModifiedUp;
}

const char* mode_name(BetheMode mode) {
  switch (mode) {
    case BetheMode::DiagonalUp: return "diagonal-up";
    case BetheMode::DiagonalDown: return "diagonal-down";
    case BetheMode::ModifiedUp: return "modified-up";
    case BetheMode::ModifiedDown: return "modified-down";
  }
  return "?";
}

std::optional<BetheMode> parse_mode(std::string_view name) {
  std::string key(name);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "diagonal-up") return BetheMode::DiagonalUp;
  if (key == "diagonal-down") return BetheMode::DiagonalDown;
  if (key == "modified-up") return BetheMode::ModifiedUp;
  if (key == "modified-down") return BetheMode::ModifiedDown;
  return std::nullopt;
}

Complex BetheProblem::c1() const {
  switch (mode) {
    case BetheMode::DiagonalUp: return twist.k_tilde;
    case BetheMode::DiagonalDown: return twist.k;
    case BetheMode::ModifiedUp: return fact->alpha_plus();
    case BetheMode::ModifiedDown: return fact->alpha_minus();
  }
  return {};
}

Complex BetheProblem::c2() const {
  switch (mode) {
    case BetheMode::DiagonalUp: return twist.k;
    case BetheMode::DiagonalDown: return twist.k_tilde;
    case BetheMode::ModifiedUp: return fact->alpha_minus();
    case BetheMode::ModifiedDown: return fact->alpha_plus();
  }
  return {};
}

Complex BetheProblem::c_rho() const {
  return is_modified(mode) ? fact->rho_sum() : Complex{0.0, 0.0};
}

int BetheProblem::root_count(int m) const {
  if (is_modified(mode)) return spec.total_twos();
  if (m < 0 || m > spec.total_twos()) {
    throw std::invalid_argument("diagonal modes require 0 <= M <= S");
  }
  return m;
}

BetheProblem diagonal_problem(const ChainSpec& spec, const Twist& twist,
                              BetheMode mode) {
  if (is_modified(mode)) {
    throw std::invalid_argument("diagonal_problem expects a diagonal mode");
  }
  if (!twist.diagonal()) {
    throw std::invalid_argument("diagonal modes need a diagonal twist");
  }
  BetheProblem p;
  p.spec = spec;
  p.mode = mode;
  p.twist = twist;
  return p;
}

BetheProblem modified_problem(const ChainSpec& spec, const TwistFactorization& fact,
                              BetheMode mode) {
  if (!is_modified(mode)) {
    throw std::invalid_argument("modified_problem expects a modified mode");
  }
  BetheProblem p;
  p.spec = spec;
  p.mode = mode;
  p.twist = fact.twist;
  p.fact = fact;
  return p;
}

Vector bethe_vacuum(const BetheProblem& problem) {
  auto [up, down] = weight_vectors(problem.spec);
  return is_up(problem.mode) ? up : down;
}

Matrix creation_matrix(const BetheProblem& problem, Complex u) {
  switch (problem.mode) {
    case BetheMode::DiagonalUp: return monodromy(problem.spec, u).entry(1, 2);
    case BetheMode::DiagonalDown: return monodromy(problem.spec, u).entry(2, 1);
    case BetheMode::ModifiedUp: return nu_entry(problem.spec, *problem.fact, 1, 2, u);
    case BetheMode::ModifiedDown: return nu_entry(problem.spec, *problem.fact, 2, 1, u);
  }
  return {};
}

Matrix transfer_matrix(const BetheProblem& problem, Complex z) {
  return transfer(problem.spec, problem.twist, z);
}

Vector bethe_vector(const BetheProblem& problem, std::span<const Complex> roots) {
  guard_count(problem, roots.size());
  const auto sorted = canonical_roots(roots);
  Vector w = bethe_vacuum(problem);
  for (const Complex& r : sorted) {
    w = creation_matrix(problem, r) * w;
  }
  if (!w.allFinite() || w.norm() < 1e-150) {
    throw DegenerateVector("Bethe vector is numerically zero");
  }
  return w;
}

Complex eigenvalue_fn(const BetheProblem& problem, Complex z,
                      std::span<const Complex> roots) {
  guard_count(problem, roots.size());
  const Complex c = problem.spec.c;
  for (const Complex& r : roots) {
    if (std::abs(z - r) <= 1e-12 * (1.0 + std::abs(r))) {
      throw PoleAtRoot("eigenvalue function evaluated at a Bethe root");
    }
  }
  const auto [l1, l2] = lambda_weights(problem.spec, z);
  Complex value = problem.c1() * l1 * f_set_left(roots, z, c) +
                  problem.c2() * l2 * f_set_right(z, roots, c);
  const Complex crho = problem.c_rho();
  if (crho != Complex{0.0, 0.0}) {
    value += crho * big_f(problem.spec, z) * g_set_right(z, roots, c);
  }
  return value;
}

Complex bethe_residual(const BetheProblem& problem, std::span<const Complex> roots,
                       int i) {
  return bethe_residuals(problem, roots)(i);
}

Eigen::VectorXcd bethe_residuals(const BetheProblem& problem,
                                 std::span<const Complex> roots) {
  guard_count(problem, roots.size());
  const Complex c = problem.spec.c;
  guard_distinct(roots, 1e-14 * root_scale(roots));
  const auto n = static_cast<Eigen::Index>(roots.size());
  const RootPoly l1 = weight_poly(problem.spec, 1);
  const RootPoly l2 = weight_poly(problem.spec, 2);
  const RootPoly bigf = big_f_poly(problem.spec);
  const Complex c1 = problem.c1(), c2 = problem.c2(), crho = problem.c_rho();

  Eigen::VectorXcd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const Complex ui = roots[si];
    Complex value = c2 * l2.eval(ui) * f_set_right_skip(ui, roots, si, c) -
                    c1 * l1.eval(ui) * f_set_left_skip(roots, si, ui, c);
    if (crho != Complex{0.0, 0.0}) {
      value += crho * bigf.eval(ui) * g_set_right_skip(ui, roots, si, c);
    }
    e(i) = value;
  }
  return e;
}

Eigen::MatrixXcd bethe_jacobian(const BetheProblem& problem,
                                std::span<const Complex> roots) {
  guard_count(problem, roots.size());
  const Complex c = problem.spec.c;
  guard_distinct(roots, 1e-14 * root_scale(roots));
  const auto n = static_cast<Eigen::Index>(roots.size());
  const RootPoly l1 = weight_poly(problem.spec, 1);
  const RootPoly l2 = weight_poly(problem.spec, 2);
  const RootPoly bigf = big_f_poly(problem.spec);
  const Complex c1 = problem.c1(), c2 = problem.c2(), crho = problem.c_rho();
  const bool inhom = crho != Complex{0.0, 0.0};

  // E_i = c2 l2(u_i) A_i - c1 l1(u_i) B_i + crho F(u_i) C_i with
  //   A_i = prod_{j != i} f(u_i, u_j),  B_i = prod f(u_j, u_i),
  //   C_i = prod g(u_i, u_j).
  // Every factor derivative is +-c/(u_i - u_k)^2 on the remaining skip
  // product, assembled without divisions.
  Eigen::MatrixXcd jac(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::size_t si = static_cast<std::size_t>(i);
    const Complex ui = roots[si];
    const Complex a_i = f_set_right_skip(ui, roots, si, c);
    const Complex b_i = f_set_left_skip(roots, si, ui, c);
    const Complex c_i = inhom ? g_set_right_skip(ui, roots, si, c) : Complex{};

    Complex da_dui = 0.0, db_dui = 0.0, dc_dui = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == i) continue;
      const std::size_t sk = static_cast<std::size_t>(k);
      const Complex uk = roots[sk];
      const Complex dik = ui - uk;
      const Complex slope = c / (dik * dik);

      Complex a_skip{1.0, 0.0}, b_skip{1.0, 0.0}, c_skip{1.0, 0.0};
      for (Eigen::Index l = 0; l < n; ++l) {
        if (l == i || l == k) continue;
        const Complex ul = roots[static_cast<std::size_t>(l)];
        a_skip *= kernel_f(ui, ul, c);
        b_skip *= kernel_f(ul, ui, c);
        if (inhom) c_skip *= kernel_g(ui, ul, c);
      }
      da_dui += -slope * a_skip;
      db_dui += slope * b_skip;
      if (inhom) dc_dui += -slope * c_skip;

      Complex off = c2 * l2.eval(ui) * (slope * a_skip) -
                    c1 * l1.eval(ui) * (-slope * b_skip);
      if (inhom) off += crho * bigf.eval(ui) * (slope * c_skip);
      jac(i, k) = off;
    }

    Complex diag = c2 * (l2.deriv(ui) * a_i + l2.eval(ui) * da_dui) -
                   c1 * (l1.deriv(ui) * b_i + l1.eval(ui) * db_dui);
    if (inhom) diag += crho * (bigf.deriv(ui) * c_i + bigf.eval(ui) * dc_dui);
    jac(i, i) = diag;
  }
  return jac;
}

namespace {

double sup_norm(const Eigen::VectorXcd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

/// Sup-norm of E, infinity when the evaluation point is inadmissible.
double residual_at(const BetheProblem& problem, const std::vector<Complex>& roots) {
  try {
    const Eigen::VectorXcd e = bethe_residuals(problem, roots);
    if (!e.allFinite()) return std::numeric_limits<double>::infinity();
    return sup_norm(e);
  } catch (const PoleAtRoot&) {
    return std::numeric_limits<double>::infinity();
  }
}

/// Optimal-assignment sup distance between two root sets of equal size
/// (exact for the small systems handled here).
double assignment_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  const std::size_t n = a.size();
  if (n != b.size()) return std::numeric_limits<double>::infinity();
  if (n == 0) return 0.0;
  if (n <= 8) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    double best = std::numeric_limits<double>::infinity();
    do {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        d = std::max(d, std::abs(a[i] - b[perm[i]]));
      }
      best = std::min(best, d);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  const auto sa = canonical_roots(a);
  const auto sb = canonical_roots(b);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(sa[i] - sb[i]));
  return d;
}

std::vector<Complex> seed_roots(const BetheProblem& problem, int n, Rng& rng,
                                const SolveOptions& options, int start_index) {
  const ChainSpec& spec = problem.spec;
  if (!options.hints.empty() && start_index % 2 == 1) {
    const auto& hint =
        options.hints[static_cast<std::size_t>(start_index / 2) % options.hints.size()];
    if (static_cast<int>(hint.size()) == n) {
      std::vector<Complex> out(hint);
      const double jitter = 0.05 * std::abs(spec.c);
      for (Complex& r : out) r += jitter * rng.normal_complex();
      return out;
    }
  }
  std::vector<Complex> out(static_cast<std::size_t>(n));
  const double base_radius =
      1.0 + spec.max_abs_theta() + std::abs(spec.c) * spec.total_twos();
  // Cycle through seed styles: site-centred clouds, a per-root mix, and a
  // wide annulus of randomized radius; solutions live both near the
  // inhomogeneity lattice and far outside it.
  const int style = start_index % 4;
  for (int k = 0; k < n; ++k) {
    const bool wide = style == 3 || (style == 2 && rng.uniform() < 0.5);
    if (wide) {
      const double radius = base_radius * (0.3 + 2.2 * rng.uniform());
      out[static_cast<std::size_t>(k)] = rng.annulus(0.0, radius);
    } else {
      const int site = static_cast<int>(rng.next_u64() % spec.n_sites());
      const double spread =
          std::abs(spec.c) * (0.5 * spec.twos[static_cast<std::size_t>(site)] + 1.0);
      out[static_cast<std::size_t>(k)] =
          spec.thetas[static_cast<std::size_t>(site)] + spread * rng.normal_complex();
    }
  }
  return out;
}

}  // namespace

SolveResult solve_bethe(const BetheProblem& problem, int m, const SolveOptions& options) {
  const int n = problem.root_count(m);
  SolveResult out;
  if (n == 0) {
    BetheRootSet empty;
    empty.on_shell = true;
    out.sets.push_back(std::move(empty));
    out.converged = 1;
    return out;
  }

  const Rng base(options.seed);
  double best_failed = std::numeric_limits<double>::infinity();
  std::vector<std::vector<Complex>> found;

  for (int start = 0; start < options.starts; ++start) {
    ++out.starts;
    Rng rng = base.child(static_cast<std::uint64_t>(start));
    std::vector<Complex> r = seed_roots(problem, n, rng, options, start);
    double res = residual_at(problem, r);
    bool converged = false;

    for (int iter = 0; iter < options.max_iter; ++iter) {
      if (res <= options.newton_tol) {
        converged = true;
        break;
      }
      if (!std::isfinite(res)) break;
      Eigen::VectorXcd e;
      Eigen::MatrixXcd jac;
      try {
        e = bethe_residuals(problem, r);
        jac = bethe_jacobian(problem, r);
      } catch (const PoleAtRoot&) {
        break;
      }
      const Eigen::VectorXcd step = jac.partialPivLu().solve(e);
      if (!step.allFinite()) break;  // singular Jacobian: abandon this start

      double alpha = 1.0;
      bool accepted = false;
      for (int halving = 0; halving < 30; ++halving) {
        std::vector<Complex> cand = r;
        for (int k = 0; k < n; ++k) {
          cand[static_cast<std::size_t>(k)] -= alpha * step(k);
        }
        const double cand_res = residual_at(problem, cand);
        if (cand_res < res) {
          r = std::move(cand);
          res = cand_res;
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) break;  // damping stalled
    }
    if (res <= options.newton_tol) converged = true;

    if (!converged) {
      best_failed = std::min(best_failed, res);
      continue;
    }

    // Admissibility: roots must stay pairwise separated (poles of f/g) and
    // off the exact-string locus u_i - u_j = +-c, where E vanishes through
    // zero f-factors without the vector being an eigenvector.
    const Complex c = problem.spec.c;
    const double sep = options.admissibility_tol * root_scale(r);
    bool admissible = true;
    for (int i = 0; i < n && admissible; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Complex d =
            r[static_cast<std::size_t>(i)] - r[static_cast<std::size_t>(j)];
        if (std::abs(d) < sep || std::abs(d - c) < sep || std::abs(d + c) < sep) {
          admissible = false;
          break;
        }
      }
    }
    if (!admissible) continue;

    ++out.converged;
    const auto sorted = canonical_roots(r);
    bool duplicate = false;
    for (const auto& prev : found) {
      if (assignment_distance(prev, sorted) < options.dedup_tol * root_scale(sorted)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) found.push_back(sorted);
  }

  if (out.converged == 0) {
    out.best_failed_residual = std::isfinite(best_failed) ? best_failed : -1.0;
    throw NoConvergence("no Newton start converged (best sup-norm residual " +
                        std::to_string(out.best_failed_residual) + ")");
  }
  out.best_failed_residual = std::isfinite(best_failed) ? best_failed : 0.0;

  std::sort(found.begin(), found.end(),
            [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
              for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] != b[i]) return complex_less(a[i], b[i]);
              }
              return false;
            });

  for (auto& roots : found) {
    BetheRootSet set;
    set.roots = std::move(roots);
    const Eigen::VectorXcd e = bethe_residuals(problem, set.roots);
    set.residuals.resize(set.roots.size());
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      set.residuals[static_cast<std::size_t>(i)] = std::abs(e(i));
    }
    set.max_residual = sup_norm(e);
    set.on_shell = set.max_residual <= options.onshell_tol;
    out.sets.push_back(std::move(set));
  }
  return out;
}

OnshellReport check_onshell(const BetheProblem& problem, std::span<const Complex> roots,
                            Rng& rng, int n_z, double onshell_tol) {
  OnshellReport report;
  const ChainSpec& spec = problem.spec;
  const Complex c = spec.c;
  const Vector w = bethe_vector(problem, roots);
  const double wnorm = w.norm();

  Eigen::VectorXcd e(0);
  if (!roots.empty()) e = bethe_residuals(problem, roots);
  report.max_bethe_residual = sup_norm(e);
  report.on_shell = report.max_bethe_residual <= onshell_tol;

  const double radius =
      1.0 + spec.max_abs_theta() + std::abs(c) * (0.5 * spec.total_twos() + 1.0);
  for (int s = 0; s < n_z; ++s) {
    Complex z;
    int attempts = 0;
    do {
      z = rng.annulus(0.15 * radius, 1.25 * radius);
      ++attempts;
      bool clear = true;
      for (const Complex& r : roots) {
        if (std::abs(z - r) < 1e-3 * radius) {
          clear = false;
          break;
        }
      }
      if (clear) break;
    } while (attempts < 100);
    report.z_samples.push_back(z);

    const Matrix t = transfer_matrix(problem, z);
    const Vector lhs = t * w;
    const Complex lambda = eigenvalue_fn(problem, z, roots);
    Vector rhs = lambda * w;
    double scale = std::max(lhs.cwiseAbs().maxCoeff(),
                            std::abs(lambda) * w.cwiseAbs().maxCoeff());

    for (std::size_t i = 0; i < roots.size(); ++i) {
      const Complex coeff = kernel_g(roots[i], z, c) * e(static_cast<Eigen::Index>(i));
      std::vector<Complex> swapped(roots.begin(), roots.end());
      swapped[i] = z;
      const Vector unwanted = bethe_vector(problem, swapped);
      rhs += coeff * unwanted;
      scale = std::max(scale, std::abs(coeff) * unwanted.cwiseAbs().maxCoeff());
    }

    const double idres = (lhs - rhs).cwiseAbs().maxCoeff() / std::max(scale, 1e-300);
    report.identity_residual = std::max(report.identity_residual, idres);
    report.eigen_residual =
        std::max(report.eigen_residual, (lhs - lambda * w).norm() / wnorm);

    Eigen::ComplexEigenSolver<Matrix> es(t, /*computeEigenvectors=*/false);
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < es.eigenvalues().size(); ++j) {
      nearest = std::min(nearest,
                         std::abs(lambda - es.eigenvalues()(j)) / (1.0 + std::abs(lambda)));
    }
    report.oracle_distance = std::max(report.oracle_distance, nearest);
  }
  return report;
}

}  // namespace twistchain
