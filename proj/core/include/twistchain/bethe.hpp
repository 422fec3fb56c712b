#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "twistchain/hilbert.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/rng.hpp"
#include "twistchain/types.hpp"
#include "twistchain/yangian.hpp"

namespace twistchain {

/// The four Bethe-ansatz families. The diagonal pair uses a diagonal twist
/// with M free; the modified pair needs a factorized non-diagonal twist and
/// pins the root count to S = sum_i 2s_i.
enum class BetheMode { DiagonalUp, DiagonalDown, ModifiedUp, ModifiedDown };

bool is_modified(BetheMode mode);
bool is_up(BetheMode mode);
const char* mode_name(BetheMode mode);
std::optional<BetheMode> parse_mode(std::string_view name);

/// One chain coupled to the twist data of one family. All four families
/// share a single set of formulas through the coefficients (c1, c2, c_rho):
///   Lambda(z, r)  = c1 l1(z) f(r,z) + c2 l2(z) f(z,r) + c_rho F(z) g(z,r),
///   E(r_i, r_~i)  = c2 l2(r_i) f(r_i,r_~i) - c1 l1(r_i) f(r_~i,r_i)
///                   + c_rho F(r_i) g(r_i,r_~i),
/// with (l1, l2) the chain weights and F the inhomogeneous polynomial.
struct BetheProblem {
  ChainSpec spec;
  BetheMode mode = BetheMode::DiagonalUp;
  Twist twist;
  std::optional<TwistFactorization> fact;  // engaged for the modified pair

  Complex c1() const;
  Complex c2() const;
  Complex c_rho() const;
  /// Number of roots: m as given for diagonal modes, S for modified ones.
  int root_count(int m) const;
};

/// Couple a chain to a diagonal twist (mode DiagonalUp or DiagonalDown).
BetheProblem diagonal_problem(const ChainSpec& spec, const Twist& twist, BetheMode mode);
/// Couple a chain to a factorized twist (mode ModifiedUp or ModifiedDown).
BetheProblem modified_problem(const ChainSpec& spec, const TwistFactorization& fact,
                              BetheMode mode);

/// The family's reference vector: all-highest for the up modes, all-lowest
/// for the down modes.
Vector bethe_vacuum(const BetheProblem& problem);

/// The family's creation operator at one spectral point: t12 / t21 for the
/// diagonal modes, nu12 / nu21 for the modified ones.
Matrix creation_matrix(const BetheProblem& problem, Complex u);

/// Transfer matrix of the problem's physical twist.
Matrix transfer_matrix(const BetheProblem& problem, Complex z);

/// Ordered product of creation operators on the vacuum. The factors
/// commute, so roots are canonicalized (ascending by real, then imaginary
/// part) before applying. Throws DegenerateVector on a numerically zero
/// result.
Vector bethe_vector(const BetheProblem& problem, std::span<const Complex> roots);

/// Eigenvalue function Lambda(z, roots) of the family. Throws PoleAtRoot
/// when z collides with a root.
Complex eigenvalue_fn(const BetheProblem& problem, Complex z,
                      std::span<const Complex> roots);

/// Off-shell coefficient E(r_i, r_~i). Throws PoleAtRoot on coincident roots.
Complex bethe_residual(const BetheProblem& problem, std::span<const Complex> roots,
                       int i);

/// All coefficients at once, plus the analytic Jacobian dE_i/du_k.
Eigen::VectorXcd bethe_residuals(const BetheProblem& problem,
                                 std::span<const Complex> roots);
Eigen::MatrixXcd bethe_jacobian(const BetheProblem& problem,
                                std::span<const Complex> roots);

struct BetheRootSet {
  std::vector<Complex> roots;  // canonical order
  std::vector<double> residuals;  // |E(r_i, r_~i)| per root
  double max_residual = 0.0;
  bool on_shell = false;
};

struct SolveOptions {
  int starts = 600;
  int max_iter = 200;
  double newton_tol = 1e-12;   // convergence on the sup-norm of E
  double dedup_tol = 1e-6;     // optimal-assignment distance between sets
  double admissibility_tol = 1e-8;  // minimum pairwise root distance
  double onshell_tol = 1e-9;   // residual bound defining "on shell"
  std::uint64_t seed = 1;
  /// Optional extra seed clouds (e.g. known roots of a nearby problem).
  std::vector<std::vector<Complex>> hints;
};

struct SolveResult {
  std::vector<BetheRootSet> sets;  // admissible, deduplicated, sorted
  int starts = 0;
  int converged = 0;
  double best_failed_residual = 0.0;  // best sup-norm among failed starts
};

/// Damped-Newton multi-start solve of {E(r_i, r_~i) = 0}. Diagonal modes
/// take 0 <= m <= S; modified modes force m = S. Deterministic for a fixed
/// options.seed.
SolveResult solve_bethe(const BetheProblem& problem, int m,
                        const SolveOptions& options = {});

struct OnshellReport {
  double identity_residual = 0.0;  // (a) full off-shell action identity
  double eigen_residual = 0.0;     // (b) ||t(z)w - Lambda w|| / ||w||
  double oracle_distance = 0.0;    // (c) nearest dense eigenvalue, relative
  double max_bethe_residual = 0.0;
  bool on_shell = false;
  std::vector<Complex> z_samples;

  bool pass(double identity_tol = 1e-10, double eigen_tol = 1e-8,
            double oracle_tol = 1e-6) const {
    if (identity_residual > identity_tol) return false;
    if (!on_shell) return true;
    return eigen_residual <= eigen_tol && oracle_distance <= oracle_tol;
  }
};

/// Certify a root set at `n_z` random spectral points: (a) the off-shell
/// action identity t(z) B(r) = Lambda B(r) + sum_i g(r_i,z) E_i B(z,r_~i)
/// holds; (b) when on shell, B(r) is an eigenvector; (c) when on shell, the
/// eigenvalue sits in the dense spectrum of t(z).
OnshellReport check_onshell(const BetheProblem& problem, std::span<const Complex> roots,
                            Rng& rng, int n_z = 5, double onshell_tol = 1e-9);

}  // namespace twistchain
