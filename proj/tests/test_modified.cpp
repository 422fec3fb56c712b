#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "test_util.hpp"
#include "twistchain/hilbert.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/rng.hpp"
#include "twistchain/yangian.hpp"

using namespace twistchain;

namespace {

double constraint_residual(const TwistFactorization& f) {
  const Twist& tw = f.twist;
  return std::abs(tw.k_plus * tw.k_minus - (f.rho1 * tw.k + f.rho2 * tw.k_tilde) +
                  f.rho1 * f.rho2);
}

double reconstruction_residual(const TwistFactorization& f) {
  return (f.b * f.d * f.a - f.twist.matrix()).norm();
}

}  // namespace

TEST_CASE("equal-rho factorization") {
  const Twist tw = testutil::generic_twist(3);
  const TwistFactorization f = factorize_twist(tw, FactorizationMode::EqualRho);

  CHECK(std::abs(f.rho1 - f.rho2) < 1e-14);
  CHECK(constraint_residual(f) < 1e-13);
  CHECK(reconstruction_residual(f) < 1e-13);
  CHECK(std::abs(f.a.determinant() - Complex{1.0, 0.0}) < 1e-13);
  CHECK(std::abs(f.b.determinant() - Complex{1.0, 0.0}) < 1e-13);
  CHECK(std::abs(f.d(0, 1)) + std::abs(f.d(1, 0)) < 1e-15);

  // det K = alpha+ alpha- is the determinant split the D factor realizes.
  CHECK(std::abs(tw.det() - f.alpha_plus() * f.alpha_minus()) < 1e-13);

  // Smaller-modulus quadratic root is the canonical branch.
  const Complex other = (tw.k_tilde + tw.k) - f.rho1;
  CHECK(std::abs(f.rho1) <= std::abs(other) + 1e-14);
  CHECK(f.canonical);
}

TEST_CASE("custom factorization and failure modes") {
  const Twist tw = testutil::generic_twist(5);
  const Complex rho1{0.35, 0.1};
  const TwistFactorization f = factorize_twist(tw, FactorizationMode::Custom, rho1);
  CHECK(f.rho1 == rho1);
  CHECK(constraint_residual(f) < 1e-13);
  CHECK(reconstruction_residual(f) < 1e-13);

  CHECK_THROWS_AS(factorize_twist(tw, FactorizationMode::Custom, tw.k_tilde),
                  DegenerateFactorization);
  CHECK_THROWS_AS(factorize_twist(testutil::diagonal_twist(), FactorizationMode::EqualRho),
                  DegenerateFactorization);
}

TEST_CASE("gauge freedom conjugates the modified entries") {
  const ChainSpec spec = testutil::chain({1, 1}, 7);
  const Twist tw = testutil::generic_twist(8);
  const TwistFactorization f = factorize_twist(tw, FactorizationMode::EqualRho);
  const Complex c1{1.3, 0.4}, c2{0.8, -0.2};
  const TwistFactorization g = gauge_factorization(f, c1, c2);

  CHECK(reconstruction_residual(g) < 1e-13);
  CHECK(g.rho1 == f.rho1);
  CHECK_FALSE(g.canonical);

  const Complex u{0.9, 0.55};
  const Matrix nu12 = nu_entry(spec, f, 1, 2, u);
  const Matrix nu12g = nu_entry(spec, g, 1, 2, u);
  CHECK(Residual::compare(nu12g, (c2 / c1) * nu12).rel < 1e-12);
  CHECK(Residual::compare(nu_entry(spec, g, 2, 1, u), (c1 / c2) * nu_entry(spec, f, 2, 1, u))
            .rel < 1e-12);
  CHECK(Residual::compare(nu_entry(spec, g, 1, 1, u), nu_entry(spec, f, 1, 1, u)).rel <
        1e-12);
  CHECK(Residual::compare(nu_entry(spec, g, 2, 2, u), nu_entry(spec, f, 2, 2, u)).rel <
        1e-12);
}

TEST_CASE("transfer splits over the diagonal modified entries") {
  // tr(K T) = tr(D A T B) = (kt - rho1) nu11 + (k - rho2) nu22.
  const ChainSpec spec = testutil::chain({1, 2}, 9);
  const Twist tw = testutil::generic_twist(10);
  const TwistFactorization f = factorize_twist(tw, FactorizationMode::EqualRho);
  const Complex u{1.4, -0.3};
  const Matrix lhs = transfer(spec, tw, u);
  const Matrix rhs = f.alpha_plus() * nu_entry(spec, f, 1, 1, u) +
                     f.alpha_minus() * nu_entry(spec, f, 2, 2, u);
  CHECK(Residual::compare(lhs, rhs).rel < 1e-13);
}

TEST_CASE("null twists reproduce the modified entries") {
  const ChainSpec spec = testutil::chain({1, 1}, 11);
  const Twist tw = testutil::generic_twist(12);
  const TwistFactorization f = factorize_twist(tw, FactorizationMode::EqualRho);
  const Complex u{0.6, 0.8};
  const Monodromy sample = monodromy(spec, u);
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Matrix2 v = null_twist_for(f, i, j);
      CHECK(std::abs(v.determinant()) < 1e-13);
      CHECK(Residual::compare(null_transfer(v, sample), nu_entry(spec, f, i, j, u)).rel <
            1e-12);
    }
  }
  // nu_family agrees with nu_entry.
  const OperatorFamily fam = nu_family(spec, f);
  CHECK(Residual::compare(fam(1, 2, u), nu_entry(spec, f, 1, 2, u)).rel < 1e-13);
}

TEST_CASE("inhomogeneous polynomial F") {
  const ChainSpec spec = testutil::chain({1, 2}, 13, Complex{0.9, 0.2});
  const auto roots = big_f_roots(spec);
  CHECK(static_cast<int>(roots.size()) == spec.total_twos() + spec.n_sites());
  for (Complex r : roots) CHECK(std::abs(big_f(spec, r)) < 1e-11);

  Rng rng(14);
  for (int k = 0; k < 5; ++k) {
    const Complex z = rng.annulus(1.0, 4.0);
    const Complex expect = lambda_weights(spec, z).first * aux_lambda(spec, z);
    CHECK(std::abs(big_f(spec, z) - expect) < 1e-10 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("weight-vector actions of the modified entries") {
  for (const auto& twos : {std::vector<int>{1}, std::vector<int>{1, 1},
                           std::vector<int>{2, 1}}) {
    const ChainSpec spec = testutil::chain(twos, 20 + twos.size());
    const Twist tw = testutil::generic_twist(15);
    const TwistFactorization f = factorize_twist(tw, FactorizationMode::EqualRho);
    Rng rng(16);
    const auto zs = testutil::sample_points(spec, rng, 4);
    CHECK(check_weight_actions(spec, f, zs).rel < 1e-11);
  }
}

TEST_CASE("null-twisted product identity") {
  const ChainSpec spec = testutil::chain({1, 1}, 17);
  const Twist tw = testutil::generic_twist(18);
  const TwistFactorization f = factorize_twist(tw, FactorizationMode::EqualRho);
  Rng rng(19);
  const int s_total = spec.total_twos();
  const auto pts = testutil::sample_points(spec, rng, s_total + 1);
  const Complex z = pts[0];
  const std::vector<Complex> us(pts.begin() + 1, pts.end());

  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Matrix2 v = null_twist_for(f, i, j);
      CHECK(check_null_product_identity(spec, v, us, z).rel < 1e-10);
    }
  }

  // Trace-zero null twists are rejected...
  Matrix2 traceless;
  traceless << Complex{1.0, 0.0}, Complex{-1.0, 0.0}, Complex{1.0, 0.0},
      Complex{-1.0, 0.0};
  CHECK_THROWS_AS(check_null_product_identity(spec, traceless, us, z), TraceZero);

  // ...because there the product of S+1 off-diagonal entries vanishes instead.
  CHECK(check_offdiag_product_vanishes(spec, 1, 2, us, z).rel < 1e-11);
  CHECK(check_offdiag_product_vanishes(spec, 2, 1, us, z).rel < 1e-11);
}

TEST_CASE("near-degenerate preset stays factorizable") {
  const auto [tw, f] = bgood_preset(Complex{1.2, 0.1}, Complex{0.8, -0.05});
  CHECK(std::abs(tw.k_plus - tw.k_minus) < 1e-15);
  CHECK(constraint_residual(f) < 1e-12);
  CHECK(reconstruction_residual(f) < 1e-10);

  const ChainSpec spec = testutil::chain({1}, 23);
  Rng rng(24);
  const auto zs = testutil::sample_points(spec, rng, 3);
  CHECK(check_weight_actions(spec, f, zs).rel < 1e-9);
}
