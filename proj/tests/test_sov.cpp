#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "test_util.hpp"
#include "twistchain/kernels.hpp"
#include "twistchain/modified.hpp"
#include "twistchain/rng.hpp"
#include "twistchain/sov.hpp"

using namespace twistchain;

namespace {

Matrix2 su2_combo(Complex ap, Complex am, Complex a3) {
  Matrix2 x;
  x << a3, ap, am, -a3;
  return x;
}

Matrix2 exp_series(const Matrix2& x) {
  Matrix2 acc = Matrix2::Identity();
  Matrix2 term = Matrix2::Identity();
  for (int k = 1; k <= 40; ++k) {
    term = term * x * Complex(1.0 / k, 0.0);
    acc += term;
  }
  return acc;
}

}  // namespace

TEST_CASE("traceless 2x2 exponential matches the series") {
  Rng rng(110);
  for (int k = 0; k < 6; ++k) {
    const Matrix2 x =
        su2_combo(0.6 * rng.normal_complex(), 0.6 * rng.normal_complex(),
                  0.6 * rng.normal_complex());
    CHECK((exp2_traceless(x) - exp_series(x)).norm() < 1e-13);
  }
  // Includes the removable singularity at x = 0.
  CHECK((exp2_traceless(Matrix2::Zero()) - Matrix2::Identity()).norm() < 1e-15);
}

TEST_CASE("exponential parameters reproduce the matrix") {
  Rng rng(111);
  for (int k = 0; k < 6; ++k) {
    const Matrix2 m = (Matrix2::Identity() + 0.4 * (Matrix2() << rng.normal_complex(),
                                                    rng.normal_complex(),
                                                    rng.normal_complex(),
                                                    rng.normal_complex())
                                                       .finished())
                          .eval();
    if (std::abs(m.determinant()) < 0.1) continue;
    const auto [a0, ap, am, a3] = exponential_params(m);
    const Matrix2 rebuilt = a0 * exp2_traceless(su2_combo(ap, am, a3));
    CHECK((rebuilt - m).norm() < 1e-11 * m.norm());
  }
}

TEST_CASE("genericity guard on the separated lattice") {
  const ChainSpec good = testutil::chain({1, 1}, 112);
  CHECK_NOTHROW(require_generic_thetas(good));

  ChainSpec bad;
  bad.twos = {1, 1};
  bad.thetas = {Complex{0.4, 0.1}, Complex{0.4, 0.1} + Complex{1.0, 0.0}};
  bad.c = Complex{1.0, 0.0};
  CHECK_THROWS_AS(require_generic_thetas(bad), NonGenericTheta);
}

TEST_CASE("separated basis spans the chain") {
  const ChainSpec spec = testutil::chain({1, 1}, 113);
  const TwistFactorization fact =
      factorize_twist(testutil::generic_twist(114), FactorizationMode::EqualRho);
  const SovBasis basis = build_sov_basis(spec, fact);

  CHECK(basis.dim == spec.dim());
  CHECK(static_cast<Eigen::Index>(basis.labels.size()) == spec.dim());
  CHECK(basis.vectors.cols() == spec.dim());
  CHECK(basis.rank_ratio > 1e-6);

  Eigen::ColPivHouseholderQR<Matrix> qr(basis.vectors);
  CHECK(qr.rank() == spec.dim());

  // Labels enumerate the box 0..2s_i per site, each exactly once.
  std::vector<std::vector<int>> seen;
  for (const auto& label : basis.labels) {
    REQUIRE(label.size() == static_cast<std::size_t>(spec.n_sites()));
    for (int i = 0; i < spec.n_sites(); ++i) {
      CHECK(label[i] >= 0);
      CHECK(label[i] <= spec.twos[i]);
    }
    for (const auto& other : seen) CHECK(label != other);
    seen.push_back(label);
  }
}

TEST_CASE("lambda12 is the separated product formula") {
  const ChainSpec spec = testutil::chain({1, 2}, 115);
  const std::vector<int> label = {1, 2};
  const Complex z{2.3, 0.7};
  Complex expect{1.0, 0.0};
  for (int i = 0; i < spec.n_sites(); ++i) {
    const auto lattice = site_lattice(spec, i);
    for (int j = 1; j <= spec.twos[i]; ++j) {
      const Complex point = lattice[j - 1];
      const Complex arg = (j <= label[i]) ? z - spec.c : z;
      expect *= kernel_h(arg, point, spec.c);
    }
  }
  CHECK(std::abs(lambda12(spec, label, z) - expect) < 1e-12 * (1.0 + std::abs(expect)));
}

TEST_CASE("separated spectrum battery") {
  const std::vector<std::vector<int>> chains = {{1}, {2}, {1, 1}};
  for (const auto& twos : chains) {
    CAPTURE(twos.size());
    const ChainSpec spec = testutil::chain(twos, 116 + twos.size());
    const TwistFactorization fact =
        factorize_twist(testutil::generic_twist(117), FactorizationMode::EqualRho);
    Rng rng(118);
    std::vector<Complex> zs;
    for (int k = 0; k < 3; ++k) zs.push_back(sov_safe_z(spec, rng));

    const SovReport rep = check_sov_spectrum(spec, fact, zs);
    CHECK(rep.pass);
    CHECK(rep.vacuum_residual < 1e-10);
    CHECK(rep.eigen_residual < 1e-8);
    CHECK(rep.inverse_residual < 1e-8);
    CHECK(rep.overlap_residual < 1e-9);
    CHECK(rep.diag_match < 1e-8);
    // First-order asymptotic probe at |z| ~ 1e5: accurate to O(1/|z|).
    CHECK(rep.leading_residual < 1e-3);
    CHECK(rep.distinct);
    CHECK(rep.min_gap > 1e-8);
  }
}

TEST_CASE("any trace-bearing null twist has a simple separated spectrum") {
  const ChainSpec spec = testutil::chain({1, 1}, 119);
  const TwistFactorization fact =
      factorize_twist(testutil::generic_twist(120), FactorizationMode::EqualRho);
  Rng rng(121);
  std::vector<Complex> zs;
  for (int k = 0; k < 3; ++k) zs.push_back(sov_safe_z(spec, rng));

  for (int i = 1; i <= 2; ++i) {
    const Matrix2 v = null_twist_for(fact, i, i);
    CHECK(null_twist_min_gap(spec, v, zs) > 1e-8);
  }
}
