#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "test_util.hpp"
#include "twistchain/hilbert.hpp"
#include "twistchain/rng.hpp"

using namespace twistchain;

namespace {

double comm_residual(const Matrix& a, const Matrix& b, const Matrix& expect) {
  return (a * b - b * a - expect).norm();
}

}  // namespace

TEST_CASE("spin_rep satisfies the su(2) algebra") {
  for (int twos = 1; twos <= 5; ++twos) {
    CAPTURE(twos);
    const SpinRep rep = spin_rep(twos);
    REQUIRE(rep.dim() == twos + 1);
    CHECK(comm_residual(rep.sz, rep.sp, rep.sp) < 1e-13);
    CHECK(comm_residual(rep.sz, rep.sm, -rep.sm) < 1e-13);
    CHECK(comm_residual(rep.sp, rep.sm, 2.0 * rep.sz) < 1e-13);

    const double s = rep.spin();
    const Matrix casimir = rep.sz * rep.sz + 0.5 * (rep.sp * rep.sm + rep.sm * rep.sp);
    CHECK((casimir - s * (s + 1.0) * rep.id).norm() < 1e-12);

    // Highest-weight first: S^+ kills the first basis vector, S^- the last.
    CHECK(rep.sp.col(0).norm() == doctest::Approx(0.0));
    CHECK(rep.sm.col(rep.dim() - 1).norm() == doctest::Approx(0.0));
    CHECK(std::abs(rep.sz(0, 0) - Complex{s, 0.0}) < 1e-14);
    CHECK(std::abs(rep.sz(rep.dim() - 1, rep.dim() - 1) + Complex{s, 0.0}) < 1e-14);
  }
  CHECK_THROWS_AS(spin_rep(0), std::invalid_argument);
}

TEST_CASE("chain spec validation and bookkeeping") {
  const ChainSpec spec = testutil::chain({1, 2, 1});
  CHECK(spec.n_sites() == 3);
  CHECK(spec.dim() == 2 * 3 * 2);
  CHECK(spec.total_twos() == 4);
  CHECK(spec.generic_thetas());

  CHECK_THROWS_AS(ChainSpec({}, {}, Complex{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec({1, 1}, {Complex{0.0, 0.0}}, Complex{1.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ChainSpec({1}, {Complex{0.0, 0.0}}, Complex{0.0, 0.0}),
                  std::invalid_argument);

  ChainSpec clash;
  clash.twos = {1, 1};
  clash.thetas = {Complex{0.3, 0.0}, Complex{0.3, 0.0}};
  clash.c = Complex{1.0, 0.0};
  CHECK_FALSE(clash.generic_thetas());
}

TEST_CASE("embedded site operators commute across sites") {
  const ChainSpec spec = testutil::chain({1, 2, 1}, 21);
  const SpinRep r0 = spin_rep(spec.twos[0]);
  const SpinRep r2 = spin_rep(spec.twos[2]);
  const Matrix a = embed_site(spec, 0, r0.sp);
  const Matrix b = embed_site(spec, 2, r2.sm);
  CHECK((a * b - b * a).norm() < 1e-14);

  // Same-site embeddings multiply like the local operators.
  const Matrix sz0 = embed_site(spec, 0, r0.sz);
  CHECK((a * sz0 - embed_site(spec, 0, r0.sp * r0.sz)).norm() < 1e-14);
}

TEST_CASE("weight vectors are the extreme S^z states") {
  const ChainSpec spec = testutil::chain({1, 1, 2}, 33);
  const auto [up, down] = weight_vectors(spec);
  const Matrix sz = total_sz(spec);
  const double smax = 0.5 * spec.total_twos();

  CHECK((sz * up - smax * up).norm() < 1e-13);
  CHECK((sz * down + smax * down).norm() < 1e-13);
  CHECK(total_sp(spec) * up == Vector::Zero(spec.dim()));
  CHECK(total_sm(spec) * down == Vector::Zero(spec.dim()));
  CHECK(std::abs(up.norm() - 1.0) < 1e-15);
  CHECK(std::abs(down.norm() - 1.0) < 1e-15);
}

TEST_CASE("weight functions vanish exactly on their root lists") {
  const ChainSpec spec = testutil::chain({1, 2}, 5, Complex{0.9, 0.3});
  for (Complex r : lambda1_roots(spec)) {
    CHECK(std::abs(lambda_weights(spec, r).first) < 1e-13);
  }
  for (Complex r : lambda2_roots(spec)) {
    CHECK(std::abs(lambda_weights(spec, r).second) < 1e-13);
  }
  for (Complex r : aux_lambda_roots(spec)) {
    CHECK(std::abs(aux_lambda(spec, r)) < 1e-12);
  }
  CHECK(lambda1_roots(spec).size() == 2);
  CHECK(lambda2_roots(spec).size() == 2);
  CHECK(aux_lambda_roots(spec).size() == 3);
}

TEST_CASE("aux lambda interlaces the weight ratio") {
  // lambda1(u)/lambda2(u) = lambda(u + c)/lambda(u) away from zeros.
  const ChainSpec spec = testutil::chain({2, 1, 1}, 9, Complex{1.0, -0.2});
  Rng rng(17);
  for (int k = 0; k < 6; ++k) {
    const Complex u = rng.annulus(1.0, 4.0);
    const auto [l1, l2] = lambda_weights(spec, u);
    const Complex lhs = l1 * aux_lambda(spec, u);
    const Complex rhs = l2 * aux_lambda(spec, u + spec.c);
    CHECK(std::abs(lhs - rhs) < 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST_CASE("site lattice descends from the top weight root") {
  const ChainSpec spec = testutil::chain({2, 1}, 41);
  for (int site = 0; site < spec.n_sites(); ++site) {
    const auto lattice = site_lattice(spec, site);
    REQUIRE(static_cast<int>(lattice.size()) == spec.twos[site]);
    const double s = 0.5 * spec.twos[site];
    for (std::size_t j = 0; j < lattice.size(); ++j) {
      const Complex expect =
          spec.thetas[site] + spec.c * Complex(s + 0.5 - static_cast<double>(j + 1), 0.0);
      CHECK(std::abs(lattice[j] - expect) < 1e-14);
    }
  }
  // The union of site lattices is exactly the root list of aux lambda.
  auto roots = aux_lambda_roots(spec);
  std::vector<Complex> flat;
  for (int site = 0; site < spec.n_sites(); ++site) {
    for (Complex z : site_lattice(spec, site)) flat.push_back(z);
  }
  REQUIRE(roots.size() == flat.size());
  for (Complex z : flat) {
    double best = 1e300;
    for (Complex r : roots) best = std::min(best, std::abs(z - r));
    CHECK(best < 1e-13);
  }
}
