#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "twistchain/kernels.hpp"
#include "twistchain/poly.hpp"
#include "twistchain/rng.hpp"

using namespace twistchain;

TEST_CASE("kernel identities") {
  Rng rng(3);
  const Complex c = Complex{1.0, 0.0} + 0.3 * rng.normal_complex();
  for (int k = 0; k < 8; ++k) {
    const Complex u = rng.annulus(0.5, 3.0);
    const Complex v = rng.annulus(0.5, 3.0);
    CHECK(std::abs(kernel_f(u, v, c) - (Complex{1.0, 0.0} + kernel_g(u, v, c))) < 1e-14);
    CHECK(std::abs(kernel_f(u, v, c) - kernel_h(u, v, c) * kernel_g(u, v, c)) < 1e-14);
    // f is symmetric under joint negation, g antisymmetric in its arguments.
    CHECK(std::abs(kernel_f(-u, -v, c) - kernel_f(v, u, c)) < 1e-13);
    CHECK(std::abs(kernel_g(u, v, c) + kernel_g(v, u, c)) < 1e-14);
  }
  // The structural zero that drives every on-shell cancellation.
  const Complex x = rng.annulus(0.5, 3.0);
  CHECK(std::abs(kernel_f(x - c, x, c)) == doctest::Approx(0.0));
}

TEST_CASE("set products and skip variants") {
  Rng rng(5);
  const Complex c{1.0, 0.0};
  std::vector<Complex> us;
  for (int k = 0; k < 4; ++k) us.push_back(rng.annulus(0.5, 3.0));
  const Complex v = rng.annulus(0.5, 3.0);

  Complex left{1.0, 0.0}, right{1.0, 0.0};
  for (Complex u : us) {
    left *= kernel_f(u, v, c);
    right *= kernel_f(v, u, c);
  }
  CHECK(std::abs(f_set_left(us, v, c) - left) < 1e-13);
  CHECK(std::abs(f_set_right(v, us, c) - right) < 1e-13);

  for (std::size_t skip = 0; skip < us.size(); ++skip) {
    const Complex whole = f_set_left(us, v, c);
    const Complex part = f_set_left_skip(us, skip, v, c);
    CHECK(std::abs(part * kernel_f(us[skip], v, c) - whole) < 1e-12);
    CHECK(std::abs(f_set_right_skip(v, us, skip, c) * kernel_f(v, us[skip], c) -
                   f_set_right(v, us, c)) < 1e-12);
    CHECK(std::abs(g_set_right_skip(v, us, skip, c) * kernel_g(v, us[skip], c) -
                   g_set_right(v, us, c)) < 1e-12);
  }
}

TEST_CASE("root polynomial evaluation and derivative") {
  Rng rng(7);
  RootPoly p;
  p.scale = Complex{0.7, -0.2};
  for (int k = 0; k < 5; ++k) p.roots.push_back(rng.annulus(0.3, 2.0));

  for (Complex r : p.roots) CHECK(std::abs(p.eval(r)) < 1e-12);

  const Complex z = rng.annulus(2.5, 4.0);
  const double h = 1e-6;
  const Complex fd = (p.eval(z + Complex{h, 0.0}) - p.eval(z - Complex{h, 0.0})) /
                     Complex{2.0 * h, 0.0};
  CHECK(std::abs(p.deriv(z) - fd) < 1e-6 * (1.0 + std::abs(fd)));
}

TEST_CASE("circle interpolation recovers scalar coefficients exactly") {
  const std::vector<Complex> coeffs = {Complex{1.5, -0.4}, Complex{0.0, 2.0},
                                       Complex{-3.0, 0.1}, Complex{0.25, 0.25}};
  const int degree = static_cast<int>(coeffs.size()) - 1;
  const double radius = 2.3;
  const auto nodes = circle_nodes(degree, radius);
  std::vector<Complex> values;
  for (Complex z : nodes) values.push_back(poly_eval(coeffs, z));

  const auto rec = poly_coeffs_from_circle(values, radius);
  REQUIRE(rec.size() == coeffs.size());
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    CHECK(std::abs(rec[j] - coeffs[j]) < 1e-13);
  }
}

TEST_CASE("circle interpolation works entrywise on matrices") {
  Rng rng(9);
  const int degree = 2;
  std::vector<Matrix> coeffs;
  for (int j = 0; j <= degree; ++j) {
    Matrix m(2, 2);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) m(a, b) = rng.normal_complex();
    }
    coeffs.push_back(m);
  }
  const double radius = 1.7;
  const auto nodes = circle_nodes(degree, radius);
  std::vector<Matrix> values;
  for (Complex z : nodes) values.push_back(poly_eval(coeffs, z));

  const auto rec = poly_coeffs_from_circle(values, radius);
  for (int j = 0; j <= degree; ++j) {
    CHECK((rec[j] - coeffs[j]).norm() < 1e-13);
  }
}
