#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "twistchain/types.hpp"

namespace twistchain {

/// Polynomial stored by its roots with an overall scale:
///   p(z) = scale * prod_i (z - roots[i]).
/// This is the shape every weight function and Q-polynomial takes here, and
/// it keeps evaluation and differentiation free of cancellation surprises.
struct RootPoly {
  std::vector<Complex> roots;
  Complex scale{1.0, 0.0};

  int degree() const { return static_cast<int>(roots.size()); }

  Complex eval(Complex z) const {
    Complex p = scale;
    for (const Complex& r : roots) p *= z - r;
    return p;
  }

  /// Derivative by the product rule (no division, safe at the roots).
  Complex deriv(Complex z) const {
    Complex d = 0.0;
    for (std::size_t m = 0; m < roots.size(); ++m) {
      Complex term = scale;
      for (std::size_t l = 0; l < roots.size(); ++l) {
        if (l != m) term *= z - roots[l];
      }
      d += term;
    }
    return d;
  }
};

/// Interpolation nodes on the circle of given radius: (degree+1) scaled
/// roots of unity, rotated by `rotation` radians. On these nodes the
/// Vandermonde system is a scaled DFT, so coefficient recovery is exact to
/// rounding.
inline std::vector<Complex> circle_nodes(int degree, double radius, double rotation = 0.4321) {
  const int n = degree + 1;
  std::vector<Complex> nodes(n);
  for (int k = 0; k < n; ++k) {
    const double a = rotation + 2.0 * std::numbers::pi * k / n;
    nodes[k] = radius * Complex(std::cos(a), std::sin(a));
  }
  return nodes;
}

/// Recover the monomial coefficients a_0..a_degree of a polynomial sampled
/// on circle_nodes(degree, radius, rotation). T may be Complex or a dense
/// Eigen matrix; `values[k]` is p(nodes[k]).
template <typename T>
std::vector<T> poly_coeffs_from_circle(const std::vector<T>& values, double radius,
                                       double rotation = 0.4321) {
  const int n = static_cast<int>(values.size());
  std::vector<T> coeffs;
  coeffs.reserve(n);
  for (int j = 0; j < n; ++j) {
    // b_j = (1/n) sum_k p(z_k) w^{-jk},  a_j = b_j / (radius e^{i rot})^j.
    T acc = values[0];
    for (int k = 1; k < n; ++k) {
      const double a = -2.0 * std::numbers::pi * j * k / n;
      acc += values[k] * Complex(std::cos(a), std::sin(a));
    }
    const Complex phase =
        std::pow(radius * Complex(std::cos(rotation), std::sin(rotation)), j);
    coeffs.push_back(acc * (1.0 / (static_cast<double>(n) * phase)));
  }
  return coeffs;
}

/// Evaluate a coefficient-form polynomial (Horner).
template <typename T>
T poly_eval(const std::vector<T>& coeffs, Complex z) {
  T p = coeffs.back();
  for (int j = static_cast<int>(coeffs.size()) - 2; j >= 0; --j) {
    p = p * z + coeffs[j];
  }
  return p;
}

}  // namespace twistchain
