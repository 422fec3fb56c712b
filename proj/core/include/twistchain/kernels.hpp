#pragma once

#include <span>

#include "twistchain/types.hpp"

namespace twistchain {

// The rational kernels of the R-matrix calculus:
//   g(u,v) = c/(u-v),  f(u,v) = (u-v+c)/(u-v) = 1 + g(u,v),  h = f/g.
// Poles sit on the diagonal u = v; callers guard evaluation points.

inline Complex kernel_g(Complex u, Complex v, Complex c) { return c / (u - v); }

inline Complex kernel_f(Complex u, Complex v, Complex c) {
  return (u - v + c) / (u - v);
}

inline Complex kernel_h(Complex u, Complex v, Complex c) {
  return (u - v + c) / c;
}

/// f(ubar, v) = prod_i f(u_i, v)
inline Complex f_set_left(std::span<const Complex> us, Complex v, Complex c) {
  Complex p{1.0, 0.0};
  for (Complex u : us) p *= kernel_f(u, v, c);
  return p;
}

/// f(v, ubar) = prod_i f(v, u_i)
inline Complex f_set_right(Complex v, std::span<const Complex> us, Complex c) {
  Complex p{1.0, 0.0};
  for (Complex u : us) p *= kernel_f(v, u, c);
  return p;
}

/// g(v, ubar) = prod_i g(v, u_i)
inline Complex g_set_right(Complex v, std::span<const Complex> us, Complex c) {
  Complex p{1.0, 0.0};
  for (Complex u : us) p *= kernel_g(v, u, c);
  return p;
}

/// Same products with one element skipped (the "ubar_i" convention).
inline Complex f_set_left_skip(std::span<const Complex> us, std::size_t skip, Complex v,
                               Complex c) {
  Complex p{1.0, 0.0};
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (i != skip) p *= kernel_f(us[i], v, c);
  }
  return p;
}

inline Complex f_set_right_skip(Complex v, std::span<const Complex> us, std::size_t skip,
                                Complex c) {
  Complex p{1.0, 0.0};
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (i != skip) p *= kernel_f(v, us[i], c);
  }
  return p;
}

inline Complex g_set_right_skip(Complex v, std::span<const Complex> us, std::size_t skip,
                                Complex c) {
  Complex p{1.0, 0.0};
  for (std::size_t i = 0; i < us.size(); ++i) {
    if (i != skip) p *= kernel_g(v, us[i], c);
  }
  return p;
}

}  // namespace twistchain
