#include "twistchain/modified.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "twistchain/kernels.hpp"

namespace twistchain {

namespace {

constexpr double kMuDegeneracyTol = 1e-8;

/// Both roots of rho^2 - t rho + p = 0, cancellation-safe; returns
/// {larger-modulus, smaller-modulus}.
std::pair<Complex, Complex> quadratic_roots(Complex t, Complex p) {
  const Complex s = std::sqrt(t * t - 4.0 * p);
  // Pick the sign that avoids cancellation in t + sgn*s.
  const Complex big = (std::abs(t + s) >= std::abs(t - s)) ? (t + s) / 2.0 : (t - s) / 2.0;
  if (big == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
  return {big, p / big};
}

TwistFactorization assemble(const Twist& twist, FactorizationMode mode, Complex rho1,
                            Complex rho2, int branch) {
  const Complex r = rho1 * rho2 / (twist.k_plus * twist.k_minus);
  if (std::abs(Complex(1.0, 0.0) - r) < kMuDegeneracyTol) {
    throw DegenerateFactorization("factorize_twist: mu degenerates (rho1 rho2 ~ k+ k-)");
  }
  TwistFactorization fact;
  fact.twist = twist;
  fact.mode = mode;
  fact.rho1 = rho1;
  fact.rho2 = rho2;
  fact.mu = 1.0 / (Complex(1.0, 0.0) - r);
  fact.branch = branch;
  const Complex sq = std::sqrt(fact.mu);
  fact.a << 1.0, rho2 / twist.k_minus, rho1 / twist.k_plus, 1.0;
  fact.a *= sq;
  fact.b << 1.0, rho1 / twist.k_minus, rho2 / twist.k_plus, 1.0;
  fact.b *= sq;
  fact.d << twist.k_tilde - rho1, 0.0, 0.0, twist.k - rho2;

  const Matrix2 k = twist.matrix();
  const double err = (fact.b * fact.d * fact.a - k).cwiseAbs().maxCoeff();
  if (err > 1e-10 * k.cwiseAbs().maxCoeff()) {
    throw DegenerateFactorization("factorize_twist: B D A does not reproduce the twist");
  }
  return fact;
}

}  // namespace

TwistFactorization factorize_twist(const Twist& twist, FactorizationMode mode,
                                   std::optional<Complex> rho1) {
  if (twist.k_plus == Complex(0.0, 0.0) || twist.k_minus == Complex(0.0, 0.0)) {
    throw DegenerateFactorization(
        "factorize_twist: needs an off-diagonal twist (k_plus, k_minus nonzero)");
  }
  if (mode == FactorizationMode::EqualRho) {
    const auto [big, small] = quadratic_roots(twist.k_tilde + twist.k,
                                              twist.k_plus * twist.k_minus);
    Complex rho = small;
    int branch = 0;
    const double gap = std::abs(std::abs(big) - std::abs(small));
    if (gap <= 1e-14 * (std::abs(big) + std::abs(small))) {
      // Equal-modulus tie: take the root with nonnegative imaginary part.
      rho = (small.imag() >= 0.0) ? small : big;
      branch = (rho == small) ? 0 : 1;
    }
    return assemble(twist, mode, rho, rho, branch);
  }
  if (!rho1.has_value()) {
    throw DegenerateFactorization("factorize_twist: Custom mode needs rho1");
  }
  const Complex r1 = *rho1;
  if (r1 == twist.k_tilde) {
    throw DegenerateFactorization("factorize_twist: rho1 = k_tilde leaves rho2 undetermined");
  }
  const Complex r2 =
      (r1 * twist.k - twist.k_plus * twist.k_minus) / (r1 - twist.k_tilde);
  return assemble(twist, FactorizationMode::Custom, r1, r2, 0);
}

TwistFactorization gauge_factorization(const TwistFactorization& fact, Complex c1,
                                       Complex c2) {
  if (c1 == Complex(0.0, 0.0) || c2 == Complex(0.0, 0.0)) {
    throw DegenerateFactorization("gauge_factorization: gauge entries must be nonzero");
  }
  TwistFactorization out = fact;
  Matrix2 c, cinv;
  c << c1, 0.0, 0.0, c2;
  cinv << 1.0 / c1, 0.0, 0.0, 1.0 / c2;
  out.a = cinv * fact.a;
  out.b = fact.b * c;
  out.canonical = false;
  return out;
}

std::pair<Twist, TwistFactorization> bgood_preset(Complex k_tilde, Complex k, double eps) {
  Twist twist;
  twist.k_tilde = k_tilde;
  twist.k = k;
  twist.k_plus = eps;
  twist.k_minus = eps;
  return {twist, factorize_twist(twist, FactorizationMode::Custom, Complex(eps, 0.0))};
}

Matrix2 null_twist_for(const TwistFactorization& fact, int i, int j) {
  if (i < 1 || i > 2 || j < 1 || j > 2) {
    throw std::invalid_argument("null_twist_for: indices are 1-based in {1,2}");
  }
  Matrix2 eji = Matrix2::Zero();
  eji(j - 1, i - 1) = 1.0;
  return fact.b * eji * fact.a;
}

Matrix null_transfer(const Matrix2& v, const Monodromy& sample) {
  return v(0, 0) * sample.entry(1, 1) + v(0, 1) * sample.entry(2, 1) +
         v(1, 0) * sample.entry(1, 2) + v(1, 1) * sample.entry(2, 2);
}

Matrix null_transfer(const ChainSpec& spec, const Matrix2& v, Complex u) {
  return null_transfer(v, monodromy(spec, u));
}

Matrix nu_entry(const ChainSpec& spec, const TwistFactorization& fact, int i, int j,
                Complex u) {
  return null_transfer(spec, null_twist_for(fact, i, j), u);
}

OperatorFamily nu_family(const ChainSpec& spec, const TwistFactorization& fact) {
  auto cache = std::make_shared<std::map<std::pair<double, double>, Monodromy>>();
  return [spec, fact, cache](int i, int j, Complex u) -> Matrix {
    const std::pair<double, double> key{u.real(), u.imag()};
    auto it = cache->find(key);
    if (it == cache->end()) {
      it = cache->emplace(key, monodromy(spec, u)).first;
    }
    return null_transfer(null_twist_for(fact, i, j), it->second);
  };
}

Complex big_f(const ChainSpec& spec, Complex z) {
  Complex p{1.0, 0.0};
  for (int i = 0; i < spec.n_sites(); ++i) {
    const double s = 0.5 * spec.twos[i];
    for (int k = 0; k <= spec.twos[i]; ++k) {
      p *= (z - spec.thetas[i] + spec.c * (s - k + 0.5)) / spec.c;
    }
  }
  return p;
}

std::vector<Complex> big_f_roots(const ChainSpec& spec) {
  std::vector<Complex> r;
  for (int i = 0; i < spec.n_sites(); ++i) {
    const double s = 0.5 * spec.twos[i];
    for (int k = 0; k <= spec.twos[i]; ++k) {
      r.push_back(spec.thetas[i] - spec.c * (s - k + 0.5));
    }
  }
  return r;
}

Residual check_weight_actions(const ChainSpec& spec, const TwistFactorization& fact,
                              std::span<const Complex> zs) {
  const auto [w_up, w_down] = weight_vectors(spec);
  const Twist& tw = fact.twist;
  const Complex kp = tw.k_plus, km = tw.k_minus;
  Residual res;
  for (Complex z : zs) {
    const Monodromy sample = monodromy(spec, z);
    const auto [l1, l2] = lambda_weights(spec, z);
    const Matrix n11 = null_transfer(null_twist_for(fact, 1, 1), sample);
    const Matrix n12 = null_transfer(null_twist_for(fact, 1, 2), sample);
    const Matrix n21 = null_transfer(null_twist_for(fact, 2, 1), sample);
    const Matrix n22 = null_transfer(null_twist_for(fact, 2, 2), sample);
    const Matrix t = transfer(tw, sample);

    const Vector n12_up = n12 * w_up;
    const Vector n21_down = n21 * w_down;

    // Actions on the highest weight vector, nu12 as creation operator.
    res.join(Residual::compare(Vector(n11 * w_up),
                               Vector(l1 * w_up + (fact.rho2 / kp) * n12_up)));
    res.join(Residual::compare(Vector(n22 * w_up),
                               Vector(l2 * w_up + (fact.rho1 / kp) * n12_up)));
    res.join(Residual::compare(
        Vector(n21 * w_up),
        Vector((fact.rho1 / kp * l1 + fact.rho2 / kp * l2) * w_up +
               (fact.rho1 * fact.rho2 / (kp * kp)) * n12_up)));
    res.join(Residual::compare(
        Vector(t * w_up),
        Vector((fact.alpha_plus() * l1 + fact.alpha_minus() * l2) * w_up +
               (km / fact.mu) * n12_up)));

    // Actions on the lowest weight vector, nu21 as creation operator.
    res.join(Residual::compare(Vector(n11 * w_down),
                               Vector(l2 * w_down + (fact.rho2 / km) * n21_down)));
    res.join(Residual::compare(Vector(n22 * w_down),
                               Vector(l1 * w_down + (fact.rho1 / km) * n21_down)));
    res.join(Residual::compare(
        Vector(n12 * w_down),
        Vector((fact.rho2 / km * l1 + fact.rho1 / km * l2) * w_down +
               (fact.rho1 * fact.rho2 / (km * km)) * n21_down)));
    res.join(Residual::compare(
        Vector(t * w_down),
        Vector((fact.alpha_plus() * l2 + fact.alpha_minus() * l1) * w_down +
               (kp / fact.mu) * n21_down)));
  }
  return res;
}

Residual check_null_product_identity(const ChainSpec& spec, const Matrix2& v,
                                     std::span<const Complex> us, Complex z) {
  if (static_cast<int>(us.size()) != spec.total_twos()) {
    throw std::invalid_argument("check_null_product_identity: #us must equal S");
  }
  const double vscale = v.cwiseAbs().maxCoeff();
  if (std::abs(v.determinant()) > 1e-12 * vscale * vscale) {
    throw std::invalid_argument("check_null_product_identity: twist must be singular");
  }
  if (std::abs(v.trace()) <= 1e-12 * vscale) {
    throw TraceZero("check_null_product_identity: null twist has vanishing trace");
  }
  const Complex trace = v.trace();
  const std::size_t s = us.size();

  std::vector<Matrix> nus;
  nus.reserve(s);
  for (Complex u : us) nus.push_back(null_transfer(spec, v, u));
  const Matrix nu_z = null_transfer(spec, v, z);

  Matrix prod_all = Matrix::Identity(nu_z.rows(), nu_z.cols());
  for (const Matrix& m : nus) prod_all = prod_all * m;

  const Matrix lhs = nu_z * prod_all;

  Matrix rhs = (trace * big_f(spec, z) * g_set_right(z, us, spec.c)) * prod_all;
  for (std::size_t i = 0; i < s; ++i) {
    Matrix skip = Matrix::Identity(nu_z.rows(), nu_z.cols());
    for (std::size_t j = 0; j < s; ++j) {
      if (j != i) skip = skip * nus[j];
    }
    const Complex coeff = trace * kernel_g(us[i], z, spec.c) * big_f(spec, us[i]) *
                          g_set_right_skip(us[i], us, i, spec.c);
    rhs += coeff * (nu_z * skip);
  }
  return Residual::compare(lhs, rhs);
}

Residual check_offdiag_product_vanishes(const ChainSpec& spec, int i, int j,
                                        std::span<const Complex> us, Complex z) {
  if (i == j) {
    throw std::invalid_argument("check_offdiag_product_vanishes: needs i != j");
  }
  if (static_cast<int>(us.size()) != spec.total_twos()) {
    throw std::invalid_argument("check_offdiag_product_vanishes: #us must equal S");
  }
  Matrix prod = monodromy(spec, z).entry(i, j);
  double scale = prod.cwiseAbs().maxCoeff();
  for (Complex u : us) {
    const Matrix m = monodromy(spec, u).entry(i, j);
    scale *= m.cwiseAbs().maxCoeff();
    prod = prod * m;
  }
  return Residual::of(prod.cwiseAbs().maxCoeff(), scale);
}

}  // namespace twistchain
