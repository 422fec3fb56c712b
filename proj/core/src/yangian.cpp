#include "twistchain/yangian.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "twistchain/kernels.hpp"
#include "twistchain/poly.hpp"

namespace twistchain {

namespace {

/// Local (unembedded) 2x2 Lax block of one site at spectral parameter u:
///   L(u - theta) = [[(u-theta)/c + 1/2 + S^3, S^-], [S^+, (u-theta)/c + 1/2 - S^3]].
std::array<Matrix, 4> lax_local(const ChainSpec& spec, int site, Complex u) {
  const SpinRep rep = spin_rep(spec.twos[site]);
  const Complex v = (u - spec.thetas[site]) / spec.c + 0.5;
  return {v * rep.id + rep.sz, rep.sm, rep.sp, v * rep.id - rep.sz};
}

}  // namespace

Matrix lax_entry(const ChainSpec& spec, int site, int i, int j, Complex u) {
  if (i < 1 || i > 2 || j < 1 || j > 2) {
    throw std::invalid_argument("lax_entry: auxiliary indices are 1-based in {1,2}");
  }
  const auto local = lax_local(spec, site, u);
  return embed_site(spec, site, local[2 * (i - 1) + (j - 1)]);
}

Monodromy monodromy(const ChainSpec& spec, Complex u) {
  Monodromy sample;
  sample.u = u;
  // Build the ordered product site by site; the entries of L_0...L_k extend
  // to L_0...L_{k+1} by a 2x2 block multiplication whose operator products
  // are Kronecker products (the factors live on disjoint sites).
  std::array<Matrix, 4> acc = lax_local(spec, 0, u);
  for (int site = 1; site < spec.n_sites(); ++site) {
    const auto loc = lax_local(spec, site, u);
    std::array<Matrix, 4> next;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        Matrix entry = Eigen::kroneckerProduct(acc[2 * i], loc[j]);
        entry += Eigen::kroneckerProduct(acc[2 * i + 1], loc[2 + j]);
        next[2 * i + j] = std::move(entry);
      }
    }
    acc = std::move(next);
  }
  sample.t = std::move(acc);
  return sample;
}

Matrix transfer(const Twist& twist, const Monodromy& sample) {
  return twist.k_tilde * sample.entry(1, 1) + twist.k_minus * sample.entry(1, 2) +
         twist.k_plus * sample.entry(2, 1) + twist.k * sample.entry(2, 2);
}

Matrix transfer(const ChainSpec& spec, const Twist& twist, Complex u) {
  return transfer(twist, monodromy(spec, u));
}

Matrix r_matrix(Complex u, Complex c) {
  Matrix r = (u / c) * Matrix::Identity(4, 4);
  // Permutation operator on C^2 (x) C^2.
  r(0, 0) += 1.0;
  r(1, 2) += 1.0;
  r(2, 1) += 1.0;
  r(3, 3) += 1.0;
  return r;
}

Residual check_rtt(const ChainSpec& spec, Complex u, Complex v) {
  const Eigen::Index d = spec.dim();
  const Monodromy tu = monodromy(spec, u);
  const Monodromy tv = monodromy(spec, v);

  // Operators on C^2_a (x) C^2_b (x) H, auxiliary spaces slowest.
  Matrix ta = Matrix::Zero(4 * d, 4 * d);
  Matrix tb = Matrix::Zero(4 * d, 4 * d);
  const Matrix id2 = Matrix::Identity(2, 2);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Matrix eij = Matrix::Zero(2, 2);
      eij(i, j) = 1.0;
      ta += Eigen::kroneckerProduct(Matrix(Eigen::kroneckerProduct(eij, id2)),
                                    tu.t[2 * i + j]);
      tb += Eigen::kroneckerProduct(Matrix(Eigen::kroneckerProduct(id2, eij)),
                                    tv.t[2 * i + j]);
    }
  }
  const Matrix rab = Eigen::kroneckerProduct(r_matrix(u - v, spec.c),
                                             Matrix::Identity(d, d));
  return Residual::compare(rab * ta * tb, tb * ta * rab);
}

Residual yang_baxter_residual(Complex u, Complex v, Complex w, Complex c) {
  const Matrix id2 = Matrix::Identity(2, 2);
  Matrix swap = Matrix::Zero(4, 4);
  swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
  const Matrix p23 = Eigen::kroneckerProduct(id2, swap);

  const Matrix r12 = Eigen::kroneckerProduct(r_matrix(u - v, c), id2);
  const Matrix r23 = Eigen::kroneckerProduct(id2, r_matrix(v - w, c));
  const Matrix r13 =
      p23 * Eigen::kroneckerProduct(r_matrix(u - w, c), id2) * p23;
  return Residual::compare(r12 * r13 * r23, r23 * r13 * r12);
}

Monodromy apply_phi(const Monodromy& sample) {
  Monodromy out;
  out.u = -sample.u;
  out.entry(1, 1) = sample.entry(1, 1);
  out.entry(1, 2) = sample.entry(2, 1);
  out.entry(2, 1) = sample.entry(1, 2);
  out.entry(2, 2) = sample.entry(2, 2);
  return out;
}

Residual check_multiple_action(const OperatorFamily& op, ActionPattern pattern, int i,
                               int j, int k, Complex v, std::span<const Complex> us,
                               Complex c) {
  if (pattern == ActionPattern::SameRow && j == k) {
    throw std::invalid_argument("check_multiple_action: SameRow needs j != k");
  }
  if (pattern == ActionPattern::SameColumn && i == k) {
    throw std::invalid_argument("check_multiple_action: SameColumn needs i != k");
  }
  const std::size_t m = us.size();

  // The entry walked through the product and the repeated entry.
  const auto walker = [&](Complex z) { return op(i, j, z); };
  const auto repeated = [&](Complex z) {
    return pattern == ActionPattern::SameRow ? op(i, k, z) : op(k, j, z);
  };

  std::vector<Matrix> reps;
  reps.reserve(m);
  for (Complex u : us) reps.push_back(repeated(u));

  const Matrix walker_v = walker(v);
  Matrix prod_all = Matrix::Identity(walker_v.rows(), walker_v.cols());
  for (const Matrix& r : reps) prod_all = prod_all * r;

  const Matrix lhs = walker_v * prod_all;

  Matrix rhs;
  if (pattern == ActionPattern::SameRow) {
    rhs = f_set_left(us, v, c) * (prod_all * walker_v);
  } else {
    rhs = f_set_right(v, us, c) * (prod_all * walker_v);
  }
  const Matrix rep_v = repeated(v);
  for (std::size_t a = 0; a < m; ++a) {
    Matrix skip_prod = Matrix::Identity(rep_v.rows(), rep_v.cols());
    for (std::size_t b = 0; b < m; ++b) {
      if (b != a) skip_prod = skip_prod * reps[b];
    }
    Complex coeff;
    if (pattern == ActionPattern::SameRow) {
      coeff = kernel_g(v, us[a], c) * f_set_left_skip(us, a, us[a], c);
    } else {
      coeff = kernel_g(us[a], v, c) * f_set_right_skip(us[a], us, a, c);
    }
    rhs += coeff * (rep_v * skip_prod * walker(us[a]));
  }
  return Residual::compare(lhs, rhs);
}

OperatorFamily monodromy_family(const ChainSpec& spec) {
  auto cache = std::make_shared<std::map<std::pair<double, double>, Monodromy>>();
  return [spec, cache](int i, int j, Complex u) -> Matrix {
    const std::pair<double, double> key{u.real(), u.imag()};
    auto it = cache->find(key);
    if (it == cache->end()) {
      it = cache->emplace(key, monodromy(spec, u)).first;
    }
    return it->second.entry(i, j);
  };
}

Residual check_large_u(const ChainSpec& spec) {
  const int n = spec.n_sites();
  const Eigen::Index d = spec.dim();
  const double radius = 1.0 + spec.max_abs_theta();
  const auto nodes = circle_nodes(n, radius);

  std::vector<Matrix> samples;
  samples.reserve(nodes.size());
  for (Complex z : nodes) {
    const Monodromy t = monodromy(spec, z);
    Matrix full = Matrix::Zero(2 * d, 2 * d);
    full.topLeftCorner(d, d) = t.entry(1, 1);
    full.topRightCorner(d, d) = t.entry(1, 2);
    full.bottomLeftCorner(d, d) = t.entry(2, 1);
    full.bottomRightCorner(d, d) = t.entry(2, 2);
    samples.push_back(std::move(full));
  }
  const auto coeffs = poly_coeffs_from_circle(samples, radius);

  const Complex cn = std::pow(spec.c, -n);
  const Matrix lead_expected = cn * Matrix::Identity(2 * d, 2 * d);

  Complex theta_sum{0.0, 0.0};
  for (Complex th : spec.thetas) theta_sum += th;
  const Matrix sz = total_sz(spec);
  const Complex shift = 0.5 * n - theta_sum / spec.c;
  Matrix sub_expected = Matrix::Zero(2 * d, 2 * d);
  sub_expected.topLeftCorner(d, d) = shift * Matrix::Identity(d, d) + sz;
  sub_expected.topRightCorner(d, d) = total_sm(spec);
  sub_expected.bottomLeftCorner(d, d) = total_sp(spec);
  sub_expected.bottomRightCorner(d, d) = shift * Matrix::Identity(d, d) - sz;
  sub_expected *= std::pow(spec.c, -(n - 1));

  Residual res = Residual::compare(coeffs[n], lead_expected);
  res.join(Residual::compare(coeffs[n - 1], sub_expected));
  return res;
}

Residual check_commuting_family(const ChainSpec& spec, const Twist& twist,
                                std::span<const Complex> zs) {
  std::vector<Matrix> ts;
  ts.reserve(zs.size());
  for (Complex z : zs) ts.push_back(transfer(spec, twist, z));
  Residual res;
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      res.join(Residual::compare(ts[a] * ts[b], ts[b] * ts[a]));
    }
  }
  return res;
}

Residual check_sz_twist_relation(const ChainSpec& spec, const Twist& twist, Complex u) {
  const Monodromy sample = monodromy(spec, u);
  const Matrix sz = total_sz(spec);
  const Matrix t = transfer(twist, sample);
  const Matrix lhs = sz * t - t * sz;
  const Matrix rhs =
      twist.k_plus * sample.entry(2, 1) - twist.k_minus * sample.entry(1, 2);
  return Residual::compare(lhs, rhs);
}

}  // namespace twistchain
