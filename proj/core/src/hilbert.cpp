#include "twistchain/hilbert.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace twistchain {

SpinRep spin_rep(int twos) {
  if (twos < 1) throw std::invalid_argument("spin_rep: need 2s >= 1");
  SpinRep rep;
  rep.twos = twos;
  const Eigen::Index d = twos + 1;
  const double s = 0.5 * twos;
  rep.sz = Matrix::Zero(d, d);
  rep.sp = Matrix::Zero(d, d);
  rep.sm = Matrix::Zero(d, d);
  rep.id = Matrix::Identity(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    rep.sz(k, k) = s - static_cast<double>(k);
  }
  // S^+ |s, s-k> = sqrt(k (2s - k + 1)) |s, s-k+1>
  // S^- |s, s-k> = sqrt((2s - k)(k + 1)) |s, s-k-1>
  for (Eigen::Index k = 1; k < d; ++k) {
    rep.sp(k - 1, k) = std::sqrt(static_cast<double>(k) * (twos - k + 1));
  }
  for (Eigen::Index k = 0; k + 1 < d; ++k) {
    rep.sm(k + 1, k) = std::sqrt(static_cast<double>(twos - k) * (k + 1));
  }
  return rep;
}

ChainSpec::ChainSpec(std::vector<int> twos_in, std::vector<Complex> thetas_in, Complex c_in)
    : twos(std::move(twos_in)), thetas(std::move(thetas_in)), c(c_in) {
  if (twos.empty()) throw std::invalid_argument("ChainSpec: empty chain");
  if (twos.size() != thetas.size()) {
    throw std::invalid_argument("ChainSpec: spins and thetas disagree in length");
  }
  if (c == Complex(0.0, 0.0)) throw std::invalid_argument("ChainSpec: c must be nonzero");
  for (int t : twos) {
    if (t < 1) throw std::invalid_argument("ChainSpec: every 2s must be >= 1");
  }
  if (dim() > (Eigen::Index{1} << 26)) {
    throw DimensionCap("ChainSpec: Hilbert-space dimension is out of scope");
  }
}

Eigen::Index ChainSpec::dim() const {
  Eigen::Index d = 1;
  for (int t : twos) d *= t + 1;
  return d;
}

int ChainSpec::total_twos() const {
  int s = 0;
  for (int t : twos) s += t;
  return s;
}

double ChainSpec::max_abs_theta() const {
  double m = 0.0;
  for (const Complex& th : thetas) m = std::max(m, std::abs(th));
  return m;
}

bool ChainSpec::generic_thetas(double tol) const {
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      if (std::abs(thetas[i] - thetas[j]) <= tol) return false;
    }
  }
  return true;
}

Matrix embed_site(const ChainSpec& spec, int site, const Matrix& local_op) {
  const int n = spec.n_sites();
  if (site < 0 || site >= n) throw std::invalid_argument("embed_site: site out of range");
  if (local_op.rows() != spec.twos[site] + 1 || local_op.cols() != spec.twos[site] + 1) {
    throw std::invalid_argument("embed_site: operator does not match the site dimension");
  }
  Eigen::Index left = 1, right = 1;
  for (int j = 0; j < site; ++j) left *= spec.twos[j] + 1;
  for (int j = site + 1; j < n; ++j) right *= spec.twos[j] + 1;
  const Matrix mid =
      Eigen::kroneckerProduct(Matrix::Identity(left, left), local_op);
  return Eigen::kroneckerProduct(mid, Matrix::Identity(right, right));
}

namespace {

Matrix total_of(const ChainSpec& spec, const Matrix SpinRep::*member) {
  Matrix acc = Matrix::Zero(spec.dim(), spec.dim());
  for (int i = 0; i < spec.n_sites(); ++i) {
    const SpinRep rep = spin_rep(spec.twos[i]);
    acc += embed_site(spec, i, rep.*member);
  }
  return acc;
}

}  // namespace

Matrix total_sz(const ChainSpec& spec) { return total_of(spec, &SpinRep::sz); }
Matrix total_sp(const ChainSpec& spec) { return total_of(spec, &SpinRep::sp); }
Matrix total_sm(const ChainSpec& spec) { return total_of(spec, &SpinRep::sm); }

std::pair<Vector, Vector> weight_vectors(const ChainSpec& spec) {
  const Eigen::Index d = spec.dim();
  Vector highest = Vector::Zero(d);
  Vector lowest = Vector::Zero(d);
  highest(0) = 1.0;
  lowest(d - 1) = 1.0;
  return {highest, lowest};
}

std::pair<Complex, Complex> lambda_weights(const ChainSpec& spec, Complex u) {
  Complex l1{1.0, 0.0}, l2{1.0, 0.0};
  for (int i = 0; i < spec.n_sites(); ++i) {
    const double s = 0.5 * spec.twos[i];
    l1 *= (u - spec.thetas[i] + spec.c * (s + 0.5)) / spec.c;
    l2 *= (u - spec.thetas[i] - spec.c * (s - 0.5)) / spec.c;
  }
  return {l1, l2};
}

Complex aux_lambda(const ChainSpec& spec, Complex z) {
  Complex p{1.0, 0.0};
  for (int i = 0; i < spec.n_sites(); ++i) {
    const double s = 0.5 * spec.twos[i];
    for (int k = 1; k <= spec.twos[i]; ++k) {
      p *= (z - spec.thetas[i] + spec.c * (s - k + 0.5)) / spec.c;
    }
  }
  return p;
}

std::vector<Complex> lambda1_roots(const ChainSpec& spec) {
  std::vector<Complex> r;
  r.reserve(spec.n_sites());
  for (int i = 0; i < spec.n_sites(); ++i) {
    r.push_back(spec.thetas[i] - spec.c * (0.5 * spec.twos[i] + 0.5));
  }
  return r;
}

std::vector<Complex> lambda2_roots(const ChainSpec& spec) {
  std::vector<Complex> r;
  r.reserve(spec.n_sites());
  for (int i = 0; i < spec.n_sites(); ++i) {
    r.push_back(spec.thetas[i] + spec.c * (0.5 * spec.twos[i] - 0.5));
  }
  return r;
}

std::vector<Complex> aux_lambda_roots(const ChainSpec& spec) {
  std::vector<Complex> r;
  for (int i = 0; i < spec.n_sites(); ++i) {
    const double s = 0.5 * spec.twos[i];
    for (int k = 1; k <= spec.twos[i]; ++k) {
      r.push_back(spec.thetas[i] - spec.c * (s - k + 0.5));
    }
  }
  return r;
}

std::vector<Complex> site_lattice(const ChainSpec& spec, int site) {
  if (site < 0 || site >= spec.n_sites()) {
    throw std::invalid_argument("site_lattice: site out of range");
  }
  const double s = 0.5 * spec.twos[site];
  std::vector<Complex> pts;
  pts.reserve(spec.twos[site]);
  for (int j = 1; j <= spec.twos[site]; ++j) {
    pts.push_back(spec.thetas[site] + spec.c * (s + 0.5 - j));
  }
  return pts;
}

}  // namespace twistchain
