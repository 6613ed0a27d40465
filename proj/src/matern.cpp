#include "irgnm/matern.hpp"

#include <cmath>
#include <stdexcept>

#include "irgnm/random.hpp"

namespace irgnm {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;

// Ascending series for K0 and K1, accurate to double precision for
// x <= 2: with q = x^2/4, H_k the harmonic numbers and I0, I1 the
// ascending-series modified Bessel functions,
//   K0 = -(log(x/2) + gamma) I0 + sum_{k>=1} q^k/(k!)^2 H_k,
//   K1 = 1/x + log(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1)+psi(k+2))
//         q^k / (k! (k+1)!).
std::pair<double, double> k0k1_series(double x) {
  const double q = 0.25 * x * x;
  const double lh = std::log(0.5 * x);

  double i0 = 1.0, term = 1.0, s0 = 0.0, hk = 0.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    i0 += term;
    s0 += term * hk;
    if (term < 1e-18 * i0) break;
  }
  const double k0 = -(lh + kEulerGamma) * i0 + s0;

  double i1 = 1.0, s1 = -2.0 * kEulerGamma + 1.0;  // k = 0: psi(1) + psi(2)
  double hk1 = 1.0;
  term = 1.0;
  hk = 0.0;
  for (int k = 1; k < 64; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    hk1 += 1.0 / (k + 1);
    i1 += term;
    s1 += term * (-2.0 * kEulerGamma + hk + hk1);
    if (term < 1e-18 * i1) break;
  }
  const double k1 = 1.0 / x + lh * (0.5 * x * i1) - 0.25 * x * s1;
  return {k0, k1};
}

// Trapezoidal quadrature of int_0^inf exp(-x cosh t) cosh(nt) dt. The
// integrand is analytic and decays doubly exponentially, so the plain
// trapezoid rule converges geometrically in 1/step; step 0.15 leaves a
// relative error near machine precision for x >= 2 (checked against a
// 40-digit reference over x in [2, 25], orders 0..5).
double k_integral(int order, double x) {
  constexpr double step = 0.15;
  double sum = 0.5 * std::exp(-x);
  for (int k = 1;; ++k) {
    const double t = k * step;
    const double e = -x * std::cosh(t);
    if (e < -745.0) break;  // exp underflows; tail contributes nothing
    sum += std::exp(e) * std::cosh(order * t);
  }
  return sum * step;
}

}  // namespace

double bessel_k(int order, double x) {
  if (order < 0) throw std::invalid_argument("bessel_k: negative order");
  if (!(x > 0.0)) throw std::invalid_argument("bessel_k: argument must be positive");

  double k0, k1;
  if (x <= 2.0) {
    std::tie(k0, k1) = k0k1_series(x);
  } else {
    k0 = k_integral(0, x);
    k1 = k_integral(1, x);
  }
  if (order == 0) return k0;
  double km = k0, kc = k1;
  for (int m = 1; m < order; ++m) {
    const double kn = km + (2.0 * m / x) * kc;
    km = kc;
    kc = kn;
  }
  return kc;
}

double matern_kernel(double r, const MaternParams& params) {
  if (!(params.c0 > 0.0)) throw std::invalid_argument("matern_kernel: c0 must be positive");
  if (!(params.ell > 0.0)) throw std::invalid_argument("matern_kernel: ell must be positive");
  if (r < 0.0) throw std::invalid_argument("matern_kernel: negative distance");
  if (r == 0.0) return params.c0;

  const double s = r / params.ell;
  const double nu = params.nu;

  if (nu == 0.5) return params.c0 * std::exp(-s);
  if (nu == 1.5) return params.c0 * (1.0 + s) * std::exp(-s);
  if (nu == 2.5) return params.c0 * (1.0 + s + s * s / 3.0) * std::exp(-s);

  const double nearest = std::round(nu);
  if (nu == nearest && nu >= 1.0 && nu <= 64.0) {
    const int n = static_cast<int>(nearest);
    double factor = std::pow(2.0, 1.0 - n);  // 2^(1-nu) / Gamma(nu)
    for (int k = 2; k < n; ++k) factor /= k;
    return params.c0 * factor * std::pow(s, n) * bessel_k(n, s);
  }
  throw std::invalid_argument(
      "matern_kernel: nu must be a positive integer or one of 1/2, 3/2, 5/2");
}

CovarianceOperator::CovarianceOperator(Matrix c, double jitter) : c_(std::move(c)), jitter_(jitter) {
  if (c_.rows() != c_.cols()) throw std::invalid_argument("CovarianceOperator: matrix not square");
  if (jitter_ < 0.0) throw std::invalid_argument("CovarianceOperator: negative jitter");
}

CovarianceOperator CovarianceOperator::identity(Index dim) {
  if (dim <= 0) throw std::invalid_argument("CovarianceOperator: nonpositive dimension");
  return CovarianceOperator(Matrix::Identity(dim, dim), 0.0);
}

void CovarianceOperator::ensure_factored() const {
  if (factored_) return;
  ldlt_.compute(c_);
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error(
        "CovarianceOperator: factorization failed; increase the assembly jitter");
  const double dmin = ldlt_.vectorD().minCoeff();
  if (!(dmin > 0.0))
    throw std::runtime_error("CovarianceOperator: matrix is not positive definite (smallest pivot " +
                             std::to_string(dmin) + "); increase the assembly jitter");
  factored_ = true;
}

Vector CovarianceOperator::correlate(const Vector& z) const {
  if (z.size() != dim()) throw std::invalid_argument("CovarianceOperator: dimension mismatch");
  ensure_factored();
  Vector v = ldlt_.vectorD().cwiseSqrt().asDiagonal() * z;
  v = ldlt_.matrixL() * v;
  return ldlt_.transpositionsP().transpose() * v;
}

CovarianceOperator assemble_covariance(const Grid2D& grid, const MaternParams& params,
                                       double jitter) {
  if (jitter < 0.0) throw std::invalid_argument("assemble_covariance: negative jitter");
  const Index n = grid.size();
  const double w = grid.cell_weight();

  // The kernel is stationary and the grid uniform, so only the node
  // offset matters; tabulating per offset turns O(n^2) Bessel
  // evaluations into O(n).
  Matrix table(grid.nx, grid.ny);
  for (Index di = 0; di < grid.nx; ++di)
    for (Index dj = 0; dj < grid.ny; ++dj)
      table(di, dj) =
          w * matern_kernel(grid.h * std::hypot(static_cast<double>(di), static_cast<double>(dj)),
                            params);

  Matrix c(n, n);
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i) {
      const Index a = grid.idx(i, j);
      for (Index l = 0; l < grid.ny; ++l)
        for (Index k = 0; k < grid.nx; ++k)
          c(grid.idx(k, l), a) = table(std::abs(i - k), std::abs(j - l));
      c(a, a) += jitter * params.c0;
    }
  return CovarianceOperator(std::move(c), jitter);
}

Vector sample_prior(const CovarianceOperator& cov, std::uint64_t seed) {
  Vector z(cov.dim());
  for (Index i = 0; i < z.size(); ++i) z[i] = normal_at(seed, 0, static_cast<std::uint64_t>(i));
  return cov.correlate(z);
}

}  // namespace irgnm
