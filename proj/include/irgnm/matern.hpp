#pragma once

#include <cstdint>

#include <Eigen/Cholesky>

#include "irgnm/grid.hpp"

namespace irgnm {

// Modified Bessel function of the second kind, integer order n >= 0,
// x > 0. Orders 0 and 1 come from the ascending series for x <= 2 and
// from trapezoidal quadrature of K_n(x) = int_0^inf exp(-x cosh t)
// cosh(nt) dt beyond; higher orders follow the upward recurrence
// K_{n+1}(x) = K_{n-1}(x) + (2n/x) K_n(x), which is stable in this
// direction because K grows with the order.
double bessel_k(int order, double x);

struct MaternParams {
  double c0 = 1.0;    // variance at distance zero
  double nu = 3.0;    // smoothness; positive integers or 1/2, 3/2, 5/2
  double ell = 0.08;  // correlation length
};

// Stationary Matern covariance between two points at distance r:
//   c(r) = c0 * 2^(1-nu) / Gamma(nu) * (r/ell)^nu * K_nu(r/ell),
// continued by c(0) = c0. Half-integer orders use their closed forms
// (nu = 1/2 is c0 * exp(-r/ell)).
double matern_kernel(double r, const MaternParams& params);

// Dense covariance of a nodal field on the grid, C_ij = h^2 * c(|x_i -
// x_j|) with the nodal quadrature weight, plus jitter * c0 on the
// diagonal to keep the factorization of the rapidly decaying spectrum
// positive.
class CovarianceOperator {
 public:
  CovarianceOperator(Matrix c, double jitter);

  static CovarianceOperator identity(Index dim);

  const Matrix& matrix() const { return c_; }
  double jitter() const { return jitter_; }
  Index dim() const { return c_.rows(); }

  Vector apply(const Vector& v) const { return c_ * v; }

  // L D^{1/2} z for C = (P^T L) D (P^T L)^T; factors lazily on first use
  // and fails loudly (suggesting more jitter) if the pivots are not
  // positive.
  Vector correlate(const Vector& z) const;

 private:
  void ensure_factored() const;

  Matrix c_;
  double jitter_;
  mutable Eigen::LDLT<Matrix> ldlt_;
  mutable bool factored_ = false;
};

CovarianceOperator assemble_covariance(const Grid2D& grid, const MaternParams& params,
                                       double jitter = 1e-10);

// Deterministic draw from N(0, C): correlates a counter-based standard
// normal vector, so equal seeds give bit-identical samples. Stream 0 is
// reserved for prior draws; observation streams start at 1.
Vector sample_prior(const CovarianceOperator& cov, std::uint64_t seed);

}  // namespace irgnm
