#pragma once

#include <cstdint>

namespace irgnm {

// Regularization weight sequence alpha_n, one of three families:
//   geometric  alpha0 * c_dec^(-n)          n >= 0, c_dec > 1
//   power      alpha0 * n^(-beta)           n >= 1, beta > 0
//   holder     alpha0 * n^(-e(nu, theta))   n >= 1,
// with e(nu, theta) = (1-nu) / (2 - nu - theta*(1-nu)), the decay rate
// tuned to a Hoelder-type smoothness index nu in [0,1) and interpolation
// parameter theta in (0,1); e always lies in (0,1). All families need
// alpha0 in (0,1], the normalization the convergence theory assumes, and
// satisfy the bounded-decay ratio alpha_n / alpha_{n+1} <= C with C equal
// to c_dec (geometric) resp. 2^beta (power, n >= 1).
class RegSchedule {
 public:
  enum class Kind { geometric, power, holder };

  static RegSchedule geometric(double alpha0, double c_dec);
  static RegSchedule power(double alpha0, double beta);
  static RegSchedule holder(double alpha0, double nu, double theta);

  double alpha(long n) const;
  Kind kind() const { return kind_; }
  double alpha0() const { return alpha0_; }
  double c_dec() const { return c_dec_; }
  double beta() const { return beta_; }

  // Exponent e(nu, theta); only meaningful for the holder family.
  double decay_exponent() const;

 private:
  RegSchedule(Kind kind, double alpha0) : kind_(kind), alpha0_(alpha0) {}

  Kind kind_;
  double alpha0_;
  double c_dec_ = 0.0;
  double beta_ = 0.0;
  double nu_ = 0.0;
  double theta_ = 0.0;
};

// Termination policy for a driver loop: either a fixed iteration budget or
// the discrepancy principle, which stops once the data residual drops to
// tau times the estimated noise norm.
class StopRule {
 public:
  static StopRule max_iterations(long m);
  static StopRule discrepancy(double tau, double noise_norm_estimate);

  bool is_discrepancy() const { return discrepancy_; }
  long max_iter() const { return max_iter_; }
  double tau() const { return tau_; }
  double noise_norm() const { return noise_norm_; }

 private:
  StopRule() = default;
  bool discrepancy_ = false;
  long max_iter_ = 0;
  double tau_ = 0.0;
  double noise_norm_ = 0.0;
};

// True when the rule says to stop after iteration n produced the given
// residual norm (in the model's observation norm).
bool should_stop(const StopRule& rule, long n, double residual_norm);

}  // namespace irgnm
