#include "irgnm/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace irgnm {

namespace {

void check_alpha0(double alpha0) {
  if (!(alpha0 > 0.0) || alpha0 > 1.0)
    throw std::invalid_argument("RegSchedule: alpha0 must lie in (0, 1]");
}

}  // namespace

RegSchedule RegSchedule::geometric(double alpha0, double c_dec) {
  check_alpha0(alpha0);
  if (!(c_dec > 1.0)) throw std::invalid_argument("RegSchedule: c_dec must exceed 1");
  RegSchedule s(Kind::geometric, alpha0);
  s.c_dec_ = c_dec;
  return s;
}

RegSchedule RegSchedule::power(double alpha0, double beta) {
  check_alpha0(alpha0);
  if (!(beta > 0.0)) throw std::invalid_argument("RegSchedule: beta must be positive");
  RegSchedule s(Kind::power, alpha0);
  s.beta_ = beta;
  return s;
}

RegSchedule RegSchedule::holder(double alpha0, double nu, double theta) {
  check_alpha0(alpha0);
  if (!(nu >= 0.0) || nu >= 1.0)
    throw std::invalid_argument("RegSchedule: nu must lie in [0, 1)");
  if (!(theta > 0.0) || !(theta < 1.0))
    throw std::invalid_argument("RegSchedule: theta must lie in (0, 1)");
  RegSchedule s(Kind::holder, alpha0);
  s.nu_ = nu;
  s.theta_ = theta;
  return s;
}

double RegSchedule::decay_exponent() const {
  if (kind_ != Kind::holder)
    throw std::logic_error("RegSchedule: decay_exponent is defined for the holder family");
  return (1.0 - nu_) / (2.0 - nu_ - theta_ * (1.0 - nu_));
}

double RegSchedule::alpha(long n) const {
  switch (kind_) {
    case Kind::geometric:
      if (n < 0) throw std::invalid_argument("RegSchedule: geometric index must be >= 0");
      return alpha0_ * std::pow(c_dec_, -static_cast<double>(n));
    case Kind::power:
      if (n < 1) throw std::invalid_argument("RegSchedule: power-law schedules are 1-based");
      return alpha0_ * std::pow(static_cast<double>(n), -beta_);
    case Kind::holder: {
      if (n < 1) throw std::invalid_argument("RegSchedule: power-law schedules are 1-based");
      const double e = (1.0 - nu_) / (2.0 - nu_ - theta_ * (1.0 - nu_));
      return alpha0_ * std::pow(static_cast<double>(n), -e);
    }
  }
  throw std::logic_error("RegSchedule: unreachable");
}

StopRule StopRule::max_iterations(long m) {
  if (m < 0) throw std::invalid_argument("StopRule: negative iteration budget");
  StopRule r;
  r.discrepancy_ = false;
  r.max_iter_ = m;
  return r;
}

StopRule StopRule::discrepancy(double tau, double noise_norm_estimate) {
  if (!(tau > 1.0)) throw std::invalid_argument("StopRule: discrepancy needs tau > 1");
  if (noise_norm_estimate < 0.0)
    throw std::invalid_argument("StopRule: negative noise norm estimate");
  StopRule r;
  r.discrepancy_ = true;
  r.tau_ = tau;
  r.noise_norm_ = noise_norm_estimate;
  return r;
}

bool should_stop(const StopRule& rule, long n, double residual_norm) {
  if (rule.is_discrepancy()) return residual_norm <= rule.tau() * rule.noise_norm();
  return n >= rule.max_iter();
}

}  // namespace irgnm
