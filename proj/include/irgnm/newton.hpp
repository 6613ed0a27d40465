#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "irgnm/forward_model.hpp"
#include "irgnm/matern.hpp"
#include "irgnm/observation.hpp"
#include "irgnm/schedule.hpp"

namespace irgnm {

// Inner Krylov solver gave up before reaching the requested residual.
struct KrylovError : std::runtime_error {
  KrylovError(double achieved_rel_residual, long iterations)
      : std::runtime_error("gn_step_identity: conjugate gradients stalled at relative residual " +
                          std::to_string(achieved_rel_residual) + " after " +
                          std::to_string(iterations) + " iterations"),
        achieved(achieved_rel_residual),
        iters(iterations) {}
  double achieved;
  long iters;
};

// Settings shared by all drivers. u0 is both the default starting point
// and the fixed anchor the regularization pulls toward. A prior switches
// the update to the covariance-preconditioned form; otherwise the model's
// native step is used when present and allowed, and the matrix-free
// conjugate-gradient step as the general fallback. truth, when given,
// turns on per-iteration relative-error monitoring.
struct GnConfig {
  Vector u0;
  RegSchedule schedule = RegSchedule::geometric(1e-3, 1.5);
  std::optional<StopRule> stop;
  std::shared_ptr<const CovarianceOperator> prior;
  std::optional<Vector> truth;
  double c_dec_hybrid = 1.5;  // geometric decrement of the hybrid's second phase
  double krylov_tol = 1e-10;
  long krylov_max_iter = 5000;
  bool use_native_step = true;
};

struct TrajectoryRecord {
  long iter = 0;       // 1-based within its phase
  int phase = 1;       // 1 = dynamic/classical, 2 = hybrid's classical tail
  double alpha = 0.0;
  long n_obs_used = 0;
  double rel_error = std::numeric_limits<double>::quiet_NaN();
  double residual_norm = 0.0;
  double misfit_value = 0.0;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
  Vector final_estimate;
  double final_alpha = std::numeric_limits<double>::quiet_NaN();

  // Estimate at the smallest monitored relative error; equals the final
  // iterate when no truth was supplied.
  Vector best_estimate;
  long best_iter = 0;
  int best_phase = 1;
  double min_rel_error = std::numeric_limits<double>::quiet_NaN();
};

// Column schema: iter,phase,alpha,n_obs_used,rel_error,residual_norm,misfit
void write_trajectory_csv(const std::string& path, const Trajectory& t);

// One iteratively regularized Gauss-Newton update with identity prior:
// the minimizer over u of
//   S(F(u_n) + F'[u_n](u - u_n); w) + alpha ||u - u_anchor||^2-type
// penalization, i.e. the solution of
//   (F'* F' + alpha I)(u - u_n) = F'*(w - F(u_n)) + alpha (u_anchor - u_n),
// solved matrix-free by conjugate gradients on the parameter space.
Vector gn_step_identity(const ForwardModel& model, const Linearization& lin, const Vector& u_n,
                        const Vector& u_anchor, const Vector& w, double alpha, double tol = 1e-10,
                        long max_iter = 5000);
Vector gn_step_identity(const ForwardModel& model, const Vector& u_n, const Vector& u_anchor,
                        const Vector& w, double alpha, double tol = 1e-10, long max_iter = 5000);

// Covariance-preconditioned update: for prior covariance C,
//   u = u_anchor + C F'* (F' C F'* + alpha I)^{-1}
//         (w - F(u_n) - F'(u_anchor - u_n)),
// which solves the same regularized problem in the norm induced by
// C^{-1}. The bracketed system is a dense symmetric K x K solve in
// observation space, factorized by Cholesky.
Vector gn_step_covariance(const ForwardModel& model, const CovarianceOperator& prior,
                          const Linearization& lin, const Vector& u_n, const Vector& u_anchor,
                          const Vector& w, double alpha);
Vector gn_step_covariance(const ForwardModel& model, const CovarianceOperator& prior,
                          const Vector& u_n, const Vector& u_anchor, const Vector& w, double alpha);

// Classical iteration on fixed data w: n = 1..m steps of the configured
// update with alpha_n from the schedule, anchored at config.u0 and
// started from u_start. n_obs_label is stamped into the trajectory's
// n_obs_used column (how many raw observations went into w; purely
// bookkeeping).
Trajectory run_cirgnm(const ForwardModel& model, const GnConfig& config, const Vector& u_start,
                      const Vector& w, long m, long n_obs_label = 0);

// Dynamic iteration: at step n the running average of the first n stream
// observations is the data and alpha_n comes from the (typically
// power-law) schedule. Starts at the anchor config.u0.
Trajectory run_dirgnm(const ForwardModel& model, const GnConfig& config,
                      const ObservationStream& stream, long n_obs);

// Dynamic phase over n_obs observations followed by a classical phase of
// m steps on the final average Z_N, started at the dynamic estimate,
// anchored at the original config.u0, with the geometric schedule seeded
// at the dynamic phase's final alpha.
Trajectory run_hirgnm(const ForwardModel& model, const GnConfig& config,
                      const ObservationStream& stream, long n_obs, long m);

}  // namespace irgnm
