#include "irgnm/newton.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <fstream>

#include "irgnm/csv.hpp"

namespace irgnm {

namespace {

void check_step_args(const ForwardModel& model, const Vector& u_n, const Vector& u_anchor,
                     const Vector& w, double alpha) {
  if (u_n.size() != model.dim_param() || u_anchor.size() != model.dim_param())
    throw std::invalid_argument("gn_step: parameter size does not match model");
  if (w.size() != model.dim_obs())
    throw std::invalid_argument("gn_step: data size does not match model");
  if (!(alpha > 0.0)) throw std::invalid_argument("gn_step: alpha must be positive");
}

}  // namespace

Vector gn_step_identity(const ForwardModel& model, const Linearization& lin, const Vector& u_n,
                        const Vector& u_anchor, const Vector& w, double alpha, double tol,
                        long max_iter) {
  check_step_args(model, u_n, u_anchor, w, alpha);
  if (max_iter < 1) throw std::invalid_argument("gn_step_identity: max_iter must be >= 1");

  const auto op = [&](const Vector& v) -> Vector { return lin.adjoint(lin.deriv(v)) + alpha * v; };

  const Vector rhs = lin.adjoint(w - lin.value()) + alpha * (u_anchor - u_n);

  // Conjugate gradients on the parameter space. The operator is
  // self-adjoint positive definite in the parameter inner product, which
  // is a scalar multiple of the Euclidean one, so the scalar cancels from
  // every CG coefficient and plain dots suffice.
  Vector x = Vector::Zero(rhs.size());
  Vector r = rhs;
  double rr = r.squaredNorm();
  const double target = tol * std::sqrt(rr);
  if (std::sqrt(rr) == 0.0) return u_n + x;
  Vector p = r;
  long it = 0;
  for (; it < max_iter; ++it) {
    const Vector ap = op(p);
    const double pap = p.dot(ap);
    if (!(pap > 0.0))
      throw std::runtime_error("gn_step_identity: operator lost positive definiteness");
    const double gamma = rr / pap;
    x += gamma * p;
    r -= gamma * ap;
    const double rr_next = r.squaredNorm();
    if (std::sqrt(rr_next) <= target) return u_n + x;
    p = r + (rr_next / rr) * p;
    rr = rr_next;
  }
  throw KrylovError(std::sqrt(rr) / (target / tol), it);
}

Vector gn_step_identity(const ForwardModel& model, const Vector& u_n, const Vector& u_anchor,
                        const Vector& w, double alpha, double tol, long max_iter) {
  auto lin = model.linearize(u_n);
  return gn_step_identity(model, *lin, u_n, u_anchor, w, alpha, tol, max_iter);
}

Vector gn_step_covariance(const ForwardModel& model, const CovarianceOperator& prior,
                          const Linearization& lin, const Vector& u_n, const Vector& u_anchor,
                          const Vector& w, double alpha) {
  check_step_args(model, u_n, u_anchor, w, alpha);
  if (prior.dim() != model.dim_param())
    throw std::invalid_argument("gn_step_covariance: prior dimension does not match model");

  // C applied to the adjoint of each observation direction. The adjoint
  // matrix is (w_obs / w_param) J^T for the scalar-weighted inner
  // products, so C J^* = ratio * C J^T.
  const double ratio = model.obs_weight() / model.param_weight();
  const Matrix jac = lin.dense_jacobian();
  const Matrix cjt = ratio * (prior.matrix() * jac.transpose());

  Matrix sys = jac * cjt;
  sys = 0.5 * (sys + sys.transpose());  // symmetrize roundoff
  sys.diagonal().array() += alpha;

  const Vector bracket = w - lin.value() - lin.deriv(u_anchor - u_n);
  Eigen::LLT<Matrix> llt(sys);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("gn_step_covariance: observation-space system is not positive definite");
  return u_anchor + cjt * llt.solve(bracket);
}

Vector gn_step_covariance(const ForwardModel& model, const CovarianceOperator& prior,
                          const Vector& u_n, const Vector& u_anchor, const Vector& w,
                          double alpha) {
  auto lin = model.linearize(u_n);
  return gn_step_covariance(model, prior, *lin, u_n, u_anchor, w, alpha);
}

namespace {

Vector take_step(const ForwardModel& model, const GnConfig& cfg, const Linearization& lin,
                 const Vector& u, const Vector& w, double alpha) {
  if (cfg.prior) return gn_step_covariance(model, *cfg.prior, lin, u, cfg.u0, w, alpha);
  if (cfg.use_native_step)
    if (auto u_next = model.native_step(lin, u, cfg.u0, w, alpha)) return *std::move(u_next);
  return gn_step_identity(model, lin, u, cfg.u0, w, alpha, cfg.krylov_tol, cfg.krylov_max_iter);
}

void record_iterate(Trajectory& traj, const ForwardModel& model, const GnConfig& cfg,
                    const Linearization& lin, const Vector& u, long iter, int phase, double alpha,
                    long n_obs_used, const Vector& w, double* residual_out) {
  TrajectoryRecord rec;
  rec.iter = iter;
  rec.phase = phase;
  rec.alpha = alpha;
  rec.n_obs_used = n_obs_used;
  rec.residual_norm = model.norm_obs(lin.value() - w);
  rec.misfit_value = misfit(lin.value(), w, model.obs_weight());
  if (cfg.truth) {
    // Relative L2 error; the uniform mesh weight cancels in the quotient.
    const double tn = cfg.truth->norm();
    if (tn == 0.0) throw std::invalid_argument("GnConfig: reference truth field is zero");
    rec.rel_error = (u - *cfg.truth).norm() / tn;
    if (!(rec.rel_error >= traj.min_rel_error)) {  // also true on the first record (NaN min)
      traj.min_rel_error = rec.rel_error;
      traj.best_estimate = u;
      traj.best_iter = iter;
      traj.best_phase = phase;
    }
  }
  traj.records.push_back(rec);
  *residual_out = rec.residual_norm;
}

void finalize(Trajectory& traj, const Vector& u, double alpha) {
  traj.final_estimate = u;
  traj.final_alpha = alpha;
  if (!traj.best_estimate.size()) {
    traj.best_estimate = u;
    traj.best_iter = traj.records.empty() ? 0 : traj.records.back().iter;
    traj.best_phase = traj.records.empty() ? 1 : traj.records.back().phase;
  }
}

// Shared classical loop; appends to an existing trajectory so the hybrid
// driver can continue one.
void run_classic_into(Trajectory& traj, const ForwardModel& model, const GnConfig& cfg,
                      const RegSchedule& schedule, Vector u, const Vector& w, long m,
                      long n_obs_label, int phase) {
  if (m < 0) throw std::invalid_argument("run_cirgnm: negative iteration count");
  if (cfg.u0.size() != model.dim_param())
    throw std::invalid_argument("GnConfig: anchor size does not match model");
  double alpha = schedule.alpha0();
  auto lin = model.linearize(u);
  for (long n = 1; n <= m; ++n) {
    alpha = schedule.alpha(n);
    u = take_step(model, cfg, *lin, u, w, alpha);
    lin = model.linearize(u);
    double residual = 0.0;
    record_iterate(traj, model, cfg, *lin, u, n, phase, alpha, n_obs_label, w, &residual);
    if (cfg.stop && should_stop(*cfg.stop, n, residual)) break;
  }
  finalize(traj, u, alpha);
}

}  // namespace

Trajectory run_cirgnm(const ForwardModel& model, const GnConfig& config, const Vector& u_start,
                      const Vector& w, long m, long n_obs_label) {
  Trajectory traj;
  run_classic_into(traj, model, config, config.schedule, u_start, w, m, n_obs_label, 1);
  return traj;
}

Trajectory run_dirgnm(const ForwardModel& model, const GnConfig& config,
                      const ObservationStream& stream, long n_obs) {
  if (n_obs < 0) throw std::invalid_argument("run_dirgnm: negative observation count");
  if (config.u0.size() != model.dim_param())
    throw std::invalid_argument("GnConfig: anchor size does not match model");
  if (stream.dim() != model.dim_obs())
    throw std::invalid_argument("run_dirgnm: stream dimension does not match model");

  Trajectory traj;
  Vector u = config.u0;
  double alpha = config.schedule.alpha0();
  AveragedData zbar;
  auto lin = model.linearize(u);
  for (long n = 1; n <= n_obs; ++n) {
    zbar = average_update(zbar, stream.at(n));
    alpha = config.schedule.alpha(n);
    u = take_step(model, config, *lin, u, zbar.z, alpha);
    lin = model.linearize(u);
    double residual = 0.0;
    record_iterate(traj, model, config, *lin, u, n, 1, alpha, n, zbar.z, &residual);
    if (config.stop && should_stop(*config.stop, n, residual)) break;
  }
  finalize(traj, u, alpha);
  return traj;
}

Trajectory run_hirgnm(const ForwardModel& model, const GnConfig& config,
                      const ObservationStream& stream, long n_obs, long m) {
  if (n_obs < 1)
    throw std::invalid_argument("run_hirgnm: the dynamic phase requires at least one observation");

  Trajectory traj = run_dirgnm(model, config, stream, n_obs);

  // The classical tail reuses the data the dynamic phase ended with: the
  // full running average and the final regularization weight.
  AveragedData zbar;
  const long used = traj.records.empty() ? n_obs : traj.records.back().n_obs_used;
  for (long n = 1; n <= used; ++n) zbar = average_update(zbar, stream.at(n));

  const RegSchedule tail = RegSchedule::geometric(traj.final_alpha, config.c_dec_hybrid);
  run_classic_into(traj, model, config, tail, traj.final_estimate, zbar.z, m, used, 2);
  return traj;
}

void write_trajectory_csv(const std::string& path, const Trajectory& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
  f << "iter,phase,alpha,n_obs_used,rel_error,residual_norm,misfit\n";
  for (const auto& r : t.records) {
    f << r.iter << ',' << r.phase << ',' << format_full(r.alpha) << ',' << r.n_obs_used << ','
      << format_full(r.rel_error) << ',' << format_full(r.residual_norm) << ','
      << format_full(r.misfit_value) << '\n';
  }
}

}  // namespace irgnm
