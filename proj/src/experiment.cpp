#include "irgnm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <memory>
#include <stdexcept>
#include <utility>

#include "irgnm/csv.hpp"
#include "irgnm/darcy.hpp"
#include "irgnm/matern.hpp"
#include "irgnm/newton.hpp"
#include "irgnm/potential.hpp"

namespace irgnm {

double default_sigma(ProblemKind problem) {
  return problem == ProblemKind::potential ? 5e-4 : 2e-3;
}

namespace {

namespace fs = std::filesystem;

struct Setup {
  std::shared_ptr<ForwardModel> model;
  Grid2D grid;
  Vector truth;
  Vector y_true;
  Vector u0;
  std::shared_ptr<const CovarianceOperator> prior;
  double sigma = 0.0;
};

Setup build_setup(const RunConfig& cfg) {
  Setup s;
  s.sigma = std::isnan(cfg.sigma) ? default_sigma(cfg.problem) : cfg.sigma;
  if (s.sigma < 0.0) throw std::invalid_argument("run: sigma must be nonnegative");

  if (cfg.problem == ProblemKind::potential) {
    const Index n = cfg.grid_n > 0 ? cfg.grid_n : 33;
    auto prob = std::make_shared<PotentialProblem>(n, cfg.truth);
    s.grid = prob->grid();
    s.truth = prob->truth_field();
    s.y_true = prob->exact_data();  // analytic, needs no finer data grid
    s.u0 = Vector::Zero(prob->dim_param());
    s.model = std::move(prob);
  } else {
    const Index n = cfg.grid_n > 0 ? cfg.grid_n : 65;
    const Index n_fine = cfg.data_grid_n > 0 ? cfg.data_grid_n : 129;
    auto prob = std::make_shared<DarcyProblem>(n);
    s.grid = prob->grid();
    s.truth = prob->truth_field(cfg.truth);
    // Synthetic data from a finer, deliberately non-nested grid, so the
    // inversion never sees its own discretization of the truth.
    DarcyProblem fine(n_fine);
    s.y_true = fine.apply(fine.truth_field(cfg.truth));
    auto cov = std::make_shared<CovarianceOperator>(
        assemble_covariance(prob->grid(), MaternParams{cfg.c0, cfg.nu, cfg.ell}));
    s.u0 = cfg.truth == TruthKind::smooth ? Vector::Ones(prob->dim_param())
                                          : sample_prior(*cov, cfg.seed);
    s.prior = std::move(cov);
    s.model = std::move(prob);
  }
  return s;
}

double resolve_beta(const RunConfig& cfg) {
  if (cfg.beta > 0.0) return cfg.beta;
  // Worst-case smoothness index 0 gives the conservative theory rate
  // 1 / (2 - theta).
  return RegSchedule::holder(cfg.alpha0, 0.0, cfg.theta).decay_exponent();
}

GnConfig make_gn(const RunConfig& cfg, const Setup& s) {
  GnConfig gn;
  gn.u0 = s.u0;
  gn.truth = s.truth;
  gn.prior = s.prior;
  gn.c_dec_hybrid = cfg.c_dec;
  gn.schedule = cfg.method == MethodKind::cirgnm
                    ? RegSchedule::geometric(cfg.alpha0, cfg.c_dec)
                    : RegSchedule::power(cfg.alpha0, resolve_beta(cfg));
  if (cfg.stop == StopKind::discrepancy) {
    // Expected observation-space norm of the noise on the data actually
    // inverted: sigma sqrt(w_obs dim) for one observation, shrunk by
    // sqrt(count) when count observations are averaged. The classical
    // noise-free variant has nothing to stop on.
    const double effective_sigma =
        (cfg.method == MethodKind::cirgnm && cfg.n_obs == 0) ? 0.0 : s.sigma;
    const long count = std::max<long>(cfg.n_obs, 1);
    const double noise_norm =
        effective_sigma * std::sqrt(s.model->obs_weight() *
                                    static_cast<double>(s.model->dim_obs()) /
                                    static_cast<double>(count));
    gn.stop = StopRule::discrepancy(cfg.tau, noise_norm);
  }
  return gn;
}

}  // namespace

RunReport run(const RunConfig& cfg) {
  if (cfg.n_obs < 0) throw std::invalid_argument("run: n_obs must be nonnegative");
  if (cfg.max_iter < 0) throw std::invalid_argument("run: max_iter must be nonnegative");
  if (cfg.out_dir.empty()) throw std::invalid_argument("run: output directory not set");

  const auto t0 = std::chrono::steady_clock::now();
  const Setup s = build_setup(cfg);
  const GnConfig gn = make_gn(cfg, s);
  const ObservationStream stream(s.y_true, NoiseConfig{s.sigma, cfg.seed});

  Trajectory traj;
  switch (cfg.method) {
    case MethodKind::cirgnm: {
      Vector w = s.y_true;  // n_obs = 0: invert the noise-free data
      if (cfg.n_obs > 0) {
        AveragedData zbar;
        for (long n = 1; n <= cfg.n_obs; ++n) zbar = average_update(zbar, stream.at(n));
        w = std::move(zbar.z);
      }
      traj = run_cirgnm(*s.model, gn, s.u0, w, cfg.max_iter, cfg.n_obs);
      break;
    }
    case MethodKind::dirgnm:
      traj = run_dirgnm(*s.model, gn, stream, cfg.n_obs);
      break;
    case MethodKind::hirgnm:
      traj = run_hirgnm(*s.model, gn, stream, cfg.n_obs, cfg.max_iter);
      break;
  }

  fs::create_directories(cfg.out_dir);
  RunReport rep;
  rep.trajectory_csv = (fs::path(cfg.out_dir) / "trajectory.csv").string();
  rep.final_estimate_csv = (fs::path(cfg.out_dir) / "estimate_final.csv").string();
  rep.best_estimate_csv = (fs::path(cfg.out_dir) / "estimate_best.csv").string();
  write_trajectory_csv(rep.trajectory_csv, traj);
  write_field_csv(rep.final_estimate_csv, s.grid, traj.final_estimate);
  write_field_csv(rep.best_estimate_csv, s.grid, traj.best_estimate);

  rep.min_rel_error = traj.min_rel_error;
  rep.argmin_iter = traj.best_iter;
  rep.argmin_phase = traj.best_phase;
  rep.final_rel_error = traj.records.empty()
                            ? relative_error(traj.final_estimate, s.truth, s.grid)
                            : traj.records.back().rel_error;
  rep.final_alpha = traj.final_alpha;
  rep.iterations = static_cast<long>(traj.records.size());
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

std::vector<RunReport> sweep_beta(const RunConfig& config, const std::vector<double>& betas) {
  if (betas.empty()) throw std::invalid_argument("sweep_beta: no decay exponents given");
  if (config.out_dir.empty()) throw std::invalid_argument("sweep_beta: output directory not set");
  fs::create_directories(config.out_dir);

  std::vector<std::future<RunReport>> pending;
  pending.reserve(betas.size());
  for (const double b : betas) {
    RunConfig member = config;
    member.method = MethodKind::dirgnm;
    member.beta = b;
    member.out_dir = (fs::path(config.out_dir) / ("beta_" + format_full(b))).string();
    pending.push_back(std::async(std::launch::async, [member] { return run(member); }));
  }

  std::ofstream summary(fs::path(config.out_dir) / "summary.csv", std::ios::binary);
  if (!summary) throw std::runtime_error("sweep_beta: cannot open summary.csv");
  summary << "beta,min_error,final_error,argmin_iter\n";

  std::vector<RunReport> reports;
  reports.reserve(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    RunReport rep;
    try {
      rep = pending[i].get();
    } catch (const std::exception& e) {
      rep.failed = true;
      rep.error = e.what();
    }
    summary << format_full(betas[i]) << ',' << format_full(rep.min_rel_error) << ','
            << format_full(rep.final_rel_error) << ',' << (rep.failed ? -1 : rep.argmin_iter)
            << '\n';
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::vector<RunReport> compare_methods(const RunConfig& config) {
  if (config.n_obs < 1)
    throw std::invalid_argument("compare: needs at least one observation");
  if (config.out_dir.empty()) throw std::invalid_argument("compare: output directory not set");
  fs::create_directories(config.out_dir);

  struct Variant {
    const char* name;
    MethodKind method;
    long n_obs;
  };
  const Variant variants[] = {
      {"noise_free", MethodKind::cirgnm, 0},
      {"single", MethodKind::cirgnm, 1},
      {"averaged", MethodKind::cirgnm, config.n_obs},
      {"hybrid", MethodKind::hirgnm, config.n_obs},
  };

  std::vector<std::future<RunReport>> pending;
  for (const auto& v : variants) {
    RunConfig member = config;
    member.method = v.method;
    member.n_obs = v.n_obs;
    member.out_dir = (fs::path(config.out_dir) / v.name).string();
    pending.push_back(std::async(std::launch::async, [member] { return run(member); }));
  }

  std::ofstream summary(fs::path(config.out_dir) / "summary.csv", std::ios::binary);
  if (!summary) throw std::runtime_error("compare: cannot open summary.csv");
  summary << "variant,min_rel_error,argmin_iter\n";

  std::vector<RunReport> reports;
  std::string first_failure;
  for (std::size_t i = 0; i < std::size(variants); ++i) {
    RunReport rep;
    try {
      rep = pending[i].get();
    } catch (const std::exception& e) {
      rep.failed = true;
      rep.error = e.what();
      if (first_failure.empty())
        first_failure = std::string(variants[i].name) + ": " + e.what();
    }
    summary << variants[i].name << ',' << format_full(rep.min_rel_error) << ','
            << (rep.failed ? -1 : rep.argmin_iter) << '\n';
    reports.push_back(std::move(rep));
  }
  if (!first_failure.empty()) throw std::runtime_error("compare: " + first_failure);
  return reports;
}

}  // namespace irgnm
