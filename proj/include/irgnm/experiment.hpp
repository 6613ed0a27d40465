#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "irgnm/forward_model.hpp"

namespace irgnm {

enum class ProblemKind { potential, darcy };
enum class MethodKind { cirgnm, dirgnm, hirgnm };
enum class StopKind { max_iter_only, discrepancy };

// Everything one experiment needs, with 0 / NaN meaning "use the
// per-problem default". The defaults mirror the reference configuration:
// alpha0 1e-3, geometric decrement 1.5, power decay 1.2, Matern
// (c0, nu, ell) = (1, 3, 0.08), potential on a 33 grid with analytic
// data, darcy on a 65 grid with synthetic data from a non-nested 129
// grid.
struct RunConfig {
  ProblemKind problem = ProblemKind::potential;
  TruthKind truth = TruthKind::smooth;
  MethodKind method = MethodKind::cirgnm;

  // Observation noise level; NaN picks the per-problem default (5e-4
  // potential, 2e-3 darcy).
  double sigma = std::numeric_limits<double>::quiet_NaN();

  double alpha0 = 1e-3;
  double c_dec = 1.5;  // classical phases, including the hybrid tail
  double beta = 1.2;   // dynamic decay; <= 0 selects the Hoelder-calibrated rate
  long n_obs = 50;
  long max_iter = 15;  // classical budget; for the hybrid, the tail length
  long grid_n = 0;
  long data_grid_n = 0;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  double nu = 3.0;
  double ell = 0.08;
  double c0 = 1.0;

  double theta = 0.5;  // interpolation parameter behind the Hoelder rate

  StopKind stop = StopKind::max_iter_only;
  double tau = 2.5;  // discrepancy factor
};

struct RunReport {
  std::string trajectory_csv;
  std::string final_estimate_csv;
  std::string best_estimate_csv;
  double min_rel_error = std::numeric_limits<double>::quiet_NaN();
  long argmin_iter = 0;
  int argmin_phase = 1;
  double final_rel_error = std::numeric_limits<double>::quiet_NaN();
  double final_alpha = std::numeric_limits<double>::quiet_NaN();
  long iterations = 0;
  double wall_seconds = 0.0;
  bool failed = false;  // only set on sweep members whose run threw
  std::string error;
};

double default_sigma(ProblemKind problem);

// Builds the configured problem, synthesizes the observation stream from
// the seed, dispatches to the matching driver, and writes trajectory.csv
// plus estimate_final.csv / estimate_best.csv under out_dir.
RunReport run(const RunConfig& config);

// One dynamic-method run per decay exponent, with identical seed (hence
// bit-identical observation sequences) across members. Members execute
// concurrently, each in its own subdirectory, and a combined summary.csv
// is written. A failing member gets a nan row and the sweep continues.
std::vector<RunReport> sweep_beta(const RunConfig& config, const std::vector<double>& betas);

// The four-way comparison on shared data: classical on noise-free data,
// on a single observation, on the n_obs-average, and the hybrid method.
// One subdirectory per variant plus summary.csv; any failure propagates
// after the summary is complete.
std::vector<RunReport> compare_methods(const RunConfig& config);

}  // namespace irgnm
