#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "irgnm/experiment.hpp"

namespace {

using irgnm::MethodKind;
using irgnm::ProblemKind;
using irgnm::StopKind;
using irgnm::TruthKind;

void add_common_flags(CLI::App* cmd, irgnm::RunConfig* cfg) {
  const std::map<std::string, ProblemKind> problems{{"potential", ProblemKind::potential},
                                                    {"darcy", ProblemKind::darcy}};
  const std::map<std::string, TruthKind> truths{{"smooth", TruthKind::smooth},
                                                {"discontinuous", TruthKind::discontinuous}};
  const std::map<std::string, MethodKind> methods{{"cirgnm", MethodKind::cirgnm},
                                                  {"dirgnm", MethodKind::dirgnm},
                                                  {"hirgnm", MethodKind::hirgnm}};
  const std::map<std::string, StopKind> stops{{"maxiter", StopKind::max_iter_only},
                                              {"discrepancy", StopKind::discrepancy}};

  cmd->add_option("--problem", cfg->problem, "Benchmark problem")
      ->transform(CLI::CheckedTransformer(problems, CLI::ignore_case))
      ->default_str("potential");
  cmd->add_option("--truth", cfg->truth, "True coefficient field")
      ->transform(CLI::CheckedTransformer(truths, CLI::ignore_case))
      ->default_str("smooth");
  cmd->add_option("--method", cfg->method, "Iteration variant")
      ->transform(CLI::CheckedTransformer(methods, CLI::ignore_case))
      ->default_str("cirgnm");
  cmd->add_option("--sigma", cfg->sigma,
                  "Noise standard deviation (default: 5e-4 potential, 2e-3 darcy)");
  cmd->add_option("--alpha0", cfg->alpha0, "Initial regularization weight")
      ->capture_default_str();
  cmd->add_option("--cdec", cfg->c_dec, "Geometric decrement of classical phases")
      ->capture_default_str();
  cmd->add_option("--beta", cfg->beta,
                  "Power decay of the dynamic phase; <= 0 uses the "
                  "Hoelder-calibrated rate 1/(2 - theta)")
      ->capture_default_str();
  cmd->add_option("--n-obs", cfg->n_obs,
                  "Observations: stream length for dirgnm/hirgnm; for cirgnm, invert "
                  "the n-average (1 = single observation, 0 = noise-free data)")
      ->capture_default_str();
  cmd->add_option("--max-iter", cfg->max_iter,
                  "Classical iteration budget (hybrid: length of the second phase)")
      ->capture_default_str();
  cmd->add_option("--grid", cfg->grid_n,
                  "Interior nodes per direction (0: 33 potential, 65 darcy)")
      ->capture_default_str();
  cmd->add_option("--data-grid", cfg->data_grid_n,
                  "Synthetic-data grid for darcy (0: 129; non-nested on purpose)")
      ->capture_default_str();
  cmd->add_option("--seed", cfg->seed, "Seed of the observation stream")->capture_default_str();
  cmd->add_option("--out", cfg->out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--nu", cfg->nu, "Matern smoothness")->capture_default_str();
  cmd->add_option("--ell", cfg->ell, "Matern correlation length")->capture_default_str();
  cmd->add_option("--c0", cfg->c0, "Matern variance")->capture_default_str();
  cmd->add_option("--theta", cfg->theta, "Interpolation parameter of the Hoelder rate")
      ->capture_default_str();
  cmd->add_option("--stop", cfg->stop, "Stopping rule")
      ->transform(CLI::CheckedTransformer(stops, CLI::ignore_case))
      ->default_str("maxiter");
  cmd->add_option("--tau", cfg->tau, "Discrepancy factor")->capture_default_str();

  // lets --config (an option of the top-level app) appear after the verb
  cmd->fallthrough();
}

void print_report(const irgnm::RunReport& rep) {
  std::cout << "trajectory: " << rep.trajectory_csv << "\n"
            << "estimates:  " << rep.best_estimate_csv << " (best), " << rep.final_estimate_csv
            << " (final)\n"
            << "min rel_error " << rep.min_rel_error << " at iteration " << rep.argmin_iter
            << " (phase " << rep.argmin_phase << "), final rel_error " << rep.final_rel_error
            << ", final alpha " << rep.final_alpha << "\n"
            << rep.iterations << " iterations in " << rep.wall_seconds << " s\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iteratively regularized Gauss-Newton experiments on elliptic inverse problems"};
  app.require_subcommand(1);
  // config files group keys under the verb, [run] style; keys already given as
  // flags keep their command-line value, and an unknown key is a hard error
  app.set_config("--config", "", "Config file with a [run]/[sweep-beta]/[compare] section");
  app.allow_config_extras(CLI::config_extras_mode::error);

  irgnm::RunConfig cfg;
  std::vector<double> betas{0.6, 0.75, 1.0, 1.2, 1.5, 2.0, 3.0};

  CLI::App* cmd_run = app.add_subcommand("run", "Run one configured inversion");
  add_common_flags(cmd_run, &cfg);

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep-beta", "Dynamic-method runs over several decay exponents");
  add_common_flags(cmd_sweep, &cfg);
  cmd_sweep->add_option("--betas", betas, "Decay exponents to sweep")->capture_default_str();

  CLI::App* cmd_cmp =
      app.add_subcommand("compare", "Noise-free / single / averaged / hybrid comparison");
  add_common_flags(cmd_cmp, &cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      print_report(irgnm::run(cfg));
    } else if (cmd_sweep->parsed()) {
      const auto reports = irgnm::sweep_beta(cfg, betas);
      bool any_failed = false;
      for (std::size_t i = 0; i < reports.size(); ++i) {
        const auto& rep = reports[i];
        if (rep.failed) {
          any_failed = true;
          std::cout << "beta " << betas[i] << ": failed: " << rep.error << "\n";
        } else {
          std::cout << "beta " << betas[i] << ": min rel_error " << rep.min_rel_error
                    << " at iteration " << rep.argmin_iter << ", final " << rep.final_rel_error
                    << "\n";
        }
      }
      std::cout << "summary: " << cfg.out_dir << "/summary.csv\n";
      if (any_failed) return 1;
    } else {
      static const char* names[] = {"noise_free", "single", "averaged", "hybrid"};
      const auto reports = irgnm::compare_methods(cfg);
      for (std::size_t i = 0; i < reports.size(); ++i)
        std::cout << names[i] << ": min rel_error " << reports[i].min_rel_error
                  << " at iteration " << reports[i].argmin_iter << " (phase "
                  << reports[i].argmin_phase << ")\n";
      std::cout << "summary: " << cfg.out_dir << "/summary.csv\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
