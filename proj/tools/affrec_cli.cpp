// Command-line front end.
//
//   affrec run <config.json> [--workers N]
//   affrec acceptance [--seed N] [--quick] [--workers N] [--out DIR]
//   affrec list-experiments
//   affrec print-schema
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 acceptance failure.

#include "affrec/affrec.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <string>

namespace {

constexpr const char* kSchemaText = R"SCHEMA({
  "schema_version": 1,
  "experiment": "lyapunov | sigma2 | ladder_tail | contraction | rnc_moments | recurrence | rk1_suite | exterior_suite | acceptance_all",
  "model": {
    "ref": "optional registry name (similarity, similarity_d3, similarity_drift, rotation, rank_one, rank_one_skewed, invertible_proximal, nonnegative, diagonal_cex, permutation_cex)",
    "family": "similarity | rank_one | invertible_proximal | nonnegative | diagonal_counterexample | permutation_counterexample",
    "d": 2,
    "log_scale_shift": 0.0,
    "mean_a": 0.0, "sigma_a": 1.0, "rotation_free": false,
    "wtilde_kappa": 0.0, "fixed_alignment": 0.0,
    "atoms": [[1.0, 0.0, 0.0, 1.0]], "weights": [1.0], "jitter": 0.0,
    "entry_mu": 0.0, "entry_sigma": 1.0,
    "s": 1.0, "lambda": 2.0,
    "sigma_b": 1.0, "b_mean": 0.0, "heavy_tail_b": false, "pareto_index": 3.0
  },
  "seed": 12345,
  "horizon": 10000,
  "replicas": 100,
  "cap": 100000,
  "rho": 0.36787944117144233,
  "K": 20.0,
  "beta_grid": [3.5],
  "alpha": 0.5,
  "rnc_checkpoints": [100, 1000],
  "thresholds": {
    "recurrent_min_frequency": 0.01,
    "transient_max_frequency": 0.001,
    "significance": 3.0
  },
  "workers": 1,
  "burn_in": 200,
  "output_dir": "affrec_out",
  "quick": false
}
All keys other than schema_version, experiment, model and seed are optional.
Unknown keys are rejected. AFFREC_OUTPUT_DIR overrides output_dir.)SCHEMA";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"simulation lab for critical random affine recursions"};
  app.require_subcommand(1);

  std::string config_path;
  int workers = 0;
  auto* cmd_run = app.add_subcommand("run", "run an experiment config");
  cmd_run->add_option("config", config_path, "JSON config file")->required();
  cmd_run->add_option("--workers", workers, "override worker count");

  std::uint64_t seed = 20260801ull;
  bool quick = false;
  std::string out_dir = "affrec_out";
  int acc_workers = 0;
  auto* cmd_acc = app.add_subcommand("acceptance", "run the acceptance suite");
  cmd_acc->add_option("--seed", seed, "master seed");
  cmd_acc->add_flag("--quick", quick, "reduced budgets, same assertions");
  cmd_acc->add_option("--workers", acc_workers, "worker count");
  cmd_acc->add_option("--out", out_dir, "output directory");

  app.add_subcommand("list-experiments", "print registered experiment names");
  app.add_subcommand("print-schema", "print the config schema");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-experiments")) {
      for (const auto& n : affrec::experiment_names()) std::cout << n << "\n";
      return 0;
    }
    if (app.got_subcommand("print-schema")) {
      std::cout << kSchemaText << "\n";
      return 0;
    }
    if (app.got_subcommand("run")) {
      affrec::ExperimentConfig cfg = affrec::parse_config_file(config_path);
      if (workers > 0) cfg.workers = workers;
      affrec::RunReport rep = affrec::run(cfg, std::cerr);
      return rep.acceptance_failed ? 4 : 0;
    }
    // acceptance
    affrec::AcceptanceOptions opts;
    opts.seed = seed;
    opts.quick = quick;
    opts.workers = acc_workers > 0 ? acc_workers : affrec::resolve_workers(0);
    if (const char* env = std::getenv("AFFREC_OUTPUT_DIR"))
      if (*env) out_dir = env;
    opts.output_dir = out_dir;
    std::filesystem::create_directories(opts.output_dir);
    auto results = affrec::run_acceptance(opts, std::cout);
    for (const auto& r : results)
      if (!r.pass) return 4;
    return 0;
  } catch (const affrec::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const affrec::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
