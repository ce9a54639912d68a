#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "symcd/experiments.hpp"
#include "symcd/report.hpp"

// Command-line front end for the experiment runner. Kept in a header so the
// parser is unit-testable without spawning the binary.

namespace symcd::cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  std::optional<experiments::ExperimentSpec> spec;  // unset for pure dump runs
  report::Format format = report::Format::Csv;
  std::string out;            // output path; empty means stdout or env default
  std::string dump_instance;  // write the selected instance as JSON and exit
  std::string load_instance;  // run the coordinate-descent rules on this file
  bool help_requested = false;
  std::string help_text;
};

// Parses the argument list (without argv[0]); throws UsageError on invalid
// flags or invalid flag combinations.
inline CliConfig parse_cli(const std::vector<std::string>& args) {
  CLI::App app{
      "symcd benchmark runner: epoch counts (E1), acceleration ratios (E2), "
      "spectral-radius tables (E3), constrained-problem comparisons (E4), "
      "alternative instances (E5), complexity floors (E6)"};
  app.name("benchcli");

  std::string experiment;
  std::vector<std::size_t> ns;
  std::vector<double> cs;
  double eps = 0.0;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  double sigma = 0.0;
  double beta = 0.0;
  std::string gd_step;
  std::string error_metric;
  std::string format = "csv";
  std::size_t max_epochs = 0;
  CliConfig cfg;

  app.add_option("--experiment", experiment, "Experiment id: E1..E6");
  app.add_option("--n", ns, "Problem size (repeatable)");
  app.add_option("--c", cs, "Off-diagonal parameter c in (0,1) (repeatable)");
  app.add_option("--eps", eps,
                 "Relative-error tolerance (default 1e-8; constrained runs 1e-5)");
  app.add_option("--seeds", seeds, "Comma-separated seed list (default 1,2,3,4,5)")
      ->delimiter(',');
  app.add_option("--sigma", sigma, "Penalty parameter for constrained runs (default 1)");
  app.add_option("--beta", beta, "Correction/dual step for constrained runs (default 1)");
  app.add_option("--gd-step", gd_step,
                 "Gradient step rule: inv-lmax (default) or two-over-sum")
      ->check(CLI::IsMember({"inv-lmax", "two-over-sum"}));
  app.add_option("--error-metric", error_metric,
                 "objective (default for E1/E2/E6), iterate, or stacked "
                 "(default and only option for E4/E5)")
      ->check(CLI::IsMember({"objective", "iterate", "stacked"}));
  app.add_option("--format", format, "Output format: csv (default), json, markdown")
      ->check(CLI::IsMember({"csv", "json", "markdown", "md"}));
  app.add_option("--out", cfg.out,
                 "Output file (default: stdout, or $SYMCD_OUT_DIR/<id>.<ext>)");
  app.add_option("--dump-instance", cfg.dump_instance,
                 "Write the worst-case instance for the single --n/--c as JSON and exit");
  app.add_option("--load-instance", cfg.load_instance,
                 "Run every coordinate-descent rule on the instance JSON file");
  app.add_option("--max-epochs", max_epochs, "Epoch cap (default 1e7)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cfg.help_requested = true;
    cfg.help_text = app.help();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.format = report::parse_format(format);

  if (!cfg.dump_instance.empty()) {
    if (ns.size() != 1 || cs.size() != 1)
      throw UsageError("--dump-instance needs exactly one --n and one --c");
    experiments::ExperimentSpec spec;
    spec.ns = ns;
    spec.cs = cs;
    cfg.spec = spec;
    return cfg;
  }

  experiments::ExperimentSpec spec;
  if (!cfg.load_instance.empty()) {
    // grid comes from the file; only run controls apply
    spec.id = experiments::ExperimentId::E1_epochs;
  } else if (experiment.empty()) {
    throw UsageError("--experiment is required (or use --dump-instance/--load-instance)");
  } else {
    try {
      spec.id = experiments::experiment_from_name(experiment);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
  }
  spec.ns = ns;
  spec.cs = cs;
  spec.epsilon = eps;
  if (seeds.empty()) throw UsageError("--seeds must not be empty");
  spec.seeds = seeds;
  if (sigma != 0.0) spec.overrides.sigma = sigma;
  if (beta != 0.0) spec.overrides.beta = beta;
  if (gd_step == "two-over-sum") spec.overrides.gd_step_mode = cd::GdStepMode::TwoOverSum;
  if (gd_step == "inv-lmax") spec.overrides.gd_step_mode = cd::GdStepMode::InvLambdaMax;
  if (max_epochs > 0) spec.overrides.max_epochs = max_epochs;

  const bool constrained = spec.id == experiments::ExperimentId::E4_admm ||
                           spec.id == experiments::ExperimentId::E5_alt_instances;
  if (!error_metric.empty()) {
    if (error_metric == "stacked") {
      if (!constrained)
        throw UsageError("--error-metric stacked only applies to --experiment E4/E5");
      spec.overrides.error_metric = experiments::ErrorMetricChoice::Stacked;
    } else if (constrained) {
      throw UsageError("--experiment " + experiment + " with --error-metric " +
                       error_metric + " is invalid: constrained runs measure the "
                       "stacked primal-dual error only");
    } else {
      spec.overrides.error_metric = error_metric == "iterate"
                                        ? experiments::ErrorMetricChoice::Iterate
                                        : experiments::ErrorMetricChoice::Objective;
    }
  }
  if (!constrained && (spec.overrides.sigma || spec.overrides.beta) &&
      cfg.load_instance.empty())
    throw UsageError("--sigma/--beta only apply to --experiment E4/E5");

  cfg.spec = spec;
  return cfg;
}

}  // namespace symcd::cli
