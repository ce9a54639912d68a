#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symcd/admm.hpp"
#include "symcd/cd.hpp"
#include "symcd/report.hpp"
#include "symcd/spectral.hpp"

// Experiment grid runner: epoch-count benchmarks, acceleration ratios,
// spectral-radius tables, ADMM comparisons, alternative instances, and
// complexity floor comparisons. Cells are pure tasks run on a small worker
// pool; assembly is single-threaded and order-stable.

namespace symcd::experiments {

enum class ExperimentId {
  E1_epochs,         // epochs to tolerance per rule over the (n, c) grid
  E2_ratios,         // GBS epoch ratios vs C-CD / GD / R-CD
  E3_spectral,       // 1 - rho(M) per rule with bounds
  E4_admm,           // constrained-problem epoch counts per ADMM variant
  E5_alt_instances,  // circulant-Hankel and tridiagonal ADMM epoch counts
  E6_bounds,         // measured epochs vs complexity floor predictions
};

const char* experiment_name(ExperimentId id);
ExperimentId experiment_from_name(const std::string& name);

enum class ErrorMetricChoice { Objective, Iterate, Stacked };

struct Overrides {
  std::optional<double> sigma;
  std::optional<double> beta;
  std::optional<cd::GdStepMode> gd_step_mode;
  std::optional<ErrorMetricChoice> error_metric;
  std::optional<std::size_t> max_epochs;
};

struct ExperimentSpec {
  ExperimentId id = ExperimentId::E1_epochs;
  std::vector<std::size_t> ns;
  std::vector<double> cs;
  double epsilon = 0.0;  // 0 means the experiment's default
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  Overrides overrides;
};

struct ExperimentResult {
  report::ReportTable table;
  bool any_failure = false;  // some cell recorded an error tag
};

// Runs the grid; cell failures are recorded in-row under the "error" column
// and never abort the run. Deterministic for a fixed spec, regardless of
// worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace symcd::experiments
