#include <cstdlib>
#include <iostream>

#include "cli.hpp"

namespace {

using namespace symcd;

std::string default_extension(report::Format f) {
  switch (f) {
    case report::Format::Csv: return "csv";
    case report::Format::Json: return "json";
    case report::Format::Markdown: return "md";
  }
  return "txt";
}

// Epoch counts for every coordinate-descent rule on an explicit instance.
experiments::ExperimentResult run_loaded_instance(const instances::QuadraticProblem& p,
                                                  const experiments::ExperimentSpec& spec) {
  experiments::ExperimentResult res;
  res.table.schema = {"rule", "seed", "epochs", "work_passes", "converged", "error"};
  constexpr cd::OrderRule rules[] = {
      cd::OrderRule::GBS,        cd::OrderRule::SGS,
      cd::OrderRule::Cyclic,     cd::OrderRule::Randomized,
      cd::OrderRule::RandomPermuted, cd::OrderRule::Gradient,
  };
  for (cd::OrderRule rule : rules)
    for (std::uint64_t seed : spec.seeds) {
      cd::RunOptions opts;
      opts.stop.epsilon = spec.epsilon > 0.0 ? spec.epsilon : 1e-8;
      if (spec.overrides.max_epochs) opts.stop.max_epochs = *spec.overrides.max_epochs;
      opts.seed = seed;
      if (spec.overrides.gd_step_mode) opts.gd_mode = *spec.overrides.gd_step_mode;
      if (spec.overrides.error_metric &&
          *spec.overrides.error_metric == experiments::ErrorMetricChoice::Iterate)
        opts.metric = cd::ErrorMetric::Iterate;
      opts.record_trace = false;
      const auto rec = cd::run_to_tolerance(p, rule, opts);
      res.any_failure = res.any_failure || !rec.converged;
      res.table.rows.push_back(
          {std::string(cd::rule_name(rule)), std::to_string(seed),
           static_cast<std::int64_t>(rec.epochs),
           static_cast<std::int64_t>(rec.epochs * rec.passes),
           std::string(rec.converged ? "yes" : "no"),
           rec.diverged  ? report::Cell(std::string("diverged"))
           : rec.converged ? report::Cell(std::monostate{})
                           : report::Cell(std::string("epoch cap reached"))});
    }
  return res;
}

int run(const cli::CliConfig& cfg) {
  if (!cfg.dump_instance.empty()) {
    const auto& spec = *cfg.spec;
    report::dump_instance_to(instances::make_worst_case(spec.ns[0], spec.cs[0]),
                             cfg.dump_instance);
    return 0;
  }

  experiments::ExperimentResult res;
  if (!cfg.load_instance.empty()) {
    res = run_loaded_instance(report::load_instance_from(cfg.load_instance), *cfg.spec);
  } else {
    res = experiments::run_experiment(*cfg.spec);
  }

  std::string out = cfg.out;
  if (out.empty()) {
    if (const char* dir = std::getenv("SYMCD_OUT_DIR")) {
      out = std::string(dir) + "/" +
            experiments::experiment_name(cfg.spec->id) + "." +
            default_extension(cfg.format);
    }
  }
  if (out.empty())
    std::cout << report::render(res.table, cfg.format);
  else
    report::emit(res.table, cfg.format, out);
  return res.any_failure ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    const auto cfg = symcd::cli::parse_cli(args);
    if (cfg.help_requested) {
      std::cout << cfg.help_text;
      return 0;
    }
    return run(cfg);
  } catch (const symcd::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n"
              << "run with --help for the flag list\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
