#include "symcd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace symcd::experiments {
namespace {

using report::Cell;
using report::ReportTable;

struct CellGroup {
  std::vector<std::vector<Cell>> rows;
  bool failure = false;
};

// Runs pure cell tasks on a small pool; results keep task order so output is
// identical regardless of worker count.
std::vector<CellGroup> run_cells(const std::vector<std::function<CellGroup()>>& tasks) {
  std::vector<CellGroup> out(tasks.size());
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(tasks.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        out[i] = tasks[i]();
      } catch (const std::exception& e) {
        out[i].failure = true;
        out[i].rows.push_back({Cell(std::string("cell failed: ") + e.what())});
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return out;
}

Cell error_cell(const cd::RunRecord& r) {
  if (r.diverged) return std::string("diverged");
  if (!r.converged) return std::string("epoch cap reached");
  return std::monostate{};
}

Cell error_cell(const admm::AdmmRunRecord& r) {
  if (r.diverged) return std::string("diverged");
  if (!r.converged) return std::string("epoch cap reached");
  return std::monostate{};
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

cd::ErrorMetric cd_metric(const Overrides& o) {
  if (o.error_metric && *o.error_metric == ErrorMetricChoice::Iterate)
    return cd::ErrorMetric::Iterate;
  return cd::ErrorMetric::Objective;
}

cd::RunOptions cd_options(const ExperimentSpec& spec, std::uint64_t seed,
                          double default_eps) {
  cd::RunOptions opts;
  opts.stop.epsilon = spec.epsilon > 0.0 ? spec.epsilon : default_eps;
  if (spec.overrides.max_epochs) opts.stop.max_epochs = *spec.overrides.max_epochs;
  opts.seed = seed;
  opts.metric = cd_metric(spec.overrides);
  if (spec.overrides.gd_step_mode) opts.gd_mode = *spec.overrides.gd_step_mode;
  opts.record_trace = false;
  return opts;
}

admm::AdmmRunOptions admm_options(const ExperimentSpec& spec, std::uint64_t seed,
                                  double default_eps) {
  admm::AdmmRunOptions opts;
  opts.stop.epsilon = spec.epsilon > 0.0 ? spec.epsilon : default_eps;
  if (spec.overrides.max_epochs) opts.stop.max_epochs = *spec.overrides.max_epochs;
  opts.seed = seed;
  opts.record_trace = false;
  opts.record_residual = false;
  return opts;
}

constexpr cd::OrderRule kAllCdRules[] = {
    cd::OrderRule::GBS,        cd::OrderRule::SGS,
    cd::OrderRule::Cyclic,     cd::OrderRule::Randomized,
    cd::OrderRule::RandomPermuted, cd::OrderRule::Gradient,
};

constexpr admm::AdmmRule kAllAdmmRules[] = {
    admm::AdmmRule::SGS, admm::AdmmRule::GBS, admm::AdmmRule::RP, admm::AdmmRule::ALM};

void require_worst_case_grid(const ExperimentSpec& spec) {
  if (spec.ns.empty() || spec.cs.empty())
    throw ParameterError("experiment needs a nonempty n and c grid");
}

ExperimentResult assemble(ReportTable table, std::vector<CellGroup> groups) {
  ExperimentResult res;
  res.table = std::move(table);
  for (auto& g : groups) {
    res.any_failure = res.any_failure || g.failure;
    for (auto& row : g.rows) {
      if (row.size() != res.table.schema.size())
        row.resize(res.table.schema.size());  // failed cells carry only the tag
      res.table.rows.push_back(std::move(row));
    }
  }
  return res;
}

ExperimentResult run_e1(const ExperimentSpec& spec) {
  require_worst_case_grid(spec);
  ReportTable t;
  t.schema = {"n", "c", "rule", "seed", "epochs", "work_passes", "converged", "error"};
  std::vector<std::function<CellGroup()>> tasks;
  for (std::size_t n : spec.ns)
    for (double c : spec.cs)
      for (cd::OrderRule rule : kAllCdRules)
        tasks.push_back([=, &spec] {
          const auto p = instances::make_worst_case(n, c);
          CellGroup g;
          std::vector<double> epochs;
          for (std::uint64_t seed : spec.seeds) {
            const auto rec =
                cd::run_to_tolerance(p, rule, cd_options(spec, seed, 1e-8));
            g.failure = g.failure || !rec.converged;
            epochs.push_back(static_cast<double>(rec.epochs));
            g.rows.push_back({static_cast<std::int64_t>(n), c,
                              std::string(cd::rule_name(rule)), std::to_string(seed),
                              static_cast<std::int64_t>(rec.epochs),
                              static_cast<std::int64_t>(rec.epochs * rec.passes),
                              std::string(rec.converged ? "yes" : "no"),
                              error_cell(rec)});
          }
          const double m = mean(epochs);
          g.rows.push_back({static_cast<std::int64_t>(n), c,
                            std::string(cd::rule_name(rule)), std::string("mean"), m,
                            m * cd::passes_per_epoch(rule), std::string(""),
                            std::monostate{}});
          return g;
        });
  return assemble(std::move(t), run_cells(tasks));
}

ExperimentResult run_e2(const ExperimentSpec& spec) {
  require_worst_case_grid(spec);
  ReportTable t;
  t.schema = {"n",          "c",          "seed",          "epochs_gbs",
              "epochs_ccd", "epochs_gd",  "epochs_rcd",    "ratio_gbs_ccd",
              "ratio_gbs_gd", "ratio_gbs_rcd", "error"};
  std::vector<std::function<CellGroup()>> tasks;
  for (std::size_t n : spec.ns)
    for (double c : spec.cs)
      tasks.push_back([=, &spec] {
        const auto p = instances::make_worst_case(n, c);
        CellGroup g;
        std::vector<double> gbs, ccd, gd, rcd;
        for (std::uint64_t seed : spec.seeds) {
          const auto opts = cd_options(spec, seed, 1e-8);
          const auto rg = cd::run_to_tolerance(p, cd::OrderRule::GBS, opts);
          const auto rc = cd::run_to_tolerance(p, cd::OrderRule::Cyclic, opts);
          const auto rd = cd::run_to_tolerance(p, cd::OrderRule::Gradient, opts);
          const auto rr = cd::run_to_tolerance(p, cd::OrderRule::Randomized, opts);
          const bool ok = rg.converged && rc.converged && rd.converged && rr.converged;
          g.failure = g.failure || !ok;
          gbs.push_back(static_cast<double>(rg.epochs));
          ccd.push_back(static_cast<double>(rc.epochs));
          gd.push_back(static_cast<double>(rd.epochs));
          rcd.push_back(static_cast<double>(rr.epochs));
          g.rows.push_back(
              {static_cast<std::int64_t>(n), c, std::to_string(seed),
               static_cast<std::int64_t>(rg.epochs), static_cast<std::int64_t>(rc.epochs),
               static_cast<std::int64_t>(rd.epochs), static_cast<std::int64_t>(rr.epochs),
               gbs.back() / ccd.back(), gbs.back() / gd.back(), gbs.back() / rcd.back(),
               ok ? Cell(std::monostate{}) : Cell(std::string("some run did not converge"))});
        }
        g.rows.push_back({static_cast<std::int64_t>(n), c, std::string("mean"),
                          mean(gbs), mean(ccd), mean(gd), mean(rcd),
                          mean(gbs) / mean(ccd), mean(gbs) / mean(gd),
                          mean(gbs) / mean(rcd), std::monostate{}});
        return g;
      });
  return assemble(std::move(t), run_cells(tasks));
}

ExperimentResult run_e3(const ExperimentSpec& spec) {
  require_worst_case_grid(spec);
  ReportTable t;
  t.schema = {"n",           "c",           "rule",          "one_minus_rho",
              "method",      "bound_upper", "bound_lower",   "valid_lower_1",
              "valid_lower_2", "samples",   "error"};
  std::vector<std::function<CellGroup()>> tasks;
  for (std::size_t n : spec.ns)
    for (double c : spec.cs)
      for (cd::OrderRule rule : kAllCdRules)
        tasks.push_back([=] {
          const auto p = instances::make_worst_case(n, c);
          const auto r = spectral::spectral_report(p, rule);
          CellGroup g;
          g.rows.push_back(
              {static_cast<std::int64_t>(n), c, std::string(cd::rule_name(rule)),
               r.one_minus_rho, std::string(spectral::method_name(r.method)),
               r.bound_upper ? Cell(*r.bound_upper) : Cell(std::monostate{}),
               r.bound_lower ? Cell(*r.bound_lower) : Cell(std::monostate{}),
               std::string(r.valid_lower_1 ? "yes" : "no"),
               std::string(r.valid_lower_2 ? "yes" : "no"),
               static_cast<std::int64_t>(r.samples), std::monostate{}});
          return g;
        });
  return assemble(std::move(t), run_cells(tasks));
}

ExperimentResult run_e4(const ExperimentSpec& spec) {
  require_worst_case_grid(spec);
  ReportTable t;
  t.schema = {"n", "c", "rule", "seed", "epochs", "converged", "error"};
  const double sigma = spec.overrides.sigma.value_or(1.0);
  const double beta = spec.overrides.beta.value_or(1.0);
  std::vector<std::function<CellGroup()>> tasks;
  for (std::size_t n : spec.ns)
    for (double c : spec.cs)
      for (admm::AdmmRule rule : kAllAdmmRules)
        tasks.push_back([=, &spec] {
          const auto p = admm::make_admm_worst_case(n, c, sigma, beta);
          CellGroup g;
          std::vector<double> epochs;
          for (std::uint64_t seed : spec.seeds) {
            const auto rec =
                admm::run_admm_to_tolerance(p, rule, admm_options(spec, seed, 1e-5));
            g.failure = g.failure || !rec.converged;
            epochs.push_back(static_cast<double>(rec.epochs));
            g.rows.push_back({static_cast<std::int64_t>(n), c,
                              std::string(admm::admm_rule_name(rule)),
                              std::to_string(seed),
                              static_cast<std::int64_t>(rec.epochs),
                              std::string(rec.converged ? "yes" : "no"),
                              error_cell(rec)});
          }
          g.rows.push_back({static_cast<std::int64_t>(n), c,
                            std::string(admm::admm_rule_name(rule)), std::string("mean"),
                            mean(epochs), std::string(""), std::monostate{}});
          return g;
        });
  return assemble(std::move(t), run_cells(tasks));
}

ExperimentResult run_e5(const ExperimentSpec& spec) {
  if (spec.ns.empty()) throw ParameterError("experiment needs a nonempty n grid");
  ReportTable t;
  t.schema = {"instance", "n", "seed", "rule", "epochs", "converged", "error"};
  const double sigma = spec.overrides.sigma.value_or(1.0);
  const double beta = spec.overrides.beta.value_or(1.0);
  std::vector<std::function<CellGroup()>> tasks;
  for (const char* kind : {"circulant_hankel", "tridiagonal"})
    for (std::size_t n : spec.ns)
      for (std::uint64_t seed : spec.seeds)
        tasks.push_back([=, &spec] {
          const auto base = std::string(kind) == "circulant_hankel"
                                ? instances::make_circulant_hankel(n, seed)
                                : instances::make_tridiagonal(n, seed);
          const auto p = admm::make_admm_from(base, sigma, beta);
          CellGroup g;
          for (admm::AdmmRule rule : kAllAdmmRules) {
            const auto rec =
                admm::run_admm_to_tolerance(p, rule, admm_options(spec, seed, 1e-5));
            g.failure = g.failure || !rec.converged;
            g.rows.push_back({std::string(kind), static_cast<std::int64_t>(n),
                              std::to_string(seed),
                              std::string(admm::admm_rule_name(rule)),
                              static_cast<std::int64_t>(rec.epochs),
                              std::string(rec.converged ? "yes" : "no"),
                              error_cell(rec)});
          }
          return g;
        });
  return assemble(std::move(t), run_cells(tasks));
}

// Complexity expressions counted in arithmetic operations; one epoch costs
// n^2 per pass, so the epoch floor divides by n^2 * passes. The log(1/eps)
// factor is dropped on the floor side, which only loosens it.
struct FloorSpec {
  cd::OrderRule rule;
  double constant;   // lower-bound constant
  int n_power;       // exponent in the kappa expression
  bool uses_kappa;   // n^p * kappa vs n^p * kappa_cd only
};

ExperimentResult run_e6(const ExperimentSpec& spec) {
  require_worst_case_grid(spec);
  ReportTable t;
  t.schema = {"n",      "c",          "rule",
              "epochs_mean", "floor_epochs_kappa", "floor_epochs_kappa_cd",
              "exceeds_floor", "error"};
  const FloorSpec floors[] = {
      {cd::OrderRule::SGS, 1.0 / 40.0, 3, true},
      {cd::OrderRule::GBS, 1.0 / 15.0, 3, true},
      {cd::OrderRule::Cyclic, 1.0 / 40.0, 3, true},
      {cd::OrderRule::Gradient, 1.0, 2, true},
      {cd::OrderRule::Randomized, 1.0, 2, false},
  };
  std::vector<std::function<CellGroup()>> tasks;
  for (std::size_t n : spec.ns)
    for (double c : spec.cs)
      for (const FloorSpec f : floors)
        tasks.push_back([=, &spec] {
          const auto p = instances::make_worst_case(n, c);
          const auto s = instances::worst_case_spectrum(n, c);
          const double nd = static_cast<double>(n);
          const double work_per_epoch =
              nd * nd * cd::passes_per_epoch(f.rule);
          const double expr_kappa =
              f.uses_kappa ? f.constant * std::pow(nd, f.n_power) * s.kappa : 0.0;
          // kappa_cd column carries one extra factor of n except for R-CD
          const double expr_kcd = f.uses_kappa && f.n_power == 3
                                      ? f.constant * std::pow(nd, 4) * s.kappa_cd
                                  : !f.uses_kappa
                                      ? f.constant * std::pow(nd, 2) * s.kappa_cd
                                      : 0.0;
          CellGroup g;
          std::vector<double> epochs;
          bool all_ok = true;
          for (std::uint64_t seed : spec.seeds) {
            const auto rec =
                cd::run_to_tolerance(p, f.rule, cd_options(spec, seed, 1e-8));
            all_ok = all_ok && rec.converged;
            epochs.push_back(static_cast<double>(rec.epochs));
          }
          g.failure = !all_ok;
          const double m = mean(epochs);
          const double floor_kappa =
              expr_kappa > 0.0 ? expr_kappa / work_per_epoch : 0.0;
          const double floor_kcd = expr_kcd > 0.0 ? expr_kcd / work_per_epoch : 0.0;
          const bool exceeds = m >= floor_kappa && m >= floor_kcd;
          g.rows.push_back(
              {static_cast<std::int64_t>(n), c, std::string(cd::rule_name(f.rule)), m,
               floor_kappa > 0.0 ? Cell(floor_kappa) : Cell(std::monostate{}),
               floor_kcd > 0.0 ? Cell(floor_kcd) : Cell(std::monostate{}),
               std::string(exceeds ? "yes" : "no"),
               all_ok ? Cell(std::monostate{})
                      : Cell(std::string("some run did not converge"))});
          return g;
        });
  return assemble(std::move(t), run_cells(tasks));
}

}  // namespace

const char* experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::E1_epochs: return "E1";
    case ExperimentId::E2_ratios: return "E2";
    case ExperimentId::E3_spectral: return "E3";
    case ExperimentId::E4_admm: return "E4";
    case ExperimentId::E5_alt_instances: return "E5";
    case ExperimentId::E6_bounds: return "E6";
  }
  throw ParameterError("unknown experiment id");
}

ExperimentId experiment_from_name(const std::string& name) {
  if (name == "E1") return ExperimentId::E1_epochs;
  if (name == "E2") return ExperimentId::E2_ratios;
  if (name == "E3") return ExperimentId::E3_spectral;
  if (name == "E4") return ExperimentId::E4_admm;
  if (name == "E5") return ExperimentId::E5_alt_instances;
  if (name == "E6") return ExperimentId::E6_bounds;
  throw ParameterError("unknown experiment: " + name);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) throw ParameterError("seed list must be nonempty");
  switch (spec.id) {
    case ExperimentId::E1_epochs: return run_e1(spec);
    case ExperimentId::E2_ratios: return run_e2(spec);
    case ExperimentId::E3_spectral: return run_e3(spec);
    case ExperimentId::E4_admm: return run_e4(spec);
    case ExperimentId::E5_alt_instances: return run_e5(spec);
    case ExperimentId::E6_bounds: return run_e6(spec);
  }
  throw ParameterError("unknown experiment id");
}

}  // namespace symcd::experiments
