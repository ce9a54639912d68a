#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "symcd/instances.hpp"
#include "symcd/spectral.hpp"

// Tabular result assembly and serialization: CSV/JSON/markdown table
// rendering with deterministic byte output, plus JSON instance export/import
// for the CLI's --dump-instance / --load-instance flags.

namespace symcd::report {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A cell is empty, numeric, integral, or text. CSV/JSON keep full precision;
// markdown displays doubles with 2 significant figures.
using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

enum class Format { Csv, Json, Markdown };

struct ReportTable {
  std::vector<std::string> schema;  // ordered column names
  std::vector<std::vector<Cell>> rows;

  // row length must equal schema size
  void add_row(std::vector<Cell> row);
};

// Shortest decimal string that round-trips the double exactly.
std::string format_full(double v);
// 2-significant-figure scientific display, e.g. 2.5e-4.
std::string format_sig2(double v);

Format parse_format(const std::string& name);
std::string format_name(Format f);

// Renders the table to a string; byte-deterministic for fixed inputs.
std::string render(const ReportTable& table, Format format);

// Writes render() output to `path`; I/O failures carry the path.
void emit(const ReportTable& table, Format format, const std::string& path);

// Instance JSON: {kind, n, c|seed, Q (row-major full precision), b}.
std::string dump_instance(const instances::QuadraticProblem& p);
instances::QuadraticProblem load_instance(const std::string& json_text);
void dump_instance_to(const instances::QuadraticProblem& p, const std::string& path);
instances::QuadraticProblem load_instance_from(const std::string& path);

// One JSON row per spectral report:
// {n, c, rule, one_minus_rho, method, bound_upper, bound_lower, validity}.
std::string spectral_report_json(const spectral::SpectralReport& r, std::size_t n,
                                 double c);

}  // namespace symcd::report
