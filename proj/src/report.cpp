#include "symcd/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "symcd/cd.hpp"

namespace symcd::report {
namespace {

using nlohmann::json;

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::string cell_text(const Cell& c, bool sig2) {
  if (std::holds_alternative<std::monostate>(c)) return "";
  if (const auto* d = std::get_if<double>(&c)) return sig2 ? format_sig2(*d) : format_full(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json cell_json(const Cell& c) {
  if (std::holds_alternative<std::monostate>(c)) return nullptr;
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_full(*d);  // JSON has no inf/nan literals
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

std::string instance_kind_name(instances::InstanceKind k) {
  switch (k) {
    case instances::InstanceKind::WorstCase: return "worst_case";
    case instances::InstanceKind::CirculantHankel: return "circulant_hankel";
    case instances::InstanceKind::Tridiagonal: return "tridiagonal";
    case instances::InstanceKind::Custom: return "custom";
  }
  throw ParameterError("unknown instance kind");
}

instances::InstanceKind instance_kind_from(const std::string& name) {
  if (name == "worst_case") return instances::InstanceKind::WorstCase;
  if (name == "circulant_hankel") return instances::InstanceKind::CirculantHankel;
  if (name == "tridiagonal") return instances::InstanceKind::Tridiagonal;
  if (name == "custom") return instances::InstanceKind::Custom;
  throw ParameterError("unknown instance kind: " + name);
}

}  // namespace

void ReportTable::add_row(std::vector<Cell> row) {
  if (row.size() != schema.size())
    throw DimensionError("ReportTable::add_row: row width does not match schema");
  rows.push_back(std::move(row));
}

std::string format_full(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw ParameterError("format_full: conversion failed");
  return std::string(buf, end);
}

std::string format_sig2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1e", v);
  // trim exponent zero-padding: 2.5e-04 -> 2.5e-4
  std::string s(buf);
  const auto e = s.find('e');
  if (e != std::string::npos) {
    std::size_t k = e + 2;  // first exponent digit (after sign)
    while (k + 1 < s.size() && s[k] == '0') s.erase(k, 1);
  }
  return s;
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "markdown" || name == "md") return Format::Markdown;
  throw ParameterError("unknown format: " + name);
}

std::string format_name(Format f) {
  switch (f) {
    case Format::Csv: return "csv";
    case Format::Json: return "json";
    case Format::Markdown: return "markdown";
  }
  throw ParameterError("unknown format");
}

std::string render(const ReportTable& table, Format format) {
  std::ostringstream out;
  switch (format) {
    case Format::Csv: {
      for (std::size_t j = 0; j < table.schema.size(); ++j)
        out << (j ? "," : "") << csv_escape(table.schema[j]);
      out << '\n';
      for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j)
          out << (j ? "," : "") << csv_escape(cell_text(row[j], false));
        out << '\n';
      }
      return out.str();
    }
    case Format::Json: {
      json arr = json::array();
      for (const auto& row : table.rows) {
        json obj = json::object();
        for (std::size_t j = 0; j < row.size(); ++j)
          obj[table.schema[j]] = cell_json(row[j]);
        arr.push_back(std::move(obj));
      }
      return arr.dump(2) + "\n";
    }
    case Format::Markdown: {
      out << '|';
      for (const auto& name : table.schema) out << ' ' << name << " |";
      out << "\n|";
      for (std::size_t j = 0; j < table.schema.size(); ++j) out << " --- |";
      out << '\n';
      for (const auto& row : table.rows) {
        out << '|';
        for (const auto& c : row) out << ' ' << cell_text(c, true) << " |";
        out << '\n';
      }
      return out.str();
    }
  }
  throw ParameterError("unknown format");
}

void emit(const ReportTable& table, Format format, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << render(table, format);
  if (!f) throw IoError("write failed: " + path);
}

std::string dump_instance(const instances::QuadraticProblem& p) {
  json obj;
  obj["kind"] = instance_kind_name(p.kind);
  obj["n"] = p.n();
  if (p.kind == instances::InstanceKind::WorstCase) obj["c"] = format_full(p.c);
  if (p.kind == instances::InstanceKind::CirculantHankel ||
      p.kind == instances::InstanceKind::Tridiagonal)
    obj["seed"] = p.seed;
  json q = json::array();
  for (std::size_t i = 0; i < p.n(); ++i)
    for (std::size_t j = 0; j < p.n(); ++j) q.push_back(format_full(p.Q(i, j)));
  obj["Q"] = std::move(q);
  json b = json::array();
  for (double v : p.b) b.push_back(format_full(v));
  obj["b"] = std::move(b);
  return obj.dump(2) + "\n";
}

instances::QuadraticProblem load_instance(const std::string& json_text) {
  const json obj = json::parse(json_text);
  const auto kind = instance_kind_from(obj.at("kind").get<std::string>());
  const std::size_t n = obj.at("n").get<std::size_t>();
  if (kind == instances::InstanceKind::WorstCase)
    return instances::make_worst_case(n, std::stod(obj.at("c").get<std::string>()));
  if (kind == instances::InstanceKind::CirculantHankel)
    return instances::make_circulant_hankel(n, obj.at("seed").get<std::uint64_t>());
  if (kind == instances::InstanceKind::Tridiagonal)
    return instances::make_tridiagonal(n, obj.at("seed").get<std::uint64_t>());
  const auto& qj = obj.at("Q");
  if (qj.size() != n * n) throw DimensionError("load_instance: Q size mismatch");
  DenseMatrix q(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      q(i, j) = std::stod(qj[i * n + j].get<std::string>());
  const auto& bj = obj.at("b");
  Vector b(n, 0.0);
  if (bj.size() == n)
    for (std::size_t i = 0; i < n; ++i) b[i] = std::stod(bj[i].get<std::string>());
  else if (!bj.empty())
    throw DimensionError("load_instance: b size mismatch");
  return instances::make_custom(std::move(q), std::move(b));
}

void dump_instance_to(const instances::QuadraticProblem& p, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for writing: " + path);
  f << dump_instance(p);
  if (!f) throw IoError("write failed: " + path);
}

instances::QuadraticProblem load_instance_from(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return load_instance(buf.str());
}

std::string spectral_report_json(const spectral::SpectralReport& r, std::size_t n,
                                 double c) {
  json obj;
  obj["n"] = n;
  obj["c"] = c;
  obj["rule"] = cd::rule_name(r.rule);
  obj["one_minus_rho"] = r.one_minus_rho;
  obj["method"] = spectral::method_name(r.method);
  obj["bound_upper"] = r.bound_upper ? json(*r.bound_upper) : json(nullptr);
  obj["bound_lower"] = r.bound_lower ? json(*r.bound_lower) : json(nullptr);
  obj["validity"] = json{{"lower_1", r.valid_lower_1}, {"lower_2", r.valid_lower_2}};
  return obj.dump();
}

}  // namespace symcd::report
