// CSV emission and run reports. Numeric CSV cells use 17 significant digits so
// doubles round-trip exactly; identical (config, seed) runs produce
// byte-identical bodies.
#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "stratsp/config.hpp"

namespace stratsp {

constexpr const char* kVersion = "1.0.0";

inline std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // normalizes -0
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline double parse_g17(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  return std::stod(s);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema, const Config& cfg,
            const std::vector<std::string>& columns) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    out_.open(path);
    if (!out_) throw std::runtime_error("cannot open output file '" + path + "'");
    out_ << "# schema=" << schema << ".v1 config_hash=" << cfg.hash_hex() << "\n";
    out_ << "# " << cfg.echo_line() << "\n";
    for (size_t i = 0; i < columns.size(); i++)
      out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }

  void cell(double v) { row_.push_back(format_g17(v)); }
  void cell(int v) { row_.push_back(std::to_string(v)); }
  void cell(long long v) { row_.push_back(std::to_string(v)); }
  void cell(const std::string& v) { row_.push_back(v); }

  void end_row() {
    for (size_t i = 0; i < row_.size(); i++)
      out_ << (i ? "," : "") << row_[i];
    out_ << "\n";
    row_.clear();
  }

 private:
  std::ofstream out_;
  std::vector<std::string> row_;
};

struct CheckRow {
  std::string name;
  double value = 0.0;
  double threshold = std::nan("");
  std::string verdict;  // pass | fail | info | flagged
};

struct RunReport {
  std::string suite;
  Config config;
  std::uint64_t seed = 0;
  double wall_ms = 0.0;
  bool partial = false;  // set when the run exceeded its time budget
  std::vector<CheckRow> rows;

  void add(const std::string& name, double value, double threshold, bool pass) {
    rows.push_back({name, value, threshold, pass ? "pass" : "fail"});
  }
  void info(const std::string& name, double value) {
    rows.push_back({name, value, std::nan(""), "info"});
  }
  void flag(const std::string& name, double value) {
    rows.push_back({name, value, std::nan(""), "flagged"});
  }

  bool all_pass() const {
    for (const auto& r : rows)
      if (r.verdict == "fail") return false;
    return true;
  }

  void write(const std::string& path) const {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open report file '" + path + "'");
    out << "# schema=report.v1 config_hash=" << config.hash_hex() << "\n";
    out << "# suite=" << suite << " seed=" << seed << " version=" << kVersion
        << " wall_ms=" << format_g17(wall_ms) << " partial=" << (partial ? 1 : 0) << "\n";
    out << "# " << config.echo_line() << "\n";
    out << "check,value,threshold,verdict\n";
    for (const auto& r : rows)
      out << r.name << "," << format_g17(r.value) << "," << format_g17(r.threshold)
          << "," << r.verdict << "\n";
  }

  static RunReport read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open report file '" + path + "'");
    RunReport rep;
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("# suite=", 0) == 0) {
        std::string rest = line.substr(2);
        std::istringstream iss(rest);
        std::string tok;
        while (iss >> tok) {
          auto eq = tok.find('=');
          if (eq == std::string::npos) continue;
          std::string k = tok.substr(0, eq), v = tok.substr(eq + 1);
          if (k == "suite") rep.suite = v;
          if (k == "seed") rep.seed = std::stoull(v);
          if (k == "wall_ms") rep.wall_ms = parse_g17(v);
          if (k == "partial") rep.partial = (v == "1");
        }
        continue;
      }
      if (line.empty() || line[0] == '#') continue;
      if (line.rfind("check,", 0) == 0) continue;
      std::vector<std::string> f;
      std::istringstream iss(line);
      std::string cellv;
      while (std::getline(iss, cellv, ',')) f.push_back(cellv);
      if (f.size() != 4) throw std::runtime_error("malformed report row: " + line);
      rep.rows.push_back({f[0], parse_g17(f[1]), parse_g17(f[2]), f[3]});
    }
    return rep;
  }
};

struct CompareRow {
  std::string name;
  double value_a = std::nan("");
  double value_b = std::nan("");
  double ratio = std::nan("");
  std::string verdict_a, verdict_b;
  std::string note;  // "", "verdict_changed", "absent_in_a", "absent_in_b"
};

inline std::vector<CompareRow> compare_runs(const RunReport& a, const RunReport& b) {
  if (a.suite != b.suite)
    throw std::runtime_error("compare: suite mismatch ('" + a.suite + "' vs '" + b.suite + "')");
  std::vector<CompareRow> out;
  for (const auto& ra : a.rows) {
    CompareRow c;
    c.name = ra.name;
    c.value_a = ra.value;
    c.verdict_a = ra.verdict;
    const CheckRow* rb = nullptr;
    for (const auto& r : b.rows)
      if (r.name == ra.name) { rb = &r; break; }
    if (!rb) {
      c.note = "absent_in_b";
    } else {
      c.value_b = rb->value;
      c.verdict_b = rb->verdict;
      c.ratio = (ra.value == 0.0 && rb->value == 0.0) ? 1.0 : rb->value / ra.value;
      if (c.verdict_a != c.verdict_b) c.note = "verdict_changed";
    }
    out.push_back(c);
  }
  for (const auto& rb : b.rows) {
    bool found = false;
    for (const auto& ra : a.rows)
      if (ra.name == rb.name) { found = true; break; }
    if (!found) {
      CompareRow c;
      c.name = rb.name;
      c.value_b = rb.value;
      c.verdict_b = rb.verdict;
      c.note = "absent_in_a";
      out.push_back(c);
    }
  }
  return out;
}

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_)
        .count();
  }
  double seconds() const { return ms() / 1e3; }

 private:
  std::chrono::steady_clock::time_point t0_;
};

}  // namespace stratsp
