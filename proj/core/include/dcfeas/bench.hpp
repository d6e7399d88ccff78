#pragma once

// Benchmark harness: seeded instance generation, warm start, solver sweeps
// and CSV reporting.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dcfeas/fpa_convex.hpp"
#include "dcfeas/instance_gen.hpp"

namespace dcfeas {

struct MethodSpec {
  enum class Kind { kFpa, kEsqm };
  Kind kind = Kind::kFpa;
  double delta = 0.0;  // esqm only

  /// "fpa" or "esqm:<delta>" (delta printed with %g).
  std::string name() const;
  /// Accepts "fpa", "esqm:<delta>" and "esqm@<delta>".
  static MethodSpec parse(const std::string& text);
};

struct Dims {
  std::size_t p = 0, n = 0, k = 0;
};

/// Desk scale: e3 (180 i, 640 i, 30 i), e4 (90 i, 320 i, 15 i).
/// Large scale: e3 (720 i, 2560 i, 120 i), e4 (360 i, 1280 i, 60 i).
/// For e4, p and n are complex dimensions.
Dims size_index_dims(ProblemKind kind, int size_index, bool large_scale);

struct BenchConfig {
  ProblemKind problem = ProblemKind::kE3;
  Dims dims;
  int seeds = 1;
  std::uint64_t first_seed = 1;
  std::vector<MethodSpec> methods;
  std::string output_path;
  bool log_history = false;
  double mu = 0.95;
  double gamma = 0.05;
  double tol = 1e-4;
  int fpa_max_iter = 10000;
  int esqm_max_iter = 20000;
  int jobs = 1;
};

/// Throws Error(kInvalidArgument) naming the offending field.
void validate(const BenchConfig& cfg);

struct BenchRow {
  std::string method;
  std::uint64_t seed = 0;
  std::size_t p = 0, n = 0, k = 0;
  std::size_t iters = 0;
  double cpu_qr = 0.0;
  double cpu_slater = 0.0;
  double cpu_init = 0.0;
  double cpu_solve = 0.0;
  double rec_err = 0.0;
  double residual = 0.0;
  std::string termination;  // criticality | small_stepsize | max_iter | error:<message>

  bool completed() const { return termination.rfind("error:", 0) != 0; }
};

struct HistoryRow {
  std::string method;
  std::uint64_t seed = 0;
  IterationRecord record;
};

struct BenchResult {
  std::vector<BenchRow> rows;  // ordered by (method, seed)
  std::vector<HistoryRow> history;

  bool all_completed() const;
};

BenchResult run_benchmark(const BenchConfig& cfg);

/// Header plus one line per row; reals in %.17e.
void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);
void emit_csv(const std::vector<BenchRow>& rows, const std::string& path);
std::vector<BenchRow> parse_csv(std::istream& is);
std::vector<BenchRow> read_csv(const std::string& path);

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows);
void emit_history_csv(const std::vector<HistoryRow>& rows, const std::string& path);

struct SummaryRow {
  std::string method;
  std::size_t runs = 0;
  std::size_t completed = 0;
  double iters = 0.0;
  double cpu_qr = 0.0;
  double cpu_slater = 0.0;
  double cpu_init = 0.0;
  double cpu_solve = 0.0;
  double rec_err = 0.0;
  double residual = 0.0;
};

/// Means over completed rows, one entry per method in first-seen order.
std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows);
void print_summary(std::ostream& os, const std::vector<SummaryRow>& summary);

}  // namespace dcfeas
