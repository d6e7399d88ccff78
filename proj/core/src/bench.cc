#include "dcfeas/bench.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "dcfeas/errors.hpp"
#include "dcfeas/esqm.hpp"
#include "dcfeas/fpa_nonconvex.hpp"
#include "dcfeas/initializer.hpp"

namespace dcfeas {

namespace {

const char* const kHeader =
    "method,seed,p,n,k,iters,cpu_qr,cpu_slater,cpu_init,cpu_solve,rec_err,residual,termination";

std::string sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::kIo, "parse_csv: bad number '" + s + "'");
  }
  return v;
}

unsigned long long parse_count(const std::string& s) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw Error(ErrorCode::kIo, "parse_csv: bad integer '" + s + "'");
  }
  return v;
}

struct SeedOutcome {
  std::vector<BenchRow> rows;  // one per method, in cfg.methods order
  std::vector<std::vector<IterationRecord>> history;
};

SeedOutcome run_seed(const BenchConfig& cfg, std::uint64_t seed) {
  SeedOutcome out;
  out.rows.resize(cfg.methods.size());
  out.history.resize(cfg.methods.size());
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    BenchRow& row = out.rows[m];
    row.method = cfg.methods[m].name();
    row.seed = seed;
    row.p = cfg.dims.p;
    row.n = cfg.dims.n;
    row.k = cfg.dims.k;
  }
  auto fail_all = [&](const std::string& msg) {
    for (BenchRow& row : out.rows) row.termination = "error:" + sanitize(msg);
  };

  ProblemInstance inst;
  Vector x0;
  std::string init_label;
  double cpu_init = 0.0;
  try {
    GenSpec spec;
    spec.kind = cfg.problem;
    spec.p = cfg.dims.p;
    spec.n = cfg.dims.n;
    spec.k = cfg.dims.k;
    spec.mu = cfg.mu;
    spec.gamma = cfg.gamma;
    spec.seed = seed;
    inst = generate(spec);
    const auto t0 = std::chrono::steady_clock::now();
    x0 = cfg.problem == ProblemKind::kE3 ? init_e3(inst, {}, &init_label)
                                         : init_e4(inst, {}, &init_label);
    cpu_init = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception& e) {
    fail_all(e.what());
    return out;
  }

  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    BenchRow& row = out.rows[m];
    row.cpu_qr = inst.meta.cpu_qr;
    row.cpu_slater = inst.meta.cpu_slater;
    row.cpu_init = cpu_init;
    try {
      RunReport report;
      const MethodSpec& method = cfg.methods[m];
      if (method.kind == MethodSpec::Kind::kFpa) {
        FPAConfig fc;
        fc.tol = cfg.tol;
        fc.max_iter = cfg.fpa_max_iter;
        fc.log_history = cfg.log_history;
        report = cfg.problem == ProblemKind::kE3 ? fpa_solve(inst, x0, fc)
                                                 : fpa_nonconvex_solve(inst, x0, fc);
      } else {
        ESQMConfig ec;
        ec.delta = method.delta;
        ec.tol = cfg.tol;
        ec.max_iter = cfg.esqm_max_iter;
        ec.log_history = cfg.log_history;
        report = esqm_solve(inst, x0, ec);
      }
      report.initializer = init_label;
      row.iters = report.iterations;
      row.cpu_solve = report.cpu_seconds;
      row.rec_err = recovery_error(inst, report.final_x);
      row.residual = eval_residual(inst, report.final_x);
      row.termination = to_string(report.termination);
      out.history[m] = std::move(report.history);
    } catch (const std::exception& e) {
      row.termination = "error:" + sanitize(e.what());
    }
  }
  return out;
}

}  // namespace

std::string MethodSpec::name() const {
  if (kind == Kind::kFpa) return "fpa";
  char buf[48];
  std::snprintf(buf, sizeof buf, "esqm:%g", delta);
  return buf;
}

MethodSpec MethodSpec::parse(const std::string& text) {
  if (text == "fpa") return {};
  const auto pos = text.find_first_of(":@");
  if (pos != std::string::npos && text.substr(0, pos) == "esqm") {
    MethodSpec m;
    m.kind = Kind::kEsqm;
    char* end = nullptr;
    const std::string tail = text.substr(pos + 1);
    m.delta = std::strtod(tail.c_str(), &end);
    if (!tail.empty() && *end == '\0' && m.delta > 0.0) return m;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown method '" + text + "'");
}

Dims size_index_dims(ProblemKind kind, int size_index, bool large_scale) {
  if (size_index < 1) throw Error(ErrorCode::kInvalidArgument, "size index must be >= 1");
  const auto i = static_cast<std::size_t>(size_index);
  const std::size_t scale = large_scale ? 4 : 1;
  if (kind == ProblemKind::kE3) return {180 * scale * i, 640 * scale * i, 30 * scale * i};
  return {90 * scale * i, 320 * scale * i, 15 * scale * i};
}

void validate(const BenchConfig& cfg) {
  if (cfg.seeds < 1) throw Error(ErrorCode::kInvalidArgument, "bench: seeds must be >= 1");
  if (cfg.methods.empty()) throw Error(ErrorCode::kInvalidArgument, "bench: no methods given");
  if (cfg.dims.p == 0 || cfg.dims.n == 0 || cfg.dims.k == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bench: dims must be positive");
  }
  if (cfg.jobs < 1) throw Error(ErrorCode::kInvalidArgument, "bench: jobs must be >= 1");
}

bool BenchResult::all_completed() const {
  for (const auto& row : rows) {
    if (!row.completed()) return false;
  }
  return true;
}

BenchResult run_benchmark(const BenchConfig& cfg) {
  validate(cfg);
  const auto count = static_cast<std::size_t>(cfg.seeds);
  std::vector<SeedOutcome> outcomes(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t s = next++; s < count; s = next++) {
      outcomes[s] = run_seed(cfg, cfg.first_seed + s);
    }
  };
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), count);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  BenchResult result;
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (std::size_t s = 0; s < count; ++s) {
      result.rows.push_back(outcomes[s].rows[m]);
      for (const auto& rec : outcomes[s].history[m]) {
        result.history.push_back({outcomes[s].rows[m].method, cfg.first_seed + s, rec});
      }
    }
  }
  return result;
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kHeader << '\n';
  for (const auto& r : rows) {
    os << r.method << ',' << r.seed << ',' << r.p << ',' << r.n << ',' << r.k << ',' << r.iters
       << ',' << sci(r.cpu_qr) << ',' << sci(r.cpu_slater) << ',' << sci(r.cpu_init) << ','
       << sci(r.cpu_solve) << ',' << sci(r.rec_err) << ',' << sci(r.residual) << ','
       << sanitize(r.termination) << '\n';
  }
}

void emit_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "emit_csv: cannot open " + path);
  write_csv(os, rows);
  if (!os) throw Error(ErrorCode::kIo, "emit_csv: write failed for " + path);
}

std::vector<BenchRow> parse_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw Error(ErrorCode::kIo, "parse_csv: missing or unexpected header");
  }
  std::vector<BenchRow> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw Error(ErrorCode::kIo, "parse_csv: expected 13 fields: " + line);
    BenchRow r;
    r.method = f[0];
    r.seed = parse_count(f[1]);
    r.p = parse_count(f[2]);
    r.n = parse_count(f[3]);
    r.k = parse_count(f[4]);
    r.iters = parse_count(f[5]);
    r.cpu_qr = parse_real(f[6]);
    r.cpu_slater = parse_real(f[7]);
    r.cpu_init = parse_real(f[8]);
    r.cpu_solve = parse_real(f[9]);
    r.rec_err = parse_real(f[10]);
    r.residual = parse_real(f[11]);
    r.termination = f[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<BenchRow> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorCode::kIo, "read_csv: cannot open " + path);
  return parse_csv(is);
}

void write_history_csv(std::ostream& os, const std::vector<HistoryRow>& rows) {
  os << "method,seed,k,obj,obj_next,step_norm,beta,beta0,tau,tau_bound,lambda,slack_next,"
        "in_box_next,backtracks,penalty,penalty_next,beta_inv,t_step,violated\n";
  for (const auto& h : rows) {
    const IterationRecord& r = h.record;
    os << h.method << ',' << h.seed << ',' << r.k << ',' << sci(r.obj) << ',' << sci(r.obj_next)
       << ',' << sci(r.step_norm) << ',' << sci(r.beta) << ',' << sci(r.beta0) << ','
       << sci(r.tau) << ',' << sci(r.tau_bound) << ',' << sci(r.lambda) << ','
       << sci(r.slack_next) << ',' << (r.in_box_next ? 1 : 0) << ',' << r.backtracks << ','
       << sci(r.penalty) << ',' << sci(r.penalty_next) << ',' << sci(r.beta_inv) << ','
       << sci(r.t_step) << ',' << (r.violated ? 1 : 0) << '\n';
  }
}

void emit_history_csv(const std::vector<HistoryRow>& rows, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::kIo, "emit_history_csv: cannot open " + path);
  write_history_csv(os, rows);
}

std::vector<SummaryRow> summarize(const std::vector<BenchRow>& rows) {
  std::vector<SummaryRow> out;
  std::map<std::string, std::size_t> index;
  for (const auto& r : rows) {
    auto [it, inserted] = index.try_emplace(r.method, out.size());
    if (inserted) out.push_back(SummaryRow{r.method});
    SummaryRow& s = out[it->second];
    ++s.runs;
    if (!r.completed()) continue;
    ++s.completed;
    s.iters += static_cast<double>(r.iters);
    s.cpu_qr += r.cpu_qr;
    s.cpu_slater += r.cpu_slater;
    s.cpu_init += r.cpu_init;
    s.cpu_solve += r.cpu_solve;
    s.rec_err += r.rec_err;
    s.residual += r.residual;
  }
  for (auto& s : out) {
    if (s.completed == 0) continue;
    const double c = static_cast<double>(s.completed);
    s.iters /= c;
    s.cpu_qr /= c;
    s.cpu_slater /= c;
    s.cpu_init /= c;
    s.cpu_solve /= c;
    s.rec_err /= c;
    s.residual /= c;
  }
  return out;
}

void print_summary(std::ostream& os, const std::vector<SummaryRow>& summary) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %5s %9s %8s %8s %8s %9s %8s %10s\n", "method", "runs",
                "iters", "qr[s]", "slater", "init[s]", "solve[s]", "rec_err", "residual");
  os << buf;
  for (const auto& s : summary) {
    std::snprintf(buf, sizeof buf, "%-12s %2zu/%-2zu %9.1f %8.3f %8.3f %8.3f %9.3f %8.4f %10.2e\n",
                  s.method.c_str(), s.completed, s.runs, s.iters, s.cpu_qr, s.cpu_slater,
                  s.cpu_init, s.cpu_solve, s.rec_err, s.residual);
    os << buf;
  }
}

}  // namespace dcfeas
