// bench: seeded sweeps of the feasible method and the penalty baseline.
//
//   bench --problem e3 --size-index 2 --seeds 20 --methods fpa,esqm:0.02 --out e3.csv
//
// Flags may also come from a key = value file given with --config; flags on
// the command line take precedence.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dcfeas/bench.hpp"
#include "dcfeas/errors.hpp"

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark the feasible proximal method against the penalty baseline"};
  app.set_config("--config", "", "key = value configuration file");

  std::string problem = "e3";
  int size_index = 2;
  std::string dims_text;
  int seeds = 1;
  std::uint64_t first_seed = 1;
  std::string methods_text = "fpa,esqm:0.5,esqm:0.1,esqm:0.02";
  std::string out_path = "bench.csv";
  bool log_history = false;
  bool large_scale = false;
  int jobs = 1;
  dcfeas::BenchConfig cfg;

  app.add_option("--problem", problem, "Model to generate")->check(CLI::IsMember({"e3", "e4"}));
  auto* size_opt =
      app.add_option("--size-index", size_index, "Size index i (desk or large scale)")
          ->check(CLI::PositiveNumber);
  auto* dims_opt = app.add_option("--dims", dims_text, "Explicit p,n,k");
  size_opt->excludes(dims_opt);
  app.add_option("--seeds", seeds, "Number of seeded instances")->check(CLI::PositiveNumber);
  app.add_option("--first-seed", first_seed, "Seed of the first instance");
  app.add_option("--methods", methods_text, "Comma list of fpa and esqm:<delta>");
  app.add_option("--out", out_path, "CSV output path");
  app.add_flag("--log-history", log_history, "Also write <out>.history.csv");
  app.add_flag("--large-scale", large_scale, "Use the large problem sizes");
  app.add_option("--jobs", jobs, "Worker threads (one instance per worker)")
      ->check(CLI::PositiveNumber);
  app.add_option("--mu", cfg.mu, "Weight of the subtracted norm");
  app.add_option("--tol", cfg.tol, "Termination tolerance");
  app.add_option("--max-iter", cfg.fpa_max_iter, "Iteration cap of the feasible method");
  app.add_option("--esqm-max-iter", cfg.esqm_max_iter, "Iteration cap of the penalty method");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.problem = problem == "e3" ? dcfeas::ProblemKind::kE3 : dcfeas::ProblemKind::kE4;
    if (!dims_text.empty()) {
      unsigned long p = 0, n = 0, k = 0;
      char tail = 0;
      if (std::sscanf(dims_text.c_str(), "%lu,%lu,%lu%c", &p, &n, &k, &tail) != 3) {
        std::cerr << "--dims expects p,n,k\n";
        return 2;
      }
      cfg.dims = {p, n, k};
    } else {
      cfg.dims = dcfeas::size_index_dims(cfg.problem, size_index, large_scale);
    }
    cfg.seeds = seeds;
    cfg.first_seed = first_seed;
    for (const auto& m : split_list(methods_text)) cfg.methods.push_back(dcfeas::MethodSpec::parse(m));
    cfg.output_path = out_path;
    cfg.log_history = log_history;
    cfg.jobs = jobs;
    dcfeas::validate(cfg);
  } catch (const dcfeas::Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 2;
  }

  std::cout << "problem " << problem << "  p=" << cfg.dims.p << " n=" << cfg.dims.n
            << " k=" << cfg.dims.k << "  seeds=" << cfg.seeds << '\n';
  const dcfeas::BenchResult result = dcfeas::run_benchmark(cfg);
  try {
    dcfeas::emit_csv(result.rows, cfg.output_path);
    if (cfg.log_history) {
      dcfeas::emit_history_csv(result.history, cfg.output_path + ".history.csv");
    }
  } catch (const dcfeas::Error& e) {
    std::cerr << "bench: " << e.what() << '\n';
    return 1;
  }
  dcfeas::print_summary(std::cout, dcfeas::summarize(result.rows));
  for (const auto& row : result.rows) {
    if (!row.completed()) {
      std::cerr << row.method << " seed " << row.seed << ": " << row.termination << '\n';
    }
  }
  return result.all_completed() ? 0 : 1;
}
