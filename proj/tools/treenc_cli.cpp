// treenc: generate, solve, oracle, bench and report.
#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "treenc/generators.hpp"
#include "treenc/instance_io.hpp"
#include "treenc/metaheuristics.hpp"
#include "treenc/report.hpp"

namespace fs = std::filesystem;
using namespace treenc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

struct UsageError : Error {
  using Error::Error;
};

struct RunOptions {
  std::string algorithm;
  double time_limit = 600.0;
  std::uint64_t seed = 1;
  std::optional<long long> max_iterations;
  std::optional<std::string> shake_p;
  std::optional<int> tenure_min;
  std::optional<int> tenure_max;
  bool improving_only = false;
  long long max_trees = BruteForceBudget{}.max_spanning_trees;
};

struct RunResult {
  Solution solution;
  std::string params;
  long long wall_ms = 0;
};

bool uses_seed(const std::string& algo) { return algo.rfind("ils-", 0) == 0 || algo.rfind("ts-", 0) == 0; }

RunResult run_algorithm(const ProblemInstance& inst, const RunOptions& opt) {
  const auto start = std::chrono::steady_clock::now();
  const SearchContext ctx(inst);
  RunResult out;
  const std::string& a = opt.algorithm;
  if (a == "mst") {
    out.solution = mst_heuristic(inst);
  } else if (a == "mst-loc-net" || a == "mst-loc-sch") {
    out.solution = mst_loc(ctx, a == "mst-loc-net" ? NeighborhoodKind::kNET : NeighborhoodKind::kSCH);
  } else if (a == "oracle") {
    out.solution = brute_force_instance(inst, {opt.max_trees}).solution;
    out.params = "max_trees=" + std::to_string(opt.max_trees);
  } else if (uses_seed(a)) {
    const Algorithm alg = a.rfind("ils-", 0) == 0 ? Algorithm::kILS : Algorithm::kTS;
    const NeighborhoodKind kind = a.ends_with("-net") ? NeighborhoodKind::kNET : NeighborhoodKind::kSCH;
    SearchConfig cfg = default_config(inst.variant, alg, kind);
    cfg.time_limit_seconds = opt.time_limit;
    cfg.seed = opt.seed;
    cfg.max_iterations = opt.max_iterations;
    if (opt.tenure_min) cfg.tenure_min = *opt.tenure_min;
    if (opt.tenure_max) cfg.tenure_max = *opt.tenure_max;
    if (opt.improving_only) cfg.acceptance = IlsAcceptance::kImprovingOnly;
    try {
      if (opt.shake_p) cfg.shake_p = Fraction::parse(*opt.shake_p);
      cfg.validate();
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    out.solution = run_metaheuristic(ctx, cfg);
    std::ostringstream p;
    if (alg == Algorithm::kILS) {
      p << "p=" << cfg.shake_p.to_string();
      if (opt.improving_only) p << ";accept=improving";
    } else {
      p << "tenure=" << cfg.tenure_min << '-' << cfg.tenure_max;
    }
    p << ";time_limit=" << opt.time_limit;
    if (opt.max_iterations) p << ";max_iters=" << *opt.max_iterations;
    out.params = p.str();
  } else {
    throw UsageError("unknown algorithm '" + a + "'");
  }
  out.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string family_from_stem(const std::string& stem) {
  const std::string prefix = stem.substr(0, stem.find('-'));
  return parse_family(prefix) ? prefix : "custom";
}

RunRecord make_record(const fs::path& path, const ProblemInstance& inst, const std::string& algo, std::uint64_t seed,
                      const RunResult& r) {
  RunRecord rec;
  rec.instance = path.stem().string();
  rec.variant = inst.variant;
  rec.family = family_from_stem(rec.instance);
  rec.n = inst.n();
  rec.algorithm = algo;
  rec.seed = seed;
  rec.objective = r.solution.objective;
  rec.wall_ms = r.wall_ms;
  rec.params = r.params;
  return rec;
}

nlohmann::ordered_json solution_json(const RunRecord& rec, const ProblemInstance& inst, const Solution& s) {
  nlohmann::ordered_json j;
  j["instance"] = rec.instance;
  j["variant"] = std::string(to_string(inst.variant));
  j["algorithm"] = rec.algorithm;
  j["seed"] = rec.seed;
  j["params"] = rec.params;
  j["objective"] = s.objective;
  j["schedule"] = s.schedule.order;
  auto& edges = j["schedule_edges"] = nlohmann::ordered_json::array();
  for (EdgeId e : s.schedule.order) edges.push_back({inst.net.edge(e).a, inst.net.edge(e).b});
  return j;
}

void append_csv(const std::string& path, const RunRecord& rec) {
  const bool fresh = !fs::exists(path) || fs::file_size(path) == 0;
  std::ofstream out(path, std::ios::app);
  if (!out) throw Error("cannot open " + path);
  if (fresh) out << kResultsHeader << '\n';
  out << to_csv_row(rec) << '\n';
}

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream in(text);
  std::string item;
  try {
    while (std::getline(in, item, ',')) {
      const auto dash = item.find('-');
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const auto lo = std::stoull(item.substr(0, dash)), hi = std::stoull(item.substr(dash + 1));
        if (hi < lo || hi - lo > 100000) throw UsageError("bad seed range " + item);
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      }
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad seed list '" + text + "'");
  }
  if (out.empty()) throw UsageError("empty seed list");
  return out;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<fs::path> instance_files(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

int cmd_generate(const std::string& family, int n, const std::string& variant, std::uint64_t seed, int count,
                 const std::string& out) {
  GeneratorSpec spec;
  const auto f = parse_family(family);
  const auto v = parse_variant(variant);
  if (!f) throw UsageError("unknown family '" + family + "'");
  if (!v) throw UsageError("unknown variant '" + variant + "'");
  if (n < 2) throw UsageError("--n must be at least 2");
  spec.family = *f;
  spec.n = n;
  spec.variant = *v;
  const bool to_dir = count > 1 || fs::is_directory(out) || out.ends_with('/');
  if (to_dir) fs::create_directories(out);
  for (int k = 0; k < count; ++k) {
    spec.seed = seed + static_cast<std::uint64_t>(k);
    const GeneratedInstance g = generate(spec);
    if (!g.edge_target_reached) {
      std::cerr << "warning: seed " << spec.seed << ": fewer edges than the target could be placed\n";
    }
    const std::string name = family + "-n" + std::to_string(n) + "-s" + std::to_string(spec.seed) + ".json";
    write_instance(g.instance, to_dir ? (fs::path(out) / name).string() : out);
  }
  return kExitOk;
}

int cmd_solve(const std::string& path, const RunOptions& opt, const std::optional<std::string>& csv, bool no_wall) {
  const ProblemInstance inst = read_instance(path);
  const RunResult r = run_algorithm(inst, opt);
  RunRecord rec = make_record(path, inst, opt.algorithm, uses_seed(opt.algorithm) ? opt.seed : 0, r);
  if (no_wall) rec.wall_ms = 0;
  std::cout << solution_json(rec, inst, r.solution).dump(2) << '\n';
  std::cerr << "wall_ms " << r.wall_ms << '\n';
  if (csv) append_csv(*csv, rec);
  return kExitOk;
}

int cmd_bench(const std::string& dir, const std::string& algos, const RunOptions& base, const std::string& seeds,
              const std::string& out, int jobs, bool no_wall) {
  const auto files = instance_files(dir);
  const auto algo_list = split_list(algos);
  for (const auto& a : algo_list) {
    if (!is_algorithm_label(a)) throw UsageError("unknown algorithm '" + a + "'");
  }
  const auto seed_list = parse_seeds(seeds);

  struct Task {
    std::size_t file;
    std::string algo;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < files.size(); ++f) {
    for (const auto& a : algo_list) {
      if (uses_seed(a)) {
        for (auto s : seed_list) tasks.push_back({f, a, s});
      } else {
        tasks.push_back({f, a, 0});
      }
    }
  }
  // Instances are parsed once, up front, so bad files fail before any run.
  std::vector<ProblemInstance> instances;
  for (const auto& f : files) instances.push_back(read_instance(f.string()));

  std::vector<RunRecord> records(tasks.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::string> first_error;
  auto worker = [&]() {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      RunOptions opt = base;
      opt.algorithm = t.algo;
      opt.seed = t.seed;
      try {
        records[i] = make_record(files[t.file], instances[t.file], t.algo, t.seed, run_algorithm(instances[t.file], opt));
      } catch (const BudgetExceededError&) {
        // Oracle out of budget: the run did not complete, objective stays empty.
        RunRecord& rec = records[i];
        rec.instance = files[t.file].stem().string();
        rec.variant = instances[t.file].variant;
        rec.family = family_from_stem(rec.instance);
        rec.n = instances[t.file].n();
        rec.algorithm = t.algo;
        rec.seed = t.seed;
        rec.params = "max_trees=" + std::to_string(base.max_trees);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error) first_error = files[t.file].string() + ": " + e.what();
      }
      if (no_wall) records[i].wall_ms = 0;
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) throw Error(*first_error);

  std::ofstream csv(out);
  if (!csv) throw Error("cannot open " + out);
  csv << kResultsHeader << '\n';
  for (const auto& r : records) csv << to_csv_row(r) << '\n';
  return kExitOk;
}

int cmd_report(const std::vector<std::string>& results, const std::optional<std::string>& best_path,
               const std::optional<std::string>& instances_dir, const std::optional<std::string>& out) {
  ReportInputs in;
  for (const auto& r : results) {
    auto recs = read_results_file(r);
    in.records.insert(in.records.end(), recs.begin(), recs.end());
  }
  if (best_path) {
    std::ifstream b(*best_path);
    if (!b) throw Error("cannot open " + *best_path);
    in.best = read_best_values(b);
  }
  std::vector<std::string> lateness_ids;
  for (const auto& r : in.records) {
    if (is_lateness(r.variant)) lateness_ids.push_back(r.instance);
  }
  std::sort(lateness_ids.begin(), lateness_ids.end());
  lateness_ids.erase(std::unique(lateness_ids.begin(), lateness_ids.end()), lateness_ids.end());
  if (!lateness_ids.empty()) {
    if (!instances_dir) throw UsageError("lateness results need --instances-dir for the smallest due dates");
    for (const auto& id : lateness_ids) {
      const auto inst = read_instance((fs::path(*instances_dir) / (id + ".json")).string());
      if (auto d = inst.min_due_date()) in.d_min[id] = *d;
    }
  }
  const std::string table = render_report(build_report(in));
  if (out) {
    std::ofstream o(*out);
    if (!o) throw Error("cannot open " + *out);
    o << table;
  } else {
    std::cout << table;
  }
  return kExitOk;
}

std::string algorithm_list() {
  std::string s;
  for (auto a : kAlgorithmLabels) s += (s.empty() ? "" : " | ") + std::string(a);
  return s;
}

void add_run_options(CLI::App* cmd, RunOptions& opt) {
  cmd->add_option("--time-limit", opt.time_limit, "Seconds per metaheuristic run")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-iters", opt.max_iterations, "Stop metaheuristics after this many iterations");
  cmd->add_option("--p", opt.shake_p, "ILS shake probability, e.g. 0.25 (default: tuned per variant)");
  cmd->add_option("--tenure-min", opt.tenure_min, "TS minimum tabu tenure");
  cmd->add_option("--tenure-max", opt.tenure_max, "TS maximum tabu tenure");
  cmd->add_flag("--improving-only", opt.improving_only, "ILS accepts only improving local optima");
  cmd->add_option("--max-trees", opt.max_trees, "Oracle budget in enumerated spanning trees")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree-efficient network construction heuristics"};
  app.require_subcommand(1);

  std::string family, variant = "USRT", out;
  int n = 10, count = 1;
  std::uint64_t seed = 1;
  auto* gen = app.add_subcommand("generate", "Generate random instances");
  gen->add_option("--family", family, "euclidean_complete | random_metric | planar_road")->required();
  gen->add_option("--n", n, "Number of vertices")->required();
  gen->add_option("--variant", variant, "USRT | SWRT | L | L-ETPC");
  gen->add_option("--seed", seed, "Seed (first seed when --count > 1)");
  gen->add_option("--count", count, "Number of instances; writes into the -o directory when > 1")
      ->check(CLI::PositiveNumber);
  gen->add_option("-o,--out", out, "Output file or directory")->required();

  std::string instance;
  RunOptions run;
  std::optional<std::string> csv;
  bool no_wall = false;
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->add_option("instance", instance, "Instance JSON")->required();
  solve->add_option("--algo", run.algorithm, algorithm_list())->required();
  solve->add_option("--seed", run.seed, "Random seed");
  solve->add_option("--csv", csv, "Append a results row to this CSV");
  solve->add_flag("--no-wall-time", no_wall, "Write wall_ms as 0 in CSV rows");
  add_run_options(solve, run);

  RunOptions oracle_opt;
  oracle_opt.algorithm = "oracle";
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by spanning-tree enumeration (small instances)");
  oracle->add_option("instance", instance, "Instance JSON")->required();
  oracle->add_option("--max-trees", oracle_opt.max_trees, "Budget in enumerated spanning trees")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--csv", csv, "Append a results row to this CSV");
  oracle->add_flag("--no-wall-time", no_wall, "Write wall_ms as 0 in CSV rows");

  std::string dir, algos = "mst,mst-loc-net,mst-loc-sch,ils-net,ils-sch,ts-net,ts-sch", seeds = "1";
  RunOptions bench_opt;
  int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  auto* bench = app.add_subcommand("bench", "Run algorithms over a directory of instances");
  bench->add_option("--instances-dir", dir, "Directory of instance JSON files")->required();
  bench->add_option("--algos", algos, "Comma-separated algorithm labels");
  bench->add_option("--seeds", seeds, "Seeds, e.g. 1,2,3 or 1-10");
  bench->add_option("--out", out, "Results CSV")->required();
  bench->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--no-wall-time", no_wall, "Write wall_ms as 0");
  add_run_options(bench, bench_opt);

  std::vector<std::string> results;
  std::optional<std::string> best, instances_dir, report_out;
  auto* report = app.add_subcommand("report", "Per-group gap table from results CSVs");
  report->add_option("--results", results, "Results CSV files")->required();
  report->add_option("--best", best, "CSV of instance,best values");
  report->add_option("--instances-dir", instances_dir, "Instance directory (needed for lateness variants)");
  report->add_option("--out", report_out, "Output CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(family, n, variant, seed, count, out);
    if (*solve) return cmd_solve(instance, run, csv, no_wall);
    if (*oracle) return cmd_solve(instance, oracle_opt, csv, no_wall);
    if (*bench) return cmd_bench(dir, algos, bench_opt, seeds, out, jobs, no_wall);
    if (*report) return cmd_report(results, best, instances_dir, report_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
