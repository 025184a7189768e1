#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "scenopt/jsonio.hpp"
#include "scenopt/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace scenopt;

namespace {

// every key any command understands; a config file key outside this set
// is a validation error
const std::set<std::string> kKnownKeys = {
    "kind",       "items",      "horizon",       "n",       "seed",
    "branching",  "epochs",     "hidden",        "lr",      "time_limit",
    "fix_threshold", "mode",    "screening",     "unfix_budget",
    "coverage_threshold", "jobs",  "capacity_ratio", "tightness"};

struct CliError : std::runtime_error {
  int code;
  CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

// flat key-value config; precedence flag > file > SCENOPT_SEED env > default
struct Resolver {
  ordered_json file;
  CLI::App* cmd = nullptr;

  bool flag_given(const std::string& name) const {
    return cmd->count("--" + name) > 0;
  }

  template <typename T>
  void apply(const std::string& key, T& value) const {
    if (flag_given(key)) return;
    if (file.contains(key)) {
      try {
        value = file.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw CliError(2, "config key '" + key + "' has the wrong type");
      }
    }
  }

  void apply_seed(std::uint64_t& seed) const {
    if (flag_given("seed")) return;
    if (file.contains("seed")) {
      seed = file.at("seed").get<std::uint64_t>();
      return;
    }
    if (const char* env = std::getenv("SCENOPT_SEED"))
      seed = std::strtoull(env, nullptr, 10);
  }
};

ordered_json load_config(const std::string& path) {
  if (path.empty()) return ordered_json::object();
  std::ifstream in(path);
  if (!in) throw CliError(2, "config file not found: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw CliError(2, std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw CliError(2, "config must be a flat JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!kKnownKeys.count(k)) throw CliError(2, "unknown config key: " + k);
    if (v.is_object() || v.is_array())
      throw CliError(2, "config must be flat, key '" + k + "' is nested");
  }
  return j;
}

std::vector<int> parse_branching(const std::string& s) {
  std::vector<int> out;
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (...) {
      throw CliError(2, "bad branching spec: " + s);
    }
  }
  return out;
}

// Artifact index for the run; commands merge their outputs in. Paths are
// stored relative to the workdir.
void record_artifacts(const fs::path& workdir, const std::string& command,
                      const std::vector<std::string>& paths) {
  const fs::path mpath = workdir / "MANIFEST.json";
  ordered_json manifest = ordered_json::object();
  if (fs::exists(mpath)) {
    std::ifstream in(mpath);
    in >> manifest;
  }
  manifest[command] = paths;
  std::ofstream out(mpath);
  out << manifest.dump(2) << "\n";
}

void archive_config(const fs::path& workdir, const std::string& command,
                    const ordered_json& resolved) {
  std::ofstream out(workdir / ("config." + command + ".json"));
  out << resolved.dump(2) << "\n";
}

std::string pad4(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", i);
  return buf;
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  if (!fs::is_directory(dir))
    throw CliError(2, "directory not found: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

StochasticInstance load_instance_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError(2, "instance file not found: " + path.string());
  return load_instance(in);
}

void save_solution(const SolutionVector& sol, std::ostream& out) {
  out << "{\"kind\":\"solution\",\"objective\":" << fmt17(sol.objective)
      << ",\"items\":" << sol.setup.size() << "}\n";
  const char* names[] = {"setup", "production", "inventory"};
  const std::vector<std::vector<double>>* grids[] = {&sol.setup,
                                                     &sol.production,
                                                     &sol.inventory};
  for (int g = 0; g < 3; ++g)
    for (std::size_t j = 0; j < grids[g]->size(); ++j)
      out << "{\"field\":\"" << names[g] << "\",\"item\":" << j
          << ",\"values\":" << fmt17_array((*grids[g])[j]) << "}\n";
}

SolutionVector load_solution(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError(2, "solution file not found: " + path.string());
  SolutionVector sol;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line);
    if (j.contains("kind")) {
      sol.objective = j.at("objective").get<double>();
      continue;
    }
    const std::string field = j.at("field").get<std::string>();
    auto* grid = field == "setup" ? &sol.setup
                 : field == "production" ? &sol.production
                                         : &sol.inventory;
    const std::size_t item = j.at("item").get<std::size_t>();
    if (grid->size() <= item) grid->resize(item + 1);
    (*grid)[item] = j.at("values").get<std::vector<double>>();
  }
  return sol;
}

MipResult solve_instance(const StochasticInstance& inst, double time_limit) {
  BnbOptions opts;
  opts.time_limit_seconds = time_limit;
  return branch_and_bound(build_extensive_form(inst), opts);
}

int cmd_generate(const fs::path& workdir, const Resolver& r, std::string kind,
                 int items, int horizon, int n, std::uint64_t seed,
                 std::string branching, GeneratorRanges ranges) {
  r.apply("kind", kind);
  r.apply("items", items);
  r.apply("horizon", horizon);
  r.apply("n", n);
  r.apply("branching", branching);
  r.apply("capacity_ratio", ranges.capacity_ratio);
  r.apply("tightness", ranges.tightness);
  r.apply_seed(seed);
  if (kind != "mclsp" && kind != "msmk")
    throw CliError(2, "kind must be mclsp or msmk");
  if (items < 1 || horizon < 1 || n < 1)
    throw CliError(2, "items, horizon and n must be positive");
  const auto branch = parse_branching(branching);

  const fs::path dir = workdir / "instances";
  fs::create_directories(dir);
  std::vector<std::string> artifacts;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const fs::path path = dir / (pad4(i) + ".json");
    std::ofstream out(path);
    if (kind == "mclsp") {
      const MclspInstance inst = generate_mclsp(s, items, horizon, ranges);
      if (branch.empty())
        save_mclsp(inst, out);
      else
        save_stochastic(make_stochastic(inst, branch, s), out);
    } else {
      const MsmkInstance inst = generate_msmk(s, items, horizon, ranges);
      if (branch.empty())
        save_msmk(inst, out);
      else
        save_stochastic(make_stochastic(inst, branch, s), out);
    }
    artifacts.push_back("instances/" + pad4(i) + ".json");
  }
  archive_config(workdir, "generate",
                 {{"kind", kind},
                  {"items", items},
                  {"horizon", horizon},
                  {"n", n},
                  {"seed", seed},
                  {"branching", branching},
                  {"capacity_ratio", ranges.capacity_ratio},
                  {"tightness", ranges.tightness}});
  record_artifacts(workdir, "generate", artifacts);
  return 0;
}

int cmd_solve(const fs::path& workdir, const Resolver& r, double time_limit) {
  r.apply("time_limit", time_limit);
  const auto files = sorted_files(workdir / "instances");
  const fs::path dir = workdir / "solutions";
  fs::create_directories(dir);
  std::vector<std::string> artifacts;
  std::ofstream status_csv(workdir / "solve_status.csv");
  status_csv << "id,status,objective,nodes\n";
  for (const auto& f : files) {
    const StochasticInstance inst = load_instance_file(f);
    const MipResult res =
        solve_instance(inst, time_limit > 0 ? time_limit : kInf);
    const std::string id = f.stem().string();
    std::string status;
    switch (res.status) {
      case SolveStatus::Optimal: status = "optimal"; break;
      case SolveStatus::TimeLimit: status = "time-limit"; break;
      case SolveStatus::Infeasible: status = "infeasible"; break;
      default: status = "other"; break;
    }
    status_csv << id << "," << status << "," << fmt17(res.objective) << ","
               << res.nodes << "\n";
    if (res.status != SolveStatus::Optimal) continue;
    const fs::path path = dir / (id + ".json");
    std::ofstream out(path);
    save_solution(solution_from_assignment(inst, res.x, res.objective), out);
    artifacts.push_back("solutions/" + id + ".json");
  }
  artifacts.push_back("solve_status.csv");
  archive_config(workdir, "solve", {{"time_limit", time_limit}});
  record_artifacts(workdir, "solve", artifacts);
  return 0;
}

int cmd_train(const fs::path& workdir, const Resolver& r, int epochs,
              int hidden, double lr, std::uint64_t seed) {
  r.apply("epochs", epochs);
  r.apply("hidden", hidden);
  r.apply("lr", lr);
  r.apply_seed(seed);
  if (epochs < 1 || hidden < 1 || lr <= 0)
    throw CliError(2, "epochs, hidden and lr must be positive");

  const auto files = sorted_files(workdir / "instances");
  std::vector<TrainingSample> dataset;
  for (const auto& f : files) {
    const fs::path sol_path = workdir / "solutions" / f.filename();
    if (!fs::exists(sol_path)) continue;  // unsolved instances are skipped
    const StochasticInstance inst = load_instance_file(f);
    const SolutionVector opt = load_solution(sol_path);
    TrainingSample sample;
    sample.features = make_features(inst);
    sample.targets = make_targets(inst, opt);
    sample.tree = inst.tree;
    dataset.push_back(std::move(sample));
  }
  if (dataset.empty())
    throw CliError(2, "no solved instances found under " +
                          (workdir / "solutions").string());

  TrainConfig config;
  config.epochs = epochs;
  config.hidden = hidden;
  config.learning_rate = lr;
  config.seed = seed;
  std::vector<double> losses;
  const SeqModelParams model = train(dataset, config, &losses);

  {
    std::ofstream out(workdir / "model.json");
    save_model(model, out);
  }
  {
    std::ofstream out(workdir / "loss_history.csv");
    out << "epoch,loss\n";
    for (std::size_t e = 0; e < losses.size(); ++e)
      out << e << "," << fmt17(losses[e]) << "\n";
  }
  archive_config(workdir, "train",
                 {{"epochs", epochs}, {"hidden", hidden}, {"lr", lr},
                  {"seed", seed}});
  record_artifacts(workdir, "train", {"model.json", "loss_history.csv"});
  return 0;
}

SeqModelParams load_model_file(const fs::path& workdir) {
  const fs::path path = workdir / "model.json";
  std::ifstream in(path);
  if (!in) throw CliError(2, "model checkpoint not found: " + path.string());
  return load_model(in);
}

int cmd_predict(const fs::path& workdir, const Resolver& r,
                int coverage_threshold, std::uint64_t seed) {
  r.apply("coverage_threshold", coverage_threshold);
  r.apply_seed(seed);
  const SeqModelParams model = load_model_file(workdir);
  const auto files = sorted_files(workdir / "instances");
  const fs::path dir = workdir / "predictions";
  fs::create_directories(dir);
  std::vector<std::string> artifacts;
  for (const auto& f : files) {
    const StochasticInstance inst = load_instance_file(f);
    std::vector<std::vector<Vec>> probs;
    if (inst.items() > model.items)
      probs = itemwise_expand(model, inst, coverage_threshold, seed).probs;
    else
      probs = expand_horizon(model, inst);
    const fs::path path = dir / f.filename();
    std::ofstream out(path);
    out << "{\"kind\":\"predictions\",\"scenarios\":" << probs.size()
        << ",\"stages\":" << inst.horizon() << ",\"items\":" << inst.items()
        << "}\n";
    for (std::size_t s = 0; s < probs.size(); ++s)
      for (int t = 0; t < inst.horizon(); ++t) {
        std::vector<double> row(probs[s][t].data(),
                                probs[s][t].data() + probs[s][t].size());
        out << "{\"scenario\":" << s << ",\"stage\":" << t
            << ",\"probs\":" << fmt17_array(row) << "}\n";
      }
    artifacts.push_back("predictions/" + f.filename().string());
  }
  archive_config(workdir, "predict",
                 {{"coverage_threshold", coverage_threshold}, {"seed", seed}});
  record_artifacts(workdir, "predict", artifacts);
  return 0;
}

int cmd_evaluate(const fs::path& workdir, const Resolver& r,
                 double fix_threshold, std::string mode, bool no_screening,
                 double time_limit, int unfix_budget) {
  r.apply("fix_threshold", fix_threshold);
  r.apply("mode", mode);
  r.apply("time_limit", time_limit);
  r.apply("unfix_budget", unfix_budget);
  PipelineConfig config;
  config.fix_threshold = fix_threshold;
  config.screening = !no_screening;
  config.unfix_budget = unfix_budget;
  if (time_limit > 0) config.time_limit_seconds = time_limit;
  if (mode == "fix")
    config.mode = PipelineMode::Fix;
  else if (mode == "warm")
    config.mode = PipelineMode::WarmStart;
  else if (mode == "fix+warm")
    config.mode = PipelineMode::FixThenWarmStart;
  else
    throw CliError(2, "mode must be fix, warm or fix+warm");
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(2, e.what());
  }

  const SeqModelParams model = load_model_file(workdir);
  const auto files = sorted_files(workdir / "instances");
  std::vector<std::pair<std::string, PipelineReport>> rows;
  for (const auto& f : files) {
    const StochasticInstance inst = load_instance_file(f);
    const PipelineRunResult run = run_pipeline(inst, model, config);
    rows.push_back({f.stem().string(), run.report});
  }
  std::ofstream out(workdir / "metrics.csv");
  write_metrics_csv(rows, out);
  archive_config(workdir, "evaluate",
                 {{"fix_threshold", fix_threshold},
                  {"mode", mode},
                  {"screening", !no_screening},
                  {"time_limit", time_limit},
                  {"unfix_budget", unfix_budget}});
  record_artifacts(workdir, "evaluate", {"metrics.csv"});
  return 0;
}

int cmd_report(const fs::path& workdir) {
  const fs::path path = workdir / "metrics.csv";
  std::ifstream in(path);
  if (!in) throw CliError(2, "metrics file not found: " + path.string());
  std::string line;
  std::getline(in, line);  // header
  std::vector<std::pair<std::string, PipelineReport>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 11) throw CliError(2, "malformed metrics row: " + line);
    PipelineReport rep;
    rep.accuracy = std::stod(cells[1]);
    rep.accuracy_fixed_only = std::stod(cells[2]);
    rep.gap = std::stod(cells[3]);
    rep.infeasible_before_repair = std::stod(cells[4]);
    rep.repair_actions = std::stoi(cells[5]);
    rep.fixed_count = std::stoi(cells[6]);
    rep.time_reference = std::stod(cells[8]);
    rep.time_pipeline = std::stod(cells[9]);
    rep.time_factor = std::stod(cells[10]);
    rows.push_back({cells[0], rep});
  }
  std::ofstream out(workdir / "summary.json");
  write_summary_json(rows, out);
  record_artifacts(workdir, "report", {"summary.json"});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scenopt: learn-to-decide pipeline for multi-stage MIPs"};
  app.require_subcommand(1);

  std::string workdir = ".";
  std::string config_path;
  int jobs = 1;
  app.add_option("--workdir", workdir, "root directory for all artifacts");
  app.add_option("--config", config_path, "flat JSON config file");
  app.add_option("--jobs", jobs, "worker count (commands are single-process)");

  // generate
  auto* gen = app.add_subcommand("generate", "generate instance files");
  std::string kind = "mclsp", branching;
  int items = 3, horizon = 10, n = 10;
  std::uint64_t seed = 1;
  gen->add_option("--kind", kind, "mclsp or msmk");
  gen->add_option("--items", items, "item count d");
  gen->add_option("--horizon", horizon, "stage count T");
  gen->add_option("--n", n, "number of instances");
  gen->add_option("--seed", seed, "base seed; instance i uses seed+i");
  gen->add_option("--branching", branching,
                  "comma list, e.g. 2,2 (empty: deterministic)");
  GeneratorRanges ranges;
  gen->add_option("--capacity-ratio,--capacity_ratio", ranges.capacity_ratio,
                  "MCLSP capacity as a fraction of stage demand");
  gen->add_option("--tightness", ranges.tightness,
                  "MSMK capacity as a fraction of stage weight");

  // solve
  auto* slv = app.add_subcommand("solve", "solve instances exactly");
  double time_limit = 0.0;
  slv->add_option("--time-limit,--time_limit", time_limit,
                  "per-instance seconds (0: none)");

  // train
  auto* trn = app.add_subcommand("train", "train the sequence model");
  int epochs = 200, hidden = 32;
  double lr = 1e-3;
  trn->add_option("--epochs", epochs, "training epochs");
  trn->add_option("--hidden", hidden, "LSTM hidden width");
  trn->add_option("--lr", lr, "Adam learning rate");
  trn->add_option("--seed", seed, "initialization seed");

  // predict
  auto* prd = app.add_subcommand("predict", "write setup probabilities");
  int coverage = 2;
  prd->add_option("--coverage-threshold,--coverage_threshold", coverage,
                  "item-wise expansion coverage threshold");
  prd->add_option("--seed", seed, "subset sampler seed");

  // evaluate
  auto* evl = app.add_subcommand("evaluate", "run the full pipeline");
  double fix_threshold = 0.9;
  std::string mode = "fix+warm";
  bool no_screening = false;
  int unfix_budget = 200;
  evl->add_option("--fix-threshold,--fix_threshold", fix_threshold,
                  "probability cutoff for fixing");
  evl->add_option("--mode", mode, "fix, warm or fix+warm");
  evl->add_flag("--no-screening", no_screening, "skip feasibility repair");
  evl->add_option("--time-limit,--time_limit", time_limit,
                  "solver seconds (0: none)");
  evl->add_option("--unfix-budget,--unfix_budget", unfix_budget,
                  "maximum repair actions");

  // report
  app.add_subcommand("report", "aggregate metrics.csv into summary.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    const fs::path wd = workdir;
    fs::create_directories(wd);
    Resolver r;
    r.file = load_config(config_path);
    CLI::App* sub = app.get_subcommands().front();
    r.cmd = sub;
    const std::string name = sub->get_name();
    if (name == "generate")
      return cmd_generate(wd, r, kind, items, horizon, n, seed, branching,
                          ranges);
    if (name == "solve") return cmd_solve(wd, r, time_limit);
    if (name == "train") return cmd_train(wd, r, epochs, hidden, lr, seed);
    if (name == "predict") return cmd_predict(wd, r, coverage, seed);
    if (name == "evaluate")
      return cmd_evaluate(wd, r, fix_threshold, mode, no_screening, time_limit,
                          unfix_budget);
    if (name == "report") return cmd_report(wd);
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
