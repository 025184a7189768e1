// Acceptance gate: one pass/fail line per criterion, nonzero exit when
// any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "scenopt/pipeline.hpp"

namespace fs = std::filesystem;
using namespace scenopt;

namespace {

int g_failures = 0;

void verdict(int criterion, bool pass, const std::string& what) {
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << ": "
            << what << "\n";
  if (!pass) ++g_failures;
}

std::vector<std::vector<Vec>> bundle_consistent_features(
    const ScenarioTree& tree, int width, unsigned salt) {
  std::vector<std::vector<Vec>> f(tree.num_scenarios(),
                                  std::vector<Vec>(tree.horizon));
  unsigned state = salt;
  for (auto& row : f)
    for (auto& v : row) {
      v = Vec(width);
      for (int k = 0; k < width; ++k) {
        state = state * 1664525u + 1013904223u;
        v[k] = static_cast<double>(state >> 8) / static_cast<double>(1u << 24);
      }
    }
  const auto paths = scenario_paths(tree);
  for (std::size_t s = 1; s < paths.size(); ++s)
    for (int t = 0; t < tree.horizon; ++t)
      for (std::size_t r = 0; r < s; ++r)
        if (paths[r].node_by_stage[t] == paths[s].node_by_stage[t])
          f[s][t] = f[r][t];
  return f;
}

// ---------------------------------------------------------------- 1
void criterion_oracle_equivalence() {
  const auto start = std::chrono::steady_clock::now();
  int mismatches = 0, total = 0;
  for (int i = 0; i < 50; ++i) {
    const int d = 1 + i % 2;
    const int T = 2 + i % 3;
    const MipModel m = build_extensive_form(generate_mclsp(1000 + i, d, T));
    if (static_cast<int>(m.binary_indices().size()) > 20) continue;
    const MipResult bb = branch_and_bound(m);
    const MipResult ex = exhaustive_oracle(m);
    ++total;
    if (std::abs(bb.objective - ex.objective) > 1e-6) ++mismatches;
  }
  for (int i = 0; i < 50; ++i) {
    const int d = 2 + i % 3;
    const int T = 1 + i % 2;
    const MipModel m = build_extensive_form(generate_msmk(2000 + i, d, T));
    if (static_cast<int>(m.binary_indices().size()) > 20) continue;
    const MipResult bb = branch_and_bound(m);
    const MipResult ex = exhaustive_oracle(m);
    ++total;
    if (std::abs(bb.objective - ex.objective) > 1e-6) ++mismatches;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream what;
  what << "oracle equivalence on " << total << " instances, " << mismatches
       << " mismatches, " << secs << "s";
  verdict(1, total == 100 && mismatches == 0 && secs < 120.0, what.str());
}

// ---------------------------------------------------------------- 2
void criterion_gradient_fidelity() {
  const ScenarioTree tree = build_tree({2, 2}, 314, 2);
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(314, 2, 3), {2, 2}, 314);
  const auto features = make_features(inst);
  const int F = static_cast<int>(features[0][0].size());
  SeqModelParams p = init_params(F, 2, 4, 77);

  std::vector<std::vector<Vec>> targets(tree.num_scenarios(),
                                        std::vector<Vec>(tree.horizon));
  unsigned state = 99;
  for (auto& row : targets)
    for (auto& v : row) {
      v = Vec(2);
      for (int j = 0; j < 2; ++j) {
        state = state * 1103515245u + 12345u;
        v[j] = (state >> 16) % 2 ? 1.0 : 0.0;
      }
    }
  const auto bundles = bundles_for(tree);
  const ForwardResult fwd = forward(p, features, &tree, &targets, true);
  SeqModelParams grad = backward(p, fwd, targets, bundles);

  std::vector<double*> gptrs, pptrs;
  std::vector<int> sizes;
  visit_tensors(grad, [&](const std::string&, double* d, int r, int c) {
    gptrs.push_back(d);
    sizes.push_back(r * c);
  });
  visit_tensors(p, [&](const std::string&, double* d, int r, int c) {
    pptrs.push_back(d);
    (void)r;
    (void)c;
  });

  const double h = 1e-5;
  double worst = 0.0;
  long entries = 0;
  for (std::size_t t = 0; t < gptrs.size(); ++t)
    for (int k = 0; k < sizes[t]; ++k) {
      const double saved = pptrs[t][k];
      pptrs[t][k] = saved + h;
      const double up =
          loss(forward(p, features, &tree, &targets), targets, bundles);
      pptrs[t][k] = saved - h;
      const double down =
          loss(forward(p, features, &tree, &targets), targets, bundles);
      pptrs[t][k] = saved;
      const double fd = (up - down) / (2 * h);
      const double g = gptrs[t][k];
      worst = std::max(worst,
                       std::abs(fd - g) / std::max(1e-8, std::abs(g)));
      ++entries;
    }
  std::ostringstream what;
  what << "gradient fidelity over " << entries
       << " parameter entries, worst relative error " << worst;
  verdict(2, worst < 1e-4, what.str());
}

// ---------------------------------------------------------------- 3
void criterion_non_anticipativity() {
  bool pass = true;
  long checked = 0;
  for (const std::vector<int> branching :
       {std::vector<int>{2, 2}, std::vector<int>{3, 3}}) {
    const ScenarioTree tree = build_tree(branching, 5, 1);
    const auto bundles = bundles_for(tree);
    for (int trial = 0; trial < 20; ++trial) {
      const SeqModelParams p = init_params(4, 2, 5, 9000 + trial);
      const auto features = bundle_consistent_features(tree, 4, 31 + trial);
      const ForwardResult r = forward(p, features, &tree);
      for (int t = 0; t < tree.horizon; ++t)
        for (const auto& b : bundles[t])
          for (int m : b.members)
            for (int j = 0; j < 2; ++j) {
              if (r.probs[m][t][j] != r.probs[b.representative][t][j])
                pass = false;
              ++checked;
            }
    }
  }
  std::ostringstream what;
  what << "non-anticipativity exactness, " << checked
       << " bundle-member predictions bitwise compared";
  verdict(3, pass, what.str());
}

// ---------------------------------------------------------------- 4
void criterion_expansion_identity() {
  const StochasticInstance inst =
      make_stochastic(generate_mclsp(404, 3, 4), {2, 2, 2}, 404);
  const SeqModelParams model =
      init_params(feature_width(inst.kind, 3), 3, 6, 404);

  const auto direct = forward(model, make_features(inst), &inst.tree).probs;
  const ExpansionResult item = itemwise_expand(model, inst, 0, 1);
  const auto horiz = expand_horizon(model, inst);

  bool pass = true;
  for (std::size_t s = 0; s < direct.size(); ++s)
    for (std::size_t t = 0; t < direct[s].size(); ++t)
      for (int j = 0; j < 3; ++j) {
        if (item.probs[s][t][j] != direct[s][t][j]) pass = false;
        if (horiz[s][t][j] != direct[s][t][j]) pass = false;
      }
  verdict(4, pass,
          "expansion identity (item-wise with full subset, horizon at the "
          "training length) is bitwise");
}

// ---------------------------------------------------------------- 5
void criterion_pipeline_safety() {
  GeneratorRanges ranges;
  ranges.capacity_ratio = 1.0;
  DatasetSpec spec;
  spec.items = 2;
  spec.horizon = 4;
  spec.count = 20;
  spec.seed = 505;
  spec.ranges = ranges;
  const Dataset data = make_dataset(spec);
  std::vector<TrainingSample> samples;
  for (const auto& e : data.entries) samples.push_back(e.sample);
  TrainConfig tc;
  tc.epochs = 40;
  tc.hidden = 8;
  tc.seed = 5;
  const SeqModelParams model = train(samples, tc);

  int infeasible = 0, gap_violations = 0, warm_mismatches = 0, runs = 0;
  GeneratorRanges headroom;  // high-demand scenarios must stay feasible
  headroom.capacity_ratio = 1.5;
  auto instance_for = [&](int i) {
    StochasticInstance inst;
    if (i % 5 == 4) {
      inst = make_stochastic(generate_mclsp(7000 + i, 2, 4, headroom),
                             {2, 2, 2}, 7000 + i);
    } else {
      inst.kind = InstanceKind::Mclsp;
      inst.mclsp = generate_mclsp(7000 + i, 2, 4, ranges);
      inst.tree = chain_tree(4, 2);
    }
    return inst;
  };
  for (int i = 0; i < 50; ++i) {
    const StochasticInstance inst = instance_for(i);
    PipelineConfig config;
    const bool warm_only = i % 3 == 0;
    config.mode =
        warm_only ? PipelineMode::WarmStart : PipelineMode::FixThenWarmStart;
    const PipelineRunResult run = run_pipeline(inst, model, config);
    ++runs;
    if (!evaluate_solution(inst, run.solution).feasible) ++infeasible;
    if (run.report.gap < -1e-6) ++gap_violations;
    if (warm_only && run.report.objective != run.report.reference_objective)
      ++warm_mismatches;
  }
  std::ostringstream what;
  what << "pipeline safety over " << runs << " runs: " << infeasible
       << " infeasible, " << gap_violations << " gap violations, "
       << warm_mismatches << " warm-start objective mismatches";
  verdict(5, infeasible == 0 && gap_violations == 0 && warm_mismatches == 0,
          what.str());
}

// ---------------------------------------------------------------- 6
void criterion_desk_scale_quality() {
  GeneratorRanges ranges;
  ranges.capacity_ratio = 1.0;
  DatasetSpec spec;
  spec.items = 3;
  spec.horizon = 10;
  spec.count = 210;
  spec.seed = 42;
  spec.ranges = ranges;
  const Dataset data = make_dataset(spec);
  if (data.entries.size() < 200) {
    verdict(6, false, "fewer than 200 solved training instances");
    return;
  }
  std::vector<TrainingSample> samples;
  for (const auto& e : data.entries) samples.push_back(e.sample);
  TrainConfig tc;
  tc.epochs = 60;
  tc.hidden = 32;
  tc.seed = 6;
  const SeqModelParams model = train(samples, tc);

  std::vector<double> gaps, accs;
  for (int i = 0; i < 50; ++i) {
    StochasticInstance inst;
    inst.kind = InstanceKind::Mclsp;
    inst.mclsp = generate_mclsp(9000 + i, 3, 10, ranges);
    inst.tree = chain_tree(10, 3);
    PipelineConfig config;
    const PipelineRunResult run = run_pipeline(inst, model, config);
    gaps.push_back(run.report.gap);
    accs.push_back(run.report.accuracy);
  }
  std::sort(gaps.begin(), gaps.end());
  const double median_gap = 0.5 * (gaps[24] + gaps[25]);
  double mean_acc = 0.0;
  for (double a : accs) mean_acc += a;
  mean_acc /= static_cast<double>(accs.size());
  std::ostringstream what;
  what << "desk-scale quality on 50 held-out MCLSP d=3 T=10: median gap "
       << median_gap << " (limit 0.05), mean accuracy " << mean_acc
       << " (floor 0.85), trained on " << data.entries.size() << " instances";
  verdict(6, median_gap <= 0.05 && mean_acc >= 0.85, what.str());
}

// ---------------------------------------------------------------- 7
std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// metrics rows without the timing columns (time_ref_s, time_pipe_s,
// time_factor are the last three)
std::string strip_timing(const std::string& csv) {
  std::stringstream in(csv), out;
  std::string line;
  while (std::getline(in, line)) {
    int commas = 0;
    std::size_t cut = line.size();
    for (std::size_t i = 0; i < line.size(); ++i)
      if (line[i] == ',' && ++commas == 8) {
        cut = i;
        break;
      }
    out << line.substr(0, cut) << "\n";
  }
  return out.str();
}

void criterion_determinism() {
  const fs::path base = fs::temp_directory_path() / "scenopt_acceptance";
  fs::remove_all(base);
  bool pass = true;
  std::string detail = "full CLI replay is byte-identical";
  for (const char* run : {"r1", "r2"}) {
    const fs::path wd = base / run;
    const std::string prefix =
        std::string(SCENOPT_CLI_PATH) + " --workdir " + wd.string() + " ";
    const std::vector<std::string> cmds = {
        "generate --kind mclsp --items 2 --horizon 4 --n 6 --seed 77 "
        "--capacity-ratio 1.0",
        "solve",
        "train --epochs 20 --hidden 8 --seed 77",
        "predict",
        "evaluate",
        "report"};
    for (const auto& c : cmds) {
      const int status = std::system((prefix + c + " > /dev/null 2>&1").c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        pass = false;
        detail = "CLI command failed: " + c;
      }
    }
  }
  if (pass) {
    const fs::path a = base / "r1", b = base / "r2";
    for (const char* sub : {"instances", "solutions", "predictions"})
      for (const auto& e : fs::directory_iterator(a / sub))
        if (slurp(e.path()) != slurp(b / sub / e.path().filename())) {
          pass = false;
          detail = std::string("artifact differs: ") + sub;
        }
    for (const char* f : {"model.json", "loss_history.csv", "solve_status.csv"})
      if (slurp(a / f) != slurp(b / f)) {
        pass = false;
        detail = std::string("artifact differs: ") + f;
      }
    if (strip_timing(slurp(a / "metrics.csv")) !=
        strip_timing(slurp(b / "metrics.csv"))) {
      pass = false;
      detail = "metrics differ beyond timing columns";
    }
  }
  fs::remove_all(base);
  verdict(7, pass, detail);
}

}  // namespace

int main() {
  criterion_oracle_equivalence();
  criterion_gradient_fidelity();
  criterion_non_anticipativity();
  criterion_expansion_identity();
  criterion_pipeline_safety();
  criterion_desk_scale_quality();
  criterion_determinism();
  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
