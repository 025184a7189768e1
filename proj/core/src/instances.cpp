#include "scenopt/instances.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "scenopt/jsonio.hpp"
#include "scenopt/rng.hpp"

namespace scenopt {

namespace {

constexpr double kFeasTol = 1e-6;

void check_grid(const std::vector<std::vector<double>>& a, int items, int T,
                const char* what) {
  if (static_cast<int>(a.size()) != items)
    throw std::invalid_argument(std::string(what) + ": item dimension mismatch");
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != T)
      throw std::invalid_argument(std::string(what) + ": stage dimension mismatch");
}

std::vector<std::vector<double>> pick_rows(
    const std::vector<std::vector<double>>& a, const std::vector<int>& subset) {
  std::vector<std::vector<double>> out;
  out.reserve(subset.size());
  for (int j : subset) out.push_back(a.at(j));
  return out;
}

}  // namespace

void MclspInstance::validate() const {
  if (items < 1 || horizon < 1)
    throw std::invalid_argument("mclsp: empty dimensions");
  check_grid(demand, items, horizon, "mclsp demand");
  check_grid(setup_cost, items, horizon, "mclsp setup_cost");
  check_grid(production_cost, items, horizon, "mclsp production_cost");
  check_grid(holding_cost, items, horizon, "mclsp holding_cost");
  if (static_cast<int>(capacity.size()) != horizon)
    throw std::invalid_argument("mclsp: capacity dimension mismatch");
  if (static_cast<int>(initial_inventory.size()) != items)
    throw std::invalid_argument("mclsp: initial inventory dimension mismatch");
}

void MsmkInstance::validate() const {
  if (items < 1 || horizon < 1)
    throw std::invalid_argument("msmk: empty dimensions");
  check_grid(value, items, horizon, "msmk value");
  check_grid(weight, items, horizon, "msmk weight");
  if (static_cast<int>(capacity.size()) != horizon)
    throw std::invalid_argument("msmk: capacity dimension mismatch");
}

double StochasticInstance::realized_demand(int item, int node) const {
  const int t = tree.nodes[node].stage;
  return mclsp.demand[item][t - 1] * tree.nodes[node].payload[item];
}

double StochasticInstance::realized_value(int item, int node) const {
  const int t = tree.nodes[node].stage;
  return msmk.value[item][t - 1] * tree.nodes[node].payload[item];
}

void StochasticInstance::validate() const {
  tree.validate();
  const int d = items();
  if (kind == InstanceKind::Mclsp) {
    mclsp.validate();
    if (tree.horizon != mclsp.horizon)
      throw std::invalid_argument("stochastic: tree horizon mismatch");
  } else {
    msmk.validate();
    if (tree.horizon != msmk.horizon)
      throw std::invalid_argument("stochastic: tree horizon mismatch");
  }
  for (const auto& n : tree.nodes)
    if (static_cast<int>(n.payload.size()) != d)
      throw std::invalid_argument("stochastic: payload dim must equal item count");
}

MclspInstance generate_mclsp(std::uint64_t seed, int items, int horizon,
                             const GeneratorRanges& r) {
  if (items < 1 || horizon < 2)
    throw std::invalid_argument("generate_mclsp: need d >= 1, T >= 2");
  Rng rng(Rng::mix(seed, 0x6d636c7370ULL));
  MclspInstance inst;
  inst.items = items;
  inst.horizon = horizon;
  auto grid = [&](double lo, double hi) {
    std::vector<std::vector<double>> g(items, std::vector<double>(horizon));
    for (auto& row : g)
      for (auto& v : row) v = rng.uniform(lo, hi);
    return g;
  };
  inst.demand.assign(items, std::vector<double>(horizon));
  for (auto& row : inst.demand)
    for (auto& v : row)
      v = static_cast<double>(rng.uniform_int(r.demand_lo, r.demand_hi));
  inst.setup_cost = grid(r.setup_lo, r.setup_hi);
  inst.production_cost = grid(r.production_lo, r.production_hi);
  inst.holding_cost = grid(r.holding_lo, r.holding_hi);
  inst.initial_inventory.assign(items, 0.0);

  inst.capacity.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    double stage_demand = 0;
    for (int j = 0; j < items; ++j) stage_demand += inst.demand[j][t];
    inst.capacity[t] = r.capacity_ratio * stage_demand;
  }
  // feasibility repair: cumulative capacity must cover cumulative demand
  double cum_cap = 0, cum_dem = 0;
  for (int t = 0; t < horizon; ++t) {
    for (int j = 0; j < items; ++j) cum_dem += inst.demand[j][t];
    cum_cap += inst.capacity[t];
    if (cum_cap < cum_dem) {
      inst.capacity[t] += cum_dem - cum_cap;
      cum_cap = cum_dem;
    }
  }
  inst.validate();
  return inst;
}

MsmkInstance generate_msmk(std::uint64_t seed, int items, int horizon,
                           const GeneratorRanges& r) {
  if (items < 1 || horizon < 1)
    throw std::invalid_argument("generate_msmk: need d >= 1, T >= 1");
  if (r.tightness <= 0.0 || r.tightness >= 1.0)
    throw std::invalid_argument("generate_msmk: tightness must be in (0,1)");
  Rng rng(Rng::mix(seed, 0x6d736d6bULL));
  MsmkInstance inst;
  inst.items = items;
  inst.horizon = horizon;
  inst.value.assign(items, std::vector<double>(horizon));
  inst.weight.assign(items, std::vector<double>(horizon));
  for (int j = 0; j < items; ++j)
    for (int t = 0; t < horizon; ++t) {
      inst.value[j][t] = rng.uniform(r.value_lo, r.value_hi);
      inst.weight[j][t] = rng.uniform(r.weight_lo, r.weight_hi);
    }
  inst.capacity.resize(horizon);
  for (int t = 0; t < horizon; ++t) {
    double wsum = 0;
    for (int j = 0; j < items; ++j) wsum += inst.weight[j][t];
    inst.capacity[t] = r.tightness * wsum;
  }
  inst.validate();
  return inst;
}

namespace {

StochasticInstance attach_tree(StochasticInstance inst,
                               const std::vector<int>& branching,
                               std::uint64_t seed) {
  inst.tree = build_tree(branching, Rng::mix(seed, 0x74726565ULL), inst.items());
  inst.validate();
  return inst;
}

}  // namespace

StochasticInstance make_stochastic(const MclspInstance& base,
                                   const std::vector<int>& branching,
                                   std::uint64_t seed) {
  if (static_cast<int>(branching.size()) != base.horizon - 1)
    throw std::invalid_argument("make_stochastic: branching length must be T-1");
  StochasticInstance s;
  s.kind = InstanceKind::Mclsp;
  s.mclsp = base;
  return attach_tree(std::move(s), branching, seed);
}

StochasticInstance make_stochastic(const MsmkInstance& base,
                                   const std::vector<int>& branching,
                                   std::uint64_t seed) {
  if (static_cast<int>(branching.size()) != base.horizon - 1)
    throw std::invalid_argument("make_stochastic: branching length must be T-1");
  StochasticInstance s;
  s.kind = InstanceKind::Msmk;
  s.msmk = base;
  return attach_tree(std::move(s), branching, seed);
}

namespace {

void check_subset(const std::vector<int>& subset, int items) {
  if (subset.empty())
    throw std::invalid_argument("restrict_to_subset: empty subset");
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] < 0 || subset[i] >= items)
      throw std::invalid_argument("restrict_to_subset: item out of range");
    if (i > 0 && subset[i] <= subset[i - 1])
      throw std::invalid_argument("restrict_to_subset: subset must be ascending");
  }
}

// subset share of a stage total; |S|/d when the stage total is zero
double share(double subset_sum, double total_sum, std::size_t s, int d) {
  if (total_sum == 0.0) return static_cast<double>(s) / d;
  return subset_sum / total_sum;
}

}  // namespace

MclspInstance restrict_to_subset(const MclspInstance& inst,
                                 const std::vector<int>& subset) {
  check_subset(subset, inst.items);
  MclspInstance out;
  out.items = static_cast<int>(subset.size());
  out.horizon = inst.horizon;
  out.demand = pick_rows(inst.demand, subset);
  out.setup_cost = pick_rows(inst.setup_cost, subset);
  out.production_cost = pick_rows(inst.production_cost, subset);
  out.holding_cost = pick_rows(inst.holding_cost, subset);
  out.initial_inventory.reserve(subset.size());
  for (int j : subset) out.initial_inventory.push_back(inst.initial_inventory[j]);
  out.capacity.resize(inst.horizon);
  for (int t = 0; t < inst.horizon; ++t) {
    double total = 0, sub = 0;
    for (int j = 0; j < inst.items; ++j) total += inst.demand[j][t];
    for (int j : subset) sub += inst.demand[j][t];
    out.capacity[t] =
        inst.capacity[t] * share(sub, total, subset.size(), inst.items);
  }
  return out;
}

MsmkInstance restrict_to_subset(const MsmkInstance& inst,
                                const std::vector<int>& subset) {
  check_subset(subset, inst.items);
  MsmkInstance out;
  out.items = static_cast<int>(subset.size());
  out.horizon = inst.horizon;
  out.value = pick_rows(inst.value, subset);
  out.weight = pick_rows(inst.weight, subset);
  out.capacity.resize(inst.horizon);
  for (int t = 0; t < inst.horizon; ++t) {
    double total = 0, sub = 0;
    for (int j = 0; j < inst.items; ++j) total += inst.weight[j][t];
    for (int j : subset) sub += inst.weight[j][t];
    out.capacity[t] =
        inst.capacity[t] * share(sub, total, subset.size(), inst.items);
  }
  return out;
}

StochasticInstance restrict_to_subset(const StochasticInstance& inst,
                                      const std::vector<int>& subset) {
  StochasticInstance out;
  out.kind = inst.kind;
  if (inst.kind == InstanceKind::Mclsp)
    out.mclsp = restrict_to_subset(inst.mclsp, subset);
  else
    out.msmk = restrict_to_subset(inst.msmk, subset);
  out.tree = inst.tree;
  for (auto& n : out.tree.nodes) {
    std::vector<double> payload;
    payload.reserve(subset.size());
    for (int j : subset) payload.push_back(n.payload[j]);
    n.payload = std::move(payload);
  }
  return out;
}

namespace {

struct ResidualTracker {
  double worst = 0.0;
  void violation(double v) { worst = std::max(worst, v); }
  void equality(double lhs, double rhs) { violation(std::abs(lhs - rhs)); }
  void at_most(double lhs, double rhs) { violation(lhs - rhs); }
  void binary(double v) {
    violation(std::min(std::abs(v), std::abs(v - 1.0)));
    violation(-v);
    violation(v - 1.0);
  }
};

}  // namespace

// Shared node-indexed evaluation; deterministic instances use the chain tree.
static Evaluation evaluate_mclsp_tree(const MclspInstance& inst,
                                      const ScenarioTree& tree,
                                      const StochasticInstance* stoch,
                                      const SolutionVector& sol) {
  const int d = inst.items;
  const int n_nodes = tree.node_count();
  if (static_cast<int>(sol.setup.size()) != d ||
      static_cast<int>(sol.production.size()) != d ||
      static_cast<int>(sol.inventory.size()) != d)
    throw std::invalid_argument("evaluate: item dimension mismatch");
  for (int j = 0; j < d; ++j)
    if (static_cast<int>(sol.setup[j].size()) != n_nodes ||
        static_cast<int>(sol.production[j].size()) != n_nodes ||
        static_cast<int>(sol.inventory[j].size()) != n_nodes)
      throw std::invalid_argument("evaluate: node dimension mismatch");

  ResidualTracker res;
  double objective = 0.0;
  for (const auto& node : tree.nodes) {
    const int t = node.stage - 1;
    const double pnode = tree.node_probability(node.id);
    double stage_production = 0.0;
    for (int j = 0; j < d; ++j) {
      const double y = sol.setup[j][node.id];
      const double x = sol.production[j][node.id];
      const double inv = sol.inventory[j][node.id];
      const double dem = stoch ? stoch->realized_demand(j, node.id)
                               : inst.demand[j][t];
      const double prev_inv = node.parent < 0 ? inst.initial_inventory[j]
                                              : sol.inventory[j][node.parent];
      res.binary(y);
      res.violation(-x);
      res.violation(-inv);
      res.equality(inv, prev_inv + x - dem);
      // production requires a setup
      if (y <= 0.5) res.violation(x);
      objective += pnode * (inst.setup_cost[j][t] * y +
                            inst.production_cost[j][t] * x +
                            inst.holding_cost[j][t] * inv);
      stage_production += x;
    }
    res.at_most(stage_production, inst.capacity[t]);
  }
  Evaluation ev;
  ev.objective = objective;
  ev.max_residual = res.worst;
  ev.feasible = res.worst <= kFeasTol;
  return ev;
}

static Evaluation evaluate_msmk_tree(const MsmkInstance& inst,
                                     const ScenarioTree& tree,
                                     const StochasticInstance* stoch,
                                     const SolutionVector& sol) {
  const int d = inst.items;
  const int n_nodes = tree.node_count();
  if (static_cast<int>(sol.setup.size()) != d)
    throw std::invalid_argument("evaluate: item dimension mismatch");
  for (int j = 0; j < d; ++j)
    if (static_cast<int>(sol.setup[j].size()) != n_nodes)
      throw std::invalid_argument("evaluate: node dimension mismatch");

  ResidualTracker res;
  double objective = 0.0;
  for (const auto& node : tree.nodes) {
    const int t = node.stage - 1;
    const double pnode = tree.node_probability(node.id);
    double load = 0.0;
    for (int j = 0; j < d; ++j) {
      const double y = sol.setup[j][node.id];
      res.binary(y);
      load += inst.weight[j][t] * y;
      const double val =
          stoch ? stoch->realized_value(j, node.id) : inst.value[j][t];
      objective -= pnode * val * y;  // minimization form
    }
    res.at_most(load, inst.capacity[t]);
  }
  Evaluation ev;
  ev.objective = objective;
  ev.max_residual = res.worst;
  ev.feasible = res.worst <= kFeasTol;
  return ev;
}

Evaluation evaluate_solution(const MclspInstance& inst,
                             const SolutionVector& sol) {
  return evaluate_mclsp_tree(inst, chain_tree(inst.horizon, inst.items), nullptr,
                             sol);
}

Evaluation evaluate_solution(const MsmkInstance& inst,
                             const SolutionVector& sol) {
  return evaluate_msmk_tree(inst, chain_tree(inst.horizon, inst.items), nullptr,
                            sol);
}

Evaluation evaluate_solution(const StochasticInstance& inst,
                             const SolutionVector& sol) {
  if (inst.kind == InstanceKind::Mclsp)
    return evaluate_mclsp_tree(inst.mclsp, inst.tree, &inst, sol);
  return evaluate_msmk_tree(inst.msmk, inst.tree, &inst, sol);
}

namespace {

void write_grid(std::ostream& out, const char* name,
                const std::vector<std::vector<double>>& g) {
  out << "{\"record\":\"" << name << "\",\"rows\":[";
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j) out << ",";
    out << fmt17_array(g[j]);
  }
  out << "]}\n";
}

std::vector<std::vector<double>> read_grid(std::istream& in, const char* name) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("load_instance: truncated stream");
  auto j = nlohmann::json::parse(line);
  if (j.at("record").get<std::string>() != name)
    throw std::invalid_argument("load_instance: unexpected record order");
  return j.at("rows").get<std::vector<std::vector<double>>>();
}

}  // namespace

void save_mclsp(const MclspInstance& inst, std::ostream& out) {
  out << "{\"record\":\"instance\",\"kind\":\"mclsp\",\"items\":" << inst.items
      << ",\"horizon\":" << inst.horizon
      << ",\"capacity\":" << fmt17_array(inst.capacity)
      << ",\"initial_inventory\":" << fmt17_array(inst.initial_inventory)
      << "}\n";
  write_grid(out, "demand", inst.demand);
  write_grid(out, "setup_cost", inst.setup_cost);
  write_grid(out, "production_cost", inst.production_cost);
  write_grid(out, "holding_cost", inst.holding_cost);
}

void save_msmk(const MsmkInstance& inst, std::ostream& out) {
  out << "{\"record\":\"instance\",\"kind\":\"msmk\",\"items\":" << inst.items
      << ",\"horizon\":" << inst.horizon
      << ",\"capacity\":" << fmt17_array(inst.capacity) << "}\n";
  write_grid(out, "value", inst.value);
  write_grid(out, "weight", inst.weight);
}

void save_stochastic(const StochasticInstance& inst, std::ostream& out) {
  out << "{\"record\":\"instance\",\"kind\":\"stoch\",\"base\":\""
      << (inst.kind == InstanceKind::Mclsp ? "mclsp" : "msmk") << "\"}\n";
  if (inst.kind == InstanceKind::Mclsp)
    save_mclsp(inst.mclsp, out);
  else
    save_msmk(inst.msmk, out);
  save_tree(inst.tree, out);
}

StochasticInstance load_instance(std::istream& in, bool* is_stochastic) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("load_instance: empty stream");
  auto header = nlohmann::json::parse(line);
  std::string kind = header.at("kind").get<std::string>();
  bool stoch = kind == "stoch";
  if (stoch) {
    kind = header.at("base").get<std::string>();
    if (!std::getline(in, line))
      throw std::invalid_argument("load_instance: truncated stream");
    header = nlohmann::json::parse(line);
  }
  StochasticInstance out;
  if (kind == "mclsp") {
    out.kind = InstanceKind::Mclsp;
    MclspInstance& m = out.mclsp;
    m.items = header.at("items").get<int>();
    m.horizon = header.at("horizon").get<int>();
    m.capacity = header.at("capacity").get<std::vector<double>>();
    m.initial_inventory =
        header.at("initial_inventory").get<std::vector<double>>();
    m.demand = read_grid(in, "demand");
    m.setup_cost = read_grid(in, "setup_cost");
    m.production_cost = read_grid(in, "production_cost");
    m.holding_cost = read_grid(in, "holding_cost");
    m.validate();
  } else if (kind == "msmk") {
    out.kind = InstanceKind::Msmk;
    MsmkInstance& m = out.msmk;
    m.items = header.at("items").get<int>();
    m.horizon = header.at("horizon").get<int>();
    m.capacity = header.at("capacity").get<std::vector<double>>();
    m.value = read_grid(in, "value");
    m.weight = read_grid(in, "weight");
    m.validate();
  } else {
    throw std::invalid_argument("load_instance: unknown kind tag");
  }
  if (stoch) {
    out.tree = load_tree(in);
    out.validate();
  } else {
    out.tree = chain_tree(out.kind == InstanceKind::Mclsp ? out.mclsp.horizon
                                                          : out.msmk.horizon,
                          out.items());
  }
  if (is_stochastic) *is_stochastic = stoch;
  return out;
}

void export_tables_csv(const MclspInstance& inst, std::ostream& out) {
  out << "row";
  for (int t = 1; t <= inst.horizon; ++t) out << ",t" << t;
  out << "\n";
  for (int j = 0; j < inst.items; ++j) {
    out << "demand_item" << j;
    for (double v : inst.demand[j]) out << "," << fmt17(v);
    out << "\n";
  }
  out << "capacity";
  for (double v : inst.capacity) out << "," << fmt17(v);
  out << "\n";
}

void export_tables_csv(const MsmkInstance& inst, std::ostream& out) {
  out << "row";
  for (int t = 1; t <= inst.horizon; ++t) out << ",t" << t;
  out << "\n";
  for (int j = 0; j < inst.items; ++j) {
    out << "weight_item" << j;
    for (double v : inst.weight[j]) out << "," << fmt17(v);
    out << "\n";
  }
  out << "capacity";
  for (double v : inst.capacity) out << "," << fmt17(v);
  out << "\n";
}

}  // namespace scenopt
