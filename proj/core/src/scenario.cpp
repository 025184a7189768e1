#include "scenopt/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "scenopt/jsonio.hpp"
#include "scenopt/rng.hpp"

namespace scenopt {

int ScenarioTree::num_scenarios() const {
  int n = 1;
  for (int b : branching) n *= b;
  return n;
}

std::vector<int> ScenarioTree::children(int node_id) const {
  std::vector<int> out;
  for (const auto& n : nodes)
    if (n.parent == node_id) out.push_back(n.id);
  return out;
}

std::vector<int> ScenarioTree::leaves() const {
  std::vector<int> out;
  for (const auto& n : nodes)
    if (n.stage == horizon) out.push_back(n.id);
  return out;
}

double ScenarioTree::node_probability(int node_id) const {
  double p = 1.0;
  int cur = node_id;
  while (cur >= 0) {
    p *= nodes[cur].prob;
    cur = nodes[cur].parent;
  }
  return p;
}

int ScenarioTree::node_at(int scenario, int stage) const {
  int cur = leaves().at(scenario);
  while (nodes[cur].stage > stage) cur = nodes[cur].parent;
  return cur;
}

void ScenarioTree::validate() const {
  if (horizon < 1) throw std::invalid_argument("tree: horizon must be >= 1");
  if (static_cast<int>(branching.size()) != horizon - 1)
    throw std::invalid_argument("tree: branching length must be T-1");
  if (nodes.empty() || nodes[0].stage != 1 || nodes[0].parent != -1)
    throw std::invalid_argument("tree: missing root at stage 1");
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    const auto& n = nodes[i];
    if (n.id != i) throw std::invalid_argument("tree: ids must be dense BFS");
    if (n.prob <= 0.0 || n.prob > 1.0)
      throw std::invalid_argument("tree: conditional probability out of (0,1]");
    if (i == 0) continue;
    if (n.parent < 0 || n.parent >= i)
      throw std::invalid_argument("tree: bad parent link");
    if (n.stage != nodes[n.parent].stage + 1)
      throw std::invalid_argument("tree: stage must be parent stage + 1");
  }
  // children of every internal node sum to 1
  std::map<int, double> child_prob;
  for (const auto& n : nodes)
    if (n.parent >= 0) child_prob[n.parent] += n.prob;
  for (const auto& n : nodes) {
    if (n.stage == horizon) continue;
    auto it = child_prob.find(n.id);
    if (it == child_prob.end() || std::abs(it->second - 1.0) > 1e-9)
      throw std::invalid_argument("tree: children probabilities must sum to 1");
  }
  for (int id : leaves())
    if (nodes[id].stage != horizon)
      throw std::invalid_argument("tree: leaf off the final stage");
  int expected = 1, total = 1;
  for (int b : branching) {
    expected *= b;
    total += expected;
  }
  if (total != node_count() || expected != static_cast<int>(leaves().size()))
    throw std::invalid_argument("tree: not full/stage-uniform");
}

ScenarioTree build_tree(const std::vector<int>& branching, std::uint64_t seed,
                        int payload_dim,
                        const std::vector<double>& payload_levels) {
  if (branching.empty())
    throw std::invalid_argument("build_tree: branching must be non-empty");
  for (int b : branching)
    if (b < 1) throw std::invalid_argument("build_tree: zero branching factor");
  if (payload_dim < 1)
    throw std::invalid_argument("build_tree: payload dimension must be >= 1");

  ScenarioTree tree;
  tree.horizon = static_cast<int>(branching.size()) + 1;
  tree.branching = branching;
  tree.seed = seed;

  Rng rng(seed);
  TreeNode root;
  root.id = 0;
  root.stage = 1;
  root.parent = -1;
  root.prob = 1.0;
  root.payload.assign(payload_dim, 1.0);
  tree.nodes.push_back(root);

  std::vector<int> frontier = {0};
  for (int t = 2; t <= tree.horizon; ++t) {
    const int b = branching[t - 2];
    std::vector<int> next;
    for (int parent : frontier) {
      for (int k = 0; k < b; ++k) {
        TreeNode n;
        n.id = static_cast<int>(tree.nodes.size());
        n.stage = t;
        n.parent = parent;
        n.prob = 1.0 / b;
        n.payload.resize(payload_dim);
        for (int p = 0; p < payload_dim; ++p) {
          const long idx =
              rng.uniform_int(0, static_cast<long>(payload_levels.size()) - 1);
          n.payload[p] = payload_levels[idx];
        }
        next.push_back(n.id);
        tree.nodes.push_back(std::move(n));
      }
    }
    frontier = std::move(next);
  }
  tree.validate();
  return tree;
}

ScenarioTree chain_tree(int horizon, int payload_dim) {
  if (horizon < 1) throw std::invalid_argument("chain_tree: horizon >= 1");
  ScenarioTree tree;
  tree.horizon = horizon;
  tree.branching.assign(horizon - 1, 1);
  tree.seed = 0;
  for (int t = 1; t <= horizon; ++t) {
    TreeNode n;
    n.id = t - 1;
    n.stage = t;
    n.parent = t - 2;
    n.prob = 1.0;
    n.payload.assign(payload_dim, 1.0);
    tree.nodes.push_back(std::move(n));
  }
  return tree;
}

std::vector<ScenarioBundle> bundle_partition(const ScenarioTree& tree,
                                             int stage) {
  if (stage < 1 || stage > tree.horizon)
    throw std::invalid_argument("bundle_partition: stage out of range");
  const auto leaf_ids = tree.leaves();
  // group scenarios by their stage-t node
  std::map<int, std::vector<int>> groups;  // node id -> member scenarios
  for (int s = 0; s < static_cast<int>(leaf_ids.size()); ++s)
    groups[tree.node_at(s, stage)].push_back(s);

  std::vector<ScenarioBundle> out;
  for (auto& [node_id, members] : groups) {
    (void)node_id;
    ScenarioBundle b;
    b.stage = stage;
    b.members = std::move(members);
    b.representative = b.members.front();
    out.push_back(std::move(b));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.representative < b.representative;
  });
  return out;
}

std::vector<ScenarioPath> scenario_paths(const ScenarioTree& tree) {
  std::vector<ScenarioPath> out;
  const auto leaf_ids = tree.leaves();
  for (int s = 0; s < static_cast<int>(leaf_ids.size()); ++s) {
    ScenarioPath p;
    p.scenario = s;
    p.node_by_stage.resize(tree.horizon);
    int cur = leaf_ids[s];
    double prob = 1.0;
    for (int t = tree.horizon; t >= 1; --t) {
      p.node_by_stage[t - 1] = cur;
      prob *= tree.nodes[cur].prob;
      cur = tree.nodes[cur].parent;
    }
    p.probability = prob;
    out.push_back(std::move(p));
  }
  return out;
}

void save_tree(const ScenarioTree& tree, std::ostream& out) {
  out << "{\"record\":\"tree\",\"T\":" << tree.horizon << ",\"branching\":[";
  for (std::size_t i = 0; i < tree.branching.size(); ++i) {
    if (i) out << ",";
    out << tree.branching[i];
  }
  out << "],\"seed\":" << tree.seed << "}\n";
  for (const auto& n : tree.nodes) {
    out << "{\"id\":" << n.id << ",\"stage\":" << n.stage
        << ",\"parent\":" << n.parent << ",\"prob\":" << fmt17(n.prob)
        << ",\"payload\":" << fmt17_array(n.payload) << "}\n";
  }
}

ScenarioTree load_tree(std::istream& in) {
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("load_tree: empty stream");
  auto header = nlohmann::json::parse(line);
  ScenarioTree tree;
  tree.horizon = header.at("T").get<int>();
  tree.branching = header.at("branching").get<std::vector<int>>();
  tree.seed = header.at("seed").get<std::uint64_t>();
  int expected = 1, total = 1;
  for (int b : tree.branching) {
    expected *= b;
    total += expected;
  }
  for (int i = 0; i < total; ++i) {
    if (!std::getline(in, line))
      throw std::invalid_argument("load_tree: truncated node records");
    auto j = nlohmann::json::parse(line);
    TreeNode n;
    n.id = j.at("id").get<int>();
    n.stage = j.at("stage").get<int>();
    n.parent = j.at("parent").get<int>();
    n.prob = j.at("prob").get<double>();
    n.payload = j.at("payload").get<std::vector<double>>();
    tree.nodes.push_back(std::move(n));
  }
  tree.validate();
  return tree;
}

}  // namespace scenopt
