#include "scenopt/extensive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace scenopt {

int setup_index(InstanceKind kind, int items, int item, int node) {
  return kind == InstanceKind::Mclsp ? (node * items + item) * 3
                                     : node * items + item;
}

int production_index(int items, int item, int node) {
  return (node * items + item) * 3 + 1;
}

int inventory_index(int items, int item, int node) {
  return (node * items + item) * 3 + 2;
}

namespace {

// max remaining realized demand from a node onward, over scenarios through it
std::vector<std::vector<double>> remaining_demand(const StochasticInstance& s) {
  const auto& tree = s.tree;
  const int d = s.items();
  std::vector<std::vector<double>> rem(d,
                                       std::vector<double>(tree.node_count()));
  for (int id = tree.node_count() - 1; id >= 0; --id) {
    std::vector<double> best(d, 0.0);
    for (const auto& n : tree.nodes)
      if (n.parent == id)
        for (int j = 0; j < d; ++j) best[j] = std::max(best[j], rem[j][n.id]);
    for (int j = 0; j < d; ++j)
      rem[j][id] = s.realized_demand(j, id) + best[j];
  }
  return rem;
}

MipModel build_mclsp_form(const StochasticInstance& s) {
  const MclspInstance& inst = s.mclsp;
  const auto& tree = s.tree;
  const int d = inst.items;

  MipModel model;
  model.vars.resize(3 * d * tree.node_count());
  const auto rem = remaining_demand(s);

  for (const auto& node : tree.nodes) {
    const int t = node.stage - 1;
    const double p = tree.node_probability(node.id);
    for (int j = 0; j < d; ++j) {
      const std::string tag =
          "j" + std::to_string(j) + "_n" + std::to_string(node.id);
      auto& y = model.vars[setup_index(InstanceKind::Mclsp, d, j, node.id)];
      y.name = "y_" + tag;
      y.is_binary = true;
      y.ub = 1.0;
      y.obj = p * inst.setup_cost[j][t];
      auto& x = model.vars[production_index(d, j, node.id)];
      x.name = "x_" + tag;
      x.obj = p * inst.production_cost[j][t];
      auto& inv = model.vars[inventory_index(d, j, node.id)];
      inv.name = "I_" + tag;
      inv.obj = p * inst.holding_cost[j][t];
    }
  }

  for (const auto& node : tree.nodes) {
    const int t = node.stage - 1;
    double cap_rhs = inst.capacity[t];
    MipRow cap;
    cap.sense = RowSense::LessEqual;
    cap.rhs = cap_rhs;
    for (int j = 0; j < d; ++j) {
      const double dem = s.realized_demand(j, node.id);
      // inventory balance: I - I_parent - x = -demand
      MipRow bal;
      bal.sense = RowSense::Equal;
      bal.coeffs.push_back({inventory_index(d, j, node.id), 1.0});
      bal.coeffs.push_back({production_index(d, j, node.id), -1.0});
      if (node.parent >= 0) {
        bal.coeffs.push_back({inventory_index(d, j, node.parent), -1.0});
        bal.rhs = -dem;
      } else {
        bal.rhs = inst.initial_inventory[j] - dem;
      }
      model.rows.push_back(std::move(bal));
      // setup linking with tight big-M
      const double big_m = std::min(inst.capacity[t], rem[j][node.id]);
      MipRow link;
      link.sense = RowSense::LessEqual;
      link.coeffs.push_back({production_index(d, j, node.id), 1.0});
      link.coeffs.push_back(
          {setup_index(InstanceKind::Mclsp, d, j, node.id), -big_m});
      model.rows.push_back(std::move(link));
      cap.coeffs.push_back({production_index(d, j, node.id), 1.0});
    }
    model.rows.push_back(std::move(cap));
  }
  return model;
}

MipModel build_msmk_form(const StochasticInstance& s) {
  const MsmkInstance& inst = s.msmk;
  const auto& tree = s.tree;
  const int d = inst.items;

  MipModel model;
  model.vars.resize(d * tree.node_count());
  for (const auto& node : tree.nodes) {
    const int t = node.stage - 1;
    const double p = tree.node_probability(node.id);
    MipRow knap;
    knap.sense = RowSense::LessEqual;
    knap.rhs = inst.capacity[t];
    for (int j = 0; j < d; ++j) {
      const int vi = setup_index(InstanceKind::Msmk, d, j, node.id);
      auto& y = model.vars[vi];
      y.name = "y_j" + std::to_string(j) + "_n" + std::to_string(node.id);
      y.is_binary = true;
      y.ub = 1.0;
      y.obj = -p * s.realized_value(j, node.id);  // minimization form
      knap.coeffs.push_back({vi, inst.weight[j][t]});
    }
    model.rows.push_back(std::move(knap));
  }
  return model;
}

}  // namespace

MipModel build_extensive_form(const StochasticInstance& inst) {
  inst.validate();
  return inst.kind == InstanceKind::Mclsp ? build_mclsp_form(inst)
                                          : build_msmk_form(inst);
}

namespace {

StochasticInstance as_chain(const MclspInstance& inst) {
  StochasticInstance s;
  s.kind = InstanceKind::Mclsp;
  s.mclsp = inst;
  s.tree = chain_tree(inst.horizon, inst.items);
  return s;
}

StochasticInstance as_chain(const MsmkInstance& inst) {
  StochasticInstance s;
  s.kind = InstanceKind::Msmk;
  s.msmk = inst;
  s.tree = chain_tree(inst.horizon, inst.items);
  return s;
}

}  // namespace

MipModel build_extensive_form(const MclspInstance& inst) {
  return build_extensive_form(as_chain(inst));
}

MipModel build_extensive_form(const MsmkInstance& inst) {
  return build_extensive_form(as_chain(inst));
}

SolutionVector solution_from_assignment(const StochasticInstance& inst,
                                        const std::vector<double>& x,
                                        double objective) {
  const int d = inst.items();
  const int n_nodes = inst.tree.node_count();
  SolutionVector sol;
  sol.objective = objective;
  sol.setup.assign(d, std::vector<double>(n_nodes, 0.0));
  if (inst.kind == InstanceKind::Mclsp) {
    sol.production.assign(d, std::vector<double>(n_nodes, 0.0));
    sol.inventory.assign(d, std::vector<double>(n_nodes, 0.0));
  }
  for (int node = 0; node < n_nodes; ++node)
    for (int j = 0; j < d; ++j) {
      sol.setup[j][node] = x.at(setup_index(inst.kind, d, j, node));
      if (inst.kind == InstanceKind::Mclsp) {
        sol.production[j][node] = x.at(production_index(d, j, node));
        sol.inventory[j][node] = x.at(inventory_index(d, j, node));
      }
    }
  return sol;
}

std::vector<double> assignment_from_solution(const StochasticInstance& inst,
                                             const SolutionVector& sol) {
  const int d = inst.items();
  const int n_nodes = inst.tree.node_count();
  const int per = inst.kind == InstanceKind::Mclsp ? 3 : 1;
  std::vector<double> x(per * d * n_nodes, 0.0);
  for (int node = 0; node < n_nodes; ++node)
    for (int j = 0; j < d; ++j) {
      x[setup_index(inst.kind, d, j, node)] = sol.setup[j][node];
      if (inst.kind == InstanceKind::Mclsp) {
        x[production_index(d, j, node)] = sol.production[j][node];
        x[inventory_index(d, j, node)] = sol.inventory[j][node];
      }
    }
  return x;
}

}  // namespace scenopt
