#include "scenopt/mip.hpp"

#include <ostream>
#include <stdexcept>

#include "scenopt/jsonio.hpp"

namespace scenopt {

std::vector<int> MipModel::binary_indices() const {
  std::vector<int> out;
  for (int v = 0; v < num_vars(); ++v)
    if (vars[v].is_binary) out.push_back(v);
  return out;
}

void MipModel::validate() const {
  for (const auto& v : vars) {
    if (v.is_binary && (v.lb != 0.0 || v.ub != 1.0))
      throw std::invalid_argument("mip: binary variable must have bounds [0,1]");
    if (v.lb > v.ub) throw std::invalid_argument("mip: crossed bounds");
  }
  for (const auto& r : rows)
    for (const auto& [idx, coef] : r.coeffs) {
      (void)coef;
      if (idx < 0 || idx >= num_vars())
        throw std::invalid_argument("mip: row references invalid variable");
    }
}

void write_lp(const MipModel& model, std::ostream& out) {
  out << "Minimize\n obj:";
  for (int v = 0; v < model.num_vars(); ++v) {
    const double c = model.vars[v].obj;
    if (c == 0.0) continue;
    out << (c >= 0 ? " + " : " - ") << fmt17(c >= 0 ? c : -c) << " "
        << model.vars[v].name;
  }
  out << "\nSubject To\n";
  for (std::size_t i = 0; i < model.rows.size(); ++i) {
    const auto& r = model.rows[i];
    out << " c" << i << ":";
    for (const auto& [v, coef] : r.coeffs)
      out << (coef >= 0 ? " + " : " - ") << fmt17(coef >= 0 ? coef : -coef)
          << " " << model.vars[v].name;
    switch (r.sense) {
      case RowSense::LessEqual: out << " <= "; break;
      case RowSense::Equal: out << " = "; break;
      case RowSense::GreaterEqual: out << " >= "; break;
    }
    out << fmt17(r.rhs) << "\n";
  }
  out << "Bounds\n";
  for (const auto& v : model.vars) {
    if (v.ub == kInf)
      out << " " << fmt17(v.lb) << " <= " << v.name << "\n";
    else
      out << " " << fmt17(v.lb) << " <= " << v.name << " <= " << fmt17(v.ub)
          << "\n";
  }
  out << "Binaries\n";
  for (const auto& v : model.vars)
    if (v.is_binary) out << " " << v.name << "\n";
  out << "End\n";
}

}  // namespace scenopt
