#include "dslice/pdg.hpp"

#include <algorithm>
#include <sstream>

namespace dslice {

Pdg::Pdg(Cfg g, ReachingMap rm, std::vector<CdEdge> cd)
    : cfg_(std::move(g)),
      rm_(std::move(rm)),
      deps_(cfg_.size(), std::move(cd)),
      data_preds_(cfg_.size()) {
  for (NodeId use = 0; use < cfg_.size(); ++use) {
    const auto& uses = cfg_.node(use).uses;
    if (uses.empty()) continue;
    for (NodeId def : du_nodes(cfg_, rm_, use, uses)) {
      data_.push_back({def, use, cfg_.node(def).def});
      data_preds_[use].push_back(def);
    }
  }
  std::sort(data_.begin(), data_.end());
}

Pdg build_pdg(const Cfg& g, const ReachingMap& rm,
              const std::vector<CdEdge>& cd) {
  return Pdg(g, rm, cd);
}

Pdg build_pdg(const Cfg& g) {
  ReachingMap rm = reaching_definitions(g);
  PostDomRelation pd = post_dominators(g);
  return Pdg(g, std::move(rm), control_dependence(g, pd));
}

std::string to_dot(const Pdg& pdg, const PdgDotOptions& opts) {
  const Cfg& g = pdg.cfg();
  std::ostringstream os;
  os << "digraph pdg {\n";
  for (NodeId n = 2; n < g.size(); ++n) {
    os << "  \"" << g.label(n) << "\" [label=\"" << g.label(n) << "\"];\n";
  }
  for (const auto& e : pdg.data_edges()) {
    os << "  \"" << g.label(e.def) << "\" -> \"" << g.label(e.use)
       << "\" [style=solid, color=black, label=\"" << g.var_name(e.var)
       << "\"];\n";
  }
  for (const auto& e : pdg.ctrl_edges()) {
    bool strong = e.strength == CdStrength::kStrong;
    if (!strong && !opts.weak) continue;
    os << "  \"" << g.label(e.cond) << "\" -> \"" << g.label(e.dependent)
       << "\" [style=" << (strong ? "solid" : "dotted")
       << ", color=blue, label=\"" << (e.branch ? "true" : "false")
       << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dslice
