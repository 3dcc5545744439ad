#pragma once

#include <compare>
#include <string>
#include <vector>

#include "dslice/cfg.hpp"
#include "dslice/control_deps.hpp"
#include "dslice/dataflow.hpp"

namespace dslice {

/// `use` reads `var`, whose value may come from the assignment at `def`.
struct DataEdge {
  NodeId def;
  NodeId use;
  VarId var;

  auto operator<=>(const DataEdge&) const = default;
};

/// Program dependence graph. Owns the CFG and the analyses it was built
/// from; immutable once built, so one instance can serve many criteria and
/// threads.
class Pdg {
 public:
  Pdg(Cfg g, ReachingMap rm, std::vector<CdEdge> cd);

  const Cfg& cfg() const { return cfg_; }
  const ReachingMap& reaching() const { return rm_; }
  const ControlDeps& deps() const { return deps_; }
  std::size_t size() const { return cfg_.size(); }

  /// Sorted by (def, use, var).
  const std::vector<DataEdge>& data_edges() const { return data_; }
  /// Definitions feeding `use`, i.e. DU(LV(use)), sorted and unique.
  const std::vector<NodeId>& data_preds(NodeId use) const {
    return data_preds_[use];
  }
  const std::vector<CdEdge>& ctrl_edges() const { return deps_.edges(); }

  /// DU(⟨n, vars⟩), computed on demand (criteria are not baked in).
  std::vector<NodeId> du(NodeId n, const std::vector<VarId>& vars) const {
    return du_nodes(cfg_, rm_, n, vars);
  }

 private:
  Cfg cfg_;
  ReachingMap rm_;
  ControlDeps deps_;
  std::vector<DataEdge> data_;
  std::vector<std::vector<NodeId>> data_preds_;
};

Pdg build_pdg(const Cfg& g, const ReachingMap& rm,
              const std::vector<CdEdge>& cd);
/// Runs reaching definitions, post-dominance and control dependence on `g`.
Pdg build_pdg(const Cfg& g);

struct PdgDotOptions {
  bool weak = true;
};

/// DOT rendering: data edges solid (labelled with the variable), strong
/// control dependences in the default style labelled with the branch, weak
/// ones dotted.
std::string to_dot(const Pdg& pdg, const PdgDotOptions& opts = {});

}  // namespace dslice
