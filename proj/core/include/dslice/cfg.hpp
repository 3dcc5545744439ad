#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dslice/ast.hpp"

namespace dslice {

using NodeId = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr NodeId kEntryNode = 0;
inline constexpr NodeId kExitNode = 1;
inline constexpr NodeId kNoNode = UINT32_MAX;
inline constexpr VarId kNoVar = UINT32_MAX;

enum class NodeKind { kEntry, kExit, kAssign, kCond, kSkip, kBreak, kContinue };

/// kSpecial marks ENTRY→EXIT and EXIT→EXIT. They take part in
/// post-dominance but never in execution or dataflow.
enum class EdgeKind { kUncond, kTrue, kFalse, kSpecial };

struct CfgEdge {
  NodeId src;
  NodeId dst;
  EdgeKind kind;
};

struct CfgNode {
  Label label;
  NodeKind kind = NodeKind::kSkip;
  VarId def = kNoVar;          // assigned variable (assignments only)
  std::vector<VarId> uses;     // sorted, unique
  ExprPtr expr;                // null for abstract statements
  bool is_loop = false;
  bool is_abstract = false;
  NodeId parent = kNoNode;     // nearest enclosing If/While
  NodeId jump_target = kNoNode;  // loop targeted by a break/continue
  SourcePos pos;
};

/// Control flow graph of a single-procedure program. Node 0 is ENTRY and node
/// 1 is EXIT; statements follow in pre-order. Condition nodes list their true
/// edge before their false edge.
class Cfg {
 public:
  std::size_t size() const { return nodes_.size(); }
  const CfgNode& node(NodeId n) const { return nodes_[n]; }
  const std::vector<CfgNode>& nodes() const { return nodes_; }
  const std::vector<CfgEdge>& edges() const { return edges_; }
  const CfgEdge& edge(std::uint32_t e) const { return edges_[e]; }

  const std::vector<std::uint32_t>& out_edges(NodeId n) const { return out_[n]; }
  const std::vector<std::uint32_t>& in_edges(NodeId n) const { return in_[n]; }

  bool is_condition(NodeId n) const {
    return nodes_[n].kind == NodeKind::kCond;
  }
  /// Successor along the true/false edge of a condition, or the single
  /// successor of any other statement node.
  NodeId successor(NodeId n, EdgeKind kind = EdgeKind::kUncond) const;

  std::optional<NodeId> find(Label l) const;
  /// Throws BadLocation for unknown labels.
  NodeId at(Label l) const;
  Label label(NodeId n) const { return nodes_[n].label; }

  std::size_t num_vars() const { return var_names_.size(); }
  const std::vector<std::string>& var_names() const { return var_names_; }
  const std::string& var_name(VarId v) const { return var_names_[v]; }
  std::optional<VarId> var_id(const std::string& name) const;

  /// Break/continue nodes whose target is `loop`.
  std::vector<NodeId> jumps_of(NodeId loop) const;

  /// Human-readable statement text used in DOT output and diagnostics.
  std::string describe(NodeId n) const;

 private:
  friend Cfg build_cfg(const Program& p);

  std::vector<CfgNode> nodes_;
  std::vector<CfgEdge> edges_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
  std::unordered_map<Label, NodeId> by_label_;
  std::vector<std::string> var_names_;
  std::unordered_map<std::string, VarId> var_ids_;
};

/// Lowers the entry procedure of `p`, which must contain no calls (see
/// inline_calls). While loops become a single condition node whose false edge
/// leaves the loop; break jumps to the loop's successor and continue to its
/// condition.
Cfg build_cfg(const Program& p);

/// DOT rendering. Node ids are labels; branch edges carry label="true" or
/// label="false"; special edges are dashed.
std::string to_dot(const Cfg& g);

}  // namespace dslice
