#include "dslice/cfg.hpp"

#include <algorithm>
#include <sstream>

#include "dslice/error.hpp"

namespace dslice {

NodeId Cfg::successor(NodeId n, EdgeKind kind) const {
  for (auto e : out_[n]) {
    const CfgEdge& edge = edges_[e];
    if (edge.kind == EdgeKind::kSpecial) continue;
    if (kind == EdgeKind::kUncond || edge.kind == kind) return edge.dst;
  }
  return kNoNode;
}

std::optional<NodeId> Cfg::find(Label l) const {
  auto it = by_label_.find(l);
  if (it == by_label_.end()) return std::nullopt;
  return it->second;
}

NodeId Cfg::at(Label l) const {
  auto n = find(l);
  if (!n) throw BadLocation("no statement labeled " + l.str());
  return *n;
}

std::optional<VarId> Cfg::var_id(const std::string& name) const {
  auto it = var_ids_.find(name);
  if (it == var_ids_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Cfg::jumps_of(NodeId loop) const {
  std::vector<NodeId> out;
  for (NodeId n = 0; n < nodes_.size(); ++n) {
    if (nodes_[n].jump_target == loop) out.push_back(n);
  }
  return out;
}

std::string Cfg::describe(NodeId n) const {
  const CfgNode& node = nodes_[n];
  auto text = [&](const ExprPtr& e) { return e ? to_string(*e) : "*"; };
  switch (node.kind) {
    case NodeKind::kEntry: return "ENTRY";
    case NodeKind::kExit: return "EXIT";
    case NodeKind::kAssign:
      return var_names_[node.def] + " = " + text(node.expr);
    case NodeKind::kCond:
      return std::string(node.is_loop ? "while (" : "if (") + text(node.expr) +
             ")";
    case NodeKind::kSkip: return "skip";
    case NodeKind::kBreak: return "break";
    case NodeKind::kContinue: return "continue";
  }
  return "?";
}

namespace {

class Builder {
 public:
  explicit Builder(Cfg& g, std::vector<CfgNode>& nodes,
                   std::vector<CfgEdge>& edges,
                   const std::unordered_map<std::string, VarId>& vars)
      : g_(g), nodes_(nodes), edges_(edges), vars_(vars) {}

  // First pass: one node per statement in pre-order.
  void number(const Block& block, NodeId parent, NodeId loop) {
    for (const auto& s : block) {
      NodeId id = static_cast<NodeId>(nodes_.size());
      CfgNode node;
      node.label = s.label;
      node.pos = s.pos;
      node.parent = parent;
      std::set<std::string> refs = statement_refs(s);
      for (const auto& r : refs) node.uses.push_back(vars_.at(r));
      std::sort(node.uses.begin(), node.uses.end());
      std::visit(
          [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Assign>) {
              node.kind = NodeKind::kAssign;
              node.def = vars_.at(k.target);
              node.expr = k.value;
              node.is_abstract = k.is_abstract();
            } else if constexpr (std::is_same_v<T, If>) {
              node.kind = NodeKind::kCond;
              node.expr = k.cond;
              node.is_abstract = k.is_abstract();
            } else if constexpr (std::is_same_v<T, While>) {
              node.kind = NodeKind::kCond;
              node.expr = k.cond;
              node.is_abstract = k.is_abstract();
              node.is_loop = true;
            } else if constexpr (std::is_same_v<T, Break>) {
              node.kind = NodeKind::kBreak;
              node.jump_target = loop;
            } else if constexpr (std::is_same_v<T, Continue>) {
              node.kind = NodeKind::kContinue;
              node.jump_target = loop;
            } else if constexpr (std::is_same_v<T, Skip>) {
              node.kind = NodeKind::kSkip;
            } else {
              throw Error("call to '" + k.callee +
                          "' must be inlined before building the CFG");
            }
          },
          s.kind);
      nodes_.push_back(std::move(node));
      if (const auto* i = std::get_if<If>(&s.kind)) {
        number(i->then_block, id, loop);
        number(i->else_block, id, loop);
      } else if (const auto* w = std::get_if<While>(&s.kind)) {
        number(w->body, id, id);
      }
    }
  }

  // Second pass: wires `block` so that it falls through to `next`; returns
  // the block's first node (or `next` when empty). `loop_exit` is the node
  // following the innermost loop.
  NodeId wire(const Block& block, NodeId next, NodeId loop_exit) {
    std::vector<NodeId> ids;
    ids.reserve(block.size());
    for (const auto& s : block) ids.push_back(g_.at(s.label));
    NodeId cur = next;
    for (std::size_t i = block.size(); i-- > 0;) {
      const Statement& s = block[i];
      NodeId id = ids[i];
      if (const auto* c = std::get_if<If>(&s.kind)) {
        add(id, wire(c->then_block, cur, loop_exit), EdgeKind::kTrue);
        add(id, wire(c->else_block, cur, loop_exit), EdgeKind::kFalse);
      } else if (const auto* w = std::get_if<While>(&s.kind)) {
        add(id, wire(w->body, id, cur), EdgeKind::kTrue);
        add(id, cur, EdgeKind::kFalse);
      } else if (s.is<Break>()) {
        add(id, loop_exit, EdgeKind::kUncond);
      } else if (s.is<Continue>()) {
        add(id, nodes_[id].jump_target, EdgeKind::kUncond);
      } else {
        add(id, cur, EdgeKind::kUncond);
      }
      cur = id;
    }
    return cur;
  }

  void add(NodeId src, NodeId dst, EdgeKind kind) {
    edges_.push_back(CfgEdge{src, dst, kind});
  }

 private:
  Cfg& g_;
  std::vector<CfgNode>& nodes_;
  std::vector<CfgEdge>& edges_;
  const std::unordered_map<std::string, VarId>& vars_;
};

}  // namespace

Cfg build_cfg(const Program& p) {
  Cfg g;
  const Procedure& proc = p.entry_procedure();

  std::set<std::string> names;
  names.insert(proc.params.begin(), proc.params.end());
  walk(proc.body, [&](const Statement& s, const Statement*) {
    auto refs = statement_refs(s);
    names.insert(refs.begin(), refs.end());
    if (const auto* a = std::get_if<Assign>(&s.kind)) names.insert(a->target);
  });
  for (const auto& n : names) {
    g.var_ids_[n] = static_cast<VarId>(g.var_names_.size());
    g.var_names_.push_back(n);
  }

  CfgNode entry;
  entry.label = kEntryLabel;
  entry.kind = NodeKind::kEntry;
  CfgNode exit;
  exit.label = kExitLabel;
  exit.kind = NodeKind::kExit;
  g.nodes_.push_back(entry);
  g.nodes_.push_back(exit);

  Builder b(g, g.nodes_, g.edges_, g.var_ids_);
  b.number(proc.body, kNoNode, kNoNode);
  for (NodeId n = 0; n < g.nodes_.size(); ++n) {
    g.by_label_[g.nodes_[n].label] = n;
  }
  NodeId first = b.wire(proc.body, kExitNode, kNoNode);
  b.add(kEntryNode, first, EdgeKind::kUncond);
  b.add(kEntryNode, kExitNode, EdgeKind::kSpecial);
  b.add(kExitNode, kExitNode, EdgeKind::kSpecial);

  g.out_.assign(g.nodes_.size(), {});
  g.in_.assign(g.nodes_.size(), {});
  // Keep the true edge ahead of the false edge regardless of wiring order.
  std::stable_sort(g.edges_.begin(), g.edges_.end(),
                   [](const CfgEdge& a, const CfgEdge& b) {
                     if (a.src != b.src) return a.src < b.src;
                     return static_cast<int>(a.kind) < static_cast<int>(b.kind);
                   });
  for (std::uint32_t e = 0; e < g.edges_.size(); ++e) {
    g.out_[g.edges_[e].src].push_back(e);
    g.in_[g.edges_[e].dst].push_back(e);
  }
  return g;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const Cfg& g) {
  std::ostringstream os;
  os << "digraph cfg {\n";
  for (NodeId n = 0; n < g.size(); ++n) {
    os << "  \"" << g.label(n) << "\" [label=\"" << g.label(n);
    if (n != kEntryNode && n != kExitNode) {
      os << ": " << dot_escape(g.describe(n));
    }
    os << "\"";
    if (g.is_condition(n)) os << ", shape=diamond";
    os << "];\n";
  }
  for (const auto& e : g.edges()) {
    os << "  \"" << g.label(e.src) << "\" -> \"" << g.label(e.dst) << "\"";
    switch (e.kind) {
      case EdgeKind::kTrue: os << " [label=\"true\"]"; break;
      case EdgeKind::kFalse: os << " [label=\"false\"]"; break;
      case EdgeKind::kSpecial: os << " [style=dashed]"; break;
      case EdgeKind::kUncond: break;
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace dslice
