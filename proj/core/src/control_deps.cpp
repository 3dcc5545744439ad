#include "dslice/control_deps.hpp"

#include <algorithm>

namespace dslice {

PostDomRelation post_dominators(const Cfg& g) {
  const std::size_t n = g.size();
  PostDomRelation pd;

  // Weak: pdom(n) = {n} ∪ ⋂ pdom(succ), iterated in reverse node order.
  pd.weak.assign(n, std::vector<bool>(n, true));
  pd.weak[kExitNode].assign(n, false);
  pd.weak[kExitNode][kExitNode] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
      if (v == kExitNode) continue;
      std::vector<bool> acc(n, true);
      for (auto e : g.out_edges(v)) {
        const auto& succ = pd.weak[g.edge(e).dst];
        for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] && succ[i];
      }
      acc[v] = true;
      if (acc != pd.weak[v]) {
        pd.weak[v] = std::move(acc);
        changed = true;
      }
    }
  }

  // Strong: with n2 removed, n1 escapes n2 forever iff it can reach a cycle.
  // Nodes that cannot reach a cycle are exactly those removed by repeatedly
  // peeling sinks.
  pd.strong.assign(n, std::vector<bool>(n, false));
  std::vector<std::size_t> outdeg(n);
  std::vector<NodeId> queue;
  for (NodeId n2 = 0; n2 < n; ++n2) {
    queue.clear();
    std::vector<bool> peeled(n, false);
    for (NodeId v = 0; v < n; ++v) {
      outdeg[v] = 0;
      if (v == n2) continue;
      for (auto e : g.out_edges(v)) {
        if (g.edge(e).dst != n2) ++outdeg[v];
      }
      if (outdeg[v] == 0) queue.push_back(v);
    }
    for (std::size_t i = 0; i < queue.size(); ++i) {
      NodeId v = queue[i];
      peeled[v] = true;
      for (auto e : g.in_edges(v)) {
        NodeId u = g.edge(e).src;
        if (u == n2 || peeled[u]) continue;
        if (--outdeg[u] == 0) queue.push_back(u);
      }
    }
    for (NodeId n1 = 0; n1 < n; ++n1) {
      if (n1 == n2 || peeled[n1]) pd.strong[n1][n2] = true;
    }
  }
  return pd;
}

std::vector<CdEdge> control_dependence(const Cfg& g,
                                       const PostDomRelation& pd) {
  std::vector<CdEdge> out;
  for (NodeId c = 0; c < g.size(); ++c) {
    if (!g.is_condition(c)) continue;
    for (auto e : g.out_edges(c)) {
      const CfgEdge& edge = g.edge(e);
      bool branch = edge.kind == EdgeKind::kTrue;
      for (NodeId s = 2; s < g.size(); ++s) {
        if (pd.weakly(edge.dst, s) && !(s != c && pd.weakly(c, s))) {
          out.push_back({c, branch, s, CdStrength::kStrong});
        }
        if (pd.strongly(edge.dst, s) && !(s != c && pd.strongly(c, s))) {
          out.push_back({c, branch, s, CdStrength::kWeak});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CondSet::add(NodeId c, bool e, bool strong_only) {
  flags_[slot(c, e)] |= strong_only ? kStrong | kAny : kAny;
}

void CondSet::finish() {
  conds_.clear();
  for (std::size_t i = 0; i < flags_.size(); i += 2) {
    if (flags_[i] | flags_[i + 1]) conds_.push_back(static_cast<NodeId>(i / 2));
  }
}

std::vector<CondTriple> CondSet::triples() const {
  std::vector<CondTriple> out;
  for (NodeId c : conds_) {
    for (bool e : {true, false}) {
      if (strong(c, e)) out.push_back({c, e, true});
      if (weak(c, e)) out.push_back({c, e, false});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ControlDeps::ControlDeps(const Cfg& g, const PostDomRelation& pd)
    : ControlDeps(g.size(), control_dependence(g, pd)) {}

ControlDeps::ControlDeps(std::size_t num_nodes, std::vector<CdEdge> edges)
    : edges_(std::move(edges)),
      in_(num_nodes),
      once_(new std::once_flag[num_nodes]),
      memo_(num_nodes) {
  std::sort(edges_.begin(), edges_.end());
  for (const auto& e : edges_) in_[e.dependent].push_back(e);
}

std::vector<CondTriple> ControlDeps::conds(NodeId s) const {
  std::vector<CondTriple> out;
  for (const auto& e : in_[s]) {
    if (e.strength == CdStrength::kStrong) out.push_back({e.cond, e.branch, true});
    out.push_back({e.cond, e.branch, false});
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const CondSet& ControlDeps::tcntrls(NodeId s) const {
  std::call_once(once_[s], [&] { memo_[s] = compute(s); });
  return memo_[s];
}

CondSet ControlDeps::compute(NodeId s) const {
  const std::size_t n = in_.size();
  CondSet out(n);
  // Backward search over (node, suffix-all-strong) states. For a chain
  // c ⟶ x ⟶ … ⟶ s the qualifying edge is the one leaving c, i.e. the edge
  // just traversed. Scratch space is reused across calls on one thread.
  thread_local std::vector<std::uint8_t> seen;
  thread_local std::vector<std::pair<NodeId, bool>> stack;
  seen.assign(2 * n, 0);
  stack.clear();
  stack.push_back({s, true});
  seen[2 * s] = 1;
  while (!stack.empty()) {
    auto [x, all_strong] = stack.back();
    stack.pop_back();
    for (const auto& e : in_[x]) {
      bool strong = all_strong && e.strength == CdStrength::kStrong;
      if (e.cond != s) out.add(e.cond, e.branch, strong);
      std::size_t key = 2 * e.cond + (strong ? 0 : 1);
      if (!seen[key]) {
        seen[key] = 1;
        stack.push_back({e.cond, strong});
      }
    }
  }
  out.finish();
  return out;
}

}  // namespace dslice
