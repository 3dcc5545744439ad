#include "brute.hpp"

#include <algorithm>
#include <functional>
#include <optional>

namespace dslice::testing {
namespace {

std::vector<NodeId> succs(const Cfg& g, NodeId n, bool special) {
  std::vector<NodeId> out;
  for (auto e : g.out_edges(n)) {
    if (!special && g.edge(e).kind == EdgeKind::kSpecial) continue;
    out.push_back(g.edge(e).dst);
  }
  return out;
}

// Nodes reachable from `from` (inclusive) without visiting `removed`.
std::vector<bool> reach_avoiding(const Cfg& g, NodeId from, NodeId removed) {
  std::vector<bool> seen(g.size(), false);
  if (from == removed) return seen;
  std::vector<NodeId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (NodeId m : succs(g, n, true)) {
      if (m == removed || seen[m]) continue;
      seen[m] = true;
      stack.push_back(m);
    }
  }
  return seen;
}

// True when a cycle avoiding `removed` passes through some node marked in
// `reach`, i.e. an infinite path from the search origin avoids `removed`.
bool cycle_reachable(const Cfg& g, const std::vector<bool>& reach,
                     NodeId removed) {
  for (NodeId n = 0; n < g.size(); ++n) {
    if (!reach[n]) continue;
    for (NodeId m : succs(g, n, true)) {
      if (m == removed) continue;
      if (m == n) return true;
      if (reach_avoiding(g, m, removed)[n]) return true;
    }
  }
  return false;
}

bool defines(const Cfg& g, NodeId n, VarId v) {
  return g.node(n).kind == NodeKind::kAssign && g.node(n).def == v;
}

}  // namespace

std::vector<std::vector<bool>> brute_weak_postdom(const Cfg& g) {
  std::size_t n = g.size();
  std::vector<std::vector<bool>> pd(n, std::vector<bool>(n, false));
  for (NodeId n1 = 0; n1 < n; ++n1) {
    for (NodeId n2 = 0; n2 < n; ++n2) {
      pd[n1][n2] = n1 == n2 || !reach_avoiding(g, n1, n2)[kExitNode];
    }
  }
  return pd;
}

std::vector<std::vector<bool>> brute_strong_postdom(const Cfg& g) {
  std::size_t n = g.size();
  std::vector<std::vector<bool>> pd(n, std::vector<bool>(n, false));
  for (NodeId n1 = 0; n1 < n; ++n1) {
    for (NodeId n2 = 0; n2 < n; ++n2) {
      if (n1 == n2) {
        pd[n1][n2] = true;
        continue;
      }
      pd[n1][n2] = !cycle_reachable(g, reach_avoiding(g, n1, n2), n2);
    }
  }
  return pd;
}

std::vector<CdEdge> brute_control_dependence(const Cfg& g) {
  auto weak = brute_weak_postdom(g);
  auto strong = brute_strong_postdom(g);
  std::vector<CdEdge> out;
  for (NodeId c = 0; c < g.size(); ++c) {
    if (g.node(c).kind != NodeKind::kCond) continue;
    for (bool branch : {true, false}) {
      NodeId succ = g.successor(c, branch ? EdgeKind::kTrue : EdgeKind::kFalse);
      for (NodeId s = 2; s < g.size(); ++s) {
        if (weak[succ][s] && !(s != c && weak[c][s])) {
          out.push_back({c, branch, s, CdStrength::kStrong});
        }
        if (strong[succ][s] && !(s != c && strong[c][s])) {
          out.push_back({c, branch, s, CdStrength::kWeak});
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::set<NodeId>> brute_reaching(const Cfg& g) {
  std::vector<std::set<NodeId>> in(g.size());
  for (NodeId d = 0; d < g.size(); ++d) {
    if (g.node(d).kind != NodeKind::kAssign) continue;
    VarId v = g.node(d).def;
    std::vector<bool> seen(g.size(), false);
    std::vector<NodeId> stack = succs(g, d, false);
    for (NodeId m : stack) seen[m] = true;
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      in[n].insert(d);
      if (defines(g, n, v)) continue;
      for (NodeId m : succs(g, n, false)) {
        if (!seen[m]) {
          seen[m] = true;
          stack.push_back(m);
        }
      }
    }
  }
  return in;
}

std::vector<std::set<CondTriple>> brute_tcntrls(const Cfg& g,
                                                const std::vector<CdEdge>& cd) {
  std::vector<std::set<CondTriple>> t(g.size());
  for (const auto& e : cd) {
    bool strong = e.strength == CdStrength::kStrong;
    t[e.dependent].insert({e.cond, e.branch, false});
    if (strong) t[e.dependent].insert({e.cond, e.branch, true});
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : cd) {
      bool strong = e.strength == CdStrength::kStrong;
      // Chains into e.cond extend by the hop e.cond → e.dependent.
      for (const auto& tr : std::vector<CondTriple>(t[e.cond].begin(),
                                                    t[e.cond].end())) {
        CondTriple ext{tr.cond, tr.edge, tr.strong_only && strong};
        changed |= t[e.dependent].insert(ext).second;
        if (ext.strong_only) {
          changed |= t[e.dependent].insert({tr.cond, tr.edge, false}).second;
        }
      }
    }
  }
  for (NodeId s = 0; s < g.size(); ++s) {
    for (auto it = t[s].begin(); it != t[s].end();) {
      it = it->cond == s ? t[s].erase(it) : std::next(it);
    }
  }
  return t;
}

std::set<NodeId> brute_backward(const Pdg& pdg, NodeId l,
                                const std::vector<VarId>& vars, bool weak_cd) {
  const Cfg& g = pdg.cfg();
  auto reach = brute_reaching(g);
  auto cd = brute_control_dependence(g);
  std::set<NodeId> s{l};
  for (NodeId d : reach[l]) {
    if (std::count(vars.begin(), vars.end(), g.node(d).def)) s.insert(d);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId n : std::vector<NodeId>(s.begin(), s.end())) {
      for (NodeId d : reach[n]) {
        const auto& uses = g.node(n).uses;
        if (std::count(uses.begin(), uses.end(), g.node(d).def)) {
          changed |= s.insert(d).second;
        }
      }
      for (const auto& e : cd) {
        if (e.dependent != n) continue;
        if (e.strength == CdStrength::kStrong || weak_cd) {
          changed |= s.insert(e.cond).second;
        }
      }
      if (g.node(n).parent != kNoNode) changed |= s.insert(g.node(n).parent).second;
      for (NodeId m = 0; m < g.size(); ++m) {
        if (g.node(m).jump_target == n) changed |= s.insert(m).second;
      }
    }
  }
  return s;
}

std::set<NodeId> brute_cvi(const Pdg& pdg, NodeId l,
                           const std::vector<VarId>& vars) {
  const Cfg& g = pdg.cfg();
  auto reach = brute_reaching(g);
  auto tc = brute_tcntrls(g, brute_control_dependence(g));
  auto strong_to = [&](NodeId c, NodeId t, std::optional<bool> edge) {
    for (bool e : {true, false}) {
      if (edge && *edge != e) continue;
      if (tc[t].count({c, e, true})) return true;
    }
    return false;
  };
  auto any_to = [&](NodeId c, NodeId t, bool e) {
    return tc[t].count({c, e, false}) > 0;
  };
  std::set<NodeId> s{l};
  for (NodeId d : reach[l]) {
    if (std::count(vars.begin(), vars.end(), g.node(d).def)) s.insert(d);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (NodeId t : std::vector<NodeId>(s.begin(), s.end())) {
      for (NodeId d : reach[t]) {
        const auto& uses = g.node(t).uses;
        if (std::count(uses.begin(), uses.end(), g.node(d).def)) {
          changed |= s.insert(d).second;
        }
      }
      for (NodeId c = 0; c < g.size(); ++c) {
        if (g.node(c).kind != NodeKind::kCond || s.count(c)) continue;
        bool rule_a = strong_to(c, t, std::nullopt) && !strong_to(c, l, std::nullopt);
        bool rule_b = false;
        for (bool e1 : {true, false}) {
          rule_b |= strong_to(c, l, e1) && !strong_to(c, t, e1) && any_to(c, t, !e1);
        }
        if (rule_a || rule_b) changed |= s.insert(c).second;
      }
    }
  }
  return s;
}

}  // namespace dslice::testing
