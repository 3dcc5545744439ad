#include "dslice/slicer.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace dslice {

std::set<Label> SliceResult::all() const {
  std::set<Label> out = retained;
  out.insert(abstracted_conds.begin(), abstracted_conds.end());
  out.insert(abstracted_assigns.begin(), abstracted_assigns.end());
  return out;
}

std::map<Label, Abstraction> SliceResult::abstractions() const {
  std::map<Label, Abstraction> out;
  for (Label l : abstracted_conds) out[l] = Abstraction::kCond;
  for (Label l : abstracted_assigns) out[l] = Abstraction::kAssign;
  return out;
}

namespace {

std::set<Label> to_labels(const Cfg& g, const std::vector<char>& member) {
  std::set<Label> out;
  for (NodeId n = 0; n < member.size(); ++n) {
    if (member[n]) out.insert(g.label(n));
  }
  return out;
}

}  // namespace

SliceResult backward_slice(const Pdg& pdg, const SlicingCriterion& c,
                           const SliceOptions& opts) {
  const Cfg& g = pdg.cfg();
  NodeId l = g.at(c.location);
  std::vector<char> in(g.size(), 0);
  std::vector<NodeId> stack;
  auto add = [&](NodeId n) {
    if (n == kNoNode || n == kEntryNode || n == kExitNode || in[n]) return;
    in[n] = 1;
    stack.push_back(n);
  };
  add(l);
  for (NodeId d : pdg.du(l, known_vars(g, c.vars))) add(d);
  while (!stack.empty()) {
    NodeId w = stack.back();
    stack.pop_back();
    for (NodeId d : pdg.data_preds(w)) add(d);
    for (const auto& e : pdg.deps().incoming(w)) {
      if (e.strength == CdStrength::kStrong || opts.weak_cd) add(e.cond);
    }
    add(g.node(w).parent);
    if (g.node(w).is_loop) {
      for (NodeId j : g.jumps_of(w)) add(j);
    }
  }
  SliceResult r;
  r.kind = SliceKind::kBackward;
  r.retained = to_labels(g, in);
  r.criterion = c;
  return r;
}

SliceResult control_slice(const Pdg& pdg, const SlicingCriterion& c,
                          const SliceOptions& opts) {
  SliceResult r = backward_slice(pdg, SlicingCriterion{c.location, {}}, opts);
  r.kind = SliceKind::kControl;
  r.criterion = c;
  return r;
}

std::vector<NodeId> get_cvi_conds(NodeId t, const CondSet& lconds,
                                  const ControlDeps& deps) {
  std::vector<NodeId> r;
  const CondSet& tconds = deps.tcntrls(t);
  for (NodeId c : tconds.conds()) {
    bool lst_t = lconds.strong(c, true);
    bool lst_f = lconds.strong(c, false);
    bool tst_t = tconds.strong(c, true);
    bool tst_f = tconds.strong(c, false);
    bool tsw_t = tconds.weak(c, true);
    bool tsw_f = tconds.weak(c, false);
    if (!lst_t && !lst_f && (tst_t || tst_f)) {
      r.push_back(c);
    } else if ((lst_t && !tst_t && tsw_f) || (lst_f && !tst_f && tsw_t)) {
      r.push_back(c);
    }
  }
  return r;
}

std::vector<NodeId> compute_cvi_nodes(const Pdg& pdg, NodeId l,
                                      const std::vector<VarId>& vars,
                                      const CviOptions& opts) {
  const std::size_t n = pdg.size();
  std::vector<char> inslice(n, 0), inwl(n, 0);
  inslice[l] = 1;
  const CondSet& lconds = pdg.deps().tcntrls(l);
  std::deque<NodeId> wl;
  for (NodeId s : pdg.du(l, vars)) {
    wl.push_back(s);
    inwl[s] = 1;
  }
  // Seeding the engine is costly next to a small slice, so only shuffled
  // runs pay for it.
  std::optional<std::mt19937_64> rng;
  if (opts.shuffle_seed) rng.emplace(*opts.shuffle_seed);
  while (!wl.empty()) {
    NodeId w;
    if (rng) {
      std::uniform_int_distribution<std::size_t> pick(0, wl.size() - 1);
      auto it = wl.begin() + static_cast<std::ptrdiff_t>(pick(*rng));
      w = *it;
      wl.erase(it);
    } else {
      w = wl.front();
      wl.pop_front();
    }
    inslice[w] = 1;
    auto visit = [&](NodeId s) {
      if (!inwl[s]) {
        wl.push_back(s);
        inwl[s] = 1;
      }
    };
    for (NodeId s : pdg.data_preds(w)) visit(s);
    for (NodeId s : get_cvi_conds(w, lconds, pdg.deps())) visit(s);
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < n; ++v) {
    if (inslice[v]) out.push_back(v);
  }
  return out;
}

std::set<Label> compute_cvi(const Pdg& pdg, const SlicingCriterion& c,
                            const CviOptions& opts) {
  const Cfg& g = pdg.cfg();
  std::set<Label> out;
  for (NodeId v : compute_cvi_nodes(pdg, g.at(c.location),
                                    known_vars(g, c.vars), opts)) {
    out.insert(g.label(v));
  }
  return out;
}

std::vector<NodeId> ac_condition_nodes(const Pdg& pdg,
                                       const std::vector<NodeId>& cvi) {
  std::vector<char> in_cvi(pdg.size(), 0), in_ac(pdg.size(), 0);
  for (NodeId t : cvi) in_cvi[t] = 1;
  for (NodeId t : cvi) {
    const CondSet& tc = pdg.deps().tcntrls(t);
    for (NodeId c : tc.conds()) {
      if (tc.strong_any(c) && !in_cvi[c]) in_ac[c] = 1;
    }
  }
  std::vector<NodeId> out;
  for (NodeId v = 0; v < pdg.size(); ++v) {
    if (in_ac[v]) out.push_back(v);
  }
  return out;
}

std::set<Label> ac_conditions(const Pdg& pdg, const std::set<Label>& cvi) {
  const Cfg& g = pdg.cfg();
  std::vector<NodeId> nodes;
  for (Label l : cvi) nodes.push_back(g.at(l));
  std::sort(nodes.begin(), nodes.end());
  std::set<Label> out;
  for (NodeId c : ac_condition_nodes(pdg, nodes)) out.insert(g.label(c));
  return out;
}

SliceResult data_slice(const Pdg& pdg, const SlicingCriterion& c,
                       Abstraction mode, const CviOptions& opts) {
  const Cfg& g = pdg.cfg();
  NodeId l = g.at(c.location);
  std::vector<NodeId> cvi = compute_cvi_nodes(pdg, l, known_vars(g, c.vars), opts);
  std::vector<NodeId> ac = ac_condition_nodes(pdg, cvi);

  enum : char { kOut = 0, kConcrete, kAbsCond, kAbsAssign };
  std::vector<char> state(g.size(), kOut);
  for (NodeId v : cvi) state[v] = kConcrete;
  state[l] = kConcrete;
  if (mode == Abstraction::kCond) {
    for (NodeId v : ac) state[v] = kAbsCond;
  } else {
    for (NodeId v : ac) state[v] = kConcrete;
    for (NodeId v : ac) {
      for (NodeId d : pdg.data_preds(v)) {
        if (state[d] == kOut) state[d] = kAbsAssign;
      }
    }
  }

  // Structural closure: enclosing conditions of kept statements and the
  // jumps of kept loops.
  std::vector<NodeId> stack;
  for (NodeId v = 0; v < g.size(); ++v) {
    if (state[v] != kOut) stack.push_back(v);
  }
  while (!stack.empty()) {
    NodeId w = stack.back();
    stack.pop_back();
    NodeId p = g.node(w).parent;
    if (p != kNoNode && state[p] == kOut) {
      state[p] = kAbsCond;
      stack.push_back(p);
    }
    if (g.node(w).is_loop) {
      for (NodeId j : g.jumps_of(w)) {
        if (state[j] == kOut) {
          state[j] = kConcrete;
          stack.push_back(j);
        }
      }
    }
  }

  SliceResult r;
  r.kind = SliceKind::kData;
  r.mode = mode;
  r.criterion = c;
  for (NodeId v = 0; v < g.size(); ++v) {
    switch (state[v]) {
      case kConcrete: r.retained.insert(g.label(v)); break;
      case kAbsCond: r.abstracted_conds.insert(g.label(v)); break;
      case kAbsAssign: r.abstracted_assigns.insert(g.label(v)); break;
      default: break;
    }
  }
  return r;
}

}  // namespace dslice
