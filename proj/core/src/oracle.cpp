#include "dslice/oracle.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "dslice/error.hpp"
#include "dslice/transform.hpp"

namespace dslice {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kInconclusive: return "inconclusive";
    case Verdict::kSkipped: return "skipped";
  }
  return "?";
}

std::size_t Report::count(Verdict v) const {
  return static_cast<std::size_t>(
      std::count_if(inputs.begin(), inputs.end(),
                    [&](const InputReport& r) { return r.verdict == v; }));
}

int Report::exit_code() const {
  if (failures() > 0) return 1;
  if (inconclusive() > 0) return 2;
  return 0;
}

std::string Report::summary() const {
  std::ostringstream os;
  os << inputs.size() << " inputs: " << count(Verdict::kPass) << " pass, "
     << failures() << " fail, " << inconclusive() << " inconclusive, "
     << count(Verdict::kSkipped) << " skipped";
  return os.str();
}

namespace {

std::string show(const State& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [k, v] : s) {
    if (!first) os << ", ";
    first = false;
    os << k << ": " << v;
  }
  os << "}";
  return os.str();
}

Cfg lower(const Program& p) { return build_cfg(inline_calls(p)); }

}  // namespace

Report check_backward(const Program& original, const Program& slice,
                      const SlicingCriterion& c,
                      const std::vector<Input>& inputs,
                      const CheckOptions& opts) {
  Cfg g = lower(original);
  Cfg gs = lower(slice);
  Report report;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    InputReport r;
    r.input = i;
    Trace t = run(g, inputs[i], opts.step_budget);
    if (!t.terminated()) {
      r.verdict = Verdict::kSkipped;
      r.detail = "original does not terminate within the step budget";
      report.inputs.push_back(std::move(r));
      continue;
    }
    Trace ts = run(gs, inputs[i], opts.step_budget);
    TraceWindow w = trace_window(t, c);
    TraceWindow ws = trace_window(ts, c);
    if (!ts.terminated()) {
      r.verdict = Verdict::kFail;
      r.detail = ts.outcome == Outcome::kFault
                     ? "slice faults"
                     : "slice does not terminate within the step budget";
    } else if (w != ws) {
      r.verdict = Verdict::kFail;
      std::size_t k = 0;
      while (k < w.snapshots.size() && k < ws.snapshots.size() &&
             w.snapshots[k] == ws.snapshots[k]) {
        ++k;
      }
      std::ostringstream os;
      os << "windows diverge at visit " << k << ": original ";
      os << (k < w.snapshots.size() ? show(w.snapshots[k]) : "<end>");
      os << ", slice ";
      os << (k < ws.snapshots.size() ? show(ws.snapshots[k]) : "<end>");
      r.detail = os.str();
    }
    report.inputs.push_back(std::move(r));
  }
  return report;
}

Report check_backward(const Program& original, const SliceResult& s,
                      const std::vector<Input>& inputs,
                      const CheckOptions& opts) {
  Program slice = make_subprogram(original, s.retained, {});
  SlicingCriterion c = s.criterion;
  if (s.kind == SliceKind::kControl) c.vars.clear();
  return check_backward(original, slice, c, inputs, opts);
}

namespace {

// Exhaustive exploration of a data slice against one reference window.
// Nondeterministic choices are the only branching points; between two of
// them execution is deterministic. Configurations at choice points are
// memoized on the live part of the state, and since every choice consumes
// budget the configuration graph is acyclic.
class DataExplorer {
 public:
  enum : std::uint8_t {
    kMatch = 1,       // terminated with exactly the reference window
    kViolation = 2,   // terminated after diverging from the reference
    kTruncated = 4,   // hit the decision budget
    kNonterm = 8,     // a segment exhausted the step budget
    kFault = 16,
  };

  DataExplorer(const Cfg& g, const SlicingCriterion& c, const Input& input,
               const std::vector<std::vector<std::int64_t>>& window,
               const CheckOptions& opts, const std::vector<std::int64_t>& probes)
      : g_(g),
        exe_(g),
        input_(input),
        vars_(c.vars.begin(), c.vars.end()),
        window_(window),
        opts_(opts),
        probes_(probes) {
    auto l = g.find(c.location);
    l_ = l ? *l : kNoNode;
    compute_liveness();
  }

  std::uint8_t explore() {
    return segment(kEntryNode, detail::initial_state(g_, input_), 0, 0, false);
  }

  std::size_t nonterminating() const { return nonterm_paths_; }
  std::size_t faults() const { return fault_paths_; }
  const std::string& first_mismatch() const { return first_mismatch_; }

 private:
  struct Key {
    NodeId node;
    std::uint32_t decisions;
    std::uint32_t idx;
    bool dirty;
    std::vector<std::int64_t> live;

    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = k.node * 1000003u ^ k.decisions * 7919u ^ k.idx * 31u ^
                      (k.dirty ? 0x9e3779b9u : 0u);
      for (auto v : k.live) {
        h ^= std::hash<std::int64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) +
             (h >> 2);
      }
      return h;
    }
  };

  std::uint8_t segment(NodeId n, std::vector<std::int64_t> state,
                       std::uint32_t decisions, std::uint32_t idx, bool dirty) {
    for (std::size_t steps = 0;; ++steps) {
      if (n == l_ && !dirty) {
        if (idx >= window_.size()) return 0;  // more visits than the original
        bool same = true;
        for (std::size_t v = 0; v < vars_.size(); ++v) {
          if (detail::observe(g_, state, input_, vars_[v]) != window_[idx][v]) {
            same = false;
          }
        }
        if (same) {
          ++idx;
        } else {
          if (first_mismatch_.empty()) {
            first_mismatch_ = "visit " + std::to_string(idx) + " differs";
          }
          dirty = true;
          idx = 0;
        }
      }
      if (n == kExitNode) {
        if (dirty) return kViolation;
        return idx == window_.size() ? kMatch : 0;
      }
      if (steps >= opts_.step_budget) {
        ++nonterm_paths_;
        return kNonterm;
      }
      const CfgNode& node = g_.node(n);
      if (node.is_abstract) return decide(n, std::move(state), decisions, idx, dirty);
      std::int64_t v = 0;
      switch (node.kind) {
        case NodeKind::kAssign:
          if (!exe_.eval(n, state, v)) {
            ++fault_paths_;
            return kFault;
          }
          state[node.def] = v;
          n = g_.successor(n);
          break;
        case NodeKind::kCond:
          if (!exe_.eval(n, state, v)) {
            ++fault_paths_;
            return kFault;
          }
          n = g_.successor(n, v != 0 ? EdgeKind::kTrue : EdgeKind::kFalse);
          break;
        default:
          n = g_.successor(n);
          break;
      }
    }
  }

  std::uint8_t decide(NodeId n, std::vector<std::int64_t> state,
                      std::uint32_t decisions, std::uint32_t idx, bool dirty) {
    if (decisions >= opts_.branch_budget) return kTruncated;
    Key key{n, decisions, idx, dirty, {}};
    for (VarId v : live_[n]) key.live.push_back(state[v]);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    const CfgNode& node = g_.node(n);
    std::uint8_t result = 0;
    if (node.kind == NodeKind::kCond) {
      for (EdgeKind e : {EdgeKind::kTrue, EdgeKind::kFalse}) {
        result |= segment(g_.successor(n, e), state, decisions + 1, idx, dirty);
        if ((result & (kMatch | kViolation)) == (kMatch | kViolation)) break;
      }
    } else {
      for (std::int64_t p : probes_) {
        std::vector<std::int64_t> next = state;
        next[node.def] = p;
        result |= segment(g_.successor(n), std::move(next), decisions + 1, idx,
                          dirty);
        if ((result & (kMatch | kViolation)) == (kMatch | kViolation)) break;
      }
    }
    memo_.emplace(std::move(key), result);
    return result;
  }

  void compute_liveness() {
    const std::size_t n = g_.size();
    std::vector<std::vector<char>> in(n, std::vector<char>(g_.num_vars(), 0));
    std::vector<std::vector<char>> gen(n, std::vector<char>(g_.num_vars(), 0));
    for (NodeId v = 0; v < n; ++v) {
      for (VarId u : g_.node(v).uses) gen[v][u] = 1;
    }
    if (l_ != kNoNode) {
      for (const auto& name : vars_) {
        if (auto id = g_.var_id(name)) gen[l_][*id] = 1;
      }
    }
    bool changed = true;
    while (changed) {
      changed = false;
      for (NodeId v = static_cast<NodeId>(n); v-- > 0;) {
        std::vector<char> acc = gen[v];
        for (auto e : g_.out_edges(v)) {
          const CfgEdge& edge = g_.edge(e);
          if (edge.kind == EdgeKind::kSpecial) continue;
          for (std::size_t x = 0; x < acc.size(); ++x) {
            if (in[edge.dst][x] && x != g_.node(v).def) acc[x] = 1;
          }
        }
        if (acc != in[v]) {
          in[v] = std::move(acc);
          changed = true;
        }
      }
    }
    live_.assign(n, {});
    for (NodeId v = 0; v < n; ++v) {
      for (VarId x = 0; x < g_.num_vars(); ++x) {
        if (in[v][x]) live_[v].push_back(x);
      }
    }
  }

  const Cfg& g_;
  detail::Executable exe_;
  const Input& input_;
  std::vector<std::string> vars_;
  const std::vector<std::vector<std::int64_t>>& window_;
  const CheckOptions& opts_;
  const std::vector<std::int64_t>& probes_;
  NodeId l_ = kNoNode;
  std::vector<std::vector<VarId>> live_;
  std::unordered_map<Key, std::uint8_t, KeyHash> memo_;
  std::size_t nonterm_paths_ = 0;
  std::size_t fault_paths_ = 0;
  std::string first_mismatch_;
};

}  // namespace

Report check_data(const Program& original, const Program& slice,
                  const SlicingCriterion& c, const std::vector<Input>& inputs,
                  const CheckOptions& opts) {
  Cfg g = lower(original);
  Cfg gs = lower(slice);
  std::vector<std::int64_t> probes =
      opts.probes ? *opts.probes : default_probes(original);
  Report report;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    InputReport r;
    r.input = i;
    Trace t = run(g, inputs[i], opts.step_budget);
    if (!t.terminated()) {
      r.verdict = Verdict::kSkipped;
      r.detail = "original does not terminate within the step budget";
      report.inputs.push_back(std::move(r));
      continue;
    }
    TraceWindow w = trace_window(t, c);
    std::vector<std::vector<std::int64_t>> window;
    for (const auto& snap : w.snapshots) {
      std::vector<std::int64_t> row;
      for (const auto& v : c.vars) row.push_back(snap.at(v));
      window.push_back(std::move(row));
    }
    DataExplorer explorer(gs, c, inputs[i], window, opts, probes);
    std::uint8_t result = explorer.explore();
    r.nonterminating = explorer.nonterminating();
    r.faults = explorer.faults();
    r.p2_failed = !(result & DataExplorer::kMatch);
    r.p3_failed = (result & DataExplorer::kViolation) != 0;
    bool cut = (result & (DataExplorer::kTruncated | DataExplorer::kNonterm)) != 0;
    std::ostringstream os;
    if (r.p3_failed) {
      r.verdict = Verdict::kFail;
      os << "P3: a terminating resolution diverges (" << explorer.first_mismatch()
         << ")";
    } else if (r.p2_failed && cut) {
      r.verdict = Verdict::kInconclusive;
      os << "P2: no matching resolution within the budgets";
    } else if (r.p2_failed) {
      r.verdict = Verdict::kFail;
      os << "P2: no resolution reproduces the " << window.size()
         << "-visit window";
    }
    if (r.nonterminating || r.faults) {
      if (os.tellp() > 0) os << "; ";
      os << "excluded " << r.nonterminating << " nonterminating and "
         << r.faults << " faulting resolutions";
    }
    r.detail = os.str();
    report.inputs.push_back(std::move(r));
  }
  return report;
}

Report check_data(const Program& original, const SliceResult& d,
                  const std::vector<Input>& inputs, const CheckOptions& opts) {
  Program slice = make_subprogram(original, d.retained, d.abstractions());
  return check_data(original, slice, d.criterion, inputs, opts);
}

// ---------------------------------------------------------------------------

namespace {

class ViSearch {
 public:
  ViSearch(const Cfg& g, NodeId l, std::size_t path_bound,
           std::size_t max_steps, const std::vector<char>& vi)
      : g_(g), l_(l), bound_(path_bound), max_steps_(max_steps), vi_(vi),
        on_path_(g.size(), 0) {}

  // First value-impacting statements over all qualifying paths that leave
  // `c` through `first`.
  std::set<NodeId> firsts(NodeId c, NodeId first) {
    found_.clear();
    std::fill(on_path_.begin(), on_path_.end(), 0);
    on_path_[c] = 1;  // loop-free: the path never returns to c
    walk(first, 1, kNoNode);
    return found_;
  }

 private:
  // Returns true when l was reached from `n` (only meaningful once `head`,
  // the first value-impacting node, is fixed).
  bool walk(NodeId n, std::size_t depth, NodeId head) {
    if (++steps_ > max_steps_) {
      throw PathBoundExceeded("path exploration exceeded " +
                              std::to_string(max_steps_) + " steps");
    }
    if (depth > bound_) {
      throw PathBoundExceeded("path longer than " + std::to_string(bound_) +
                              " nodes");
    }
    if (on_path_[n]) return false;
    if (head == kNoNode && vi_[n]) {
      if (found_.count(n)) return false;
      head = n;
    }
    if (n == l_) {
      found_.insert(head);
      return true;
    }
    on_path_[n] = 1;
    bool reached = false;
    for (auto e : g_.out_edges(n)) {
      const CfgEdge& edge = g_.edge(e);
      if (edge.kind == EdgeKind::kSpecial) continue;
      if (walk(edge.dst, depth + 1, head)) {
        reached = true;
        if (head != kNoNode) break;  // one completion per head suffices
      }
    }
    on_path_[n] = 0;
    return reached;
  }

  const Cfg& g_;
  NodeId l_;
  std::size_t bound_;
  std::size_t max_steps_;
  std::size_t steps_ = 0;
  const std::vector<char>& vi_;
  std::vector<char> on_path_;
  std::set<NodeId> found_;
};

}  // namespace

std::set<Label> vi_oracle(const Cfg& g, const ReachingMap& rm,
                          const SlicingCriterion& c, std::size_t path_bound,
                          std::size_t max_paths) {
  NodeId l = g.at(c.location);
  std::vector<VarId> vars = known_vars(g, c.vars);

  // Rules 1-3 closed over `conds`, the conditions currently taken as
  // value-impacting.
  auto closure = [&](const std::vector<char>& conds) {
    std::vector<char> vi(g.size(), 0);
    std::vector<NodeId> stack;
    auto add = [&](NodeId n) {
      if (!vi[n]) {
        vi[n] = 1;
        stack.push_back(n);
      }
    };
    vi[l] = 1;
    for (NodeId d : du_nodes(g, rm, l, vars)) add(d);
    for (NodeId n = 0; n < g.size(); ++n) {
      if (conds[n]) add(n);
    }
    while (!stack.empty()) {
      NodeId t = stack.back();
      stack.pop_back();
      for (NodeId d : du_nodes(g, rm, t, g.node(t).uses)) add(d);
    }
    return vi;
  };

  // Rule 4 refers to the set being defined and is not monotone: a new
  // value-impacting statement can hide the one a witness relied on. The
  // result is therefore a set S equal to its own rule application, reached
  // by recomputing every condition against the previous round.
  std::vector<char> conds(g.size(), 0);
  std::vector<char> vi = closure(conds);
  std::set<std::vector<char>> seen;
  for (;;) {
    ViSearch search(g, l, path_bound, max_paths, vi);
    std::vector<char> next(g.size(), 0);
    for (NodeId cond = 0; cond < g.size(); ++cond) {
      if (!g.is_condition(cond)) continue;
      std::set<NodeId> ft = search.firsts(cond, g.successor(cond, EdgeKind::kTrue));
      std::set<NodeId> ff = search.firsts(cond, g.successor(cond, EdgeKind::kFalse));
      if (ft.empty() || ff.empty()) continue;
      // Some t first on a path from one edge and not first on one from the
      // other.
      std::set<NodeId> both = ft;
      both.insert(ff.begin(), ff.end());
      if (both.size() >= 2) next[cond] = 1;
    }
    if (next == conds) break;
    if (!seen.insert(conds).second) {
      throw Error("value-impact rules have no fixpoint for this criterion");
    }
    conds = std::move(next);
    vi = closure(conds);
  }

  std::set<Label> out;
  for (NodeId n = 0; n < g.size(); ++n) {
    if (vi[n]) out.insert(g.label(n));
  }
  return out;
}

std::vector<std::pair<NodeId, NodeId>> sp1_violations(const ControlDeps& cd) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (NodeId s = 0; s < cd.size(); ++s) {
    const CondSet& t = cd.tcntrls(s);
    for (NodeId c : t.conds()) {
      if (t.strong(c, true) && t.strong(c, false)) out.push_back({c, s});
    }
  }
  return out;
}

namespace {

// True when some simple path from `n` to `s` avoids taking edge `e` of `c`.
bool bypass(const Cfg& g, NodeId n, NodeId s, NodeId c, EdgeKind e,
            std::vector<char>& on_path, std::size_t& steps,
            std::size_t max_steps) {
  if (++steps > max_steps) {
    throw PathBoundExceeded("SP2 path enumeration exceeded " +
                            std::to_string(max_steps) + " steps");
  }
  if (n == s) return true;
  if (on_path[n]) return false;
  on_path[n] = 1;
  bool found = false;
  for (auto id : g.out_edges(n)) {
    const CfgEdge& edge = g.edge(id);
    if (edge.kind == EdgeKind::kSpecial) continue;
    if (n == c && edge.kind == e) continue;  // paths through e do not bypass it
    if (bypass(g, edge.dst, s, c, e, on_path, steps, max_steps)) {
      found = true;
      break;
    }
  }
  on_path[n] = 0;
  return found;
}

}  // namespace

std::vector<std::pair<NodeId, NodeId>> sp2_violations(const Cfg& g,
                                                      const ControlDeps& cd,
                                                      std::size_t max_steps) {
  std::vector<std::pair<NodeId, NodeId>> out;
  std::vector<char> on_path(g.size(), 0);
  std::size_t steps = 0;
  for (NodeId s = 0; s < cd.size(); ++s) {
    const CondSet& t = cd.tcntrls(s);
    for (NodeId c : t.conds()) {
      for (bool e : {true, false}) {
        if (!t.strong(c, e)) continue;
        EdgeKind taken = e ? EdgeKind::kTrue : EdgeKind::kFalse;
        NodeId start = g.successor(c, e ? EdgeKind::kFalse : EdgeKind::kTrue);
        if (bypass(g, start, s, c, taken, on_path, steps, max_steps)) {
          out.push_back({c, s});
        }
      }
    }
  }
  return out;
}

}  // namespace dslice
