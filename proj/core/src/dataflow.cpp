#include "dslice/dataflow.hpp"

#include <algorithm>
#include <deque>
#include <random>

#include <boost/dynamic_bitset.hpp>

#include "dslice/error.hpp"

namespace dslice {
namespace {

using Bits = boost::dynamic_bitset<>;

std::vector<NodeId> reverse_post_order(const Cfg& g) {
  std::vector<NodeId> order;
  std::vector<char> seen(g.size(), 0);
  // Iterative DFS; each frame remembers the next out-edge to try.
  std::vector<std::pair<NodeId, std::size_t>> stack{{kEntryNode, 0}};
  seen[kEntryNode] = 1;
  while (!stack.empty()) {
    auto& [n, i] = stack.back();
    const auto& out = g.out_edges(n);
    if (i < out.size()) {
      const CfgEdge& e = g.edge(out[i++]);
      if (e.kind != EdgeKind::kSpecial && !seen[e.dst]) {
        seen[e.dst] = 1;
        stack.push_back({e.dst, 0});
      }
    } else {
      order.push_back(n);
      stack.pop_back();
    }
  }
  std::reverse(order.begin(), order.end());
  for (NodeId n = 0; n < g.size(); ++n) {
    if (!seen[n]) order.push_back(n);
  }
  return order;
}

}  // namespace

ReachingMap reaching_definitions(const Cfg& g, const ReachingOptions& opts) {
  const std::size_t n = g.size();
  std::vector<Bits> kill_of_var(g.num_vars(), Bits(n));
  for (NodeId v = 0; v < n; ++v) {
    if (g.node(v).def != kNoVar) kill_of_var[g.node(v).def].set(v);
  }

  std::vector<Bits> in(n, Bits(n)), out(n, Bits(n));
  std::vector<NodeId> order = reverse_post_order(g);
  if (opts.shuffle_seed) {
    std::mt19937_64 rng(*opts.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::deque<NodeId> worklist(order.begin(), order.end());
  std::vector<char> queued(n, 1);
  std::mt19937_64 pick_rng(opts.shuffle_seed.value_or(0));

  while (!worklist.empty()) {
    NodeId v;
    if (opts.shuffle_seed) {
      std::uniform_int_distribution<std::size_t> d(0, worklist.size() - 1);
      auto it = worklist.begin() + static_cast<std::ptrdiff_t>(d(pick_rng));
      v = *it;
      worklist.erase(it);
    } else {
      v = worklist.front();
      worklist.pop_front();
    }
    queued[v] = 0;

    Bits new_in(n);
    for (auto e : g.in_edges(v)) {
      const CfgEdge& edge = g.edge(e);
      if (edge.kind == EdgeKind::kSpecial) continue;
      new_in |= out[edge.src];
    }
    in[v] = new_in;
    Bits new_out = new_in;
    if (VarId d = g.node(v).def; d != kNoVar) {
      new_out -= kill_of_var[d];
      new_out.set(v);
    }
    if (new_out != out[v]) {
      out[v] = std::move(new_out);
      for (auto e : g.out_edges(v)) {
        const CfgEdge& edge = g.edge(e);
        if (edge.kind == EdgeKind::kSpecial || queued[edge.dst]) continue;
        queued[edge.dst] = 1;
        worklist.push_back(edge.dst);
      }
    }
  }

  std::vector<std::vector<NodeId>> result(n);
  for (NodeId v = 0; v < n; ++v) {
    for (auto i = in[v].find_first(); i != Bits::npos; i = in[v].find_next(i)) {
      result[v].push_back(static_cast<NodeId>(i));
    }
  }
  return ReachingMap(std::move(result));
}

std::vector<NodeId> du_nodes(const Cfg& g, const ReachingMap& rm, NodeId n,
                             const std::vector<VarId>& vars) {
  std::vector<NodeId> out;
  for (NodeId d : rm.reaching(n)) {
    if (std::binary_search(vars.begin(), vars.end(), g.node(d).def)) {
      out.push_back(d);
    }
  }
  return out;
}

std::vector<VarId> resolve_vars(const Cfg& g, const std::set<std::string>& vars) {
  std::vector<VarId> out;
  for (const auto& v : vars) {
    auto id = g.var_id(v);
    if (!id) throw UnknownVariable(v);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<VarId> known_vars(const Cfg& g, const std::set<std::string>& vars) {
  std::vector<VarId> out;
  for (const auto& v : vars) {
    if (auto id = g.var_id(v)) out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::set<Definition> du(const Cfg& g, const ReachingMap& rm, Label at,
                        const std::set<std::string>& vars,
                        std::vector<std::string>* unknown) {
  if (unknown) {
    for (const auto& v : vars) {
      if (!g.var_id(v)) unknown->push_back(v);
    }
  }
  std::set<Definition> out;
  for (NodeId d : du_nodes(g, rm, g.at(at), known_vars(g, vars))) {
    out.insert(Definition{g.label(d), g.var_name(g.node(d).def)});
  }
  return out;
}

std::set<Definition> du(const Cfg& g, const ReachingMap& rm,
                        const SlicingCriterion& c,
                        std::vector<std::string>* unknown) {
  return du(g, rm, c.location, c.vars, unknown);
}

std::set<std::string> refs(const Statement& s) { return statement_refs(s); }

SlicingCriterion lv(const Statement& s) {
  return SlicingCriterion{s.label, refs(s)};
}

}  // namespace dslice
