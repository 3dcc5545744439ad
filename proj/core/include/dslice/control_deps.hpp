#pragma once

#include <compare>
#include <memory>
#include <mutex>
#include <vector>

#include "dslice/cfg.hpp"

namespace dslice {

/// Reflexive post-dominance relations. `weak[n1][n2]` holds when every path
/// from n1 to EXIT contains n2; `strong[n1][n2]` when every infinite path from
/// n1 does.
struct PostDomRelation {
  std::vector<std::vector<bool>> weak;
  std::vector<std::vector<bool>> strong;

  bool weakly(NodeId n1, NodeId n2) const { return weak[n1][n2]; }
  bool strongly(NodeId n1, NodeId n2) const { return strong[n1][n2]; }
};

PostDomRelation post_dominators(const Cfg& g);

enum class CdStrength { kStrong, kWeak };

/// `dependent` is control dependent on the `branch` edge of `cond`.
struct CdEdge {
  NodeId cond;
  bool branch;
  NodeId dependent;
  CdStrength strength;

  auto operator<=>(const CdEdge&) const = default;
};

/// ⟨c, e, b⟩: s depends on c through a chain whose first hop leaves c along
/// edge e. b = true means every hop is a strong dependence.
struct CondTriple {
  NodeId cond;
  bool edge;
  bool strong_only;

  auto operator<=>(const CondTriple&) const = default;
};

/// Transitive dependences of one node, as dense per-(cond, edge) flags.
class CondSet {
 public:
  explicit CondSet(std::size_t n = 0) : flags_(2 * n, 0) {}

  /// c ⟶(e) s.
  bool strong(NodeId c, bool e) const { return flags_[slot(c, e)] & kStrong; }
  /// c ⇝(e) s.
  bool weak(NodeId c, bool e) const { return flags_[slot(c, e)] & kAny; }
  bool has(const CondTriple& t) const {
    return t.strong_only ? strong(t.cond, t.edge) : weak(t.cond, t.edge);
  }
  bool strong_any(NodeId c) const { return strong(c, true) || strong(c, false); }

  /// Distinct conditions with at least one entry, ascending.
  const std::vector<NodeId>& conds() const { return conds_; }
  std::vector<CondTriple> triples() const;

  void add(NodeId c, bool e, bool strong_only);
  void finish();

 private:
  static std::size_t slot(NodeId c, bool e) { return 2 * c + (e ? 0 : 1); }

  static constexpr std::uint8_t kStrong = 1, kAny = 2;

  std::vector<std::uint8_t> flags_;
  std::vector<NodeId> conds_;
};

/// Strong and weak control dependence plus memoized transitive queries.
/// ENTRY is not treated as a condition and neither ENTRY nor EXIT appears as
/// a dependent. Queries are safe to issue concurrently.
class ControlDeps {
 public:
  ControlDeps(const Cfg& g, const PostDomRelation& pd);
  /// From precomputed direct dependences over `num_nodes` nodes.
  ControlDeps(std::size_t num_nodes, std::vector<CdEdge> edges);

  const std::vector<CdEdge>& edges() const { return edges_; }
  /// Direct dependences of `s` (both strengths).
  const std::vector<CdEdge>& incoming(NodeId s) const { return in_[s]; }

  /// conds(s): direct dependences as triples. A strong edge yields both
  /// ⟨c,e,true⟩ and ⟨c,e,false⟩.
  std::vector<CondTriple> conds(NodeId s) const;
  /// tcntrls(s): closure over control-dependence chains, excluding s itself.
  const CondSet& tcntrls(NodeId s) const;

  std::size_t size() const { return in_.size(); }

 private:
  CondSet compute(NodeId s) const;

  std::vector<CdEdge> edges_;
  std::vector<std::vector<CdEdge>> in_;
  mutable std::unique_ptr<std::once_flag[]> once_;
  mutable std::vector<CondSet> memo_;
};

/// Direct control dependences from the definitions, sorted.
std::vector<CdEdge> control_dependence(const Cfg& g, const PostDomRelation& pd);

}  // namespace dslice
