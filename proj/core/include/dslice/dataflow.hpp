#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dslice/cfg.hpp"

namespace dslice {

/// A definition site: the assignment at `at` defines `var`.
struct Definition {
  Label at;
  std::string var;

  auto operator<=>(const Definition&) const = default;
};

struct ReachingOptions {
  /// When set, the worklist is processed in a random order drawn from this
  /// seed instead of reverse post-order. The fixpoint is the same.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Definitions reaching the entry of every node. Definition sites are the
/// assignment nodes themselves (one variable per node).
class ReachingMap {
 public:
  ReachingMap() = default;
  ReachingMap(std::vector<std::vector<NodeId>> in) : in_(std::move(in)) {}

  /// Sorted assignment nodes whose definition reaches the entry of `n`.
  const std::vector<NodeId>& reaching(NodeId n) const { return in_[n]; }
  std::size_t size() const { return in_.size(); }

  bool operator==(const ReachingMap&) const = default;

 private:
  std::vector<std::vector<NodeId>> in_;
};

/// Least fixpoint of the gen/kill equations over executable edges. Special
/// edges are ignored.
ReachingMap reaching_definitions(const Cfg& g, const ReachingOptions& opts = {});

/// Reaching definitions of `vars` at node `n`, as sorted node ids.
std::vector<NodeId> du_nodes(const Cfg& g, const ReachingMap& rm, NodeId n,
                             const std::vector<VarId>& vars);

/// DU(l, X). Names that do not occur in the program contribute nothing; they
/// are appended to `unknown` when it is given.
std::set<Definition> du(const Cfg& g, const ReachingMap& rm, Label at,
                        const std::set<std::string>& vars,
                        std::vector<std::string>* unknown = nullptr);
std::set<Definition> du(const Cfg& g, const ReachingMap& rm,
                        const SlicingCriterion& c,
                        std::vector<std::string>* unknown = nullptr);

/// Maps variable names to ids, throwing UnknownVariable for the first name
/// that does not occur in the program.
std::vector<VarId> resolve_vars(const Cfg& g, const std::set<std::string>& vars);
/// Same, silently skipping unknown names.
std::vector<VarId> known_vars(const Cfg& g, const std::set<std::string>& vars);

/// REF(s): variables read by the statement's own expression.
std::set<std::string> refs(const Statement& s);
/// LV(s) = ⟨s, REF(s)⟩.
SlicingCriterion lv(const Statement& s);

}  // namespace dslice
