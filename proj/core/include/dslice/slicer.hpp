#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dslice/pdg.hpp"

namespace dslice {

enum class SliceKind { kBackward, kControl, kData };

struct SliceResult {
  SliceKind kind = SliceKind::kBackward;
  std::set<Label> retained;
  std::set<Label> abstracted_conds;
  std::set<Label> abstracted_assigns;
  SlicingCriterion criterion;
  Abstraction mode = Abstraction::kCond;  // data slices only

  /// retained ∪ abstracted_conds ∪ abstracted_assigns.
  std::set<Label> all() const;
  /// Argument for make_subprogram / emit.
  std::map<Label, Abstraction> abstractions() const;
};

struct SliceOptions {
  /// Follow weak control dependences as well (termination-sensitive).
  bool weak_cd = false;
};

/// Closure over data dependences and strong control dependences from
/// DU(Υ), the criterion node and its controlling conditions. Enclosing
/// conditions of kept statements are kept, and a kept loop keeps every
/// break/continue that targets it. Unknown criterion variables are ignored.
SliceResult backward_slice(const Pdg& pdg, const SlicingCriterion& c,
                           const SliceOptions& opts = {});

/// Backward slice for ⟨l, ∅⟩.
SliceResult control_slice(const Pdg& pdg, const SlicingCriterion& c,
                          const SliceOptions& opts = {});

/// Conditions among tcntrls(t) that the two CVI condition rules accept, given
/// lconds = tcntrls(l).
std::vector<NodeId> get_cvi_conds(NodeId t, const CondSet& lconds,
                                  const ControlDeps& deps);

struct CviOptions {
  /// When set, the next worklist element is drawn at random from this seed
  /// instead of first-in first-out.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Worklist computation of CVI(Υ), criterion node included. Sorted ids.
std::vector<NodeId> compute_cvi_nodes(const Pdg& pdg, NodeId l,
                                      const std::vector<VarId>& vars,
                                      const CviOptions& opts = {});
std::set<Label> compute_cvi(const Pdg& pdg, const SlicingCriterion& c,
                            const CviOptions& opts = {});

/// Conditions with a strong transitive dependence chain to some member of
/// `cvi`, minus `cvi`.
std::vector<NodeId> ac_condition_nodes(const Pdg& pdg,
                                       const std::vector<NodeId>& cvi);
std::set<Label> ac_conditions(const Pdg& pdg, const std::set<Label>& cvi);

/// Data slice. kCond keeps CVI and abstracts AC conditions; kAssign keeps
/// CVI ∪ AC and abstracts the assignments feeding AC conditions. In both
/// modes missing enclosing conditions are added in abstract form, and kept
/// loops keep their break/continue statements.
SliceResult data_slice(const Pdg& pdg, const SlicingCriterion& c,
                       Abstraction mode, const CviOptions& opts = {});

}  // namespace dslice
