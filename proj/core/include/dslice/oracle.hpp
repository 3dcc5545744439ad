#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dslice/dataflow.hpp"
#include "dslice/interp.hpp"
#include "dslice/pdg.hpp"
#include "dslice/slicer.hpp"

namespace dslice {

enum class Verdict { kPass, kFail, kInconclusive, kSkipped };

const char* to_string(Verdict v);

/// Outcome of checking one input.
struct InputReport {
  std::size_t input = 0;
  Verdict verdict = Verdict::kPass;
  bool p2_failed = false;  // data slices: no matching trace
  bool p3_failed = false;  // data slices: a terminating trace diverges
  /// Data slices: resolutions excluded because they did not terminate within
  /// the step budget or faulted.
  std::size_t nonterminating = 0;
  std::size_t faults = 0;
  std::string detail;
};

struct Report {
  std::vector<InputReport> inputs;

  std::size_t count(Verdict v) const;
  std::size_t failures() const { return count(Verdict::kFail); }
  std::size_t inconclusive() const { return count(Verdict::kInconclusive); }
  bool passed() const { return failures() == 0 && inconclusive() == 0; }
  /// 0 pass, 1 failure, 2 inconclusive.
  int exit_code() const;
  std::string summary() const;
};

struct CheckOptions {
  std::size_t step_budget = 10000;
  std::size_t branch_budget = 6;
  /// Defaults to default_probes(original).
  std::optional<std::vector<std::int64_t>> probes;
};

/// Compares trace windows of `original` and `slice` on every input on which
/// the original terminates. `slice` is an ordinary (concrete) subprogram.
/// Inputs on which the original does not terminate are skipped.
Report check_backward(const Program& original, const Program& slice,
                      const SlicingCriterion& c,
                      const std::vector<Input>& inputs,
                      const CheckOptions& opts = {});
/// Builds the subprogram from `s`. Control slices are checked with V = ∅.
Report check_backward(const Program& original, const SliceResult& s,
                      const std::vector<Input>& inputs,
                      const CheckOptions& opts = {});

/// Checks the two data-slice properties on every input on which `original`
/// terminates: some resolution of `slice` reproduces the window exactly, and
/// every terminating resolution agrees with it on the common prefix.
/// Nondeterminism is explored exhaustively up to branch_budget decisions per
/// trace; an unmatched window with truncated branches is inconclusive.
Report check_data(const Program& original, const Program& slice,
                  const SlicingCriterion& c, const std::vector<Input>& inputs,
                  const CheckOptions& opts = {});
Report check_data(const Program& original, const SliceResult& d,
                  const std::vector<Input>& inputs,
                  const CheckOptions& opts = {});

/// Definitional value-impacting set computed by path enumeration. Paths
/// start at the target of a condition's branch edge, follow executable edges
/// without repeating a node or returning to the condition, and end at the
/// criterion. The rules refer to the set being defined, so the result is a
/// set equal to its own rule application, found by iterating from the
/// assignment rules. Throws PathBoundExceeded when a path grows longer than
/// `path_bound` nodes or one round explores more than `max_paths` path steps,
/// and Error when the iteration cycles without a fixpoint.
std::set<Label> vi_oracle(const Cfg& g, const ReachingMap& rm,
                          const SlicingCriterion& c, std::size_t path_bound,
                          std::size_t max_paths = 2000000);

/// SP1: no node has strong transitive dependences on both edges of one
/// condition. Returns the offending (cond, node) pairs.
std::vector<std::pair<NodeId, NodeId>> sp1_violations(const ControlDeps& cd);

/// SP2 via loop-free path enumeration: whenever c ⟶(e) s, every simple path
/// from the other edge of c to s passes through edge e. Returns offending
/// (cond, node) pairs. Throws PathBoundExceeded after `max_steps` steps.
std::vector<std::pair<NodeId, NodeId>> sp2_violations(
    const Cfg& g, const ControlDeps& cd, std::size_t max_steps = 2000000);

}  // namespace dslice
