#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dslice/cfg.hpp"

namespace dslice {

/// Initial variable values. Variables not listed start at 0; names that do
/// not occur in the program are ignored except when observed by a criterion.
using Input = std::map<std::string, std::int64_t>;
using State = std::map<std::string, std::int64_t>;

struct ExecutionState {
  Label node;
  State state;

  bool operator==(const ExecutionState&) const = default;
};

enum class Outcome {
  kTerminated,       // reached EXIT
  kBudgetExhausted,  // step budget ran out
  kFault,            // division by zero
  kTruncated,        // run_all only: needed more nondeterministic decisions
};

/// One resolution of a nondeterministic statement. Conditions record 1 for
/// the true branch and 0 for the false one.
struct Decision {
  Label at;
  std::int64_t value;

  bool operator==(const Decision&) const = default;
};

/// States are taken before the node executes; states[0] is ENTRY with the
/// initial state and a terminating trace ends at EXIT.
class Trace {
 public:
  Outcome outcome = Outcome::kBudgetExhausted;
  std::vector<Decision> choices;

  bool terminated() const { return outcome == Outcome::kTerminated; }
  std::size_t size() const { return nodes_.size(); }
  Label node(std::size_t i) const { return nodes_[i]; }
  ExecutionState at(std::size_t i) const;
  std::int64_t value(std::size_t i, const std::string& var) const;
  const std::vector<std::string>& vars() const { return *vars_; }

 private:
  friend class Machine;

  std::shared_ptr<const std::vector<std::string>> vars_;
  std::vector<Label> nodes_;
  std::vector<std::vector<std::int64_t>> states_;
  Input input_;
};

/// V-restricted states at each visit to the criterion location.
struct TraceWindow {
  std::vector<State> snapshots;

  bool operator==(const TraceWindow&) const = default;
};

/// Deterministic run of a program without abstract statements. Throws Error
/// if an abstract statement is reached.
Trace run(const Cfg& g, const Input& input, std::size_t budget = 10000);
/// Convenience: inlines and lowers `p` first.
Trace run(const Program& p, const Input& input, std::size_t budget = 10000);

struct EnumOptions {
  std::size_t budget = 10000;
  /// Maximum nondeterministic decisions per trace.
  std::size_t branch_budget = 6;
  /// Values tried for abstract assignments.
  std::vector<std::int64_t> probes{-1, 0, 1};
};

/// Every resolution of the abstract statements, up to the budgets. A leaf
/// that needs one decision more than branch_budget is returned with outcome
/// kTruncated.
std::vector<Trace> run_all(const Cfg& g, const Input& input,
                           const EnumOptions& opts);

/// {-1, 0, 1} plus every integer literal of `p` and its neighbours ±1.
std::vector<std::int64_t> default_probes(const Program& p);

TraceWindow trace_window(const Trace& t, const SlicingCriterion& c);

namespace detail {

/// Compiled form of a Cfg used by the interpreters: expressions resolved to
/// variable ids.
class Executable {
 public:
  explicit Executable(const Cfg& g);

  const Cfg& cfg() const { return g_; }
  /// Evaluates the node's expression. Returns false on division by zero.
  bool eval(NodeId n, const std::vector<std::int64_t>& state,
            std::int64_t& out) const;

 private:
  struct Op {
    enum Kind : std::uint8_t { kLit, kVar, kNeg, kNot, kBin } kind;
    BinaryOp op{};
    std::int64_t value = 0;
    std::uint32_t lhs = 0, rhs = 0;
  };
  std::uint32_t compile(const Expr& e, std::vector<Op>& ops) const;
  bool eval(const std::vector<Op>& ops, std::uint32_t i,
            const std::vector<std::int64_t>& state, std::int64_t& out) const;

  const Cfg& g_;
  std::vector<std::vector<Op>> code_;
  std::vector<std::uint32_t> root_;
};

std::vector<std::int64_t> initial_state(const Cfg& g, const Input& input);

/// Value of `var` for a window snapshot: the state slot when the variable
/// occurs in the program, otherwise its (never modified) input value.
std::int64_t observe(const Cfg& g, const std::vector<std::int64_t>& state,
                     const Input& input, const std::string& var);

}  // namespace detail

}  // namespace dslice
