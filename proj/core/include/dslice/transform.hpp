#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "dslice/ast.hpp"

namespace dslice {

/// A statement boundary in the entry procedure.
struct InsertPoint {
  enum class Kind { kBeforeLine, kBeforeLabel, kAfterLabel, kEndOfEntry };

  Kind kind = Kind::kEndOfEntry;
  int line = 0;
  Label label;

  static InsertPoint before_line(int line) {
    return {Kind::kBeforeLine, line, {}};
  }
  static InsertPoint before(Label l) { return {Kind::kBeforeLabel, 0, l}; }
  static InsertPoint after(Label l) { return {Kind::kAfterLabel, 0, l}; }
  static InsertPoint end_of_entry() { return {}; }

  /// "end", "<line>", "L<n>" (before) or "after:L<n>".
  static InsertPoint parse(const std::string& text);

  bool operator==(const InsertPoint&) const = default;
};

/// Inserts a SKIP with a fresh label at `at` and returns the criterion
/// ⟨SKIP, vars⟩. Variables not occurring in the program are permitted.
/// Throws BadLocation when `at` does not resolve to a statement boundary in
/// the entry procedure.
std::pair<Program, SlicingCriterion> augment(const Program& p,
                                             const InsertPoint& at,
                                             std::set<std::string> vars);

/// Expands every call in the entry procedure, recursively. Parameters become
/// fresh variables `<callee>$<param>$<site>` bound by assignments placed
/// before the inlined body. Inlined statements get fresh labels with their
/// origin recorded in Program::origins. Throws RecursionError.
Program inline_calls(const Program& p);

/// Builds the abstract subprogram keeping `retained` and the keys of
/// `abstractions`, preserving nesting. Throws StructureViolation when the
/// enclosing-condition closure does not hold or an abstraction does not fit
/// the statement kind.
Program make_subprogram(const Program& p, const std::set<Label>& retained,
                        const std::map<Label, Abstraction>& abstractions);

}  // namespace dslice
