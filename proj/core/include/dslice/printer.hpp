#pragma once

#include <map>
#include <set>
#include <string>

#include "dslice/ast.hpp"

namespace dslice {

struct PrintOptions {
  /// Prefix each statement with `L<n>:` so the text re-parses to the same
  /// labels.
  bool labels = true;
  int indent = 2;
};

std::string print_program(const Program& p, const PrintOptions& opts = {});

/// Prints the subprogram made of `retained` plus the abstracted statements.
/// Abstracted conditions print as `*`, abstracted assignments as `x = *`.
/// Throws StructureViolation when a kept statement's enclosing condition is
/// neither retained nor abstracted.
std::string emit(const Program& p, const std::set<Label>& retained,
                 const std::map<Label, Abstraction>& abstractions,
                 const PrintOptions& opts = {});

}  // namespace dslice
