#pragma once

#include <string_view>

#include "dslice/ast.hpp"

namespace dslice {

/// Parses a `.mini` source file.
///
/// Statements may carry an explicit `L<n>:` prefix (the printer emits one);
/// unlabeled statements receive fresh labels in textual order, numbered after
/// the largest explicit label. Top-level statements form an implicit `main`.
///
/// Throws SyntaxError (with line/column), GotoUnsupported or RecursionError.
Program parse_program(std::string_view text);

/// Rejects recursive call cycles. Called by parse_program and inline_calls.
void check_call_graph(const Program& p);

}  // namespace dslice
