#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "dslice/label.hpp"

namespace dslice {

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class UnaryOp { kNeg, kNot };
enum class BinaryOp {
  kAdd, kSub, kMul, kDiv,
  kLt, kLe, kGt, kGe, kEq, kNe,
  kAnd, kOr,
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree. Subtrees are shared between program copies.
struct Expr {
  struct IntLit { std::int64_t value; };
  struct Var { std::string name; };
  struct Unary { UnaryOp op; ExprPtr operand; };
  struct Binary { BinaryOp op; ExprPtr lhs; ExprPtr rhs; };

  std::variant<IntLit, Var, Unary, Binary> node;
};

ExprPtr make_int(std::int64_t value);
ExprPtr make_var(std::string name);
ExprPtr make_unary(UnaryOp op, ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);

void collect_vars(const Expr& e, std::set<std::string>& out);
void collect_literals(const Expr& e, std::set<std::int64_t>& out);
ExprPtr rename_vars(const ExprPtr& e,
                    const std::map<std::string, std::string>& renames);
std::string to_string(const Expr& e);
const char* to_string(BinaryOp op);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Statement;
using Block = std::vector<Statement>;

/// `x = e;` or, with a null value, the abstract assignment `x = *;`.
struct Assign {
  std::string target;
  ExprPtr value;
  bool is_abstract() const { return value == nullptr; }
};

/// `if (e) {..} else {..}`; a null condition prints as `if (*)`.
struct If {
  ExprPtr cond;
  Block then_block;
  Block else_block;
  bool is_abstract() const { return cond == nullptr; }
};

/// `while (e) {..}`; a null condition prints as `while (*)`.
struct While {
  ExprPtr cond;
  Block body;
  bool is_abstract() const { return cond == nullptr; }
};

struct Break {};
struct Continue {};
struct Skip {};

struct Call {
  std::string callee;
  std::vector<ExprPtr> args;
};

struct Statement {
  using Kind = std::variant<Assign, If, While, Break, Continue, Call, Skip>;

  Label label;
  SourcePos pos;
  Kind kind;

  template <typename T>
  bool is() const { return std::holds_alternative<T>(kind); }
  template <typename T>
  const T& as() const { return std::get<T>(kind); }
  template <typename T>
  T& as() { return std::get<T>(kind); }

  bool is_condition() const { return is<If>() || is<While>(); }
  bool is_jump() const { return is<Break>() || is<Continue>(); }
};

struct Procedure {
  std::string name;
  std::vector<std::string> params;
  Block body;
  SourcePos pos;
};

/// Where an inlined statement came from: the chain of call-site labels
/// (outermost first) and the label of the statement in the callee's source.
struct Origin {
  std::vector<Label> call_chain;
  Label source;
};

/// One expanded call site: the labels of the top-level statements that
/// replaced the call, parameter bindings included, in order.
struct InlineSite {
  std::string callee;
  Label call_site;
  std::vector<Label> statements;
};

struct Program {
  std::vector<Procedure> procedures;
  std::string entry;
  /// Entry procedure came from top-level statements rather than a definition.
  bool implicit_entry = false;
  std::map<Label, Origin> origins;
  std::vector<InlineSite> inline_sites;

  const Procedure& entry_procedure() const;
  Procedure& entry_procedure();
  const Procedure* find_procedure(const std::string& name) const;

  const Statement* find_statement(Label label) const;
  /// Every statement label in textual order, across all procedures.
  std::vector<Label> labels() const;
  Label max_label() const;
  std::size_t statement_count() const;
};

/// ⟨l, V⟩: the values of `vars` just before the statement at `location`.
struct SlicingCriterion {
  Label location;
  std::set<std::string> vars;

  bool operator==(const SlicingCriterion&) const = default;
};

enum class Abstraction { kCond, kAssign };

// ---------------------------------------------------------------------------
// Traversal helpers
// ---------------------------------------------------------------------------

/// Pre-order walk. `parent` is the nearest enclosing statement (If/While) or
/// null at procedure top level.
void walk(const Block& block,
          const std::function<void(const Statement&, const Statement* parent)>&
              visit,
          const Statement* parent = nullptr);
void walk(Block& block, const std::function<void(Statement&)>& visit);

/// Label of the nearest enclosing If/While for every statement in `p`.
std::map<Label, Label> enclosing_conditions(const Program& p);

/// Innermost enclosing loop of every Break/Continue in `p`.
std::map<Label, Label> jump_targets(const Program& p);

/// Variables read by the statement itself (not by nested blocks).
std::set<std::string> statement_refs(const Statement& s);
/// False for a jump, and for an if whose branches both end in a jump. A
/// statement following one that does not complete normally is unreachable.
bool completes_normally(const Statement& s);

std::set<std::string> program_variables(const Program& p);
std::set<std::int64_t> program_literals(const Program& p);

}  // namespace dslice
