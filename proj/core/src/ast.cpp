#include "dslice/ast.hpp"

#include <algorithm>
#include <stdexcept>

#include "dslice/error.hpp"

namespace dslice {

std::string Label::str() const {
  if (is_entry()) return "ENTRY";
  if (is_exit()) return "EXIT";
  return "L" + std::to_string(value);
}

Label parse_label(const std::string& text) {
  if (text == "ENTRY") return kEntryLabel;
  if (text == "EXIT") return kExitLabel;
  std::string digits = text;
  if (!digits.empty() && (digits[0] == 'L' || digits[0] == 'l')) {
    digits.erase(0, 1);
  }
  if (digits.empty() ||
      !std::all_of(digits.begin(), digits.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw std::invalid_argument("malformed label '" + text + "'");
  }
  unsigned long v = std::stoul(digits);
  if (v == 0 || v >= kExitLabel.value) {
    throw std::invalid_argument("label out of range '" + text + "'");
  }
  return Label{static_cast<std::uint32_t>(v)};
}

SyntaxError::SyntaxError(const std::string& message, SourcePos pos)
    : Error(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
            ": " + message),
      pos_(pos) {}

GotoUnsupported::GotoUnsupported(SourcePos pos)
    : SyntaxError("goto is not supported; use structured control flow", pos) {}

// ---------------------------------------------------------------------------

ExprPtr make_int(std::int64_t value) {
  return std::make_shared<const Expr>(Expr{Expr::IntLit{value}});
}

ExprPtr make_var(std::string name) {
  return std::make_shared<const Expr>(Expr{Expr::Var{std::move(name)}});
}

ExprPtr make_unary(UnaryOp op, ExprPtr operand) {
  return std::make_shared<const Expr>(
      Expr{Expr::Unary{op, std::move(operand)}});
}

ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(
      Expr{Expr::Binary{op, std::move(lhs), std::move(rhs)}});
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::Var>) {
          out.insert(n.name);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          collect_vars(*n.operand, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_vars(*n.lhs, out);
          collect_vars(*n.rhs, out);
        }
      },
      e.node);
}

void collect_literals(const Expr& e, std::set<std::int64_t>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          out.insert(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          collect_literals(*n.operand, out);
        } else if constexpr (std::is_same_v<T, Expr::Binary>) {
          collect_literals(*n.lhs, out);
          collect_literals(*n.rhs, out);
        }
      },
      e.node);
}

ExprPtr rename_vars(const ExprPtr& e,
                    const std::map<std::string, std::string>& renames) {
  if (!e || renames.empty()) return e;
  return std::visit(
      [&](const auto& n) -> ExprPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return e;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          auto it = renames.find(n.name);
          return it == renames.end() ? e : make_var(it->second);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          return make_unary(n.op, rename_vars(n.operand, renames));
        } else {
          return make_binary(n.op, rename_vars(n.lhs, renames),
                             rename_vars(n.rhs, renames));
        }
      },
      e->node);
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd: return "+";
    case BinaryOp::kSub: return "-";
    case BinaryOp::kMul: return "*";
    case BinaryOp::kDiv: return "/";
    case BinaryOp::kLt: return "<";
    case BinaryOp::kLe: return "<=";
    case BinaryOp::kGt: return ">";
    case BinaryOp::kGe: return ">=";
    case BinaryOp::kEq: return "==";
    case BinaryOp::kNe: return "!=";
    case BinaryOp::kAnd: return "&&";
    case BinaryOp::kOr: return "||";
  }
  return "?";
}

namespace {

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::kOr: return 1;
    case BinaryOp::kAnd: return 2;
    case BinaryOp::kEq:
    case BinaryOp::kNe: return 3;
    case BinaryOp::kLt:
    case BinaryOp::kLe:
    case BinaryOp::kGt:
    case BinaryOp::kGe: return 4;
    case BinaryOp::kAdd:
    case BinaryOp::kSub: return 5;
    case BinaryOp::kMul:
    case BinaryOp::kDiv: return 6;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 7;

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Expr::Binary>(&e.node)) {
    return precedence(b->op);
  }
  if (std::holds_alternative<Expr::Unary>(e.node)) return kUnaryPrecedence;
  return 8;
}

std::string print(const Expr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          return std::to_string(n.value);
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          std::string inner = print(*n.operand);
          if (precedence(*n.operand) < kUnaryPrecedence ||
              inner.front() == '-') {
            inner = "(" + inner + ")";
          }
          return (n.op == UnaryOp::kNeg ? "-" : "!") + inner;
        } else {
          // Binary operators are left-associative: the right operand needs
          // parentheses at equal precedence.
          int p = precedence(n.op);
          std::string lhs = print(*n.lhs);
          std::string rhs = print(*n.rhs);
          if (precedence(*n.lhs) < p) lhs = "(" + lhs + ")";
          if (precedence(*n.rhs) <= p) rhs = "(" + rhs + ")";
          return lhs + " " + to_string(n.op) + " " + rhs;
        }
      },
      e.node);
}

}  // namespace

std::string to_string(const Expr& e) { return print(e); }

// ---------------------------------------------------------------------------

const Procedure& Program::entry_procedure() const {
  const Procedure* p = find_procedure(entry);
  if (!p) throw Error("entry procedure '" + entry + "' not found");
  return *p;
}

Procedure& Program::entry_procedure() {
  for (auto& proc : procedures) {
    if (proc.name == entry) return proc;
  }
  throw Error("entry procedure '" + entry + "' not found");
}

const Procedure* Program::find_procedure(const std::string& name) const {
  for (const auto& proc : procedures) {
    if (proc.name == name) return &proc;
  }
  return nullptr;
}

const Statement* Program::find_statement(Label label) const {
  const Statement* found = nullptr;
  for (const auto& proc : procedures) {
    walk(proc.body, [&](const Statement& s, const Statement*) {
      if (s.label == label) found = &s;
    });
    if (found) break;
  }
  return found;
}

std::vector<Label> Program::labels() const {
  std::vector<Label> out;
  for (const auto& proc : procedures) {
    walk(proc.body,
         [&](const Statement& s, const Statement*) { out.push_back(s.label); });
  }
  return out;
}

Label Program::max_label() const {
  Label max{0};
  for (Label l : labels()) max = std::max(max, l);
  return max;
}

std::size_t Program::statement_count() const { return labels().size(); }

void walk(const Block& block,
          const std::function<void(const Statement&, const Statement*)>& visit,
          const Statement* parent) {
  for (const auto& s : block) {
    visit(s, parent);
    if (const auto* i = std::get_if<If>(&s.kind)) {
      walk(i->then_block, visit, &s);
      walk(i->else_block, visit, &s);
    } else if (const auto* w = std::get_if<While>(&s.kind)) {
      walk(w->body, visit, &s);
    }
  }
}

void walk(Block& block, const std::function<void(Statement&)>& visit) {
  for (auto& s : block) {
    visit(s);
    if (auto* i = std::get_if<If>(&s.kind)) {
      walk(i->then_block, visit);
      walk(i->else_block, visit);
    } else if (auto* w = std::get_if<While>(&s.kind)) {
      walk(w->body, visit);
    }
  }
}

std::map<Label, Label> enclosing_conditions(const Program& p) {
  std::map<Label, Label> out;
  for (const auto& proc : p.procedures) {
    walk(proc.body, [&](const Statement& s, const Statement* parent) {
      if (parent) out[s.label] = parent->label;
    });
  }
  return out;
}

namespace {

void collect_jump_targets(const Block& block, const Statement* loop,
                          std::map<Label, Label>& out) {
  for (const auto& s : block) {
    if (s.is_jump() && loop) {
      out[s.label] = loop->label;
    } else if (const auto* i = std::get_if<If>(&s.kind)) {
      collect_jump_targets(i->then_block, loop, out);
      collect_jump_targets(i->else_block, loop, out);
    } else if (const auto* w = std::get_if<While>(&s.kind)) {
      collect_jump_targets(w->body, &s, out);
    }
  }
}

}  // namespace

std::map<Label, Label> jump_targets(const Program& p) {
  std::map<Label, Label> out;
  for (const auto& proc : p.procedures) {
    collect_jump_targets(proc.body, nullptr, out);
  }
  return out;
}

std::set<std::string> statement_refs(const Statement& s) {
  std::set<std::string> out;
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Assign>) {
          if (k.value) collect_vars(*k.value, out);
        } else if constexpr (std::is_same_v<T, If> ||
                             std::is_same_v<T, While>) {
          if (k.cond) collect_vars(*k.cond, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : k.args) collect_vars(*a, out);
        }
      },
      s.kind);
  return out;
}

std::set<std::string> program_variables(const Program& p) {
  std::set<std::string> out;
  for (const auto& proc : p.procedures) {
    out.insert(proc.params.begin(), proc.params.end());
    walk(proc.body, [&](const Statement& s, const Statement*) {
      auto refs = statement_refs(s);
      out.insert(refs.begin(), refs.end());
      if (const auto* a = std::get_if<Assign>(&s.kind)) out.insert(a->target);
    });
  }
  return out;
}

std::set<std::int64_t> program_literals(const Program& p) {
  std::set<std::int64_t> out;
  for (const auto& proc : p.procedures) {
    walk(proc.body, [&](const Statement& s, const Statement*) {
      std::visit(
          [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Assign>) {
              if (k.value) collect_literals(*k.value, out);
            } else if constexpr (std::is_same_v<T, If> ||
                                 std::is_same_v<T, While>) {
              if (k.cond) collect_literals(*k.cond, out);
            } else if constexpr (std::is_same_v<T, Call>) {
              for (const auto& a : k.args) collect_literals(*a, out);
            }
          },
          s.kind);
    });
  }
  return out;
}

bool completes_normally(const Statement& s) {
  if (s.is_jump()) return false;
  if (const auto* i = std::get_if<If>(&s.kind)) {
    auto block_completes = [](const Block& b) {
      return std::all_of(b.begin(), b.end(),
                         [](const Statement& t) { return completes_normally(t); });
    };
    return block_completes(i->then_block) || block_completes(i->else_block);
  }
  return true;
}

}  // namespace dslice
