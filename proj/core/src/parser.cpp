#include "dslice/parser.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <optional>
#include <set>

#include "dslice/error.hpp"

namespace dslice {
namespace {

enum class Tok {
  kIdent, kInt, kPunct, kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      SourcePos start{line, col};
      advance(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) {
        advance(1);
      }
      if (i + 1 >= src.size()) throw SyntaxError("unterminated comment", start);
      advance(2);
      continue;
    }
    SourcePos pos{line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && is_ident_char(src[j])) ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        ++j;
      }
      out.push_back({Tok::kInt, std::string(src.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    static const char* kTwoChar[] = {"<=", ">=", "==", "!=", "&&", "||"};
    bool matched = false;
    for (const char* op : kTwoChar) {
      if (src.substr(i, 2) == op) {
        out.push_back({Tok::kPunct, op, pos});
        advance(2);
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (std::string_view("(){};,=+-*/<>!:").find(c) != std::string_view::npos) {
      out.push_back({Tok::kPunct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  }
  out.push_back({Tok::kEnd, "", SourcePos{line, col}});
  return out;
}

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {"if",   "else", "while", "break",
                                           "continue", "skip", "goto"};
  return kw;
}

bool is_label_text(const std::string& s) {
  return s.size() >= 2 && s[0] == 'L' &&
         std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
    for (std::size_t k = 0; k + 1 < toks_.size(); ++k) {
      if (toks_[k].kind == Tok::kIdent && is_label_text(toks_[k].text) &&
          toks_[k + 1].text == ":") {
        next_label_ = std::max(next_label_, label_value(toks_[k]) + 1);
      }
    }
  }

  Program parse() {
    Program program;
    Procedure top;
    top.name = "main";
    bool has_top = false;
    while (peek().kind != Tok::kEnd) {
      if (at_procedure_definition()) {
        program.procedures.push_back(parse_procedure());
      } else {
        if (!has_top) top.pos = peek().pos;
        has_top = true;
        top.body.push_back(parse_statement());
      }
    }
    std::set<std::string> names;
    for (const auto& proc : program.procedures) {
      if (!names.insert(proc.name).second) {
        throw SyntaxError("duplicate procedure '" + proc.name + "'", proc.pos);
      }
    }
    if (has_top || program.procedures.empty()) {
      if (names.count("main")) {
        throw SyntaxError(
            "top-level statements conflict with an explicit main()", top.pos);
      }
      program.implicit_entry = true;
      program.entry = "main";
      program.procedures.insert(program.procedures.begin(), std::move(top));
    }
    validate_calls(program);
    check_call_graph(program);
    if (!program.implicit_entry) {
      if (program.find_procedure("main")) {
        program.entry = "main";
      } else if (program.procedures.size() == 1) {
        program.entry = program.procedures.front().name;
      } else {
        throw SyntaxError("no entry procedure; define main()", SourcePos{1, 1});
      }
    }
    for (const auto& proc : program.procedures) check_reachability(proc.body);
    return program;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(const std::string& text) {
    if (peek().kind != Tok::kEnd && peek().kind != Tok::kInt &&
        peek().text == text) {
      take();
      return true;
    }
    return false;
  }
  const Token& expect(const std::string& text) {
    if (peek().text != text || peek().kind == Tok::kInt) {
      throw SyntaxError("expected '" + text + "' but found " + describe(peek()),
                        peek().pos);
    }
    return take();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::kEnd) return "end of input";
    return "'" + t.text + "'";
  }
  std::string expect_ident() {
    const Token& t = peek();
    if (t.kind != Tok::kIdent || keywords().count(t.text)) {
      throw SyntaxError("expected identifier but found " + describe(t), t.pos);
    }
    return take().text;
  }

  static std::uint32_t label_value(const Token& t) {
    unsigned long long v = std::stoull(t.text.substr(1));
    if (v == 0 || v >= std::numeric_limits<std::uint32_t>::max() - 1) {
      throw SyntaxError("label out of range", t.pos);
    }
    return static_cast<std::uint32_t>(v);
  }

  // IDENT '(' ... ')' '{' at top level introduces a procedure.
  bool at_procedure_definition() const {
    if (peek().kind != Tok::kIdent || keywords().count(peek().text) ||
        peek(1).text != "(") {
      return false;
    }
    std::size_t k = pos_ + 2;
    while (k < toks_.size() && toks_[k].text != ")" &&
           toks_[k].kind != Tok::kEnd) {
      ++k;
    }
    return k + 1 < toks_.size() && toks_[k].text == ")" &&
           toks_[k + 1].text == "{";
  }

  Procedure parse_procedure() {
    Procedure proc;
    proc.pos = peek().pos;
    proc.name = expect_ident();
    expect("(");
    std::set<std::string> seen;
    if (!accept(")")) {
      do {
        SourcePos ppos = peek().pos;
        std::string param = expect_ident();
        if (!seen.insert(param).second) {
          throw SyntaxError("duplicate parameter '" + param + "'", ppos);
        }
        proc.params.push_back(param);
      } while (accept(","));
      expect(")");
    }
    proc.body = parse_braced_block(0);
    return proc;
  }

  Block parse_braced_block(int loop_depth) {
    expect("{");
    Block block;
    while (!accept("}")) {
      if (peek().kind == Tok::kEnd) {
        throw SyntaxError("unexpected end of input; missing '}'", peek().pos);
      }
      block.push_back(parse_statement(loop_depth));
    }
    return block;
  }

  Block parse_body(int loop_depth) {
    if (peek().text == "{" && peek().kind == Tok::kPunct) {
      return parse_braced_block(loop_depth);
    }
    Block block;
    block.push_back(parse_statement(loop_depth));
    return block;
  }

  Statement parse_statement(int loop_depth = 0) {
    Statement s;
    std::optional<Label> explicit_label;
    if (peek().kind == Tok::kIdent && is_label_text(peek().text) &&
        peek(1).text == ":") {
      const Token& lt = take();
      explicit_label = Label{label_value(lt)};
      if (!used_labels_.insert(explicit_label->value).second) {
        throw SyntaxError("duplicate label " + lt.text, lt.pos);
      }
      take();  // ':'
    }
    s.label = explicit_label ? *explicit_label : fresh_label();
    s.pos = peek().pos;
    const Token& t = peek();
    if (t.kind != Tok::kIdent) {
      throw SyntaxError("expected a statement but found " + describe(t), t.pos);
    }
    if (t.text == "goto") throw GotoUnsupported(t.pos);
    if (t.text == "skip") {
      take();
      expect(";");
      s.kind = Skip{};
    } else if (t.text == "break" || t.text == "continue") {
      take();
      if (loop_depth == 0) {
        throw SyntaxError("'" + t.text + "' outside of a loop", s.pos);
      }
      expect(";");
      if (t.text == "break") {
        s.kind = Break{};
      } else {
        s.kind = Continue{};
      }
    } else if (t.text == "if") {
      take();
      If node;
      node.cond = parse_condition();
      node.then_block = parse_body(loop_depth);
      if (accept("else")) node.else_block = parse_body(loop_depth);
      s.kind = std::move(node);
    } else if (t.text == "while") {
      take();
      While node;
      node.cond = parse_condition();
      node.body = parse_body(loop_depth + 1);
      s.kind = std::move(node);
    } else if (t.text == "else") {
      throw SyntaxError("'else' without matching 'if'", t.pos);
    } else {
      std::string name = expect_ident();
      if (accept("(")) {
        Call call;
        call.callee = name;
        if (!accept(")")) {
          do {
            call.args.push_back(parse_expr());
          } while (accept(","));
          expect(")");
        }
        expect(";");
        s.kind = std::move(call);
      } else {
        expect("=");
        Assign assign;
        assign.target = name;
        if (peek().text == "*" && peek(1).text == ";") {
          take();
        } else {
          assign.value = parse_expr();
        }
        expect(";");
        s.kind = std::move(assign);
      }
    }
    return s;
  }

  ExprPtr parse_condition() {
    expect("(");
    ExprPtr cond;
    if (peek().text == "*" && peek(1).text == ")") {
      take();
    } else {
      cond = parse_expr();
    }
    expect(")");
    return cond;
  }

  Label fresh_label() {
    while (used_labels_.count(next_label_)) ++next_label_;
    used_labels_.insert(next_label_);
    return Label{next_label_++};
  }

  // Precedence climbing over the binary operator table.
  static std::optional<BinaryOp> binary_op(const Token& t) {
    if (t.kind != Tok::kPunct) return std::nullopt;
    static const std::map<std::string, BinaryOp> ops = {
        {"||", BinaryOp::kOr}, {"&&", BinaryOp::kAnd}, {"==", BinaryOp::kEq},
        {"!=", BinaryOp::kNe}, {"<", BinaryOp::kLt},   {"<=", BinaryOp::kLe},
        {">", BinaryOp::kGt},  {">=", BinaryOp::kGe},  {"+", BinaryOp::kAdd},
        {"-", BinaryOp::kSub}, {"*", BinaryOp::kMul},  {"/", BinaryOp::kDiv},
    };
    auto it = ops.find(t.text);
    if (it == ops.end()) return std::nullopt;
    return it->second;
  }

  static int binding_power(BinaryOp op) {
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

  ExprPtr parse_expr(int min_power = 1) {
    ExprPtr lhs = parse_unary();
    while (true) {
      auto op = binary_op(peek());
      if (!op || binding_power(*op) < min_power) break;
      take();
      ExprPtr rhs = parse_expr(binding_power(*op) + 1);
      lhs = make_binary(*op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (peek().kind == Tok::kPunct && peek().text == "-") {
      take();
      if (peek().kind == Tok::kInt) return parse_int(true);
      return make_unary(UnaryOp::kNeg, parse_unary());
    }
    if (peek().kind == Tok::kPunct && peek().text == "!") {
      take();
      return make_unary(UnaryOp::kNot, parse_unary());
    }
    return parse_primary();
  }

  ExprPtr parse_int(bool negative) {
    const Token& t = take();
    try {
      // Accept the full range including INT64_MIN.
      unsigned long long magnitude = std::stoull(t.text);
      constexpr unsigned long long kMax =
          static_cast<unsigned long long>(std::numeric_limits<std::int64_t>::max());
      if (magnitude > kMax + (negative ? 1 : 0)) throw std::out_of_range("");
      if (negative) {
        return make_int(static_cast<std::int64_t>(0ULL - magnitude));
      }
      return make_int(static_cast<std::int64_t>(magnitude));
    } catch (const std::logic_error&) {
      throw SyntaxError("integer literal out of range", t.pos);
    }
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::kInt) return parse_int(false);
    if (t.kind == Tok::kPunct && t.text == "(") {
      take();
      ExprPtr e = parse_expr();
      expect(")");
      return e;
    }
    if (t.kind == Tok::kIdent && !keywords().count(t.text)) {
      return make_var(take().text);
    }
    throw SyntaxError("expected an expression but found " + describe(t), t.pos);
  }

  void validate_calls(const Program& program) {
    for (const auto& proc : program.procedures) {
      walk(proc.body, [&](const Statement& s, const Statement*) {
        const auto* call = std::get_if<Call>(&s.kind);
        if (!call) return;
        const Procedure* callee = program.find_procedure(call->callee);
        if (!callee) {
          throw SyntaxError("call to undefined procedure '" + call->callee + "'",
                            s.pos);
        }
        if (callee->params.size() != call->args.size()) {
          throw SyntaxError("procedure '" + call->callee + "' expects " +
                                std::to_string(callee->params.size()) +
                                " argument(s)",
                            s.pos);
        }
      });
    }
  }

  static void check_reachability(const Block& block) {
    bool live = true;
    for (const auto& s : block) {
      if (!live) throw SyntaxError("unreachable statement", s.pos);
      live = completes_normally(s);
      if (const auto* i = std::get_if<If>(&s.kind)) {
        check_reachability(i->then_block);
        check_reachability(i->else_block);
      } else if (const auto* w = std::get_if<While>(&s.kind)) {
        check_reachability(w->body);
      }
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::uint32_t next_label_ = 1;
  std::set<std::uint32_t> used_labels_;
};

}  // namespace

Program parse_program(std::string_view text) {
  return Parser(lex(text)).parse();
}

void check_call_graph(const Program& p) {
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& proc : p.procedures) {
    auto& out = edges[proc.name];
    walk(proc.body, [&](const Statement& s, const Statement*) {
      if (const auto* c = std::get_if<Call>(&s.kind)) out.insert(c->callee);
    });
  }
  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark> marks;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> visit = [&](const std::string& f) {
    Mark& m = marks[f];
    if (m == Mark::kDone) return;
    if (m == Mark::kActive) {
      auto it = std::find(stack.begin(), stack.end(), f);
      std::string cycle;
      for (; it != stack.end(); ++it) cycle += *it + " -> ";
      throw RecursionError("recursive call cycle: " + cycle + f);
    }
    m = Mark::kActive;
    stack.push_back(f);
    for (const auto& g : edges[f]) visit(g);
    stack.pop_back();
    marks[f] = Mark::kDone;
  };
  for (const auto& proc : p.procedures) visit(proc.name);
}

}  // namespace dslice
