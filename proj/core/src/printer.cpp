#include "dslice/printer.hpp"

#include <sstream>

#include "dslice/transform.hpp"

namespace dslice {
namespace {

class Printer {
 public:
  explicit Printer(const PrintOptions& opts) : opts_(opts) {}

  void procedure(const Procedure& proc) {
    os_ << proc.name << "(";
    for (std::size_t i = 0; i < proc.params.size(); ++i) {
      if (i) os_ << ", ";
      os_ << proc.params[i];
    }
    os_ << ") {\n";
    block(proc.body, 1);
    os_ << "}\n";
  }

  void block(const Block& b, int depth) {
    for (const auto& s : b) statement(s, depth);
  }

  std::string str() const { return os_.str(); }

 private:
  void pad(int depth) { os_ << std::string(depth * opts_.indent, ' '); }

  void header(const Statement& s, int depth) {
    pad(depth);
    if (opts_.labels) os_ << s.label << ": ";
  }

  static std::string cond(const ExprPtr& e) {
    return e ? to_string(*e) : std::string("*");
  }

  void statement(const Statement& s, int depth) {
    header(s, depth);
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, Assign>) {
            os_ << k.target << " = " << cond(k.value) << ";\n";
          } else if constexpr (std::is_same_v<T, If>) {
            os_ << "if (" << cond(k.cond) << ") {\n";
            block(k.then_block, depth + 1);
            pad(depth);
            if (k.else_block.empty()) {
              os_ << "}\n";
            } else {
              os_ << "} else {\n";
              block(k.else_block, depth + 1);
              pad(depth);
              os_ << "}\n";
            }
          } else if constexpr (std::is_same_v<T, While>) {
            os_ << "while (" << cond(k.cond) << ") {\n";
            block(k.body, depth + 1);
            pad(depth);
            os_ << "}\n";
          } else if constexpr (std::is_same_v<T, Break>) {
            os_ << "break;\n";
          } else if constexpr (std::is_same_v<T, Continue>) {
            os_ << "continue;\n";
          } else if constexpr (std::is_same_v<T, Skip>) {
            os_ << "skip;\n";
          } else if constexpr (std::is_same_v<T, Call>) {
            os_ << k.callee << "(";
            for (std::size_t i = 0; i < k.args.size(); ++i) {
              if (i) os_ << ", ";
              os_ << to_string(*k.args[i]);
            }
            os_ << ");\n";
          }
        },
        s.kind);
  }

  const PrintOptions& opts_;
  std::ostringstream os_;
};

}  // namespace

std::string print_program(const Program& p, const PrintOptions& opts) {
  Printer printer(opts);
  if (p.implicit_entry) printer.block(p.entry_procedure().body, 0);
  for (const auto& proc : p.procedures) {
    if (p.implicit_entry && proc.name == p.entry) continue;
    printer.procedure(proc);
  }
  return printer.str();
}

std::string emit(const Program& p, const std::set<Label>& retained,
                 const std::map<Label, Abstraction>& abstractions,
                 const PrintOptions& opts) {
  return print_program(make_subprogram(p, retained, abstractions), opts);
}

}  // namespace dslice
