#include "ast_interp.hpp"

#include <limits>

namespace dslice::testing {
namespace {

struct Fault {};
struct OutOfSteps {};
enum class Flow { kNormal, kBreak, kContinue };

class Interp {
 public:
  Interp(const Program& p, const Input& in, const SlicingCriterion& c,
         std::size_t steps)
      : p_(p), c_(c), steps_(steps) {
    for (const auto& [k, v] : in) globals_[k] = v;
    input_ = in;
  }

  AstRun go() {
    AstRun r;
    frames_.emplace_back();
    try {
      exec(p_.entry_procedure().body);
      r.terminated = true;
    } catch (const Fault&) {
      r.fault = true;
    } catch (const OutOfSteps&) {
    }
    r.window = window_;
    r.final_state = globals_;
    return r;
  }

 private:
  std::int64_t& slot(const std::string& name) {
    auto& frame = frames_.back();
    auto it = frame.find(name);
    if (it != frame.end()) return it->second;
    return globals_[name];
  }

  std::int64_t eval(const Expr& e) {
    if (auto* lit = std::get_if<Expr::IntLit>(&e.node)) return lit->value;
    if (auto* v = std::get_if<Expr::Var>(&e.node)) return slot(v->name);
    if (auto* u = std::get_if<Expr::Unary>(&e.node)) {
      std::int64_t a = eval(*u->operand);
      if (u->op == UnaryOp::kNot) return a == 0;
      return static_cast<std::int64_t>(0ULL - static_cast<std::uint64_t>(a));
    }
    const auto& b = std::get<Expr::Binary>(e.node);
    std::int64_t a = eval(*b.lhs);
    if (b.op == BinaryOp::kAnd && !a) return 0;
    if (b.op == BinaryOp::kOr && a) return 1;
    std::int64_t c = eval(*b.rhs);
    auto ua = static_cast<std::uint64_t>(a), uc = static_cast<std::uint64_t>(c);
    switch (b.op) {
      case BinaryOp::kAdd: return static_cast<std::int64_t>(ua + uc);
      case BinaryOp::kSub: return static_cast<std::int64_t>(ua - uc);
      case BinaryOp::kMul: return static_cast<std::int64_t>(ua * uc);
      case BinaryOp::kDiv:
        if (c == 0) throw Fault{};
        if (c == -1) return static_cast<std::int64_t>(0ULL - ua);
        return a / c;
      case BinaryOp::kLt: return a < c;
      case BinaryOp::kLe: return a <= c;
      case BinaryOp::kGt: return a > c;
      case BinaryOp::kGe: return a >= c;
      case BinaryOp::kEq: return a == c;
      case BinaryOp::kNe: return a != c;
      case BinaryOp::kAnd:
      case BinaryOp::kOr: return c != 0;
    }
    return 0;
  }

  void tick(const Statement& s) {
    if (steps_ == 0) throw OutOfSteps{};
    --steps_;
    if (s.label == c_.location) {
      State snap;
      for (const auto& v : c_.vars) snap[v] = globals_.count(v) ? globals_[v] : 0;
      window_.snapshots.push_back(std::move(snap));
    }
  }

  Flow exec(const Block& b) {
    for (const auto& s : b) {
      Flow f = exec(s);
      if (f != Flow::kNormal) return f;
    }
    return Flow::kNormal;
  }

  Flow exec(const Statement& s) {
    tick(s);
    if (auto* a = std::get_if<Assign>(&s.kind)) {
      slot(a->target) = eval(*a->value);
    } else if (auto* i = std::get_if<If>(&s.kind)) {
      return exec(eval(*i->cond) ? i->then_block : i->else_block);
    } else if (auto* w = std::get_if<While>(&s.kind)) {
      bool first = true;
      while (true) {
        if (!first) tick(s);
        first = false;
        if (!eval(*w->cond)) break;
        if (exec(w->body) == Flow::kBreak) break;
      }
    } else if (s.is<Break>()) {
      return Flow::kBreak;
    } else if (s.is<Continue>()) {
      return Flow::kContinue;
    } else if (auto* call = std::get_if<Call>(&s.kind)) {
      const Procedure* callee = p_.find_procedure(call->callee);
      std::map<std::string, std::int64_t> frame;
      for (std::size_t k = 0; k < call->args.size(); ++k) {
        frame[callee->params[k]] = eval(*call->args[k]);
      }
      frames_.push_back(std::move(frame));
      exec(callee->body);
      frames_.pop_back();
    }
    return Flow::kNormal;
  }

  const Program& p_;
  const SlicingCriterion& c_;
  std::size_t steps_;
  Input input_;
  std::map<std::string, std::int64_t> globals_;
  std::vector<std::map<std::string, std::int64_t>> frames_;
  TraceWindow window_;
};

}  // namespace

AstRun ast_run(const Program& p, const Input& input, const SlicingCriterion& c,
               std::size_t steps) {
  return Interp(p, input, c, steps).go();
}

}  // namespace dslice::testing
