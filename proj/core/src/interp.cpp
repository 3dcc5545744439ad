#include "dslice/interp.hpp"

#include <algorithm>
#include <limits>

#include "dslice/error.hpp"
#include "dslice/transform.hpp"

namespace dslice {

ExecutionState Trace::at(std::size_t i) const {
  ExecutionState s;
  s.node = nodes_[i];
  for (std::size_t v = 0; v < vars_->size(); ++v) {
    s.state[(*vars_)[v]] = states_[i][v];
  }
  return s;
}

std::int64_t Trace::value(std::size_t i, const std::string& var) const {
  auto it = std::lower_bound(vars_->begin(), vars_->end(), var);
  if (it != vars_->end() && *it == var) {
    return states_[i][static_cast<std::size_t>(it - vars_->begin())];
  }
  auto in = input_.find(var);
  return in == input_.end() ? 0 : in->second;
}

namespace detail {
namespace {

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                   static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

}  // namespace

Executable::Executable(const Cfg& g)
    : g_(g), code_(g.size()), root_(g.size(), 0) {
  for (NodeId n = 0; n < g.size(); ++n) {
    if (g.node(n).expr) root_[n] = compile(*g.node(n).expr, code_[n]);
  }
}

std::uint32_t Executable::compile(const Expr& e, std::vector<Op>& ops) const {
  Op op{};
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Expr::IntLit>) {
          op.kind = Op::kLit;
          op.value = k.value;
        } else if constexpr (std::is_same_v<T, Expr::Var>) {
          op.kind = Op::kVar;
          op.lhs = *g_.var_id(k.name);
        } else if constexpr (std::is_same_v<T, Expr::Unary>) {
          op.kind = k.op == UnaryOp::kNeg ? Op::kNeg : Op::kNot;
          op.lhs = compile(*k.operand, ops);
        } else {
          op.kind = Op::kBin;
          op.op = k.op;
          op.lhs = compile(*k.lhs, ops);
          op.rhs = compile(*k.rhs, ops);
        }
      },
      e.node);
  ops.push_back(op);
  return static_cast<std::uint32_t>(ops.size() - 1);
}

bool Executable::eval(NodeId n, const std::vector<std::int64_t>& state,
                      std::int64_t& out) const {
  return eval(code_[n], root_[n], state, out);
}

bool Executable::eval(const std::vector<Op>& ops, std::uint32_t i,
                      const std::vector<std::int64_t>& state,
                      std::int64_t& out) const {
  const Op& op = ops[i];
  std::int64_t a = 0, b = 0;
  switch (op.kind) {
    case Op::kLit: out = op.value; return true;
    case Op::kVar: out = state[op.lhs]; return true;
    case Op::kNeg:
      if (!eval(ops, op.lhs, state, a)) return false;
      out = wrap_sub(0, a);
      return true;
    case Op::kNot:
      if (!eval(ops, op.lhs, state, a)) return false;
      out = a == 0;
      return true;
    case Op::kBin: break;
  }
  if (!eval(ops, op.lhs, state, a)) return false;
  // Short-circuit connectives.
  if (op.op == BinaryOp::kAnd && a == 0) { out = 0; return true; }
  if (op.op == BinaryOp::kOr && a != 0) { out = 1; return true; }
  if (!eval(ops, op.rhs, state, b)) return false;
  switch (op.op) {
    case BinaryOp::kAdd: out = wrap_add(a, b); break;
    case BinaryOp::kSub: out = wrap_sub(a, b); break;
    case BinaryOp::kMul: out = wrap_mul(a, b); break;
    case BinaryOp::kDiv:
      if (b == 0) return false;
      if (a == std::numeric_limits<std::int64_t>::min() && b == -1) {
        out = a;
      } else {
        out = a / b;
      }
      break;
    case BinaryOp::kLt: out = a < b; break;
    case BinaryOp::kLe: out = a <= b; break;
    case BinaryOp::kGt: out = a > b; break;
    case BinaryOp::kGe: out = a >= b; break;
    case BinaryOp::kEq: out = a == b; break;
    case BinaryOp::kNe: out = a != b; break;
    case BinaryOp::kAnd:
    case BinaryOp::kOr: out = b != 0; break;
  }
  return true;
}

std::vector<std::int64_t> initial_state(const Cfg& g, const Input& input) {
  std::vector<std::int64_t> state(g.num_vars(), 0);
  for (const auto& [name, value] : input) {
    if (auto v = g.var_id(name)) state[*v] = value;
  }
  return state;
}

std::int64_t observe(const Cfg& g, const std::vector<std::int64_t>& state,
                     const Input& input, const std::string& var) {
  if (auto v = g.var_id(var)) return state[*v];
  auto it = input.find(var);
  return it == input.end() ? 0 : it->second;
}

}  // namespace detail

/// Shared stepping logic for run and run_all.
class Machine {
 public:
  Machine(const Cfg& g, const Input& input)
      : exe_(g),
        input_(input),
        vars_(std::make_shared<const std::vector<std::string>>(g.var_names())) {}

  Trace start() const {
    Trace t;
    t.vars_ = vars_;
    t.input_ = input_;
    t.nodes_.push_back(kEntryLabel);
    t.states_.push_back(detail::initial_state(exe_.cfg(), input_));
    return t;
  }

  NodeId current(const Trace& t) const { return exe_.cfg().at(t.nodes_.back()); }

  enum class Step { kMoved, kExit, kFault, kNondet };

  // Executes the current node of `t` and appends the successor state. For an
  // abstract statement, `choice` supplies the resolution; without one the
  // step reports kNondet and leaves `t` unchanged.
  Step step(Trace& t, const std::int64_t* choice) const {
    const Cfg& g = exe_.cfg();
    NodeId n = current(t);
    if (n == kExitNode) return Step::kExit;
    const CfgNode& node = g.node(n);
    std::vector<std::int64_t> state = t.states_.back();
    NodeId next = kNoNode;
    switch (node.kind) {
      case NodeKind::kEntry:
        next = g.successor(n);
        break;
      case NodeKind::kAssign: {
        std::int64_t v = 0;
        if (node.is_abstract) {
          if (!choice) return Step::kNondet;
          v = *choice;
          t.choices.push_back({node.label, v});
        } else if (!exe_.eval(n, state, v)) {
          return Step::kFault;
        }
        state[node.def] = v;
        next = g.successor(n);
        break;
      }
      case NodeKind::kCond: {
        std::int64_t v = 0;
        if (node.is_abstract) {
          if (!choice) return Step::kNondet;
          v = *choice;
          t.choices.push_back({node.label, v != 0});
        } else if (!exe_.eval(n, state, v)) {
          return Step::kFault;
        }
        next = g.successor(n, v != 0 ? EdgeKind::kTrue : EdgeKind::kFalse);
        break;
      }
      default:
        next = g.successor(n);
        break;
    }
    t.nodes_.push_back(g.label(next));
    t.states_.push_back(std::move(state));
    return Step::kMoved;
  }

  bool is_assign(const Trace& t) const {
    return exe_.cfg().node(current(t)).kind == NodeKind::kAssign;
  }

 private:
  detail::Executable exe_;
  Input input_;
  std::shared_ptr<const std::vector<std::string>> vars_;
};

Trace run(const Cfg& g, const Input& input, std::size_t budget) {
  Machine m(g, input);
  Trace t = m.start();
  for (std::size_t steps = 0;; ++steps) {
    if (m.current(t) == kExitNode) {
      t.outcome = Outcome::kTerminated;
      return t;
    }
    if (steps >= budget) {
      t.outcome = Outcome::kBudgetExhausted;
      return t;
    }
    switch (m.step(t, nullptr)) {
      case Machine::Step::kMoved: break;
      case Machine::Step::kExit: t.outcome = Outcome::kTerminated; return t;
      case Machine::Step::kFault: t.outcome = Outcome::kFault; return t;
      case Machine::Step::kNondet:
        throw Error("run: abstract statement " + t.node(t.size() - 1).str() +
                    " needs run_all");
    }
  }
}

Trace run(const Program& p, const Input& input, std::size_t budget) {
  Cfg g = build_cfg(inline_calls(p));
  return run(g, input, budget);
}

namespace {

void enumerate(const Machine& m, Trace t, std::size_t steps,
               const EnumOptions& opts, std::vector<Trace>& out) {
  for (;; ++steps) {
    if (m.current(t) == kExitNode) {
      t.outcome = Outcome::kTerminated;
      out.push_back(std::move(t));
      return;
    }
    if (steps >= opts.budget) {
      t.outcome = Outcome::kBudgetExhausted;
      out.push_back(std::move(t));
      return;
    }
    switch (m.step(t, nullptr)) {
      case Machine::Step::kMoved: continue;
      case Machine::Step::kExit:
        t.outcome = Outcome::kTerminated;
        out.push_back(std::move(t));
        return;
      case Machine::Step::kFault:
        t.outcome = Outcome::kFault;
        out.push_back(std::move(t));
        return;
      case Machine::Step::kNondet: break;
    }
    if (t.choices.size() >= opts.branch_budget) {
      t.outcome = Outcome::kTruncated;
      out.push_back(std::move(t));
      return;
    }
    std::vector<std::int64_t> options =
        m.is_assign(t) ? opts.probes : std::vector<std::int64_t>{1, 0};
    for (std::int64_t v : options) {
      Trace branch = t;
      m.step(branch, &v);
      enumerate(m, std::move(branch), steps + 1, opts, out);
    }
    return;
  }
}

}  // namespace

std::vector<Trace> run_all(const Cfg& g, const Input& input,
                           const EnumOptions& opts) {
  Machine m(g, input);
  std::vector<Trace> out;
  enumerate(m, m.start(), 0, opts, out);
  return out;
}

std::vector<std::int64_t> default_probes(const Program& p) {
  std::set<std::int64_t> probes{-1, 0, 1};
  for (std::int64_t lit : program_literals(p)) {
    probes.insert(lit);
    if (lit != std::numeric_limits<std::int64_t>::min()) probes.insert(lit - 1);
    if (lit != std::numeric_limits<std::int64_t>::max()) probes.insert(lit + 1);
  }
  return {probes.begin(), probes.end()};
}

TraceWindow trace_window(const Trace& t, const SlicingCriterion& c) {
  TraceWindow w;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t.node(i) != c.location) continue;
    State snap;
    for (const auto& v : c.vars) snap[v] = t.value(i, v);
    w.snapshots.push_back(std::move(snap));
  }
  return w;
}

}  // namespace dslice
