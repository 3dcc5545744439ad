#include "dslice/transform.hpp"

#include <algorithm>

#include "dslice/error.hpp"
#include "dslice/parser.hpp"

namespace dslice {

InsertPoint InsertPoint::parse(const std::string& text) {
  if (text == "end" || text == "eof" || text == "EOF") return end_of_entry();
  if (text.rfind("after:", 0) == 0) {
    try {
      return after(parse_label(text.substr(6)));
    } catch (const std::invalid_argument&) {
      throw BadLocation("malformed location '" + text + "'");
    }
  }
  if (!text.empty() && (text[0] == 'L' || text[0] == 'l')) {
    try {
      return before(parse_label(text));
    } catch (const std::invalid_argument&) {
      throw BadLocation("malformed location '" + text + "'");
    }
  }
  if (!text.empty() &&
      std::all_of(text.begin(), text.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    return before_line(std::stoi(text));
  }
  throw BadLocation("malformed location '" + text +
                    "'; expected a line number, L<n>, after:L<n> or end");
}

namespace {

// Inserts `skip` relative to the first statement matching `match`, searching
// nested blocks in pre-order.
template <typename Match>
bool insert_relative(Block& block, const Match& match, bool after,
                     const Statement& skip) {
  for (std::size_t i = 0; i < block.size(); ++i) {
    if (match(block[i])) {
      if (after && !completes_normally(block[i])) {
        throw BadLocation("the point after " + block[i].label.str() +
                          " is unreachable");
      }
      block.insert(block.begin() + static_cast<std::ptrdiff_t>(after ? i + 1 : i),
                   skip);
      return true;
    }
    Statement& s = block[i];
    if (auto* node = std::get_if<If>(&s.kind)) {
      if (insert_relative(node->then_block, match, after, skip) ||
          insert_relative(node->else_block, match, after, skip)) {
        return true;
      }
    } else if (auto* loop = std::get_if<While>(&s.kind)) {
      if (insert_relative(loop->body, match, after, skip)) return true;
    }
  }
  return false;
}

}  // namespace

std::pair<Program, SlicingCriterion> augment(const Program& p,
                                             const InsertPoint& at,
                                             std::set<std::string> vars) {
  Program out = p;
  Statement skip;
  skip.label = Label{out.max_label().value + 1};
  skip.kind = Skip{};
  Block& body = out.entry_procedure().body;
  bool ok = false;
  switch (at.kind) {
    case InsertPoint::Kind::kEndOfEntry:
      body.push_back(skip);
      ok = true;
      break;
    case InsertPoint::Kind::kBeforeLine:
      ok = insert_relative(
          body, [&](const Statement& s) { return s.pos.line == at.line; },
          false, skip);
      if (!ok) {
        throw BadLocation("no statement of the entry procedure starts on line " +
                          std::to_string(at.line));
      }
      break;
    case InsertPoint::Kind::kBeforeLabel:
    case InsertPoint::Kind::kAfterLabel:
      ok = insert_relative(
          body, [&](const Statement& s) { return s.label == at.label; },
          at.kind == InsertPoint::Kind::kAfterLabel, skip);
      if (!ok) {
        throw BadLocation("statement " + at.label.str() +
                          " is not in the entry procedure");
      }
      break;
  }
  return {std::move(out), SlicingCriterion{skip.label, std::move(vars)}};
}

namespace {

class Inliner {
 public:
  explicit Inliner(const Program& p)
      : src_(p), next_label_(p.max_label().value + 1) {}

  Program run() {
    check_call_graph(src_);
    Program out;
    out.entry = src_.entry;
    out.implicit_entry = src_.implicit_entry;
    out.origins = src_.origins;
    out.inline_sites = src_.inline_sites;
    const Procedure& entry = src_.entry_procedure();
    Procedure proc;
    proc.name = entry.name;
    proc.params = entry.params;
    proc.pos = entry.pos;
    proc.body = expand(entry.body, {}, {}, /*keep_labels=*/true, out);
    out.procedures.push_back(std::move(proc));
    return out;
  }

 private:
  Block expand(const Block& block, const std::vector<Label>& chain,
               const std::map<std::string, std::string>& renames,
               bool keep_labels, Program& out) {
    Block result;
    for (const auto& s : block) {
      if (const auto* call = std::get_if<Call>(&s.kind)) {
        Block expanded = expand_call(s, *call, chain, renames, out);
        for (auto& e : expanded) result.push_back(std::move(e));
        continue;
      }
      Statement copy;
      copy.pos = s.pos;
      copy.label = keep_labels ? s.label : fresh(chain, s.label, out);
      std::visit(
          [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Assign>) {
              auto it = renames.find(k.target);
              copy.kind = Assign{it == renames.end() ? k.target : it->second,
                                 rename_vars(k.value, renames)};
            } else if constexpr (std::is_same_v<T, If>) {
              copy.kind = If{rename_vars(k.cond, renames),
                             expand(k.then_block, chain, renames, keep_labels, out),
                             expand(k.else_block, chain, renames, keep_labels, out)};
            } else if constexpr (std::is_same_v<T, While>) {
              copy.kind = While{rename_vars(k.cond, renames),
                                expand(k.body, chain, renames, keep_labels, out)};
            } else {
              copy.kind = k;
            }
          },
          s.kind);
      result.push_back(std::move(copy));
    }
    return result;
  }

  Block expand_call(const Statement& site, const Call& call,
                    const std::vector<Label>& chain,
                    const std::map<std::string, std::string>& renames,
                    Program& out) {
    const Procedure* callee = src_.find_procedure(call.callee);
    if (!callee) throw Error("call to undefined procedure '" + call.callee + "'");
    std::vector<Label> inner_chain = chain;
    inner_chain.push_back(site.label);
    int site_id = ++site_counter_;

    std::map<std::string, std::string> callee_renames;
    Block result;
    for (std::size_t i = 0; i < callee->params.size(); ++i) {
      std::string fresh_name =
          callee->name + "$" + callee->params[i] + "$" + std::to_string(site_id);
      callee_renames[callee->params[i]] = fresh_name;
      Statement bind;
      bind.pos = site.pos;
      bind.label = fresh(inner_chain, site.label, out);
      bind.kind = Assign{fresh_name, rename_vars(call.args[i], renames)};
      result.push_back(std::move(bind));
    }
    Block body = expand(callee->body, inner_chain, callee_renames,
                        /*keep_labels=*/false, out);
    for (auto& s : body) result.push_back(std::move(s));

    InlineSite record;
    record.callee = callee->name;
    record.call_site = site.label;
    for (const auto& s : result) record.statements.push_back(s.label);
    out.inline_sites.push_back(std::move(record));
    return result;
  }

  Label fresh(const std::vector<Label>& chain, Label source, Program& out) {
    Label l{next_label_++};
    // Re-inlining an inlined program keeps the original source mapping.
    auto prior = src_.origins.find(source);
    out.origins[l] = prior != src_.origins.end() ? prior->second
                                                 : Origin{chain, source};
    return l;
  }

  const Program& src_;
  std::uint32_t next_label_;
  int site_counter_ = 0;
};

}  // namespace

Program inline_calls(const Program& p) { return Inliner(p).run(); }

namespace {

Block filter_block(const Block& block, const std::set<Label>& retained,
                   const std::map<Label, Abstraction>& abstractions,
                   const std::map<Label, Label>& parents,
                   std::set<Label>& emitted) {
  Block out;
  for (const auto& s : block) {
    auto abs = abstractions.find(s.label);
    bool keep = retained.count(s.label) || abs != abstractions.end();
    if (keep) {
      auto parent = parents.find(s.label);
      if (parent != parents.end() && !emitted.count(parent->second)) {
        throw StructureViolation(
            "statement " + s.label.str() + " is kept but its enclosing "
            "condition " + parent->second.str() + " is not",
            s.label);
      }
      emitted.insert(s.label);
    }
    Statement copy;
    copy.label = s.label;
    copy.pos = s.pos;
    std::visit(
        [&](const auto& k) {
          using T = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<T, If>) {
            copy.kind = If{k.cond,
                           filter_block(k.then_block, retained, abstractions,
                                        parents, emitted),
                           filter_block(k.else_block, retained, abstractions,
                                        parents, emitted)};
          } else if constexpr (std::is_same_v<T, While>) {
            copy.kind = While{k.cond, filter_block(k.body, retained,
                                                   abstractions, parents,
                                                   emitted)};
          } else {
            copy.kind = k;
          }
        },
        s.kind);
    if (!keep) continue;
    if (abs != abstractions.end()) {
      if (abs->second == Abstraction::kCond) {
        if (auto* i = std::get_if<If>(&copy.kind)) {
          i->cond = nullptr;
        } else if (auto* w = std::get_if<While>(&copy.kind)) {
          w->cond = nullptr;
        } else {
          throw StructureViolation(
              s.label.str() + " is not a condition and cannot be abstracted",
              s.label);
        }
      } else {
        auto* a = std::get_if<Assign>(&copy.kind);
        if (!a) {
          throw StructureViolation(
              s.label.str() + " is not an assignment and cannot be abstracted",
              s.label);
        }
        a->value = nullptr;
      }
    }
    out.push_back(std::move(copy));
  }
  return out;
}

}  // namespace

Program make_subprogram(const Program& p, const std::set<Label>& retained,
                        const std::map<Label, Abstraction>& abstractions) {
  auto parents = enclosing_conditions(p);
  std::set<Label> emitted;
  Program out;
  out.entry = p.entry;
  out.implicit_entry = p.implicit_entry;
  for (const auto& proc : p.procedures) {
    Procedure copy;
    copy.name = proc.name;
    copy.params = proc.params;
    copy.pos = proc.pos;
    copy.body = filter_block(proc.body, retained, abstractions, parents, emitted);
    out.procedures.push_back(std::move(copy));
  }
  for (const auto& [label, origin] : p.origins) {
    if (emitted.count(label)) out.origins.emplace(label, origin);
  }
  out.inline_sites = p.inline_sites;
  return out;
}

}  // namespace dslice
