#pragma once

#include <initializer_list>
#include <ostream>
#include <set>
#include <string>

#include "dslice/dslice.hpp"

namespace dslice {

inline void PrintTo(const TraceWindow& w, std::ostream* os) {
  *os << "[";
  for (std::size_t i = 0; i < w.snapshots.size(); ++i) {
    *os << (i ? ", " : "") << "{";
    bool first = true;
    for (const auto& [k, v] : w.snapshots[i]) {
      *os << (first ? "" : ", ") << k << "=" << v;
      first = false;
    }
    *os << "}";
  }
  *os << "]";
}

}  // namespace dslice

namespace dslice::testing {

inline Pdg pdg_of(const std::string& source) {
  return build_pdg(build_cfg(inline_calls(parse_program(source))));
}

inline NodeId node(const Cfg& g, const std::string& label) {
  return g.at(parse_label(label));
}
inline NodeId node(const Pdg& p, const std::string& label) {
  return node(p.cfg(), label);
}

inline std::set<Label> labels(std::initializer_list<const char*> names) {
  std::set<Label> out;
  for (const char* n : names) out.insert(parse_label(n));
  return out;
}

inline SlicingCriterion crit(const char* at, std::set<std::string> vars) {
  return {parse_label(at), std::move(vars)};
}

inline std::set<Label> to_labels(const Cfg& g, const std::set<NodeId>& ids) {
  std::set<Label> out;
  for (NodeId n : ids) out.insert(g.label(n));
  return out;
}

inline std::string plain(const Program& p, const std::set<Label>& retained,
                         const std::map<Label, Abstraction>& abs = {}) {
  PrintOptions o;
  o.labels = false;
  return emit(p, retained, abs, o);
}

/// Removes all whitespace, for layout-independent comparisons.
inline std::string squash(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\n' && c != '\t') out += c;
  }
  return out;
}

}  // namespace dslice::testing
