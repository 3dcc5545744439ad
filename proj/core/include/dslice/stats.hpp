#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "dslice/ast.hpp"
#include "dslice/transform.hpp"

namespace dslice {

/// An observation point chosen for the statistics run. Locations refer to the
/// inlined program.
struct StatsCriterion {
  InsertPoint at;
  std::set<std::string> vars;
};

/// Observation points at the end of each inlined procedure body whose last
/// top-level statement is an assignment, observing its target: the value the
/// procedure returns. Sites sharing that statement yield one point. The end
/// of the entry procedure is used only when there are no such sites.
/// Candidates are shuffled with `seed` and capped at `cap`.
std::vector<StatsCriterion> select_criteria(const Program& inlined,
                                            std::uint64_t seed,
                                            std::size_t cap = 10);

struct StatsOptions {
  std::uint64_t seed = 0;
  std::size_t max_criteria = 10;
  Abstraction mode = Abstraction::kCond;
  /// Timing repetitions; the mean is reported.
  int repeats = 3;
  /// When false no timing is taken and the time columns are zero, which
  /// makes the CSV a pure function of the corpus and the seed.
  bool timing = true;
};

/// One program's averages over its criteria. Sizes are statement counts
/// excluding the inserted observation statements; times are milliseconds
/// per slice and include building the PDG, amortized over the criteria.
struct StatsRow {
  std::string program;
  std::size_t nodes = 0;
  std::size_t slices = 0;
  double bs_nodes = 0, ds_nodes = 0, cs_nodes = 0;
  double bs_pct = 0, ds_pct = 0, cs_pct = 0;
  double bs_ms = 0, ds_ms = 0, cs_ms = 0;
  /// Per-criterion sizes, for invariant checks.
  std::vector<std::size_t> bs_sizes, ds_sizes, cs_sizes;
};

StatsRow compute_stats(const std::string& name, const Program& p,
                       const StatsOptions& opts = {});

/// Criteria-weighted averages of `rows`, labelled "Overall".
StatsRow overall(const std::vector<StatsRow>& rows);

/// Header, one line per row, then the Overall line when rows is non-empty.
std::string to_csv(const std::vector<StatsRow>& rows, bool with_overall = true);

}  // namespace dslice
