#include "dslice/stats.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>

#include "dslice/cfg.hpp"
#include "dslice/pdg.hpp"
#include "dslice/slicer.hpp"

namespace dslice {

std::vector<StatsCriterion> select_criteria(const Program& inlined,
                                            std::uint64_t seed,
                                            std::size_t cap) {
  std::vector<StatsCriterion> out;
  for (const auto& site : inlined.inline_sites) {
    if (site.statements.empty()) continue;
    // The body's top-level statements are listed in order; a body that ends
    // in an assignment returns that variable.
    const Statement* last = inlined.find_statement(site.statements.back());
    if (!last || !last->is<Assign>()) continue;
    bool seen = std::any_of(out.begin(), out.end(), [&](const StatsCriterion& c) {
      return c.at == InsertPoint::after(last->label);
    });
    if (seen) continue;
    StatsCriterion c;
    c.at = InsertPoint::after(last->label);
    c.vars = {last->as<Assign>().target};
    out.push_back(std::move(c));
  }
  if (out.empty()) {
    const Statement* last_assign = nullptr;
    walk(inlined.entry_procedure().body,
         [&](const Statement& s, const Statement*) {
           if (s.is<Assign>()) last_assign = &s;
         });
    StatsCriterion c;
    c.at = InsertPoint::end_of_entry();
    if (last_assign) c.vars = {last_assign->as<Assign>().target};
    out.push_back(std::move(c));
  }
  std::mt19937_64 rng(seed);
  std::shuffle(out.begin(), out.end(), rng);
  if (out.size() > cap) out.resize(cap);
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

StatsRow compute_stats(const std::string& name, const Program& p,
                       const StatsOptions& opts) {
  StatsRow row;
  row.program = name;
  Program inlined = inline_calls(p);
  row.nodes = inlined.statement_count();

  std::vector<StatsCriterion> picks =
      select_criteria(inlined, opts.seed, opts.max_criteria);
  // All observation points go into one program so a single PDG serves them.
  Program augmented = inlined;
  std::vector<SlicingCriterion> criteria;
  std::set<Label> skips;
  for (const auto& pick : picks) {
    auto [next, c] = augment(augmented, pick.at, pick.vars);
    augmented = std::move(next);
    skips.insert(c.location);
    criteria.push_back(std::move(c));
  }
  row.slices = criteria.size();
  if (criteria.empty()) return row;

  auto size_of = [&](const std::set<Label>& labels) {
    std::size_t n = 0;
    for (Label l : labels) n += skips.count(l) ? 0 : 1;
    return n;
  };

  int repeats = opts.timing ? std::max(1, opts.repeats) : 1;
  double pdg_ms = 0, bs_ms = 0, ds_ms = 0, cs_ms = 0;
  for (int rep = 0; rep < repeats; ++rep) {
    auto start = Clock::now();
    Pdg pdg = build_pdg(build_cfg(augmented));
    pdg_ms += ms_since(start);
    for (const auto& c : criteria) {
      start = Clock::now();
      SliceResult bs = backward_slice(pdg, c);
      bs_ms += ms_since(start);
      start = Clock::now();
      SliceResult ds = data_slice(pdg, c, opts.mode);
      ds_ms += ms_since(start);
      start = Clock::now();
      SliceResult cs = control_slice(pdg, c);
      cs_ms += ms_since(start);
      if (rep == 0) {
        row.bs_sizes.push_back(size_of(bs.all()));
        row.ds_sizes.push_back(size_of(ds.all()));
        row.cs_sizes.push_back(size_of(cs.all()));
      }
    }
  }
  double k = static_cast<double>(criteria.size());
  if (opts.timing) {
    double per_slice_pdg = pdg_ms / repeats / k;
    row.bs_ms = per_slice_pdg + bs_ms / repeats / k;
    row.ds_ms = per_slice_pdg + ds_ms / repeats / k;
    row.cs_ms = per_slice_pdg + cs_ms / repeats / k;
  }

  auto mean = [&](const std::vector<std::size_t>& v) {
    double sum = 0;
    for (auto x : v) sum += static_cast<double>(x);
    return sum / k;
  };
  row.bs_nodes = mean(row.bs_sizes);
  row.ds_nodes = mean(row.ds_sizes);
  row.cs_nodes = mean(row.cs_sizes);
  double total = static_cast<double>(std::max<std::size_t>(row.nodes, 1));
  row.bs_pct = 100.0 * row.bs_nodes / total;
  row.ds_pct = 100.0 * row.ds_nodes / total;
  row.cs_pct = 100.0 * row.cs_nodes / total;
  return row;
}

StatsRow overall(const std::vector<StatsRow>& rows) {
  StatsRow o;
  o.program = "Overall";
  double weight = 0;
  for (const auto& r : rows) {
    double w = static_cast<double>(r.slices);
    weight += w;
    o.nodes += r.nodes;
    o.slices += r.slices;
    o.bs_nodes += w * r.bs_nodes;
    o.ds_nodes += w * r.ds_nodes;
    o.cs_nodes += w * r.cs_nodes;
    o.bs_pct += w * r.bs_pct;
    o.ds_pct += w * r.ds_pct;
    o.cs_pct += w * r.cs_pct;
    o.bs_ms += w * r.bs_ms;
    o.ds_ms += w * r.ds_ms;
    o.cs_ms += w * r.cs_ms;
  }
  if (weight > 0) {
    for (double* f : {&o.bs_nodes, &o.ds_nodes, &o.cs_nodes, &o.bs_pct,
                      &o.ds_pct, &o.cs_pct, &o.bs_ms, &o.ds_ms, &o.cs_ms}) {
      *f /= weight;
    }
  }
  return o;
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string line(const StatsRow& r) {
  return r.program + "," + std::to_string(r.nodes) + "," +
         std::to_string(r.slices) + "," + fixed(r.bs_nodes, 2) + "," +
         fixed(r.ds_nodes, 2) + "," + fixed(r.cs_nodes, 2) + "," +
         fixed(r.bs_pct, 2) + "," + fixed(r.ds_pct, 2) + "," +
         fixed(r.cs_pct, 2) + "," + fixed(r.bs_ms, 3) + "," +
         fixed(r.ds_ms, 3) + "," + fixed(r.cs_ms, 3) + "\n";
}

}  // namespace

std::string to_csv(const std::vector<StatsRow>& rows, bool with_overall) {
  std::string out =
      "program,nodes,slices,bs_nodes,ds_nodes,cs_nodes,bs_pct,ds_pct,cs_pct,"
      "bs_ms,ds_ms,cs_ms\n";
  for (const auto& r : rows) out += line(r);
  if (with_overall && !rows.empty()) out += line(overall(rows));
  return out;
}

}  // namespace dslice
