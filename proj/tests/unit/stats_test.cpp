#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "generator.hpp"
#include "helpers.hpp"

namespace dslice {
namespace {

namespace fs = std::filesystem;

Program inlined(const std::string& source) {
  return inline_calls(parse_program(source));
}

TEST(SelectCriteria, ObservesHelperResults) {
  Program p = inlined(
      "f(a) { if (a > 0) { t = 1; } r = a + t; }\n"
      "g(b) { s = b; if (s > 1) { s = 0; } }\n"
      "main() { f(x); f(y); g(z); w = r; }");
  auto picks = select_criteria(p, 0);
  ASSERT_EQ(picks.size(), 2u);  // one per call of f; g ends in an if
  for (const auto& c : picks) {
    EXPECT_EQ(c.vars, std::set<std::string>{"r"});
    EXPECT_EQ(c.at.kind, InsertPoint::Kind::kAfterLabel);
    const Statement* s = p.find_statement(c.at.label);
    ASSERT_NE(s, nullptr);
    ASSERT_TRUE(s->is<Assign>());
    EXPECT_EQ(s->as<Assign>().target, "r");
  }
  EXPECT_NE(picks[0].at.label, picks[1].at.label);
}

TEST(SelectCriteria, FallsBackToEndOfEntry) {
  Program p = inlined("x = a; if (x > 1) { y = x; } z = 2;");
  auto picks = select_criteria(p, 7);
  ASSERT_EQ(picks.size(), 1u);
  EXPECT_EQ(picks[0].at, InsertPoint::end_of_entry());
  EXPECT_EQ(picks[0].vars, std::set<std::string>{"z"});
}

TEST(SelectCriteria, CapAndSeedDeterminism) {
  std::string src = "h(v) { q = v + 1; }\nmain() {";
  for (int i = 0; i < 15; ++i) src += " h(a" + std::to_string(i) + ");";
  src += " }";
  Program p = inlined(src);
  EXPECT_EQ(select_criteria(p, 3, 100).size(), 15u);
  auto a = select_criteria(p, 3, 4);
  auto b = select_criteria(p, 3, 4);
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].at, b[i].at);
}

TEST(Stats, EmptyCorpusIsHeaderOnly) {
  std::string csv = to_csv({});
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
  EXPECT_EQ(csv.rfind("program,nodes,slices,", 0), 0u);
}

TEST(Stats, SlicesAreContainedInBackwardPerCriterion) {
  std::mt19937_64 rng(11);
  testing::GenOptions g;
  g.max_statements = 30;
  g.procedures = true;
  StatsOptions opts;
  opts.timing = false;
  for (int i = 0; i < 40; ++i) {
    Program p = testing::generate_program(rng, g);
    for (Abstraction mode : {Abstraction::kCond, Abstraction::kAssign}) {
      opts.mode = mode;
      StatsRow row = compute_stats("p", p, opts);
      ASSERT_EQ(row.bs_sizes.size(), row.slices);
      for (std::size_t k = 0; k < row.slices; ++k) {
        EXPECT_LE(row.ds_sizes[k], row.bs_sizes[k]);
        EXPECT_LE(row.cs_sizes[k], row.bs_sizes[k]);
        EXPECT_LE(row.bs_sizes[k], row.nodes);
      }
      EXPECT_EQ(row.bs_ms, 0.0);
    }
  }
}

TEST(Stats, OverallWeightsByCriteria) {
  StatsRow a, b;
  a.program = "a";
  a.slices = 1;
  a.nodes = 10;
  a.bs_nodes = 4;
  b.program = "b";
  b.slices = 3;
  b.nodes = 20;
  b.bs_nodes = 8;
  StatsRow o = overall({a, b});
  EXPECT_EQ(o.program, "Overall");
  EXPECT_EQ(o.slices, 4u);
  EXPECT_DOUBLE_EQ(o.bs_nodes, (4.0 + 3 * 8.0) / 4);
}

TEST(Stats, CorpusCsvIsDeterministic) {
  StatsOptions opts;
  opts.timing = false;
  opts.seed = 5;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(DSLICE_CORPUS_DIR)) {
    if (e.path().extension() == ".mini") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  ASSERT_EQ(files.size(), 20u);
  auto csv_of = [&] {
    std::vector<StatsRow> rows;
    for (const auto& f : files) {
      std::ifstream in(f);
      std::string text((std::istreambuf_iterator<char>(in)), {});
      rows.push_back(compute_stats(f.stem().string(), parse_program(text), opts));
    }
    return to_csv(rows);
  };
  std::string first = csv_of();
  EXPECT_EQ(first, csv_of());
  EXPECT_NE(first.find("\nOverall,"), std::string::npos);
}

}  // namespace
}  // namespace dslice
