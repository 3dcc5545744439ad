#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "brute.hpp"
#include "generator.hpp"
#include "helpers.hpp"

namespace dslice {
namespace {

using testing::node;

bool has_cd(const std::vector<CdEdge>& cd, NodeId c, bool branch, NodeId s,
            CdStrength k) {
  return std::count(cd.begin(), cd.end(), CdEdge{c, branch, s, k}) > 0;
}

TEST(PostDom, Diamond) {
  Cfg g = build_cfg(parse_program("if (c) { a = 1; } else { b = 1; } m = 0;"));
  PostDomRelation pd = post_dominators(g);
  NodeId c = node(g, "L1"), m = node(g, "L4");
  EXPECT_TRUE(pd.weakly(c, m));
  EXPECT_TRUE(pd.strongly(c, m));
  EXPECT_FALSE(pd.weakly(c, node(g, "L2")));
}

TEST(PostDom, LoopExitIsOnlyWeak) {
  Cfg g = build_cfg(parse_program("while (c) { b = 1; } m = 0;"));
  PostDomRelation pd = post_dominators(g);
  NodeId c = node(g, "L1"), m = node(g, "L3");
  EXPECT_TRUE(pd.weakly(c, m));
  EXPECT_FALSE(pd.strongly(c, m));
  EXPECT_TRUE(pd.strongly(c, kExitNode) == false || pd.weakly(c, kExitNode));
}

TEST(PostDom, StraightLine) {
  Cfg g = build_cfg(parse_program("s = 1; t = 2;"));
  PostDomRelation pd = post_dominators(g);
  EXPECT_TRUE(pd.strongly(node(g, "L1"), node(g, "L2")));
  EXPECT_FALSE(pd.weakly(node(g, "L2"), node(g, "L1")));
}

TEST(PostDom, MatchesDefinitionsOnRandomPrograms) {
  std::mt19937_64 rng(21);
  testing::GenOptions opts;
  opts.max_statements = 30;
  for (int i = 0; i < 80; ++i) {
    Cfg g = build_cfg(inline_calls(testing::generate_program(rng, opts)));
    PostDomRelation pd = post_dominators(g);
    auto weak = testing::brute_weak_postdom(g);
    auto strong = testing::brute_strong_postdom(g);
    for (NodeId a = 0; a < g.size(); ++a) {
      for (NodeId b = 0; b < g.size(); ++b) {
        ASSERT_EQ(pd.weakly(a, b), weak[a][b]) << g.describe(a) << " / " << g.describe(b);
        ASSERT_EQ(pd.strongly(a, b), strong[a][b]) << g.describe(a) << " / " << g.describe(b);
        if (pd.strongly(a, b)) EXPECT_TRUE(pd.weakly(a, b));
      }
    }
  }
}

TEST(ControlDependence, Diamond) {
  Cfg g = build_cfg(parse_program("if (c) { a = 1; } else { b = 1; } m = 0;"));
  auto cd = control_dependence(g, post_dominators(g));
  NodeId c = node(g, "L1"), a = node(g, "L2"), b = node(g, "L3"),
         m = node(g, "L4");
  EXPECT_TRUE(has_cd(cd, c, true, a, CdStrength::kStrong));
  EXPECT_TRUE(has_cd(cd, c, false, b, CdStrength::kStrong));
  for (const auto& e : cd) EXPECT_NE(e.dependent, m);
}

TEST(ControlDependence, LoopExitEdgeIsWeak) {
  Cfg g = build_cfg(parse_program("while (c) { b = 1; } m = 0;"));
  auto cd = control_dependence(g, post_dominators(g));
  NodeId c = node(g, "L1"), m = node(g, "L3");
  EXPECT_TRUE(has_cd(cd, c, false, m, CdStrength::kWeak));
  EXPECT_FALSE(has_cd(cd, c, false, m, CdStrength::kStrong));
  EXPECT_TRUE(has_cd(cd, c, true, node(g, "L2"), CdStrength::kStrong));
}

TEST(ControlDependence, MatchesDefinitionsOnRandomPrograms) {
  std::mt19937_64 rng(22);
  testing::GenOptions opts;
  opts.max_statements = 30;
  for (int i = 0; i < 80; ++i) {
    Cfg g = build_cfg(inline_calls(testing::generate_program(rng, opts)));
    auto cd = control_dependence(g, post_dominators(g));
    ASSERT_EQ(cd, testing::brute_control_dependence(g));
  }
}

TEST(Tcntrls, SingleIf) {
  Pdg pdg = testing::pdg_of("if (c) { s = 1; }");
  NodeId c = node(pdg, "L1"), s = node(pdg, "L2");
  const CondSet& t = pdg.deps().tcntrls(s);
  EXPECT_TRUE(t.has({c, true, true}));
  EXPECT_FALSE(t.has({c, false, true}));
  EXPECT_FALSE(t.has({c, false, false}));
  EXPECT_EQ(t.conds(), std::vector<NodeId>{c});
}

TEST(Tcntrls, AfterLoopOnlyWeak) {
  Pdg pdg = testing::pdg_of("while (c) { b = 1; } s = 0;");
  NodeId c = node(pdg, "L1"), s = node(pdg, "L3");
  const CondSet& t = pdg.deps().tcntrls(s);
  EXPECT_TRUE(t.has({c, false, false}));
  EXPECT_FALSE(t.strong_any(c));
}

TEST(Tcntrls, NestedChainsThroughBothConditions) {
  Pdg pdg = testing::pdg_of("while (c) { if (d) { s = 1; } }");
  NodeId c = node(pdg, "L1"), d = node(pdg, "L2"), s = node(pdg, "L3");
  const CondSet& t = pdg.deps().tcntrls(s);
  EXPECT_TRUE(t.has({d, true, true}));
  EXPECT_TRUE(t.has({c, true, true}));
}

TEST(Tcntrls, MatchesNaiveClosureOnRandomPrograms) {
  std::mt19937_64 rng(23);
  testing::GenOptions opts;
  opts.max_statements = 40;
  for (int i = 0; i < 80; ++i) {
    Pdg pdg = build_pdg(build_cfg(inline_calls(testing::generate_program(rng, opts))));
    auto brute = testing::brute_tcntrls(pdg.cfg(), pdg.ctrl_edges());
    for (NodeId s = 0; s < pdg.size(); ++s) {
      auto got = pdg.deps().tcntrls(s).triples();
      ASSERT_EQ(std::set<CondTriple>(got.begin(), got.end()), brute[s])
          << pdg.cfg().describe(s);
    }
  }
}

TEST(Tcntrls, ConcurrentQueriesAgree) {
  std::mt19937_64 rng(24);
  Pdg pdg = build_pdg(build_cfg(inline_calls(testing::generate_program(rng))));
  std::vector<std::vector<std::vector<CondTriple>>> seen(4);
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w) {
    workers.emplace_back([&, w] {
      for (NodeId s = 0; s < pdg.size(); ++s) {
        seen[w].push_back(pdg.deps().tcntrls(s).triples());
      }
    });
  }
  for (auto& t : workers) t.join();
  for (int w = 1; w < 4; ++w) EXPECT_EQ(seen[w], seen[0]);
}

TEST(StructuralProperties, Sp1AndSp2OnRandomPrograms) {
  std::mt19937_64 rng(25);
  testing::GenOptions small;
  small.max_statements = 13;
  small.jumps = false;
  for (int i = 0; i < 150; ++i) {
    Pdg pdg = build_pdg(build_cfg(inline_calls(testing::generate_program(rng, small))));
    EXPECT_TRUE(sp1_violations(pdg.deps()).empty());
    EXPECT_TRUE(sp2_violations(pdg.cfg(), pdg.deps()).empty());
  }
}

// A jump nested two ifs deep lets the code after the outer if hang strongly
// off both of its edges, so the two properties only hold for jump-free code.
TEST(StructuralProperties, NestedContinueBreaksSp1) {
  Pdg pdg = testing::pdg_of(
      "while (k < 2) { if (c >= 4) { if (c == 1) { continue; } a = 1; } d = a; }");
  NodeId outer = node(pdg, "L2"), after = node(pdg, "L6");
  const CondSet& t = pdg.deps().tcntrls(after);
  EXPECT_TRUE(t.strong(outer, true));
  EXPECT_TRUE(t.strong(outer, false));
  auto v = sp1_violations(pdg.deps());
  EXPECT_NE(std::find(v.begin(), v.end(), std::pair<NodeId, NodeId>{outer, after}),
            v.end());
  EXPECT_FALSE(sp2_violations(pdg.cfg(), pdg.deps()).empty());
}

TEST(StructuralProperties, Sp1DetectsConflictingChains) {
  // Hand-made dependences where node 3 hangs strongly off both edges of 2.
  ControlDeps deps(4, {{2, true, 3, CdStrength::kStrong},
                       {2, false, 3, CdStrength::kStrong}});
  auto v = sp1_violations(deps);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (std::pair<NodeId, NodeId>{2, 3}));
}

}  // namespace
}  // namespace dslice
