#include <gtest/gtest.h>

#include "hecke/errors.hpp"
#include "hecke/structure.hpp"
#include "support.hpp"

using namespace hecke;
using testkit::make_graph;

TEST(Graph, JsonRoundTripAndDeterminism) {
  for (auto [q, div] : std::vector<std::pair<unsigned, std::string>>{{2, "x:1"}, {3, ""}, {2, "x:1,y:1"}, {4, "x:1"}}) {
    const auto G = make_graph(q, div, "x", 5);
    const std::string j = export_json(*G);
    EXPECT_EQ(parse_json(j), *G);
    EXPECT_EQ(export_json(parse_json(j)), j);
    EXPECT_EQ(export_json(*make_graph(q, div, "x", 5)), j);
    EXPECT_EQ(export_dot(*G), export_dot(*make_graph(q, div, "x", 5)));
  }
}

TEST(Graph, BuildersAgree) {
  for (auto [q, div] : std::vector<std::pair<unsigned, std::string>>{{2, "x:1"}, {3, "x:1,y:1"}, {2, "y:2"}}) {
    const auto a = make_graph(q, div, "x", 6, Builder::bruteforce);
    const auto b = make_graph(q, div, "x", 6, Builder::hybrid);
    EXPECT_EQ(a->vertices(), b->vertices());
    EXPECT_EQ(a->edges(), b->edges()) << q << " " << div;
  }
}

TEST(Graph, ParseRejectsCorruption) {
  const std::string j = export_json(*make_graph(2, "x:1", "x", 4));
  auto bad = nlohmann::json::parse(j);
  bad["edges"][0]["dst"] = 999;
  EXPECT_THROW(parse_json(bad.dump()), InvariantError);
  auto bad_level = nlohmann::json::parse(j);
  bad_level["vertices"][1]["level"] = "1,1,1,1";  // singular
  EXPECT_ANY_THROW(parse_json(bad_level.dump()));
}

TEST(Graph, EmptyWindowExport) {
  const auto base = make_graph(2, "", "x", 0);
  const HeckeGraph G(base->meta(), base->space_ptr(), {}, {}, {});
  EXPECT_EQ(G.num_vertices(), 0u);
  EXPECT_THROW(make_graph(2, "", "x", -1), ConfigError);
  const auto j = nlohmann::json::parse(export_json(G));
  EXPECT_TRUE(j.contains("meta"));
  EXPECT_TRUE(j["vertices"].empty());
  EXPECT_TRUE(j["edges"].empty());
}

TEST(Graph, DotLabelsWorkedExampleMultiplicities) {
  const auto G = make_graph(2, "x:1", "x", 4, Builder::bruteforce);
  const std::string dot = export_dot(*G);
  // c_{1,0} and c_{1,1} send a double edge to c0 (vertex 0).
  EXPECT_NE(dot.find("v2 -> v0 [label=\"2\""), std::string::npos) << dot;
  EXPECT_NE(dot.find("v3 -> v0 [label=\"2\""), std::string::npos) << dot;
}

TEST(Structure, DegreeLawAndCorruptedGraph) {
  const auto G = make_graph(3, "x:1,y:1", "x", 5);
  EXPECT_TRUE(check_degrees(*G).empty());
  auto edges = G->edges();
  edges[3].mult += 1;
  const HeckeGraph bad(G->meta(), G->space_ptr(), G->vertices(), edges, G->boundary());
  const auto v = check_degrees(bad);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].vertex, edges[3].src);
  EXPECT_EQ(v[0].total, v[0].expected + 1);
}

TEST(Structure, CoveringDegreeThree) {
  const auto G = make_graph(2, "x:1,y:1", "x", 7);
  const auto B = make_graph(2, "x:1", "x", 7);
  const auto w = check_covering(*G, *B);
  EXPECT_TRUE(w.ok) << w.counterexample;
  ASSERT_TRUE(w.degree.has_value());
  EXPECT_EQ(*w.degree, 3);
  const auto self = check_covering(*B, *B);
  EXPECT_TRUE(self.ok);
  EXPECT_EQ(self.degree.value_or(-1), 1);
}

TEST(Structure, CorruptedEdgeBreaksCovering) {
  const auto G = make_graph(2, "x:1,y:1", "x", 7);
  const auto B = make_graph(2, "x:1", "x", 7);
  auto edges = G->edges();
  // Redirect one deep edge to another vertex at the same gap.
  const int thr = covering_threshold(G->meta().divisor, G->meta().x);
  for (auto& e : edges) {
    const auto& src = G->vertex(e.src);
    const auto& dst = G->vertex(e.dst);
    if (src.gap <= thr + 1 || dst.gap <= thr + 1) continue;
    for (int w = 0; w < static_cast<int>(G->num_vertices()); ++w)
      if (w != e.dst && G->vertex(w).gap == dst.gap) {
        e.dst = w;
        break;
      }
    break;
  }
  std::sort(edges.begin(), edges.end());
  const HeckeGraph bad(G->meta(), G->space_ptr(), G->vertices(), edges, G->boundary());
  const auto w = check_covering(bad, *B);
  EXPECT_FALSE(w.ok);
  EXPECT_FALSE(w.counterexample.empty());
}

TEST(Structure, FiberCountsMatchOracle) {
  for (const auto& row : testkit::oracle()["fibers"]) {
    const unsigned q = row["q"];
    const auto G = make_graph(q, row["divisor"], "x", 5);
    const auto B = make_graph(q, row["d2"], "x", 5);
    const Divisor D1 = complement_divisor(G->meta().divisor, B->meta().divisor, G->meta().x);
    EXPECT_EQ(fiber_count(q, D1, B->meta().divisor.empty()), mpz_class(row["fiber"].get<long>())) << row.dump();
    const auto p = forgetful_map(*G, *B);
    std::vector<long> fiber(B->num_vertices(), 0);
    for (int w : p)
      if (w >= 0) ++fiber[w];
    const int thr = covering_threshold(G->meta().divisor, G->meta().x);
    for (int w = 0; w < static_cast<int>(B->num_vertices()); ++w)
      if (B->vertex(w).gap > thr) EXPECT_EQ(fiber[w], row["fiber"].get<long>()) << row.dump();
  }
}

TEST(Structure, ComplementNeedsCompatibleDivisors) {
  auto F = FieldCtx::make(2);
  const Point x = parse_point_name(*F, "x");
  EXPECT_THROW(complement_divisor(parse_divisor(*F, "x:1"), parse_divisor(*F, "y:1"), x), ConfigError);
  EXPECT_THROW(complement_divisor(parse_divisor(*F, "x:1,y:1"), Divisor(), x), ConfigError);
}

TEST(Structure, SplittingAwayFromX) {
  const auto G = make_graph(2, "y:1", "x", 6);
  const auto B = make_graph(2, "", "x", 6);
  const auto s = split_components(*G, *B);
  EXPECT_TRUE(s.ok) << s.failure;
  EXPECT_EQ(s.expected, 3);
  EXPECT_EQ(s.components.size(), 3u);
  EXPECT_EQ(s.cross_edges, 0);
}

TEST(Structure, SplittingOverXNeedsTrivialTorus) {
  const auto G = make_graph(3, "x:1,y:1", "x", 5);
  const auto B = make_graph(3, "x:1", "x", 5);
  EXPECT_THROW(split_components(*G, *B), HypothesisError);
}

TEST(Structure, MonodromyOverF4) {
  const auto G = make_graph(4, "x:1,y:1", "x", 6);
  const auto B = make_graph(4, "x:1", "x", 6);
  const auto loops = fundamental_loops(*B, covering_threshold(G->meta().divisor, G->meta().x));
  ASSERT_FALSE(loops.empty());
  std::vector<Fq> ts;
  bool open = false;
  for (const auto& L : loops) {
    const auto rec = monodromy(*G, *B, L);
    EXPECT_FALSE(rec.t_values.empty());
    if (!rec.closes) open = true;
    ts.insert(ts.end(), rec.t_values.begin(), rec.t_values.end());
  }
  EXPECT_TRUE(open);
  EXPECT_EQ(generated_subgroup(*G->field_ptr(), ts).size(), 3u);
  const auto rule = check_transport_rule(*G, G->space().deep_bound());
  EXPECT_GT(rule.edges, 0);
  EXPECT_TRUE(rule.mismatches.empty()) << rule.mismatches.front();
}

TEST(Structure, TrivialWalkHasTrivialMonodromy) {
  const auto G = make_graph(4, "x:1,y:1", "x", 5);
  const auto B = make_graph(4, "x:1", "x", 5);
  ClosedWalk w;
  for (int v = 0; v < static_cast<int>(B->num_vertices()); ++v)
    if (B->vertex(v).gap > 1) {
      w.start = v;
      break;
    }
  const auto rec = monodromy(*G, *B, w);
  EXPECT_TRUE(rec.closes);
  ASSERT_FALSE(rec.t_values.empty());
  EXPECT_EQ(rec.t_values.front(), 1);
}
