#include <gtest/gtest.h>

#include "hecke/edges.hpp"
#include "hecke/errors.hpp"
#include "support.hpp"

using namespace hecke;

TEST(Cosets, CountsAndDistinctness) {
  for (unsigned q : {2u, 3u, 4u}) {
    auto F = FieldCtx::make(q);
    for (const char* xs : {"x", "inf"}) {
      const Point x = parse_point_name(*F, xs);
      EXPECT_EQ(coset_reps(F, x, 0).size(), q + 1);
      for (int d : {1, 2}) {
        const auto reps = coset_reps(F, x, d);
        ASSERT_EQ(reps.size(), q);
        for (size_t i = 0; i < reps.size(); ++i)
          for (size_t j = 0; j < reps.size(); ++j) EXPECT_EQ(same_coset(F, x, d, reps[i], reps[j]), i == j);
      }
    }
  }
}

TEST(QBinomial, OracleValuesAndDegreeSum) {
  for (const auto& row : testkit::oracle()["qbinom"]) {
    const int n = row["n"], r = row["r"];
    const mpz_class Q = row["Q"].get<int>();
    const mpz_class expected(row["value"].get<std::string>());
    EXPECT_EQ(qbinom(n, r, Q), expected) << row.dump();
    EXPECT_EQ(qbinom_degree_sum(n, r, Q), expected) << row.dump();
  }
}

TEST(LatticeMoves, MultiplicitiesSumToTheDegree) {
  for (unsigned q : {2u, 3u})
    for (int r : {1, 2})
      for (int n : {2, 3, 4}) {
        mpz_class total = 0;
        for (const auto& m : pgln_moves(n, r, q)) total += m.mult;
        mpz_class Q;
        mpz_ui_pow_ui(Q.get_mpz_t(), q, r);
        EXPECT_EQ(total, qbinom(n, 1, Q)) << q << " " << r << " " << n;
      }
}

namespace {

struct OpCase {
  unsigned q;
  const char* div;
  const char* x;
};

void expect_rule_matches_bruteforce(const OpCase& c, int extra_gaps) {
  auto F = FieldCtx::make(c.q);
  const Point x = parse_point_name(*F, c.x);
  auto S = std::make_shared<const VertexSpace>(F, parse_divisor(*F, c.div), x);
  const HeckeOperator op(S, x);
  const int deep = S->deep_bound();
  for (const auto& v : S->enumerate(std::max(0, deep + 1), deep + extra_gaps)) {
    const auto brute = op.bruteforce(v.gap, v.level);
    const auto rule = op.cusp_rule(v.gap, v.level);
    long long total = 0;
    ASSERT_EQ(brute.size(), rule.size()) << vertex_label(v);
    for (size_t i = 0; i < brute.size(); ++i) {
      EXPECT_EQ(brute[i].target, rule[i].target) << vertex_label(v);
      EXPECT_EQ(brute[i].mult, rule[i].mult) << vertex_label(v);
      total += brute[i].mult;
    }
    EXPECT_EQ(total, op.out_degree()) << vertex_label(v);
  }
}

}  // namespace

TEST(HeckeOperator, CuspRuleAgreesWithBruteForce) {
  for (const OpCase& c : {OpCase{2, "", "x"}, OpCase{2, "x:1", "x"}, OpCase{3, "x:1", "x"}, OpCase{2, "x:2", "x"},
                          OpCase{2, "x:1,y:1", "x"}, OpCase{3, "y:1", "x"}, OpCase{2, "x:1", "t^2+t+1"},
                          OpCase{2, "t^2+t+1:1", "t^2+t+1"}, OpCase{2, "inf:1", "x"}})
    expect_rule_matches_bruteforce(c, 3);
}

TEST(HeckeOperator, CuspRuleRefusesShallowGaps) {
  auto F = FieldCtx::make(2);
  const Point x = parse_point_name(*F, "x");
  auto S = std::make_shared<const VertexSpace>(F, parse_divisor(*F, "x:1,y:1"), x);
  const HeckeOperator op(S, x);
  const auto v = S->enumerate(0, 0).front();
  EXPECT_THROW(op.cusp_rule(v.gap, v.level), HypothesisError);
  EXPECT_THROW(build_graph(F, parse_divisor(*F, "x:1,y:1"), x, 5, Builder::cusp_rule), HypothesisError);
}

TEST(HeckeOperator, OutDegreeLaw) {
  for (unsigned q : {2u, 3u}) {
    auto F = FieldCtx::make(q);
    for (const char* xs : {"x", "inf"}) {
      const Point x = parse_point_name(*F, xs);
      for (const char* div : {"", "x:1", "y:1"}) {
        const Divisor D = parse_divisor(*F, div);
        auto S = std::make_shared<const VertexSpace>(F, D, x);
        const HeckeOperator op(S, x);
        const long long expected = D.mult(x) > 0 ? q : q + 1;
        for (const auto& v : S->enumerate(0, 3)) {
          long long total = 0;
          for (const auto& nb : op.bruteforce(v.gap, v.level)) total += nb.mult;
          EXPECT_EQ(total, expected) << q << " " << xs << " " << div << " " << vertex_label(v);
        }
      }
    }
  }
}
