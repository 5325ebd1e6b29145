#include <gtest/gtest.h>

#include <algorithm>

#include "hecke/errors.hpp"
#include "hecke/factor.hpp"
#include "hecke/linalg.hpp"
#include "hecke/spectral.hpp"
#include "support.hpp"

using namespace hecke;
using testkit::make_graph;
using testkit::rat;
using testkit::spectral_window;

namespace {

ZPoly zpoly_of(const nlohmann::json& coeffs) {
  ZPoly f;
  for (const auto& c : coeffs) f.emplace_back(c.get<std::string>());
  return f;
}

QPoly qpoly_of(const nlohmann::json& coeffs) {
  QPoly f;
  for (const auto& c : coeffs) f.emplace_back(c.get<std::string>());
  return f;
}

LayeredDecomposition decompose(unsigned q, const std::string& div, const std::string& x = "x", int depth = 4) {
  return layer_decompose(make_graph(q, div, x, spectral_window(q, div, x, depth)));
}

// c_{n,inf} is the tower vertex at gap n; c_{n,0} has position 0.
int vertex_at(const HeckeGraph& G, int gap, bool at_infinity) {
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v) {
    const auto& vx = G.vertex(v);
    if (vx.gap != gap) continue;
    const auto p = G.space().position(vx.level);
    if (at_infinity ? !p.has_value() : (p && *p == 0)) return v;
  }
  return -1;
}

}  // namespace

TEST(Exact, NumberFieldArithmetic) {
  const AlgNum r2 = parse_exact("x^2-2:x");
  EXPECT_FALSE(r2.is_rational());
  EXPECT_EQ(r2 * r2, rat(2));
  const AlgNum one(NumberField::rationals(), mpq_class(1));
  const AlgNum a = r2 + one;
  EXPECT_EQ(a * (one - r2), rat(-1));
  EXPECT_EQ(a * a.inverse(), rat(1));
  EXPECT_EQ(parse_exact("t^2-2:t"), r2);
  EXPECT_EQ(parse_exact("x-3:x^2"), rat(9));
  EXPECT_EQ(parse_exact("-7/21"), rat(-1, 3));
  EXPECT_THROW(parse_exact("x^2-4:x"), HypothesisError);
  EXPECT_THROW(parse_exact("1/0"), ConfigError);
  EXPECT_THROW(parse_exact("x^2+:x"), ConfigError);
}

TEST(Exact, PolynomialParsingAndGcd) {
  const QPoly f = qpoly::parse("3/2*x^3-x+1/4");
  EXPECT_EQ(qpoly::parse(qpoly::format(f)), f);
  const QPoly g = qpoly::mul(qpoly::parse("x^2+1"), qpoly::parse("x-5"));
  const QPoly h = qpoly::mul(qpoly::parse("x^2+1"), qpoly::parse("2x+7"));
  EXPECT_EQ(qpoly::gcd(g, h), qpoly::parse("x^2+1"));
}

TEST(Factor, MatchesOracle) {
  for (const auto& row : testkit::oracle()["factor"]) {
    auto got = factor(zpoly_of(row["poly"]));
    std::vector<std::pair<ZPoly, int>> want;
    for (const auto& f : row["factors"]) want.emplace_back(zpoly_of(f["factor"]), f["mult"].get<int>());
    auto key = [](const std::pair<ZPoly, int>& p) { return zpoly::format(p.first) + "^" + std::to_string(p.second); };
    std::vector<std::string> a, b;
    for (const auto& p : got) a.push_back(key(p));
    for (const auto& p : want) b.push_back(key(p));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    EXPECT_EQ(a, b) << row["poly"].dump();
  }
}

TEST(Factor, IrreducibilityOfSwinnertonDyer) {
  EXPECT_TRUE(is_irreducible(zpoly::from_q(qpoly::parse("x^4-10*x^2+1"))));
  EXPECT_FALSE(is_irreducible(zpoly::from_q(qpoly::parse("x^4+4"))));
}

TEST(LinearAlgebra, CharpolyAndEchelon) {
  EXPECT_EQ(charpoly({{2, 1}, {1, 2}}), qpoly::parse("x^2-4x+3"));
  EXPECT_EQ(charpoly({{0, 1, 0}, {0, 0, 1}, {6, -11, 6}}), qpoly::parse("x^3-6x^2+11x-6"));
  Echelon<mpq_class> E(4);  // columns x0, x1, x2 | rhs
  EXPECT_TRUE(E.add_row({{0, 1}, {1, 1}, {3, 3}}));
  EXPECT_TRUE(E.add_row({{1, 1}, {2, -1}, {3, 1}}));
  EXPECT_FALSE(E.add_row({{0, 1}, {2, 1}, {3, 2}}));
  EXPECT_EQ(E.rank(), 2);
  const auto sol = E.solve(3);
  ASSERT_TRUE(sol);
  EXPECT_EQ((*sol)[0] + (*sol)[1], 3);
  EXPECT_EQ((*sol)[1] - (*sol)[2], 1);
  EXPECT_EQ(E.nullspace(3).size(), 1u);
}

TEST(Layers, WorkedExampleDecomposition) {
  const auto L = decompose(2, "x:1");
  EXPECT_TRUE(L.ramified);
  EXPECT_EQ(L.nucleus.size(), 2u);
  for (const auto& l : L.layers) EXPECT_EQ(l.size(), 1u);
  EXPECT_EQ(L.layer_size(), 1);
  EXPECT_TRUE(L.stationary);
  EXPECT_EQ(L.irregular_edges, 0);
  EXPECT_EQ(check_propagative(L), Propagativity::strictly);
}

TEST(Layers, ShallowWindowIsRejected) {
  EXPECT_THROW(layer_decompose(make_graph(2, "x:1", "x", 2)), ConfigError);
}

TEST(Layers, NucleusCharpolyMatchesOracle) {
  for (const auto& row : testkit::oracle()["nucleus"]) {
    const auto L = decompose(row["q"], "x:1", "x", 3);
    const auto sp = nucleus_spectrum(L);
    EXPECT_EQ(sp.charpoly, zpoly_of(row["charpoly"])) << row.dump();
    EXPECT_TRUE(sp.gershgorin_ok);
  }
}

TEST(Layers, IsolatedVertexBreaksPropagativity) {
  const auto L = decompose(2, "x:1");
  ASSERT_FALSE(L.side.empty());
  auto layers = L.layers;
  layers[0].push_back(L.side.front());  // a vertex with no edge into layer 2
  const auto bad = make_decomposition(L.graph, L.nucleus, layers, L.beyond);
  EXPECT_EQ(check_propagative(bad), Propagativity::not_propagative);
  EXPECT_THROW(dim_bounds(rat(5), bad), HypothesisError);
}

TEST(Dims, HypothesesAreEnforced) {
  const auto L = decompose(2, "x:1");
  EXPECT_THROW(dim_bounds(rat(0), L), HypothesisError);
  const auto U = decompose(2, "y:1");
  EXPECT_NO_THROW(dim_bounds(rat(0), U));
}

TEST(Dims, GenericLambdaAttainsLowerBound) {
  for (auto [q, div] : std::vector<std::pair<unsigned, std::string>>{{2, "x:1"}, {2, "y:1"}, {3, "x:2"}, {2, ""}}) {
    const auto L = decompose(q, div);
    for (long lam : {3L, -5L, 11L}) {
      const auto b = dim_bounds(rat(lam), L);
      EXPECT_EQ(b.lower, L.layer_size());
      EXPECT_EQ(b.exact, b.lower) << q << " " << div << " " << lam;
      EXPECT_EQ(b.upper, b.lower + b.nucleus_dim);
    }
  }
}

TEST(Dims, AlgebraicLambdaInsideNucleusSpectrum) {
  const auto L = decompose(2, "x:1");
  const auto b = dim_bounds(parse_exact("x^2-2:x"), L);
  EXPECT_EQ(b.nucleus_dim, 1);
  EXPECT_EQ(b.upper, 2);
  EXPECT_GE(b.exact, b.lower);
  EXPECT_LE(b.exact, b.upper);
}

TEST(Dims, FormulaMatchesOracle) {
  for (const auto& row : testkit::oracle()["dims"]) {
    const unsigned q = row["q"];
    auto F = FieldCtx::make(q);
    const Divisor D = parse_divisor(*F, row["divisor"].get<std::string>());
    const Point x = parse_point_name(*F, row["x"].get<std::string>());
    const auto p = formula_params(D, x, q);
    EXPECT_EQ(dim_formula(p, formula_case(p)).value, mpq_class(row["lower"].get<std::string>())) << row.dump();
  }
}

TEST(Dims, FormulaCaseMismatchIsRejected) {
  auto F = FieldCtx::make(2);
  const auto p = formula_params(parse_divisor(*F, "x:1"), parse_point_name(*F, "x"), 2);
  EXPECT_EQ(formula_case(p), DimCase::ramified_at_x_only);
  EXPECT_THROW(dim_formula(p, DimCase::unramified_at_x), ConfigError);
  EXPECT_THROW(dim_formula(p, DimCase::mixed), ConfigError);
  auto h3 = p;
  h3.h = 3;
  EXPECT_EQ(dim_formula(h3, DimCase::ramified_at_x_only).value, 3);
}

TEST(Propagation, SeedHandling) {
  const auto L = decompose(2, "y:1");
  // One constraint cannot pin down a three-dimensional eigenspace.
  EXPECT_THROW(complete_seed(rat(5), {{L.layers[0][0], rat(1)}}, L), HypothesisError);
  const auto W = decompose(2, "x:1");
  ValueTable seed = complete_seed(rat(3), {{W.nucleus.front(), rat(1)}}, W);
  seed[W.nucleus.front()] = rat(2);  // breaks (lambda - M) v' = A v_1
  EXPECT_THROW(propagate_eigenform(rat(3), seed, W, 3), HypothesisError);
}

TEST(Propagation, EigenEquationHoldsEverywhere) {
  const auto L = decompose(3, "x:1,y:1", "x", 4);
  const AlgNum lam = rat(7, 2);
  ValueTable cons;
  for (size_t j = 0; j < L.layers[0].size(); ++j) cons[L.layers[0][j]] = rat(static_cast<long>(j) + 1);
  const auto pr = propagate_eigenform(lam, complete_seed(lam, cons, L), L, 4);
  EXPECT_EQ(pr.layers_reached, 4);
  const HeckeGraph& G = *L.graph;
  long long checked = 0;
  for (const auto& [v, fv] : pr.values) {
    if (G.is_stub(v)) continue;
    AlgNum sum = rat(0);
    bool known = true;
    for (int e : G.out_edges(v)) {
      const auto it = pr.values.find(G.edges()[e].dst);
      if (it == pr.values.end()) {
        known = false;
        break;
      }
      sum = sum + rat(G.edges()[e].mult) * it->second;
    }
    if (!known) continue;
    EXPECT_EQ(sum, lam * fv) << vertex_label(G.vertex(v));
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Resolvent, RejectsNucleusEigenvalue) {
  const auto L = decompose(2, "x:1");
  try {
    solve_resolvent(parse_exact("x^2-2:x"), {{0, rat(1)}}, L, 3);
    FAIL() << "expected HypothesisError";
  } catch (const HypothesisError& e) {
    EXPECT_NE(std::string(e.what()).find("t^2-2"), std::string::npos) << e.what();
  }
}

TEST(Resolvent, GeneralizedKernelGrowsLinearly) {
  for (auto [q, div] : std::vector<std::pair<unsigned, std::string>>{{2, "y:1"}, {2, "x:2"}}) {
    const auto L = decompose(q, div, "x", 5);
    const auto d = generalized_kernel_dims(rat(5), L, 3);
    const long long one = L.layer_size();
    EXPECT_EQ(d, (std::vector<long long>{one, 2 * one, 3 * one})) << q << " " << div;
  }
}

TEST(Family, InterpolationMatchesClosedForms) {
  for (const auto& row : testkit::oracle()["families"]) {
    const unsigned q = row["q"];
    const int n = row["n"];
    const auto L = layer_decompose(make_graph(q, "x:1", "x", n + 4));
    const int v = vertex_at(*L.graph, n, row["kind"] == "inf");
    ASSERT_GE(v, 0);
    std::vector<mpq_class> samples;
    for (int k = 3; k < 3 + 4 * n + 8; ++k) samples.emplace_back(k);
    const auto fit = eigenform_family(v, samples, {{L.nucleus.front(), rat(1)}}, L);
    ASSERT_TRUE(fit.ok) << fit.failure;
    EXPECT_EQ(fit.f.num, qpoly_of(row["num"])) << row.dump();
    EXPECT_EQ(fit.f.den, qpoly_of(row["den"])) << row.dump();
    EXPECT_EQ(fit.held_out, 3);
    EXPECT_LE(fit.growth, n);
    EXPECT_TRUE(fit.denominator_divides);
  }
}
