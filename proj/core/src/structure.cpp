#include "hecke/structure.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/connected_components.hpp>

#include "hecke/errors.hpp"

namespace hecke {

long long expected_out_degree(unsigned q, int deg_x, int d_x) {
  long long n = 1;
  for (int i = 0; i < deg_x; ++i) n *= q;
  return d_x >= 1 ? n : n + 1;
}

std::vector<DegreeViolation> check_degrees(const HeckeGraph& G) {
  const int d_x = G.meta().divisor.mult(G.meta().x);
  const long long want = expected_out_degree(G.meta().q, G.meta().x.degree(), d_x);
  std::vector<DegreeViolation> bad;
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v) {
    if (G.is_stub(v)) continue;
    const long long got = G.out_multiplicity(v);
    if (got != want) bad.push_back({v, got, want});
  }
  return bad;
}

int covering_threshold(const Divisor& D, const Point& x) {
  return D.degree() - 2 + (D.mult(x) == 0 ? x.degree() : 0);
}

mpz_class fiber_count(unsigned q, const Divisor& D1, bool d2_zero) {
  mpz_class num = 1, pw;
  mpz_ui_pow_ui(pw.get_mpz_t(), q, 2ul * static_cast<unsigned long>(D1.degree() - D1.reduced_degree()));
  num *= pw;
  for (const auto& e : D1.entries()) {
    mpz_ui_pow_ui(pw.get_mpz_t(), q, 2ul * static_cast<unsigned long>(e.point.degree()));
    num *= pw - 1;
  }
  if (d2_zero) {
    if (!mpz_divisible_ui_p(num.get_mpz_t(), q - 1)) throw InvariantError("fiber count is not integral");
    num /= q - 1;
  }
  return num;
}

Divisor complement_divisor(const Divisor& D, const Divisor& D2, const Point& x) {
  for (const auto& e : D2.entries())
    if (D.mult(e.point) != e.mult)
      throw ConfigError("D2 must agree with D on its support (supports of D1 and D2 are disjoint)");
  Divisor D1 = D;
  for (const auto& e : D2.entries()) D1 = D1.without(e.point);
  if (D1.mult(x) != 0) throw ConfigError("the Hecke point must not lie in supp D1");
  return D1;
}

namespace {

void require_compatible(const HeckeGraph& G, const HeckeGraph& G2) {
  if (G.meta().q != G2.meta().q || G.meta().x != G2.meta().x || G.meta().n_max != G2.meta().n_max)
    throw ConfigError("graphs must share q, x and n_max");
  complement_divisor(G.meta().divisor, G2.meta().divisor, G.meta().x);
}

std::vector<int> window(const HeckeGraph& G, int threshold) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v)
    if (G.vertex(v).gap > threshold) out.push_back(v);
  return out;
}

// Weak components of the window; -1 outside it.
std::vector<int> weak_components(const HeckeGraph& G, int threshold, int& count) {
  using UGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const int n = static_cast<int>(G.num_vertices());
  UGraph g(n);
  for (const auto& e : G.edges())
    if (G.vertex(e.src).gap > threshold && G.vertex(e.dst).gap > threshold) boost::add_edge(e.src, e.dst, g);
  std::vector<int> comp(n);
  boost::connected_components(g, comp.data());
  // Renumber over window vertices only, in order of first appearance.
  std::map<int, int> renumber;
  std::vector<int> out(n, -1);
  for (int v = 0; v < n; ++v) {
    if (G.vertex(v).gap <= threshold) continue;
    auto [it, fresh] = renumber.emplace(comp[v], static_cast<int>(renumber.size()));
    out[v] = it->second;
  }
  count = static_cast<int>(renumber.size());
  return out;
}

std::string edge_label(const HeckeGraph& G, int e) {
  const auto& b = G.edges()[e];
  return vertex_label(G.vertex(b.src)) + " -> " + vertex_label(G.vertex(b.dst)) + " x" + std::to_string(b.mult);
}

}  // namespace

std::vector<int> forgetful_map(const HeckeGraph& G, const HeckeGraph& G2) {
  const LevelRing& R = G.space().ring();
  const LevelRing& R2 = G2.space().ring();
  std::vector<int> where(R2.npoints());
  for (size_t j = 0; j < R2.npoints(); ++j) {
    where[j] = R.index_of(R2.parts()[j].first);
    if (where[j] < 0 || R.parts()[where[j]].second != R2.parts()[j].second)
      throw ConfigError("D2 is not a part of D");
  }
  std::vector<int> out(G.num_vertices(), -1);
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v) {
    const Vertex& vx = G.vertex(v);
    LevelMat m(4 * R2.npoints());
    for (size_t j = 0; j < R2.npoints(); ++j) set_level_at(m, j, level_at(vx.level, where[j]));
    out[v] = G2.id_of(G2.space().canonical_vertex(vx.gap, pgl2_normalize(R2, m)));
  }
  return out;
}

CoveringWitness check_covering(const HeckeGraph& G, const HeckeGraph& G2, std::optional<int> threshold) {
  require_compatible(G, G2);
  CoveringWitness w;
  w.threshold = threshold.value_or(covering_threshold(G.meta().divisor, G.meta().x));
  const int thr = w.threshold;
  w.vertex_map = forgetful_map(G, G2);
  const auto& p = w.vertex_map;
  auto fail = [&](std::string msg) {
    if (w.counterexample.empty()) w.counterexample = std::move(msg);
  };
  auto in2 = [&](int u) { return G2.vertex(u).gap > thr; };

  // Clause 1 and fiber sizes.
  std::map<int, long long> fiber;
  for (int v : window(G, thr)) {
    if (p[v] < 0) {
      fail("no image for " + vertex_label(G.vertex(v)));
      continue;
    }
    ++fiber[p[v]];
  }
  for (int u : window(G2, thr))
    if (!fiber.count(u)) fail("vertex not covered: " + vertex_label(G2.vertex(u)));
  std::set<long long> sizes;
  for (const auto& [u, c] : fiber) sizes.insert(c);
  if (sizes.size() == 1) w.degree = *sizes.begin();

  // Clauses 2 and 3: multiplicities of edges grouped by the image of the far end.
  for (int v : window(G, thr)) {
    const int pv = p[v];
    if (pv < 0) continue;
    for (int dir = 0; dir < 2; ++dir) {
      const bool out = dir == 0;
      std::map<int, EdgePairing> groups;
      for (int e : out ? G.out_edges(v) : G.in_edges(v)) {
        const int far = out ? G.edges()[e].dst : G.edges()[e].src;
        if (G.vertex(far).gap <= thr) continue;
        auto& pr = groups[p[far]];
        pr.v = v;
        pr.w = p[far];
        pr.upstairs.push_back(e);
      }
      for (int e : out ? G2.out_edges(pv) : G2.in_edges(pv)) {
        const int far = out ? G2.edges()[e].dst : G2.edges()[e].src;
        if (!in2(far)) continue;
        auto& pr = groups[far];
        pr.v = v;
        pr.w = far;
        pr.downstairs = e;
      }
      for (auto& [u, pr] : groups) {
        long long up = 0;
        for (int e : pr.upstairs) up += G.edges()[e].mult;
        const long long down = pr.downstairs < 0 ? 0 : G2.edges()[pr.downstairs].mult;
        if (up != down)
          fail(std::string(out ? "out" : "in") + "-edges of " + vertex_label(G.vertex(v)) + " over " +
               vertex_label(G2.vertex(u)) + ": " + std::to_string(up) + " upstairs vs " + std::to_string(down) +
               " downstairs" + (pr.upstairs.empty() ? "" : " (e.g. " + edge_label(G, pr.upstairs.front()) + ")"));
        (out ? w.out_pairs : w.in_pairs).push_back(std::move(pr));
      }
    }
  }
  w.ok = w.counterexample.empty();
  return w;
}

SplitReport split_components(const HeckeGraph& G, const HeckeGraph& G2, std::optional<int> threshold) {
  require_compatible(G, G2);
  const Point& x = G.meta().x;
  const Divisor& D2 = G2.meta().divisor;
  // Over D2 = d_x[x] the fibers are permuted by the torus monodromy, which is trivial only for q = 2.
  if (!D2.empty() && G.meta().q != 2 &&
      std::all_of(D2.entries().begin(), D2.entries().end(), [&](const DivisorEntry& e) { return e.point == x; }))
    throw HypothesisError("splitting needs supp D2 != {x} unless q = 2");
  SplitReport r;
  r.threshold = threshold.value_or(covering_threshold(G.meta().divisor, x));
  const Divisor D1 = complement_divisor(G.meta().divisor, D2, x);
  r.expected = fiber_count(G.meta().q, D1, D2.empty()).get_si();
  auto fail = [&](std::string msg) {
    if (r.failure.empty()) r.failure = std::move(msg);
  };

  const auto p = forgetful_map(G, G2);
  int n_up = 0, n_base = 0;
  const auto comp = weak_components(G, r.threshold, n_up);
  const auto base_comp = weak_components(G2, r.threshold, n_base);
  r.components.assign(n_up, {});
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v)
    if (comp[v] >= 0) r.components[comp[v]].push_back(v);
  r.base_of.assign(n_up, -1);
  r.per_base.assign(n_base, 0);
  std::vector<std::vector<int>> base_members(n_base);
  for (int u = 0; u < static_cast<int>(G2.num_vertices()); ++u)
    if (base_comp[u] >= 0) base_members[base_comp[u]].push_back(u);

  for (const auto& e : G.edges())
    if (comp[e.src] >= 0 && comp[e.dst] >= 0 && comp[e.src] != comp[e.dst]) ++r.cross_edges;
  if (r.cross_edges) fail(std::to_string(r.cross_edges) + " edges between components");

  for (int c = 0; c < n_up; ++c) {
    const auto& members = r.components[c];
    const int b = p[members.front()] < 0 ? -1 : base_comp[p[members.front()]];
    r.base_of[c] = b;
    if (b < 0) {
      fail("component " + std::to_string(c) + " has no base component");
      continue;
    }
    ++r.per_base[b];
    // Isomorphism onto the base component: bijective on vertices, edges preserved with multiplicity.
    std::set<int> image;
    for (int v : members) {
      if (p[v] < 0 || base_comp[p[v]] != b) fail("component " + std::to_string(c) + " spans several base components");
      if (p[v] >= 0) image.insert(p[v]);
    }
    if (image.size() != members.size() || image.size() != base_members[b].size())
      fail("component " + std::to_string(c) + " is not a bijective copy of its base component (" +
           std::to_string(members.size()) + " vertices over " + std::to_string(base_members[b].size()) + ")");
    std::map<std::pair<int, int>, long long> up, down;
    for (int v : members)
      for (int e : G.out_edges(v)) {
        const auto& eb = G.edges()[e];
        if (comp[eb.dst] == c) up[{p[v], p[eb.dst]}] += eb.mult;
      }
    for (int u : base_members[b])
      for (int e : G2.out_edges(u)) {
        const auto& eb = G2.edges()[e];
        if (base_comp[eb.dst] == b) down[{u, eb.dst}] += eb.mult;
      }
    if (up != down) fail("component " + std::to_string(c) + " edges differ from its base component");
  }
  for (int b = 0; b < n_base; ++b)
    if (r.per_base[b] != r.expected)
      fail("base component " + std::to_string(b) + " has " + std::to_string(r.per_base[b]) + " lifts, expected " +
           std::to_string(r.expected));
  r.ok = r.failure.empty();
  return r;
}

namespace {

M2 adjugate(const LocalRing& L, const M2& a) { return M2{a.a22, L.neg(a.a12), L.neg(a.a21), a.a11}; }

}  // namespace

MonodromyRecord monodromy(const HeckeGraph& G, const HeckeGraph& base, const ClosedWalk& walk) {
  const Point& x = G.meta().x;
  const Divisor& D = G.meta().divisor;
  const int d_x = D.mult(x);
  if (d_x < 1) throw HypothesisError("monodromy needs x in supp D");
  if (base.meta().divisor != Divisor({{x, d_x}})) throw ConfigError("base graph must be ramified at d_x [x] only");
  if (G.meta().q != base.meta().q || base.meta().x != x || G.meta().n_max != base.meta().n_max)
    throw ConfigError("graphs must share q, x and n_max");
  const auto p = forgetful_map(G, base);

  MonodromyRecord rec;
  rec.walk = walk;
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v)
    if (p[v] == walk.start) {
      rec.lift_start = v;
      break;
    }
  if (rec.lift_start < 0) throw InvariantError("empty fiber over the walk start");

  int here = walk.start, v = rec.lift_start;
  for (const auto& step : walk.steps) {
    const auto& be = base.edges().at(step.edge);
    if ((step.forward ? be.src : be.dst) != here) throw ConfigError("walk is not connected");
    const int next = step.forward ? be.dst : be.src;
    std::map<int, long long> cand;
    for (int e : step.forward ? G.out_edges(v) : G.in_edges(v)) {
      const auto& ge = G.edges()[e];
      const int far = step.forward ? ge.dst : ge.src;
      if (p[far] == next) cand[far] += ge.mult;
    }
    if (cand.size() != 1)
      throw InvariantError("lift of base edge " + edge_label(base, step.edge) + " from " +
                           vertex_label(G.vertex(v)) + " has " + std::to_string(cand.size()) + " targets");
    if (cand.begin()->second != be.mult) throw InvariantError("lift multiplicity differs from the base edge");
    v = cand.begin()->first;
    here = next;
  }
  if (here != walk.start) throw ConfigError("walk is not closed");
  rec.lift_end = v;
  rec.closes = rec.lift_end == rec.lift_start;

  const FieldCtx& F = *G.field_ptr();
  const LevelRing& R = G.space().ring();
  const int xi = R.index_of(x);
  const LevelMat& a1 = G.vertex(rec.lift_start).level;
  const LevelMat& a2 = G.vertex(rec.lift_end).level;
  const int gap = G.vertex(rec.lift_start).gap;
  if (!G.space().aut(gap).full_unipotent) throw HypothesisError("walk start is not in the deep cusp");

  // Discrepancy on D' is a1^{-1} a2, which has to be upper triangular with a constant diagonal ratio.
  std::optional<Fq> ratio;
  for (size_t i = 0; i < R.npoints(); ++i) {
    if (static_cast<int>(i) == xi) continue;
    const LocalRing& L = R.local(i);
    const M2 delta = m2_mul(L, adjugate(L, level_at(a1, i)), level_at(a2, i));
    if (delta.a21 != 0) throw InvariantError("discrepancy has a lower-triangular part");
    const auto r = L.mul(delta.a11, L.inv(delta.a22));
    if (r >= F.q() || (ratio && *ratio != r)) throw InvariantError("discrepancy is not in T(k)");
    ratio = static_cast<Fq>(r);
  }
  const LocalRing& Lx = R.local(xi);
  const M2 target = m2_normalize(Lx, level_at(a1, xi));
  const M2 from = level_at(a2, xi);
  for (Fq alpha = 1; alpha < F.q(); ++alpha) {
    bool match = false;
    for (std::uint32_t w = 0; w < Lx.size() && !match; ++w)
      match = m2_normalize(Lx, m2_mul(Lx, from, M2{alpha, w, 0, 1})) == target;
    if (match) rec.t_values.push_back(ratio ? F.mul(alpha, *ratio) : Fq{1});
  }
  std::sort(rec.t_values.begin(), rec.t_values.end());
  rec.t_values.erase(std::unique(rec.t_values.begin(), rec.t_values.end()), rec.t_values.end());
  if (rec.t_values.empty()) throw InvariantError("lift end does not match the start at x");
  const bool trivial = std::binary_search(rec.t_values.begin(), rec.t_values.end(), Fq{1});
  if (trivial != rec.closes) throw InvariantError("monodromy triviality disagrees with closing of the lift");
  return rec;
}

std::vector<ClosedWalk> fundamental_loops(const HeckeGraph& base, int threshold) {
  const int n = static_cast<int>(base.num_vertices());
  auto inside = [&](int v) { return base.vertex(v).gap > threshold; };
  std::vector<int> parent(n, -1), parent_edge(n, -1);
  std::vector<bool> seen(n, false), tree(base.edges().size(), false);
  std::vector<int> root(n, -1);
  for (int s = 0; s < n; ++s) {
    if (!inside(s) || seen[s]) continue;
    seen[s] = true;
    root[s] = s;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      auto visit = [&](int e, int far) {
        if (!inside(far) || seen[far]) return;
        seen[far] = true;
        parent[far] = u;
        parent_edge[far] = e;
        root[far] = s;
        tree[e] = true;
        queue.push_back(far);
      };
      for (int e : base.out_edges(u)) visit(e, base.edges()[e].dst);
      for (int e : base.in_edges(u)) visit(e, base.edges()[e].src);
    }
  }
  // Steps from the root down to v.
  auto down_path = [&](int v) {
    std::vector<WalkStep> steps;
    for (; parent[v] >= 0; v = parent[v]) steps.push_back({parent_edge[v], base.edges()[parent_edge[v]].src == parent[v]});
    std::reverse(steps.begin(), steps.end());
    return steps;
  };
  std::vector<ClosedWalk> loops;
  for (int e = 0; e < static_cast<int>(base.edges().size()); ++e) {
    const auto& be = base.edges()[e];
    if (tree[e] || !inside(be.src) || !inside(be.dst)) continue;
    ClosedWalk walk{root[be.src], down_path(be.src)};
    walk.steps.push_back({e, true});
    auto back = down_path(be.dst);
    for (auto it = back.rbegin(); it != back.rend(); ++it) walk.steps.push_back({it->edge, !it->forward});
    loops.push_back(std::move(walk));
  }
  return loops;
}

std::vector<Fq> generated_subgroup(const FieldCtx& F, const std::vector<Fq>& gens) {
  std::set<Fq> group{1};
  std::deque<Fq> todo{1};
  while (!todo.empty()) {
    const Fq a = todo.front();
    todo.pop_front();
    for (Fq g : gens) {
      const Fq b = F.mul(a, g);
      if (group.insert(b).second) todo.push_back(b);
    }
  }
  return {group.begin(), group.end()};
}

RuleReport check_transport_rule(const HeckeGraph& G, int threshold) {
  const FieldCtx& F = *G.field_ptr();
  const Point& x = G.meta().x;
  const Divisor& D = G.meta().divisor;
  if (x != Point::finite(poly::monomial(1, 1)) || D.mult(x) != 1)
    throw ConfigError("transport rule is stated for x = t with multiplicity 1");
  const Divisor rest = D.without(x);
  if (rest.entries().size() != 1 || rest.entries()[0].mult != 1 || rest.entries()[0].point.inf ||
      rest.entries()[0].point.degree() != 1)
    throw ConfigError("transport rule needs D = [x] + [y] with y finite of degree 1");
  const Fq y0 = F.neg(rest.entries()[0].point.poly[0]);
  const VertexSpace& S = G.space();
  const LevelRing& R = S.ring();
  const int xi = R.index_of(x), yi = 1 - xi;
  const LocalRing& Lx = R.local(xi);
  const LocalRing& Ly = R.local(yi);
  const M2 tower{0, 1, 1, 0};

  RuleReport rep;
  for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v) {
    const Vertex& vx = G.vertex(v);
    if (vx.gap <= threshold || G.is_stub(v)) continue;
    const M2 X = level_at(vx.level, xi), Y = level_at(vx.level, yi);
    const bool at_inf = X.a11 == 0;
    // Bring the x-level to the normal form with [[alpha, w], [0, 1]].
    std::optional<Fq> alpha_used;
    for (Fq alpha = 1; alpha < F.q() && !alpha_used; ++alpha)
      for (Fq w = 0; w < F.q() && !alpha_used; ++w) {
        const M2 m = m2_normalize(Lx, m2_mul(Lx, X, M2{alpha, w, 0, 1}));
        if (at_inf ? m == tower : (m.a11 == 1 && m.a12 == 0 && m.a22 == 1)) {
          alpha_used = alpha;
        }
      }
    if (!alpha_used) {
      rep.mismatches.push_back("no normal form for " + vertex_label(vx));
      continue;
    }
    const M2 a = m2_mul(Ly, Y, M2{*alpha_used, 0, 0, 1});
    std::map<Vertex, long long> want;
    auto predict = [&](int gap, const M2& xs, const M2& ys, long long mult) {
      LevelMat m(8);
      set_level_at(m, xi, xs);
      set_level_at(m, yi, ys);
      want[S.canonical_vertex(gap, pgl2_normalize(R, m))] += mult;
    };
    if (at_inf) {
      predict(vx.gap + 1, tower, m2_mul(Ly, a, M2{1, 0, 0, y0}), 1);
      for (Fq c = 1; c < F.q(); ++c)
        predict(vx.gap + 1, M2{1, 0, c, 1}, m2_mul(Ly, a, M2{c, 0, 0, F.neg(F.div(y0, c))}), 1);
    } else {
      predict(vx.gap - 1, M2{1, 0, 0, 1}, m2_mul(Ly, a, M2{y0, 0, 0, 1}), F.q());
    }
    std::map<Vertex, long long> got;
    for (int e : G.out_edges(v)) got[G.vertex(G.edges()[e].dst)] += G.edges()[e].mult;
    ++rep.vertices;
    rep.edges += static_cast<long long>(got.size());
    if (got != want) rep.mismatches.push_back("rule differs at " + vertex_label(vx));
  }
  return rep;
}

}  // namespace hecke
