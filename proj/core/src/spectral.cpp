#include "hecke/spectral.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "hecke/errors.hpp"
#include "hecke/factor.hpp"
#include "hecke/linalg.hpp"

namespace hecke {

// ---------------------------------------------------------------------------
// decomposition

long long LayeredDecomposition::layer_size() const {
  long long best = 0;
  for (const auto& l : layers) best = std::max<long long>(best, static_cast<long long>(l.size()));
  return best;
}

LayeredDecomposition make_decomposition(std::shared_ptr<const HeckeGraph> graph, std::vector<int> nucleus,
                                        std::vector<std::vector<int>> layers, std::vector<int> beyond) {
  if (!graph) throw ConfigError("decomposition needs a graph");
  const HeckeGraph& G = *graph;
  const int n = static_cast<int>(G.num_vertices());
  LayeredDecomposition L;
  L.graph = graph;
  L.ramified = G.meta().divisor.mult(G.meta().x) > 0;
  L.part.assign(n, LayeredDecomposition::kSide);
  L.slot.assign(n, -1);
  auto assign = [&](std::vector<int>& ids, int tag) {
    std::sort(ids.begin(), ids.end());
    for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
      const int v = ids[i];
      if (v < 0 || v >= n) throw ConfigError("decomposition vertex " + std::to_string(v) + " out of range");
      if (L.part[v] != LayeredDecomposition::kSide)
        throw ConfigError("vertex " + std::to_string(v) + " assigned to two parts");
      L.part[v] = tag;
      L.slot[v] = i;
    }
  };
  assign(nucleus, 0);
  for (int i = 0; i < static_cast<int>(layers.size()); ++i) assign(layers[i], i + 1);
  assign(beyond, LayeredDecomposition::kBeyond);
  for (int v = 0; v < n; ++v)
    if (L.part[v] == LayeredDecomposition::kSide) {
      L.slot[v] = static_cast<int>(L.side.size());
      L.side.push_back(v);
    }
  L.nucleus = std::move(nucleus);
  L.layers = std::move(layers);
  L.beyond = std::move(beyond);

  const int m = L.num_layers();
  L.M.resize(m + 1);
  L.A.resize(m + 1);
  L.B.resize(m + 1);
  for (int i = 0; i <= m; ++i) {
    const int sz = static_cast<int>(L.members(i).size());
    L.M[i].rows = L.M[i].cols = sz;
    if (i > 0) {
      const int prev = static_cast<int>(L.members(i - 1).size());
      L.A[i].rows = prev;
      L.A[i].cols = sz;
      L.B[i].rows = sz;
      L.B[i].cols = prev;
    }
  }
  for (const auto& e : G.edges()) {
    const int pu = L.part[e.src], pw = L.part[e.dst];
    if (pu < 0 || pw < 0) continue;
    const BlockEntry be{L.slot[e.src], L.slot[e.dst], e.mult};
    if (pw == pu)
      L.M[pu].entries.push_back(be);
    else if (pw == pu + 1)
      L.A[pw].entries.push_back(be);
    else if (pw == pu - 1)
      L.B[pu].entries.push_back(be);
    else
      ++L.irregular_edges;
  }
  L.stationary = m >= 3 && L.layers[m - 1].size() == L.layers[m - 2].size() &&
                 L.layers[m - 2].size() == L.layers[m - 3].size();
  return L;
}

LayeredDecomposition layer_decompose(std::shared_ptr<const HeckeGraph> graph) {
  if (!graph) throw ConfigError("decomposition needs a graph");
  const HeckeGraph& G = *graph;
  const VertexSpace& S = G.space();
  const bool ramified = G.meta().divisor.mult(G.meta().x) > 0;
  const int r = S.step();
  const int base = S.d_cusp_bound();
  const int n_max = G.meta().n_max;
  // Band i >= 1 spans gaps base + i r + 1 .. base + (i + 1) r.
  const int complete = (n_max - base) / r - 1;
  if (complete < 3)
    throw ConfigError("window too shallow: n_max " + std::to_string(n_max) + " holds " +
                      std::to_string(std::max(complete, 0)) + " complete layers, need 3");

  const int n = static_cast<int>(G.num_vertices());
  std::vector<std::vector<int>> layers(complete);
  std::vector<int> beyond, rest;
  std::vector<char> layered(n, 0);
  for (int v = 0; v < n; ++v) {
    const Vertex& vx = G.vertex(v);
    const int band = S.band(vx.gap);
    if (band >= 1 && (!ramified || S.in_tower(vx.level))) {
      layered[v] = 1;
      if (band <= complete)
        layers[band - 1].push_back(v);
      else
        beyond.push_back(v);
    } else {
      rest.push_back(v);
    }
  }

  std::vector<int> nucleus;
  if (!ramified) {
    for (int v : rest) {
      if (S.band(G.vertex(v).gap) != 0) throw InvariantError("unramified window vertex outside every band");
      nucleus.push_back(v);
    }
  } else {
    // Forward closure of band 0 avoiding layer vertices.
    std::vector<char> in(n, 0);
    std::deque<int> queue;
    for (int v : rest)
      if (S.band(G.vertex(v).gap) == 0) {
        in[v] = 1;
        queue.push_back(v);
      }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      if (G.is_stub(v))
        throw ConfigError("window too shallow: the nucleus reaches the window top at " +
                          vertex_label(G.vertex(v)));
      for (int e : G.out_edges(v)) {
        const int w = G.edges()[e].dst;
        if (layered[w] || in[w]) continue;
        in[w] = 1;
        queue.push_back(w);
      }
    }
    for (int v = 0; v < n; ++v)
      if (in[v]) nucleus.push_back(v);
  }
  LayeredDecomposition L = make_decomposition(graph, std::move(nucleus), std::move(layers), std::move(beyond));
  if (L.irregular_edges != 0)
    throw InvariantError("layer extraction left " + std::to_string(L.irregular_edges) +
                         " edges outside the block pattern");
  return L;
}

std::string to_string(Propagativity p) {
  switch (p) {
    case Propagativity::not_propagative: return "not";
    case Propagativity::propagative: return "propagative";
    case Propagativity::strictly: return "strictly";
  }
  return "?";
}

namespace {

template <class S>
S from_int(long long v) {
  if constexpr (std::is_same_v<S, mpq_class>)
    return mpq_class(static_cast<long>(v));
  else
    return AlgNum(static_cast<long>(v));
}

template <class S>
S lift_scalar(const AlgNum& a) {
  if constexpr (std::is_same_v<S, mpq_class>)
    return a.to_rational();
  else
    return a;
}

template <class S>
AlgNum to_alg(const S& s) {
  if constexpr (std::is_same_v<S, mpq_class>)
    return AlgNum(NumberField::rationals(), s);
  else
    return s;
}

int block_rank(const Block& b) {
  std::vector<SparseRow<mpq_class>> rows(b.rows);
  for (const auto& e : b.entries) rows[e.row][e.col] += mpq_class(static_cast<long>(e.mult));
  Echelon<mpq_class> ech(b.cols);
  for (auto& row : rows) ech.add_row(std::move(row));
  return ech.rank();
}

void require_lambda(const AlgNum& lambda, const LayeredDecomposition& L) {
  if (L.ramified && lambda.is_zero())
    throw HypothesisError("lambda = 0 is excluded when the level is ramified at the Hecke point");
}

}  // namespace

Propagativity check_propagative(const LayeredDecomposition& L) {
  if (L.irregular_edges != 0) return Propagativity::not_propagative;
  bool strict = true;
  for (int i = 2; i <= L.num_layers(); ++i) {
    const Block& a = L.A[i];
    if (block_rank(a) != a.rows) return Propagativity::not_propagative;
    if (a.rows != a.cols) strict = false;
  }
  return strict ? Propagativity::strictly : Propagativity::propagative;
}

// ---------------------------------------------------------------------------
// nucleus spectrum

NucleusSpectrum nucleus_spectrum(const LayeredDecomposition& L) {
  NucleusSpectrum out;
  const Block& M = L.M[0];
  const int n = M.rows;
  using Digraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  Digraph g(n);
  std::vector<long long> row_sum(n, 0);
  for (const auto& e : M.entries) {
    boost::add_edge(e.row, e.col, g);
    row_sum[e.row] += e.mult;
  }
  std::vector<int> comp(n);
  const int ncomp = n == 0 ? 0 : boost::strong_components(g, comp.data());
  std::vector<std::vector<int>> members(ncomp);
  for (int v = 0; v < n; ++v) members[comp[v]].push_back(v);

  QPoly chi{1};
  for (const auto& mem : members) {
    out.component_sizes.push_back(static_cast<int>(mem.size()));
    std::vector<int> local(n, -1);
    for (int i = 0; i < static_cast<int>(mem.size()); ++i) local[mem[i]] = i;
    std::vector<std::vector<mpq_class>> dense(mem.size(), std::vector<mpq_class>(mem.size()));
    for (const auto& e : M.entries)
      if (local[e.row] >= 0 && local[e.col] >= 0) dense[local[e.row]][local[e.col]] += static_cast<long>(e.mult);
    chi = qpoly::mul(chi, charpoly(std::move(dense)));
  }
  std::sort(out.component_sizes.begin(), out.component_sizes.end(), std::greater<>());
  for (const auto& c : chi) {
    if (c.get_den() != 1) throw InvariantError("characteristic polynomial of an integer matrix is not integral");
    out.charpoly.push_back(c.get_num());
  }
  if (n > 0) {
    out.squarefree = squarefree_factorization(out.charpoly);
    out.irreducible = factor(out.charpoly);
  }
  const auto& meta = L.graph->meta();
  long long qr = 1;
  for (int i = 0; i < L.graph->space().step(); ++i) qr *= meta.q;
  out.row_sum_bound = L.ramified ? qr : qr + 1;
  for (long long s : row_sum) out.max_row_sum = std::max(out.max_row_sum, s);
  out.gershgorin_ok = out.max_row_sum <= out.row_sum_bound;
  return out;
}

namespace {

template <class S>
long long nucleus_nullity(const S& lambda, const LayeredDecomposition& L) {
  const Block& M = L.M[0];
  // Reversed columns: pivots on the highest vertex of each row keep fill-in low.
  const int last = M.cols - 1;
  std::vector<SparseRow<S>> rows(M.rows);
  for (int i = 0; i < M.rows; ++i) rows[i][last - i] = lambda;
  for (const auto& e : M.entries) {
    auto& cell = rows[e.row][last - e.col];
    cell = cell - from_int<S>(e.mult);
  }
  Echelon<S> ech(M.cols);
  for (auto& row : rows) ech.add_row(std::move(row));
  return M.rows - ech.rank();
}

// Boundary system on (v', v_1): sum_w mult f(w) - lambda f(v) at v in G'.
template <class S>
std::vector<SparseRow<S>> boundary_rows(const S& lambda, const LayeredDecomposition& L) {
  const int n0 = static_cast<int>(L.nucleus.size());
  std::vector<SparseRow<S>> rows(n0);
  for (int i = 0; i < n0; ++i) rows[i][i] = -lambda;
  for (const auto& e : L.M[0].entries) {
    auto& cell = rows[e.row][e.col];
    cell = cell + from_int<S>(e.mult);
  }
  if (L.num_layers() >= 1)
    for (const auto& e : L.A[1].entries) {
      auto& cell = rows[e.row][n0 + e.col];
      cell = cell + from_int<S>(e.mult);
    }
  for (auto& row : rows)
    for (auto it = row.begin(); it != row.end();) it = is_zero(it->second) ? row.erase(it) : std::next(it);
  return rows;
}

template <class S>
DimBounds dim_bounds_impl(const S& lambda, const LayeredDecomposition& L) {
  DimBounds b;
  b.lower = L.layer_size();
  b.nucleus_dim = nucleus_nullity(lambda, L);
  b.upper = b.lower + b.nucleus_dim;
  const int n0 = static_cast<int>(L.nucleus.size());
  const int n1 = L.num_layers() >= 1 ? static_cast<int>(L.layers[0].size()) : 0;
  Echelon<S> ech(n0 + n1);
  for (auto& row : boundary_rows(lambda, L)) ech.add_row(std::move(row));
  b.boundary_dim = n0 + n1 - ech.rank();
  b.exact = b.boundary_dim - n1 + b.lower;
  b.window_limited = !L.stationary;
  return b;
}

}  // namespace

std::vector<std::pair<ZPoly, long long>> nucleus_eigenspace_dims(const LayeredDecomposition& L) {
  std::vector<std::pair<ZPoly, long long>> out;
  for (const auto& [m, mult] : nucleus_spectrum(L).irreducible) {
    const QPoly mq = qpoly::monic(zpoly::to_q(m));
    if (qpoly::degree(mq) == 1) {
      out.emplace_back(m, nucleus_nullity<mpq_class>(-mq[0], L));
    } else {
      out.emplace_back(m, nucleus_nullity<AlgNum>(AlgNum::generator(NumberField::make(mq)), L));
    }
  }
  return out;
}

DimBounds dim_bounds(const AlgNum& lambda, const LayeredDecomposition& L) {
  require_lambda(lambda, L);
  if (check_propagative(L) == Propagativity::not_propagative)
    throw HypothesisError("dimension bounds need a propagative decomposition");
  if (lambda.is_rational()) return dim_bounds_impl<mpq_class>(lambda.to_rational(), L);
  return dim_bounds_impl<AlgNum>(lambda, L);
}

// ---------------------------------------------------------------------------
// propagation

namespace {

constexpr int kNoSkip = -100;

template <class S>
struct Propagator {
  const LayeredDecomposition& L;
  const HeckeGraph& G;
  S lambda;
  std::vector<std::optional<S>> f;
  std::vector<std::optional<S>> g;  // inhomogeneous term, empty entries are 0
  std::vector<int> pending;         // unknown targets of side vertices

  Propagator(const LayeredDecomposition& L_, const S& lam)
      : L(L_), G(*L_.graph), lambda(lam), f(G.num_vertices()), g(G.num_vertices()), pending(G.num_vertices(), 0) {}

  S g_at(int v) const { return g[v] ? *g[v] : S(); }

  // sum over edges v -> w of mult f(w), skipping targets in part `skip`.
  std::optional<S> out_sum(int v, int skip) const {
    S acc = S();
    for (int e : G.out_edges(v)) {
      const auto& ed = G.edges()[e];
      if (L.part[ed.dst] == skip) continue;
      if (!f[ed.dst]) return std::nullopt;
      acc = acc + from_int<S>(ed.mult) * *f[ed.dst];
    }
    return acc;
  }

  void init_pending() {
    for (int v : L.side) pending[v] = static_cast<int>(G.out_edges(v).size());
  }

  // Marks v known and resolves side vertices that became determined.
  void settle(int v0, const S& value) {
    f[v0] = value;
    std::deque<int> queue{v0};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int e : G.in_edges(v)) {
        const int u = G.edges()[e].src;
        if (L.part[u] != LayeredDecomposition::kSide || f[u] || G.is_stub(u)) continue;
        if (--pending[u] > 0) continue;
        const auto sum = out_sum(u, kNoSkip);
        if (!sum) continue;
        f[u] = (*sum - g_at(u)) / lambda_or_throw(u);
        queue.push_back(u);
      }
    }
  }

  S lambda_or_throw(int v) const {
    if (is_zero(lambda))
      throw HypothesisError("lambda = 0 cannot determine side vertex " + vertex_label(G.vertex(v)));
    return lambda;
  }

  Propagation run(int depth) {
    const int m = L.num_layers();
    // Boundary equation on the nucleus.
    for (int v : L.nucleus) {
      const auto sum = out_sum(v, kNoSkip);
      if (!sum) throw InvariantError("nucleus vertex " + vertex_label(G.vertex(v)) + " has an unseeded target");
      if (!(*sum - lambda * *f[v] == g_at(v)))
        throw HypothesisError("seed violates the boundary equation at " + vertex_label(G.vertex(v)));
    }
    init_pending();
    for (const auto& layer : {L.nucleus, m >= 1 ? L.layers[0] : std::vector<int>{}})
      for (int v : layer) settle(v, *f[v]);

    int reached = m >= 1 ? 1 : 0;
    const int top = std::min(depth, m);
    for (int i = 1; i < top; ++i) {
      const auto& cur = L.layers[i - 1];
      const Block& a = L.A[i + 1];
      std::vector<SparseRow<S>> rows(a.rows);
      for (const auto& e : a.entries) rows[e.row][e.col] = from_int<S>(e.mult);
      bool blocked = false;
      for (int k = 0; k < static_cast<int>(cur.size()); ++k) {
        const int v = cur[k];
        const auto rest = out_sum(v, i + 1);
        if (G.is_stub(v) || !rest) {
          blocked = true;
          break;
        }
        const S rhs = lambda * *f[v] + g_at(v) - *rest;
        if (!is_zero(rhs)) rows[k][a.cols] = rhs;
      }
      if (blocked) break;
      Echelon<S> ech(a.cols + 1);
      for (auto& row : rows) ech.add_row(std::move(row));
      if (ech.rank() < a.cols || ech.is_pivot(a.cols))
        throw InvariantError("layer map A_" + std::to_string(i + 1) + " is singular");
      const auto x = ech.solve(a.cols);
      const auto& next = L.layers[i];
      for (int k = 0; k < static_cast<int>(next.size()); ++k) settle(next[k], (*x)[k]);
      reached = i + 1;
    }

    Propagation out;
    out.layers_reached = reached;
    // Re-verify every equation whose terms are all known.
    for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v) {
      if (!f[v] || G.is_stub(v)) continue;
      const auto sum = out_sum(v, kNoSkip);
      if (!sum) continue;
      if (!(*sum - lambda * *f[v] == g_at(v)))
        throw InvariantError("propagated values violate the equation at " + vertex_label(G.vertex(v)));
      ++out.checked;
    }
    for (int v = 0; v < static_cast<int>(G.num_vertices()); ++v)
      if (f[v]) out.values.emplace(v, to_alg<S>(*f[v]));
    return out;
  }
};

template <class S>
std::vector<S> solve_boundary(const S& lambda, const LayeredDecomposition& L,
                              const std::vector<std::pair<int, S>>& fixed, const std::vector<std::optional<S>>& g) {
  const int n0 = static_cast<int>(L.nucleus.size());
  const int n1 = L.num_layers() >= 1 ? static_cast<int>(L.layers[0].size()) : 0;
  const int cols = n0 + n1;
  auto rows = boundary_rows(lambda, L);
  for (int i = 0; i < n0; ++i) {
    const int v = L.nucleus[i];
    if (g[v] && !is_zero(*g[v])) rows[i][cols] = *g[v];
  }
  for (const auto& [col, value] : fixed) {
    SparseRow<S> row;
    row[col] = from_int<S>(1);
    if (!is_zero(value)) row[cols] = value;
    rows.push_back(std::move(row));
  }
  Echelon<S> ech(cols + 1);
  for (auto& row : rows) ech.add_row(std::move(row));
  if (ech.is_pivot(cols)) throw HypothesisError("seed constraints are inconsistent with the boundary equation");
  if (ech.rank() < cols)
    throw HypothesisError("seed constraints leave " + std::to_string(cols - ech.rank()) + " free parameters");
  return *ech.solve(cols);
}

template <class S>
int seed_column(const LayeredDecomposition& L, int v) {
  if (v < 0 || v >= static_cast<int>(L.part.size())) throw ConfigError("seed vertex out of range");
  if (L.part[v] == 0) return L.slot[v];
  if (L.part[v] == 1) return static_cast<int>(L.nucleus.size()) + L.slot[v];
  throw ConfigError("seed vertex " + std::to_string(v) + " is not in the nucleus or the first layer");
}

template <class S>
ValueTable complete_seed_impl(const S& lambda, const ValueTable& constraints, const LayeredDecomposition& L) {
  std::vector<std::pair<int, S>> fixed;
  for (const auto& [v, val] : constraints) fixed.emplace_back(seed_column<S>(L, v), lift_scalar<S>(val));
  const std::vector<std::optional<S>> g(L.part.size());
  const auto x = solve_boundary(lambda, L, fixed, g);
  ValueTable out;
  const int n0 = static_cast<int>(L.nucleus.size());
  for (int i = 0; i < n0; ++i) out.emplace(L.nucleus[i], to_alg<S>(x[i]));
  if (L.num_layers() >= 1)
    for (int i = 0; i < static_cast<int>(L.layers[0].size()); ++i) out.emplace(L.layers[0][i], to_alg<S>(x[n0 + i]));
  return out;
}

template <class S>
Propagation propagate_impl(const S& lambda, const ValueTable& seed, const LayeredDecomposition& L, int depth,
                           const ValueTable* g) {
  Propagator<S> P(L, lambda);
  if (g)
    for (const auto& [v, val] : *g) P.g.at(v) = lift_scalar<S>(val);
  for (int v : L.nucleus) {
    auto it = seed.find(v);
    if (it == seed.end()) throw HypothesisError("seed misses nucleus vertex " + vertex_label(L.graph->vertex(v)));
    P.f[v] = lift_scalar<S>(it->second);
  }
  if (L.num_layers() >= 1)
    for (int v : L.layers[0]) {
      auto it = seed.find(v);
      if (it == seed.end()) throw HypothesisError("seed misses layer-1 vertex " + vertex_label(L.graph->vertex(v)));
      P.f[v] = lift_scalar<S>(it->second);
    }
  for (const auto& [v, val] : seed)
    if (v < 0 || v >= static_cast<int>(L.part.size()) || (L.part[v] != 0 && L.part[v] != 1))
      throw ConfigError("seed vertex " + std::to_string(v) + " is not in the nucleus or the first layer");
  return P.run(depth);
}

}  // namespace

ValueTable complete_seed(const AlgNum& lambda, const ValueTable& constraints, const LayeredDecomposition& L) {
  require_lambda(lambda, L);
  if (lambda.is_rational()) return complete_seed_impl<mpq_class>(lambda.to_rational(), constraints, L);
  return complete_seed_impl<AlgNum>(lambda, constraints, L);
}

Propagation propagate_eigenform(const AlgNum& lambda, const ValueTable& seed, const LayeredDecomposition& L,
                                int depth) {
  require_lambda(lambda, L);
  if (check_propagative(L) != Propagativity::strictly)
    throw HypothesisError("propagation needs a strictly propagative decomposition");
  if (lambda.is_rational()) return propagate_impl<mpq_class>(lambda.to_rational(), seed, L, depth, nullptr);
  return propagate_impl<AlgNum>(lambda, seed, L, depth, nullptr);
}

namespace {

template <class S>
ResolventSolution resolvent_impl(const S& lambda, const ValueTable& g, const LayeredDecomposition& L, int depth) {
  if (nucleus_nullity(lambda, L) > 0) {
    std::string factor_str = "?";
    for (const auto& [m, mult] : nucleus_spectrum(L).irreducible) {
      S acc = S();
      for (size_t i = m.size(); i-- > 0;)
        acc = acc * lambda + lift_scalar<S>(AlgNum(NumberField::rationals(), mpq_class(m[i])));
      if (is_zero(acc)) factor_str = zpoly::format(m, "t");
    }
    throw HypothesisError("lambda lies in the nucleus spectrum: root of " + factor_str);
  }
  const HeckeGraph& G = *L.graph;
  std::vector<std::optional<S>> gv(G.num_vertices());
  for (const auto& [v, val] : g) {
    if (v < 0 || v >= static_cast<int>(G.num_vertices())) throw ConfigError("g vertex out of range");
    if (G.is_stub(v) || L.part[v] == LayeredDecomposition::kBeyond || L.part[v] > depth)
      throw ConfigError("g must be supported in the window interior; vertex " + vertex_label(G.vertex(v)));
    gv[v] = lift_scalar<S>(val);
  }
  const int n0 = static_cast<int>(L.nucleus.size());
  const int n1 = L.num_layers() >= 1 ? static_cast<int>(L.layers[0].size()) : 0;
  auto seed_from = [&](const std::vector<S>& x) {
    ValueTable s;
    for (int i = 0; i < n0; ++i) s.emplace(L.nucleus[i], to_alg<S>(x[i]));
    for (int i = 0; i < n1; ++i) s.emplace(L.layers[0][i], to_alg<S>(x[n0 + i]));
    return s;
  };
  ResolventSolution out;
  {
    std::vector<std::pair<int, S>> fixed;
    for (int j = 0; j < n1; ++j) fixed.emplace_back(n0 + j, S());
    out.particular = propagate_impl<S>(lambda, seed_from(solve_boundary(lambda, L, fixed, gv)), L, depth, &g);
  }
  const std::vector<std::optional<S>> zero(G.num_vertices());
  for (int k = 0; k < n1; ++k) {
    std::vector<std::pair<int, S>> fixed;
    for (int j = 0; j < n1; ++j) fixed.emplace_back(n0 + j, from_int<S>(j == k ? 1 : 0));
    out.homogeneous.push_back(
        propagate_impl<S>(lambda, seed_from(solve_boundary(lambda, L, fixed, zero)), L, depth, nullptr));
  }
  return out;
}

template <class S>
std::vector<long long> generalized_impl(const S& lambda, const LayeredDecomposition& L, int k_max) {
  const HeckeGraph& G = *L.graph;
  const int n = static_cast<int>(G.num_vertices());
  // level[v]: largest j <= k_max with v in V_j; V_0 is the window and V_{j+1}
  // holds the non-stub vertices of V_j whose targets all lie in V_j.
  std::vector<int> level(n, 0);
  for (int j = 1; j <= k_max; ++j)
    for (int v = 0; v < n; ++v) {
      if (level[v] < j - 1 || G.is_stub(v)) continue;
      bool ok = true;
      for (int e : G.out_edges(v)) ok = ok && level[G.edges()[e].dst] >= j - 1;
      if (ok) level[v] = j;
    }
  std::vector<long long> dims;
  for (int k = 1; k <= k_max; ++k) {
    // f_1 on V_k must still see the nucleus and the first k layers.
    if (k > L.num_layers()) throw ConfigError("window too shallow for power " + std::to_string(k));
    for (int i = 0; i <= k; ++i)
      for (int v : L.members(i))
        if (level[v] < k)
          throw ConfigError("window too shallow for power " + std::to_string(k) + ": vertex " +
                            vertex_label(G.vertex(v)) + " is too close to the top");
    // Chain unknowns f_1 on V_0, ..., f_k on V_{k-1} with f_{j+1} = (Phi - lambda) f_j
    // on V_j and (Phi - lambda) f_k = 0 on V_k. Columns run from the top of the
    // window down so that pivots follow the propagation order.
    std::vector<std::vector<int>> col(k, std::vector<int>(n, -1));
    int cols = 0;
    for (int j = 0; j < k; ++j)
      for (int v = n - 1; v >= 0; --v)
        if (level[v] >= j) col[j][v] = cols++;
    Echelon<S> ech(cols);
    auto star = [&](int j, int v, SparseRow<S>& row) {
      auto add = [&](int c, const S& val) {
        auto& cell = row[c];
        cell = cell + val;
      };
      add(col[j][v], -lambda);
      for (int e : G.out_edges(v)) add(col[j][G.edges()[e].dst], from_int<S>(G.edges()[e].mult));
    };
    for (int j = 0; j < k; ++j)
      for (int v = 0; v < n; ++v) {
        if (level[v] < j + 1) continue;
        SparseRow<S> row;
        star(j, v, row);
        if (j + 1 < k) row[col[j + 1][v]] = from_int<S>(-1);
        for (auto it = row.begin(); it != row.end();) it = is_zero(it->second) ? row.erase(it) : std::next(it);
        ech.add_row(std::move(row));
      }
    // Restrict the kernel to f_1 on V_k, where truncation leaves no spurious freedom.
    Echelon<S> proj(n);
    for (const auto& vec : ech.nullspace(cols)) {
      SparseRow<S> row;
      for (int v = 0; v < n; ++v)
        if (level[v] >= k && !is_zero(vec[col[0][v]])) row[v] = vec[col[0][v]];
      proj.add_row(std::move(row));
    }
    dims.push_back(proj.rank());
  }
  return dims;
}

}  // namespace

ResolventSolution solve_resolvent(const AlgNum& lambda, const ValueTable& g, const LayeredDecomposition& L,
                                  int depth) {
  require_lambda(lambda, L);
  if (check_propagative(L) != Propagativity::strictly)
    throw HypothesisError("the resolvent needs a strictly propagative decomposition");
  if (lambda.is_rational()) return resolvent_impl<mpq_class>(lambda.to_rational(), g, L, depth);
  return resolvent_impl<AlgNum>(lambda, g, L, depth);
}

std::vector<long long> generalized_kernel_dims(const AlgNum& lambda, const LayeredDecomposition& L, int k_max) {
  require_lambda(lambda, L);
  if (lambda.is_rational()) return generalized_impl<mpq_class>(lambda.to_rational(), L, k_max);
  return generalized_impl<AlgNum>(lambda, L, k_max);
}

// ---------------------------------------------------------------------------
// families

std::string RationalFunction::str(std::string_view var) const {
  if (den == QPoly{1}) return "(" + qpoly::format(num, var) + ")";
  return "(" + qpoly::format(num, var) + ")/(" + qpoly::format(den, var) + ")";
}

FamilyFit eigenform_family(int vertex, const std::vector<mpq_class>& samples, const ValueTable& normalization,
                           const LayeredDecomposition& L) {
  FamilyFit fit;
  if (samples.size() < 4) throw ConfigError("eigenform_family needs at least 4 samples");
  if (vertex < 0 || vertex >= static_cast<int>(L.part.size())) throw ConfigError("vertex out of range");
  std::vector<mpq_class> y;
  for (const auto& s : samples) {
    const AlgNum lam(NumberField::rationals(), s);
    const auto seed = complete_seed(lam, normalization, L);
    const auto prop = propagate_eigenform(lam, seed, L, L.num_layers());
    auto it = prop.values.find(vertex);
    if (it == prop.values.end()) {
      fit.failure = "vertex " + vertex_label(L.graph->vertex(vertex)) + " is not determined inside the window";
      return fit;
    }
    y.push_back(it->second.to_rational());
  }
  const int n_fit = static_cast<int>(samples.size()) - 3;
  fit.held_out = 3;
  for (int k = 0; 2 * k + 2 <= n_fit; ++k) {
    // Unknowns: num_0..num_k, den_0..den_k.
    Echelon<mpq_class> ech(2 * k + 2);
    for (int j = 0; j < n_fit; ++j) {
      SparseRow<mpq_class> row;
      mpq_class pw = 1;
      for (int a = 0; a <= k; ++a) {
        if (pw != 0) {
          row[a] = pw;
          if (y[j] != 0) row[k + 1 + a] = -y[j] * pw;
        }
        pw *= samples[j];
      }
      ech.add_row(std::move(row));
    }
    const auto kernel = ech.nullspace(2 * k + 2);
    if (kernel.empty()) continue;
    const auto& v = kernel.front();
    QPoly num(v.begin(), v.begin() + k + 1), den(v.begin() + k + 1, v.end());
    qpoly::trim(num);
    qpoly::trim(den);
    if (den.empty()) continue;
    const QPoly common = qpoly::gcd(num.empty() ? den : num, den);
    QPoly q, r;
    if (!num.empty()) {
      qpoly::divmod(num, common, q, r);
      num = q;
    }
    qpoly::divmod(den, common, q, r);
    den = q;
    const mpq_class lead = den.back();
    num = qpoly::scale(num, 1 / lead);
    den = qpoly::scale(den, 1 / lead);
    fit.f = RationalFunction{num, den};
    for (int j = n_fit; j < static_cast<int>(samples.size()); ++j) {
      const mpq_class d = qpoly::eval(den, samples[j]);
      if (d == 0 || qpoly::eval(num, samples[j]) / d != y[j]) {
        fit.failure = "held-out residual is nonzero at lambda = " + samples[j].get_str();
        return fit;
      }
    }
    fit.growth = qpoly::degree(num) - qpoly::degree(den);
    // den must divide det(lambda - M) * lambda^deg(den).
    QPoly target = zpoly::to_q(nucleus_spectrum(L).charpoly);
    if (target.empty()) target = QPoly{1};
    QPoly shifted(qpoly::degree(den), mpq_class(0));
    shifted.insert(shifted.end(), target.begin(), target.end());
    fit.denominator_divides = qpoly::mod(shifted, den).empty();
    fit.ok = true;
    return fit;
  }
  fit.failure = "interpolation rank failure: no rational function of degree <= " +
                std::to_string((n_fit - 2) / 2) + " fits the samples";
  return fit;
}

// ---------------------------------------------------------------------------
// closed-form dimensions

std::string to_string(DimCase c) {
  switch (c) {
    case DimCase::unramified_at_x: return "unramified_at_x";
    case DimCase::ramified_at_x_only: return "ramified_at_x_only";
    case DimCase::mixed: return "mixed";
  }
  return "?";
}

DimCase parse_dim_case(std::string_view s) {
  if (s == "unramified_at_x") return DimCase::unramified_at_x;
  if (s == "ramified_at_x_only") return DimCase::ramified_at_x_only;
  if (s == "mixed") return DimCase::mixed;
  throw ConfigError("unknown case '" + std::string(s) + "' (unramified_at_x, ramified_at_x_only, mixed)");
}

DimFormulaParams formula_params(const Divisor& D, const Point& x, unsigned q) {
  DimFormulaParams p;
  p.q = q;
  p.r = x.degree();
  p.d_x = D.mult(x);
  for (const auto& e : D.entries())
    if (!(e.point == x)) p.away.emplace_back(e.point.degree(), e.mult);
  return p;
}

DimCase formula_case(const DimFormulaParams& p) {
  if (p.d_x == 0) return DimCase::unramified_at_x;
  return p.away.empty() ? DimCase::ramified_at_x_only : DimCase::mixed;
}

DimFormulaResult dim_formula(const DimFormulaParams& p, DimCase c) {
  if (p.q < 2 || p.r < 1 || p.d_x < 0 || p.h < 1 || p.genus < 0)
    throw ConfigError("dimension formula needs q >= 2, r >= 1, d_x >= 0, h >= 1, g >= 0");
  for (const auto& [deg, mult] : p.away)
    if (deg < 1 || mult < 1) throw ConfigError("points away from x need degree >= 1 and multiplicity >= 1");
  if (formula_case(p) != c)
    throw ConfigError("parameters describe the " + to_string(formula_case(p)) + " case, not " + to_string(c));
  auto qpow = [&](long e) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), p.q, static_cast<unsigned long>(e));
    return mpq_class(r);
  };
  DimFormulaResult out;
  out.factors.emplace_back("r", mpq_class(p.r));
  out.factors.emplace_back("h", mpq_class(static_cast<long>(p.h)));
  if (c != DimCase::unramified_at_x)
    out.factors.emplace_back("x", (qpow(p.r) - 1) * qpow(static_cast<long>(p.r) * (p.d_x - 1)));
  if (c != DimCase::unramified_at_x || !p.away.empty()) out.factors.emplace_back("1/(q-1)", mpq_class(1, p.q - 1));
  for (const auto& [deg, mult] : p.away) {
    std::ostringstream name;
    name << "y(deg=" << deg << ",mult=" << mult << ")";
    out.factors.emplace_back(name.str(), qpow(2L * deg * (mult - 1)) * (qpow(2L * deg) - 1));
  }
  out.value = 1;
  for (const auto& [name, v] : out.factors) out.value *= v;
  return out;
}

}  // namespace hecke
