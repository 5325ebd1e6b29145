#include "hecke/graph.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "hecke/errors.hpp"

namespace hecke {

using ojson = nlohmann::ordered_json;

std::string to_string(Builder b) {
  switch (b) {
    case Builder::bruteforce: return "bruteforce";
    case Builder::cusp_rule: return "cusp_rule";
    case Builder::hybrid: return "hybrid";
  }
  return "?";
}

Builder parse_builder(std::string_view s) {
  if (s == "bruteforce") return Builder::bruteforce;
  if (s == "cusp_rule") return Builder::cusp_rule;
  if (s == "hybrid") return Builder::hybrid;
  throw ConfigError("unknown builder '" + std::string(s) + "' (bruteforce, cusp_rule, hybrid)");
}

std::string vertex_label(const Vertex& v) {
  return std::to_string(v.gap) + "|" + format_level(v.level) + "|" + v.layer;
}

HeckeGraph::HeckeGraph(GraphMeta meta, std::shared_ptr<const VertexSpace> space, std::vector<Vertex> vertices,
                       std::vector<EdgeBundle> edges, std::vector<int> boundary)
    : meta_(std::move(meta)),
      space_(std::move(space)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      boundary_(std::move(boundary)) {
  const int n = static_cast<int>(vertices_.size());
  for (int i = 0; i < n; ++i) {
    if (i > 0 && !(vertices_[i - 1] < vertices_[i])) throw InvariantError("vertex table is not strictly sorted");
    ids_.emplace(vertices_[i], i);
  }
  std::sort(edges_.begin(), edges_.end());
  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
  stub_.assign(n, false);
  for (int b : boundary_) {
    if (b < 0 || b >= n) throw InvariantError("boundary id " + std::to_string(b) + " out of range");
    stub_[b] = true;
  }
  for (const auto& e : edges_) {
    if (e.src < 0 || e.src >= n || e.dst < 0 || e.dst >= n)
      throw InvariantError("dangling edge " + std::to_string(e.src) + " -> " + std::to_string(e.dst));
    if (e.mult < 1) throw InvariantError("edge multiplicity must be positive");
  }
  // CSR indices for both directions.
  auto index = [&](bool by_src, std::vector<int>& idx, std::vector<int>& off) {
    off.assign(n + 1, 0);
    for (const auto& e : edges_) ++off[(by_src ? e.src : e.dst) + 1];
    std::partial_sum(off.begin(), off.end(), off.begin());
    idx.assign(edges_.size(), 0);
    std::vector<int> fill(off.begin(), off.end() - 1);
    for (int k = 0; k < static_cast<int>(edges_.size()); ++k) idx[fill[by_src ? edges_[k].src : edges_[k].dst]++] = k;
  };
  index(true, out_index_, out_offset_);
  index(false, in_index_, in_offset_);
}

int HeckeGraph::id_of(const Vertex& v) const {
  auto it = ids_.find(v);
  return it == ids_.end() ? -1 : it->second;
}

std::span<const int> HeckeGraph::out_edges(int id) const {
  return {out_index_.data() + out_offset_.at(id), out_index_.data() + out_offset_.at(id + 1)};
}

std::span<const int> HeckeGraph::in_edges(int id) const {
  return {in_index_.data() + in_offset_.at(id), in_index_.data() + in_offset_.at(id + 1)};
}

long long HeckeGraph::out_multiplicity(int id) const {
  long long total = 0;
  for (int e : out_edges(id)) total += edges_[e].mult;
  return total;
}

bool HeckeGraph::operator==(const HeckeGraph& other) const {
  return meta_ == other.meta_ && vertices_ == other.vertices_ && edges_ == other.edges_ &&
         boundary_ == other.boundary_;
}

namespace {

bool same_targets(const std::vector<Neighbor>& a, const std::vector<Neighbor>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].target != b[i].target || a[i].mult != b[i].mult) return false;
  return true;
}

template <class Fn>
void parallel_for(size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
  threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(n, 1)));
  std::atomic<size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto work = [&] {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

HeckeGraph build_graph(const FieldPtr& F, const Divisor& D, const Point& x, int n_max, Builder builder,
                       unsigned threads) {
  if (n_max < 0) throw ConfigError("n_max must be >= 0");
  auto space = std::make_shared<const VertexSpace>(F, D, x);
  const HeckeOperator op(space, x);
  const int deep = space->deep_bound();
  if (builder == Builder::cusp_rule && deep >= 0)
    throw HypothesisError("cusp_rule builder needs every gap above the deep-cusp bound " + std::to_string(deep) +
                          "; use hybrid");

  std::vector<Vertex> vertices = space->enumerate(0, n_max);
  std::sort(vertices.begin(), vertices.end());
  std::map<Vertex, int> ids;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) ids.emplace(vertices[i], i);

  std::vector<std::vector<Neighbor>> out(vertices.size());
  parallel_for(vertices.size(), threads, [&](size_t i) {
    const Vertex& v = vertices[i];
    const bool brute = builder == Builder::bruteforce || (builder == Builder::hybrid && v.gap <= deep + 1);
    out[i] = brute ? op.bruteforce(v.gap, v.level) : op.cusp_rule(v.gap, v.level);
    if (builder == Builder::hybrid && v.gap == deep + 1 && !same_targets(out[i], op.cusp_rule(v.gap, v.level)))
      throw InvariantError("hybrid overlap mismatch at vertex " + vertex_label(v));
  });

  std::vector<EdgeBundle> edges;
  std::vector<int> boundary;
  for (int i = 0; i < static_cast<int>(vertices.size()); ++i) {
    for (const auto& nb : out[i]) {
      if (nb.target.gap > n_max) {
        if (boundary.empty() || boundary.back() != i) boundary.push_back(i);
        continue;
      }
      auto it = ids.find(nb.target);
      if (it == ids.end()) throw InvariantError("edge target missing from vertex table: " + vertex_label(nb.target));
      edges.push_back(EdgeBundle{i, it->second, nb.mult, format_tags(nb.tags)});
    }
  }
  GraphMeta meta{F->q(), D, x, n_max, to_string(builder)};
  return HeckeGraph(std::move(meta), std::move(space), std::move(vertices), std::move(edges), std::move(boundary));
}

std::string export_json(const HeckeGraph& G) {
  const FieldCtx& F = *G.field_ptr();
  ojson meta;
  meta["schema"] = 1;
  meta["q"] = G.meta().q;
  meta["divisor"] = ojson::array();
  for (const auto& e : G.meta().divisor.entries())
    meta["divisor"].push_back(ojson{{"point", format_point(F, e.point)}, {"mult", e.mult}});
  meta["x"] = format_point(F, G.meta().x);
  meta["n_max"] = G.meta().n_max;
  meta["builder"] = G.meta().builder;
  ojson vs = ojson::array();
  for (int i = 0; i < static_cast<int>(G.num_vertices()); ++i) {
    const Vertex& v = G.vertex(i);
    vs.push_back(ojson{{"id", i}, {"gap", v.gap}, {"level", format_level(v.level)}, {"layer", v.layer}});
  }
  ojson es = ojson::array();
  for (const auto& e : G.edges())
    es.push_back(ojson{{"src", e.src}, {"dst", e.dst}, {"mult", e.mult}, {"tag", e.tag}});
  ojson doc;
  doc["meta"] = std::move(meta);
  doc["vertices"] = std::move(vs);
  doc["edges"] = std::move(es);
  doc["boundary"] = G.boundary();
  return doc.dump(1) + "\n";
}

std::string export_dot(const HeckeGraph& G) {
  std::ostringstream os;
  os << "digraph hecke {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n";
  std::map<int, std::vector<int>> by_gap;
  for (int i = 0; i < static_cast<int>(G.num_vertices()); ++i) by_gap[G.vertex(i).gap].push_back(i);
  for (const auto& [gap, ids] : by_gap) {
    os << "  { rank=same;";
    for (int i : ids) os << " v" << i << ";";
    os << " }\n";
  }
  for (int i = 0; i < static_cast<int>(G.num_vertices()); ++i) {
    const Vertex& v = G.vertex(i);
    os << "  v" << i << " [label=\"" << v.gap << "\\n" << format_level(v.level) << "\\n" << v.layer << "\"";
    if (G.is_stub(i)) os << ", style=dashed";
    os << "];\n";
  }
  for (const auto& e : G.edges())
    os << "  v" << e.src << " -> v" << e.dst << " [label=\"" << e.mult << "\", tooltip=\"" << e.tag << "\"];\n";
  os << "}\n";
  return os.str();
}

HeckeGraph parse_json(std::string_view text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph JSON: ") + e.what());
  }
  try {
    const auto& m = doc.at("meta");
    if (m.at("schema").get<int>() != 1) throw ConfigError("unsupported graph schema");
    auto F = FieldCtx::make(m.at("q").get<unsigned>());
    std::vector<DivisorEntry> entries;
    for (const auto& e : m.at("divisor"))
      entries.push_back({parse_point_name(*F, e.at("point").get<std::string>()), e.at("mult").get<int>()});
    GraphMeta meta{F->q(), Divisor(std::move(entries)), parse_point_name(*F, m.at("x").get<std::string>()),
                   m.at("n_max").get<int>(), m.at("builder").get<std::string>()};
    auto space = std::make_shared<const VertexSpace>(F, meta.divisor, meta.x);
    std::vector<Vertex> vertices;
    for (const auto& v : doc.at("vertices")) {
      if (v.at("id").get<size_t>() != vertices.size()) throw InvariantError("vertex ids must be 0..n-1 in order");
      Vertex vx{v.at("gap").get<int>(), parse_level(v.at("level").get<std::string>(), space->ring().npoints()),
                v.at("layer").get<std::string>()};
      if (space->canonical_vertex(vx.gap, vx.level) != vx)
        throw InvariantError("vertex " + std::to_string(vertices.size()) + " is not in canonical form");
      vertices.push_back(std::move(vx));
    }
    std::vector<EdgeBundle> edges;
    for (const auto& e : doc.at("edges"))
      edges.push_back(EdgeBundle{e.at("src").get<int>(), e.at("dst").get<int>(), e.at("mult").get<long long>(),
                                 e.at("tag").get<std::string>()});
    std::vector<int> boundary = doc.value("boundary", std::vector<int>{});
    return HeckeGraph(std::move(meta), std::move(space), std::move(vertices), std::move(edges),
                      std::move(boundary));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("graph JSON: ") + e.what());
  }
}

}  // namespace hecke
