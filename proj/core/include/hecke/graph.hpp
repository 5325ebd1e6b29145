#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hecke/edges.hpp"

namespace hecke {

struct EdgeBundle {
  int src = 0;
  int dst = 0;
  long long mult = 0;
  std::string tag;  // aggregated provenance, e.g. "CaseII*2"
  auto operator<=>(const EdgeBundle&) const = default;
};

enum class Builder { bruteforce, cusp_rule, hybrid };
std::string to_string(Builder b);
Builder parse_builder(std::string_view s);

struct GraphMeta {
  unsigned q = 0;
  Divisor divisor;
  Point x;
  int n_max = 0;
  std::string builder;
  bool operator==(const GraphMeta&) const = default;
};

// Truncated Hecke graph over gaps 0..n_max. Vertices are sorted, so ids are
// deterministic. A boundary vertex lost at least one edge past n_max.
class HeckeGraph {
 public:
  HeckeGraph(GraphMeta meta, std::shared_ptr<const VertexSpace> space, std::vector<Vertex> vertices,
             std::vector<EdgeBundle> edges, std::vector<int> boundary);

  const GraphMeta& meta() const { return meta_; }
  const FieldPtr& field_ptr() const { return space_->field_ptr(); }
  const VertexSpace& space() const { return *space_; }
  std::shared_ptr<const VertexSpace> space_ptr() const { return space_; }

  size_t num_vertices() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(int id) const { return vertices_.at(id); }
  const std::vector<EdgeBundle>& edges() const { return edges_; }
  const std::vector<int>& boundary() const { return boundary_; }
  bool is_stub(int id) const { return stub_.at(id); }

  // -1 when the vertex is not in the table.
  int id_of(const Vertex& v) const;
  // Edge indices, sorted by destination / source.
  std::span<const int> out_edges(int id) const;
  std::span<const int> in_edges(int id) const;
  long long out_multiplicity(int id) const;

  bool operator==(const HeckeGraph& other) const;

 private:
  GraphMeta meta_;
  std::shared_ptr<const VertexSpace> space_;
  std::vector<Vertex> vertices_;
  std::map<Vertex, int> ids_;
  std::vector<EdgeBundle> edges_;
  std::vector<int> boundary_;
  std::vector<bool> stub_;
  std::vector<int> out_index_, out_offset_, in_index_, in_offset_;
};

// Throws HypothesisError when cusp_rule is asked for a gap at or below the
// deep-cusp bound, and InvariantError with the vertex when the hybrid overlap
// layer disagrees between the two builders.
HeckeGraph build_graph(const FieldPtr& F, const Divisor& D, const Point& x, int n_max, Builder builder,
                       unsigned threads = 0);

std::string export_json(const HeckeGraph& G);
std::string export_dot(const HeckeGraph& G);
// Inverse of export_json; rejects dangling ids and non-canonical vertices.
HeckeGraph parse_json(std::string_view text);

// Label used in reports: "gap|level|layer".
std::string vertex_label(const Vertex& v);

}  // namespace hecke
