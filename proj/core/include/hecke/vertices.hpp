#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "hecke/divisor.hpp"
#include "hecke/ring.hpp"

namespace hecke {

// Image of Aut(O(n) + O, D2-level) in PGL2(O_{D1}).
struct AutImage {
  std::vector<LevelMat> elements;  // normalized, sorted, unique
  bool torus = false;              // diagonal part ranges over k^x
  bool full_unipotent = false;     // unipotent part is all of O_{D1}
  bool constant_gl2 = false;       // gap 0: PGL2(k) embedded as constants
};

AutImage aut_image(const FieldPtr& F, int n, const Divisor& D1, const Divisor& D2);

struct Vertex {
  int gap = 0;
  LevelMat level;
  std::string layer;
  auto operator<=>(const Vertex&) const = default;
};

// Vertices of Bun_{PGL2, D}: pairs (gap, level class modulo Aut).
class VertexSpace {
 public:
  // x (optional) is the Hecke point; it only affects layer tags.
  VertexSpace(FieldPtr F, Divisor D, std::optional<Point> x = std::nullopt);

  const FieldPtr& field_ptr() const { return F_; }
  const Divisor& divisor() const { return D_; }
  const LevelRing& ring() const { return ring_; }
  const std::optional<Point>& hecke_point() const { return x_; }

  const AutImage& aut(int n) const;
  LevelMat canonical(int n, const LevelMat& raw) const;
  Vertex canonical_vertex(int n, const LevelMat& raw) const;
  std::vector<Vertex> enumerate(int n_min, int n_max) const;
  // Orbit representatives over one gap.
  std::vector<LevelMat> orbit_reps(int n) const;

  // Gap n is a D-cusp gap when n > d_cusp_bound(), deep when n > deep_bound().
  int d_cusp_bound() const { return D_.degree() - 2; }
  int deep_bound() const { return D_.degree() - 2 + step(); }
  int step() const { return x_ ? x_->degree() : 1; }
  // Layer band of a gap: i >= 1 with step*i < n - d_cusp_bound() <= step*(i+1), else 0.
  int band(int n) const;
  std::string layer_tag(int n, const LevelMat& level) const;

  // P^1(k_x) position a21/a11 of the residue at x as a residue-field code,
  // nullopt for infinity. Requires x in supp D.
  std::optional<LocalRing::Elem> position(const LevelMat& level) const;
  bool in_tower(const LevelMat& level) const;  // a11 = 0 in O_x / pi^{d_x}

 private:
  FieldPtr F_;
  Divisor D_;
  std::optional<Point> x_;
  LevelRing ring_;
  int x_index_ = -1;
  mutable std::mutex mu_;
  mutable std::map<int, std::shared_ptr<const AutImage>> aut_cache_;
  struct OrbitTable {
    std::vector<LevelMat> reps;        // sorted
    std::vector<std::uint32_t> rep_of;  // pgl2 index -> position in reps
  };
  std::shared_ptr<const OrbitTable> orbit_table(const AutImage& G) const;
  mutable std::map<const AutImage*, std::shared_ptr<const OrbitTable>> orbit_cache_;
};

// Canonical representative using a precomputed automorphism image.
LevelMat canonical_level(const LevelRing& R, const AutImage& G, const LevelMat& raw);

}  // namespace hecke
