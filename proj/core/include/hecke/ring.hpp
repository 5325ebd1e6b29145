#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hecke/field.hpp"

namespace hecke {

// Closed point of P^1: a monic irreducible polynomial in t, or infinity.
struct Point {
  bool inf = false;
  Poly poly;  // empty for infinity

  static Point infinity() { return Point{true, {}}; }
  static Point finite(Poly p) { return Point{false, std::move(p)}; }
  int degree() const { return inf ? 1 : poly::degree(poly); }

  // Finite points by (degree, coefficient code), infinity last.
  std::strong_ordering operator<=>(const Point& o) const;
  bool operator==(const Point& o) const = default;
};

std::string format_point(const FieldCtx& F, const Point& pt);
// Accepts "inf" or a monic irreducible polynomial in t; throws ConfigError otherwise.
Point parse_point(const FieldCtx& F, std::string_view s);

// Truncated local ring O_y / pi^d with pi = p_y(t), or u = 1/t at infinity.
// Elements are codes sum c_j q^j of the coefficient vector (length d * deg y)
// of the reduced polynomial representative in t (or in u at infinity).
class LocalRing {
 public:
  using Elem = std::uint32_t;

  LocalRing(FieldPtr F, Point pt, int d);

  const FieldCtx& field() const { return *F_; }
  const FieldPtr& field_ptr() const { return F_; }
  const Point& point() const { return pt_; }
  int precision() const { return d_; }
  int residue_degree() const { return r_; }
  int length() const { return len_; }
  std::uint32_t size() const { return size_; }
  std::uint32_t unit_count() const { return units_; }

  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;  // throws on non-units
  bool is_unit(Elem a) const;
  int valuation(Elem a) const;  // d for zero

  Elem one() const { return 1; }
  Elem uniformizer() const;
  Elem from_fq(Fq c) const { return c; }
  Elem from_poly(const Poly& f) const;  // reduces modulo pi^d
  Poly to_poly(Elem a) const;
  std::vector<Fq> coeffs(Elem a) const;  // always length()
  Elem from_coeffs(const std::vector<Fq>& c) const;

  // Residue class as an element of O_y / pi (code in the precision-1 ring).
  Elem residue(Elem a) const;
  // Reduce or lift (via the polynomial representative) into another precision.
  Elem transfer(Elem a, const LocalRing& target) const { return target.from_poly(to_poly(a)); }

  // Dense indices of units in [0, unit_count) and of non-units in
  // [0, size - unit_count), in increasing code order. Rings <= 2^16 only.
  std::uint32_t unit_index(Elem a) const;
  std::uint32_t nonunit_index(Elem a) const;
  Elem unit_at(std::uint32_t i) const;
  Elem nonunit_at(std::uint32_t i) const;

 private:
  Elem mul_slow(Elem a, Elem b) const;
  Elem inv_slow(Elem a) const;
  Elem neg_slow(Elem a) const;

  FieldPtr F_;
  Point pt_;
  int d_, r_, len_;
  std::uint32_t size_, units_;
  Poly modulus_;  // p^d, or u^d at infinity
  std::vector<Elem> add_, mul_;      // size^2 tables when size <= 256
  std::vector<Elem> inv_, neg_;      // size <= 2^16
  std::vector<std::uint8_t> val_;    // size <= 2^16
  std::vector<std::uint32_t> rank_;  // unit or non-unit rank, size <= 2^16
  std::vector<Elem> units_list_, nonunits_list_;
};

// Shared, cached ring instance; construction of the tables is not free.
std::shared_ptr<const LocalRing> local_ring(const FieldPtr& F, const Point& pt, int d);

// Local value of a global section h of O(m), read through the standard
// trivializations: h mod p^d at finite points, sum_j h_{m-j} u^j at infinity.
LocalRing::Elem local_expand(const LocalRing& R, const Poly& h, int m);

// Product ring O_D over an ordered list of (point, precision).
class LevelRing {
 public:
  LevelRing() = default;
  LevelRing(FieldPtr F, std::vector<std::pair<Point, int>> parts);

  const FieldPtr& field_ptr() const { return F_; }
  size_t npoints() const { return locals_.size(); }
  const LocalRing& local(size_t i) const { return *locals_[i]; }
  const std::vector<std::pair<Point, int>>& parts() const { return parts_; }
  // Index of the point, or -1.
  int index_of(const Point& pt) const;
  std::uint64_t size() const;

 private:
  FieldPtr F_;
  std::vector<std::pair<Point, int>> parts_;
  std::vector<std::shared_ptr<const LocalRing>> locals_;
};

// 2x2 matrix over one local ring, row major.
struct M2 {
  LocalRing::Elem a11 = 1, a12 = 0, a21 = 0, a22 = 1;
  auto operator<=>(const M2&) const = default;
};

M2 m2_mul(const LocalRing& R, const M2& x, const M2& y);
LocalRing::Elem m2_det(const LocalRing& R, const M2& x);
// First unit in the scan order (a11, a21, a12, a22) is scaled to 1.
M2 m2_normalize(const LocalRing& R, const M2& x);
M2 m2_scale(const LocalRing& R, const M2& x, LocalRing::Elem c);

// Matrix over O_D: four entries per point (a11, a12, a21, a22), point-major.
using LevelMat = std::vector<std::uint32_t>;

inline M2 level_at(const LevelMat& m, size_t i) {
  return M2{m[4 * i], m[4 * i + 1], m[4 * i + 2], m[4 * i + 3]};
}
inline void set_level_at(LevelMat& m, size_t i, const M2& x) {
  m[4 * i] = x.a11;
  m[4 * i + 1] = x.a12;
  m[4 * i + 2] = x.a21;
  m[4 * i + 3] = x.a22;
}

LevelMat level_identity(const LevelRing& R);
LevelMat level_mul(const LevelRing& R, const LevelMat& x, const LevelMat& y);
std::vector<LocalRing::Elem> level_det(const LevelRing& R, const LevelMat& x);
bool level_invertible(const LevelRing& R, const LevelMat& x);
// Scalar-normalized representative of the PGL2(O_D) class; throws on non-invertible input.
LevelMat pgl2_normalize(const LevelRing& R, const LevelMat& x);
// Canonical coefficient dump: "a11,a12,a21,a22" codes per point joined by ';'.
std::string format_level(const LevelMat& m);
LevelMat parse_level(std::string_view s, size_t npoints);

}  // namespace hecke
