#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hecke/ring.hpp"

namespace hecke {

struct DivisorEntry {
  Point point;
  int mult = 1;
  bool operator==(const DivisorEntry&) const = default;
};

// Effective divisor on P^1, entries sorted by point.
class Divisor {
 public:
  Divisor() = default;
  explicit Divisor(std::vector<DivisorEntry> entries);

  const std::vector<DivisorEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int degree() const;
  int reduced_degree() const;
  int mult(const Point& pt) const;
  Divisor without(const Point& pt) const;
  LevelRing level_ring(const FieldPtr& F) const;
  bool operator==(const Divisor&) const = default;

 private:
  std::vector<DivisorEntry> entries_;
};

// Point names accept the aliases "x" = t and "y" = t - 1 besides the
// polynomial syntax of parse_point.
Point parse_point_name(const FieldCtx& F, std::string_view s);
// "x:1,y:2" style; the empty string is the zero divisor.
Divisor parse_divisor(const FieldCtx& F, std::string_view s);
std::string format_divisor(const FieldCtx& F, const Divisor& D);

}  // namespace hecke
