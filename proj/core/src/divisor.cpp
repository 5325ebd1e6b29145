#include "hecke/divisor.hpp"

#include <algorithm>
#include <charconv>

#include "hecke/errors.hpp"

namespace hecke {

Divisor::Divisor(std::vector<DivisorEntry> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const DivisorEntry& a, const DivisorEntry& b) { return a.point < b.point; });
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].mult < 1) throw ConfigError("divisor multiplicities must be >= 1");
    if (i > 0 && entries_[i].point == entries_[i - 1].point)
      throw ConfigError("divisor lists a point twice");
  }
}

int Divisor::degree() const {
  int d = 0;
  for (const auto& e : entries_) d += e.mult * e.point.degree();
  return d;
}

int Divisor::reduced_degree() const {
  int d = 0;
  for (const auto& e : entries_) d += e.point.degree();
  return d;
}

int Divisor::mult(const Point& pt) const {
  for (const auto& e : entries_)
    if (e.point == pt) return e.mult;
  return 0;
}

Divisor Divisor::without(const Point& pt) const {
  std::vector<DivisorEntry> rest;
  for (const auto& e : entries_)
    if (!(e.point == pt)) rest.push_back(e);
  return Divisor(std::move(rest));
}

LevelRing Divisor::level_ring(const FieldPtr& F) const {
  std::vector<std::pair<Point, int>> parts;
  for (const auto& e : entries_) parts.emplace_back(e.point, e.mult);
  return LevelRing(F, std::move(parts));
}

Point parse_point_name(const FieldCtx& F, std::string_view s) {
  if (s == "x") return Point::finite({0, 1});
  if (s == "y") return Point::finite({F.neg(1), 1});
  return parse_point(F, s);
}

Divisor parse_divisor(const FieldCtx& F, std::string_view s) {
  std::vector<DivisorEntry> entries;
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string_view::npos) comma = s.size();
    std::string_view item = s.substr(pos, comma - pos);
    pos = comma + 1;
    if (item.empty()) continue;
    size_t colon = item.rfind(':');
    int mult = 1;
    std::string_view name = item;
    if (colon != std::string_view::npos) {
      name = item.substr(0, colon);
      auto tail = item.substr(colon + 1);
      auto res = std::from_chars(tail.data(), tail.data() + tail.size(), mult);
      if (res.ec != std::errc() || res.ptr != tail.data() + tail.size())
        throw ConfigError("bad multiplicity in divisor entry '" + std::string(item) + "'");
    }
    entries.push_back({parse_point_name(F, name), mult});
  }
  return Divisor(std::move(entries));
}

std::string format_divisor(const FieldCtx& F, const Divisor& D) {
  std::string s;
  for (const auto& e : D.entries()) {
    if (!s.empty()) s += ',';
    s += format_point(F, e.point) + ":" + std::to_string(e.mult);
  }
  return s;
}

}  // namespace hecke
