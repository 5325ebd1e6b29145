#include "hecke/ring.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <tuple>

#include "hecke/errors.hpp"

namespace hecke {

namespace {

std::uint64_t poly_code(const FieldCtx& F, const Poly& f, int deg) {
  std::uint64_t c = 0;
  for (int i = deg; i-- > 0;) c = c * F.q() + (static_cast<size_t>(i) < f.size() ? f[i] : 0);
  return c;
}

}  // namespace

std::strong_ordering Point::operator<=>(const Point& o) const {
  if (inf != o.inf) return inf ? std::strong_ordering::greater : std::strong_ordering::less;
  if (inf) return std::strong_ordering::equal;
  if (poly.size() != o.poly.size()) return poly.size() <=> o.poly.size();
  for (size_t i = poly.size(); i-- > 0;)
    if (poly[i] != o.poly[i]) return poly[i] <=> o.poly[i];
  return std::strong_ordering::equal;
}

std::string format_point(const FieldCtx& F, const Point& pt) {
  return pt.inf ? std::string("inf") : poly::format(F, pt.poly);
}

Point parse_point(const FieldCtx& F, std::string_view s) {
  if (s == "inf") return Point::infinity();
  Poly f = poly::parse(F, s);
  if (poly::degree(f) < 1) throw ConfigError("point '" + std::string(s) + "' has degree < 1");
  if (f.back() != 1) throw ConfigError("point '" + std::string(s) + "' is not monic");
  if (!poly::is_irreducible(F, f))
    throw ConfigError("point '" + std::string(s) + "' is a reducible polynomial over F_" +
                      std::to_string(F.q()));
  return Point::finite(f);
}

LocalRing::LocalRing(FieldPtr F, Point pt, int d) : F_(std::move(F)), pt_(std::move(pt)), d_(d) {
  if (d_ < 1) throw ConfigError("local precision must be >= 1");
  if (!pt_.inf && !poly::is_irreducible(*F_, pt_.poly))
    throw ConfigError("reducible point polynomial " + poly::format(*F_, pt_.poly));
  r_ = pt_.degree();
  len_ = d_ * r_;
  std::uint64_t sz = 1, res = 1;
  for (int i = 0; i < len_; ++i) {
    sz *= F_->q();
    if (sz > (std::uint64_t{1} << 32) - 1) throw BudgetError("local ring too large to encode");
  }
  for (int i = 0; i < r_; ++i) res *= F_->q();
  size_ = static_cast<std::uint32_t>(sz);
  units_ = static_cast<std::uint32_t>((res - 1) * (sz / res));
  if (pt_.inf) {
    modulus_ = poly::monomial(1, d_);
  } else {
    modulus_ = poly::pow(*F_, pt_.poly, d_);
  }

  if (size_ <= 256) {
    add_.resize(size_ * size_);
    mul_.resize(size_ * size_);
    for (Elem a = 0; a < size_; ++a)
      for (Elem b = 0; b < size_; ++b) {
        auto ca = coeffs(a), cb = coeffs(b);
        for (int i = 0; i < len_; ++i) ca[i] = F_->add(ca[i], cb[i]);
        add_[a * size_ + b] = from_coeffs(ca);
        mul_[a * size_ + b] = mul_slow(a, b);
      }
  }
  if (size_ <= (1u << 16)) {
    neg_.resize(size_);
    for (Elem a = 0; a < size_; ++a) neg_[a] = neg_slow(a);
    inv_.assign(size_, 0);
    val_.assign(size_, 0);
    rank_.assign(size_, 0);
    for (Elem a = 0; a < size_; ++a) {
      Poly f = to_poly(a);
      int v = 0;
      if (f.empty()) {
        v = d_;
      } else if (pt_.inf) {
        while (f[v] == 0) ++v;
      } else {
        Poly q, rem;
        while (v < d_) {
          poly::divmod(*F_, f, pt_.poly, q, rem);
          if (!rem.empty()) break;
          f = q;
          ++v;
        }
      }
      val_[a] = static_cast<std::uint8_t>(v);
      if (v == 0) {
        rank_[a] = static_cast<std::uint32_t>(units_list_.size());
        units_list_.push_back(a);
        inv_[a] = inv_slow(a);
      } else {
        rank_[a] = static_cast<std::uint32_t>(nonunits_list_.size());
        nonunits_list_.push_back(a);
      }
    }
  }
}

std::vector<Fq> LocalRing::coeffs(Elem a) const {
  std::vector<Fq> c(len_);
  const unsigned q = F_->q();
  for (int i = 0; i < len_; ++i) {
    c[i] = static_cast<Fq>(a % q);
    a /= q;
  }
  return c;
}

LocalRing::Elem LocalRing::from_coeffs(const std::vector<Fq>& c) const {
  Elem a = 0;
  for (int i = len_; i-- > 0;) a = a * F_->q() + (static_cast<size_t>(i) < c.size() ? c[i] : 0);
  return a;
}

Poly LocalRing::to_poly(Elem a) const {
  Poly f = coeffs(a);
  poly::trim(f);
  return f;
}

LocalRing::Elem LocalRing::from_poly(const Poly& f) const {
  if (pt_.inf) {
    Poly g(f.begin(), f.begin() + std::min<size_t>(f.size(), len_));
    return from_coeffs(g);
  }
  return from_coeffs(poly::mod(*F_, f, modulus_));
}

LocalRing::Elem LocalRing::add(Elem a, Elem b) const {
  if (!add_.empty()) return add_[a * size_ + b];
  const unsigned q = F_->q();
  Elem out = 0, place = 1;
  for (int i = 0; i < len_; ++i, a /= q, b /= q, place *= q)
    out += place * F_->add(static_cast<Fq>(a % q), static_cast<Fq>(b % q));
  return out;
}

LocalRing::Elem LocalRing::neg_slow(Elem a) const {
  const unsigned q = F_->q();
  Elem out = 0, place = 1;
  for (int i = 0; i < len_; ++i, a /= q, place *= q) out += place * F_->neg(static_cast<Fq>(a % q));
  return out;
}

LocalRing::Elem LocalRing::neg(Elem a) const { return neg_.empty() ? neg_slow(a) : neg_[a]; }

LocalRing::Elem LocalRing::sub(Elem a, Elem b) const { return add(a, neg(b)); }

LocalRing::Elem LocalRing::mul(Elem a, Elem b) const {
  if (!mul_.empty()) return mul_[a * size_ + b];
  return mul_slow(a, b);
}

LocalRing::Elem LocalRing::mul_slow(Elem a, Elem b) const {
  return from_poly(poly::mul(*F_, to_poly(a), to_poly(b)));
}

LocalRing::Elem LocalRing::inv_slow(Elem a) const {
  Poly s, t;
  Poly g = poly::xgcd(*F_, to_poly(a), modulus_, s, t);
  if (poly::degree(g) != 0) throw InvariantError("inverse of a non-unit local element");
  return from_poly(s);
}

bool LocalRing::is_unit(Elem a) const {
  if (!val_.empty()) return val_[a] == 0;
  return residue(a) != 0;
}

LocalRing::Elem LocalRing::inv(Elem a) const {
  if (!is_unit(a)) throw InvariantError("inverse of a non-unit local element");
  if (!inv_.empty()) return inv_[a];
  return inv_slow(a);
}

int LocalRing::valuation(Elem a) const {
  if (!val_.empty()) return val_[a];
  Poly f = to_poly(a);
  if (f.empty()) return d_;
  int v = 0;
  if (pt_.inf) {
    while (f[v] == 0) ++v;
    return v;
  }
  Poly q, rem;
  while (v < d_) {
    poly::divmod(*F_, f, pt_.poly, q, rem);
    if (!rem.empty()) break;
    f = q;
    ++v;
  }
  return v;
}

LocalRing::Elem LocalRing::uniformizer() const {
  return pt_.inf ? from_poly({0, 1}) : from_poly(pt_.poly);
}

LocalRing::Elem LocalRing::residue(Elem a) const {
  if (pt_.inf) return a % F_->q();
  Poly r = poly::mod(*F_, to_poly(a), pt_.poly);
  return static_cast<Elem>(poly_code(*F_, r, r_));
}

std::uint32_t LocalRing::unit_index(Elem a) const {
  if (rank_.empty()) throw BudgetError("unit indexing needs a ring of size <= 2^16");
  return rank_[a];
}
std::uint32_t LocalRing::nonunit_index(Elem a) const { return unit_index(a); }
LocalRing::Elem LocalRing::unit_at(std::uint32_t i) const { return units_list_.at(i); }
LocalRing::Elem LocalRing::nonunit_at(std::uint32_t i) const { return nonunits_list_.at(i); }

std::shared_ptr<const LocalRing> local_ring(const FieldPtr& F, const Point& pt, int d) {
  using Key = std::tuple<const FieldCtx*, Point, int>;
  static std::mutex mu;
  static std::map<Key, std::pair<FieldPtr, std::shared_ptr<const LocalRing>>> cache;
  Key key{F.get(), pt, d};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second.second;
  }
  auto ring = std::make_shared<const LocalRing>(F, pt, d);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, std::make_pair(F, ring)).first->second.second;
}

LocalRing::Elem local_expand(const LocalRing& R, const Poly& h, int m) {
  if (!R.point().inf) return R.from_poly(h);
  if (poly::degree(h) > m)
    throw InvariantError("section of degree " + std::to_string(poly::degree(h)) +
                         " does not fit O(" + std::to_string(m) + ")");
  if (h.empty()) return 0;
  Poly g(std::min<int>(m + 1, R.length()), 0);
  for (int j = 0; j < static_cast<int>(g.size()); ++j)
    if (m - j < static_cast<int>(h.size())) g[j] = h[m - j];
  return R.from_poly(g);
}

LevelRing::LevelRing(FieldPtr F, std::vector<std::pair<Point, int>> parts)
    : F_(std::move(F)), parts_(std::move(parts)) {
  std::sort(parts_.begin(), parts_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (size_t i = 1; i < parts_.size(); ++i)
    if (parts_[i].first == parts_[i - 1].first) throw ConfigError("repeated point in divisor");
  for (const auto& [pt, d] : parts_) locals_.push_back(local_ring(F_, pt, d));
}

int LevelRing::index_of(const Point& pt) const {
  for (size_t i = 0; i < parts_.size(); ++i)
    if (parts_[i].first == pt) return static_cast<int>(i);
  return -1;
}

std::uint64_t LevelRing::size() const {
  std::uint64_t s = 1;
  for (const auto& l : locals_) s *= l->size();
  return s;
}

M2 m2_mul(const LocalRing& R, const M2& x, const M2& y) {
  return M2{R.add(R.mul(x.a11, y.a11), R.mul(x.a12, y.a21)),
            R.add(R.mul(x.a11, y.a12), R.mul(x.a12, y.a22)),
            R.add(R.mul(x.a21, y.a11), R.mul(x.a22, y.a21)),
            R.add(R.mul(x.a21, y.a12), R.mul(x.a22, y.a22))};
}

LocalRing::Elem m2_det(const LocalRing& R, const M2& x) {
  return R.sub(R.mul(x.a11, x.a22), R.mul(x.a12, x.a21));
}

M2 m2_scale(const LocalRing& R, const M2& x, LocalRing::Elem c) {
  return M2{R.mul(x.a11, c), R.mul(x.a12, c), R.mul(x.a21, c), R.mul(x.a22, c)};
}

M2 m2_normalize(const LocalRing& R, const M2& x) {
  for (auto e : {x.a11, x.a21, x.a12, x.a22})
    if (R.is_unit(e)) return e == 1 ? x : m2_scale(R, x, R.inv(e));
  throw InvariantError("normalizing a matrix without unit entries");
}

LevelMat level_identity(const LevelRing& R) {
  LevelMat m(4 * R.npoints());
  for (size_t i = 0; i < R.npoints(); ++i) set_level_at(m, i, M2{});
  return m;
}

LevelMat level_mul(const LevelRing& R, const LevelMat& x, const LevelMat& y) {
  LevelMat m(x.size());
  for (size_t i = 0; i < R.npoints(); ++i)
    set_level_at(m, i, m2_mul(R.local(i), level_at(x, i), level_at(y, i)));
  return m;
}

std::vector<LocalRing::Elem> level_det(const LevelRing& R, const LevelMat& x) {
  std::vector<LocalRing::Elem> d(R.npoints());
  for (size_t i = 0; i < R.npoints(); ++i) d[i] = m2_det(R.local(i), level_at(x, i));
  return d;
}

bool level_invertible(const LevelRing& R, const LevelMat& x) {
  for (size_t i = 0; i < R.npoints(); ++i)
    if (!R.local(i).is_unit(m2_det(R.local(i), level_at(x, i)))) return false;
  return true;
}

LevelMat pgl2_normalize(const LevelRing& R, const LevelMat& x) {
  if (!level_invertible(R, x)) throw InvariantError("pgl2_normalize on a non-invertible matrix");
  LevelMat m(x.size());
  for (size_t i = 0; i < R.npoints(); ++i)
    set_level_at(m, i, m2_normalize(R.local(i), level_at(x, i)));
  return m;
}

std::string format_level(const LevelMat& m) {
  std::string s;
  for (size_t i = 0; i < m.size(); ++i) {
    if (i > 0) s += (i % 4 == 0) ? ';' : ',';
    s += std::to_string(m[i]);
  }
  return s;
}

LevelMat parse_level(std::string_view s, size_t npoints) {
  LevelMat m;
  std::string cur;
  for (size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == ',' || s[i] == ';') {
      if (cur.empty()) {
        if (s.empty()) break;
        throw ConfigError("malformed level string '" + std::string(s) + "'");
      }
      m.push_back(static_cast<std::uint32_t>(std::stoul(cur)));
      cur.clear();
    } else {
      cur += s[i];
    }
  }
  if (m.size() != 4 * npoints) throw ConfigError("level string '" + std::string(s) + "' has wrong arity");
  return m;
}

}  // namespace hecke
