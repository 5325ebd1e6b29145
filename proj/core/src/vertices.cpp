#include "hecke/vertices.hpp"

#include <algorithm>
#include <set>

#include "hecke/errors.hpp"
#include "hecke/fq_linalg.hpp"
#include "hecke/groups.hpp"

namespace hecke {

AutImage aut_image(const FieldPtr& F, int n, const Divisor& D1, const Divisor& D2) {
  const FieldCtx& K = *F;
  const unsigned q = K.q();
  const LevelRing R1 = D1.level_ring(F);
  const size_t np = R1.npoints();
  AutImage out;
  out.torus = D2.empty();
  if (np == 0) {
    out.elements = {LevelMat{}};
    out.full_unipotent = true;
    return out;
  }
  if (n == 0) {
    if (!D2.empty()) {
      out.elements = {level_identity(R1)};
      out.torus = false;
      return out;
    }
    out.constant_gl2 = true;
    std::set<LevelMat> seen;
    for (Fq a = 0; a < q; ++a)
      for (Fq b = 0; b < q; ++b)
        for (Fq c = 0; c < q; ++c)
          for (Fq d = 0; d < q; ++d) {
            if (K.sub(K.mul(a, d), K.mul(b, c)) == 0) continue;
            LevelMat m(4 * np);
            for (size_t i = 0; i < np; ++i) set_level_at(m, i, M2{a, b, c, d});
            seen.insert(pgl2_normalize(R1, m));
          }
    out.elements.assign(seen.begin(), seen.end());
    return out;
  }

  // Polynomials of degree <= n vanishing on D2, read at the points of D1.
  fqla::Mat rows;
  for (const auto& e : D2.entries()) {
    auto R = local_ring(F, e.point, e.mult);
    std::vector<fqla::Vec> cols;
    for (int j = 0; j <= n; ++j) cols.push_back(R->coeffs(local_expand(*R, poly::monomial(1, j), n)));
    for (int k = 0; k < R->length(); ++k) {
      fqla::Vec row(n + 1);
      for (int j = 0; j <= n; ++j) row[j] = cols[j][k];
      rows.push_back(std::move(row));
    }
  }
  fqla::Mat kernel = fqla::nullspace(K, rows, n + 1);
  int total_len = 0;
  for (size_t i = 0; i < np; ++i) total_len += R1.local(i).length();
  fqla::Mat image;
  for (const auto& h : kernel) {
    Poly hp(h);
    poly::trim(hp);
    fqla::Vec v;
    for (size_t i = 0; i < np; ++i) {
      auto c = R1.local(i).coeffs(local_expand(R1.local(i), hp, n));
      v.insert(v.end(), c.begin(), c.end());
    }
    image.push_back(std::move(v));
  }
  fqla::rref(K, image, total_len);
  const int w = static_cast<int>(image.size());
  out.full_unipotent = (w == total_len);

  long double count = (out.torus ? q - 1 : 1);
  for (int i = 0; i < w; ++i) count *= q;
  if (count > static_cast<long double>(enumeration_budget()))
    throw BudgetError("automorphism image needs " + std::to_string(static_cast<unsigned long long>(count)) +
                      " elements, budget is " + std::to_string(enumeration_budget()));

  std::vector<Fq> coef(w, 0);
  for (Fq alpha = 1; alpha < (out.torus ? q : 2); ++alpha) {
    std::fill(coef.begin(), coef.end(), 0);
    while (true) {
      fqla::Vec v(total_len, 0);
      for (int i = 0; i < w; ++i)
        if (coef[i])
          for (int k = 0; k < total_len; ++k) v[k] = K.add(v[k], K.mul(coef[i], image[i][k]));
      LevelMat m(4 * np);
      int off = 0;
      for (size_t i = 0; i < np; ++i) {
        const LocalRing& L = R1.local(i);
        std::vector<Fq> c(v.begin() + off, v.begin() + off + L.length());
        off += L.length();
        set_level_at(m, i, M2{alpha, L.from_coeffs(c), 0, 1});
      }
      out.elements.push_back(pgl2_normalize(R1, m));
      int k = 0;
      while (k < w && ++coef[k] == q) coef[k++] = 0;
      if (k == w) break;
    }
  }
  std::sort(out.elements.begin(), out.elements.end());
  out.elements.erase(std::unique(out.elements.begin(), out.elements.end()), out.elements.end());
  return out;
}

LevelMat canonical_level(const LevelRing& R, const AutImage& G, const LevelMat& raw) {
  const size_t np = R.npoints();
  if (np == 0) return raw;
  if (G.full_unipotent && !G.constant_gl2) {
    // The group is a product over points once the torus part is fixed.
    const unsigned q = R.field_ptr()->q();
    LevelMat best;
    for (Fq alpha = 1; alpha < (G.torus ? q : 2); ++alpha) {
      LevelMat cand(4 * np);
      for (size_t i = 0; i < np; ++i) {
        const LocalRing& L = R.local(i);
        const M2 a = level_at(raw, i);
        M2 bi{};
        if (L.is_unit(a.a11)) {
          // w = -a12/a11 clears a12; the rest is forced.
          const auto u = L.inv(a.a11);
          const auto det = m2_det(L, a);
          bi = M2{1, 0, L.mul(a.a21, u), L.mul(det, L.mul(L.mul(u, u), L.inv(alpha)))};
        } else {
          // a21 is a unit. With s = a11/a21 the orbit is [[s, s z + k], [1, z]],
          // k = -det/(alpha a21^2), z free in O.
          const auto v = L.inv(a.a21);
          const auto s = L.mul(a.a11, v);
          const auto k = L.neg(L.mul(m2_det(L, a), L.mul(L.mul(v, v), L.inv(alpha))));
          bi = M2{s, k, 1, 0};
          for (std::uint32_t z = 1; z < L.size(); ++z) {
            const auto e12 = L.add(L.mul(s, z), k);
            if (e12 < bi.a12) bi = M2{s, e12, 1, z};
          }
        }
        set_level_at(cand, i, bi);
      }
      if (best.empty() || cand < best) best = std::move(cand);
    }
    return best;
  }
  LevelMat best;
  for (const auto& g : G.elements) {
    LevelMat m = pgl2_normalize(R, level_mul(R, raw, g));
    if (best.empty() || m < best) best = std::move(m);
  }
  return best;
}

VertexSpace::VertexSpace(FieldPtr F, Divisor D, std::optional<Point> x)
    : F_(std::move(F)), D_(std::move(D)), x_(std::move(x)), ring_(D_.level_ring(F_)) {
  if (x_) x_index_ = ring_.index_of(*x_);
}

const AutImage& VertexSpace::aut(int n) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = aut_cache_.find(n);
  if (it != aut_cache_.end()) return *it->second;
  auto img = std::make_shared<const AutImage>(aut_image(F_, n, D_, Divisor{}));
  // Share storage with an equal image at another gap so orbit lists are reused.
  for (const auto& [m, other] : aut_cache_)
    if (other->elements == img->elements && other->full_unipotent == img->full_unipotent &&
        other->constant_gl2 == img->constant_gl2) {
      img = other;
      break;
    }
  aut_cache_[n] = img;
  return *img;
}

LevelMat VertexSpace::canonical(int n, const LevelMat& raw) const {
  const AutImage& G = aut(n);
  if (ring_.npoints() == 0 || (G.full_unipotent && !G.constant_gl2)) return canonical_level(ring_, G, raw);
  // Small groups that are not a product over points: use the orbit table.
  auto table = orbit_table(G);
  return table->reps[table->rep_of[pgl2_index(ring_, pgl2_normalize(ring_, raw))]];
}

Vertex VertexSpace::canonical_vertex(int n, const LevelMat& raw) const {
  LevelMat c = canonical(n, raw);
  std::string tag = layer_tag(n, c);
  return Vertex{n, std::move(c), std::move(tag)};
}

std::shared_ptr<const VertexSpace::OrbitTable> VertexSpace::orbit_table(const AutImage& G) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = orbit_cache_.find(&G);
    if (it != orbit_cache_.end()) return it->second;
  }
  auto table = std::make_shared<OrbitTable>();
  if (ring_.npoints() == 0) {
    table->reps = {LevelMat{}};
    table->rep_of = {0};
  } else {
    const std::uint64_t N = pgl2_order(ring_);
    if (N > enumeration_budget())
      throw BudgetError("vertex enumeration needs |PGL2(O_D)| = " + std::to_string(N) +
                        " elements, budget is " + std::to_string(enumeration_budget()) +
                        " (raise HECKE_LAB_BUDGET)");
    constexpr std::uint32_t unseen = ~std::uint32_t{0};
    std::vector<std::uint32_t> orbit_of(N, unseen);
    for (std::uint64_t idx = 0; idx < N; ++idx) {
      if (orbit_of[idx] != unseen) continue;
      const auto id = static_cast<std::uint32_t>(table->reps.size());
      const LevelMat a = pgl2_element(ring_, idx);
      LevelMat rep;
      for (const auto& g : G.elements) {
        LevelMat b = pgl2_normalize(ring_, level_mul(ring_, a, g));
        orbit_of[pgl2_index(ring_, b)] = id;
        if (rep.empty() || b < rep) rep = std::move(b);
      }
      table->reps.push_back(std::move(rep));
    }
    // Renumber so that reps are sorted.
    std::vector<std::uint32_t> order(table->reps.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return table->reps[a] < table->reps[b]; });
    std::vector<std::uint32_t> pos(order.size());
    std::vector<LevelMat> sorted(order.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) {
      pos[order[i]] = i;
      sorted[i] = std::move(table->reps[order[i]]);
    }
    table->reps = std::move(sorted);
    for (auto& o : orbit_of) o = pos[o];
    table->rep_of = std::move(orbit_of);
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = orbit_cache_.emplace(&G, std::move(table));
  return it->second;
}

std::vector<LevelMat> VertexSpace::orbit_reps(int n) const { return orbit_table(aut(n))->reps; }

std::vector<Vertex> VertexSpace::enumerate(int n_min, int n_max) const {
  std::vector<Vertex> out;
  for (int n = std::max(0, n_min); n <= n_max; ++n)
    for (const auto& rep : orbit_reps(n)) out.push_back(Vertex{n, rep, layer_tag(n, rep)});
  return out;
}

int VertexSpace::band(int n) const {
  const int r = step();
  const int over = n - d_cusp_bound();
  if (over <= r) return 0;
  return (over + r - 1) / r - 1;
}

std::optional<LocalRing::Elem> VertexSpace::position(const LevelMat& level) const {
  if (x_index_ < 0) throw InvariantError("position requested at a point outside the divisor");
  const LocalRing& L = ring_.local(x_index_);
  const M2 a = level_at(level, x_index_);
  const auto r11 = L.residue(a.a11), r21 = L.residue(a.a21);
  if (r11 == 0) return std::nullopt;
  auto k = local_ring(F_, *x_, 1);
  return k->mul(r21, k->inv(r11));
}

bool VertexSpace::in_tower(const LevelMat& level) const {
  if (x_index_ < 0) return false;
  return level_at(level, x_index_).a11 == 0;
}

std::string VertexSpace::layer_tag(int n, const LevelMat& level) const {
  const int i = band(n);
  std::string tag = i == 0 ? "nucleus" : "L" + std::to_string(i);
  if (x_index_ >= 0) {
    auto pos = position(level);
    if (!pos) {
      tag += "@inf";
      const LocalRing& L = ring_.local(x_index_);
      const int v = L.valuation(level_at(level, x_index_).a11);
      if (v < L.precision()) tag += "/v" + std::to_string(v);
    } else {
      auto k = local_ring(F_, *x_, 1);
      tag += "@" + poly::format(*F_, k->to_poly(*pos));
    }
  }
  return tag;
}

}  // namespace hecke
