#include "hecke/edges.hpp"

#include <algorithm>

#include "hecke/errors.hpp"

namespace hecke {

namespace {

M2 rep_matrix(const LocalRing& R, const CosetRep& rep, int d, const LocalRing& kx) {
  const auto pi = R.uniformizer();
  const auto c = R.from_poly(kx.to_poly(rep.c));
  switch (rep.kind) {
    case CosetRep::Kind::Ramified: {
      LocalRing::Elem pd = 1;
      for (int i = 0; i < d; ++i) pd = R.mul(pd, pi);
      return M2{pi, R.mul(pd, c), 0, 1};
    }
    case CosetRep::Kind::Translate: return M2{pi, c, 0, 1};
    case CosetRep::Kind::Vertical: return M2{1, 0, 0, pi};
  }
  return M2{};
}

// a / pi for a of valuation >= 1, computed from the representative polynomial.
LocalRing::Elem divide_by_pi(const LocalRing& big, LocalRing::Elem a, const LocalRing& small) {
  Poly f = big.to_poly(a);
  if (big.point().inf) {
    if (!f.empty() && f[0] != 0) throw InvariantError("division by the uniformizer of a unit");
    if (!f.empty()) f.erase(f.begin());
    return small.from_poly(f);
  }
  Poly quo, rem;
  poly::divmod(big.field(), f, big.point().poly, quo, rem);
  if (!rem.empty()) throw InvariantError("division by the uniformizer of a unit");
  return small.from_poly(quo);
}

}  // namespace

std::vector<CosetRep> coset_reps(const FieldPtr& F, const Point& x, int d) {
  auto kx = local_ring(F, x, 1);
  std::vector<CosetRep> out;
  if (d >= 1) {
    for (std::uint32_t c = 0; c < kx->size(); ++c) out.push_back({CosetRep::Kind::Ramified, c});
  } else {
    for (std::uint32_t c = 0; c < kx->size(); ++c) out.push_back({CosetRep::Kind::Translate, c});
    out.push_back({CosetRep::Kind::Vertical, 0});
  }
  return out;
}

bool same_coset(const FieldPtr& F, const Point& x, int d, const CosetRep& a, const CosetRep& b) {
  auto R = local_ring(F, x, d + 3);
  auto kx = local_ring(F, x, 1);
  const M2 A = rep_matrix(*R, a, d, *kx), B = rep_matrix(*R, b, d, *kx);
  const M2 adj{A.a22, R->neg(A.a12), R->neg(A.a21), A.a11};
  const M2 P = m2_mul(*R, adj, B);
  for (auto e : {P.a11, P.a12, P.a21, P.a22})
    if (R->valuation(e) < 1) return false;
  // det A = pi for every representative, so g = P / pi.
  auto S = local_ring(F, x, d + 2);
  const M2 g{divide_by_pi(*R, P.a11, *S), divide_by_pi(*R, P.a12, *S), divide_by_pi(*R, P.a21, *S),
             divide_by_pi(*R, P.a22, *S)};
  if (!S->is_unit(m2_det(*S, g))) return false;
  if (d == 0) return true;
  return S->valuation(S->sub(g.a11, 1)) >= d && S->valuation(g.a12) >= d && S->valuation(g.a21) >= d &&
         S->valuation(S->sub(g.a22, 1)) >= d;
}

HeckeOperator::HeckeOperator(std::shared_ptr<const VertexSpace> space, Point x)
    : space_(std::move(space)), F_(space_->field_ptr()), x_(std::move(x)) {
  d_ = space_->divisor().mult(x_);
  r_ = x_.degree();
  x_index_ = space_->ring().index_of(x_);
  kx_ = local_ring(F_, x_, 1);
  reps_ = coset_reps(F_, x_, d_);
}

LevelMat HeckeOperator::transport_level(int n, const LevelMat& a, const Inclusion& inc,
                                        LocalRing::Elem c) const {
  const LevelRing& ring = space_->ring();
  LevelMat b(a.size());
  for (size_t i = 0; i < ring.npoints(); ++i) {
    const LocalRing& L = ring.local(i);
    const M2 ai = level_at(a, i);
    if (static_cast<int>(i) != x_index_) {
      set_level_at(b, i, m2_mul(L, ai, local_matrix(inc, n, 0, L)));
      continue;
    }
    // At x: work one step deeper, then apply Delta^{-1} and the coset shift.
    auto big = local_ring(F_, x_, d_ + 1);
    const M2 lifted{L.transfer(ai.a11, *big), L.transfer(ai.a12, *big), L.transfer(ai.a21, *big),
                    L.transfer(ai.a22, *big)};
    const M2 M = m2_mul(*big, lifted, local_matrix(inc, n, 0, *big));
    const auto m11 = divide_by_pi(*big, M.a11, L), m12 = divide_by_pi(*big, M.a12, L);
    const auto m21 = big->transfer(M.a21, L), m22 = big->transfer(M.a22, L);
    LocalRing::Elem shift = L.from_poly(kx_->to_poly(c));
    for (int k = 0; k < d_ - 1; ++k) shift = L.mul(shift, L.uniformizer());
    set_level_at(b, i, M2{L.add(m11, L.mul(shift, m21)), L.add(m12, L.mul(shift, m22)), m21, m22});
  }
  return pgl2_normalize(ring, b);
}

RawTarget HeckeOperator::transport(int n, const LevelMat& a, const CosetRep& rep) const {
  LocalRing::Elem l1 = 0, l2 = 0;
  std::string tag;
  switch (rep.kind) {
    case CosetRep::Kind::Ramified: {
      const LocalRing& L = space_->ring().local(x_index_);
      const M2 ax = level_at(a, x_index_);
      l1 = L.residue(ax.a11);
      l2 = L.residue(ax.a12);
      tag = l1 == 0 ? "CaseI" : "CaseII";
      break;
    }
    case CosetRep::Kind::Translate:
      l1 = 1;
      l2 = kx_->neg(rep.c);
      tag = "UnramifiedTwist(1,0)";
      break;
    case CosetRep::Kind::Vertical:
      l1 = 0;
      l2 = 1;
      tag = "UnramifiedTwist(0,1)";
      break;
  }
  if (l1 != 0) {
    l2 = kx_->mul(l2, kx_->inv(l1));
    l1 = 1;
  } else {
    l2 = 1;
  }
  Inclusion inc;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_tuple(n, l1, l2);
    auto it = inclusion_cache_.find(key);
    if (it == inclusion_cache_.end())
      it = inclusion_cache_.emplace(key, inclusion(F_, n, 0, {functional_condition(F_, x_, l1, l2)})).first;
    inc = it->second;
  }
  return RawTarget{inc.col[0] - inc.col[1], transport_level(n, a, inc, rep.c), tag};
}

std::vector<Neighbor> HeckeOperator::aggregate(std::vector<std::pair<RawTarget, long long>> raw) const {
  std::map<Vertex, Neighbor> acc;
  for (auto& [t, mult] : raw) {
    Vertex v = space_->canonical_vertex(t.gap, t.level);
    auto& nb = acc[v];
    nb.target = v;
    nb.mult += mult;
    nb.tags[t.tag] += mult;
  }
  std::vector<Neighbor> out;
  for (auto& [v, nb] : acc) out.push_back(std::move(nb));
  return out;
}

std::vector<Neighbor> HeckeOperator::bruteforce(int n, const LevelMat& a) const {
  std::vector<std::pair<RawTarget, long long>> raw;
  for (const auto& rep : reps_) raw.emplace_back(transport(n, a, rep), 1);
  return aggregate(std::move(raw));
}

Inclusion HeckeOperator::symbolic_inclusion(int n, bool twist_second, LocalRing::Elem c) const {
  const Poly pi_section = x_.inf ? Poly{1} : x_.poly;
  Inclusion inc;
  if (twist_second) {
    inc.col[0] = n;
    inc.col[1] = -r_;
    inc.s[0][0] = {1};
    inc.s[1][1] = pi_section;
  } else {
    inc.col[0] = n - r_;
    inc.col[1] = 0;
    inc.s[0][0] = pi_section;
    inc.s[0][1] = x_.inf ? poly::monomial(static_cast<Fq>(c), n) : kx_->to_poly(c);
    inc.s[1][1] = {1};
  }
  if (inc.col[0] < inc.col[1]) {
    // Weyl swap: keep the larger summand first.
    std::swap(inc.col[0], inc.col[1]);
    std::swap(inc.s[0][0], inc.s[0][1]);
    std::swap(inc.s[1][0], inc.s[1][1]);
  }
  return inc;
}

std::vector<Neighbor> HeckeOperator::cusp_rule(int n, const LevelMat& a) const {
  if (n <= space_->deep_bound())
    throw HypothesisError("cusp rule called at gap " + std::to_string(n) + ", needs gap > " +
                          std::to_string(space_->deep_bound()));
  const long long Q = static_cast<long long>(kx_->size());
  std::vector<std::pair<RawTarget, long long>> raw;
  auto push = [&](bool twist_second, LocalRing::Elem c, long long mult, const std::string& tag) {
    const Inclusion inc = symbolic_inclusion(n, twist_second, c);
    raw.emplace_back(RawTarget{inc.col[0] - inc.col[1], transport_level(n, a, inc, c), tag}, mult);
  };
  if (d_ >= 1) {
    const LocalRing& L = space_->ring().local(x_index_);
    const M2 ax = level_at(a, x_index_);
    const auto l1 = L.residue(ax.a11), l2 = L.residue(ax.a12);
    if (l1 == 0) {
      for (std::uint32_t c = 0; c < kx_->size(); ++c) push(true, c, 1, "CaseI");
    } else {
      // Kernel of (l1, l2) is cut out by s1(x) = c s2(x) with c = -l2 / l1.
      const auto c = kx_->neg(kx_->mul(l2, kx_->inv(l1)));
      const Inclusion inc = symbolic_inclusion(n, false, c);
      raw.emplace_back(RawTarget{inc.col[0] - inc.col[1], transport_level(n, a, inc, 0), "CaseII"}, Q);
    }
  } else {
    push(true, 0, 1, "UnramifiedTwist(0,1)");
    push(false, 0, Q, "UnramifiedTwist(1,0)");
  }
  return aggregate(std::move(raw));
}

std::string format_tags(const std::map<std::string, long long>& tags) {
  std::string s;
  for (const auto& [name, count] : tags) {
    if (!s.empty()) s += '+';
    s += name;
    if (count != 1) s += "*" + std::to_string(count);
  }
  return s;
}

std::vector<LatticeMove> pgln_moves(int n, int deg_x, unsigned q) {
  if (n < 2) throw ConfigError("lattice walk needs rank >= 2");
  std::vector<LatticeMove> out;
  for (int i = 1; i <= n; ++i) {
    LatticeMove m;
    m.delta.assign(n - 1, 0);
    if (i > 1) m.delta[i - 2] += deg_x;
    if (i < n) m.delta[i - 1] -= deg_x;
    mpz_ui_pow_ui(m.mult.get_mpz_t(), q, static_cast<unsigned long>(deg_x) * (n - i));
    out.push_back(std::move(m));
  }
  return out;
}

mpz_class qbinom(int n, int r, const mpz_class& Q) {
  if (r < 0 || r > n) return 0;
  mpz_class num = 1, den = 1, pw;
  for (int i = 0; i < r; ++i) {
    mpz_pow_ui(pw.get_mpz_t(), Q.get_mpz_t(), n - i);
    num *= pw - 1;
    mpz_pow_ui(pw.get_mpz_t(), Q.get_mpz_t(), i + 1);
    den *= pw - 1;
  }
  return num / den;
}

mpz_class qbinom_degree_sum(int n, int r, const mpz_class& Q) {
  mpz_class total = 0, pw;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != r) continue;
    long long e = -static_cast<long long>(r) * (r - 1) / 2;
    for (int i = 1; i <= n; ++i)
      if (mask & (1u << (i - 1))) e += n - i;
    mpz_pow_ui(pw.get_mpz_t(), Q.get_mpz_t(), static_cast<unsigned long>(e));
    total += pw;
  }
  return total;
}

}  // namespace hecke
