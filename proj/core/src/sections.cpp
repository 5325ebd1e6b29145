#include "hecke/sections.hpp"

#include "hecke/errors.hpp"

namespace hecke {

namespace {

Poly residue_poly(const FieldCtx& F, LocalRing::Elem code) {
  Poly f;
  while (code) {
    f.push_back(static_cast<Fq>(code % F.q()));
    code /= F.q();
  }
  return f;
}

// Coordinates of the local value of the monomial t^j, viewed in O(m), in the
// precision-c ring at the condition's point.
fqla::Vec monomial_coords(const LocalRing& R, int j, int m) {
  return R.coeffs(local_expand(R, poly::monomial(1, j), m));
}

fqla::Mat constraint_rows(const FieldPtr& F, int a, int b, int m,
                          const std::vector<LatticeCondition>& conds, int& n1, int& n2) {
  n1 = std::max(0, a + m + 1);
  n2 = std::max(0, b + m + 1);
  const FieldCtx& K = *F;
  fqla::Mat rows;
  for (const auto& c : conds) {
    auto R = local_ring(F, c.point, c.precision);
    const int L = R->length();
    std::vector<fqla::Vec> loc1(n1), loc2(n2);
    for (int j = 0; j < n1; ++j) loc1[j] = monomial_coords(*R, j, a + m);
    for (int j = 0; j < n2; ++j) loc2[j] = monomial_coords(*R, j, b + m);
    for (const auto& e : c.equations) {
      fqla::Vec row(n1 + n2, 0);
      for (int j = 0; j < n1; ++j) {
        Fq acc = 0;
        for (int k = 0; k < L; ++k) acc = K.add(acc, K.mul(e[k], loc1[j][k]));
        row[j] = acc;
      }
      for (int j = 0; j < n2; ++j) {
        Fq acc = 0;
        for (int k = 0; k < L; ++k) acc = K.add(acc, K.mul(e[L + k], loc2[j][k]));
        row[n1 + j] = acc;
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace

LatticeCondition functional_condition(const FieldPtr& F, const Point& pt, LocalRing::Elem l1,
                                      LocalRing::Elem l2) {
  auto R = local_ring(F, pt, 1);
  const int r = R->length();
  const Poly p1 = residue_poly(*F, l1), p2 = residue_poly(*F, l2);
  // Column i: image of t^i e_1 (i < r), then of t^i e_2.
  fqla::Mat cols;
  for (const Poly* l : {&p1, &p2})
    for (int i = 0; i < r; ++i) cols.push_back(R->coeffs(R->from_poly(poly::mul(*F, *l, poly::monomial(1, i)))));
  fqla::Mat eqs(r, fqla::Vec(2 * r, 0));
  for (int i = 0; i < 2 * r; ++i)
    for (int k = 0; k < r; ++k) eqs[k][i] = cols[i][k];
  fqla::rref(*F, eqs, 2 * r);
  if (eqs.empty()) throw InvariantError("functional condition with zero functional");
  return LatticeCondition{pt, 1, std::move(eqs)};
}

LatticeCondition generated_condition(const FieldPtr& F, const Point& pt, int c,
                                     const std::vector<std::pair<LocalRing::Elem, LocalRing::Elem>>& gens) {
  auto R = local_ring(F, pt, c);
  const int L = R->length();
  const LocalRing::Elem x = R->from_poly({0, 1});  // t, or u at infinity
  fqla::Mat span;
  for (const auto& [g1, g2] : gens) {
    LocalRing::Elem m = 1;
    for (int i = 0; i < L; ++i) {
      auto v1 = R->coeffs(R->mul(m, g1)), v2 = R->coeffs(R->mul(m, g2));
      fqla::Vec row(v1);
      row.insert(row.end(), v2.begin(), v2.end());
      span.push_back(std::move(row));
      m = R->mul(m, x);
    }
  }
  auto eqs = fqla::nullspace(*F, span, 2 * L);
  fqla::rref(*F, eqs, 2 * L);
  return LatticeCondition{pt, c, std::move(eqs)};
}

std::vector<Section> sections(const FieldPtr& F, int a, int b, int m,
                              const std::vector<LatticeCondition>& conds) {
  int n1 = 0, n2 = 0;
  auto rows = constraint_rows(F, a, b, m, conds, n1, n2);
  auto basis = fqla::nullspace(*F, rows, n1 + n2);
  std::vector<Section> out;
  for (const auto& v : basis) {
    Section s;
    s.s1.assign(v.begin(), v.begin() + n1);
    s.s2.assign(v.begin() + n1, v.end());
    poly::trim(s.s1);
    poly::trim(s.s2);
    out.push_back(std::move(s));
  }
  return out;
}

int h0(const FieldPtr& F, int a, int b, int m, const std::vector<LatticeCondition>& conds) {
  int n1 = 0, n2 = 0;
  auto rows = constraint_rows(F, a, b, m, conds, n1, n2);
  return n1 + n2 - fqla::rank(*F, rows, n1 + n2);
}

SplittingType splitting_type(const FieldPtr& F, int a, int b, const std::vector<LatticeCondition>& conds) {
  if (a < b) throw InvariantError("splitting_type expects a >= b");
  int colength = 0;
  for (const auto& c : conds) colength += c.colength();
  const int total = a + b - colength;
  int m = -a;
  while (h0(F, a, b, m, conds) == 0) {
    if (m > -a + colength + 1) throw InvariantError("no sections found in splitting_type");
    ++m;
  }
  SplittingType st{-m, total + m};
  if (st.a < st.b) throw InvariantError("inconsistent colength vs degree drop");
  auto expected = [&](int k) { return std::max(st.a + k + 1, 0) + std::max(st.b + k + 1, 0); };
  for (int k = -st.a - 1; k <= -st.b + 1; ++k)
    if (h0(F, a, b, k, conds) != expected(k))
      throw InvariantError("inconsistent colength vs degree drop");
  return st;
}

Inclusion inclusion(const FieldPtr& F, int a, int b, const std::vector<LatticeCondition>& conds) {
  const SplittingType st = splitting_type(F, a, b, conds);
  Inclusion inc;
  inc.col[0] = st.a;
  inc.col[1] = st.b;
  auto top = sections(F, a, b, -st.a, conds);
  if (top.empty()) throw InvariantError("missing top section");
  inc.s[0][0] = top[0].s1;
  inc.s[1][0] = top[0].s2;
  if (st.a == st.b) {
    if (top.size() != 2) throw InvariantError("balanced splitting without two sections");
    inc.s[0][1] = top[1].s1;
    inc.s[1][1] = top[1].s2;
    return inc;
  }
  // A section of E'(-b') outside the span of the first column times t^j.
  const int n1 = std::max(0, a - st.b + 1), n2 = std::max(0, b - st.b + 1);
  auto to_vec = [&](const Poly& s1, const Poly& s2) {
    fqla::Vec v(n1 + n2, 0);
    for (size_t i = 0; i < s1.size(); ++i) v[i] = s1[i];
    for (size_t i = 0; i < s2.size(); ++i) v[n1 + i] = s2[i];
    return v;
  };
  fqla::Mat span;
  for (int j = 0; j <= st.a - st.b; ++j)
    span.push_back(to_vec(poly::shift(inc.s[0][0], j), poly::shift(inc.s[1][0], j)));
  for (const auto& s : sections(F, a, b, -st.b, conds)) {
    if (!fqla::in_span(*F, span, to_vec(s.s1, s.s2), n1 + n2)) {
      inc.s[0][1] = s.s1;
      inc.s[1][1] = s.s2;
      return inc;
    }
  }
  throw InvariantError("no complementary section for the inclusion");
}

M2 local_matrix(const Inclusion& inc, int a, int b, const LocalRing& R) {
  const int row[2] = {a, b};
  LocalRing::Elem e[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const int shift = row[i] - inc.col[j];
      if (shift < 0) {
        if (!inc.s[i][j].empty()) throw InvariantError("inclusion entry of negative degree");
        e[i][j] = 0;
      } else {
        e[i][j] = local_expand(R, inc.s[i][j], shift);
      }
    }
  return M2{e[0][0], e[0][1], e[1][0], e[1][1]};
}

}  // namespace hecke
