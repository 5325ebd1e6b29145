#include "hecke/groups.hpp"

#include <cstdlib>

#include "hecke/errors.hpp"

namespace hecke {

std::string to_string(SubgroupTag tag) {
  switch (tag) {
    case SubgroupTag::GL2: return "GL2";
    case SubgroupTag::Borel: return "Borel";
    case SubgroupTag::TkLtimesU: return "TkLtimesU";
    case SubgroupTag::U: return "U";
    case SubgroupTag::Scalars: return "Scalars";
    case SubgroupTag::Tk: return "Tk";
  }
  return "?";
}

std::uint64_t enumeration_budget() {
  if (const char* env = std::getenv("HECKE_LAB_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
    throw ConfigError("HECKE_LAB_BUDGET must be a positive integer");
  }
  return std::uint64_t{1} << 20;
}

mpz_class unit_count_formula(unsigned q, int r, int d) {
  mpz_class Q, rest;
  mpz_ui_pow_ui(Q.get_mpz_t(), q, r);
  mpz_ui_pow_ui(rest.get_mpz_t(), q, static_cast<unsigned long>(r) * (d - 1));
  return (Q - 1) * rest;
}

mpz_class p1_count_formula(unsigned q, int r, int d) {
  mpz_class Q, rest;
  mpz_ui_pow_ui(Q.get_mpz_t(), q, r);
  mpz_ui_pow_ui(rest.get_mpz_t(), q, static_cast<unsigned long>(r) * (d - 1));
  return (Q + 1) * rest;
}

namespace {

mpz_class local_order(SubgroupTag tag, const LocalRing& L) {
  const mpz_class S = L.size(), U = L.unit_count();
  switch (tag) {
    case SubgroupTag::GL2: return S * U * (2 * S - U) * U;  // |PGL2| * |O^x|
    case SubgroupTag::Borel: return U * U * S;
    case SubgroupTag::U: return S;
    case SubgroupTag::Scalars: return U;
    default: return 0;
  }
}

}  // namespace

mpz_class group_order(const SubgroupSpec& spec) {
  const LevelRing& R = *spec.ring;
  const unsigned q = R.field_ptr()->q();
  if (spec.tag == SubgroupTag::Tk) return q - 1;
  if (spec.tag == SubgroupTag::TkLtimesU) {
    mpz_class o = q - 1;
    for (size_t i = 0; i < R.npoints(); ++i) o *= R.local(i).size();
    return o;
  }
  mpz_class o = 1;
  for (size_t i = 0; i < R.npoints(); ++i) o *= local_order(spec.tag, R.local(i));
  return o;
}

std::vector<LevelMat> enumerate_group(const SubgroupSpec& spec) {
  return enumerate_group(spec, enumeration_budget());
}

std::vector<LevelMat> enumerate_group(const SubgroupSpec& spec, std::uint64_t budget) {
  const LevelRing& R = *spec.ring;
  const mpz_class order = group_order(spec);
  if (order > mpz_class(std::to_string(budget)))
    throw BudgetError("enumerating " + to_string(spec.tag) + " needs " + order.get_str() +
                      " elements, budget is " + std::to_string(budget) +
                      " (raise HECKE_LAB_BUDGET)");
  const size_t np = R.npoints();
  const unsigned q = R.field_ptr()->q();

  if (spec.tag == SubgroupTag::Tk || spec.tag == SubgroupTag::TkLtimesU ||
      spec.tag == SubgroupTag::U) {
    std::vector<LevelMat> out;
    const bool with_u = spec.tag != SubgroupTag::Tk;
    const bool with_t = spec.tag != SubgroupTag::U;
    for (Fq a = 1; a < (with_t ? q : 2); ++a) {
      std::vector<std::uint32_t> s(np, 0);
      while (true) {
        LevelMat m(4 * np);
        for (size_t i = 0; i < np; ++i) set_level_at(m, i, M2{a, s[i], 0, 1});
        out.push_back(pgl2_normalize(R, m));
        if (!with_u) break;
        size_t k = 0;
        while (k < np && ++s[k] == R.local(k).size()) s[k++] = 0;
        if (k == np) break;
      }
    }
    return out;
  }

  // Product of per-point element lists.
  std::vector<std::vector<M2>> per(np);
  for (size_t i = 0; i < np; ++i) {
    const LocalRing& L = R.local(i);
    const std::uint32_t S = L.size();
    for (std::uint32_t a = 0; a < S; ++a) {
      if (spec.tag == SubgroupTag::Scalars) {
        if (L.is_unit(a)) per[i].push_back(M2{a, 0, 0, a});
        continue;
      }
      for (std::uint32_t b = 0; b < S; ++b)
        for (std::uint32_t d = 0; d < S; ++d) {
          if (spec.tag == SubgroupTag::Borel) {
            if (b == 0 && L.is_unit(a) && L.is_unit(d)) {
              for (std::uint32_t c = 0; c < S; ++c) per[i].push_back(M2{a, c, 0, d});
            }
            continue;
          }
          for (std::uint32_t c = 0; c < S; ++c) {
            M2 m{a, b, c, d};
            if (L.is_unit(m2_det(L, m))) per[i].push_back(m);
          }
        }
    }
  }
  std::vector<LevelMat> out;
  std::vector<size_t> idx(np, 0);
  while (true) {
    LevelMat m(4 * np);
    for (size_t i = 0; i < np; ++i) set_level_at(m, i, per[i][idx[i]]);
    out.push_back(std::move(m));
    size_t k = 0;
    while (k < np && ++idx[k] == per[k].size()) idx[k++] = 0;
    if (k == np) break;
  }
  return out;
}

std::vector<std::pair<LocalRing::Elem, LocalRing::Elem>> enumerate_p1(const LocalRing& R) {
  std::vector<std::pair<LocalRing::Elem, LocalRing::Elem>> out;
  for (std::uint32_t b = 0; b < R.size(); ++b) out.emplace_back(1, b);
  for (std::uint32_t a = 0; a < R.size(); ++a)
    if (!R.is_unit(a)) out.emplace_back(a, 1);
  return out;
}

namespace {

std::uint64_t local_pgl2_order(const LocalRing& L) {
  const std::uint64_t S = L.size(), U = L.unit_count();
  return S * U * (2 * S - U);
}

std::uint64_t local_index(const LocalRing& L, const M2& m) {
  const std::uint64_t S = L.size(), U = L.unit_count();
  if (m.a11 == 1) {
    const auto det = L.sub(m.a22, L.mul(m.a12, m.a21));
    return (static_cast<std::uint64_t>(m.a21) * S + m.a12) * U + L.unit_index(det);
  }
  if (m.a21 != 1 || L.is_unit(m.a11)) throw InvariantError("pgl2_index on a non-normalized matrix");
  return S * S * U + (static_cast<std::uint64_t>(L.nonunit_index(m.a11)) * U + L.unit_index(m.a12)) * S +
         m.a22;
}

M2 local_element(const LocalRing& L, std::uint64_t i) {
  const std::uint64_t S = L.size(), U = L.unit_count();
  if (i < S * S * U) {
    const auto det = L.unit_at(static_cast<std::uint32_t>(i % U));
    i /= U;
    const auto a12 = static_cast<std::uint32_t>(i % S);
    const auto a21 = static_cast<std::uint32_t>(i / S);
    return M2{1, a12, a21, L.add(det, L.mul(a12, a21))};
  }
  i -= S * S * U;
  const auto a22 = static_cast<std::uint32_t>(i % S);
  i /= S;
  const auto a12 = L.unit_at(static_cast<std::uint32_t>(i % U));
  const auto a11 = L.nonunit_at(static_cast<std::uint32_t>(i / U));
  return M2{a11, a12, 1, a22};
}

}  // namespace

std::uint64_t pgl2_order(const LevelRing& R) {
  std::uint64_t o = 1;
  for (size_t i = 0; i < R.npoints(); ++i) o *= local_pgl2_order(R.local(i));
  return o;
}

std::uint64_t pgl2_index(const LevelRing& R, const LevelMat& m) {
  std::uint64_t idx = 0;
  for (size_t i = 0; i < R.npoints(); ++i)
    idx = idx * local_pgl2_order(R.local(i)) + local_index(R.local(i), level_at(m, i));
  return idx;
}

LevelMat pgl2_element(const LevelRing& R, std::uint64_t index) {
  LevelMat m(4 * R.npoints());
  for (size_t i = R.npoints(); i-- > 0;) {
    const auto o = local_pgl2_order(R.local(i));
    set_level_at(m, i, local_element(R.local(i), index % o));
    index /= o;
  }
  return m;
}

}  // namespace hecke
