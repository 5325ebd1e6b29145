#include "hecke/factor.hpp"

#include <algorithm>
#include <cstdint>
#include <random>

#include "hecke/errors.hpp"

namespace hecke {

namespace {

// ---- polynomials over F_p, p < 2^31 ----

using u64 = std::uint64_t;
using PPoly = std::vector<u64>;

struct Fp {
  u64 p;

  void trim(PPoly& f) const {
    while (!f.empty() && f.back() == 0) f.pop_back();
  }
  u64 pow(u64 a, u64 e) const {
    u64 r = 1;
    a %= p;
    for (; e; e >>= 1, a = a * a % p)
      if (e & 1) r = r * a % p;
    return r;
  }
  u64 inv(u64 a) const { return pow(a, p - 2); }

  PPoly reduce(const ZPoly& f) const {
    PPoly r;
    mpz_class m;
    for (const auto& c : f) {
      mpz_fdiv_r_ui(m.get_mpz_t(), c.get_mpz_t(), p);
      r.push_back(m.get_ui());
    }
    trim(r);
    return r;
  }
  PPoly sub(const PPoly& a, const PPoly& b) const {
    PPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + p - b[i]) % p;
    trim(r);
    return r;
  }
  PPoly mul(const PPoly& a, const PPoly& b) const {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i])
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    trim(r);
    return r;
  }
  void divmod(const PPoly& a, const PPoly& b, PPoly& q, PPoly& r) const {
    r = a;
    trim(r);
    q.assign(r.size() >= b.size() ? r.size() - b.size() + 1 : 0, 0);
    const u64 li = inv(b.back());
    while (!r.empty() && r.size() >= b.size()) {
      const size_t s = r.size() - b.size();
      const u64 c = r.back() * li % p;
      q[s] = c;
      for (size_t i = 0; i < b.size(); ++i) r[s + i] = (r[s + i] + p - c * b[i] % p) % p;
      trim(r);
    }
    trim(q);
  }
  PPoly mod(const PPoly& a, const PPoly& b) const {
    PPoly q, r;
    divmod(a, b, q, r);
    return r;
  }
  PPoly monic(const PPoly& f) const {
    if (f.empty()) return f;
    const u64 li = inv(f.back());
    PPoly r(f);
    for (auto& c : r) c = c * li % p;
    return r;
  }
  PPoly gcd(PPoly a, PPoly b) const {
    trim(a);
    trim(b);
    while (!b.empty()) {
      PPoly r = mod(a, b);
      a = std::move(b);
      b = std::move(r);
    }
    return monic(a);
  }
  PPoly powmod(PPoly base, mpz_class e, const PPoly& m) const {
    PPoly r{1};
    base = mod(base, m);
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base), m);
      base = mod(mul(base, base), m);
      e >>= 1;
    }
    return r;
  }
  // s*a + t*b = 1 for coprime a, b.
  void xgcd(const PPoly& a, const PPoly& b, PPoly& s, PPoly& t) const {
    PPoly r0 = a, r1 = b, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
      PPoly q, r;
      divmod(r0, r1, q, r);
      PPoly s2 = sub(s0, mul(q, s1)), t2 = sub(t0, mul(q, t1));
      r0 = std::move(r1);
      r1 = std::move(r);
      s0 = std::move(s1);
      s1 = std::move(s2);
      t0 = std::move(t1);
      t1 = std::move(t2);
    }
    if (r0.size() != 1) throw InvariantError("Hensel lift: modular factors are not coprime");
    const u64 li = inv(r0[0]);
    for (auto& c : s0) c = c * li % p;
    for (auto& c : t0) c = c * li % p;
    s = std::move(s0);
    t = std::move(t0);
  }
  PPoly derivative(const PPoly& f) const {
    PPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * (i % p) % p);
    trim(r);
    return r;
  }
};

// Equal-degree splitting of a monic product of irreducibles of degree d (p odd).
void equal_degree(const Fp& F, const PPoly& g, int d, std::mt19937_64& rng, std::vector<PPoly>& out) {
  const int n = static_cast<int>(g.size()) - 1;
  if (n == d) {
    out.push_back(g);
    return;
  }
  mpz_class e;
  mpz_ui_pow_ui(e.get_mpz_t(), F.p, d);
  e = (e - 1) / 2;
  std::uniform_int_distribution<u64> coef(0, F.p - 1);
  for (;;) {
    PPoly a(n);
    for (auto& c : a) c = coef(rng);
    F.trim(a);
    if (a.size() < 2) continue;
    PPoly b = F.sub(F.powmod(a, e, g), PPoly{1});
    PPoly c = F.gcd(g, b);
    if (c.size() > 1 && c.size() < g.size()) {
      PPoly q, r;
      F.divmod(g, c, q, r);
      equal_degree(F, c, d, rng, out);
      equal_degree(F, F.monic(q), d, rng, out);
      return;
    }
  }
}

// Monic irreducible factors of a monic squarefree g over F_p.
std::vector<PPoly> factor_mod_p(const Fp& F, PPoly g) {
  std::vector<PPoly> out;
  std::mt19937_64 rng(0x5eed + F.p);
  PPoly h{0, 1};
  const PPoly x{0, 1};
  for (int d = 1; 2 * d <= static_cast<int>(g.size()) - 1; ++d) {
    h = F.powmod(h, F.p, g);
    PPoly G = F.gcd(g, F.sub(h, x));
    if (G.size() > 1) {
      equal_degree(F, G, d, rng, out);
      PPoly q, r;
      F.divmod(g, G, q, r);
      g = F.monic(q);
      h = F.mod(h, g);
    }
  }
  if (g.size() > 1) out.push_back(g);
  return out;
}

// ---- integer helpers ----

mpz_class sym_mod(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (2 * r > m) r -= m;
  return r;
}

ZPoly reduce_mod(const ZPoly& f, const mpz_class& m) {
  ZPoly r;
  for (const auto& c : f) r.push_back(sym_mod(c, m));
  zpoly::trim(r);
  return r;
}

ZPoly lift(const PPoly& f) { return ZPoly(f.begin(), f.end()); }

ZPoly zsub(const ZPoly& a, const ZPoly& b) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  zpoly::trim(r);
  return r;
}

ZPoly zadd_scaled(const ZPoly& a, const ZPoly& b, const mpz_class& c) {
  ZPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += c * b[i];
  zpoly::trim(r);
  return r;
}


// Linear Hensel lift of f = g*h mod p to mod p^k, g monic.
void hensel_two(const Fp& F, const ZPoly& f, ZPoly& g, ZPoly& h, int k) {
  PPoly s, t;
  F.xgcd(F.reduce(g), F.reduce(h), s, t);
  mpz_class pj = F.p;
  for (int j = 1; j < k; ++j) {
    ZPoly err = zsub(f, zpoly::mul(g, h));
    for (auto& c : err) {
      if (!mpz_divisible_p(c.get_mpz_t(), pj.get_mpz_t())) throw InvariantError("Hensel lift lost congruence");
      c /= pj;
    }
    const PPoly e = F.reduce(err);
    const PPoly gp = F.reduce(g), hp = F.reduce(h);
    PPoly q, dg;
    F.divmod(F.mul(t, e), gp, q, dg);
    // dh = (e - dg*h) / g, exact mod p.
    PPoly dh, rem;
    F.divmod(F.sub(e, F.mul(dg, hp)), gp, dh, rem);
    if (!rem.empty()) throw InvariantError("Hensel lift: inexact correction");
    g = zadd_scaled(g, lift(dg), pj);
    h = zadd_scaled(h, lift(dh), pj);
    pj *= F.p;
  }
  g = reduce_mod(g, pj);
  h = reduce_mod(h, pj);
}

std::vector<ZPoly> zassenhaus(const ZPoly& f) {
  const int n = zpoly::degree(f);
  if (n <= 1) return {f};
  const mpz_class lc = f.back();

  // Pick the prime (among a few candidates) giving the fewest modular factors.
  const u64 candidates[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73,
                            79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157};
  u64 best_p = 0;
  std::vector<PPoly> best;
  int tried = 0;
  for (u64 p : candidates) {
    if (mpz_divisible_ui_p(lc.get_mpz_t(), p)) continue;
    Fp F{p};
    PPoly fp = F.reduce(f);
    if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
    auto facs = factor_mod_p(F, F.monic(fp));
    if (best_p == 0 || facs.size() < best.size()) {
      best_p = p;
      best = std::move(facs);
    }
    if (best.size() == 1 || ++tried == 5) break;
  }
  if (best_p == 0) {
    // Large primes always exist; widen the search deterministically.
    for (u64 p = 163;; p += 2) {
      bool prime = true;
      for (u64 d = 3; d * d <= p; d += 2)
        if (p % d == 0) prime = false;
      if (!prime || mpz_divisible_ui_p(lc.get_mpz_t(), p)) continue;
      Fp F{p};
      PPoly fp = F.reduce(f);
      if (F.gcd(fp, F.derivative(fp)).size() != 1) continue;
      best_p = p;
      best = factor_mod_p(F, F.monic(fp));
      break;
    }
  }
  if (best.size() == 1) return {f};
  const Fp F{best_p};

  // Precision: p^k > 2 * |lc| * 2^n * ||f||_2.
  mpz_class norm2 = 0;
  for (const auto& c : f) norm2 += c * c;
  mpz_class bound = sqrt(norm2) + 1;
  bound <<= n;
  bound *= 2 * abs(lc);
  int k = 1;
  mpz_class pk = best_p;
  while (pk <= bound) {
    pk *= best_p;
    ++k;
  }

  // Lift one factor at a time; the cofactor carries lc.
  std::vector<ZPoly> lifted;
  ZPoly rest = f;
  for (size_t i = 0; i + 1 < best.size(); ++i) {
    ZPoly g = lift(best[i]);
    PPoly hp{1};
    for (size_t j = i + 1; j < best.size(); ++j) hp = F.mul(hp, best[j]);
    const u64 lcp = F.reduce(ZPoly{rest.back()}).at(0);
    for (auto& c : hp) c = c * lcp % F.p;
    ZPoly h = lift(hp);
    hensel_two(F, rest, g, h, k);
    lifted.push_back(g);
    rest = h;
  }
  {
    // Last factor: rest = lc * g mod p^k.
    ZPoly g;
    mpz_class inv;
    mpz_class lcm = rest.back();
    mpz_invert(inv.get_mpz_t(), lcm.get_mpz_t(), pk.get_mpz_t());
    for (const auto& c : rest) g.push_back(sym_mod(c * inv, pk));
    zpoly::trim(g);
    lifted.push_back(g);
  }

  // Recombination over subsets of increasing size.
  std::vector<ZPoly> result;
  ZPoly remaining = f;
  std::vector<ZPoly> pool = lifted;
  for (size_t s = 1; 2 * s <= pool.size();) {
    bool found = false;
    std::vector<int> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = static_cast<int>(i);
    for (;;) {
      const mpz_class lcr = remaining.back();
      ZPoly G{lcr};
      for (int i : idx) G = reduce_mod(zpoly::mul(G, pool[i]), pk);
      ZPoly cand = zpoly::primitive(G);
      ZPoly quo;
      if (zpoly::degree(cand) > 0 && zpoly::divides(cand, remaining, &quo)) {
        result.push_back(cand);
        remaining = zpoly::primitive(quo);
        for (size_t i = s; i-- > 0;) pool.erase(pool.begin() + idx[i]);
        found = true;
        break;
      }
      // Next subset in lexicographic order.
      int i = static_cast<int>(s) - 1;
      while (i >= 0 && idx[i] == static_cast<int>(pool.size() - s) + i) --i;
      if (i < 0) break;
      ++idx[i];
      for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (zpoly::degree(remaining) > 0) result.push_back(zpoly::primitive(remaining));
  return result;
}

bool poly_less(const ZPoly& a, const ZPoly& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

}  // namespace

std::vector<std::pair<ZPoly, int>> squarefree_factorization(const ZPoly& f0) {
  QPoly f = zpoly::to_q(zpoly::primitive(f0));
  std::vector<std::pair<ZPoly, int>> out;
  if (qpoly::degree(f) < 1) return out;
  // Yun's algorithm.
  QPoly fp = qpoly::derivative(f);
  QPoly a = qpoly::gcd(f, fp);
  QPoly b, c, d, r;
  qpoly::divmod(f, a, b, r);
  qpoly::divmod(fp, a, c, r);
  d = qpoly::sub(c, qpoly::derivative(b));
  for (int i = 1; qpoly::degree(b) > 0; ++i) {
    a = qpoly::gcd(b, d);
    if (qpoly::degree(a) > 0) out.emplace_back(zpoly::from_q(a), i);
    QPoly nb, nc;
    qpoly::divmod(b, a, nb, r);
    qpoly::divmod(d, a, nc, r);
    b = std::move(nb);
    d = qpoly::sub(nc, qpoly::derivative(b));
  }
  return out;
}

std::vector<ZPoly> factor_squarefree(const ZPoly& f0) {
  ZPoly f = zpoly::primitive(f0);
  if (zpoly::degree(f) < 1) throw ConfigError("cannot factor a constant");
  std::vector<ZPoly> out;
  // Powers of x first; the modular step needs f(0) != 0 only for efficiency.
  if (f[0] == 0) {
    out.push_back(ZPoly{0, 1});
    f.erase(f.begin());
    f = zpoly::primitive(f);
  }
  if (zpoly::degree(f) >= 1) {
    for (auto& g : zassenhaus(f)) out.push_back(zpoly::primitive(g));
  }
  std::sort(out.begin(), out.end(), poly_less);
  return out;
}

std::vector<std::pair<ZPoly, int>> factor(const ZPoly& f) {
  std::vector<std::pair<ZPoly, int>> out;
  for (const auto& [g, m] : squarefree_factorization(f))
    for (auto& h : factor_squarefree(g)) out.emplace_back(std::move(h), m);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return poly_less(a.first, b.first); });
  return out;
}

bool is_irreducible(const ZPoly& f) {
  const auto parts = factor(f);
  return parts.size() == 1 && parts[0].second == 1;
}

}  // namespace hecke
