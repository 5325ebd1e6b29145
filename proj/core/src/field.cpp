#include "hecke/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "hecke/errors.hpp"

namespace hecke {

namespace {

// Polynomials over F_p with small integer coefficients, used only while
// constructing the tables.
using PPoly = std::vector<unsigned>;

void ptrim(PPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

PPoly pmulmod(const PPoly& a, const PPoly& b, const PPoly& m, unsigned p) {
  PPoly r(a.size() + b.size(), 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  ptrim(r);
  const size_t dm = m.size() - 1;  // m monic
  while (r.size() > dm) {
    unsigned c = r.back();
    size_t off = r.size() - 1 - dm;
    for (size_t i = 0; i <= dm; ++i) r[off + i] = (r[off + i] + (p - c) * m[i]) % p;
    ptrim(r);
  }
  return r;
}

PPoly code_to_ppoly(unsigned code, unsigned p) {
  PPoly f;
  while (code) {
    f.push_back(code % p);
    code /= p;
  }
  return f;
}

unsigned ppoly_to_code(const PPoly& f, unsigned p) {
  unsigned c = 0;
  for (size_t i = f.size(); i-- > 0;) c = c * p + f[i];
  return c;
}

bool prime_irreducible(const PPoly& f, unsigned p) {
  // Trial division by every monic polynomial of degree <= deg f / 2.
  const int d = static_cast<int>(f.size()) - 1;
  for (int k = 1; 2 * k <= d; ++k) {
    unsigned count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (unsigned low = 0; low < count; ++low) {
      PPoly g = code_to_ppoly(low, p);
      g.resize(k + 1, 0);
      g[k] = 1;
      // remainder of f mod g
      PPoly r = f;
      while (r.size() >= g.size()) {
        unsigned c = r.back();
        size_t off = r.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i) r[off + i] = (r[off + i] + (p - c) * g[i]) % p;
        ptrim(r);
      }
      if (r.empty()) return false;
    }
  }
  return true;
}

}  // namespace

bool FieldCtx::is_prime_power(unsigned q, unsigned* p_out, unsigned* e_out) {
  if (q < 2) return false;
  unsigned p = 2;
  while (p * p <= q && q % p != 0) ++p;
  if (q % p != 0) p = q;
  unsigned e = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++e;
  }
  if (r != 1) return false;
  if (p_out) *p_out = p;
  if (e_out) *e_out = e;
  return true;
}

std::shared_ptr<const FieldCtx> FieldCtx::make(unsigned q) {
  unsigned p = 0, e = 0;
  if (!is_prime_power(q, &p, &e))
    throw ConfigError("q = " + std::to_string(q) + " is not a prime power");
  if (q > 256) throw ConfigError("q = " + std::to_string(q) + " exceeds the supported maximum 256");
  auto F = std::shared_ptr<FieldCtx>(new FieldCtx());
  F->p_ = p;
  F->e_ = e;
  F->q_ = q;

  // Smallest monic irreducible of degree e whose root generates F_q^x.
  if (e == 1) {
    F->modulus_ = {0, 1};
  } else {
    unsigned count = 1;
    for (unsigned i = 0; i < e; ++i) count *= p;
    bool found = false;
    for (unsigned low = 0; low < count && !found; ++low) {
      PPoly f = code_to_ppoly(low, p);
      f.resize(e + 1, 0);
      f[e] = 1;
      if (f[0] == 0 || !prime_irreducible(f, p)) continue;
      // order of x modulo f
      PPoly x = {0, 1}, acc = {1};
      unsigned order = 0;
      do {
        acc = pmulmod(acc, x, f, p);
        ++order;
      } while (!(acc.size() == 1 && acc[0] == 1));
      if (order == q - 1) {
        F->modulus_ = f;
        found = true;
      }
    }
    if (!found) throw InvariantError("no primitive defining polynomial found");
  }

  F->add_.assign(q * q, 0);
  F->mul_.assign(q * q, 0);
  F->neg_.assign(q, 0);
  F->inv_.assign(q, 0);
  for (unsigned a = 0; a < q; ++a) {
    auto da = code_to_ppoly(a, p);
    da.resize(e, 0);
    PPoly na(e);
    for (unsigned i = 0; i < e; ++i) na[i] = (p - da[i]) % p;
    ptrim(na);
    F->neg_[a] = static_cast<Fq>(ppoly_to_code(na, p));
    for (unsigned b = 0; b < q; ++b) {
      auto db = code_to_ppoly(b, p);
      db.resize(e, 0);
      PPoly s(e);
      for (unsigned i = 0; i < e; ++i) s[i] = (da[i] + db[i]) % p;
      ptrim(s);
      F->add_[a * q + b] = static_cast<Fq>(ppoly_to_code(s, p));
      PPoly pa = da, pb = db;
      ptrim(pa);
      ptrim(pb);
      F->mul_[a * q + b] = static_cast<Fq>(ppoly_to_code(pmulmod(pa, pb, F->modulus_, p), p));
    }
  }
  for (unsigned a = 1; a < q; ++a)
    for (unsigned b = 1; b < q; ++b)
      if (F->mul_[a * q + b] == 1) F->inv_[a] = static_cast<Fq>(b);

  if (e == 1) {
    for (unsigned g = 1; g < q; ++g) {
      unsigned order = 0;
      Fq acc = 1;
      do {
        acc = F->mul_[acc * q + g];
        ++order;
      } while (acc != 1);
      if (order == q - 1) {
        F->primitive_ = static_cast<Fq>(g);
        break;
      }
    }
  } else {
    F->primitive_ = static_cast<Fq>(p);  // the class of x
  }
  return F;
}

Fq FieldCtx::inv(Fq a) const {
  if (a == 0) throw InvariantError("inverse of zero in F_q");
  return inv_[a];
}

Fq FieldCtx::pow(Fq a, unsigned long long k) const {
  Fq r = 1;
  while (k) {
    if (k & 1) r = mul(r, a);
    a = mul(a, a);
    k >>= 1;
  }
  return r;
}

Fq FieldCtx::from_int(long long v) const {
  long long m = v % static_cast<long long>(p_);
  if (m < 0) m += p_;
  return static_cast<Fq>(m);
}

std::vector<unsigned> FieldCtx::digits(Fq a) const {
  std::vector<unsigned> d(e_, 0);
  for (unsigned i = 0; i < e_; ++i) {
    d[i] = a % p_;
    a = static_cast<Fq>(a / p_);
  }
  return d;
}

std::string FieldCtx::format(Fq a) const { return std::to_string(a); }

namespace poly {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

bool is_zero(const Poly& f) { return f.empty(); }

Poly constant(Fq c) { return c ? Poly{c} : Poly{}; }

Poly monomial(Fq c, int k) {
  if (!c) return {};
  Poly f(k + 1, 0);
  f[k] = c;
  return f;
}

Poly add(const FieldCtx& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = F.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

Poly sub(const FieldCtx& F, const Poly& a, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i)
    r[i] = F.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(r);
  return r;
}

Poly scale(const FieldCtx& F, const Poly& a, Fq c) {
  if (!c) return {};
  Poly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  trim(r);
  return r;
}

Poly mul(const FieldCtx& F, const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

Poly shift(const Poly& a, int k) {
  if (a.empty()) return {};
  Poly r(k, 0);
  r.insert(r.end(), a.begin(), a.end());
  return r;
}

void divmod(const FieldCtx& F, const Poly& a, const Poly& b, Poly& quo, Poly& rem) {
  if (b.empty()) throw InvariantError("polynomial division by zero");
  rem = a;
  trim(rem);
  const int db = degree(b);
  quo.assign(rem.size() > b.size() - 1 ? rem.size() - b.size() + 1 : 0, 0);
  const Fq lead_inv = F.inv(b.back());
  while (degree(rem) >= db) {
    const int k = degree(rem) - db;
    const Fq c = F.mul(rem.back(), lead_inv);
    quo[k] = c;
    for (int i = 0; i <= db; ++i) rem[k + i] = F.sub(rem[k + i], F.mul(c, b[i]));
    trim(rem);
  }
  trim(quo);
}

Poly mod(const FieldCtx& F, const Poly& a, const Poly& b) {
  if (degree(a) < degree(b)) return a;
  Poly q, r;
  divmod(F, a, b, q, r);
  return r;
}

Poly monic(const FieldCtx& F, const Poly& a) {
  if (a.empty()) return a;
  return scale(F, a, F.inv(a.back()));
}

Poly gcd(const FieldCtx& F, Poly a, Poly b) {
  while (!b.empty()) {
    Poly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

Poly xgcd(const FieldCtx& F, const Poly& a, const Poly& b, Poly& s, Poly& t) {
  Poly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    Poly q, r;
    divmod(F, r0, r1, q, r);
    Poly s2 = sub(F, s0, mul(F, q, s1));
    Poly t2 = sub(F, t0, mul(F, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) {
    s = {};
    t = {};
    return {};
  }
  const Fq li = F.inv(r0.back());
  s = scale(F, s0, li);
  t = scale(F, t0, li);
  return scale(F, r0, li);
}

Poly powmod(const FieldCtx& F, const Poly& a, unsigned long long k, const Poly& m) {
  Poly r = mod(F, {1}, m), base = mod(F, a, m);
  while (k) {
    if (k & 1) r = mod(F, mul(F, r, base), m);
    base = mod(F, mul(F, base, base), m);
    k >>= 1;
  }
  return r;
}

Poly pow(const FieldCtx& F, const Poly& a, unsigned k) {
  Poly r = {1};
  for (unsigned i = 0; i < k; ++i) r = mul(F, r, a);
  return r;
}

Fq eval(const FieldCtx& F, const Poly& a, Fq x) {
  Fq r = 0;
  for (size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

bool is_irreducible(const FieldCtx& F, const Poly& f) {
  const int d = degree(f);
  if (d < 1) return false;
  if (d == 1) return true;
  // Ben-Or: f is irreducible iff gcd(f, x^{q^i} - x) = 1 for i <= d/2.
  const Poly x = {0, 1};
  Poly xp = x;
  for (int i = 1; 2 * i <= d; ++i) {
    xp = powmod(F, xp, F.q(), f);
    Poly g = gcd(F, f, sub(F, xp, x));
    if (degree(g) > 0) return false;
  }
  return true;
}

std::vector<Poly> monic_irreducibles(const FieldCtx& F, int deg) {
  std::vector<Poly> out;
  unsigned long long count = 1;
  for (int i = 0; i < deg; ++i) count *= F.q();
  for (unsigned long long low = 0; low < count; ++low) {
    Poly f(deg + 1, 0);
    unsigned long long c = low;
    for (int i = 0; i < deg; ++i) {
      f[i] = static_cast<Fq>(c % F.q());
      c /= F.q();
    }
    f[deg] = 1;
    if (is_irreducible(F, f)) out.push_back(f);
  }
  return out;
}

std::string format(const FieldCtx& F, const Poly& f, std::string_view var) {
  if (f.empty()) return "0";
  std::string out;
  for (size_t i = f.size(); i-- > 0;) {
    if (!f[i]) continue;
    if (!out.empty()) out += '+';
    if (i == 0 || f[i] != 1) out += F.format(f[i]);
    if (i >= 1) out += var;
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out;
}

Poly parse(const FieldCtx& F, std::string_view s, std::string_view var) {
  std::string text;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  if (text.empty()) throw ConfigError("empty polynomial string");
  Poly out;
  size_t pos = 0;
  bool first = true;
  while (pos < text.size()) {
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-') {
      negative = text[pos] == '-';
      ++pos;
    } else if (!first) {
      throw ConfigError("malformed polynomial '" + std::string(s) + "'");
    }
    first = false;
    long long coef = 1;
    bool have_coef = false;
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos > start) {
      auto res = std::from_chars(text.data() + start, text.data() + pos, coef);
      if (res.ec != std::errc() || coef < 0 || coef >= static_cast<long long>(F.q()))
        throw ConfigError("coefficient out of range in '" + std::string(s) + "'");
      have_coef = true;
    }
    if (pos < text.size() && text[pos] == '*') ++pos;
    int exponent = 0;
    if (text.compare(pos, var.size(), var) == 0) {
      pos += var.size();
      exponent = 1;
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        size_t es = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == es) throw ConfigError("missing exponent in '" + std::string(s) + "'");
        std::from_chars(text.data() + es, text.data() + pos, exponent);
      }
    } else if (!have_coef) {
      throw ConfigError("malformed polynomial '" + std::string(s) + "'");
    }
    Fq c = static_cast<Fq>(coef);
    if (negative) c = F.neg(c);
    out = add(F, out, monomial(c, exponent));
  }
  return out;
}

}  // namespace poly
}  // namespace hecke
