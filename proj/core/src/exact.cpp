#include "hecke/exact.hpp"

#include <cctype>
#include <sstream>

#include "hecke/errors.hpp"
#include "hecke/factor.hpp"

namespace hecke {

namespace qpoly {

void trim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const QPoly& f) { return static_cast<int>(f.size()) - 1; }

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

QPoly sub(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  trim(r);
  return r;
}

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

QPoly scale(const QPoly& a, const mpq_class& c) {
  if (c == 0) return {};
  QPoly r(a);
  for (auto& x : r) x *= c;
  return r;
}

void divmod(const QPoly& a, const QPoly& b, QPoly& quo, QPoly& rem) {
  if (b.empty()) throw InvariantError("polynomial division by zero");
  rem = a;
  trim(rem);
  quo.assign(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0, mpq_class(0));
  const mpq_class lead = b.back();
  while (rem.size() >= b.size()) {
    const size_t shift = rem.size() - b.size();
    const mpq_class c = rem.back() / lead;
    quo[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) rem[shift + i] -= c * b[i];
    rem.pop_back();
    trim(rem);
  }
  trim(quo);
}

QPoly mod(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return r;
}

QPoly monic(const QPoly& f) {
  if (f.empty()) return f;
  return scale(f, 1 / f.back());
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  QPoly x = a, y = b;
  trim(x);
  trim(y);
  while (!y.empty()) {
    QPoly r = mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return monic(x);
}

QPoly derivative(const QPoly& f) {
  QPoly r;
  for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<unsigned long>(i));
  trim(r);
  return r;
}

mpq_class eval(const QPoly& f, const mpq_class& x) {
  mpq_class acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = acc * x + f[i];
  return acc;
}

std::string format(const QPoly& f, std::string_view var) {
  if (f.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = f.size(); i-- > 0;) {
    mpq_class c = f[i];
    if (c == 0) continue;
    if (c < 0) {
      os << "-";
      c = -c;
    } else if (!first) {
      os << "+";
    }
    first = false;
    const bool unit = c == 1;
    if (!unit || i == 0) os << format_rational(c);
    if (i > 0) {
      if (!unit) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

QPoly parse(std::string_view s, std::string_view var) {
  std::string t;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) t += c;
  if (t.empty()) throw ConfigError("empty polynomial");
  QPoly r;
  size_t i = 0;
  auto fail = [&] { throw ConfigError("cannot parse polynomial '" + std::string(s) + "'"); };
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+' || t[i] == '-') {
      sign = t[i] == '-' ? -1 : 1;
      ++i;
    } else if (i != 0) {
      fail();
    }
    size_t j = i;
    while (j < t.size() && (std::isdigit(static_cast<unsigned char>(t[j])) || t[j] == '/')) ++j;
    const bool has_coef = j > i;
    mpq_class coef = 1;
    if (has_coef) coef = parse_rational(t.substr(i, j - i));
    i = j;
    const bool star = i < t.size() && t[i] == '*';
    if (star) ++i;
    unsigned long power = 0;
    if (t.compare(i, var.size(), var) == 0) {
      i += var.size();
      power = 1;
      if (i < t.size() && t[i] == '^') {
        ++i;
        size_t k = i;
        while (k < t.size() && std::isdigit(static_cast<unsigned char>(t[k]))) ++k;
        if (k == i) fail();
        power = std::stoul(t.substr(i, k - i));
        i = k;
      }
    } else if (!has_coef || star) {
      fail();
    }
    if (i < t.size() && t[i] != '+' && t[i] != '-') fail();
    if (r.size() <= power) r.resize(power + 1);
    r[power] += sign * coef;
  }
  trim(r);
  return r;
}

}  // namespace qpoly

namespace zpoly {

void trim(ZPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

mpz_class content(const ZPoly& f) {
  mpz_class g = 0;
  for (const auto& c : f) g = gcd(g, c);
  return g;
}

ZPoly primitive(const ZPoly& f) {
  ZPoly r(f);
  trim(r);
  if (r.empty()) return r;
  mpz_class c = content(r);
  if (r.back() < 0) c = -c;
  for (auto& x : r) x /= c;
  return r;
}

ZPoly from_q(const QPoly& f) {
  mpz_class l = 1;
  for (const auto& c : f) l = lcm(l, c.get_den());
  ZPoly r;
  for (const auto& c : f) r.push_back(c.get_num() * (l / c.get_den()));
  return primitive(r);
}

QPoly to_q(const ZPoly& f) {
  QPoly r(f.begin(), f.end());
  qpoly::trim(r);
  return r;
}

ZPoly mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quo) {
  if (b.empty()) return false;
  ZPoly rem(a);
  trim(rem);
  ZPoly q(rem.size() >= b.size() ? rem.size() - b.size() + 1 : 0);
  while (rem.size() >= b.size()) {
    const size_t shift = rem.size() - b.size();
    if (!mpz_divisible_p(rem.back().get_mpz_t(), b.back().get_mpz_t())) return false;
    const mpz_class c = rem.back() / b.back();
    q[shift] = c;
    for (size_t i = 0; i < b.size(); ++i) rem[shift + i] -= c * b[i];
    trim(rem);
  }
  if (!rem.empty()) return false;
  if (quo) {
    trim(q);
    *quo = std::move(q);
  }
  return true;
}

std::string format(const ZPoly& f, std::string_view var) { return qpoly::format(to_q(f), var); }

}  // namespace zpoly

mpq_class parse_rational(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw ConfigError("empty rational");
  mpq_class r;
  if (r.set_str(t, 10) != 0) throw ConfigError("cannot parse rational '" + t + "'");
  if (r.get_den() == 0) throw ConfigError("zero denominator in '" + t + "'");
  r.canonicalize();
  return r;
}

std::string format_rational(const mpq_class& x) { return x.get_str(); }

// ---- NumberField ----

std::shared_ptr<const NumberField> NumberField::rationals() {
  static const auto Q = std::shared_ptr<const NumberField>(new NumberField(QPoly{0, 1}));
  return Q;
}

std::shared_ptr<const NumberField> NumberField::make(const QPoly& m) {
  QPoly f = m;
  qpoly::trim(f);
  if (qpoly::degree(f) < 1) throw ConfigError("minimal polynomial must have degree >= 1");
  f = qpoly::monic(f);
  if (qpoly::degree(f) == 1) return rationals();
  if (!is_irreducible(zpoly::from_q(f)))
    throw HypothesisError("minimal polynomial " + qpoly::format(f) + " is reducible over Q");
  return std::shared_ptr<const NumberField>(new NumberField(std::move(f)));
}

// ---- AlgNum ----

AlgNum::AlgNum(FieldRef K, const mpq_class& c) : K_(std::move(K)) {
  if (c != 0) c_.push_back(c);
}

AlgNum::AlgNum(FieldRef K, QPoly residue) : K_(std::move(K)) {
  qpoly::trim(residue);
  if (qpoly::degree(residue) >= K_->degree()) residue = qpoly::mod(residue, K_->modulus());
  c_ = std::move(residue);
}

AlgNum AlgNum::generator(const FieldRef& K) { return AlgNum(K, QPoly{0, 1}); }

mpq_class AlgNum::to_rational() const {
  if (!is_rational()) throw InvariantError("algebraic number " + str() + " is not rational");
  return c_.empty() ? mpq_class(0) : c_[0];
}

FieldRef AlgNum::common(const AlgNum& o) const {
  if (K_ == o.K_ || *K_ == *o.K_) return K_;
  if (K_->degree() == 1) return o.K_;
  if (o.K_->degree() == 1) return K_;
  throw InvariantError("arithmetic across different number fields");
}

AlgNum AlgNum::operator+(const AlgNum& o) const {
  AlgNum r;
  r.K_ = common(o);
  r.c_ = qpoly::add(c_, o.c_);
  return r;
}

AlgNum AlgNum::operator-(const AlgNum& o) const {
  AlgNum r;
  r.K_ = common(o);
  r.c_ = qpoly::sub(c_, o.c_);
  return r;
}

AlgNum AlgNum::operator-() const {
  AlgNum r(*this);
  for (auto& c : r.c_) c = -c;
  return r;
}

AlgNum AlgNum::operator*(const AlgNum& o) const {
  AlgNum r;
  r.K_ = common(o);
  if (c_.size() <= 1 && o.c_.size() <= 1) {
    if (!c_.empty() && !o.c_.empty()) r.c_.push_back(c_[0] * o.c_[0]);
    return r;
  }
  r.c_ = qpoly::mod(qpoly::mul(c_, o.c_), r.K_->modulus());
  return r;
}

AlgNum AlgNum::inverse() const {
  if (is_zero()) throw InvariantError("division by zero in exact arithmetic");
  if (c_.size() == 1) return AlgNum(K_, 1 / c_[0]);
  // Extended Euclid: s*c + t*m = 1.
  QPoly r0 = K_->modulus(), r1 = c_, s0, s1{1};
  while (!r1.empty()) {
    QPoly q, rem;
    qpoly::divmod(r0, r1, q, rem);
    QPoly s2 = qpoly::sub(s0, qpoly::mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (qpoly::degree(r0) != 0) throw InvariantError("zero divisor modulo " + qpoly::format(K_->modulus()));
  return AlgNum(K_, qpoly::scale(s0, 1 / r0[0]));
}

AlgNum AlgNum::operator/(const AlgNum& o) const { return *this * o.inverse(); }

bool AlgNum::operator==(const AlgNum& o) const {
  if (c_ != o.c_) return false;
  return is_rational() || K_ == o.K_ || *K_ == *o.K_;
}

std::string AlgNum::str() const {
  if (is_rational()) return format_rational(to_rational());
  return qpoly::format(c_) + " mod (" + qpoly::format(K_->modulus()) + ")";
}

AlgNum parse_exact(std::string_view s) {
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) return AlgNum(NumberField::rationals(), parse_rational(s));
  // The variable is the first letter that appears; "x" when both parts are constant.
  std::string var = "x";
  for (char c : s)
    if (std::isalpha(static_cast<unsigned char>(c))) {
      var = std::string(1, c);
      break;
    }
  const QPoly m = qpoly::parse(s.substr(0, colon), var);
  const QPoly residue = qpoly::parse(s.substr(colon + 1), var);
  auto K = NumberField::make(m);
  if (K->degree() == 1) {
    // Linear minimal polynomial: substitute its root.
    const mpq_class root = -m[0] / m[1];
    return AlgNum(K, qpoly::eval(residue, root));
  }
  return AlgNum(K, residue);
}

}  // namespace hecke
