#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hecke {

// Polynomials over Q and Z, coefficient vectors from degree 0 upwards, trimmed.
using QPoly = std::vector<mpq_class>;
using ZPoly = std::vector<mpz_class>;

namespace qpoly {
void trim(QPoly& f);
int degree(const QPoly& f);  // -1 for zero
QPoly add(const QPoly& a, const QPoly& b);
QPoly sub(const QPoly& a, const QPoly& b);
QPoly mul(const QPoly& a, const QPoly& b);
QPoly scale(const QPoly& a, const mpq_class& c);
void divmod(const QPoly& a, const QPoly& b, QPoly& quo, QPoly& rem);
QPoly mod(const QPoly& a, const QPoly& b);
QPoly monic(const QPoly& f);
QPoly gcd(const QPoly& a, const QPoly& b);  // monic
QPoly derivative(const QPoly& f);
mpq_class eval(const QPoly& f, const mpq_class& x);
std::string format(const QPoly& f, std::string_view var = "x");
// Accepts sums of terms c, c*x, c x^k, x^k with integer or p/q coefficients.
QPoly parse(std::string_view s, std::string_view var = "x");
}  // namespace qpoly

namespace zpoly {
void trim(ZPoly& f);
int degree(const ZPoly& f);
mpz_class content(const ZPoly& f);
ZPoly primitive(const ZPoly& f);  // positive leading coefficient
// Clears denominators and takes the primitive part.
ZPoly from_q(const QPoly& f);
QPoly to_q(const ZPoly& f);
ZPoly mul(const ZPoly& a, const ZPoly& b);
// Exact division over Z; returns false when b does not divide a.
bool divides(const ZPoly& b, const ZPoly& a, ZPoly* quo = nullptr);
std::string format(const ZPoly& f, std::string_view var = "x");
}  // namespace zpoly

mpq_class parse_rational(std::string_view s);  // "p/q" or integer
std::string format_rational(const mpq_class& x);

// Q[x]/(m) for a monic irreducible m; degree 1 is Q itself.
class NumberField {
 public:
  static std::shared_ptr<const NumberField> rationals();
  // Throws HypothesisError when m is reducible over Q.
  static std::shared_ptr<const NumberField> make(const QPoly& m);

  const QPoly& modulus() const { return m_; }
  int degree() const { return qpoly::degree(m_); }
  bool operator==(const NumberField& o) const { return m_ == o.m_; }

 private:
  explicit NumberField(QPoly m) : m_(std::move(m)) {}
  QPoly m_;
};
using FieldRef = std::shared_ptr<const NumberField>;

// Element of a NumberField; rationals use a degree-1 field and a single coefficient.
class AlgNum {
 public:
  AlgNum() : AlgNum(NumberField::rationals(), mpq_class(0)) {}
  explicit AlgNum(long n) : AlgNum(NumberField::rationals(), mpq_class(n)) {}
  AlgNum(FieldRef K, const mpq_class& c);
  AlgNum(FieldRef K, QPoly residue);
  static AlgNum generator(const FieldRef& K);  // the class of x

  const FieldRef& field() const { return K_; }
  const QPoly& residue() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  bool is_rational() const { return c_.size() <= 1; }
  mpq_class to_rational() const;  // throws when not rational

  AlgNum operator+(const AlgNum& o) const;
  AlgNum operator-(const AlgNum& o) const;
  AlgNum operator-() const;
  AlgNum operator*(const AlgNum& o) const;
  AlgNum operator/(const AlgNum& o) const;
  AlgNum inverse() const;
  AlgNum& operator+=(const AlgNum& o) { return *this = *this + o; }
  AlgNum& operator-=(const AlgNum& o) { return *this = *this - o; }
  AlgNum& operator*=(const AlgNum& o) { return *this = *this * o; }
  bool operator==(const AlgNum& o) const;

  // "p/q" for rationals, "residue mod (minpoly)" otherwise.
  std::string str() const;

 private:
  FieldRef common(const AlgNum& o) const;
  FieldRef K_;
  QPoly c_;
};

// "p/q" or "minpoly:residue", both polynomials in one single-letter variable.
AlgNum parse_exact(std::string_view s);

}  // namespace hecke
