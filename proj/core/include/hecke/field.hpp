#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hecke {

// Element of F_q encoded as sum c_i p^i over the polynomial basis 1, g, g^2, ...
// of the defining polynomial.
using Fq = std::uint16_t;

// Finite field F_{p^e} with full addition and multiplication tables (q <= 256).
class FieldCtx {
 public:
  static std::shared_ptr<const FieldCtx> make(unsigned q);
  static bool is_prime_power(unsigned q, unsigned* p = nullptr, unsigned* e = nullptr);

  unsigned p() const { return p_; }
  unsigned e() const { return e_; }
  unsigned q() const { return q_; }
  // Defining polynomial over F_p, low degree first, monic of degree e.
  const std::vector<unsigned>& modulus() const { return modulus_; }

  Fq add(Fq a, Fq b) const { return add_[a * q_ + b]; }
  Fq sub(Fq a, Fq b) const { return add_[a * q_ + neg_[b]]; }
  Fq neg(Fq a) const { return neg_[a]; }
  Fq mul(Fq a, Fq b) const { return mul_[a * q_ + b]; }
  Fq inv(Fq a) const;
  Fq div(Fq a, Fq b) const { return mul(a, inv(b)); }
  Fq pow(Fq a, unsigned long long k) const;
  // Image of an integer in the prime field.
  Fq from_int(long long v) const;
  // Generator of F_q^x (the class of the polynomial variable when e > 1).
  Fq primitive() const { return primitive_; }

  std::vector<unsigned> digits(Fq a) const;
  std::string format(Fq a) const;

 private:
  FieldCtx() = default;
  unsigned p_ = 0, e_ = 0, q_ = 0;
  Fq primitive_ = 1;
  std::vector<unsigned> modulus_;
  std::vector<Fq> add_, mul_, neg_, inv_;
};

using FieldPtr = std::shared_ptr<const FieldCtx>;

// Dense polynomial over F_q, low degree first, no trailing zeros.
using Poly = std::vector<Fq>;

namespace poly {

void trim(Poly& f);
int degree(const Poly& f);
bool is_zero(const Poly& f);
Poly constant(Fq c);
Poly monomial(Fq c, int k);
Poly add(const FieldCtx& F, const Poly& a, const Poly& b);
Poly sub(const FieldCtx& F, const Poly& a, const Poly& b);
Poly scale(const FieldCtx& F, const Poly& a, Fq c);
Poly mul(const FieldCtx& F, const Poly& a, const Poly& b);
Poly shift(const Poly& a, int k);
void divmod(const FieldCtx& F, const Poly& a, const Poly& b, Poly& quo, Poly& rem);
Poly mod(const FieldCtx& F, const Poly& a, const Poly& b);
Poly monic(const FieldCtx& F, const Poly& a);
Poly gcd(const FieldCtx& F, Poly a, Poly b);
// Returns g = gcd(a, b) (monic) and s, t with s a + t b = g.
Poly xgcd(const FieldCtx& F, const Poly& a, const Poly& b, Poly& s, Poly& t);
Poly powmod(const FieldCtx& F, const Poly& a, unsigned long long k, const Poly& m);
Poly pow(const FieldCtx& F, const Poly& a, unsigned k);
Fq eval(const FieldCtx& F, const Poly& a, Fq x);
bool is_irreducible(const FieldCtx& F, const Poly& f);
// All monic irreducibles of the given degree, in increasing code order.
std::vector<Poly> monic_irreducibles(const FieldCtx& F, int deg);

// "t^2+3t+1" style; coefficients printed with FieldCtx::format, "0" for zero.
std::string format(const FieldCtx& F, const Poly& f, std::string_view var = "t");
// Inverse of format. Coefficients are integer codes of F_q elements.
Poly parse(const FieldCtx& F, std::string_view s, std::string_view var = "t");

}  // namespace poly
}  // namespace hecke
