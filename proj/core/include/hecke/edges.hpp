#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <string>
#include <vector>

#include "hecke/sections.hpp"
#include "hecke/vertices.hpp"

namespace hecke {

// Representative tau * Delta of a left coset in K(D) Delta K(D).
//   Ramified:  [[1, pi^d c], [0, 1]] diag(pi, 1)
//   Translate: [[pi, c], [0, 1]]
//   Vertical:  [[1, 0], [0, pi]]
// c is a residue-field code, lifted to a polynomial of degree < deg x.
struct CosetRep {
  enum class Kind { Ramified, Translate, Vertical };
  Kind kind = Kind::Ramified;
  LocalRing::Elem c = 0;
};

std::vector<CosetRep> coset_reps(const FieldPtr& F, const Point& x, int d);
// True when the two representatives lie in the same left K(D)-coset, decided
// by testing (g_i)^{-1} g_j in K(D) inside O_x / pi^{d+3}.
bool same_coset(const FieldPtr& F, const Point& x, int d, const CosetRep& a, const CosetRep& b);

struct Neighbor {
  Vertex target;
  long long mult = 0;
  std::map<std::string, long long> tags;
};

// One coset image before canonicalization.
struct RawTarget {
  int gap = 0;
  LevelMat level;
  std::string tag;
};

class HeckeOperator {
 public:
  HeckeOperator(std::shared_ptr<const VertexSpace> space, Point x);

  const VertexSpace& space() const { return *space_; }
  const Point& point() const { return x_; }
  int ramification() const { return d_; }
  const std::vector<CosetRep>& reps() const { return reps_; }
  long long out_degree() const { return static_cast<long long>(reps_.size()); }

  // Target of a single coset representative, via splitting types of sections.
  RawTarget transport(int n, const LevelMat& level, const CosetRep& rep) const;
  std::vector<Neighbor> bruteforce(int n, const LevelMat& level) const;
  // Symbolic rule; only valid strictly above the deep-cusp bound.
  std::vector<Neighbor> cusp_rule(int n, const LevelMat& level) const;

  // Level transport through a given inclusion of O(a') + O(b') into O(n) + O;
  // c is the coset parameter used at x when x is in supp D.
  LevelMat transport_level(int n, const LevelMat& level, const Inclusion& inc, LocalRing::Elem c) const;

 private:
  std::vector<Neighbor> aggregate(std::vector<std::pair<RawTarget, long long>> raw) const;
  Inclusion symbolic_inclusion(int n, bool twist_second, LocalRing::Elem c) const;

  std::shared_ptr<const VertexSpace> space_;
  FieldPtr F_;
  Point x_;
  int d_ = 0, r_ = 1, x_index_ = -1;
  std::vector<CosetRep> reps_;
  std::shared_ptr<const LocalRing> kx_;
  // Inclusions depend only on the gap and the normalized functional.
  mutable std::mutex mu_;
  mutable std::map<std::tuple<int, LocalRing::Elem, LocalRing::Elem>, Inclusion> inclusion_cache_;
};

std::string format_tags(const std::map<std::string, long long>& tags);

// Moves of the rank-n lattice walk in the cusp: twisting the i-th summand by -x.
struct LatticeMove {
  std::vector<int> delta;  // change of the n-1 consecutive degree gaps
  mpz_class mult;
};
std::vector<LatticeMove> pgln_moves(int n, int deg_x, unsigned q);

// Gaussian binomial [n choose r]_Q.
mpz_class qbinom(int n, int r, const mpz_class& Q);
// Sum over 0/1 vectors p of length n with weight r of Q^(sum (n-i) p_i - r(r-1)/2).
mpz_class qbinom_degree_sum(int n, int r, const mpz_class& Q);

}  // namespace hecke
