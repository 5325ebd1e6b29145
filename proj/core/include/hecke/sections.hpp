#pragma once

#include <utility>
#include <vector>

#include "hecke/fq_linalg.hpp"
#include "hecke/ring.hpp"

namespace hecke {

// Sublattice of O_y^2 containing pi^c O_y^2, cut out by F_q-linear equations on
// (v1, v2) mod pi^c in the coordinates of LocalRing::coeffs (v1 first).
struct LatticeCondition {
  Point point;
  int precision = 1;
  fqla::Mat equations;  // reduced, independent rows
  int colength() const { return static_cast<int>(equations.size()); }
};

// Kernel of v -> l1 v1 + l2 v2 in the residue field; l1, l2 are precision-1 codes.
LatticeCondition functional_condition(const FieldPtr& F, const Point& pt, LocalRing::Elem l1,
                                      LocalRing::Elem l2);
// O_y-span of the given generators together with pi^c O_y^2.
LatticeCondition generated_condition(const FieldPtr& F, const Point& pt, int c,
                                     const std::vector<std::pair<LocalRing::Elem, LocalRing::Elem>>& gens);

struct Section {
  Poly s1, s2;
};

// Global sections of E'(m) where E' is cut out of O(a) + O(b) by the conditions.
std::vector<Section> sections(const FieldPtr& F, int a, int b, int m,
                              const std::vector<LatticeCondition>& conds);
int h0(const FieldPtr& F, int a, int b, int m, const std::vector<LatticeCondition>& conds);

struct SplittingType {
  int a = 0, b = 0;
  bool operator==(const SplittingType&) const = default;
};

SplittingType splitting_type(const FieldPtr& F, int a, int b, const std::vector<LatticeCondition>& conds);

// Inclusion O(a') + O(b') -> O(a) + O(b) with image E'. Entry s[i][j] is a
// section of O(row_i - col_j), rows (a, b), columns (a', b').
struct Inclusion {
  int col[2] = {0, 0};
  Poly s[2][2];
};

Inclusion inclusion(const FieldPtr& F, int a, int b, const std::vector<LatticeCondition>& conds);
// The inclusion read through the local trivializations at R's point.
M2 local_matrix(const Inclusion& inc, int a, int b, const LocalRing& R);

}  // namespace hecke
