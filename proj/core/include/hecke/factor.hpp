#pragma once

#include <utility>
#include <vector>

#include "hecke/exact.hpp"

namespace hecke {

// Squarefree decomposition over Q: f = c * prod g_i^i with primitive, pairwise
// coprime g_i of positive degree. Returns (g_i, i) for the nontrivial parts.
std::vector<std::pair<ZPoly, int>> squarefree_factorization(const ZPoly& f);

// Irreducible factors over Z of a primitive squarefree polynomial of positive degree,
// each primitive with positive leading coefficient, sorted by (degree, coefficients).
std::vector<ZPoly> factor_squarefree(const ZPoly& f);

// Complete factorization into primitive irreducibles with multiplicities (content dropped).
std::vector<std::pair<ZPoly, int>> factor(const ZPoly& f);

bool is_irreducible(const ZPoly& f);

}  // namespace hecke
