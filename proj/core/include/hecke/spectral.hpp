#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "hecke/exact.hpp"
#include "hecke/graph.hpp"

namespace hecke {

// ---- layered decomposition ----

struct BlockEntry {
  int row = 0;
  int col = 0;
  long long mult = 0;
};

// Sparse integer block of the adjacency matrix; rows are sources.
struct Block {
  int rows = 0;
  int cols = 0;
  std::vector<BlockEntry> entries;
};

// Nucleus G' = layer 0, cusp layers G_1, G_2, ...; side vertices are the
// remaining window vertices, each fixed by its own eigen-equation once its
// targets are known. Vertices of incomplete top bands are "beyond".
struct LayeredDecomposition {
  static constexpr int kSide = -1;
  static constexpr int kBeyond = -2;

  std::shared_ptr<const HeckeGraph> graph;
  bool ramified = false;  // x in supp D
  std::vector<int> nucleus;
  std::vector<std::vector<int>> layers;  // layers[0] is G_1
  std::vector<int> side;
  std::vector<int> beyond;
  std::vector<int> part;  // per vertex: 0 nucleus, i >= 1 layer, kSide, kBeyond
  std::vector<int> slot;  // index of the vertex inside its part

  // Index 0 is the nucleus. M[i]: G_i x G_i; A[i]: G_{i-1} x G_i; B[i]: G_i x G_{i-1}.
  std::vector<Block> M, A, B;
  long long irregular_edges = 0;  // nucleus/layer edges outside the block pattern
  bool stationary = false;        // |G_i| constant over the last three layers

  int num_layers() const { return static_cast<int>(layers.size()); }
  // sup |G_i| over the window layers.
  long long layer_size() const;
  const std::vector<int>& members(int i) const { return i == 0 ? nucleus : layers.at(i - 1); }
};

// Throws ConfigError when fewer than three complete layers fit in the window.
LayeredDecomposition layer_decompose(std::shared_ptr<const HeckeGraph> G);

// Blocks for an explicit partition; every other vertex becomes a side vertex.
LayeredDecomposition make_decomposition(std::shared_ptr<const HeckeGraph> G, std::vector<int> nucleus,
                                        std::vector<std::vector<int>> layers, std::vector<int> beyond = {});

enum class Propagativity { not_propagative, propagative, strictly };
std::string to_string(Propagativity p);
Propagativity check_propagative(const LayeredDecomposition& L);

// ---- nucleus spectrum ----

struct NucleusSpectrum {
  ZPoly charpoly;                                  // det(t - M), monic
  std::vector<std::pair<ZPoly, int>> squarefree;   // (part, multiplicity)
  std::vector<std::pair<ZPoly, int>> irreducible;  // (factor, multiplicity)
  std::vector<int> component_sizes;                // strongly connected blocks of M
  long long max_row_sum = 0;
  long long row_sum_bound = 0;  // q^r when ramified at x, q^r + 1 otherwise
  bool gershgorin_ok = false;
};
NucleusSpectrum nucleus_spectrum(const LayeredDecomposition& L);

// dim ker(lambda - M) at lambda = a root of each irreducible factor.
std::vector<std::pair<ZPoly, long long>> nucleus_eigenspace_dims(const LayeredDecomposition& L);

// ---- dimensions ----

struct DimBounds {
  long long lower = 0;
  long long upper = 0;
  long long exact = 0;
  long long nucleus_dim = 0;   // dim_lambda of the nucleus
  long long boundary_dim = 0;  // p: solutions (v', v_1) of (lambda - M) v' = A v_1
  bool window_limited = false;
};

// Throws HypothesisError for lambda = 0 when ramified or for non-propagative input.
DimBounds dim_bounds(const AlgNum& lambda, const LayeredDecomposition& L);

// ---- eigenforms and the resolvent ----

using ValueTable = std::map<int, AlgNum>;

// The unique (v', v_1) solving the boundary equation and agreeing with the
// given values. Throws HypothesisError when the constraints do not pin it down.
ValueTable complete_seed(const AlgNum& lambda, const ValueTable& constraints, const LayeredDecomposition& L);

struct Propagation {
  ValueTable values;
  int layers_reached = 0;  // highest layer whose values are known
  long long checked = 0;   // vertices whose equation was re-verified
};

// Extends a seed on G' and G_1 layer by layer up to layer `depth` (or the window top).
// Throws HypothesisError on a seed violating the boundary equation and InvariantError
// on a singular A_i.
Propagation propagate_eigenform(const AlgNum& lambda, const ValueTable& seed, const LayeredDecomposition& L,
                                int depth);

struct ResolventSolution {
  Propagation particular;
  std::vector<Propagation> homogeneous;
};

// Solves (Phi - lambda) f = g. Rejects lambda in the nucleus spectrum with the matching factor.
ResolventSolution solve_resolvent(const AlgNum& lambda, const ValueTable& g, const LayeredDecomposition& L,
                                  int depth);

// dim ker (Phi - lambda)^k on the truncated window for k = 1..k_max. The k-th
// power is defined on vertices at least k edges away from the window top.
std::vector<long long> generalized_kernel_dims(const AlgNum& lambda, const LayeredDecomposition& L, int k_max);

// ---- eigenform families ----

struct RationalFunction {
  QPoly num;
  QPoly den;  // monic
  std::string str(std::string_view var = "lambda") const;
  bool operator==(const RationalFunction&) const = default;
};

struct FamilyFit {
  bool ok = false;
  RationalFunction f;
  int held_out = 0;
  int growth = 0;                    // deg num - deg den
  bool denominator_divides = false;  // den | det(lambda - M) * lambda^k
  std::string failure;
};

// Interpolates lambda -> f(vertex) for the eigenform normalized by `normalization`
// (a partial seed). The last three samples are held out.
FamilyFit eigenform_family(int vertex, const std::vector<mpq_class>& samples, const ValueTable& normalization,
                           const LayeredDecomposition& L);

// ---- closed-form dimensions ----

enum class DimCase { unramified_at_x, ramified_at_x_only, mixed };
std::string to_string(DimCase c);
DimCase parse_dim_case(std::string_view s);

struct DimFormulaParams {
  unsigned q = 2;
  int r = 1;      // deg x
  int d_x = 0;    // multiplicity of x in D
  std::vector<std::pair<int, int>> away;  // (deg y, d_y) for y in supp D, y != x
  long long h = 1;  // |Pic^0(X)(F_q)|
  int genus = 0;
};

struct DimFormulaResult {
  mpq_class value;
  std::vector<std::pair<std::string, mpq_class>> factors;
};

// Throws ConfigError when the parameters do not match the case.
DimFormulaResult dim_formula(const DimFormulaParams& p, DimCase c);
DimFormulaParams formula_params(const Divisor& D, const Point& x, unsigned q);
DimCase formula_case(const DimFormulaParams& p);

}  // namespace hecke
