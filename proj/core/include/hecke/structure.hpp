#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "hecke/graph.hpp"

namespace hecke {

// ---- out-degree law ----

long long expected_out_degree(unsigned q, int deg_x, int d_x);

struct DegreeViolation {
  int vertex = 0;
  long long total = 0;
  long long expected = 0;
};
// Non-stub vertices whose outgoing multiplicity differs from the law.
std::vector<DegreeViolation> check_degrees(const HeckeGraph& G);

// ---- forgetful map p_{D,D2} and coverings ----

// Largest gap excluded from the covering window of G:
// deg D - 2, plus deg x when x is not in supp D.
int covering_threshold(const Divisor& D, const Point& x);

// Size of every fiber of the forgetful map in the deep cusp, D = D1 + D2.
mpz_class fiber_count(unsigned q, const Divisor& D1, bool d2_zero);

// Vertex map of G into G2 obtained by forgetting the level away from supp D2.
// Entries are -1 for vertices whose image is not in G2.
std::vector<int> forgetful_map(const HeckeGraph& G, const HeckeGraph& G2);

// Part of D supported away from supp D2. Throws ConfigError unless D2 <= D
// with matching multiplicities and x outside the remainder.
Divisor complement_divisor(const Divisor& D, const Divisor& D2, const Point& x);

struct EdgePairing {
  int v = 0;                    // vertex upstairs
  int w = 0;                    // vertex downstairs
  std::vector<int> upstairs;    // edge indices in G
  int downstairs = -1;          // edge index in G2, -1 when absent
};

struct CoveringWitness {
  bool ok = false;
  int threshold = 0;
  std::vector<int> vertex_map;       // over all vertices of G
  std::vector<EdgePairing> out_pairs;  // clause on outgoing edges
  std::vector<EdgePairing> in_pairs;   // clause on incoming edges
  std::optional<long long> degree;     // constant fiber size when it is constant
  std::string counterexample;          // empty when ok
};

// Checks the three covering clauses on the windows gap > threshold of both graphs.
// threshold defaults to covering_threshold of G.
CoveringWitness check_covering(const HeckeGraph& G, const HeckeGraph& G2, std::optional<int> threshold = {});

// ---- splitting into components ----

struct SplitReport {
  bool ok = false;
  int threshold = 0;
  long long expected = 0;                 // N from the fiber formula
  std::vector<std::vector<int>> components;  // upstairs, weak components of the window
  std::vector<int> base_of;               // base component of each upstairs component
  std::vector<long long> per_base;        // number of upstairs components over each base component
  long long cross_edges = 0;
  std::string failure;
};

// Requires supp D2 != {x}, except for q = 2 where the torus k^x is trivial.
SplitReport split_components(const HeckeGraph& G, const HeckeGraph& G2, std::optional<int> threshold = {});

// ---- torus monodromy over D2 = d_x [x] ----

struct WalkStep {
  int edge = 0;       // edge index in the base graph
  bool forward = true;
};

struct ClosedWalk {
  int start = 0;  // base vertex id
  std::vector<WalkStep> steps;
};

struct MonodromyRecord {
  ClosedWalk walk;
  int lift_start = -1;
  int lift_end = -1;
  bool closes = false;
  std::vector<Fq> t_values;  // all t in k^x compatible with the discrepancy
};

// Lifts the walk edge by edge starting at the smallest vertex over walk.start.
// Throws InvariantError when the discrepancy is not in T(k) or a lift is ambiguous.
MonodromyRecord monodromy(const HeckeGraph& G, const HeckeGraph& base, const ClosedWalk& walk);

// One loop per non-tree edge of a BFS forest of the undirected window gap > threshold.
std::vector<ClosedWalk> fundamental_loops(const HeckeGraph& base, int threshold);

// Subgroup of k^x generated by the given elements.
std::vector<Fq> generated_subgroup(const FieldCtx& F, const std::vector<Fq>& gens);

// ---- explicit transport rule for D = [x] + [y], x = 0, y finite of degree 1 ----
//   (inf, a) -> (inf, a diag(1, y))
//   (inf, a) -> (c, a diag(c, -y/c))       c in k^x
//   (p, a)   -> (0, a diag(y, 1))          multiplicity q
struct RuleReport {
  long long vertices = 0;
  long long edges = 0;
  std::vector<std::string> mismatches;
};
RuleReport check_transport_rule(const HeckeGraph& G, int threshold);

}  // namespace hecke
