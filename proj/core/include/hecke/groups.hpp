#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hecke/ring.hpp"

namespace hecke {

enum class SubgroupTag { GL2, Borel, TkLtimesU, U, Scalars, Tk };

std::string to_string(SubgroupTag tag);

// GL2, Borel and Scalars are enumerated as matrices; TkLtimesU, U and Tk as
// normalized PGL2 classes [[a, s], [0, 1]] with a in k^x constant.
struct SubgroupSpec {
  SubgroupTag tag;
  const LevelRing* ring;
};

// Default 2^20, overridden by the HECKE_LAB_BUDGET environment variable.
std::uint64_t enumeration_budget();

mpz_class group_order(const SubgroupSpec& spec);
std::vector<LevelMat> enumerate_group(const SubgroupSpec& spec);
std::vector<LevelMat> enumerate_group(const SubgroupSpec& spec, std::uint64_t budget);

// Closed forms for one truncated local ring of residue degree r and precision d.
mpz_class unit_count_formula(unsigned q, int r, int d);
mpz_class p1_count_formula(unsigned q, int r, int d);
// Rank-one direct summands of O^2 as normalized generators (1, b) or (a, 1), a in m.
std::vector<std::pair<LocalRing::Elem, LocalRing::Elem>> enumerate_p1(const LocalRing& R);

// |PGL2(O_D)| and a dense ranking of its normalized elements.
std::uint64_t pgl2_order(const LevelRing& R);
std::uint64_t pgl2_index(const LevelRing& R, const LevelMat& normalized);
LevelMat pgl2_element(const LevelRing& R, std::uint64_t index);

}  // namespace hecke
