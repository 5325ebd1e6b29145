#pragma once

#include <gmpxx.h>

#include <fstream>
#include <memory>
#include <string>

#include "hecke/divisor.hpp"
#include "hecke/exact.hpp"
#include "hecke/graph.hpp"
#include "json.hpp"

namespace hecke::testkit {

inline const nlohmann::json& oracle() {
  static const nlohmann::json data = [] {
    std::ifstream is(HECKE_ORACLE_FILE);
    if (!is) throw std::runtime_error("missing oracle file " HECKE_ORACLE_FILE);
    return nlohmann::json::parse(is);
  }();
  return data;
}

inline AlgNum rat(long num, long den = 1) {
  mpq_class v(num, den);
  v.canonicalize();
  return AlgNum(NumberField::rationals(), v);
}
inline AlgNum rat(const mpq_class& v) { return AlgNum(NumberField::rationals(), v); }

inline std::shared_ptr<const HeckeGraph> make_graph(unsigned q, const std::string& div, const std::string& x, int n_max,
                                                    Builder b = Builder::hybrid) {
  auto F = FieldCtx::make(q);
  return std::make_shared<const HeckeGraph>(build_graph(F, parse_divisor(*F, div), parse_point_name(*F, x), n_max, b));
}

// Window holding `depth` complete layers plus slack for side vertices.
inline int spectral_window(unsigned q, const std::string& div, const std::string& x, int depth) {
  auto F = FieldCtx::make(q);
  const int b = parse_divisor(*F, div).degree() - 2;
  return std::max(0, b) + parse_point_name(*F, x).degree() * (depth + 3);
}

}  // namespace hecke::testkit
