#pragma once

#include <vector>

#include "hecke/field.hpp"

namespace hecke::fqla {

using Vec = std::vector<Fq>;
using Mat = std::vector<Vec>;  // list of rows, all of length ncols

// Reduced row echelon form in place; zero rows removed. Returns pivot columns.
std::vector<int> rref(const FieldCtx& F, Mat& rows, int ncols);
int rank(const FieldCtx& F, Mat rows, int ncols);
// Basis of {v : rows * v = 0}, one vector per free column in increasing order.
Mat nullspace(const FieldCtx& F, Mat rows, int ncols);
bool in_span(const FieldCtx& F, const Mat& rows, const Vec& v, int ncols);

}  // namespace hecke::fqla
