#include "hecke/fq_linalg.hpp"

namespace hecke::fqla {

std::vector<int> rref(const FieldCtx& F, Mat& rows, int ncols) {
  std::vector<int> pivots;
  size_t r = 0;
  for (int c = 0; c < ncols && r < rows.size(); ++c) {
    size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    const Fq inv = F.inv(rows[r][c]);
    for (int j = c; j < ncols; ++j) rows[r][j] = F.mul(rows[r][j], inv);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const Fq f = rows[i][c];
      for (int j = c; j < ncols; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

int rank(const FieldCtx& F, Mat rows, int ncols) {
  return static_cast<int>(rref(F, rows, ncols).size());
}

Mat nullspace(const FieldCtx& F, Mat rows, int ncols) {
  auto pivots = rref(F, rows, ncols);
  std::vector<int> pivot_row(ncols, -1);
  for (size_t i = 0; i < pivots.size(); ++i) pivot_row[pivots[i]] = static_cast<int>(i);
  Mat basis;
  for (int f = 0; f < ncols; ++f) {
    if (pivot_row[f] >= 0) continue;
    Vec v(ncols, 0);
    v[f] = 1;
    for (size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(rows[i][f]);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool in_span(const FieldCtx& F, const Mat& rows, const Vec& v, int ncols) {
  Mat m = rows;
  const int r0 = rank(F, m, ncols);
  m.push_back(v);
  return rank(F, m, ncols) == r0;
}

}  // namespace hecke::fqla
