#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "hecke/errors.hpp"
#include "hecke/exact.hpp"

namespace hecke {

// Scalar hooks for the two exact coefficient domains.
inline bool is_zero(const mpq_class& x) { return x == 0; }
inline bool is_zero(const AlgNum& x) { return x.is_zero(); }
inline mpq_class inverse(const mpq_class& x) { return mpq_class(1) / x; }
inline AlgNum inverse(const AlgNum& x) { return x.inverse(); }

template <class S>
using SparseRow = std::map<int, S>;

// Incremental row echelon form over an exact field. Rows are reduced against
// existing pivots on insertion; pivot rows are normalized to a leading 1.
template <class S>
class Echelon {
 public:
  explicit Echelon(int cols) : cols_(cols), pivot_row_(cols, -1) {}

  int cols() const { return cols_; }
  int rank() const { return static_cast<int>(rows_.size()); }

  // Returns true when the row was independent of the rows seen so far.
  bool add_row(SparseRow<S> row) {
    reduce(row);
    if (row.empty()) return false;
    const int lead = row.begin()->first;
    const S li = inverse(row.begin()->second);
    for (auto& [c, v] : row) v = v * li;
    pivot_row_.at(lead) = static_cast<int>(rows_.size());
    rows_.push_back({lead, std::move(row)});
    return true;
  }

  bool is_pivot(int col) const { return pivot_row_.at(col) >= 0; }

  // Kernel basis: one vector per free column among [0, n), n <= cols.
  std::vector<std::vector<S>> nullspace(int n) const {
    std::vector<std::vector<S>> basis;
    for (int f = 0; f < n; ++f) {
      if (is_pivot(f)) continue;
      std::vector<S> x(n, S());
      x[f] = S(1);
      back_substitute(x, n, std::nullopt);
      basis.push_back(std::move(x));
    }
    return basis;
  }

  // Particular solution of the system whose right-hand side sits in column rhs,
  // free variables set to zero. nullopt when inconsistent.
  std::optional<std::vector<S>> solve(int rhs) const {
    if (is_pivot(rhs)) return std::nullopt;
    std::vector<S> x(rhs, S());
    back_substitute(x, rhs, rhs);
    return x;
  }

 private:
  struct PivotRow {
    int lead;
    SparseRow<S> row;
  };

  void reduce(SparseRow<S>& row) const {
    for (auto it = row.begin(); it != row.end();) {
      if (is_zero(it->second)) {
        it = row.erase(it);
        continue;
      }
      const int col = it->first;
      const int p = pivot_row_.at(col);
      if (p < 0) {
        ++it;
        continue;
      }
      const S c = it->second;
      for (const auto& [k, v] : rows_[p].row) {
        auto [pos, inserted] = row.try_emplace(k, S());
        pos->second = pos->second - c * v;
        if (is_zero(pos->second)) row.erase(pos);
      }
      it = row.upper_bound(col);
    }
  }

  // Solves pivot variables in decreasing pivot order; columns >= n are ignored
  // except the right-hand side column.
  void back_substitute(std::vector<S>& x, int n, std::optional<int> rhs) const {
    std::vector<int> order;
    for (int i = 0; i < rank(); ++i)
      if (rows_[i].lead < n) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return rows_[a].lead > rows_[b].lead; });
    for (int i : order) {
      const auto& pr = rows_[i];
      S acc = S();
      for (const auto& [k, v] : pr.row) {
        if (k == pr.lead) continue;
        if (rhs && k == *rhs) {
          acc = acc + v;
        } else if (k < n) {
          acc = acc - v * x[k];
        }
      }
      x[pr.lead] = acc;
    }
  }

  int cols_;
  std::vector<int> pivot_row_;
  std::vector<PivotRow> rows_;
};

// Characteristic polynomial det(t - M) of a dense rational matrix via
// reduction to Hessenberg form. Coefficients from degree 0 upwards.
QPoly charpoly(std::vector<std::vector<mpq_class>> M);

}  // namespace hecke
