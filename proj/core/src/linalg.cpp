#include "hecke/linalg.hpp"

namespace hecke {

QPoly charpoly(std::vector<std::vector<mpq_class>> H) {
  const int n = static_cast<int>(H.size());
  // Similarity reduction to upper Hessenberg form.
  for (int j = 0; j + 2 < n; ++j) {
    int piv = -1;
    for (int i = j + 1; i < n && piv < 0; ++i)
      if (H[i][j] != 0) piv = i;
    if (piv < 0) continue;
    if (piv != j + 1) {
      std::swap(H[piv], H[j + 1]);
      for (int r = 0; r < n; ++r) std::swap(H[r][piv], H[r][j + 1]);
    }
    const mpq_class pivot = H[j + 1][j];
    for (int k = j + 2; k < n; ++k) {
      if (H[k][j] == 0) continue;
      const mpq_class u = H[k][j] / pivot;
      for (int c = 0; c < n; ++c) H[k][c] -= u * H[j + 1][c];
      for (int r = 0; r < n; ++r) H[r][j + 1] += u * H[r][k];
    }
  }
  std::vector<QPoly> p(n + 1);
  p[0] = QPoly{1};
  for (int m = 1; m <= n; ++m) {
    p[m] = qpoly::mul(QPoly{-H[m - 1][m - 1], 1}, p[m - 1]);
    mpq_class prod = 1;
    for (int i = 1; i < m; ++i) {
      prod *= H[m - i][m - i - 1];
      if (prod == 0) break;
      p[m] = qpoly::sub(p[m], qpoly::scale(p[m - i - 1], H[m - i - 1][m - 1] * prod));
    }
  }
  return p[n];
}

}  // namespace hecke
