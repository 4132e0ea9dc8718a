#pragma once

// Brute-force reference implementations used only by the tests. They share
// no code with the library beyond the gmpxx number types.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Vec = std::vector<Q>;
using Mat = std::vector<Vec>;

// Row echelon in place; returns pivot columns.
inline std::vector<std::size_t> eliminate(Mat& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t p = r;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[r]);
    const Q inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Q f = a[i][c];
      for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank_of(Mat a, std::size_t cols) { return eliminate(a, cols).size(); }

// Reduced echelon rows of the row space: a canonical key for a subspace.
inline Mat row_space_key(Mat a, std::size_t cols) {
  const auto pivots = eliminate(a, cols);
  a.resize(pivots.size());
  return a;
}

inline Mat null_space(Mat a, std::size_t cols) {
  const auto pivots = eliminate(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  Mat basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = -a[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Unique solution of a square system, if it is nonsingular.
inline std::optional<Vec> solve_square(Mat a, const Vec& b) {
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) a[i].push_back(b[i]);
  const auto pivots = eliminate(a, n);
  if (pivots.size() < n) return std::nullopt;
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n];
  return x;
}

inline std::vector<mpz_class> primitive(const Vec& v) {
  mpz_class l = 1;
  for (const auto& x : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den_mpz_t());
  std::vector<mpz_class> out;
  mpz_class g = 0;
  for (const auto& x : v) {
    mpz_class k = x.get_num() * (l / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), k.get_mpz_t());
    out.push_back(k);
  }
  for (auto& k : out) k /= g;
  for (const auto& k : out) {
    if (k == 0) continue;
    if (k < 0) {
      for (auto& x : out) x = -x;
    }
    break;
  }
  return out;
}

// Calls visit(subset) for every k-subset of {0..n-1}.
inline void for_each_subset(std::size_t n, std::size_t k,
                            const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(std::min(k, n)), true);
  if (k > n) return;
  do {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i]) s.push_back(i);
    }
    visit(s);
  } while (std::prev_permutation(mask.begin(), mask.end()));
}

// Caratheodory: p is in conv(points) iff it is a convex combination of some
// affinely independent subset of at most dim+1 of them.
inline bool in_hull(const Mat& points, const Vec& p) {
  if (points.empty()) return false;
  const std::size_t dim = p.size();
  bool found = false;
  for (std::size_t k = 1; k <= std::min(points.size(), dim + 1) && !found; ++k) {
    for_each_subset(points.size(), k, [&](const std::vector<std::size_t>& s) {
      if (found) return;
      // p - x_0 = sum mu_i (x_i - x_0); the differences have full column
      // rank, so the Gram system pins mu down and we check it afterwards.
      const Vec& x0 = points[s[0]];
      Mat cols;  // k-1 difference vectors
      for (std::size_t i = 1; i < s.size(); ++i) {
        Vec d(dim);
        for (std::size_t j = 0; j < dim; ++j) d[j] = points[s[i]][j] - x0[j];
        cols.push_back(std::move(d));
      }
      if (rank_of(cols, dim) != cols.size()) return;
      Vec rhs(dim);
      for (std::size_t j = 0; j < dim; ++j) rhs[j] = p[j] - x0[j];
      const std::size_t m = cols.size();
      Vec mu(m);
      if (m > 0) {
        Mat g(m, Vec(m));
        Vec gb(m);
        for (std::size_t a = 0; a < m; ++a) {
          for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t j = 0; j < dim; ++j) g[a][b] += cols[a][j] * cols[b][j];
          }
          for (std::size_t j = 0; j < dim; ++j) gb[a] += cols[a][j] * rhs[j];
        }
        auto sol = solve_square(g, gb);
        if (!sol) return;
        mu = *sol;
      }
      // Confirm the combination actually reproduces p.
      for (std::size_t j = 0; j < dim; ++j) {
        Q acc = 0;
        for (std::size_t a = 0; a < m; ++a) acc += mu[a] * cols[a][j];
        if (acc != rhs[j]) return;
      }
      Q sum = 0;
      for (const auto& x : mu) {
        if (x < 0) return;
        sum += x;
      }
      if (sum <= 1) found = true;
    });
  }
  return found;
}

inline Mat to_mat(const std::vector<std::vector<std::int64_t>>& rows) {
  Mat m;
  for (const auto& r : rows) {
    Vec v;
    for (auto x : r) v.emplace_back(static_cast<long>(x));
    m.push_back(std::move(v));
  }
  return m;
}

inline bool convex_position(const Mat& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Mat others;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (j != i) others.push_back(rows[j]);
    }
    if (in_hull(others, rows[i])) return false;
  }
  return true;
}

inline bool hole_free(const Mat& rows) {
  const std::size_t dim = rows[0].size();
  std::vector<long> lo(dim), hi(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    lo[j] = hi[j] = rows[0][j].get_num().get_si();
    for (const auto& r : rows) {
      lo[j] = std::min(lo[j], r[j].get_num().get_si());
      hi[j] = std::max(hi[j], r[j].get_num().get_si());
    }
  }
  const std::set<Vec> codes(rows.begin(), rows.end());
  Vec p(dim);
  std::function<bool(std::size_t)> walk = [&](std::size_t j) -> bool {
    if (j == dim) return codes.count(p) || !in_hull(rows, p);
    for (long x = lo[j]; x <= hi[j]; ++x) {
      p[j] = x;
      if (!walk(j + 1)) return false;
    }
    return true;
  };
  return walk(0);
}

// Every hyperplane of L = span(dirs) spanned by some subset of dirs,
// identified by its reduced row echelon key; returns canonical normals.
inline std::set<std::vector<mpz_class>> arrangement_normals(const Mat& dirs, std::size_t dim) {
  const std::size_t m = rank_of(dirs, dim);
  const Mat complement = null_space(dirs, dim);  // L-perp
  std::set<Mat> seen;
  std::set<std::vector<mpz_class>> normals;
  const std::size_t n = dirs.size();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    Mat sub;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1U) sub.push_back(dirs[i]);
    }
    if (rank_of(sub, dim) + 1 != m) continue;
    Mat key = row_space_key(sub, dim);
    if (!seen.insert(key).second) continue;
    // Normal inside L: orthogonal to the hyperplane and to L-perp.
    Mat constraints = key;
    constraints.insert(constraints.end(), complement.begin(), complement.end());
    const Mat b = null_space(constraints, dim);
    if (b.size() != 1) continue;
    normals.insert(primitive(b[0]));
  }
  return normals;
}

// Vertices of { x : E x = e, A x <= a } by solving every square subsystem
// made of the equalities plus dim - rank(E) inequality rows.
inline std::set<Vec> tight_subset_vertices(const Mat& E, const Vec& e, const Mat& A, const Vec& a,
                                           std::size_t dim) {
  std::set<Vec> out;
  Mat eq_basis = row_space_key(E, dim);
  const std::size_t need = dim - eq_basis.size();
  // The reduced equalities keep their right-hand sides only through a solve,
  // so carry (E | e) together.
  Mat ext = E;
  for (std::size_t i = 0; i < ext.size(); ++i) ext[i].push_back(e[i]);
  Mat ext_key = row_space_key(ext, dim + 1);
  for (const auto& row : ext_key) {
    bool zero = true;
    for (std::size_t j = 0; j < dim; ++j) zero = zero && row[j] == 0;
    if (zero) return out;  // inconsistent equalities
  }
  for_each_subset(A.size(), need, [&](const std::vector<std::size_t>& s) {
    Mat m;
    Vec rhs;
    for (const auto& row : ext_key) {
      m.push_back(Vec(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(dim)));
      rhs.push_back(row[dim]);
    }
    for (auto i : s) {
      m.push_back(A[i]);
      rhs.push_back(a[i]);
    }
    auto x = solve_square(m, rhs);
    if (!x) return;
    for (std::size_t i = 0; i < A.size(); ++i) {
      Q lhs = 0;
      for (std::size_t j = 0; j < dim; ++j) lhs += A[i][j] * (*x)[j];
      if (lhs > a[i]) return;
    }
    out.insert(*x);
  });
  return out;
}

}  // namespace oracle
