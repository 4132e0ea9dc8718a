#include "cdcform/exact_linalg.hpp"

#include <algorithm>

#include "cdcform/error.hpp"

namespace cdcform {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::EmptyPointSet: return "EmptyPointSet";
    case ErrorCode::NotAHyperplane: return "NotAHyperplane";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::InvalidOrder: return "InvalidOrder";
    case ErrorCode::TooFewAlternatives: return "TooFewAlternatives";
    case ErrorCode::NeedsExplicitRows: return "NeedsExplicitRows";
    case ErrorCode::HoleCheckTooLarge: return "HoleCheckTooLarge";
    case ErrorCode::NoDirections: return "NoDirections";
    case ErrorCode::TooManyDirections: return "TooManyDirections";
    case ErrorCode::DimensionDeficit: return "DimensionDeficit";
    case ErrorCode::EncodingNotIdealizable: return "EncodingNotIdealizable";
    case ErrorCode::NotPowerOfTwo: return "NotPowerOfTwo";
    case ErrorCode::DegenerateSecant: return "DegenerateSecant";
    case ErrorCode::Unbounded: return "Unbounded";
    case ErrorCode::TooLargeToEnumerate: return "TooLargeToEnumerate";
  }
  return "Unknown";
}

Rational make_rational(long numerator, long denominator) {
  if (denominator == 0) {
    throw Error(ErrorCode::InvalidInput, "zero denominator");
  }
  Rational q(numerator, denominator);
  q.canonicalize();
  return q;
}

Rational parse_rational(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    // U+2212 MINUS SIGN in UTF-8
    if (text.substr(i, 3) == "\xE2\x88\x92") {
      s.push_back('-');
      i += 2;
    } else if (text[i] != ' ') {
      s.push_back(text[i]);
    }
  }
  auto valid_integer = [](std::string_view t, bool allow_sign) {
    std::size_t start = 0;
    if (allow_sign && !t.empty() && (t[0] == '-' || t[0] == '+')) start = 1;
    if (start == t.size()) return false;
    return std::all_of(t.begin() + static_cast<std::ptrdiff_t>(start), t.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false)) {
    throw Error(ErrorCode::InvalidInput,
                "not a rational literal: \"" + std::string(text) + "\"");
  }
  if (!num.empty() && num[0] == '+') num.erase(0, 1);
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) {
    throw Error(ErrorCode::InvalidInput,
                "zero denominator in \"" + std::string(text) + "\"");
  }
  Rational q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational acc = 0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
  }
  return acc;
}

RationalVector to_rational(std::span<const Integer> v) {
  RationalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

RationalVector to_rational(std::span<const std::int64_t> v) {
  RationalVector out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

RationalMatrix::RationalMatrix(std::size_t cols, std::vector<RationalVector> rows)
    : cols_(cols), rows_(std::move(rows)) {
  for (const auto& r : rows_) {
    if (r.size() != cols_) {
      throw Error(ErrorCode::InvalidInput, "ragged matrix rows");
    }
  }
}

RationalMatrix RationalMatrix::from_rows(std::vector<RationalVector> rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  return RationalMatrix(cols, std::move(rows));
}

void RationalMatrix::push_row(RationalVector row) {
  if (row.size() != cols_) {
    throw Error(ErrorCode::InvalidInput, "row length does not match matrix");
  }
  rows_.push_back(std::move(row));
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(rows_.size());
  for (std::size_t j = 0; j < cols_; ++j) {
    RationalVector col(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) col[i] = rows_[i][j];
    t.push_row(std::move(col));
  }
  return t;
}

Echelon row_reduce(RationalMatrix m) {
  Echelon out;
  const std::size_t rows = m.row_count();
  const std::size_t cols = m.col_count();
  std::vector<RationalVector> a = m.rows();
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows; ++col) {
    std::size_t pivot = lead;
    while (pivot < rows && a[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(a[pivot], a[lead]);
    const Rational inv = 1 / a[lead][col];
    for (auto& x : a[lead]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == lead || a[i][col] == 0) continue;
      const Rational factor = a[i][col];
      for (std::size_t j = col; j < cols; ++j) {
        if (a[lead][j] != 0) a[i][j] -= factor * a[lead][j];
      }
    }
    out.pivots.push_back(col);
    ++lead;
  }
  a.resize(lead);
  out.reduced = RationalMatrix(cols, std::move(a));
  return out;
}

std::size_t rank(const RationalMatrix& m) { return row_reduce(m).pivots.size(); }

RationalMatrix nullspace(const RationalMatrix& m) {
  const std::size_t cols = m.col_count();
  const Echelon e = row_reduce(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : e.pivots) is_pivot[p] = true;
  RationalMatrix basis(cols);
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols);
    v[free] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
      v[e.pivots[i]] = -e.reduced.at(i, free);
    }
    basis.push_row(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> solve_any(const RationalMatrix& a,
                                        const RationalVector& b) {
  if (b.size() != a.row_count()) {
    throw Error(ErrorCode::InvalidInput, "right-hand side length mismatch");
  }
  const std::size_t cols = a.col_count();
  RationalMatrix aug(cols + 1);
  for (std::size_t i = 0; i < a.row_count(); ++i) {
    RationalVector row = a.row(i);
    row.push_back(b[i]);
    aug.push_row(std::move(row));
  }
  const Echelon e = row_reduce(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == cols) return std::nullopt;
  RationalVector x(cols);
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    x[e.pivots[i]] = e.reduced.at(i, cols);
  }
  return x;
}

bool AffineHull::contains(std::span<const Rational> point) const {
  for (std::size_t i = 0; i < eq_lhs.row_count(); ++i) {
    if (dot(eq_lhs.row(i), point) != eq_rhs[i]) return false;
  }
  return true;
}

AffineHull affine_hull(std::span<const RationalVector> points) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyPointSet, "affine hull of no points");
  }
  const std::size_t dim = points.front().size();
  RationalMatrix diffs(dim);
  for (const auto& p : points) {
    if (p.size() != dim) {
      throw Error(ErrorCode::InvalidInput, "points of mixed dimension");
    }
    RationalVector d(dim);
    for (std::size_t j = 0; j < dim; ++j) d[j] = p[j] - points.front()[j];
    diffs.push_row(std::move(d));
  }
  AffineHull hull;
  hull.ambient_dim = dim;
  // Normals to every difference vector cut out the hull through points[0].
  hull.eq_lhs = nullspace(diffs);
  for (const auto& normal : hull.eq_lhs.rows()) {
    hull.eq_rhs.push_back(dot(normal, points.front()));
  }
  return hull;
}

RationalVector orthogonal_in_subspace(const RationalMatrix& space_basis,
                                      const RationalMatrix& subset) {
  const std::size_t dim = space_basis.col_count();
  if (!subset.empty() && subset.col_count() != dim) {
    throw Error(ErrorCode::NotAHyperplane, "subset dimension mismatch");
  }
  const Echelon space = row_reduce(space_basis);
  const std::size_t m = space.pivots.size();
  if (m == 0) {
    throw Error(ErrorCode::NotAHyperplane, "ambient space is {0}");
  }
  RationalMatrix combined = space.reduced;
  for (const auto& s : subset.rows()) combined.push_row(s);
  if (rank(combined) != m) {
    throw Error(ErrorCode::NotAHyperplane, "subset leaves the ambient space");
  }
  if (rank(subset) + 1 != m) {
    throw Error(ErrorCode::NotAHyperplane,
                "subset rank is not one less than the space dimension");
  }
  // b = B^T y with (S B^T) y = 0; the solution line is one-dimensional.
  RationalMatrix system(m);
  for (const auto& s : subset.rows()) {
    RationalVector row(m);
    for (std::size_t i = 0; i < m; ++i) row[i] = dot(s, space.reduced.row(i));
    system.push_row(std::move(row));
  }
  const RationalMatrix y = nullspace(system);
  RationalVector b(dim);
  for (std::size_t i = 0; i < m; ++i) {
    if (y.at(0, i) == 0) continue;
    for (std::size_t j = 0; j < dim; ++j) {
      b[j] += y.at(0, i) * space.reduced.at(i, j);
    }
  }
  return b;
}

IntegerVector primitive_canonical(std::span<const Rational> v) {
  Integer lcm = 1;
  for (const auto& x : v) {
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
  }
  IntegerVector out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    Integer scaled = x.get_num() * (lcm / x.get_den());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), scaled.get_mpz_t());
    out.push_back(std::move(scaled));
  }
  if (g == 0) throw Error(ErrorCode::ZeroVector, "cannot canonicalize 0");
  const auto first = std::find_if(out.begin(), out.end(),
                                  [](const Integer& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto& x : out) x /= g;
  return out;
}

IntegerVector primitive_canonical(std::span<const Integer> v) {
  return primitive_canonical(to_rational(v));
}

std::pair<IntegerVector, IntegerVector> scale_row_to_integers(
    std::span<const Rational> coeffs, std::span<const Rational> rhs_coeffs) {
  Integer lcm = 1;
  for (auto part : {coeffs, rhs_coeffs}) {
    for (const auto& x : part) {
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den_mpz_t());
    }
  }
  auto scale = [&](std::span<const Rational> part) {
    IntegerVector out;
    out.reserve(part.size());
    for (const auto& x : part) out.push_back(x.get_num() * (lcm / x.get_den()));
    return out;
  };
  return {scale(coeffs), scale(rhs_coeffs)};
}

bool has_nonnegative_solution(const RationalMatrix& a, const RationalVector& b) {
  const std::size_t m = a.row_count();
  const std::size_t n = a.col_count();
  if (b.size() != m) {
    throw Error(ErrorCode::InvalidInput, "right-hand side length mismatch");
  }
  if (m == 0) return true;
  // Tableau columns: n originals, m artificials, then the right-hand side.
  const std::size_t width = n + m + 1;
  std::vector<RationalVector> tab(m, RationalVector(width));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip ? -a.at(i, j) : a.at(i, j);
    tab[i][n + i] = 1;
    tab[i][n + m] = flip ? -b[i] : b[i];
    basis[i] = n + i;
  }
  // Reduced costs of "minimize sum of artificials".
  RationalVector cost(width);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= tab[i][j];
    cost[n + m] -= tab[i][n + m];
  }
  while (true) {
    // Bland's rule: lowest-index improving column, lowest-index tie break.
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (cost[j] < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (tab[i][enter] <= 0) continue;
      Rational ratio = tab[i][n + m] / tab[i][enter];
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = std::move(ratio);
      }
    }
    if (leave == m) break;  // unbounded direction cannot occur in phase one
    const Rational inv = 1 / tab[leave][enter];
    for (auto& x : tab[leave]) x *= inv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || tab[i][enter] == 0) continue;
      const Rational f = tab[i][enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (tab[leave][j] != 0) tab[i][j] -= f * tab[leave][j];
      }
    }
    if (cost[enter] != 0) {
      const Rational f = cost[enter];
      for (std::size_t j = 0; j < width; ++j) {
        if (tab[leave][j] != 0) cost[j] -= f * tab[leave][j];
      }
    }
    basis[leave] = enter;
  }
  return cost[n + m] == 0;
}

bool in_convex_hull(std::span<const RationalVector> generators,
                    std::span<const Rational> point) {
  if (generators.empty()) return false;
  const std::size_t dim = point.size();
  RationalMatrix a(generators.size());
  for (std::size_t k = 0; k < dim; ++k) {
    RationalVector row(generators.size());
    for (std::size_t j = 0; j < generators.size(); ++j) row[j] = generators[j][k];
    a.push_row(std::move(row));
  }
  a.push_row(RationalVector(generators.size(), Rational(1)));
  RationalVector rhs(point.begin(), point.end());
  rhs.emplace_back(1);
  return has_nonnegative_solution(a, rhs);
}

}  // namespace cdcform
