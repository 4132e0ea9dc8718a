#pragma once

/// Exact rational linear algebra over GMP rationals.
///
/// Every geometric decision in the library (ranks, affine hulls, hyperplane
/// normals, convex membership) goes through these routines, so no tolerance
/// ever enters a yes/no answer.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace cdcform {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;
using IntegerVector = std::vector<Integer>;

/// Builds p/q in canonical form. Throws InvalidInput when q == 0.
Rational make_rational(long numerator, long denominator = 1);

/// Parses "p/q", "p" or "-p/q". A U+2212 minus sign is accepted as well.
Rational parse_rational(std::string_view text);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);
RationalVector to_rational(std::span<const Integer> v);
RationalVector to_rational(std::span<const std::int64_t> v);

class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(std::size_t cols) : cols_(cols) {}
  /// Throws InvalidInput if a row has a length other than `cols`.
  RationalMatrix(std::size_t cols, std::vector<RationalVector> rows);

  /// Column count taken from the first row; an empty list gives a 0x0 matrix.
  static RationalMatrix from_rows(std::vector<RationalVector> rows);

  std::size_t row_count() const noexcept { return rows_.size(); }
  std::size_t col_count() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_.empty(); }

  const RationalVector& row(std::size_t i) const { return rows_[i]; }
  const std::vector<RationalVector>& rows() const noexcept { return rows_; }
  const Rational& at(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  Rational& at(std::size_t i, std::size_t j) { return rows_[i][j]; }

  void push_row(RationalVector row);
  RationalMatrix transpose() const;

  bool operator==(const RationalMatrix&) const = default;

 private:
  std::size_t cols_ = 0;
  std::vector<RationalVector> rows_;
};

/// Reduced row echelon form with the pivot column of each nonzero row.
struct Echelon {
  RationalMatrix reduced;
  std::vector<std::size_t> pivots;
};

Echelon row_reduce(RationalMatrix m);

std::size_t rank(const RationalMatrix& m);

/// Basis (as rows) of { x : m x = 0 }.
RationalMatrix nullspace(const RationalMatrix& m);

/// Some solution of a x = b, or nullopt when the system is inconsistent.
std::optional<RationalVector> solve_any(const RationalMatrix& a,
                                        const RationalVector& b);

/// Independent equality system A x = b whose solutions are exactly aff(points).
struct AffineHull {
  RationalMatrix eq_lhs;
  RationalVector eq_rhs;
  std::size_t ambient_dim = 0;

  std::size_t dimension() const { return ambient_dim - eq_lhs.row_count(); }
  bool contains(std::span<const Rational> point) const;
};

/// Throws EmptyPointSet for no points and InvalidInput for ragged input.
AffineHull affine_hull(std::span<const RationalVector> points);

/// Nonzero b in span(space_basis) with b . s = 0 for every row s of `subset`.
/// Requires the rows of `subset` to lie in the space and to have rank exactly
/// one less than it; throws NotAHyperplane otherwise.
RationalVector orthogonal_in_subspace(const RationalMatrix& space_basis,
                                      const RationalMatrix& subset);

/// Integer vector parallel to v with entry gcd 1 and first nonzero entry
/// positive. Throws ZeroVector on v == 0.
IntegerVector primitive_canonical(std::span<const Rational> v);
IntegerVector primitive_canonical(std::span<const Integer> v);

/// Multiplies both sides by the positive lcm of all denominators.
std::pair<IntegerVector, IntegerVector> scale_row_to_integers(
    std::span<const Rational> coeffs, std::span<const Rational> rhs_coeffs);

/// Exact phase-one simplex: does { x >= 0 : a x = b } have a point?
bool has_nonnegative_solution(const RationalMatrix& a, const RationalVector& b);

/// Is `point` a convex combination of `generators`?
bool in_convex_hull(std::span<const RationalVector> generators,
                    std::span<const Rational> point);

}  // namespace cdcform
