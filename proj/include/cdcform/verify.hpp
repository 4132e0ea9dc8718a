#pragma once

/// Exact certification of emitted formulations.
///
/// The LP relaxation of a formulation (simplex on lambda, aff(H) on z, the
/// paired rows and the z box) is bounded, so it equals the convex hull of the
/// embedding exactly when both have the same vertices. Every embedding
/// vertex (e^w, h^j) has integral z, so matching vertex sets also certifies
/// that the formulation is ideal.

#include <cstddef>
#include <set>
#include <vector>

#include "cdcform/cdc_core.hpp"
#include "cdcform/exact_linalg.hpp"
#include "cdcform/formulation.hpp"

namespace cdcform {

using VertexSet = std::set<RationalVector>;

struct VerifyOptions {
  /// Cap on the number of intermediate rays held by the enumeration.
  std::size_t max_rays = 500'000;
};

/// { x : eq_lhs x = eq_rhs, ineq_lhs x <= ineq_rhs }
struct LinearSystem {
  RationalMatrix eq_lhs;
  RationalVector eq_rhs;
  RationalMatrix ineq_lhs;
  RationalVector ineq_rhs;

  std::size_t dim() const { return ineq_lhs.col_count(); }
};

/// The LP relaxation of f over (lambda, z).
LinearSystem relaxation_system(const Formulation& f);

/// All vertices of a bounded polyhedron by the double description method.
/// Throws Unbounded if the region has a recession direction and
/// TooLargeToEnumerate when the ray cap is exceeded.
VertexSet enumerate_vertices(const LinearSystem& system,
                             const VerifyOptions& options = {});
VertexSet enumerate_vertices(const Formulation& f, const VerifyOptions& options = {});

/// { (e^w, h^j) : w in T^j }
VertexSet embedding_extreme_points(const Cdc& cdc, const Encoding& e);

struct VerificationReport {
  bool passed = false;
  std::vector<RationalVector> missing;
  std::vector<RationalVector> extra;
  std::size_t expected = 0;
  std::size_t found = 0;

  /// Extra vertices whose z part is not integral.
  std::size_t fractional_extra_count(std::size_t n_lambda) const;
};

VerificationReport check_ideal(const Cdc& cdc, const Encoding& e,
                               const Formulation& f,
                               const VerifyOptions& options = {});

/// Every embedding vertex satisfies every row of f.
bool check_validity_only(const Cdc& cdc, const Encoding& e, const Formulation& f);

/// Does x satisfy the whole relaxation?
bool satisfies(const LinearSystem& system, const RationalVector& x);

}  // namespace cdcform
