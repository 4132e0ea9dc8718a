#pragma once

/// Ideal formulations for combinatorial disjunctive constraints.
///
/// Given alternatives T^1..T^d over the ground set {1..n} and an encoding
/// h^1..h^d, the convex hull of the embedding  U_i (P(T^i) x {h^i})  is cut
/// out by the simplex on lambda, aff(H) on z, and one paired row
///
///   sum_v min_{s : v in T^s} (b . h^s) lambda_v <= b . z
///                          <= sum_v max_{s : v in T^s} (b . h^s) lambda_v
///
/// per hyperplane b of span(C) spanned by the difference directions
/// C = { h^j - h^i : T^i and T^j intersect }, provided span(C) has the
/// dimension of aff(H).
///
/// Indices are 0-based throughout the API; documents and LP text use 1-based
/// names.

#include <cstddef>
#include <string>
#include <vector>

#include "cdcform/encodings.hpp"
#include "cdcform/exact_linalg.hpp"
#include "cdcform/formulation.hpp"

namespace cdcform {

class Cdc {
 public:
  /// Validates d >= 2, nonempty alternatives, elements below n, and that the
  /// alternatives cover {0..n-1}. Elements are stored sorted.
  Cdc(std::size_t n, std::vector<std::vector<std::size_t>> alternatives);

  std::size_t ground_size() const noexcept { return n_; }
  std::size_t alternative_count() const noexcept { return alternatives_.size(); }
  const std::vector<std::vector<std::size_t>>& alternatives() const noexcept {
    return alternatives_;
  }
  const std::vector<std::size_t>& alternative(std::size_t i) const {
    return alternatives_[i];
  }
  bool contains(std::size_t alternative, std::size_t element) const;
  /// Alternatives whose support contains `element`.
  std::vector<std::size_t> alternatives_containing(std::size_t element) const;

  bool operator==(const Cdc&) const = default;

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> alternatives_;
};

struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;

  auto operator<=>(const Arc&) const = default;
};

struct IntersectionDigraph {
  std::size_t d = 0;
  std::vector<Arc> arcs;  // from < to, sorted
};

struct DifferenceDirections {
  struct Entry {
    Arc arc;
    IntVector vector;  // h^to - h^from
  };
  std::size_t dim = 0;
  std::vector<Entry> raw;
  std::vector<IntegerVector> deduped;  // primitive canonical, sorted
};

inline constexpr std::size_t kDefaultMaxDirections = 20;

IntersectionDigraph intersection_digraph(const Cdc& cdc);
bool is_weakly_connected(const IntersectionDigraph& g);
DifferenceDirections difference_directions(const IntersectionDigraph& g,
                                           const Encoding& e);

struct DimensionReport {
  std::size_t direction_rank = 0;
  std::size_t hull_dim = 0;
  bool satisfied() const { return direction_rank == hull_dim; }
};

DimensionReport dimension_report(const DifferenceDirections& c, const Encoding& e);
bool check_dim_condition(const DifferenceDirections& c, const Encoding& e);

/// Canonical normals of every hyperplane of span(C) spanned by a subset of the
/// deduped directions, sorted lexicographically. Throws NoDirections on an
/// empty set and TooManyDirections above `max_directions`.
std::vector<IntegerVector> spanned_hyperplane_normals(
    const DifferenceDirections& c,
    std::size_t max_directions = kDefaultMaxDirections);

struct FormulationOptions {
  std::uint64_t hole_check_cap = kDefaultHoleCheckCap;
  std::size_t max_directions = kDefaultMaxDirections;
  bool run_gates = true;
};

/// Rows ell . lambda <= b . z <= u . lambda for the given normals, with the
/// per-element min/max of b . h^s over alternatives containing the element.
PairedRow paired_row(const Cdc& cdc, const Encoding& e, IntegerVector normal);

/// Simplex row, aff(H) rows (integer scaled) and the z box of H.
Formulation base_formulation(const Cdc& cdc, const Encoding& e);

/// Emits the ideal formulation. Throws EncodingNotIdealizable when the encoding
/// is not hole-free in convex position and DimensionDeficit when span(C) is
/// too small.
Formulation theorem1_formulation(const Cdc& cdc, const Encoding& e,
                                 const FormulationOptions& options = {});

}  // namespace cdcform
