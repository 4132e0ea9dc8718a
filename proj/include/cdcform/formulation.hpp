#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cdcform/encodings.hpp"
#include "cdcform/exact_linalg.hpp"

namespace cdcform {

/// coeffs . (lambda, z) == rhs; coeffs has n_lambda + r_z entries.
struct LinearEquality {
  RationalVector coeffs;
  Rational rhs;

  bool operator==(const LinearEquality&) const = default;
};

/// lower . lambda <= normal . z <= upper . lambda
struct PairedRow {
  IntegerVector normal;
  RationalVector lower;
  RationalVector upper;

  bool operator==(const PairedRow&) const = default;
};

struct IntegerBound {
  std::int64_t lower = 0;
  std::int64_t upper = 0;

  bool operator==(const IntegerBound&) const = default;
};

enum class Pipeline { General, ClosedForm };

std::string_view to_string(Pipeline p);
Pipeline parse_pipeline(std::string_view text);

struct Provenance {
  std::string source = "cdc";
  EncodingKind encoding = EncodingKind::Explicit;
  Pipeline pipeline = Pipeline::General;
  std::optional<std::size_t> kappa;
  std::vector<std::string> notes;

  bool operator==(const Provenance&) const = default;
};

/// The system  sum(lambda) = 1, aff(H) on z, lambda >= 0, the paired general
/// rows, and integer z inside [z_bounds].
struct Formulation {
  std::size_t n_lambda = 0;
  std::size_t r_z = 0;
  std::vector<LinearEquality> equalities;
  std::vector<PairedRow> general_rows;
  std::vector<IntegerBound> z_bounds;
  Provenance provenance;

  std::size_t variable_count() const { return n_lambda + r_z; }
  std::size_t gamma() const { return general_rows.size(); }
  std::size_t general_inequality_count() const { return 2 * general_rows.size(); }

  bool operator==(const Formulation&) const = default;
};

/// Equal constraint systems, ignoring provenance.
bool same_system(const Formulation& a, const Formulation& b);

/// Sorts general rows by normal; the order every pipeline emits.
void sort_general_rows(Formulation& f);

}  // namespace cdcform
