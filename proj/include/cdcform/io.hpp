#pragma once

/// Problem and formulation documents (JSON) and LP-format text.
///
/// Rationals travel as strings ("3/2", "-4") so every document round-trips
/// exactly. Indices in documents are 1-based.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "cdcform/applications.hpp"
#include "cdcform/cdc_core.hpp"
#include "cdcform/verify.hpp"

namespace cdcform {

enum class ProblemKind { Cdc, Pwl, Annulus };
enum class CheckLevel { None, Validity, Ideal };
enum class OutputFormat { Json, Lp };

std::string_view to_string(ProblemKind kind);
std::string_view to_string(CheckLevel level);
CheckLevel parse_check_level(std::string_view text);
OutputFormat parse_output_format(std::string_view text);

struct EncodingSpec {
  EncodingKind kind = EncodingKind::BinaryReflectedGray;
  IntMatrix rows;  // explicit kind only
};

struct CdcProblem {
  Cdc cdc;
  EncodingSpec encoding;
};

struct PwlProblem {
  PwlFunction function;
  EncodingKind encoding = EncodingKind::BinaryReflectedGray;
};

struct AnnulusProblem {
  AnnulusSpec spec;
  EncodingKind encoding = EncodingKind::BinaryReflectedGray;
};

struct ProblemOptions {
  std::optional<CheckLevel> check;
  std::optional<OutputFormat> format;
};

struct ProblemDocument {
  std::variant<CdcProblem, PwlProblem, AnnulusProblem> body;
  ProblemOptions options;

  ProblemKind kind() const { return static_cast<ProblemKind>(body.index()); }
};

/// Validates the document; every violation is an InvalidInput (or
/// NotPowerOfTwo) error whose message starts with the offending field.
ProblemDocument parse_problem(std::string_view text);

/// The Cdc and encoding a problem describes, without building rows.
std::pair<Cdc, Encoding> problem_instance(const ProblemDocument& doc);

/// Runs the pipeline the document asks for.
PipelineResult run_pipeline(const ProblemDocument& doc,
                            const FormulationOptions& options = {});

struct VerificationSummary {
  CheckLevel level = CheckLevel::None;
  bool passed = false;
  std::size_t expected = 0;
  std::size_t found = 0;
  std::vector<RationalVector> missing;
  std::vector<RationalVector> extra;

  bool operator==(const VerificationSummary&) const = default;
};

VerificationSummary summarize(const VerificationReport& report);
/// One line for humans, e.g. "ideal check passed: expected 32 vertices, found 32 (...)".
std::string describe(const VerificationSummary& summary, std::size_t n_lambda);

struct FormulationDocument {
  Formulation formulation;
  RecoveryMap recovery;
  std::optional<VerificationSummary> verification;

  bool operator==(const FormulationDocument&) const = default;
};

std::string emit_structured(const Formulation& f, const RecoveryMap& recovery,
                            const std::optional<VerificationSummary>& verification = {});
FormulationDocument parse_structured(std::string_view text);

std::string lambda_name(std::size_t v);  // 0-based -> "lambda_{v+1}"
std::string z_name(std::size_t k);       // 0-based -> "z_{k+1}"

/// A linear program as written in LP text, integer coefficients only.
struct LpModel {
  struct Row {
    std::string name;
    std::map<std::string, Integer> coeffs;
    std::string sense;  // "<=", ">=", "="
    Integer rhs;

    bool operator==(const Row&) const = default;
  };
  struct Bound {
    std::optional<Integer> lower;
    std::optional<Integer> upper;

    bool operator==(const Bound&) const = default;
  };

  std::vector<Row> rows;
  std::map<std::string, Bound> bounds;
  std::set<std::string> generals;

  bool operator==(const LpModel&) const = default;
};

/// The integer-scaled model emit_lp_text writes for f.
LpModel lp_model(const Formulation& f);
std::string emit_lp_text(const Formulation& f);
/// Reads the LP subset emitted above (sections, continuation lines, signed
/// integer coefficients). Throws InvalidInput on anything else.
LpModel parse_lp_text(std::string_view text);

}  // namespace cdcform
