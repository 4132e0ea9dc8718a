#pragma once

/// Closed-form pipelines for univariate piecewise linear epigraphs and for the
/// quadrilateral relaxation of a planar annulus. Each closed form produces
/// the same system as theorem1_formulation on the corresponding Cdc.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cdcform/cdc_core.hpp"
#include "cdcform/encodings.hpp"
#include "cdcform/exact_linalg.hpp"
#include "cdcform/formulation.hpp"

namespace cdcform {

enum class RecoveryKind { None, PwlEpigraph, AnnulusPoints };

/// Maps each lambda index back to a point of the original space.
/// PWL: x = sum lambda_v x_v and y >= sum lambda_v y_v (epigraph).
/// Annulus: x = sum lambda_v v^v in double precision.
struct RecoveryMap {
  RecoveryKind kind = RecoveryKind::None;
  std::vector<std::array<Rational, 2>> exact_points;
  std::vector<std::array<double, 2>> approx_points;

  std::size_t size() const {
    return kind == RecoveryKind::PwlEpigraph ? exact_points.size()
                                             : approx_points.size();
  }
  bool empty() const { return kind == RecoveryKind::None; }

  bool operator==(const RecoveryMap&) const = default;
};

/// Everything a pipeline produced, including the inputs the verifier needs.
struct PipelineResult {
  Cdc cdc;
  Encoding encoding;
  Formulation formulation;
  RecoveryMap recovery;
};

// ---------------------------------------------------------------------------
// Piecewise linear functions

/// f(x) = a_i x + b_i on [t_i, t_{i+1}], i = 1..d.
class PwlFunction {
 public:
  /// Throws InvalidInput unless t is strictly increasing, d >= 2 and the
  /// slope/intercept counts equal d.
  PwlFunction(std::vector<Rational> breakpoints, std::vector<Rational> slopes,
              std::vector<Rational> intercepts);

  std::size_t piece_count() const noexcept { return slopes_.size(); }
  const std::vector<Rational>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<Rational>& slopes() const noexcept { return slopes_; }
  const std::vector<Rational>& intercepts() const noexcept { return intercepts_; }

  /// Value of piece i (0-based) at x.
  Rational piece_value(std::size_t i, const Rational& x) const;
  /// Continuity at interior breakpoint t_{i} for 0-based i in [1, d-1].
  bool continuous_at(std::size_t breakpoint) const;

 private:
  std::vector<Rational> breakpoints_;
  std::vector<Rational> slopes_;
  std::vector<Rational> intercepts_;
};

struct PwlGroundSet {
  std::vector<std::array<Rational, 2>> points;
  std::vector<std::vector<std::size_t>> alternatives;  // 0-based, size 2 each
  std::size_t kappa = 0;

  Cdc cdc() const { return Cdc(points.size(), alternatives); }
};

PwlGroundSet pwl_ground_set(const PwlFunction& f);
bool pwl_prop3_applicable(const PwlFunction& f);
/// 0-based indices of discontinuous interior breakpoints.
std::vector<std::size_t> pwl_jumps(const PwlFunction& f);

PipelineResult pwl_formulation(const PwlFunction& f, EncodingKind kind,
                               const FormulationOptions& options = {});

// ---------------------------------------------------------------------------
// Annulus relaxation

struct AnnulusSpec {
  double inner_radius = 1.0;
  double outer_radius = 1.0;
  std::size_t d = 8;
};

inline constexpr std::size_t kMinGeometricAnnulusPieces = 8;

/// Throws NotPowerOfTwo for d not a power of two or d < 2.
void require_annulus_size(std::size_t d);

/// v^1..v^{2d}: odd indices on the inner circle, even indices on the
/// circumscribing polygon of the outer circle. Throws DegenerateSecant for
/// d < 8 unless `allow_small`, and always for d <= 2.
std::vector<std::array<double, 2>> annulus_vertices(const AnnulusSpec& spec,
                                                    bool allow_small = false);

/// T^i = {2i-3, 2i-2, 2i-1, 2i} (1-based, mod 2d).
Cdc annulus_cdc(std::size_t d);

PipelineResult annulus_gray_formulation(std::size_t d,
                                        const FormulationOptions& options = {});
PipelineResult annulus_gray_formulation(const AnnulusSpec& spec,
                                        const FormulationOptions& options = {});
PipelineResult annulus_zigzag_formulation(std::size_t d,
                                          const FormulationOptions& options = {});
PipelineResult annulus_zigzag_formulation(const AnnulusSpec& spec,
                                          const FormulationOptions& options = {});

}  // namespace cdcform
