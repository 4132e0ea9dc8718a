#include "cdcform/applications.hpp"

#include <cmath>
#include <numbers>

#include "cdcform/error.hpp"

namespace cdcform {

PwlFunction::PwlFunction(std::vector<Rational> breakpoints,
                         std::vector<Rational> slopes,
                         std::vector<Rational> intercepts)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)),
      intercepts_(std::move(intercepts)) {
  if (slopes_.size() < 2) {
    throw Error(ErrorCode::InvalidInput,
                "slopes: need at least 2 pieces, got " + std::to_string(slopes_.size()));
  }
  if (intercepts_.size() != slopes_.size()) {
    throw Error(ErrorCode::InvalidInput,
                "intercepts: expected " + std::to_string(slopes_.size()) +
                    " entries, got " + std::to_string(intercepts_.size()));
  }
  if (breakpoints_.size() != slopes_.size() + 1) {
    throw Error(ErrorCode::InvalidInput,
                "breakpoints: expected " + std::to_string(slopes_.size() + 1) +
                    " entries, got " + std::to_string(breakpoints_.size()));
  }
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i - 1] < breakpoints_[i])) {
      throw Error(ErrorCode::InvalidInput,
                  "breakpoints: not strictly increasing at position " +
                      std::to_string(i + 1));
    }
  }
}

Rational PwlFunction::piece_value(std::size_t i, const Rational& x) const {
  return slopes_[i] * x + intercepts_[i];
}

bool PwlFunction::continuous_at(std::size_t breakpoint) const {
  const Rational& t = breakpoints_[breakpoint];
  return piece_value(breakpoint - 1, t) == piece_value(breakpoint, t);
}

std::vector<std::size_t> pwl_jumps(const PwlFunction& f) {
  std::vector<std::size_t> jumps;
  for (std::size_t i = 1; i < f.piece_count(); ++i) {
    if (!f.continuous_at(i)) jumps.push_back(i);
  }
  return jumps;
}

PwlGroundSet pwl_ground_set(const PwlFunction& f) {
  const auto& t = f.breakpoints();
  const std::size_t d = f.piece_count();
  PwlGroundSet g;
  g.alternatives.resize(d);
  g.points.push_back({t[0], f.piece_value(0, t[0])});
  std::size_t start = 0;
  for (std::size_t i = 1; i < d; ++i) {
    const Rational left = f.piece_value(i - 1, t[i]);
    const Rational right = f.piece_value(i, t[i]);
    g.points.push_back({t[i], left});
    g.alternatives[i - 1] = {start, g.points.size() - 1};
    if (left != right) {
      // Left limit keeps the smaller index.
      g.points.push_back({t[i], right});
      ++g.kappa;
    }
    start = g.points.size() - 1;
  }
  g.points.push_back({t[d], f.piece_value(d - 1, t[d])});
  g.alternatives[d - 1] = {start, g.points.size() - 1};
  return g;
}

bool pwl_prop3_applicable(const PwlFunction& f) {
  const std::size_t d = f.piece_count();
  if (!is_power_of_two(d) || d < 4) return false;
  // Breakpoint t_j (1-based) is index j-1 here.
  auto continuous_on = [&](std::size_t first, std::size_t last) {
    for (std::size_t j = first; j <= last; ++j) {
      if (!f.continuous_at(j - 1)) return false;
    }
    return true;
  };
  return continuous_on(d / 4 + 1, d / 2 + 1) ||
         continuous_on(d / 2 + 1, 3 * d / 4 + 1);
}

namespace {

void enforce_gates(const Encoding& e, const FormulationOptions& options) {
  if (!options.run_gates) return;
  if (!check_gates(e, options.hole_check_cap).passed()) {
    throw Error(ErrorCode::EncodingNotIdealizable,
                "encoding fails the convex-position or hole-free gate");
  }
}

IntegerVector unit_normal(std::size_t dim, std::size_t k) {
  IntegerVector e(dim, Integer(0));
  e[k] = 1;
  return e;
}

std::string jump_list(const std::vector<std::size_t>& jumps) {
  std::string s;
  for (auto j : jumps) s += (s.empty() ? "t_" : ", t_") + std::to_string(j + 1);
  return s.empty() ? "none" : s;
}

}  // namespace

PipelineResult pwl_formulation(const PwlFunction& f, EncodingKind kind,
                               const FormulationOptions& options) {
  if (kind == EncodingKind::Explicit) {
    throw Error(ErrorCode::NeedsExplicitRows,
                "piecewise linear pipeline takes gray or zigzag encodings");
  }
  const PwlGroundSet ground = pwl_ground_set(f);
  PipelineResult result{ground.cdc(), make_encoding(f.piece_count(), kind), {}, {}};
  const Cdc& cdc = result.cdc;
  const Encoding& e = result.encoding;

  if (pwl_prop3_applicable(f)) {
    enforce_gates(e, options);
    Formulation form = base_formulation(cdc, e);
    for (std::size_t k = 0; k < e.dim(); ++k) {
      PairedRow row;
      row.normal = unit_normal(e.dim(), k);
      for (std::size_t v = 0; v < cdc.ground_size(); ++v) {
        std::int64_t lo = 0, hi = 0;
        bool first = true;
        for (std::size_t s = 0; s < e.size(); ++s) {
          if (!cdc.contains(s, v)) continue;
          const auto h = e.row(s)[k];
          lo = first ? h : std::min(lo, h);
          hi = first ? h : std::max(hi, h);
          first = false;
        }
        row.lower.emplace_back(static_cast<long>(lo));
        row.upper.emplace_back(static_cast<long>(hi));
      }
      form.general_rows.push_back(std::move(row));
    }
    sort_general_rows(form);
    form.provenance.pipeline = Pipeline::ClosedForm;
    result.formulation = std::move(form);
  } else {
    try {
      result.formulation = theorem1_formulation(cdc, e, options);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::DimensionDeficit) throw;
      throw Error(ErrorCode::DimensionDeficit,
                  std::string(err.what()) + "; discontinuous at " +
                      jump_list(pwl_jumps(f)) +
                      ", no continuous quarter interval available");
    }
    result.formulation.provenance.notes.push_back(
        "general path: no continuous quarter interval");
  }
  result.formulation.provenance.source = "pwl";
  result.formulation.provenance.kappa = ground.kappa;
  result.recovery.kind = RecoveryKind::PwlEpigraph;
  result.recovery.exact_points = ground.points;
  return result;
}

void require_annulus_size(std::size_t d) {
  if (d < 2) {
    throw Error(ErrorCode::TooFewAlternatives,
                "annulus needs at least 2 pieces, got " + std::to_string(d));
  }
  if (!is_power_of_two(d)) {
    throw Error(ErrorCode::NotPowerOfTwo,
                "annulus piece count " + std::to_string(d) + " is not a power of two");
  }
}

std::vector<std::array<double, 2>> annulus_vertices(const AnnulusSpec& spec,
                                                    bool allow_small) {
  require_annulus_size(spec.d);
  if (!(spec.inner_radius >= 0.0) || !(spec.outer_radius >= spec.inner_radius) ||
      !std::isfinite(spec.outer_radius)) {
    throw Error(ErrorCode::InvalidInput, "radii must satisfy 0 <= L <= U < inf");
  }
  if (spec.d <= 2 || (spec.d < kMinGeometricAnnulusPieces && !allow_small)) {
    throw Error(ErrorCode::DegenerateSecant,
                "quadrilateral pieces degenerate for d = " + std::to_string(spec.d));
  }
  const double d = static_cast<double>(spec.d);
  // Outer vertices sit on the polygon circumscribing the radius-U circle.
  const double outer = spec.outer_radius / std::cos(std::numbers::pi / d);
  std::vector<std::array<double, 2>> v;
  v.reserve(2 * spec.d);
  for (std::size_t i = 1; i <= spec.d; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / d;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    v.push_back({spec.inner_radius * c, spec.inner_radius * s});
    v.push_back({outer * c, outer * s});
  }
  return v;
}

Cdc annulus_cdc(std::size_t d) {
  require_annulus_size(d);
  const std::size_t n = 2 * d;
  std::vector<std::vector<std::size_t>> alternatives;
  for (std::size_t i = 1; i <= d; ++i) {
    std::vector<std::size_t> alt;
    // 1-based 2i-3..2i becomes 0-based 2i-4..2i-1 taken mod 2d.
    for (std::size_t s = 1; s <= 4; ++s) alt.push_back((2 * i + s + n - 5) % n);
    alternatives.push_back(std::move(alt));
  }
  return Cdc(n, std::move(alternatives));
}

namespace {

// Alternatives i-1 and i (cyclic) share the two lambda indices returned here.
std::array<std::size_t, 2> shared_pair(std::size_t i, std::size_t d) {
  const std::size_t n = 2 * d;
  return {(2 * i + n - 4) % n, (2 * i + n - 3) % n};
}

// min/max over consecutive codes of `level`, spread onto the shared pairs.
PairedRow cyclic_row(IntegerVector normal, const std::vector<Rational>& level,
                     std::size_t d) {
  PairedRow row;
  row.normal = std::move(normal);
  row.lower.resize(2 * d);
  row.upper.resize(2 * d);
  for (std::size_t i = 1; i <= d; ++i) {
    const Rational& prev = level[(i + d - 2) % d];
    const Rational& cur = level[i - 1];
    const Rational lo = prev < cur ? prev : cur;
    const Rational hi = prev < cur ? cur : prev;
    for (auto v : shared_pair(i, d)) {
      row.lower[v] = lo;
      row.upper[v] = hi;
    }
  }
  return row;
}

Rational inverse_power_of_two(std::size_t exponent) {
  Integer den;
  mpz_ui_pow_ui(den.get_mpz_t(), 2, exponent);
  return Rational(Integer(1), den);
}

PipelineResult annulus_closed_form(std::size_t d, EncodingKind kind,
                                   const FormulationOptions& options) {
  PipelineResult result{annulus_cdc(d), make_encoding(d, kind), {}, {}};
  const Encoding& e = result.encoding;
  enforce_gates(e, options);
  Formulation form = base_formulation(result.cdc, e);
  const std::size_t r = e.dim();

  for (std::size_t k = 0; k < r; ++k) {
    std::vector<Rational> level;
    for (const auto& h : e.rows()) level.emplace_back(static_cast<long>(h[k]));
    form.general_rows.push_back(cyclic_row(unit_normal(r, k), level, d));
  }
  if (kind == EncodingKind::ZigZag) {
    // b = 2^{-l} e^k - 2^{-k} e^l for each pair k < l (1-based exponents).
    for (std::size_t k = 0; k < r; ++k) {
      for (std::size_t l = k + 1; l < r; ++l) {
        RationalVector b(r, Rational(0));
        b[k] = inverse_power_of_two(l + 1);
        b[l] = -inverse_power_of_two(k + 1);
        IntegerVector normal = primitive_canonical(b);
        const Rational scale = Rational(normal[k]) / b[k];  // positive
        std::vector<Rational> level;
        for (const auto& h : e.rows()) level.push_back(dot(b, to_rational(h)) * scale);
        form.general_rows.push_back(cyclic_row(std::move(normal), level, d));
      }
    }
  }
  sort_general_rows(form);
  form.provenance.source = "annulus";
  form.provenance.pipeline = Pipeline::ClosedForm;
  result.formulation = std::move(form);
  return result;
}

void attach_annulus_recovery(PipelineResult& result, const AnnulusSpec& spec) {
  auto& notes = result.formulation.provenance.notes;
  if (spec.d < kMinGeometricAnnulusPieces) {
    notes.push_back("recovery map omitted: fewer than " +
                    std::to_string(kMinGeometricAnnulusPieces) + " pieces");
    return;
  }
  result.recovery.kind = RecoveryKind::AnnulusPoints;
  result.recovery.approx_points = annulus_vertices(spec);
  if (spec.inner_radius == 0.0) {
    notes.push_back("inner radius is 0: inner vertices coincide at the origin");
  }
}

}  // namespace

PipelineResult annulus_gray_formulation(std::size_t d,
                                        const FormulationOptions& options) {
  return annulus_closed_form(d, EncodingKind::BinaryReflectedGray, options);
}

PipelineResult annulus_gray_formulation(const AnnulusSpec& spec,
                                        const FormulationOptions& options) {
  PipelineResult result = annulus_gray_formulation(spec.d, options);
  attach_annulus_recovery(result, spec);
  return result;
}

PipelineResult annulus_zigzag_formulation(std::size_t d,
                                          const FormulationOptions& options) {
  return annulus_closed_form(d, EncodingKind::ZigZag, options);
}

PipelineResult annulus_zigzag_formulation(const AnnulusSpec& spec,
                                          const FormulationOptions& options) {
  PipelineResult result = annulus_zigzag_formulation(spec.d, options);
  attach_annulus_recovery(result, spec);
  return result;
}

}  // namespace cdcform
