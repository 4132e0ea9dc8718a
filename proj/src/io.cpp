#include "cdcform/io.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <json.hpp>

#include "cdcform/error.hpp"

namespace cdcform {

using json = nlohmann::ordered_json;

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Cdc: return "cdc";
    case ProblemKind::Pwl: return "pwl";
    case ProblemKind::Annulus: return "annulus";
  }
  return "unknown";
}

std::string_view to_string(CheckLevel level) {
  switch (level) {
    case CheckLevel::None: return "none";
    case CheckLevel::Validity: return "validity";
    case CheckLevel::Ideal: return "ideal";
  }
  return "unknown";
}

CheckLevel parse_check_level(std::string_view text) {
  if (text == "none") return CheckLevel::None;
  if (text == "validity") return CheckLevel::Validity;
  if (text == "ideal") return CheckLevel::Ideal;
  throw Error(ErrorCode::InvalidInput, "unknown check level \"" + std::string(text) + "\"");
}

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::Json;
  if (text == "lp") return OutputFormat::Lp;
  throw Error(ErrorCode::InvalidInput, "unknown output format \"" + std::string(text) + "\"");
}

std::string lambda_name(std::size_t v) { return "lambda_" + std::to_string(v + 1); }
std::string z_name(std::size_t k) { return "z_" + std::to_string(k + 1); }

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& message) {
  throw Error(ErrorCode::InvalidInput, field + ": " + message);
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, what + " is not valid JSON: " + e.what());
  }
}

const json& require(const json& obj, const std::string& key, const std::string& prefix = "") {
  if (!obj.is_object() || !obj.contains(key)) field_error(prefix + key, "missing");
  return obj.at(key);
}

std::string require_string(const json& value, const std::string& field) {
  if (!value.is_string()) field_error(field, "expected a string");
  return value.get<std::string>();
}

std::int64_t require_integer(const json& value, const std::string& field) {
  if (!value.is_number_integer()) field_error(field, "expected an integer");
  return value.get<std::int64_t>();
}

double require_number(const json& value, const std::string& field) {
  if (!value.is_number()) field_error(field, "expected a number");
  return value.get<double>();
}

Rational rational_field(const json& value, const std::string& field) {
  if (value.is_number_integer()) return Rational(static_cast<long>(value.get<std::int64_t>()));
  if (!value.is_string()) field_error(field, "expected a rational string such as \"3/2\"");
  try {
    return parse_rational(value.get<std::string>());
  } catch (const Error& e) {
    field_error(field, e.detail());
  }
}

std::vector<Rational> rational_list(const json& value, const std::string& field) {
  if (!value.is_array()) field_error(field, "expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(rational_field(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

IntMatrix integer_rows(const json& value, const std::string& field) {
  if (!value.is_array()) field_error(field, "expected an array of rows");
  IntMatrix rows;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!value[i].is_array()) field_error(f, "expected an array");
    IntVector row;
    for (std::size_t j = 0; j < value[i].size(); ++j) {
      row.push_back(require_integer(value[i][j], f + "[" + std::to_string(j) + "]"));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

EncodingSpec parse_encoding_spec(const json& doc) {
  EncodingSpec spec;
  if (!doc.contains("encoding")) return spec;
  const json& enc = doc.at("encoding");
  try {
    if (enc.is_string()) {
      spec.kind = parse_encoding_kind(enc.get<std::string>());
    } else if (enc.is_object()) {
      spec.kind = parse_encoding_kind(require_string(require(enc, "kind", "encoding."),
                                                     "encoding.kind"));
      if (enc.contains("rows")) spec.rows = integer_rows(enc.at("rows"), "encoding.rows");
    } else {
      field_error("encoding", "expected a kind string or an object");
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::InvalidInput || e.detail().starts_with("encoding")) throw;
    field_error("encoding", e.detail());
  }
  if (spec.kind == EncodingKind::Explicit && spec.rows.empty()) {
    field_error("encoding.rows", "explicit encoding needs rows");
  }
  if (spec.kind != EncodingKind::Explicit && !spec.rows.empty()) {
    field_error("encoding.rows", "rows are only accepted for explicit encodings");
  }
  return spec;
}

EncodingKind generated_kind(const json& doc) {
  const EncodingSpec spec = parse_encoding_spec(doc);
  if (spec.kind == EncodingKind::Explicit) {
    field_error("encoding", "this problem kind takes gray or zigzag");
  }
  return spec.kind;
}

Cdc parse_cdc_body(const json& doc) {
  const json& alts = require(doc, "alternatives");
  if (!alts.is_array()) field_error("alternatives", "expected an array of arrays");
  std::vector<std::vector<std::size_t>> alternatives;
  std::size_t max_element = 0;
  for (std::size_t i = 0; i < alts.size(); ++i) {
    const std::string f = "alternatives[" + std::to_string(i) + "]";
    if (!alts[i].is_array()) field_error(f, "expected an array");
    std::vector<std::size_t> alt;
    for (std::size_t j = 0; j < alts[i].size(); ++j) {
      const auto v = require_integer(alts[i][j], f + "[" + std::to_string(j) + "]");
      if (v < 1) field_error(f, "ground elements are numbered from 1");
      alt.push_back(static_cast<std::size_t>(v - 1));
      max_element = std::max(max_element, static_cast<std::size_t>(v));
    }
    alternatives.push_back(std::move(alt));
  }
  std::size_t n = max_element;
  if (doc.contains("n")) {
    const auto given = require_integer(doc.at("n"), "n");
    if (given < 1) field_error("n", "must be positive");
    n = static_cast<std::size_t>(given);
  }
  try {
    return Cdc(n, std::move(alternatives));
  } catch (const Error& e) {
    field_error("alternatives", e.detail());
  }
}

}  // namespace

ProblemDocument parse_problem(std::string_view text) {
  const json doc = parse_json(text, "problem document");
  if (!doc.is_object()) field_error("document", "expected a JSON object");
  const std::string kind = require_string(require(doc, "kind"), "kind");

  ProblemOptions options;
  if (doc.contains("options")) {
    const json& opt = doc.at("options");
    if (!opt.is_object()) field_error("options", "expected an object");
    try {
      if (opt.contains("check")) {
        options.check = parse_check_level(require_string(opt.at("check"), "options.check"));
      }
      if (opt.contains("format")) {
        options.format =
            parse_output_format(require_string(opt.at("format"), "options.format"));
      }
    } catch (const Error& e) {
      if (e.detail().starts_with("options.")) throw;
      field_error("options", e.detail());
    }
  }

  if (kind == "cdc") {
    Cdc cdc = parse_cdc_body(doc);
    EncodingSpec enc = parse_encoding_spec(doc);
    return {CdcProblem{std::move(cdc), std::move(enc)}, options};
  }
  if (kind == "pwl") {
    auto t = rational_list(require(doc, "breakpoints"), "breakpoints");
    auto a = rational_list(require(doc, "slopes"), "slopes");
    auto b = rational_list(require(doc, "intercepts"), "intercepts");
    const EncodingKind enc = generated_kind(doc);
    return {PwlProblem{PwlFunction(std::move(t), std::move(a), std::move(b)), enc}, options};
  }
  if (kind == "annulus") {
    AnnulusSpec spec;
    spec.inner_radius = require_number(require(doc, "inner_radius"), "inner_radius");
    spec.outer_radius = require_number(require(doc, "outer_radius"), "outer_radius");
    const auto d = require_integer(require(doc, "d"), "d");
    if (d < 2) field_error("d", "need at least 2 pieces");
    spec.d = static_cast<std::size_t>(d);
    if (!is_power_of_two(spec.d)) {
      throw Error(ErrorCode::NotPowerOfTwo, "d: " + std::to_string(d) + " is not a power of two");
    }
    if (!(spec.inner_radius >= 0.0)) field_error("inner_radius", "must be nonnegative");
    if (!(spec.outer_radius >= spec.inner_radius)) {
      field_error("outer_radius", "must be at least inner_radius");
    }
    return {AnnulusProblem{spec, generated_kind(doc)}, options};
  }
  field_error("kind", "expected cdc, pwl or annulus, got \"" + kind + "\"");
}

std::pair<Cdc, Encoding> problem_instance(const ProblemDocument& doc) {
  switch (doc.kind()) {
    case ProblemKind::Cdc: {
      const auto& p = std::get<CdcProblem>(doc.body);
      Encoding e = p.encoding.kind == EncodingKind::Explicit
                       ? make_explicit_encoding(p.encoding.rows)
                       : make_encoding(p.cdc.alternative_count(), p.encoding.kind);
      return {p.cdc, std::move(e)};
    }
    case ProblemKind::Pwl: {
      const auto& p = std::get<PwlProblem>(doc.body);
      return {pwl_ground_set(p.function).cdc(),
              make_encoding(p.function.piece_count(), p.encoding)};
    }
    case ProblemKind::Annulus: {
      const auto& p = std::get<AnnulusProblem>(doc.body);
      return {annulus_cdc(p.spec.d), make_encoding(p.spec.d, p.encoding)};
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown problem kind");
}

PipelineResult run_pipeline(const ProblemDocument& doc, const FormulationOptions& options) {
  switch (doc.kind()) {
    case ProblemKind::Cdc: {
      auto [cdc, e] = problem_instance(doc);
      Formulation f = theorem1_formulation(cdc, e, options);
      return {std::move(cdc), std::move(e), std::move(f), {}};
    }
    case ProblemKind::Pwl: {
      const auto& p = std::get<PwlProblem>(doc.body);
      return pwl_formulation(p.function, p.encoding, options);
    }
    case ProblemKind::Annulus: {
      const auto& p = std::get<AnnulusProblem>(doc.body);
      return p.encoding == EncodingKind::ZigZag ? annulus_zigzag_formulation(p.spec, options)
                                                : annulus_gray_formulation(p.spec, options);
    }
  }
  throw Error(ErrorCode::InvalidInput, "unknown problem kind");
}

VerificationSummary summarize(const VerificationReport& report) {
  return {CheckLevel::Ideal, report.passed,  report.expected,
          report.found,      report.missing, report.extra};
}

std::string describe(const VerificationSummary& s, std::size_t n_lambda) {
  std::ostringstream os;
  os << to_string(s.level) << " check " << (s.passed ? "passed" : "FAILED");
  if (s.level == CheckLevel::Ideal) {
    VerificationReport r;
    r.extra = s.extra;
    os << ": expected " << s.expected << " vertices, found " << s.found << " ("
       << s.missing.size() << " missing, " << s.extra.size() << " extra, "
       << r.fractional_extra_count(n_lambda) << " with fractional z)";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Structured formulation documents

namespace {

json rational_array(std::span<const Rational> v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

json integer_array(std::span<const Integer> v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(x.get_str());
  return a;
}

RationalVector rational_vector(const json& value, const std::string& field,
                               std::size_t expected) {
  RationalVector v = rational_list(value, field);
  if (v.size() != expected) {
    field_error(field, "expected " + std::to_string(expected) + " entries, got " +
                           std::to_string(v.size()));
  }
  return v;
}

std::string_view to_string(RecoveryKind kind) {
  switch (kind) {
    case RecoveryKind::None: return "none";
    case RecoveryKind::PwlEpigraph: return "pwl_epigraph";
    case RecoveryKind::AnnulusPoints: return "annulus";
  }
  return "none";
}

}  // namespace

std::string emit_structured(const Formulation& f, const RecoveryMap& recovery,
                            const std::optional<VerificationSummary>& verification) {
  json doc;
  doc["format"] = "cdcform.formulation";
  doc["version"] = 1;

  json prov;
  prov["source"] = f.provenance.source;
  prov["encoding"] = std::string(to_string(f.provenance.encoding));
  prov["pipeline"] = std::string(to_string(f.provenance.pipeline));
  prov["gamma"] = f.gamma();
  if (f.provenance.kappa) prov["kappa"] = *f.provenance.kappa;
  prov["notes"] = f.provenance.notes;
  doc["provenance"] = prov;

  json vars = json::array();
  for (std::size_t v = 0; v < f.n_lambda; ++v) {
    vars.push_back({{"name", lambda_name(v)}, {"type", "continuous"}, {"lower", "0"}});
  }
  for (std::size_t k = 0; k < f.r_z; ++k) {
    vars.push_back({{"name", z_name(k)},
                    {"type", "integer"},
                    {"lower", std::to_string(f.z_bounds[k].lower)},
                    {"upper", std::to_string(f.z_bounds[k].upper)}});
  }
  doc["variables"] = vars;

  json eqs = json::array();
  for (const auto& eq : f.equalities) {
    eqs.push_back({{"coefficients", rational_array(eq.coeffs)}, {"rhs", to_string(eq.rhs)}});
  }
  doc["equalities"] = eqs;

  json rows = json::array();
  for (const auto& g : f.general_rows) {
    rows.push_back({{"normal", integer_array(g.normal)},
                    {"lower", rational_array(g.lower)},
                    {"upper", rational_array(g.upper)}});
  }
  doc["general_rows"] = rows;

  if (!recovery.empty()) {
    json rec;
    rec["kind"] = std::string(to_string(recovery.kind));
    json pts = json::array();
    if (recovery.kind == RecoveryKind::PwlEpigraph) {
      for (const auto& p : recovery.exact_points) pts.push_back({to_string(p[0]), to_string(p[1])});
    } else {
      for (const auto& p : recovery.approx_points) pts.push_back({p[0], p[1]});
    }
    rec["points"] = pts;
    doc["recovery"] = rec;
  }

  if (verification) {
    json ver;
    ver["level"] = std::string(to_string(verification->level));
    ver["passed"] = verification->passed;
    if (verification->level == CheckLevel::Ideal) {
      ver["expected"] = verification->expected;
      ver["found"] = verification->found;
      json missing = json::array();
      for (const auto& x : verification->missing) missing.push_back(rational_array(x));
      json extra = json::array();
      for (const auto& x : verification->extra) extra.push_back(rational_array(x));
      ver["missing"] = missing;
      ver["extra"] = extra;
    }
    doc["verification"] = ver;
  }
  return doc.dump(2) + "\n";
}

FormulationDocument parse_structured(std::string_view text) {
  const json doc = parse_json(text, "formulation document");
  if (!doc.is_object()) field_error("document", "expected a JSON object");
  if (require_string(require(doc, "format"), "format") != "cdcform.formulation") {
    field_error("format", "not a cdcform formulation document");
  }
  FormulationDocument out;
  Formulation& f = out.formulation;

  const json& prov = require(doc, "provenance");
  f.provenance.source = require_string(require(prov, "source", "provenance."), "provenance.source");
  try {
    f.provenance.encoding = parse_encoding_kind(
        require_string(require(prov, "encoding", "provenance."), "provenance.encoding"));
    f.provenance.pipeline = parse_pipeline(
        require_string(require(prov, "pipeline", "provenance."), "provenance.pipeline"));
  } catch (const Error& e) {
    field_error("provenance", e.detail());
  }
  if (prov.contains("kappa")) {
    f.provenance.kappa = static_cast<std::size_t>(require_integer(prov.at("kappa"), "provenance.kappa"));
  }
  if (prov.contains("notes")) {
    for (const auto& note : prov.at("notes")) {
      f.provenance.notes.push_back(require_string(note, "provenance.notes"));
    }
  }

  const json& vars = require(doc, "variables");
  if (!vars.is_array()) field_error("variables", "expected an array");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::string field = "variables[" + std::to_string(i) + "]";
    const std::string name = require_string(require(vars[i], "name", field + "."), field + ".name");
    const std::string type = require_string(require(vars[i], "type", field + "."), field + ".type");
    if (type == "continuous") {
      if (f.r_z > 0 || name != lambda_name(f.n_lambda)) {
        field_error(field, "expected " + lambda_name(f.n_lambda));
      }
      ++f.n_lambda;
    } else if (type == "integer") {
      if (name != z_name(f.r_z)) field_error(field, "expected " + z_name(f.r_z));
      const Rational lo = rational_field(require(vars[i], "lower", field + "."), field + ".lower");
      const Rational hi = rational_field(require(vars[i], "upper", field + "."), field + ".upper");
      if (lo.get_den() != 1 || hi.get_den() != 1 || !lo.get_num().fits_slong_p() ||
          !hi.get_num().fits_slong_p()) {
        field_error(field, "integer bounds expected");
      }
      f.z_bounds.push_back({lo.get_num().get_si(), hi.get_num().get_si()});
      ++f.r_z;
    } else {
      field_error(field + ".type", "expected continuous or integer");
    }
  }

  const json& eqs = require(doc, "equalities");
  if (!eqs.is_array()) field_error("equalities", "expected an array");
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    const std::string field = "equalities[" + std::to_string(i) + "]";
    LinearEquality eq;
    eq.coeffs = rational_vector(require(eqs[i], "coefficients", field + "."),
                                field + ".coefficients", f.variable_count());
    eq.rhs = rational_field(require(eqs[i], "rhs", field + "."), field + ".rhs");
    f.equalities.push_back(std::move(eq));
  }

  const json& rows = require(doc, "general_rows");
  if (!rows.is_array()) field_error("general_rows", "expected an array");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string field = "general_rows[" + std::to_string(i) + "]";
    PairedRow row;
    const RationalVector normal =
        rational_vector(require(rows[i], "normal", field + "."), field + ".normal", f.r_z);
    for (const auto& x : normal) {
      if (x.get_den() != 1) field_error(field + ".normal", "expected integers");
      row.normal.push_back(x.get_num());
    }
    row.lower = rational_vector(require(rows[i], "lower", field + "."), field + ".lower", f.n_lambda);
    row.upper = rational_vector(require(rows[i], "upper", field + "."), field + ".upper", f.n_lambda);
    f.general_rows.push_back(std::move(row));
  }
  if (prov.contains("gamma") &&
      require_integer(prov.at("gamma"), "provenance.gamma") != static_cast<std::int64_t>(f.gamma())) {
    field_error("provenance.gamma", "does not match the number of general rows");
  }

  if (doc.contains("recovery")) {
    const json& rec = doc.at("recovery");
    const std::string kind = require_string(require(rec, "kind", "recovery."), "recovery.kind");
    const json& pts = require(rec, "points", "recovery.");
    if (!pts.is_array()) field_error("recovery.points", "expected an array");
    if (kind == "pwl_epigraph") {
      out.recovery.kind = RecoveryKind::PwlEpigraph;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        auto p = rational_list(pts[i], "recovery.points[" + std::to_string(i) + "]");
        if (p.size() != 2) field_error("recovery.points", "expected (x, y) pairs");
        out.recovery.exact_points.push_back({p[0], p[1]});
      }
    } else if (kind == "annulus") {
      out.recovery.kind = RecoveryKind::AnnulusPoints;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string field = "recovery.points[" + std::to_string(i) + "]";
        if (!pts[i].is_array() || pts[i].size() != 2) field_error(field, "expected (x, y)");
        out.recovery.approx_points.push_back(
            {require_number(pts[i][0], field), require_number(pts[i][1], field)});
      }
    } else {
      field_error("recovery.kind", "unknown kind \"" + kind + "\"");
    }
    if (out.recovery.size() != f.n_lambda) {
      field_error("recovery.points", "expected one point per lambda variable");
    }
  }

  if (doc.contains("verification")) {
    const json& ver = doc.at("verification");
    VerificationSummary s;
    try {
      s.level = parse_check_level(require_string(require(ver, "level", "verification."),
                                                 "verification.level"));
    } catch (const Error& e) {
      field_error("verification.level", e.detail());
    }
    const json& passed = require(ver, "passed", "verification.");
    if (!passed.is_boolean()) field_error("verification.passed", "expected a boolean");
    s.passed = passed.get<bool>();
    if (s.level == CheckLevel::Ideal) {
      s.expected = static_cast<std::size_t>(require_integer(require(ver, "expected", "verification."), "verification.expected"));
      s.found = static_cast<std::size_t>(require_integer(require(ver, "found", "verification."), "verification.found"));
      for (const auto& x : require(ver, "missing", "verification.")) {
        s.missing.push_back(rational_vector(x, "verification.missing", f.variable_count()));
      }
      for (const auto& x : require(ver, "extra", "verification.")) {
        s.extra.push_back(rational_vector(x, "verification.extra", f.variable_count()));
      }
    }
    out.verification = std::move(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// LP text

namespace {

LpModel::Row make_row(std::string name, const std::vector<std::string>& names,
                      const RationalVector& coeffs, std::string sense, const Rational& rhs) {
  auto [ints, rhs_int] = scale_row_to_integers(coeffs, {&rhs, 1});
  LpModel::Row row{std::move(name), {}, std::move(sense), rhs_int[0]};
  for (std::size_t j = 0; j < ints.size(); ++j) {
    if (ints[j] != 0) row.coeffs[names[j]] = ints[j];
  }
  return row;
}

}  // namespace

LpModel lp_model(const Formulation& f) {
  const std::size_t n = f.n_lambda;
  std::vector<std::string> names;
  for (std::size_t v = 0; v < n; ++v) names.push_back(lambda_name(v));
  for (std::size_t k = 0; k < f.r_z; ++k) names.push_back(z_name(k));

  LpModel model;
  for (std::size_t i = 0; i < f.equalities.size(); ++i) {
    const std::string name = i == 0 ? "simplex" : "aff_" + std::to_string(i);
    model.rows.push_back(make_row(name, names, f.equalities[i].coeffs, "=", f.equalities[i].rhs));
  }
  for (std::size_t g = 0; g < f.general_rows.size(); ++g) {
    const auto& row = f.general_rows[g];
    RationalVector lo(f.variable_count()), hi(f.variable_count());
    for (std::size_t v = 0; v < n; ++v) {
      lo[v] = row.lower[v];
      hi[v] = -row.upper[v];
    }
    for (std::size_t k = 0; k < f.r_z; ++k) {
      lo[n + k] = -Rational(row.normal[k]);
      hi[n + k] = Rational(row.normal[k]);
    }
    const std::string base = "g" + std::to_string(g + 1);
    model.rows.push_back(make_row(base + "_lo", names, lo, "<=", Rational(0)));
    model.rows.push_back(make_row(base + "_hi", names, hi, "<=", Rational(0)));
  }
  for (std::size_t v = 0; v < n; ++v) {
    model.bounds[lambda_name(v)] = {Integer(0), std::nullopt};
  }
  for (std::size_t k = 0; k < f.r_z; ++k) {
    model.bounds[z_name(k)] = {Integer(static_cast<long>(f.z_bounds[k].lower)),
                               Integer(static_cast<long>(f.z_bounds[k].upper))};
    model.generals.insert(z_name(k));
  }
  return model;
}

namespace {

// Natural order: lambda_* before z_*, then by index.
std::vector<std::pair<std::string, Integer>> ordered_terms(
    const std::map<std::string, Integer>& coeffs, bool z_first) {
  std::vector<std::pair<std::string, Integer>> terms(coeffs.begin(), coeffs.end());
  auto key = [z_first](const std::string& name) {
    const bool is_z = name[0] == 'z';
    const auto idx = std::stoul(name.substr(name.find('_') + 1));
    return std::pair<int, unsigned long>{is_z == z_first ? 0 : 1, idx};
  };
  std::sort(terms.begin(), terms.end(),
            [&](const auto& a, const auto& b) { return key(a.first) < key(b.first); });
  return terms;
}

void write_row(std::ostream& os, const LpModel::Row& row, bool z_first) {
  constexpr std::size_t kWrap = 200;
  std::string line = " " + row.name + ":";
  bool first = true;
  auto flush_if_long = [&] {
    if (line.size() > kWrap) {
      os << line << "\n";
      line = "   ";
    }
  };
  for (const auto& [name, c] : ordered_terms(row.coeffs, z_first)) {
    const bool negative = c < 0;
    const Integer mag = negative ? Integer(-c) : c;
    std::string term = first ? (negative ? " - " : " ") : (negative ? " - " : " + ");
    if (mag != 1) term += mag.get_str() + " ";
    term += name;
    line += term;
    first = false;
    flush_if_long();
  }
  if (first) line += " 0 lambda_1";
  line += " " + row.sense + " " + row.rhs.get_str();
  os << line << "\n";
}

}  // namespace

std::string emit_lp_text(const Formulation& f) {
  const LpModel model = lp_model(f);
  std::ostringstream os;
  os << "\\ cdcform: source " << f.provenance.source << ", encoding "
     << to_string(f.provenance.encoding) << ", " << to_string(f.provenance.pipeline)
     << " path, " << f.gamma() << " paired rows\n";
  os << "Minimize\n obj: 0\nSubject To\n";
  for (const auto& row : model.rows) {
    write_row(os, row, row.name.ends_with("_hi"));
  }
  os << "Bounds\n";
  for (std::size_t v = 0; v < f.n_lambda; ++v) os << " " << lambda_name(v) << " >= 0\n";
  for (std::size_t k = 0; k < f.r_z; ++k) {
    os << " " << f.z_bounds[k].lower << " <= " << z_name(k) << " <= " << f.z_bounds[k].upper
       << "\n";
  }
  if (f.r_z > 0) {
    os << "Generals\n";
    for (std::size_t k = 0; k < f.r_z; ++k) os << " " << z_name(k) << "\n";
  }
  os << "End\n";
  return os.str();
}

namespace {

enum class Section { None, Objective, Constraints, Bounds, Generals, End };

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<Section> section_keyword(const std::string& line) {
  const std::string l = lower(line);
  if (l == "minimize" || l == "maximize" || l == "min" || l == "max") return Section::Objective;
  if (l == "subject to" || l == "st" || l == "s.t.") return Section::Constraints;
  if (l == "bounds") return Section::Bounds;
  if (l == "generals" || l == "general" || l == "gen") return Section::Generals;
  if (l == "end") return Section::End;
  return std::nullopt;
}

bool is_number(const std::string& t) {
  return !t.empty() && std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_name(const std::string& t) {
  return !t.empty() && (std::isalpha(static_cast<unsigned char>(t[0])) || t[0] == '_') &&
         std::all_of(t.begin(), t.end(), [](char c) {
           return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
         });
}

// Splits on whitespace and around the operators + - <= >= = :.
std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) tokens.push_back(std::move(cur));
    cur.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else if (c == '+' || c == '-' || c == ':') {
      flush();
      tokens.emplace_back(1, c);
    } else if (c == '<' || c == '>' || c == '=') {
      flush();
      std::string op(1, c);
      if (i + 1 < text.size() && text[i + 1] == '=') {
        op.push_back('=');
        ++i;
      }
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      tokens.push_back(op);
    } else {
      cur.push_back(c);
    }
  }
  flush();
  return tokens;
}

[[noreturn]] void lp_error(const std::string& message) {
  throw Error(ErrorCode::InvalidInput, "LP text: " + message);
}

// Parses  [+|-] [coef] name  terms up to a relational operator.
std::size_t parse_terms(const std::vector<std::string>& tok, std::size_t i,
                        std::map<std::string, Integer>& coeffs) {
  bool any = false;
  while (i < tok.size() && tok[i] != "<=" && tok[i] != ">=" && tok[i] != "=") {
    Integer sign = 1;
    if (tok[i] == "+" || tok[i] == "-") {
      if (tok[i] == "-") sign = -1;
      ++i;
    } else if (any) {
      lp_error("expected + or - before \"" + tok[i] + "\"");
    }
    Integer coef = 1;
    if (i < tok.size() && is_number(tok[i])) coef = Integer(tok[i++], 10);
    if (i >= tok.size() || !is_name(tok[i])) lp_error("expected a variable name");
    coeffs[tok[i++]] += sign * coef;
    any = true;
  }
  if (!any) lp_error("empty row");
  return i;
}

Integer parse_signed(const std::vector<std::string>& tok, std::size_t& i) {
  Integer sign = 1;
  if (i < tok.size() && (tok[i] == "-" || tok[i] == "+")) {
    if (tok[i] == "-") sign = -1;
    ++i;
  }
  if (i >= tok.size() || !is_number(tok[i])) lp_error("expected an integer");
  return sign * Integer(tok[i++], 10);
}

}  // namespace

LpModel parse_lp_text(std::string_view text) {
  LpModel model;
  std::istringstream is{std::string(text)};
  std::string raw;
  Section section = Section::None;
  std::string constraint_text;
  bool saw_end = false;

  auto finish_constraints = [&] {
    const auto tok = tokenize(constraint_text);
    std::size_t i = 0;
    while (i < tok.size()) {
      if (i + 1 >= tok.size() || tok[i + 1] != ":" || !is_name(tok[i])) {
        lp_error("constraint without a name near \"" + tok[i] + "\"");
      }
      LpModel::Row row;
      row.name = tok[i];
      i = parse_terms(tok, i + 2, row.coeffs);
      row.sense = tok[i++];
      row.rhs = parse_signed(tok, i);
      for (auto it = row.coeffs.begin(); it != row.coeffs.end();) {
        it = it->second == 0 ? row.coeffs.erase(it) : std::next(it);
      }
      model.rows.push_back(std::move(row));
    }
    constraint_text.clear();
  };

  while (std::getline(is, raw)) {
    if (const auto bs = raw.find('\\'); bs != std::string::npos) raw.erase(bs);
    const auto b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const std::string line = raw.substr(b, raw.find_last_not_of(" \t\r") - b + 1);
    if (auto next = section_keyword(line)) {
      if (section == Section::Constraints) finish_constraints();
      section = *next;
      if (section == Section::End) saw_end = true;
      continue;
    }
    switch (section) {
      case Section::None:
        lp_error("text before the objective section");
      case Section::End:
        lp_error("text after End");
      case Section::Objective:
        break;  // the objective is the constant 0; its content is not kept
      case Section::Constraints:
        constraint_text += " " + line;
        break;
      case Section::Bounds: {
        const auto tok = tokenize(line);
        std::size_t i = 0;
        if (tok.size() >= 3 && is_name(tok[0]) && tok[1] == ">=") {
          i = 2;
          model.bounds[tok[0]].lower = parse_signed(tok, i);
        } else if (tok.size() >= 3 && is_name(tok[0]) && tok[1] == "<=") {
          i = 2;
          model.bounds[tok[0]].upper = parse_signed(tok, i);
        } else {
          const Integer lo = parse_signed(tok, i);
          if (i + 3 >= tok.size() + 0 && i + 3 > tok.size()) lp_error("malformed bound");
          if (tok[i] != "<=" || !is_name(tok[i + 1]) || tok[i + 2] != "<=") {
            lp_error("malformed bound \"" + line + "\"");
          }
          const std::string name = tok[i + 1];
          i += 3;
          model.bounds[name].lower = lo;
          model.bounds[name].upper = parse_signed(tok, i);
        }
        if (i != tok.size()) lp_error("trailing tokens in bound \"" + line + "\"");
        break;
      }
      case Section::Generals: {
        for (const auto& t : tokenize(line)) {
          if (!is_name(t)) lp_error("bad general variable \"" + t + "\"");
          model.generals.insert(t);
        }
        break;
      }
    }
  }
  if (section == Section::Constraints) finish_constraints();
  if (!saw_end) lp_error("missing End");
  return model;
}

}  // namespace cdcform
