#include "cdcform/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cdcform/io.hpp"

namespace cdcform {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionDeficit:
    case ErrorCode::EncodingNotIdealizable:
    case ErrorCode::NoDirections:
    case ErrorCode::DegenerateSecant:
      return kExitPrecondition;
    case ErrorCode::HoleCheckTooLarge:
    case ErrorCode::TooLargeToEnumerate:
    case ErrorCode::TooManyDirections:
      return kExitResourceCap;
    default:
      return kExitInputError;
  }
}

namespace {

struct CommonFlags {
  std::string input;
  std::string encoding;
  std::string format;
  std::string check;
  std::string out_path;
  std::size_t max_enum = VerifyOptions{}.max_rays;
};

std::string read_source(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot read " + path);
  buf << file.rdbuf();
  return buf.str();
}

void write_sink(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::InvalidInput, "cannot write " + path);
  file << text;
}

void override_encoding(ProblemDocument& doc, const std::string& flag) {
  if (flag.empty()) return;
  const EncodingKind kind = parse_encoding_kind(flag);
  if (auto* p = std::get_if<CdcProblem>(&doc.body)) {
    if (kind == EncodingKind::Explicit && p->encoding.rows.empty()) {
      throw Error(ErrorCode::InvalidInput,
                  "--encoding explicit needs encoding.rows in the problem document");
    }
    if (kind != EncodingKind::Explicit) p->encoding.rows.clear();
    p->encoding.kind = kind;
    return;
  }
  if (kind == EncodingKind::Explicit) {
    throw Error(ErrorCode::InvalidInput, "--encoding explicit applies to cdc problems only");
  }
  if (auto* p = std::get_if<PwlProblem>(&doc.body)) p->encoding = kind;
  if (auto* p = std::get_if<AnnulusProblem>(&doc.body)) p->encoding = kind;
}

std::optional<VerificationSummary> run_check(CheckLevel level, const Cdc& cdc, const Encoding& e,
                                             const Formulation& f, std::size_t max_rays) {
  switch (level) {
    case CheckLevel::None:
      return std::nullopt;
    case CheckLevel::Validity: {
      VerificationSummary s;
      s.level = CheckLevel::Validity;
      s.passed = check_validity_only(cdc, e, f);
      return s;
    }
    case CheckLevel::Ideal:
      return summarize(check_ideal(cdc, e, f, VerifyOptions{max_rays}));
  }
  return std::nullopt;
}

int finish(ProblemDocument doc, const CommonFlags& flags, std::ostream& out,
           std::ostream& err) {
  override_encoding(doc, flags.encoding);
  const CheckLevel level = !flags.check.empty() ? parse_check_level(flags.check)
                                                : doc.options.check.value_or(CheckLevel::None);
  const OutputFormat format = !flags.format.empty()
                                  ? parse_output_format(flags.format)
                                  : doc.options.format.value_or(OutputFormat::Json);

  const PipelineResult result = run_pipeline(doc);
  const auto summary =
      run_check(level, result.cdc, result.encoding, result.formulation, flags.max_enum);

  const std::string text = format == OutputFormat::Lp
                               ? emit_lp_text(result.formulation)
                               : emit_structured(result.formulation, result.recovery, summary);
  write_sink(flags.out_path, text, out);
  for (const auto& note : result.formulation.provenance.notes) err << "note: " << note << "\n";
  if (summary) {
    err << describe(*summary, result.formulation.n_lambda) << "\n";
    if (!summary->passed) return kExitVerificationFailed;
  }
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonFlags& flags, bool input_required) {
  auto* input = cmd->add_option("input", flags.input, "problem document, - for stdin");
  if (input_required) input->required();
  cmd->add_option("--encoding", flags.encoding, "gray, zigzag or explicit")
      ->check(CLI::IsMember({"gray", "zigzag", "explicit"}));
  cmd->add_option("--format", flags.format, "json or lp")->check(CLI::IsMember({"json", "lp"}));
  cmd->add_option("--check", flags.check, "none, validity or ideal")
      ->check(CLI::IsMember({"none", "validity", "ideal"}));
  cmd->add_option("--out", flags.out_path, "output path (default stdout)");
  cmd->add_option("--max-enum", flags.max_enum, "ray cap for vertex enumeration")
      ->check(CLI::PositiveNumber);
}

void print_matrix(const IntMatrix& rows, std::ostream& out) {
  for (const auto& row : rows) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k];
    out << "\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Ideal MIP formulations for combinatorial disjunctive constraints", "cdcform"};
  app.require_subcommand(1);

  std::string enc_kind = "gray";
  std::optional<std::size_t> enc_s, enc_d;
  auto* encode = app.add_subcommand("encode", "print a generated encoding");
  encode->add_option("--kind", enc_kind, "gray or zigzag")
      ->check(CLI::IsMember({"gray", "zigzag"}));
  auto* s_opt = encode->add_option("--s", enc_s, "order s: print all 2^s codes");
  auto* d_opt = encode->add_option("--d", enc_d, "first d codes, with gate results");
  s_opt->excludes(d_opt);

  CommonFlags formulate_flags;
  auto* formulate = app.add_subcommand("formulate", "formulate a cdc problem document");
  add_common(formulate, formulate_flags, true);

  CommonFlags pwl_flags;
  auto* pwl = app.add_subcommand("pwl", "formulate a piecewise linear epigraph");
  add_common(pwl, pwl_flags, true);

  CommonFlags annulus_flags;
  std::optional<std::size_t> ann_d;
  std::optional<double> ann_inner, ann_outer;
  auto* annulus = app.add_subcommand("annulus", "formulate an annulus relaxation");
  add_common(annulus, annulus_flags, false);
  annulus->add_option("--d", ann_d, "number of pieces (power of two)");
  annulus->add_option("--inner", ann_inner, "inner radius L");
  annulus->add_option("--outer", ann_outer, "outer radius U");

  std::string ver_formulation, ver_problem, ver_check = "ideal";
  std::size_t ver_max = VerifyOptions{}.max_rays;
  auto* verify = app.add_subcommand("verify", "check a formulation document against a problem");
  verify->add_option("--formulation", ver_formulation, "formulation document")->required();
  verify->add_option("--problem", ver_problem, "problem document")->required();
  verify->add_option("--check", ver_check, "validity or ideal")
      ->check(CLI::IsMember({"validity", "ideal"}));
  verify->add_option("--max-enum", ver_max, "ray cap for vertex enumeration")
      ->check(CLI::PositiveNumber);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*encode) {
      const EncodingKind kind = parse_encoding_kind(enc_kind);
      if (enc_s) {
        print_matrix(kind == EncodingKind::ZigZag ? zigzag_matrix(*enc_s) : gray_matrix(*enc_s),
                     out);
        return kExitOk;
      }
      if (!enc_d) throw Error(ErrorCode::InvalidInput, "encode needs --s or --d");
      const Encoding e = make_encoding(*enc_d, kind);
      print_matrix(e.rows(), out);
      const GateResult gates = check_gates(e);
      out << "convex position: " << (gates.convex_position ? "yes" : "no") << "\n";
      out << "hole-free: " << (gates.hole_free ? "yes" : "no") << "\n";
      return gates.passed() ? kExitOk : kExitPrecondition;
    }
    if (*formulate) {
      return finish(parse_problem(read_source(formulate_flags.input, in)), formulate_flags, out,
                    err);
    }
    if (*pwl) {
      ProblemDocument doc = parse_problem(read_source(pwl_flags.input, in));
      if (doc.kind() != ProblemKind::Pwl) {
        throw Error(ErrorCode::InvalidInput, "kind: pwl expects a pwl document");
      }
      return finish(std::move(doc), pwl_flags, out, err);
    }
    if (*annulus) {
      AnnulusProblem problem{};
      ProblemOptions options;
      if (!annulus_flags.input.empty()) {
        ProblemDocument doc = parse_problem(read_source(annulus_flags.input, in));
        if (doc.kind() != ProblemKind::Annulus) {
          throw Error(ErrorCode::InvalidInput, "kind: annulus expects an annulus document");
        }
        problem = std::get<AnnulusProblem>(doc.body);
        options = doc.options;
      } else if (!ann_d) {
        throw Error(ErrorCode::InvalidInput, "annulus needs --d or a problem document");
      }
      if (ann_d) problem.spec.d = *ann_d;
      if (ann_inner) problem.spec.inner_radius = *ann_inner;
      if (ann_outer) problem.spec.outer_radius = *ann_outer;
      require_annulus_size(problem.spec.d);
      return finish(ProblemDocument{problem, options}, annulus_flags, out, err);
    }
    if (*verify) {
      const FormulationDocument fdoc = parse_structured(read_source(ver_formulation, in));
      const ProblemDocument pdoc = parse_problem(read_source(ver_problem, in));
      const auto [cdc, e] = problem_instance(pdoc);
      const Formulation& f = fdoc.formulation;
      if (f.n_lambda != cdc.ground_size() || f.r_z != e.dim()) {
        throw Error(ErrorCode::InvalidInput,
                    "formulation has " + std::to_string(f.n_lambda) + " lambda and " +
                        std::to_string(f.r_z) + " z variables; problem needs " +
                        std::to_string(cdc.ground_size()) + " and " + std::to_string(e.dim()));
      }
      const auto summary = run_check(parse_check_level(ver_check), cdc, e, f, ver_max);
      err << describe(*summary, f.n_lambda) << "\n";
      for (const auto& x : summary->extra) {
        err << "  extra vertex:";
        for (const auto& q : x) err << " " << to_string(q);
        err << "\n";
      }
      for (const auto& x : summary->missing) {
        err << "  missing vertex:";
        for (const auto& q : x) err << " " << to_string(q);
        err << "\n";
      }
      return summary->passed ? kExitOk : kExitVerificationFailed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace cdcform
