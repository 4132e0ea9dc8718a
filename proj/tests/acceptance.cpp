// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "cdcform/applications.hpp"
#include "cdcform/cli.hpp"
#include "cdcform/error.hpp"
#include "cdcform/verify.hpp"
#include "oracles.hpp"

using namespace cdcform;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& title, double limit_s,
               const std::function<void(Outcome&)>& body) {
  Outcome out;
  const auto t0 = Clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("threw ") + e.what();
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (out.ok && limit_s > 0 && secs >= limit_s) {
    out.ok = false;
    out.detail = "over time limit";
  }
  if (!out.ok) ++failures;
  std::printf("%s criterion %d: %s [%.3f s", out.ok ? "PASS" : "FAIL", id, title.c_str(), secs);
  if (limit_s > 0) std::printf(", limit %g s", limit_s);
  std::printf("]%s%s\n", out.ok ? "" : " -- ", out.detail.c_str());
  std::fflush(stdout);
}

std::string render(const IntMatrix& m) {
  std::ostringstream s;
  for (const auto& row : m) {
    for (std::size_t j = 0; j < row.size(); ++j) s << (j ? " " : "") << row[j];
    s << '\n';
  }
  return s.str();
}

Cdc sos2(std::size_t d) {
  std::vector<std::vector<std::size_t>> alts;
  for (std::size_t i = 0; i < d; ++i) alts.push_back({i, i + 1});
  return Cdc(d + 1, alts);
}

Formulation canonical(Formulation f) {
  sort_general_rows(f);
  return f;
}

bool has_fractional_z(const RationalVector& x, std::size_t n_lambda) {
  return std::any_of(x.begin() + static_cast<std::ptrdiff_t>(n_lambda), x.end(),
                     [](const Rational& q) { return q.get_den() != 1; });
}

bool ideal_with_counts(const PipelineResult& r, std::size_t vertices, Outcome& out,
                       const std::string& label) {
  const auto rep = check_ideal(r.cdc, r.encoding, r.formulation);
  out.require(rep.passed, label + ": check_ideal failed");
  out.require(rep.expected == vertices && rep.found == vertices,
              label + ": vertex counts " + std::to_string(rep.expected) + "/" +
                  std::to_string(rep.found));
  return rep.passed;
}

PwlFunction continuous_through(const std::vector<long>& values) {
  std::vector<Rational> t, a, b;
  for (std::size_t i = 0; i < values.size(); ++i) t.emplace_back(static_cast<long>(i));
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    const Rational slope = values[i + 1] - values[i];
    a.push_back(slope);
    b.push_back(Rational(values[i]) - slope * static_cast<long>(i));
  }
  return PwlFunction(t, a, b);
}

Cdc random_connected_cdc(std::mt19937& rng, std::size_t n, std::size_t d) {
  std::bernoulli_distribution coin(0.4);
  while (true) {
    std::vector<std::vector<std::size_t>> alts(d);
    for (auto& a : alts) {
      for (std::size_t v = 0; v < n; ++v) {
        if (coin(rng)) a.push_back(v);
      }
    }
    std::vector<bool> covered(n, false);
    bool ok = true;
    for (const auto& a : alts) {
      ok = ok && !a.empty();
      for (auto v : a) covered[v] = true;
    }
    ok = ok && std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
    if (!ok) continue;
    try {
      Cdc c(n, alts);
      if (is_weakly_connected(intersection_digraph(c))) return c;
    } catch (const Error&) {
    }
  }
}

// Directions and code differences, ranked independently of the library.
bool oracle_dimension_condition(const DifferenceDirections& c, const Encoding& e) {
  oracle::Mat dirs, diffs;
  for (const auto& d : c.deduped) dirs.push_back(to_rational(d));
  const auto& rows = e.rows();
  for (const auto& h : rows) {
    oracle::Vec v;
    for (std::size_t k = 0; k < h.size(); ++k) v.emplace_back(h[k] - rows[0][k]);
    diffs.push_back(v);
  }
  return oracle::rank_of(dirs, c.dim) == oracle::rank_of(diffs, c.dim);
}

}  // namespace

int main() {
  criterion(1, "gray_matrix(3) and zigzag_matrix(3) fixtures", 0.001, [](Outcome& out) {
    const std::string gray = render(gray_matrix(3));
    const std::string zz = render(zigzag_matrix(3));
    out.require(gray == "0 0 0\n1 0 0\n1 1 0\n0 1 0\n0 1 1\n1 1 1\n1 0 1\n0 0 1\n", "gray fixture");
    out.require(zz == "0 0 0\n1 0 0\n1 1 0\n2 1 0\n2 1 1\n3 1 1\n3 2 1\n4 2 1\n", "zigzag fixture");
  });

  criterion(2, "gray and zigzag step invariants for s <= 4", 1.0, [](Outcome& out) {
    for (std::size_t s = 1; s <= 4; ++s) {
      const IntMatrix k = gray_matrix(s);
      const IntMatrix c = zigzag_matrix(s);
      const std::size_t d = std::size_t{1} << s;
      out.require(k.size() == d && c.size() == d, "row count");
      std::set<std::vector<std::int64_t>> distinct(k.begin(), k.end());
      out.require(distinct.size() == d, "gray codes distinct");
      for (std::size_t i = 0; i < d; ++i) {
        const auto& a = k[i];
        const auto& b = k[(i + 1) % d];
        std::size_t changed = 0;
        for (std::size_t j = 0; j < s; ++j) {
          out.require(a[j] == 0 || a[j] == 1, "gray entries binary");
          const auto step = b[j] - a[j];
          out.require(step >= -1 && step <= 1, "gray step size");
          changed += step != 0;
        }
        out.require(changed == 1, "gray step changes one coordinate");
      }
      for (std::size_t j = 0; j < s; ++j) {
        out.require(k[d - 1][j] - k[0][j] == (j == s - 1 ? 1 : 0), "gray closure is the unit vector on the last coordinate");
      }
      for (std::size_t i = 0; i + 1 < d; ++i) {
        std::int64_t total = 0;
        bool unit = true;
        for (std::size_t j = 0; j < s; ++j) {
          const auto step = c[i + 1][j] - c[i][j];
          unit = unit && (step == 0 || step == 1);
          total += step;
        }
        out.require(unit && total == 1, "zigzag unit step");
      }
      for (std::size_t j = 0; j < s; ++j) {
        out.require(c[d - 1][j] - c[0][j] == std::int64_t{1} << (s - 1 - j), "zigzag displacement");
      }
    }
  });

  criterion(3, "SOS2 gray formulations for r = 1..4 are ideal with (2d, 2d) vertices", 30.0,
            [](Outcome& out) {
              for (std::size_t r = 1; r <= 4; ++r) {
                const std::size_t d = std::size_t{1} << r;
                const Cdc c = sos2(d);
                const Encoding e = make_encoding(d, EncodingKind::BinaryReflectedGray);
                const Formulation f = theorem1_formulation(c, e);
                const std::string tag = "d = " + std::to_string(d);
                out.require(f.r_z == r, tag + ": integer variables");
                out.require(f.general_inequality_count() == 2 * r, tag + ": general inequalities");
                ideal_with_counts({c, e, f, {}}, 2 * d, out, tag);
              }
            });

  criterion(4, "annulus gray counts and ideality for d = 8, 16", 0, [](Outcome& out) {
    for (auto [d, r, vertices] : {std::tuple<std::size_t, std::size_t, std::size_t>{8, 3, 32},
                                  {16, 4, 64}}) {
      const auto res = annulus_gray_formulation(d);
      const std::string tag = "d = " + std::to_string(d);
      out.require(res.formulation.r_z == r, tag + ": integer variables");
      out.require(res.formulation.general_inequality_count() == 2 * r, tag + ": general inequalities");
      ideal_with_counts(res, vertices, out, tag);
    }
  });

  criterion(5, "annulus zigzag d = 8 has 6 paired rows with the expected normals", 0, [](Outcome& out) {
    const auto res = annulus_zigzag_formulation(8);
    out.require(res.formulation.gamma() == 6, "gamma");
    out.require(res.formulation.general_inequality_count() == 12, "general inequalities");
    // 2^-l e^k - 2^-k e^l, primitive up to sign
    std::set<IntegerVector> expected;
    for (std::size_t k = 1; k <= 3; ++k) {
      for (std::size_t l = k + 1; l <= 3; ++l) {
        RationalVector v(3);
        v[k - 1] = Rational(1, 1UL << l);
        v[l - 1] = -Rational(1, 1UL << k);
        expected.insert(primitive_canonical(std::span<const Rational>(v)));
      }
    }
    std::set<IntegerVector> non_unit;
    for (const auto& row : res.formulation.general_rows) {
      std::size_t nonzero = 0;
      for (const auto& x : row.normal) nonzero += x != 0;
      if (nonzero > 1) non_unit.insert(primitive_canonical(std::span<const Integer>(row.normal)));
    }
    out.require(non_unit == expected, "non-unit normals");
    ideal_with_counts(res, 32, out, "d = 8");
  });

  criterion(6, "closed forms equal the general pipeline row for row", 0, [](Outcome& out) {
    for (std::size_t d : {8, 16}) {
      const Cdc c = annulus_cdc(d);
      for (auto kind : {EncodingKind::BinaryReflectedGray, EncodingKind::ZigZag}) {
        const auto closed = kind == EncodingKind::ZigZag ? annulus_zigzag_formulation(d)
                                                         : annulus_gray_formulation(d);
        out.require(closed.formulation.provenance.pipeline == Pipeline::ClosedForm, "closed form used");
        out.require(same_system(canonical(closed.formulation),
                                canonical(theorem1_formulation(c, make_encoding(d, kind)))),
                    "annulus d = " + std::to_string(d) + " " + std::string(to_string(kind)));
      }
    }
    std::mt19937 rng(2024);
    std::uniform_int_distribution<long> value(-5, 5);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<long> values(9);
      for (auto& v : values) v = value(rng);
      const PwlFunction f = continuous_through(values);
      for (auto kind : {EncodingKind::BinaryReflectedGray, EncodingKind::ZigZag}) {
        const auto closed = pwl_formulation(f, kind);
        out.require(closed.formulation.provenance.pipeline == Pipeline::ClosedForm, "pwl closed form used");
        out.require(same_system(canonical(closed.formulation),
                                canonical(theorem1_formulation(pwl_ground_set(f).cdc(), make_encoding(8, kind)))),
                    "pwl d = 8");
      }
    }
  });

  criterion(7, "pwl d = 4 with one jump uses 6 lambda variables and is ideal", 0, [](Outcome& out) {
    // pieces on [0,1],[1,2],[2,3],[3,4]; jump of 2 at t = 3
    std::vector<Rational> t{0, 1, 2, 3, 4};
    std::vector<Rational> a{1, -1, 0, 2};
    std::vector<Rational> b{0, 2, 0, -4};
    const PwlFunction f(t, a, b);
    out.require(pwl_jumps(f) == std::vector<std::size_t>{3}, "one jump, at the fourth breakpoint");
    const auto res = pwl_formulation(f, EncodingKind::BinaryReflectedGray);
    out.require(res.formulation.provenance.kappa == std::size_t{1}, "kappa");
    out.require(res.formulation.n_lambda == 4 + 1 + 1, "lambda count");
    out.require(res.formulation.n_lambda < 2 * 4, "fewer than 2d lambdas");
    ideal_with_counts(res, 8, out, "pwl");
  });

  criterion(8, "row deletions expose fractional vertices; disconnected cdc exits 2", 0, [](Outcome& out) {
    const auto res = annulus_zigzag_formulation(8);
    const Formulation& f = res.formulation;
    const VertexSet expected = embedding_extreme_points(res.cdc, res.encoding);
    out.require(check_ideal(res.cdc, res.encoding, f).passed, "base formulation ideal");

    // drop a whole paired row
    for (std::size_t g = 0; g < f.general_rows.size(); ++g) {
      Formulation cut = f;
      cut.general_rows.erase(cut.general_rows.begin() + static_cast<std::ptrdiff_t>(g));
      const auto rep = check_ideal(res.cdc, res.encoding, cut);
      out.require(!rep.passed && rep.fractional_extra_count(f.n_lambda) > 0,
                  "pair " + std::to_string(g) + " deletion");
    }
    // drop one side of a paired row
    const LinearSystem base = relaxation_system(f);
    std::vector<std::size_t> general;
    for (std::size_t i = 0; i < base.ineq_lhs.row_count(); ++i) {
      const auto row = base.ineq_lhs.row(i);
      const bool lam = std::any_of(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(f.n_lambda),
                                   [](const Rational& q) { return q != 0; });
      const bool z = std::any_of(row.begin() + static_cast<std::ptrdiff_t>(f.n_lambda), row.end(),
                                 [](const Rational& q) { return q != 0; });
      if (lam && z) general.push_back(i);
    }
    out.require(general.size() == f.general_inequality_count(), "general row count in relaxation");
    for (auto drop : general) {
      LinearSystem s{base.eq_lhs, base.eq_rhs, RationalMatrix(base.dim()), {}};
      for (std::size_t i = 0; i < base.ineq_lhs.row_count(); ++i) {
        if (i == drop) continue;
        s.ineq_lhs.push_row(base.ineq_lhs.row(i));
        s.ineq_rhs.push_back(base.ineq_rhs[i]);
      }
      std::size_t fractional = 0;
      for (const auto& x : enumerate_vertices(s)) {
        if (!expected.count(x) && has_fractional_z(x, f.n_lambda)) ++fractional;
      }
      out.require(fractional > 0, "single row " + std::to_string(drop) + " deletion");
    }

    std::istringstream in(R"({"kind":"cdc","alternatives":[[1,2],[3,4],[4,5]],"encoding":"gray"})");
    std::ostringstream sink_out, sink_err;
    const int code = run_cli({"formulate", "-"}, in, sink_out, sink_err);
    out.require(code == 2, "cli exit code " + std::to_string(code));
  });

  criterion(9, "200 random connected cdcs with gray prefix codes are ideal", 300.0, [](Outcome& out) {
    std::mt19937 rng(9);
    std::uniform_int_distribution<std::size_t> nd(2, 8), dd(2, 6);
    std::size_t done = 0;
    while (done < 200) {
      const std::size_t d = dd(rng);
      const Encoding e = make_encoding(d, EncodingKind::BinaryReflectedGray);
      if (!check_gates(e).passed()) continue;
      const Cdc c = random_connected_cdc(rng, nd(rng), d);
      const auto dirs = difference_directions(intersection_digraph(c), e);
      out.require(check_dim_condition(dirs, e), "dimension condition");
      out.require(oracle_dimension_condition(dirs, e), "dimension condition (oracle)");
      const Formulation f = theorem1_formulation(c, e);
      const auto rep = check_ideal(c, e, f);
      out.require(rep.passed, "check_ideal on instance " + std::to_string(done));
      ++done;
    }
  });

  criterion(10, "spanned hyperplane normals match the brute-force arrangement", 0, [](Outcome& out) {
    std::mt19937 rng(10);
    std::uniform_int_distribution<std::size_t> dim_dist(1, 3), count(1, 6);
    std::uniform_int_distribution<long> coord(-3, 3);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t dim = dim_dist(rng);
      const std::size_t want = count(rng);
      std::vector<IntegerVector> dirs;
      while (dirs.size() < want) {
        IntegerVector v(dim);
        for (auto& x : v) x = coord(rng);
        if (std::any_of(v.begin(), v.end(), [](const Integer& x) { return x != 0; })) dirs.push_back(v);
      }
      DifferenceDirections c;
      c.dim = dim;
      std::set<IntegerVector> unique;
      for (const auto& d : dirs) unique.insert(primitive_canonical(std::span<const Integer>(d)));
      c.deduped.assign(unique.begin(), unique.end());
      const auto normals = spanned_hyperplane_normals(c);
      oracle::Mat raw;
      for (const auto& d : dirs) raw.push_back(to_rational(d));
      const auto brute = oracle::arrangement_normals(raw, dim);
      out.require(std::set<IntegerVector>(normals.begin(), normals.end()) ==
                      std::set<IntegerVector>(brute.begin(), brute.end()),
                  "trial " + std::to_string(trial));
    }
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
