#include "cdcform/cdc_core.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cdcform/error.hpp"

namespace cdcform {

Cdc::Cdc(std::size_t n, std::vector<std::vector<std::size_t>> alternatives)
    : n_(n), alternatives_(std::move(alternatives)) {
  if (alternatives_.size() < 2) {
    throw Error(ErrorCode::TooFewAlternatives,
                "need at least 2 alternatives, got " +
                    std::to_string(alternatives_.size()));
  }
  std::vector<bool> covered(n_, false);
  for (std::size_t i = 0; i < alternatives_.size(); ++i) {
    auto& alt = alternatives_[i];
    const std::string where = "alternative " + std::to_string(i + 1);
    if (alt.empty()) throw Error(ErrorCode::InvalidInput, where + " is empty");
    std::sort(alt.begin(), alt.end());
    if (std::adjacent_find(alt.begin(), alt.end()) != alt.end()) {
      throw Error(ErrorCode::InvalidInput, where + " repeats an element");
    }
    for (auto v : alt) {
      if (v >= n_) {
        throw Error(ErrorCode::InvalidInput,
                    where + " has element " + std::to_string(v + 1) +
                        " outside the ground set of size " + std::to_string(n_));
      }
      covered[v] = true;
    }
  }
  for (std::size_t v = 0; v < n_; ++v) {
    if (!covered[v]) {
      throw Error(ErrorCode::InvalidInput,
                  "ground element " + std::to_string(v + 1) + " uncovered");
    }
  }
}

bool Cdc::contains(std::size_t alternative, std::size_t element) const {
  const auto& alt = alternatives_[alternative];
  return std::binary_search(alt.begin(), alt.end(), element);
}

std::vector<std::size_t> Cdc::alternatives_containing(std::size_t element) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < alternatives_.size(); ++i) {
    if (contains(i, element)) out.push_back(i);
  }
  return out;
}

IntersectionDigraph intersection_digraph(const Cdc& cdc) {
  IntersectionDigraph g;
  g.d = cdc.alternative_count();
  for (std::size_t i = 0; i < g.d; ++i) {
    for (std::size_t j = i + 1; j < g.d; ++j) {
      const auto& a = cdc.alternative(i);
      const auto& b = cdc.alternative(j);
      std::vector<std::size_t> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(common));
      if (!common.empty()) g.arcs.push_back({i, j});
    }
  }
  return g;
}

bool is_weakly_connected(const IntersectionDigraph& g) {
  if (g.d == 0) return true;
  std::vector<std::size_t> parent(g.d);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t components = g.d;
  for (const auto& arc : g.arcs) {
    const auto a = find(arc.from);
    const auto b = find(arc.to);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

DifferenceDirections difference_directions(const IntersectionDigraph& g,
                                           const Encoding& e) {
  if (g.d != e.size()) {
    throw Error(ErrorCode::InvalidInput,
                "digraph has " + std::to_string(g.d) + " nodes but encoding has " +
                    std::to_string(e.size()) + " rows");
  }
  DifferenceDirections c;
  c.dim = e.dim();
  std::set<IntegerVector> unique;
  for (const auto& arc : g.arcs) {
    IntVector diff(e.dim());
    for (std::size_t k = 0; k < e.dim(); ++k) {
      diff[k] = e.row(arc.to)[k] - e.row(arc.from)[k];
    }
    unique.insert(primitive_canonical(to_rational(diff)));
    c.raw.push_back({arc, std::move(diff)});
  }
  c.deduped.assign(unique.begin(), unique.end());
  return c;
}

namespace {

std::vector<RationalVector> rational_rows(const Encoding& e) {
  std::vector<RationalVector> rows;
  for (const auto& row : e.rows()) rows.push_back(to_rational(row));
  return rows;
}

RationalMatrix deduped_matrix(const DifferenceDirections& c) {
  RationalMatrix m(c.dim);
  for (const auto& v : c.deduped) m.push_row(to_rational(v));
  return m;
}

}  // namespace

DimensionReport dimension_report(const DifferenceDirections& c, const Encoding& e) {
  RationalMatrix raw(c.dim);
  for (const auto& entry : c.raw) raw.push_row(to_rational(entry.vector));
  DimensionReport report;
  report.direction_rank = rank(raw);
  report.hull_dim = affine_hull(rational_rows(e)).dimension();
  return report;
}

bool check_dim_condition(const DifferenceDirections& c, const Encoding& e) {
  return dimension_report(c, e).satisfied();
}

std::vector<IntegerVector> spanned_hyperplane_normals(const DifferenceDirections& c,
                                                      std::size_t max_directions) {
  if (c.deduped.empty()) {
    throw Error(ErrorCode::NoDirections, "no difference directions");
  }
  if (c.deduped.size() > max_directions) {
    throw Error(ErrorCode::TooManyDirections,
                std::to_string(c.deduped.size()) +
                    " distinct directions exceed the cap of " +
                    std::to_string(max_directions));
  }
  const RationalMatrix space = deduped_matrix(c);
  const std::size_t m = rank(space);
  const std::size_t count = c.deduped.size();
  const std::size_t pick = m - 1;

  std::set<IntegerVector> normals;
  // Walk all pick-element index subsets in lexicographic order.
  std::vector<std::size_t> idx(pick);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    RationalMatrix subset(c.dim);
    for (auto i : idx) subset.push_row(space.row(i));
    if (rank(subset) == pick) {
      normals.insert(primitive_canonical(orthogonal_in_subspace(space, subset)));
    }
    std::size_t k = pick;
    while (k > 0 && idx[k - 1] == count - pick + (k - 1)) --k;
    if (k == 0) break;
    ++idx[k - 1];
    for (std::size_t j = k; j < pick; ++j) idx[j] = idx[j - 1] + 1;
  }
  return {normals.begin(), normals.end()};
}

PairedRow paired_row(const Cdc& cdc, const Encoding& e, IntegerVector normal) {
  PairedRow row;
  const RationalVector b = to_rational(normal);
  std::vector<Rational> level(e.size());
  for (std::size_t s = 0; s < e.size(); ++s) level[s] = dot(b, to_rational(e.row(s)));
  row.lower.resize(cdc.ground_size());
  row.upper.resize(cdc.ground_size());
  for (std::size_t v = 0; v < cdc.ground_size(); ++v) {
    const auto owners = cdc.alternatives_containing(v);
    Rational lo = level[owners.front()];
    Rational hi = lo;
    for (auto s : owners) {
      if (level[s] < lo) lo = level[s];
      if (level[s] > hi) hi = level[s];
    }
    row.lower[v] = lo;
    row.upper[v] = hi;
  }
  row.normal = std::move(normal);
  return row;
}

Formulation base_formulation(const Cdc& cdc, const Encoding& e) {
  if (cdc.alternative_count() != e.size()) {
    throw Error(ErrorCode::InvalidInput,
                std::to_string(cdc.alternative_count()) + " alternatives but " +
                    std::to_string(e.size()) + " code vectors");
  }
  Formulation f;
  f.n_lambda = cdc.ground_size();
  f.r_z = e.dim();
  f.provenance.encoding = e.kind();

  LinearEquality simplex;
  simplex.coeffs.assign(f.variable_count(), Rational(0));
  for (std::size_t v = 0; v < f.n_lambda; ++v) simplex.coeffs[v] = 1;
  simplex.rhs = 1;
  f.equalities.push_back(std::move(simplex));

  const AffineHull hull = affine_hull(rational_rows(e));
  for (std::size_t i = 0; i < hull.eq_lhs.row_count(); ++i) {
    auto [lhs, rhs] = scale_row_to_integers(hull.eq_lhs.row(i), {&hull.eq_rhs[i], 1});
    // Canonical sign: first nonzero coefficient positive.
    const auto first = std::find_if(lhs.begin(), lhs.end(),
                                    [](const Integer& x) { return x != 0; });
    Integer g = 0;
    for (const auto& x : lhs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), rhs[0].get_mpz_t());
    if (*first < 0) g = -g;
    LinearEquality eq;
    eq.coeffs.assign(f.variable_count(), Rational(0));
    for (std::size_t k = 0; k < f.r_z; ++k) eq.coeffs[f.n_lambda + k] = Rational(lhs[k] / g);
    eq.rhs = Rational(rhs[0] / g);
    f.equalities.push_back(std::move(eq));
  }

  f.z_bounds.resize(f.r_z);
  for (std::size_t k = 0; k < f.r_z; ++k) {
    f.z_bounds[k] = {e.row(0)[k], e.row(0)[k]};
    for (const auto& row : e.rows()) {
      f.z_bounds[k].lower = std::min(f.z_bounds[k].lower, row[k]);
      f.z_bounds[k].upper = std::max(f.z_bounds[k].upper, row[k]);
    }
  }
  return f;
}

Formulation theorem1_formulation(const Cdc& cdc, const Encoding& e,
                                 const FormulationOptions& options) {
  Formulation f = base_formulation(cdc, e);
  if (options.run_gates) {
    const GateResult gates = check_gates(e, options.hole_check_cap);
    if (!gates.passed()) {
      std::string why;
      if (!gates.convex_position) why += "not in convex position";
      if (!gates.hole_free) why += std::string(why.empty() ? "" : ", ") + "not hole-free";
      throw Error(ErrorCode::EncodingNotIdealizable, "encoding is " + why);
    }
  }
  const IntersectionDigraph g = intersection_digraph(cdc);
  const DifferenceDirections c = difference_directions(g, e);
  const DimensionReport dims = dimension_report(c, e);
  if (!dims.satisfied()) {
    throw Error(ErrorCode::DimensionDeficit,
                "rank of difference directions " +
                    std::to_string(dims.direction_rank) + " < dim aff(H) " +
                    std::to_string(dims.hull_dim) + " (rank gap " +
                    std::to_string(dims.hull_dim - dims.direction_rank) +
                    "); intersection digraph is " +
                    (is_weakly_connected(g) ? "connected" : "disconnected"));
  }
  for (auto& normal : spanned_hyperplane_normals(c, options.max_directions)) {
    f.general_rows.push_back(paired_row(cdc, e, std::move(normal)));
  }
  f.provenance.pipeline = Pipeline::General;
  if (!is_weakly_connected(g)) {
    f.provenance.notes.push_back(
        "intersection digraph is disconnected; dimension condition holds");
  }
  return f;
}

}  // namespace cdcform
