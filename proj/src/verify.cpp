#include "cdcform/verify.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "cdcform/error.hpp"

namespace cdcform {

LinearSystem relaxation_system(const Formulation& f) {
  const std::size_t n = f.n_lambda;
  const std::size_t dim = f.variable_count();
  LinearSystem sys{RationalMatrix(dim), {}, RationalMatrix(dim), {}};
  for (const auto& eq : f.equalities) {
    sys.eq_lhs.push_row(eq.coeffs);
    sys.eq_rhs.push_back(eq.rhs);
  }
  auto add = [&](RationalVector row, Rational rhs) {
    sys.ineq_lhs.push_row(std::move(row));
    sys.ineq_rhs.push_back(std::move(rhs));
  };
  for (std::size_t v = 0; v < n; ++v) {
    RationalVector row(dim);
    row[v] = -1;
    add(std::move(row), 0);
  }
  for (const auto& g : f.general_rows) {
    RationalVector lo(dim), hi(dim);
    for (std::size_t v = 0; v < n; ++v) {
      lo[v] = g.lower[v];
      hi[v] = -g.upper[v];
    }
    for (std::size_t k = 0; k < f.r_z; ++k) {
      lo[n + k] = -Rational(g.normal[k]);
      hi[n + k] = Rational(g.normal[k]);
    }
    add(std::move(lo), 0);
    add(std::move(hi), 0);
  }
  for (std::size_t k = 0; k < f.r_z; ++k) {
    RationalVector up(dim), down(dim);
    up[n + k] = 1;
    down[n + k] = -1;
    add(std::move(up), Rational(static_cast<long>(f.z_bounds[k].upper)));
    add(std::move(down), -Rational(static_cast<long>(f.z_bounds[k].lower)));
  }
  return sys;
}

namespace {

class Bits {
 public:
  explicit Bits(std::size_t size = 0) : words_((size + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }

  Bits operator&(const Bits& o) const {
    Bits out = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= o.words_[w];
    return out;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] & ~o.words_[w]) return false;
    }
    return true;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  IntegerVector v;
  Bits zeros;
};

// Divide by the (positive) gcd without touching the sign.
void reduce_positive(IntegerVector& v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1) {
    for (auto& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  }
}

IntegerVector scale_positive(const RationalVector& v) {
  auto [ints, unused] = scale_row_to_integers(v, {});
  reduce_positive(ints);
  return ints;
}

Integer dot_int(const IntegerVector& a, const IntegerVector& b) {
  Integer acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
  }
  return acc;
}

}  // namespace

VertexSet enumerate_vertices(const LinearSystem& system, const VerifyOptions& options) {
  const std::size_t dim = system.dim();

  // Parametrize the equality-constrained space as x0 + sum_j y_j basis_j.
  RationalVector x0(dim);
  RationalMatrix basis(dim);
  if (!system.eq_lhs.empty()) {
    auto solution = solve_any(system.eq_lhs, system.eq_rhs);
    if (!solution) return {};
    x0 = std::move(*solution);
    basis = nullspace(system.eq_lhs);
  } else {
    for (std::size_t j = 0; j < dim; ++j) {
      RationalVector e(dim);
      e[j] = 1;
      basis.push_row(std::move(e));
    }
  }
  const std::size_t k = basis.row_count();

  // Homogenized cone over (y, t):  beta t - a . y >= 0  and  t >= 0.
  std::set<IntegerVector> unique_rows;
  for (std::size_t i = 0; i < system.ineq_lhs.row_count(); ++i) {
    const RationalVector& g = system.ineq_lhs.row(i);
    RationalVector row(k + 1);
    bool trivial = true;
    for (std::size_t j = 0; j < k; ++j) {
      row[j] = -dot(g, basis.row(j));
      if (row[j] != 0) trivial = false;
    }
    row[k] = system.ineq_rhs[i] - dot(g, x0);
    if (trivial) {
      if (row[k] < 0) return {};
      continue;
    }
    unique_rows.insert(scale_positive(row));
  }
  if (k == 0) return {x0};
  {
    IntegerVector t_row(k + 1, Integer(0));
    t_row[k] = 1;
    unique_rows.insert(std::move(t_row));
  }
  const std::vector<IntegerVector> rows(unique_rows.begin(), unique_rows.end());
  const std::size_t m = rows.size();
  const std::size_t cone_dim = k + 1;

  // Initial simplicial cone from greedily chosen independent rows.
  std::vector<std::size_t> basis_rows;
  {
    RationalMatrix chosen(cone_dim);
    for (std::size_t i = 0; i < m && basis_rows.size() < cone_dim; ++i) {
      RationalMatrix trial = chosen;
      trial.push_row(to_rational(rows[i]));
      if (rank(trial) == trial.row_count()) {
        chosen = std::move(trial);
        basis_rows.push_back(i);
      }
    }
    if (basis_rows.size() < cone_dim) {
      throw Error(ErrorCode::Unbounded, "feasible region contains a line");
    }
  }
  std::vector<Ray> rays;
  {
    // Columns of the inverse of the chosen rows generate their cone.
    RationalMatrix aug(2 * cone_dim);
    for (std::size_t i = 0; i < cone_dim; ++i) {
      RationalVector r = to_rational(rows[basis_rows[i]]);
      r.resize(2 * cone_dim);
      r[cone_dim + i] = 1;
      aug.push_row(std::move(r));
    }
    const Echelon inv = row_reduce(std::move(aug));
    for (std::size_t j = 0; j < cone_dim; ++j) {
      RationalVector col(cone_dim);
      for (std::size_t i = 0; i < cone_dim; ++i) col[i] = inv.reduced.at(i, cone_dim + j);
      Ray ray{scale_positive(col), Bits(m)};
      for (std::size_t i = 0; i < cone_dim; ++i) {
        if (i != j) ray.zeros.set(basis_rows[i]);
      }
      rays.push_back(std::move(ray));
    }
  }

  std::vector<bool> done(m, false);
  for (auto i : basis_rows) done[i] = true;
  for (std::size_t step = cone_dim; step < m; ++step) {
    // Max cutoff: next row is the one violated by the most current rays.
    std::size_t i = m;
    std::size_t best = 0;
    for (std::size_t c = 0; c < m; ++c) {
      if (done[c]) continue;
      std::size_t nn = 0;
      for (const auto& ray : rays) nn += dot_int(rows[c], ray.v) < 0;
      if (i == m || nn > best) {
        i = c;
        best = nn;
      }
    }
    done[i] = true;
    std::vector<Integer> value(rays.size());
    std::vector<std::size_t> pos, neg;
    std::vector<Ray> next;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      value[r] = dot_int(rows[i], rays[r].v);
      if (value[r] > 0) pos.push_back(r);
      if (value[r] < 0) neg.push_back(r);
    }
    for (auto p : pos) {
      for (auto q : neg) {
        Bits common = rays[p].zeros & rays[q].zeros;
        if (common.count() + 2 < cone_dim) continue;
        bool adjacent = true;
        for (std::size_t o = 0; o < rays.size() && adjacent; ++o) {
          if (o != p && o != q && common.subset_of(rays[o].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        IntegerVector v(cone_dim);
        const Integer wp = -value[q];
        const Integer& wq = value[p];
        for (std::size_t j = 0; j < cone_dim; ++j) v[j] = wp * rays[p].v[j] + wq * rays[q].v[j];
        reduce_positive(v);
        common.set(i);
        next.push_back({std::move(v), std::move(common)});
      }
    }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (value[r] < 0) continue;
      if (value[r] == 0) rays[r].zeros.set(i);
      next.push_back(std::move(rays[r]));
    }
    rays = std::move(next);
    if (rays.size() > options.max_rays) {
      throw Error(ErrorCode::TooLargeToEnumerate,
                  "more than " + std::to_string(options.max_rays) +
                      " intermediate rays");
    }
  }

  VertexSet vertices;
  bool recession = false;
  for (const auto& ray : rays) {
    const Integer& t = ray.v[k];
    if (t == 0) {
      recession = true;
      continue;
    }
    RationalVector x = x0;
    for (std::size_t j = 0; j < k; ++j) {
      if (ray.v[j] == 0) continue;
      Rational y(ray.v[j], t);
      y.canonicalize();
      for (std::size_t c = 0; c < dim; ++c) {
        if (basis.at(j, c) != 0) x[c] += y * basis.at(j, c);
      }
    }
    vertices.insert(std::move(x));
  }
  if (recession && !vertices.empty()) {
    throw Error(ErrorCode::Unbounded, "feasible region has a recession direction");
  }
  return vertices;
}

VertexSet enumerate_vertices(const Formulation& f, const VerifyOptions& options) {
  return enumerate_vertices(relaxation_system(f), options);
}

VertexSet embedding_extreme_points(const Cdc& cdc, const Encoding& e) {
  if (cdc.alternative_count() != e.size()) {
    throw Error(ErrorCode::InvalidInput, "alternative and code counts differ");
  }
  VertexSet points;
  const std::size_t n = cdc.ground_size();
  for (std::size_t j = 0; j < e.size(); ++j) {
    for (auto w : cdc.alternative(j)) {
      RationalVector x(n + e.dim());
      x[w] = 1;
      for (std::size_t k = 0; k < e.dim(); ++k) {
        x[n + k] = Rational(static_cast<long>(e.row(j)[k]));
      }
      points.insert(std::move(x));
    }
  }
  return points;
}

std::size_t VerificationReport::fractional_extra_count(std::size_t n_lambda) const {
  return static_cast<std::size_t>(
      std::count_if(extra.begin(), extra.end(), [&](const RationalVector& x) {
        return std::any_of(x.begin() + static_cast<std::ptrdiff_t>(n_lambda), x.end(),
                           [](const Rational& q) { return q.get_den() != 1; });
      }));
}

VerificationReport check_ideal(const Cdc& cdc, const Encoding& e,
                               const Formulation& f, const VerifyOptions& options) {
  const VertexSet expected = embedding_extreme_points(cdc, e);
  const VertexSet found = enumerate_vertices(f, options);
  VerificationReport report;
  report.expected = expected.size();
  report.found = found.size();
  std::set_difference(expected.begin(), expected.end(), found.begin(), found.end(),
                      std::back_inserter(report.missing));
  std::set_difference(found.begin(), found.end(), expected.begin(), expected.end(),
                      std::back_inserter(report.extra));
  report.passed = report.missing.empty() && report.extra.empty();
  return report;
}

bool satisfies(const LinearSystem& system, const RationalVector& x) {
  for (std::size_t i = 0; i < system.eq_lhs.row_count(); ++i) {
    if (dot(system.eq_lhs.row(i), x) != system.eq_rhs[i]) return false;
  }
  for (std::size_t i = 0; i < system.ineq_lhs.row_count(); ++i) {
    if (dot(system.ineq_lhs.row(i), x) > system.ineq_rhs[i]) return false;
  }
  return true;
}

bool check_validity_only(const Cdc& cdc, const Encoding& e, const Formulation& f) {
  const LinearSystem sys = relaxation_system(f);
  for (const auto& x : embedding_extreme_points(cdc, e)) {
    if (!satisfies(sys, x)) return false;
  }
  return true;
}

}  // namespace cdcform
