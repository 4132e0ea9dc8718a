#include "cdcform/encodings.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "cdcform/error.hpp"
#include "cdcform/exact_linalg.hpp"

namespace cdcform {

std::string_view to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::BinaryReflectedGray: return "gray";
    case EncodingKind::ZigZag: return "zigzag";
    case EncodingKind::Explicit: return "explicit";
  }
  return "unknown";
}

EncodingKind parse_encoding_kind(std::string_view text) {
  if (text == "gray" || text == "binary_reflected_gray" || text == "br") {
    return EncodingKind::BinaryReflectedGray;
  }
  if (text == "zigzag" || text == "zig-zag" || text == "zz") {
    return EncodingKind::ZigZag;
  }
  if (text == "explicit") return EncodingKind::Explicit;
  throw Error(ErrorCode::InvalidInput,
              "unknown encoding kind \"" + std::string(text) + "\"");
}

std::size_t ceil_log2(std::size_t d) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < d) ++r;
  return r;
}

bool is_power_of_two(std::size_t d) { return d != 0 && (d & (d - 1)) == 0; }

namespace {

void check_order(std::size_t s) {
  if (s == 0) throw Error(ErrorCode::InvalidOrder, "order must be at least 1");
  if (s > kMaxGeneratedOrder) {
    throw Error(ErrorCode::InvalidOrder,
                "order " + std::to_string(s) + " exceeds " +
                    std::to_string(kMaxGeneratedOrder));
  }
}

}  // namespace

IntMatrix gray_matrix(std::size_t s) {
  check_order(s);
  IntMatrix k = {{0}, {1}};
  for (std::size_t order = 1; order < s; ++order) {
    IntMatrix next;
    next.reserve(2 * k.size());
    for (const auto& row : k) {
      next.push_back(row);
      next.back().push_back(0);
    }
    for (auto it = k.rbegin(); it != k.rend(); ++it) {
      next.push_back(*it);
      next.back().push_back(1);
    }
    k = std::move(next);
  }
  return k;
}

IntMatrix zigzag_matrix(std::size_t s) {
  check_order(s);
  IntMatrix c = {{0}, {1}};
  for (std::size_t order = 1; order < s; ++order) {
    const IntVector last = c.back();
    IntMatrix next;
    next.reserve(2 * c.size());
    for (const auto& row : c) {
      next.push_back(row);
      next.back().push_back(0);
    }
    for (const auto& row : c) {
      IntVector shifted(row.size());
      for (std::size_t j = 0; j < row.size(); ++j) shifted[j] = row[j] + last[j];
      shifted.push_back(1);
      next.push_back(std::move(shifted));
    }
    c = std::move(next);
  }
  return c;
}

Encoding::Encoding(EncodingKind kind, IntMatrix rows)
    : kind_(kind), dim_(rows.empty() ? 0 : rows.front().size()),
      rows_(std::move(rows)) {}

Encoding make_encoding(std::size_t d, EncodingKind kind) {
  if (kind == EncodingKind::Explicit) {
    throw Error(ErrorCode::NeedsExplicitRows,
                "explicit encodings are built from their rows");
  }
  if (d < 2) {
    throw Error(ErrorCode::TooFewAlternatives,
                "need at least 2 alternatives, got " + std::to_string(d));
  }
  const std::size_t r = ceil_log2(d);
  IntMatrix full = kind == EncodingKind::BinaryReflectedGray ? gray_matrix(r)
                                                              : zigzag_matrix(r);
  full.resize(d);
  return Encoding(kind, std::move(full));
}

Encoding make_explicit_encoding(IntMatrix rows) {
  if (rows.size() < 2) {
    throw Error(ErrorCode::TooFewAlternatives,
                "need at least 2 code vectors, got " + std::to_string(rows.size()));
  }
  const std::size_t r = rows.front().size();
  if (r == 0) throw Error(ErrorCode::InvalidInput, "code vectors must be nonempty");
  std::set<IntVector> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != r) {
      throw Error(ErrorCode::InvalidInput,
                  "code vector " + std::to_string(i + 1) + " has the wrong length");
    }
    if (!seen.insert(rows[i]).second) {
      throw Error(ErrorCode::InvalidInput,
                  "code vector " + std::to_string(i + 1) + " is repeated");
    }
  }
  return Encoding(EncodingKind::Explicit, std::move(rows));
}

bool is_in_convex_position(const Encoding& e) {
  std::vector<RationalVector> points;
  for (const auto& row : e.rows()) points.push_back(to_rational(row));
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<RationalVector> others;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j != i) others.push_back(points[j]);
    }
    if (in_convex_hull(others, points[i])) return false;
  }
  return true;
}

bool is_hole_free(const Encoding& e, std::uint64_t cap) {
  const std::size_t r = e.dim();
  IntVector lo(e.row(0)), hi(e.row(0));
  for (const auto& row : e.rows()) {
    for (std::size_t k = 0; k < r; ++k) {
      lo[k] = std::min(lo[k], row[k]);
      hi[k] = std::max(hi[k], row[k]);
    }
  }
  std::uint64_t lattice = 1;
  for (std::size_t k = 0; k < r; ++k) {
    const auto extent = static_cast<std::uint64_t>(hi[k] - lo[k]) + 1;
    if (lattice > cap / extent) {
      throw Error(ErrorCode::HoleCheckTooLarge,
                  "bounding box has more than " + std::to_string(cap) +
                      " lattice points");
    }
    lattice *= extent;
  }
  std::vector<RationalVector> generators;
  for (const auto& row : e.rows()) generators.push_back(to_rational(row));
  const std::set<IntVector> codes(e.rows().begin(), e.rows().end());
  const AffineHull hull = affine_hull(generators);

  IntVector p = lo;
  while (true) {
    if (!codes.contains(p)) {
      const RationalVector q = to_rational(p);
      if (hull.contains(q) && in_convex_hull(generators, q)) return false;
    }
    std::size_t k = 0;
    while (k < r && p[k] == hi[k]) {
      p[k] = lo[k];
      ++k;
    }
    if (k == r) break;
    ++p[k];
  }
  return true;
}

GateResult check_gates(const Encoding& e, std::uint64_t cap) {
  GateResult g;
  g.convex_position = is_in_convex_position(e);
  g.hole_free = is_hole_free(e, cap);
  return g;
}

}  // namespace cdcform
