#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace cdcform {

using IntVector = std::vector<std::int64_t>;
using IntMatrix = std::vector<IntVector>;

enum class EncodingKind { BinaryReflectedGray, ZigZag, Explicit };

std::string_view to_string(EncodingKind kind);
/// Accepts "gray", "zigzag", "explicit" (plus a few spelled-out aliases).
EncodingKind parse_encoding_kind(std::string_view text);

inline constexpr std::uint64_t kDefaultHoleCheckCap = 1'000'000;
inline constexpr std::size_t kMaxGeneratedOrder = 20;

/// ceil(log2(d)) for d >= 1.
std::size_t ceil_log2(std::size_t d);
bool is_power_of_two(std::size_t d);

/// K^s: 2^s x s binary reflected Gray matrix. Throws InvalidOrder for s == 0.
IntMatrix gray_matrix(std::size_t s);
/// C^s: 2^s x s zig-zag matrix. Throws InvalidOrder for s == 0.
IntMatrix zigzag_matrix(std::size_t s);

/// d distinct integer code vectors h^1..h^d of a common dimension r.
class Encoding {
 public:
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  EncodingKind kind() const noexcept { return kind_; }
  const IntMatrix& rows() const noexcept { return rows_; }
  const IntVector& row(std::size_t i) const { return rows_[i]; }

  bool operator==(const Encoding&) const = default;

 private:
  Encoding(EncodingKind kind, IntMatrix rows);
  friend Encoding make_encoding(std::size_t d, EncodingKind kind);
  friend Encoding make_explicit_encoding(IntMatrix rows);

  EncodingKind kind_;
  std::size_t dim_ = 0;
  IntMatrix rows_;
};

/// First d rows of K^r or C^r with r = ceil(log2 d).
Encoding make_encoding(std::size_t d, EncodingKind kind);
/// Validates shape, d >= 2, r >= 1 and pairwise distinct rows.
Encoding make_explicit_encoding(IntMatrix rows);

bool is_in_convex_position(const Encoding& e);
/// Throws HoleCheckTooLarge when the bounding-box lattice exceeds `cap` points.
bool is_hole_free(const Encoding& e, std::uint64_t cap = kDefaultHoleCheckCap);

struct GateResult {
  bool convex_position = false;
  bool hole_free = false;
  bool passed() const { return convex_position && hole_free; }
};

GateResult check_gates(const Encoding& e, std::uint64_t cap = kDefaultHoleCheckCap);

}  // namespace cdcform
