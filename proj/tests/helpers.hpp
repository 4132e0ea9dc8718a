#pragma once

#include <cstddef>
#include <vector>

#include "cdcform/io.hpp"
#include "oracles.hpp"

namespace testing_helpers {

using namespace cdcform;

// 0-based SOS2 family {0,1},{1,2},...,{d-1,d}.
inline Cdc sos2(std::size_t d) {
  std::vector<std::vector<std::size_t>> alts;
  for (std::size_t i = 0; i < d; ++i) alts.push_back({i, i + 1});
  return Cdc(d + 1, alts);
}

inline RationalVector qv(std::initializer_list<long> xs) {
  RationalVector v;
  for (auto x : xs) v.emplace_back(x);
  return v;
}

inline IntegerVector iv(std::initializer_list<long> xs) {
  IntegerVector v;
  for (auto x : xs) v.emplace_back(x);
  return v;
}

inline oracle::Mat to_oracle(const RationalMatrix& m) {
  oracle::Mat out;
  for (const auto& r : m.rows()) out.push_back(r);
  return out;
}

inline std::set<RationalVector> oracle_vertices(const Formulation& f) {
  const LinearSystem s = relaxation_system(f);
  auto v = oracle::tight_subset_vertices(to_oracle(s.eq_lhs), s.eq_rhs, to_oracle(s.ineq_lhs),
                                         s.ineq_rhs, s.dim());
  return {v.begin(), v.end()};
}

}  // namespace testing_helpers
