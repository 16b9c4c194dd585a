#pragma once

#include <functional>
#include <vector>

#include "core/rational.hpp"

namespace fsc {

// Hard ceiling for enumeration; C_18 ~ 4.8e8 is already desk-scale hostile.
inline constexpr int kMaxGroundSet = 18;

/// A partition of {1..n}. Blocks are sorted ascending and ordered by least element.
struct SetPartition {
  int n = 0;
  std::vector<std::vector<int>> blocks;

  // Throws ErrorCode::invalid_argument on overlap, gap or out-of-range element.
  void validate() const;

  // Block sizes as a sorted multiset; sums to n.
  std::vector<int> block_profile() const;
};

bool is_noncrossing(const SetPartition& p);

// Visits every noncrossing partition of {1..n} exactly once, in lexicographic
// order of the element -> block-index map. The visitor may return false to stop.
void for_each_noncrossing(int n, const std::function<bool(const SetPartition&)>& visit);

std::vector<SetPartition> enumerate_noncrossing(int n);

// |NC(n)| by direct enumeration (not the Catalan formula).
BigInt count_noncrossing(int n);

}  // namespace fsc
