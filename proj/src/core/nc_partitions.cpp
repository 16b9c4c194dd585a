#include "core/nc_partitions.hpp"

#include <algorithm>

namespace fsc {

void SetPartition::validate() const {
  if (n < 1) fail(ErrorCode::invalid_argument, "partition ground set must be nonempty");
  std::vector<char> seen(static_cast<size_t>(n) + 1, 0);
  int covered = 0;
  for (const auto& block : blocks) {
    if (block.empty()) fail(ErrorCode::invalid_argument, "empty block");
    for (size_t i = 0; i < block.size(); ++i) {
      int e = block[i];
      if (e < 1 || e > n) fail(ErrorCode::invalid_argument, "element out of range");
      if (seen[static_cast<size_t>(e)]) fail(ErrorCode::invalid_argument, "element appears in two blocks");
      if (i > 0 && block[i - 1] >= e) fail(ErrorCode::invalid_argument, "block not sorted ascending");
      seen[static_cast<size_t>(e)] = 1;
      ++covered;
    }
  }
  if (covered != n) fail(ErrorCode::invalid_argument, "blocks do not cover {1..n}");
  for (size_t b = 1; b < blocks.size(); ++b)
    if (blocks[b - 1].front() >= blocks[b].front())
      fail(ErrorCode::invalid_argument, "blocks not ordered by least element");
}

std::vector<int> SetPartition::block_profile() const {
  validate();
  std::vector<int> sizes;
  sizes.reserve(blocks.size());
  for (const auto& b : blocks) sizes.push_back(static_cast<int>(b.size()));
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

bool is_noncrossing(const SetPartition& p) {
  p.validate();
  // Scan 1..n keeping the stack of blocks that may still be extended.
  // Returning to a block below the top closes everything above it; a later
  // element of a closed block would witness a crossing a < b < c < d.
  std::vector<int> label(static_cast<size_t>(p.n) + 1, -1);
  for (size_t b = 0; b < p.blocks.size(); ++b)
    for (int e : p.blocks[b]) label[static_cast<size_t>(e)] = static_cast<int>(b);

  std::vector<int> stack;
  std::vector<char> closed(p.blocks.size(), 0);
  for (int e = 1; e <= p.n; ++e) {
    int b = label[static_cast<size_t>(e)];
    if (!stack.empty() && stack.back() == b) continue;
    if (closed[static_cast<size_t>(b)]) return false;
    auto it = std::find(stack.begin(), stack.end(), b);
    if (it == stack.end()) {
      stack.push_back(b);
    } else {
      while (stack.back() != b) {
        closed[static_cast<size_t>(stack.back())] = 1;
        stack.pop_back();
      }
    }
  }
  return true;
}

namespace {

struct NcEnumerator {
  int n;
  const std::function<bool(const SetPartition&)>& visit;
  std::vector<std::vector<int>> blocks;  // creation order == least-element order
  std::vector<int> stack;                // open block indices, labels increasing bottom->top
  bool stopped = false;

  bool emit() {
    SetPartition p{n, blocks};
    return visit(p);
  }

  // Extends the partial partition at element e. Candidate blocks are the open
  // ones in label order (stack bottom -> top), then a fresh block; this yields
  // the lexicographic order of the element -> block-index map.
  void grow(int e) {
    if (stopped) return;
    if (e > n) {
      if (!emit()) stopped = true;
      return;
    }
    for (size_t d = 0; d < stack.size() && !stopped; ++d) {
      int b = stack[d];
      // Joining block b closes every block above it on the stack.
      std::vector<int> popped(stack.begin() + static_cast<long>(d) + 1, stack.end());
      stack.resize(d + 1);
      blocks[static_cast<size_t>(b)].push_back(e);
      grow(e + 1);
      blocks[static_cast<size_t>(b)].pop_back();
      stack.insert(stack.end(), popped.begin(), popped.end());
    }
    if (stopped) return;
    blocks.push_back({e});
    stack.push_back(static_cast<int>(blocks.size()) - 1);
    grow(e + 1);
    stack.pop_back();
    blocks.pop_back();
  }
};

}  // namespace

void for_each_noncrossing(int n, const std::function<bool(const SetPartition&)>& visit) {
  if (n < 1 || n > kMaxGroundSet)
    fail(ErrorCode::size, "noncrossing enumeration requires 1 <= n <= 18, got n=" + std::to_string(n));
  NcEnumerator e{n, visit, {}, {}};
  e.blocks.reserve(static_cast<size_t>(n));
  e.grow(1);
}

std::vector<SetPartition> enumerate_noncrossing(int n) {
  std::vector<SetPartition> out;
  for_each_noncrossing(n, [&](const SetPartition& p) {
    out.push_back(p);
    return true;
  });
  return out;
}

BigInt count_noncrossing(int n) {
  long long count = 0;
  for_each_noncrossing(n, [&](const SetPartition&) {
    ++count;
    return true;
  });
  return BigInt(count);
}

}  // namespace fsc
