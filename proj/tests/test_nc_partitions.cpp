#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "core/nc_partitions.hpp"
#include "oracles.hpp"

using fsc::SetPartition;

namespace {

SetPartition make(int n, std::vector<std::vector<int>> blocks) { return SetPartition{n, std::move(blocks)}; }

std::vector<int> label_map(const SetPartition& p) {
  std::vector<int> label(static_cast<size_t>(p.n), -1);
  for (size_t b = 0; b < p.blocks.size(); ++b)
    for (int e : p.blocks[b]) label[static_cast<size_t>(e) - 1] = static_cast<int>(b);
  return label;
}

}  // namespace

TEST_CASE("crossing detection on the defining examples") {
  CHECK_FALSE(fsc::is_noncrossing(make(4, {{1, 3}, {2, 4}})));
  CHECK(fsc::is_noncrossing(make(4, {{1, 4}, {2, 3}})));
  CHECK(fsc::is_noncrossing(make(3, {{1}, {2}, {3}})));
}

TEST_CASE("malformed partitions are rejected") {
  CHECK_THROWS_AS(fsc::is_noncrossing(make(3, {{1, 2}, {2, 3}})), fsc::Error);  // overlap
  CHECK_THROWS_AS(fsc::is_noncrossing(make(3, {{1, 3}})), fsc::Error);          // gap
  CHECK_THROWS_AS(fsc::is_noncrossing(make(3, {{1, 4}, {2, 3}})), fsc::Error);  // out of range
  CHECK_THROWS_AS(fsc::is_noncrossing(make(2, {{2, 1}})), fsc::Error);          // unsorted block
  CHECK_THROWS_AS(fsc::is_noncrossing(make(2, {{2}, {1}})), fsc::Error);        // block order
}

TEST_CASE("is_noncrossing agrees with the quadruple-scan definition") {
  for (int n = 1; n <= 7; ++n)
    for (const auto& p : oracle::all_partitions(n))
      CHECK(fsc::is_noncrossing(p) == !oracle::noncrossing_by_definition(p));
}

TEST_CASE("enumeration base cases") {
  const auto one = fsc::enumerate_noncrossing(1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].blocks == std::vector<std::vector<int>>{{1}});

  CHECK(fsc::enumerate_noncrossing(3).size() == 5);

  const auto four = fsc::enumerate_noncrossing(4);
  CHECK(four.size() == 14);
  for (const auto& p : four) CHECK(p.blocks != std::vector<std::vector<int>>{{1, 3}, {2, 4}});
}

TEST_CASE("enumeration matches filtered brute force up to n = 8") {
  for (int n = 1; n <= 8; ++n) {
    std::set<std::vector<int>> expected;
    for (const auto& p : oracle::all_partitions(n))
      if (!oracle::noncrossing_by_definition(p)) expected.insert(label_map(p));
    std::set<std::vector<int>> got;
    for (const auto& p : fsc::enumerate_noncrossing(n)) got.insert(label_map(p));
    CHECK(got == expected);
  }
}

TEST_CASE("catalan counts up to n = 11") {
  for (int n = 1; n <= 11; ++n) CHECK(fsc::count_noncrossing(n) == fsc::catalan_number(n));
}

TEST_CASE("emitted partitions are valid, noncrossing, lexicographically ordered") {
  for (int n : {5, 6, 7}) {
    std::vector<std::vector<int>> seen;
    for (const auto& p : fsc::enumerate_noncrossing(n)) {
      CHECK(fsc::is_noncrossing(p));
      int total = 0;
      for (int s : p.block_profile()) total += s;
      CHECK(total == n);
      seen.push_back(label_map(p));
    }
    for (size_t i = 1; i < seen.size(); ++i) CHECK(seen[i - 1] < seen[i]);
  }
}

TEST_CASE("block profiles") {
  CHECK(make(4, {{1, 4}, {2, 3}}).block_profile() == std::vector<int>{2, 2});
  CHECK(make(3, {{1, 2, 3}}).block_profile() == std::vector<int>{3});
  CHECK(make(4, {{1}, {2, 4}, {3}}).block_profile() == std::vector<int>{1, 1, 2});
}

TEST_CASE("enumeration bounds") {
  CHECK_THROWS_AS(fsc::enumerate_noncrossing(0), fsc::Error);
  CHECK_THROWS_AS(fsc::enumerate_noncrossing(19), fsc::Error);
  CHECK_THROWS_AS(fsc::for_each_noncrossing(-3, [](const SetPartition&) { return true; }), fsc::Error);
}

TEST_CASE("visitor early stop") {
  int count = 0;
  fsc::for_each_noncrossing(6, [&](const SetPartition&) { return ++count < 10; });
  CHECK(count == 10);
}
