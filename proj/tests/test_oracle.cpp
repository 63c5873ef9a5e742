#include <cmath>
#include <numeric>
#include <random>

#include "brute_force.hpp"
#include "core/error.hpp"
#include "core/oracle.hpp"
#include "doctest.h"

using namespace rachload;

namespace {

double mass(const PatternDistribution& d) {
  double s = 0.0;
  for (const auto& [p, v] : d) s += v;
  return s;
}

std::string swap_classes(std::string s) {
  for (char& c : s) c = c == 'h' ? 'l' : c == 'l' ? 'h' : c;
  return s;
}

}  // namespace

TEST_CASE("single RB, single H-UE") {
  const auto d = exhaustive_pattern_distribution({1, 0}, SelectionProfile::uniform(1));
  REQUIRE(d.size() == 1);
  CHECK(d.begin()->first == parse_pattern("h"));
  CHECK(d.begin()->second == 1.0);
}

TEST_CASE("two H-UEs over two uniform RBs") {
  const auto d = exhaustive_pattern_distribution({2, 0}, SelectionProfile::uniform(2));
  CHECK(d.size() == 3);
  CHECK(d.at(parse_pattern("hh")) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d.at(parse_pattern("xe")) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(d.at(parse_pattern("ex")) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("oracle_pattern_probability") {
  CHECK(oracle_pattern_probability(parse_pattern("hle"), {1, 1}, SelectionProfile::uniform(3)) ==
        doctest::Approx(1.0 / 9).epsilon(1e-15));
  CHECK(oracle_pattern_probability(parse_pattern("ee"), {1, 0}, SelectionProfile::uniform(2)) == 0.0);
  CHECK(oracle_pattern_probability(parse_pattern("xx"), {2, 2}, SelectionProfile::uniform(2)) ==
        doctest::Approx(0.375).epsilon(1e-15));
  CHECK_THROWS_AS(oracle_pattern_probability(parse_pattern("xx"), {2, 2}, SelectionProfile::uniform(3)), Error);
}

TEST_CASE("budget guard") {
  CHECK(oracle_enumeration_size({2, 0}, 2) == 3);
  CHECK(oracle_enumeration_size({2, 3}, 3) == 6 * 10);
  try {
    exhaustive_pattern_distribution({30, 30}, SelectionProfile::uniform(8), 1000);
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
}

TEST_CASE("oracle agrees with labelled enumeration and sums to one") {
  std::mt19937 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng() % 3;
    std::vector<double> ph(m), pl(m);
    for (auto* v : {&ph, &pl}) {
      for (auto& x : *v) x = u(rng) < 0.2 ? 0.0 : u(rng);
      (*v)[rng() % m] += 0.5;
      const double s = std::accumulate(v->begin(), v->end(), 0.0);
      for (auto& x : *v) x /= s;
    }
    const int nh = static_cast<int>(rng() % 4);
    const int nl = static_cast<int>(rng() % 4);
    const auto d = exhaustive_pattern_distribution({nh, nl}, SelectionProfile(ph, pl));
    CHECK(std::abs(mass(d) - 1.0) <= 1e-12);
    const auto truth = rachload::testing::labelled_distribution(nh, nl, ph, pl);
    for (const auto& [pattern, v] : truth) {
      const auto it = d.find(parse_pattern(pattern));
      const double got = it == d.end() ? 0.0 : it->second;
      CHECK(std::abs(got - v) <= 1e-12);
    }

    // Symmetry of the oracle on its own.
    const auto swapped = exhaustive_pattern_distribution({nl, nh}, SelectionProfile(pl, ph));
    for (const auto& [pattern, v] : d) {
      const auto it = swapped.find(parse_pattern(swap_classes(format_pattern(pattern))));
      REQUIRE(it != swapped.end());
      CHECK(std::abs(it->second - v) <= 1e-12);
    }
  }
}

TEST_CASE("oracle is permutation invariant for uniform profiles") {
  const auto d = exhaustive_pattern_distribution({2, 3}, SelectionProfile::uniform(4));
  for (const auto& [pattern, v] : d) {
    std::string s = format_pattern(pattern);
    std::reverse(s.begin(), s.end());
    CHECK(std::abs(d.at(parse_pattern(s)) - v) <= 1e-14);
    std::rotate(s.begin(), s.begin() + 1, s.end());
    CHECK(std::abs(d.at(parse_pattern(s)) - v) <= 1e-14);
  }
}
