#include <random>
#include <string>

#include "core/error.hpp"
#include "core/model.hpp"
#include "doctest.h"

using namespace rachload;

TEST_CASE("index sets follow the M = 8 worked pattern") {
  // l h x e x h e h, zero-based
  const auto sets = derive_index_sets(parse_pattern("lhxexheh"));
  CHECK(sets.high == std::vector<std::size_t>{1, 5, 7});
  CHECK(sets.low == std::vector<std::size_t>{0});
  CHECK(sets.empty == std::vector<std::size_t>{3, 6});
  CHECK(sets.collision == std::vector<std::size_t>{2, 4});
}

TEST_CASE("index sets of degenerate patterns") {
  auto sets = derive_index_sets(parse_pattern("eee"));
  CHECK(sets.high.empty());
  CHECK(sets.low.empty());
  CHECK(sets.collision.empty());
  CHECK(sets.empty == std::vector<std::size_t>{0, 1, 2});

  sets = derive_index_sets(parse_pattern("x"));
  CHECK(sets.collision == std::vector<std::size_t>{0});
  CHECK(sets.rb_count() == 1);
}

TEST_CASE("classify_occupancy") {
  CHECK(format_pattern(classify_occupancy(std::vector{1, 0}, std::vector{0, 0})) == "he");
  CHECK(format_pattern(classify_occupancy(std::vector{1, 0}, std::vector{1, 0})) == "xe");
  CHECK(format_pattern(classify_occupancy(std::vector{0, 1, 2}, std::vector{1, 0, 0})) == "lhx");
  CHECK_THROWS_AS(classify_occupancy(std::vector{1, 0}, std::vector{1}), Error);
  CHECK_THROWS_AS(classify_occupancy(std::vector{-1}, std::vector{1}), Error);
}

TEST_CASE("feasibility_check") {
  const auto hle = derive_index_sets(parse_pattern("hle"));
  CHECK(feasibility_check(hle, {1, 1}));
  CHECK_FALSE(feasibility_check(hle, {2, 1}));
  CHECK_FALSE(feasibility_check(hle, {0, 1}));
  const auto xe = derive_index_sets(parse_pattern("xe"));
  CHECK_FALSE(feasibility_check(xe, {1, 0}));
  CHECK(feasibility_check(xe, {1, 1}));
  CHECK(feasibility_check(xe, {0, 5}));
}

TEST_CASE("parse and format") {
  CHECK(parse_pattern("hlex").events().size() == 4);
  CHECK(parse_pattern("hlex")[3] == RbEvent::kCollision);
  CHECK(format_pattern(parse_pattern("eee")) == "eee");
  try {
    parse_pattern("hq");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidArgument);
    CHECK(std::string(e.what()).find("position 1") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_pattern(""), Error);
}

TEST_CASE("parse/format round-trip on random strings") {
  std::mt19937 rng(7);
  const std::string alphabet = "hlex";
  for (int trial = 0; trial < 500; ++trial) {
    std::string s(1 + rng() % 12, 'e');
    for (char& c : s) c = alphabet[rng() % 4];
    const auto p = parse_pattern(s);
    CHECK(format_pattern(p) == s);
    CHECK(parse_pattern(format_pattern(p)) == p);
    const auto sets = derive_index_sets(p);
    CHECK(sets.rb_count() == s.size());
  }
}

TEST_CASE("any occupancy is feasible under its own load") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t m = 1 + rng() % 6;
    const int nh = static_cast<int>(rng() % 6);
    const int nl = static_cast<int>(rng() % 6);
    std::vector<int> high(m, 0), low(m, 0);
    for (int u = 0; u < nh; ++u) ++high[rng() % m];
    for (int u = 0; u < nl; ++u) ++low[rng() % m];
    CHECK(feasibility_check(derive_index_sets(classify_occupancy(high, low)), {nh, nl}));
  }
}

TEST_CASE("selection profile validation") {
  CHECK_NOTHROW(SelectionProfile({0.5, 0.5}, {1.0, 0.0}));
  CHECK_THROWS_AS(SelectionProfile({0.5, 0.6}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(SelectionProfile({0.5, 0.5}, {1.0}), Error);
  CHECK_THROWS_AS(SelectionProfile({1.5, -0.5}, {0.5, 0.5}), Error);
  CHECK_THROWS_AS(SelectionProfile({}, {}), Error);
  CHECK(SelectionProfile::uniform(4).p_low()[3] == doctest::Approx(0.25));
}

TEST_CASE("observation sets") {
  CHECK_THROWS_AS(ObservationSet({}), Error);
  CHECK_THROWS_AS(ObservationSet({parse_pattern("he"), parse_pattern("hee")}), Error);
  const auto obs = parse_observations("# slots\nhe\n\n  eh \r\n");
  CHECK(obs.size() == 2);
  CHECK(format_observations(obs) == "he\neh\n");
  CHECK_THROWS_AS(parse_observations("he\nhz\n"), Error);
  CHECK_THROWS_AS(parse_observations("# nothing\n"), Error);
}
