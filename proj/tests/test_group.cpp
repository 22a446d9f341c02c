#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "h3flow/domain.hpp"
#include "h3flow/errors.hpp"
#include "h3flow/group.hpp"
#include "h3flow/scenarios.hpp"

using namespace h3flow;

namespace {

GroupPresentation shift_group() { return GroupPresentation::make({MoebiusMap::translation(2.0)}); }

// 1 + sum_{l=1..N} 2k (2k-1)^(l-1)
std::size_t free_count(std::size_t k, int N) {
  std::size_t total = 1, level = 2 * k;
  for (int l = 1; l <= N; ++l) {
    total += level;
    level *= 2 * k - 1;
  }
  return total;
}

}  // namespace

TEST_CASE("words") {
  const GroupPresentation G = example3::group();
  const GroupWord w = parse_word(G, "T3^-1 T2");
  REQUIRE(w.length() == 2);
  CHECK(w.letters[0] == Letter{2, -1});
  CHECK(to_string(G, w) == "T3^-1 T2");
  CHECK(parse_word(G, "I").empty());
  CHECK(to_string(G, GroupWord{}) == "I");
  CHECK_THROWS_AS(parse_word(G, "T9"), ConfigError);
  CHECK(concat(w, inverse(w)).empty());
  CHECK(GroupWord{{{0, 1}}} < GroupWord{{{0, -1}}});
  CHECK(GroupWord{{{4, -1}}} < GroupWord{{{0, 1}, {0, 1}}});
  CHECK_FALSE((GroupWord{{{0, 1}, {0, -1}}}).is_reduced());
}

TEST_CASE("presentation validation") {
  CHECK_THROWS_AS(GroupPresentation::make({MoebiusMap{1.0, 1.0, 1.0, 1.0}}), ConfigError);
  CHECK_THROWS_AS(GroupPresentation::make({MoebiusMap::identity(), MoebiusMap::identity()},
                                          {"a", "A", "a", "B"}),
                  ConfigError);
}

TEST_CASE("ball examples") {
  const WordBall b0 = enumerate_ball(example3::group(), 0);
  REQUIRE(b0.size() == 1);
  CHECK(b0.entries[0].word.empty());

  const GroupPresentation G = shift_group();
  const WordBall b2 = enumerate_ball(G, 2);
  REQUIRE(b2.size() == 5);
  const char* expect[] = {"I", "T1", "T1^-1", "T1 T1", "T1^-1 T1^-1"};
  for (std::size_t i = 0; i < 5; ++i) CHECK(to_string(G, b2.entries[i].word) == expect[i]);
}

TEST_CASE("duplicate elements merge into the shorter word") {
  const GroupPresentation G = example3::group();
  const WordBall ball = enumerate_ball(G, 2);
  const MoebiusMap T2_T5inv = word_matrix(G, parse_word(G, "T2 T5^-1"));
  CHECK(equal_up_to_scalar(T2_T5inv, G.generators[0]));
  const std::ptrdiff_t at = ball.find(T2_T5inv);
  REQUIRE(at >= 0);
  CHECK(to_string(G, ball.entries[static_cast<std::size_t>(at)].word) == "T1");
  CHECK(ball.size() < free_count(5, 2));
}

TEST_CASE("ball invariants") {
  const GroupPresentation G = example3::group();
  std::size_t previous = 0;
  for (int N = 0; N <= 4; ++N) {
    const WordBall ball = enumerate_ball(G, N);
    CHECK(ball.size() >= previous);
    CHECK(ball.size() <= free_count(5, N));
    previous = ball.size();

    std::set<std::string> words;
    for (const BallEntry& e : ball.entries) words.insert(to_string(G, e.word));
    for (std::size_t i = 0; i < ball.size(); ++i) {
      const BallEntry& e = ball.entries[i];
      CHECK(e.word.is_reduced());
      if (i > 0) CHECK(ball.entries[i - 1].word < e.word);
      // prefix closure
      if (!e.word.empty()) {
        GroupWord prefix = e.word;
        prefix.letters.pop_back();
        CHECK(words.count(to_string(G, prefix)) == 1);
      }
      // stored matrix is the product of its letters
      const MoebiusMap W = word_matrix(G, e.word);
      const double scale = std::abs(W.a) + std::abs(W.b) + std::abs(W.c) + std::abs(W.d);
      CHECK(std::abs(W.a - e.matrix.a) + std::abs(W.b - e.matrix.b) + std::abs(W.c - e.matrix.c) +
                std::abs(W.d - e.matrix.d) <=
            1e-12 * scale);
    }
  }
  // Reference sizes for the worked-example group.
  CHECK(enumerate_ball(G, 1).size() == 11);
  CHECK(enumerate_ball(G, 2).size() == 91);
  CHECK(enumerate_ball(G, 3).size() == 509);
  CHECK(enumerate_ball(G, 4).size() == 2433);
}

TEST_CASE("pairwise distinct elements") {
  const WordBall ball = enumerate_ball(example3::group(), 3);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    for (std::size_t j = i + 1; j < ball.size(); ++j) {
      CHECK_FALSE(equal_up_to_scalar(ball.entries[i].matrix, ball.entries[j].matrix));
    }
  }
}

TEST_CASE("free group count without coincidences") {
  // Two hyperbolic maps with unrelated axes generate a free group.
  const GroupPresentation G = GroupPresentation::make(
      {MoebiusMap{2.0, 1.0, 1.0, 1.0}, MoebiusMap{1.0, Complex{0.0, 1.0}, Complex{0.0, -1.0}, 2.0}});
  for (int N = 0; N <= 5; ++N) CHECK(enumerate_ball(G, N).size() == free_count(2, N));
}

TEST_CASE("parallel and serial enumeration agree") {
  const GroupPresentation G = example3::group();
  const WordBall a = enumerate_ball(G, 5);
  const WordBall b = enumerate_ball_serial(G, 5);
  REQUIRE(a.size() == b.size());
  CHECK(a.size() == 10687);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.entries[i].word == b.entries[i].word);
    CHECK(a.entries[i].matrix.a == b.entries[i].matrix.a);
    CHECK(a.entries[i].matrix.b == b.entries[i].matrix.b);
    CHECK(a.entries[i].matrix.d == b.entries[i].matrix.d);
  }
}

TEST_CASE("side pairing validation") {
  SUBCASE("cube torus") {
    const ValidationReport r = validate_side_pairing(cube_torus(0.0, 1.0));
    CHECK(r.ok());
    CHECK(r.sides_checked == 6);
  }
  SUBCASE("partner stores the same map") {
    FundamentalDomain D = cube_torus(0.0, 1.0);
    D.sides[1].map = D.sides[0].map;
    const ValidationReport r = validate_side_pairing(D);
    CHECK_FALSE(r.ok());
    bool condition2 = false;
    for (const Violation& v : r.violations) condition2 |= v.condition == 2;
    CHECK(condition2);
  }
  SUBCASE("broken bijection") {
    FundamentalDomain D = cube_torus(0.0, 1.0);
    D.sides[0].partner = "y-";
    const ValidationReport r = validate_side_pairing(D);
    bool condition3 = false;
    for (const Violation& v : r.violations) condition3 |= v.condition == 3;
    CHECK(condition3);
  }
  SUBCASE("worked-example prism") {
    const FundamentalDomain D = example3::domain();
    const ValidationReport r = validate_side_pairing(D, 100, 5);
    CHECK(r.ok());
    CHECK(r.points_checked >= 300);
    // pairing maps are the group elements named by their words
    const GroupPresentation G = example3::group();
    for (const Side& s : D.sides) {
      CHECK(equal_up_to_scalar(std::get<MoebiusMap>(s.map), word_matrix(G, parse_word(G, s.word))));
    }
  }
  SUBCASE("slab") { CHECK(validate_side_pairing(translation_slab(0.0, 2.0)).ok()); }
}

TEST_CASE("locate") {
  const GroupPresentation G = shift_group();
  const FundamentalDomain D = translation_slab(0.0, 2.0);
  const HPoint q{0.7, 0.3, 1.2};
  const Located here = locate(q, D, enumerate_ball(G, 1));
  CHECK(here.word.empty());
  CHECK(here.base == q);

  const Located one = locate({q.x + 2.0, q.y, q.r}, D, enumerate_ball(G, 1));
  CHECK(to_string(G, one.word) == "T1");
  CHECK(std::abs(one.base.x - q.x) < 1e-12);

  const HPoint far{q.x + 4.0, q.y, q.r};
  CHECK_THROWS_AS(locate(far, D, enumerate_ball(G, 1)), NotFoundError);
  const Located two = locate(far, D, enumerate_ball(G, 2));
  CHECK(to_string(G, two.word) == "T1 T1");
  CHECK(std::abs(two.base.x - q.x) < 1e-12);
  CHECK(std::abs(two.base.r - q.r) < 1e-12);
}
