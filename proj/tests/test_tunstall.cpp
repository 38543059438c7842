#include <doctest.h>

#include "aivf/error.hpp"
#include "aivf/tunstall.hpp"
#include "support/oracles.hpp"

using namespace aivf;

TEST_CASE("two expansions on the three-symbol source") {
  SourceModel src = oracle::three_symbol_source();
  TunstallCode code = build_tunstall(src, 2);
  REQUIRE(code.dict_size() == 7);
  const std::vector<std::vector<Symbol>> words{{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1}, {0, 2}, {1}, {2}};
  const std::vector<Rational> probs{Rational(27, 125), Rational(27, 250), Rational(9, 250), Rational(9, 50),
                                    Rational(3, 50),   Rational(3, 10),   Rational(1, 10)};
  for (std::size_t i = 0; i < 7; ++i) {
    CAPTURE(i);
    CHECK(code.dictionary[i].index == static_cast<int>(i + 1));
    CHECK(code.dictionary[i].word == words[i]);
    CHECK(code.dictionary[i].occurrence_prob == probs[i]);
    CHECK(code.dictionary[i].target == 0);
  }
  CHECK(code.expected_length == Rational(49, 25));
  CHECK(validate_tree(code.tree, src).empty());
  CHECK(oracle::conservation_failures(code.tree, src).empty());
}

TEST_CASE("greedy invariant along the expansion trace") {
  SourceModel src = SourceModel::from_probs({Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 8)});
  for (std::size_t k = 0; k <= 12; ++k) {
    TunstallCode code = build_tunstall(src, k);
    CHECK(code.dict_size() == src.size() + k * (src.size() - 1));
    CHECK(code.expansions.size() == k);
    for (std::size_t i = 1; i < code.expansions.size(); ++i) CHECK(code.expansions[i].second <= code.expansions[i - 1].second);
    for (const auto& e : code.dictionary) {
      for (const auto& x : code.expansions) CHECK(e.occurrence_prob <= x.second);
    }
    CHECK(oracle::conservation_failures(code.tree, src).empty());
    CHECK(code.expected_length == expected_parse_length(code.tree, src));
  }
}

TEST_CASE("zero expansions gives the single-symbol dictionary") {
  SourceModel src = oracle::three_symbol_source();
  TunstallCode code = build_tunstall(src, 0);
  CHECK(code.dict_size() == 3);
  CHECK(code.expected_length == 1);
}

TEST_CASE("dictionary size to expansion count") {
  CHECK(tunstall_expansions_for(3, 7) == 2);
  CHECK(tunstall_expansions_for(2, 9) == 7);
  CHECK(tunstall_expansions_for(4, 4) == 0);
  for (std::size_t bad : {2u, 6u, 8u}) {
    try {
      tunstall_expansions_for(3, bad);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::Parse);
    }
  }
}

TEST_CASE("coding rate decimal") {
  CHECK(coding_rate(Rational(49, 25), 7).decimal == "1.432323939825");
  CHECK(coding_rate(Rational(703, 334), 7).decimal == "1.333793092414");
  CHECK(coding_rate(Rational(1), 2).decimal == "1.000000000000");
}
