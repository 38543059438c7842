#include <doctest.h>

#include <sstream>

#include "aivf/error.hpp"
#include "aivf/source_model.hpp"

using namespace aivf;

namespace {
Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::Io;
}
}  // namespace

TEST_CASE("source is sorted by descending probability with tail sums") {
  SourceModel s({{"x", Rational(1, 10)}, {"y", Rational(3, 5)}, {"z", Rational(3, 10)}});
  REQUIRE(s.size() == 3);
  CHECK(s.symbols() == std::vector<std::string>{"y", "z", "x"});
  CHECK(s.prob(0) == Rational(3, 5));
  CHECK(s.tail_sum(0) == 1);
  CHECK(s.tail_sum(1) == Rational(2, 5));
  CHECK(s.tail_sum(2) == Rational(1, 10));
  CHECK(s.min_prob() == Rational(1, 10));
  CHECK(s.alpha(0) == Rational(3, 5));
  CHECK(s.alpha(1) == Rational(3, 4));
  CHECK(s.index_of("x") == 2);
  CHECK(s.bits() == 4);
}

TEST_CASE("equal probabilities keep their input order") {
  SourceModel s({{"b", Rational(1, 4)}, {"a", Rational(1, 4)}, {"c", Rational(1, 2)}});
  CHECK(s.symbols() == std::vector<std::string>{"c", "b", "a"});
}

TEST_CASE("invalid sources are rejected") {
  CHECK(code_of([] { SourceModel::from_probs({Rational(1)}); }) == Errc::TooSmall);
  CHECK(code_of([] { SourceModel::from_probs({Rational(1), Rational(0)}); }) == Errc::NonPositive);
  CHECK(code_of([] { SourceModel::from_probs({Rational(3, 2), Rational(-1, 2)}); }) == Errc::NonPositive);
  CHECK(code_of([] { SourceModel::from_probs({Rational(1, 2), Rational(1, 3)}); }) == Errc::SumNotOne);
  CHECK(code_of([] { SourceModel({{"a", Rational(1, 2)}, {"a", Rational(1, 2)}}); }) == Errc::Parse);
  SourceModel s = SourceModel::from_probs({Rational(1, 2), Rational(1, 2)});
  CHECK(code_of([&] { s.index_of("zz"); }) == Errc::UnknownSymbol);
  CHECK(code_of([&] { s.prob(2); }) == Errc::UnknownSymbol);
  CHECK(code_of([&] { s.alpha(1); }) == Errc::IndexOutOfRange);
}

TEST_CASE("non-reduced fractions are normalized") {
  SourceModel s = SourceModel::from_probs({Rational(6, 10), Rational(4, 10)});
  CHECK(s.prob(0).get_den() == 5);
}

TEST_CASE("text format with comments and decimals") {
  std::istringstream in("# three symbols\n\na 0.6\nb 3/10   # trailing comment\nc 1/10\n");
  SourceModel s = read_source(in);
  CHECK(s.size() == 3);
  CHECK(s.prob(s.index_of("b")) == Rational(3, 10));

  std::istringstream bad("a 0.5 0.5\n");
  CHECK(code_of([&] { read_source(bad); }) == Errc::Parse);
  std::istringstream bad2("a zz\nb 1\n");
  CHECK(code_of([&] { read_source(bad2); }) == Errc::Parse);
  CHECK(code_of([] { load_source("/nonexistent/file"); }) == Errc::Io);
}
