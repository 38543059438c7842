#include <doctest.h>

#include "aivf/error.hpp"
#include "aivf/linalg.hpp"
#include "aivf/rational.hpp"

using namespace aivf;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/5") == Rational(3, 5));
  CHECK(parse_rational(" 6/10 ") == Rational(3, 5));
  CHECK(parse_rational("-4/6") == Rational(-2, 3));
  CHECK(parse_rational("7") == 7);
  CHECK(parse_rational("0.6") == Rational(3, 5));
  CHECK(parse_rational(".25") == Rational(1, 4));
  CHECK(parse_rational("-1.25e-3") == Rational(-1, 800));
  CHECK(parse_rational("2E2") == 200);
  CHECK(parse_rational("0.1").get_den() == 10);
}

TEST_CASE("parse_rational rejects malformed text") {
  for (const char* bad : {"", "abc", "1/0", "1/", "/2", "1.2.3", ".", "1e", "0x10", "1/2/3"}) {
    CAPTURE(bad);
    try {
      parse_rational(bad);
      FAIL("accepted");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::Parse);
    }
  }
}

TEST_CASE("fraction and decimal rendering") {
  CHECK(to_fraction_string(Rational(703, 334)) == "703/334");
  CHECK(to_fraction_string(Rational(4)) == "4/1");
  CHECK(to_decimal_string(Rational(703, 334)) == "2.104790419162");
  CHECK(to_decimal_string(Rational(49, 25), 2) == "1.96");
  CHECK(to_decimal_string(Rational(1, 8), 2) == "0.13");
  CHECK(to_decimal_string(Rational(-1, 8), 2) == "-0.13");
  CHECK(to_decimal_string(Rational(-1, 1000), 2) == "0.00");
  CHECK(to_decimal_string(Rational(5, 2), 0) == "3");
  CHECK(to_decimal_string(Rational(1, 3), 3) == "0.333");
}

TEST_CASE("bit sizes") {
  CHECK(bit_length(Integer(0)) == 0);
  CHECK(bit_length(Integer(255)) == 8);
  CHECK(bit_length(Integer(-256)) == 9);
  CHECK(bit_size(Rational(3, 1024)) == 11);
}

TEST_CASE("solve_exact on small systems") {
  RationalMatrix a{{Rational(2), Rational(1)}, {Rational(1), Rational(3)}};
  RationalVector x = solve_exact(a, {Rational(3), Rational(5)});
  CHECK(x[0] == Rational(4, 5));
  CHECK(x[1] == Rational(7, 5));

  // Needs a row swap: zero in the first pivot position.
  RationalMatrix b{{Rational(0), Rational(1, 2)}, {Rational(1, 3), Rational(1)}};
  RationalVector y = solve_exact(b, {Rational(1), Rational(2)});
  CHECK(y[0] == 0);
  CHECK(y[1] == 2);

  CHECK(solve_exact({}, {}).empty());
}

TEST_CASE("solve_exact matches residuals on a 4x4 rational system") {
  RationalMatrix a(4, RationalVector(4));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Rational v(1, i + j + 1);  // Hilbert matrix
      v.canonicalize();
      a[i][j] = v;
    }
  }
  RationalVector b{Rational(1), Rational(-2), Rational(3, 7), Rational(0)};
  RationalVector x = solve_exact(a, b);
  for (int i = 0; i < 4; ++i) {
    Rational s = 0;
    for (int j = 0; j < 4; ++j) s += a[i][j] * x[j];
    CHECK(s == b[i]);
  }
}

TEST_CASE("solve_exact reports singular matrices") {
  RationalMatrix a{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  try {
    solve_exact(a, {Rational(1), Rational(2)});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::SingularSystem);
  }
}
