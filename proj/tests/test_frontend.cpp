#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "crjet/parser.hpp"
#include "crjet/serialize.hpp"
#include "support.hpp"

using namespace crjet;
using namespace crjet::testing;

namespace {

constexpr int kOrder = 8;

Hypersurface surface_of(const std::string& text, int n) {
  SurfaceFile file;
  file.n = n;
  file.expr = parse_expression(text);
  return build_surface(file, kOrder);
}

}  // namespace

TEST_SUITE("expression parsing") {
  TEST_CASE("the hyperquadric expression lowers to the canonical rho") {
    Hypersurface m = surface_of("Im(w) - z*conj(z)", 1);
    CHECK(m.rho() == quadric(1, kOrder).rho());
  }

  TEST_CASE("the quartic expression") {
    Hypersurface m = surface_of("Im(w) - z*conj(z) - (z*conj(z))^2", 1);
    CHECK(m.rho() == quartic_example(kOrder).rho());
  }

  TEST_CASE("Re and Im expand as half sums") {
    Hypersurface m = surface_of("Im(w) - z*conj(z) - Re(z^2)", 1);
    RingPtr ring = surface_ring(1, kOrder);
    Series z = Series::variable(ring, 0), zb = Series::variable(ring, 2);
    Series expected = quadric(1, kOrder).rho() +
                      CRat(make_rational(1, 2)) * (z * z + zb * zb);
    CHECK(m.rho() == expected);
  }

  TEST_CASE("fractional exponents are rejected") {
    try {
      parse_expression("z^(1/2)");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("non-integer exponent") != std::string::npos);
    }
  }

  TEST_CASE("negative exponents are rejected") {
    CHECK_THROWS_AS(parse_expression("z^(-2)"), ParseError);
  }

  TEST_CASE("syntax errors carry positions") {
    try {
      parse_expression("z*:w");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 3);
    }
  }

  TEST_CASE("unknown identifiers are rejected at lowering") {
    ExprPtr e = parse_expression("Im(w) - q*conj(q)");
    CHECK_THROWS_AS(lower_expression(*e, 1, kOrder), ParseError);
    // z3 is out of range for n = 2.
    ExprPtr f = parse_expression("Im(w) - z3*conj(z3)");
    CHECK_THROWS_AS(lower_expression(*f, 2, kOrder), ParseError);
  }

  TEST_CASE("pretty printing is idempotent over a corpus") {
    const char* corpus[] = {
        "Im(w) - z*conj(z)",
        "Im(w) - z*conj(z) - (z*conj(z))^2",
        "Im(w) - z1*conj(z1) - z2*conj(z2) - 1/3*(z1*conj(z2) + conj(z1)*z2)",
        "-z + conj(w*z)^3 - Re(w)*Im(z^2)",
        "1/2 + 3/4*i - (z + w)*(z - w)",
        "-(z + w) - 2*i*conj(z)^5",
    };
    for (const char* text : corpus) {
      ExprPtr first = parse_expression(text);
      std::string printed = pretty_print(*first);
      ExprPtr second = parse_expression(printed);
      CHECK(pretty_print(*second) == printed);
    }
  }

  TEST_CASE("lowered graph expressions satisfy the reality invariant") {
    const char* corpus[] = {
        "Im(w) - z*conj(z)",
        "Im(w) - z*conj(z) - Re(z^3)",
        "Im(w) - z*conj(z) - Re(w)*z*conj(z)",
        "Im(w) - z*conj(z) - Im(z^2*conj(z))",
    };
    for (const char* text : corpus) {
      Hypersurface m = surface_of(text, 1);
      CHECK(conjugate_swap(m.rho()) == m.rho());
    }
  }

  TEST_CASE("surface files parse headers and multi-line expressions") {
    SurfaceFile file = parse_surface_file(
        "# a comment\n\nn = 2\nIm(w) - z1*conj(z1)\n  - z2*conj(z2)\n");
    CHECK(file.n == 2);
    Hypersurface m = build_surface(file, kOrder);
    CHECK(m.rho() == quadric(2, kOrder).rho());
    CHECK_THROWS_AS(parse_surface_file("Im(w) - z*conj(z)\n"), ParseError);
    CHECK_THROWS_AS(parse_surface_file("n = 1\n"), ParseError);
  }
}

TEST_SUITE("structured serialization") {
  TEST_CASE("series documents re-ingest to identical coefficient maps") {
    std::mt19937_64 rng(51);
    for (int iter = 0; iter < 20; ++iter) {
      RingPtr ring = surface_ring(1 + iter % 3, 6);
      Series s = random_series(ring, rng, 25);
      if (iter % 2 == 0) s.set_trusted(4);
      Json doc = series_to_json(s);
      Series back = series_from_json(doc);
      CHECK(back == s);
      CHECK(back.trusted() == s.trusted());
      CHECK(back.ring()->names() == s.ring()->names());
    }
  }

  TEST_CASE("documents record one monomial per term with fraction strings") {
    RingPtr ring = z_ring(1, kOrder);
    Series s = CRat(make_rational(3, 4), make_rational(-1, 2)) *
               Series::variable(ring, 0).pow(2);
    Json doc = series_to_json(s);
    REQUIRE(doc.at("terms").size() == 1);
    CHECK(doc.at("terms")[0].at("exponents") == Json::array({2}));
    CHECK(doc.at("terms")[0].at("re") == "3/4");
    CHECK(doc.at("terms")[0].at("im") == "-1/2");
  }

  TEST_CASE("rational strings round trip") {
    CHECK(rational_from_string("12/8") == make_rational(3, 2));
    CHECK(rational_to_string(make_rational(-10, 4)) == "-5/2");
    CHECK_THROWS_AS(rational_from_string("1.5"), ParseError);
    CHECK_THROWS_AS(rational_from_string("1/0"), ParseError);
  }
}
