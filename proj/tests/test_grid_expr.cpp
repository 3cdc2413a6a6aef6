#include <doctest.h>

#include <cmath>

#include "crossmax/expr.hpp"
#include "crossmax/grid.hpp"

using namespace crossmax;

TEST_CASE("grid indexing round-trips in 1D and 2D") {
  for (int dim : {1, 2}) {
    Grid g(dim, 8);
    CHECK(g.h == doctest::Approx(1.0 / 8));
    int interior = 0;
    for (int node = 0; node < g.node_count(); ++node) {
      int ix = g.ix_of(node), iy = g.iy_of(node);
      CHECK(g.node_index(ix, iy) == node);
      if (g.is_interior(node)) {
        int k = g.interior_index(node);
        CHECK(g.node_of_interior(k) == node);
        ++interior;
      } else {
        CHECK(g.interior_index(node) == -1);
      }
    }
    CHECK(interior == g.interior_count());
    CHECK(static_cast<int>(g.interior_nodes().size()) == interior);
  }
  CHECK(Grid(1, 8).interior_count() == 7);
  CHECK(Grid(2, 8).interior_count() == 49);
}

TEST_CASE("grid constructor validates arguments") {
  CHECK_THROWS_AS(Grid(3, 8), Error);
  CHECK_THROWS_AS(Grid(1, 3), Error);
}

TEST_CASE("boundary distance counts steps to the nearest boundary node") {
  Grid g(1, 8);
  CHECK(g.boundary_distance(g.node_index(0)) == 0);
  CHECK(g.boundary_distance(g.node_index(1)) == 1);
  CHECK(g.boundary_distance(g.node_index(4)) == 4);
  CHECK(g.boundary_distance(g.node_index(7)) == 1);
  Grid g2(2, 8);
  CHECK(g2.boundary_distance(g2.node_index(2, 5)) == 2);
  CHECK(g2.boundary_distance(g2.node_index(4, 4)) == 4);
}

TEST_CASE("gradient is second-order accurate including one-sided ends") {
  // f(x) = x^2 has exact second-order one-sided and centered differences.
  Grid g(1, 16);
  ScalarField f(g);
  for (int node = 0; node < g.node_count(); ++node) {
    double x = g.x_of(node);
    f[node] = x * x;
  }
  auto grad = gradient(f);
  for (int node = 0; node < g.node_count(); ++node)
    CHECK(grad[0][node] == doctest::Approx(2 * g.x_of(node)).epsilon(1e-12));
}

TEST_CASE("gradient converges at O(h^2) for smooth fields") {
  auto err = [](int n) {
    Grid g(1, n);
    ScalarField f(g);
    for (int node = 0; node < g.node_count(); ++node)
      f[node] = std::sin(3.0 * g.x_of(node));
    auto grad = gradient(f);
    double worst = 0.0;
    for (int node = 0; node < g.node_count(); ++node)
      worst = std::max(worst,
                       std::abs(grad[0][node] - 3.0 * std::cos(3.0 * g.x_of(node))));
    return worst;
  };
  double e1 = err(32), e2 = err(64);
  CHECK(e1 / e2 > 3.5);  // ~4 for O(h^2)
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("field arithmetic") {
  Grid g(1, 8);
  ScalarField a(g, 2.0), b(g, 3.0);
  CHECK((a + b).max_abs() == doctest::Approx(5.0));
  CHECK((a - b).min_interior() == doctest::Approx(-1.0));
  CHECK((a * b).max_abs() == doctest::Approx(6.0));
  CHECK((2.0 * a).max_abs() == doctest::Approx(4.0));
}

TEST_CASE("expression parser evaluates the documented grammar") {
  CHECK(parse_coeff("1+2*3").eval(0, 0) == doctest::Approx(7.0));
  CHECK(parse_coeff("(1+2)*3").eval(0, 0) == doctest::Approx(9.0));
  CHECK(parse_coeff("2^3^2").eval(0, 0) == doctest::Approx(512.0));  // right-assoc
  CHECK(parse_coeff("-x^2").eval(3, 0) == doctest::Approx(-9.0));
  CHECK(parse_coeff("sin(x)+cos(y)").eval(0.5, 0.25) ==
        doctest::Approx(std::sin(0.5) + std::cos(0.25)));
  CHECK(parse_coeff("sqrt(abs(0-4))").eval(0, 0) == doctest::Approx(2.0));
  CHECK(parse_coeff("exp(1)").eval(0, 0) == doctest::Approx(std::exp(1.0)));
  CHECK(parse_coeff("phi1").eval(0, 0, 0.7) == doctest::Approx(0.7));
  CHECK(parse_coeff("x/y").eval(1, 4) == doctest::Approx(0.25));
}

TEST_CASE("parse errors carry the byte offset") {
  try {
    parse_coeff("1+*2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
  }
  CHECK_THROWS_AS(parse_coeff("sin(x"), ParseError);
  CHECK_THROWS_AS(parse_coeff("bogus(x)"), ParseError);
  CHECK_THROWS_AS(parse_coeff(""), ParseError);
}

TEST_CASE("print/parse is structurally idempotent") {
  for (const char* src : {"1+2*3", "-x^2+sin(y)", "phi1*(x-y)/2", "sqrt(x)+exp(y)^2",
                          "abs(x-0.5)"}) {
    CoeffExpr e = parse_coeff(src);
    CoeffExpr round = parse_coeff(e.print());
    CHECK(e.structurally_equal(round));
    CHECK(e.print() == round.print());
  }
}

TEST_CASE("uses_phi1 detection and eval_field") {
  Grid g(1, 8);
  CHECK(parse_coeff("phi1+1").uses_phi1());
  CHECK(!parse_coeff("x+1").uses_phi1());

  ScalarField phi(g);
  for (int node = 0; node < g.node_count(); ++node)
    phi[node] = std::sin(M_PI * g.x_of(node));
  ScalarField f = eval_field(parse_coeff("2*phi1+x"), g, &phi);
  for (int node = 0; node < g.node_count(); ++node)
    CHECK(f[node] == doctest::Approx(2 * phi[node] + g.x_of(node)));

  // Non-finite evaluation is rejected.
  CHECK_THROWS_AS(eval_field(parse_coeff("1/(x-x)"), g), Error);
}
