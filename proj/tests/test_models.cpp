#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>

#include <rcis/models.hpp>
#include <rcis/order.hpp>

#include "support/oracles.hpp"

using rcis::Box;
using rcis::TankParameters;
using rcis::Vec;

TEST_CASE("tank parameter validation", "[models]") {
  TankParameters P;
  SECTION("defaults are valid") { CHECK_NOTHROW(P.validate()); }
  SECTION("geometry must be positive") {
    P.A = 0.0;
    CHECK_THROWS_AS(rcis::coupled_tanks(P), std::invalid_argument);
    P = {};
    P.g = -1.0;
    CHECK_THROWS_AS(rcis::coupled_tanks(P), std::invalid_argument);
  }
  SECTION("pump gains must be positive") {
    P.K1 = 0.0;
    CHECK_THROWS_AS(rcis::coupled_tanks(P), std::invalid_argument);
  }
  SECTION("ranges must be nonempty") {
    P.u_min = 5.0;
    P.u_max = 1.0;
    CHECK_THROWS_AS(rcis::coupled_tanks(P), std::invalid_argument);
    P = {};
    P.d_min = 1.0;
    P.d_max = 0.0;
    CHECK_THROWS_AS(rcis::coupled_tanks(P), std::invalid_argument);
  }
}

TEST_CASE("tank vector field values", "[models]") {
  rcis::SystemModel tanks = rcis::coupled_tanks();
  TankParameters P;
  SECTION("outflow coefficient") {
    CHECK(P.outflow_coefficient() == Catch::Approx(4.7623544242626163).epsilon(1e-14));
  }
  SECTION("field at the full-tanks corner under closed pumps") {
    Vec f = tanks.f({30.0, 20.0}, {0.0, 0.0}, {0.0});
    CHECK(f[0] == Catch::Approx(-26.084489450031633).margin(1e-12));
    CHECK(f[1] == Catch::Approx(4.786592998835463).margin(1e-12));
  }
  SECTION("field at an interior point with mixed inputs") {
    Vec f = tanks.f({29.0, 19.0}, {2.0, 3.0}, {-5.0});
    CHECK(f[0] == Catch::Approx(-23.566967399442603).margin(1e-12));
    CHECK(f[1] == Catch::Approx(5.1134304765207412).margin(1e-12));
  }
  SECTION("the clamped square root keeps the field finite below empty") {
    Vec f = tanks.f({-1.0, -1.0}, {0.0, 0.0}, {0.0});
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
  }
  SECTION("model shape") {
    CHECK(tanks.n == 2);
    CHECK(tanks.m == 2);
    CHECK(tanks.p == 1);
    CHECK(tanks.monotone_class == rcis::MonotoneClass::CSM);
    REQUIRE(tanks.state_floor.has_value());
    CHECK(*tanks.state_floor == Vec{0.0, 0.0});
    CHECK(tanks.U.lower == Vec{0.0, 0.0});
    CHECK(tanks.U.upper == Vec{22.0, 22.0});
    CHECK(tanks.D.lower == Vec{-20.0});
    CHECK(tanks.D.upper == Vec{0.0});
  }
}

TEST_CASE("tank safety set", "[models]") {
  rcis::LowerSet X = rcis::tank_safety_set();
  CHECK(X.ambient.lower == Vec{0.0, 0.0});
  CHECK(X.ambient.upper == Vec{30.0, 20.0});
  REQUIRE(X.generators.points.size() == 1);
  CHECK(X.generators.points[0] == Vec{30.0, 20.0});
  CHECK(rcis::member_lower(X, {30.0, 20.0}));
  CHECK(rcis::member_lower(X, {15.0, 10.0}));
  CHECK(rcis::member_lower(X, {0.0, 0.0}));
  CHECK_FALSE(rcis::member_lower(X, {30.5, 20.0}));
  CHECK_FALSE(rcis::member_lower(X, {30.0, 20.5}));
}

TEST_CASE("closed-form oracle models", "[models]") {
  SECTION("linear decay") {
    rcis::SystemModel m = rcis::linear_decay();
    CHECK(m.n == 1);
    CHECK(m.m == 1);
    CHECK(m.monotone_class == rcis::MonotoneClass::CSM);
    CHECK(m.f({2.0}, {0.5}, {0.0}) == Vec{-1.5});
  }
  SECTION("constant drift") {
    rcis::SystemModel m = rcis::constant_drift();
    CHECK(m.f({7.0}, {0.0}, {0.0}) == Vec{1.0});
    CHECK(m.monotone_class == rcis::MonotoneClass::CSM);
  }
  SECTION("the oracle list ships both") {
    CHECK(rcis::analytic_oracles().size() == 2);
  }
}

TEST_CASE("full-pump equilibrium of the tanks", "[models]") {
  TankParameters P;
  rcis::SystemModel tanks = rcis::coupled_tanks(P);
  rcis::Trajectory tr = rcis::simulate(tanks, {0.0, 0.0},
                                       rcis::constant_signal({P.u_max, P.u_max}),
                                       rcis::constant_signal({P.d_max}), 500.0, 0.01);
  const Vec& end = tr.states.back();
  SECTION("endpoint matches an independent integration") {
    CHECK(end[0] == Catch::Approx(23.06168565865687).margin(1e-9));
    CHECK(end[1] == Catch::Approx(47.474812253831587).margin(1e-9));
  }
  SECTION("endpoint agrees with the closed-form balance point") {
    const double c = P.outflow_coefficient();
    const double s1 = (P.K1 / P.A) * P.u_max / c;        // sqrt(x1*) at inflow = outflow
    const double s2 = s1 + (P.K2 / P.A) * P.u_max / c;   // tank 2 balance on top of it
    CHECK(end[0] == Catch::Approx(s1 * s1).margin(1e-6));
    CHECK(end[1] == Catch::Approx(s2 * s2).margin(1e-6));
  }
  SECTION("the worst-case filling stays bounded well under blowup") {
    double peak = 0.0;
    for (const Vec& x : tr.states)
      peak = std::max(peak, std::max(x[0], x[1]));
    CHECK(peak < 50.0);
    CHECK(peak >= end[1]);
  }
}
