#pragma once
// Built-in models: the coupled-tanks benchmark and two closed-form systems
// used as analytic oracles by the tests.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "dynamics.hpp"

namespace rcis {

// Two tanks in series, levels in cm. Pump 1 (voltage u1) feeds tank 1, which
// drains into tank 2; pump 2 (voltage u2) feeds tank 2 directly, and d is an
// unmetered outflow (negative) from tank 2.
struct TankParameters {
  double A = 4.425;     // tank cross-section, cm^2
  double a = 0.476;     // outlet cross-section, cm^2
  double K1 = 4.6;      // pump 1 gain, cm^3/(V s)
  double K2 = 2.0;      // pump 2 gain, cm^3/(V s)
  double u_min = 0.0;   // V
  double u_max = 22.0;  // V
  double d_min = -20.0; // cm^3/s
  double d_max = 0.0;   // cm^3/s
  double g = 980.0;     // cm/s^2

  double outflow_coefficient() const { return a * std::sqrt(2.0 * g) / A; }

  void validate() const {
    if (!(A > 0) || !(a > 0) || !(g > 0))
      throw std::invalid_argument("TankParameters: A, a, g must be positive");
    if (!(K1 > 0) || !(K2 > 0))
      throw std::invalid_argument("TankParameters: pump gains must be positive");
    if (!(u_min <= u_max) || !(d_min <= d_max))
      throw std::invalid_argument("TankParameters: empty control or disturbance range");
  }
};

inline SystemModel coupled_tanks(const TankParameters& P = {}) {
  P.validate();
  const double c = P.outflow_coefficient();
  SystemModel model;
  model.n = 2;
  model.m = 2;
  model.p = 1;
  model.name = "coupled_tanks";
  model.monotone_class = MonotoneClass::CSM;
  model.U = Box{{P.u_min, P.u_min}, {P.u_max, P.u_max}};
  model.D = Box{{P.d_min}, {P.d_max}};
  // an outflow disturbance cannot draw from an empty tank
  model.state_floor = Vec{0.0, 0.0};
  model.f = [P, c](const Vec& x, const Vec& u, const Vec& d) {
    // sqrt clamped at zero so integrator undershoot cannot leave the domain
    const double s1 = std::sqrt(std::max(x[0], 0.0));
    const double s2 = std::sqrt(std::max(x[1], 0.0));
    return Vec{-c * s1 + (P.K1 / P.A) * u[0],
               c * (s1 - s2) + (P.K2 / P.A) * u[1] + d[0] / P.A};
  };
  return model;
}

// level constraint: both tanks at most full, lower-closed
inline LowerSet tank_safety_set() {
  LowerSet X;
  X.ambient = Box{{0.0, 0.0}, {30.0, 20.0}};
  X.generators.points = {{30.0, 20.0}};
  return X;
}

// dx/dt = -x + u with u in [0,1]: flow in closed form, maximal invariant
// inside any down-set of [0,1]-dominating points is the whole set
inline SystemModel linear_decay() {
  SystemModel model;
  model.n = model.m = model.p = 1;
  model.name = "linear_decay";
  model.monotone_class = MonotoneClass::CSM;
  model.U = Box{{0.0}, {1.0}};
  model.D = Box{{0.0}, {0.0}};
  model.f = [](const Vec& x, const Vec& u, const Vec&) { return Vec{-x[0] + u[0]}; };
  return model;
}

// dx/dt = 1 with no control authority: every point eventually escapes any
// bounded set, so the maximal invariant is empty
inline SystemModel constant_drift() {
  SystemModel model;
  model.n = model.m = model.p = 1;
  model.name = "constant_drift";
  model.monotone_class = MonotoneClass::CSM;
  model.U = Box{{0.0}, {0.0}};
  model.D = Box{{0.0}, {0.0}};
  model.f = [](const Vec&, const Vec&, const Vec&) { return Vec{1.0}; };
  return model;
}

inline std::vector<SystemModel> analytic_oracles() {
  return {linear_decay(), constant_drift()};
}

}  // namespace rcis
