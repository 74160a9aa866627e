#pragma once
// Continuous-time model container, piecewise-constant control/disturbance
// signals with periodic extension, and a fixed-step RK4 integrator whose
// signals are frozen at each step's left endpoint.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "order.hpp"
#include "sampling.hpp"

namespace rcis {

enum class MonotoneClass { Unknown, None, SM, CSM };

inline const char* to_string(MonotoneClass c) {
  switch (c) {
    case MonotoneClass::None: return "none";
    case MonotoneClass::SM: return "SM";
    case MonotoneClass::CSM: return "CSM";
    default: return "unknown";
  }
}

struct SystemModel {
  std::size_t n = 0, m = 0, p = 0;  // state, control, disturbance dimensions
  std::function<Vec(const Vec&, const Vec&, const Vec&)> f;  // f(x, u, d)
  Box U, D;                          // admissible control/disturbance values
  std::optional<double> lipschitz_x; // known Lipschitz constant in x, if any
  MonotoneClass monotone_class = MonotoneClass::Unknown;  // trusted annotation
  // physical lower bound of the state space; integration projects each
  // committed step onto it (e.g. a tank cannot drain below empty). The
  // projection is componentwise max, hence order preserving.
  std::optional<Vec> state_floor;
  std::string name;
};

// right-continuous step function; segment i is active on [times[i], times[i+1]),
// the last segment extends to +infinity
struct PiecewiseSignal {
  std::vector<double> times;
  std::vector<Vec> values;
};

struct ControlSignal {
  enum class Kind { Constant, Piecewise, Periodic };
  Kind kind = Kind::Constant;
  Vec constant;
  PiecewiseSignal piecewise;     // also the base of a periodic extension
  double period_T = 0;           // periodic: base is taken on [0, period_T]
  double period_delta = 0;       // periodic: repeated tail length
  double offset = 0;             // evaluation time shift (replays from mid-orbit)
};

inline ControlSignal constant_signal(Vec u) {
  ControlSignal s;
  s.kind = ControlSignal::Kind::Constant;
  s.constant = std::move(u);
  return s;
}

inline ControlSignal piecewise_signal(std::vector<double> times, std::vector<Vec> values) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("piecewise_signal: need equally many times and values");
  if (times[0] != 0.0)
    throw std::invalid_argument("piecewise_signal: first segment must start at 0");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("piecewise_signal: times must increase");
  for (std::size_t i = 1; i < values.size(); ++i)
    require_same_dim(values[i], values[0], "piecewise_signal");
  ControlSignal s;
  s.kind = ControlSignal::Kind::Piecewise;
  s.piecewise = PiecewiseSignal{std::move(times), std::move(values)};
  return s;
}

// repeat the tail (T-delta, T] of the base signal forever past T
inline ControlSignal periodic_signal(PiecewiseSignal base, double T, double delta) {
  if (!(T > 0) || !(delta > 0) || delta > T)
    throw std::invalid_argument("periodic_signal: need 0 < delta <= T");
  ControlSignal s;
  s.kind = ControlSignal::Kind::Periodic;
  s.piecewise = std::move(base);
  s.period_T = T;
  s.period_delta = delta;
  return s;
}

inline ControlSignal shifted(ControlSignal s, double dt) {
  s.offset += dt;
  return s;
}

namespace detail {
inline const Vec& eval_piecewise(const PiecewiseSignal& pw, double t) {
  std::size_t lo = 0, hi = pw.times.size();
  while (hi - lo > 1) {  // last segment with times[i] <= t
    std::size_t mid = (lo + hi) / 2;
    if (pw.times[mid] <= t) lo = mid;
    else hi = mid;
  }
  return pw.values[lo];
}
}  // namespace detail

inline Vec eval_signal(const ControlSignal& s, double t) {
  t += s.offset;
  if (t < 0)
    throw std::invalid_argument("eval_signal: negative time " + std::to_string(t));
  switch (s.kind) {
    case ControlSignal::Kind::Constant:
      return s.constant;
    case ControlSignal::Kind::Piecewise:
      return detail::eval_piecewise(s.piecewise, t);
    case ControlSignal::Kind::Periodic: {
      if (t <= s.period_T) return detail::eval_piecewise(s.piecewise, t);
      double q = std::ceil((t - s.period_T) / s.period_delta);
      double tm = t - q * s.period_delta;
      if (tm > s.period_T) tm = s.period_T;  // guard rounding at exact multiples
      if (!(tm > s.period_T - s.period_delta - 1e-9))
        throw std::logic_error("eval_signal: periodic fold left (T-delta, T]");
      return detail::eval_piecewise(s.piecewise, std::max(tm, 0.0));
    }
  }
  throw std::logic_error("eval_signal: bad kind");
}

struct Trajectory {
  std::vector<double> times;   // uniform step, final step shortened to hit T
  std::vector<Vec> states;
  ControlSignal control, disturbance;
  double step = 0;
};

struct integration_error : std::runtime_error {
  double last_valid_time;
  integration_error(const std::string& what, double t)
      : std::runtime_error(what + " (last valid state at t=" + std::to_string(t) + ")"),
        last_valid_time(t) {}
};

// one classic RK4 step; u and d are the frozen left-endpoint samples
inline Vec rk4_step(const SystemModel& model, const Vec& x, const Vec& u,
                    const Vec& d, double h) {
  const std::size_t n = x.size();
  Vec y(n), out(n);
  Vec k1 = model.f(x, u, d);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.5 * h * k1[i];
  Vec k2 = model.f(y, u, d);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + 0.5 * h * k2[i];
  Vec k3 = model.f(y, u, d);
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + h * k3[i];
  Vec k4 = model.f(y, u, d);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  if (model.state_floor)
    for (std::size_t i = 0; i < n; ++i)
      out[i] = std::max(out[i], (*model.state_floor)[i]);
  return out;
}

inline Trajectory simulate(const SystemModel& model, const Vec& x0,
                           const ControlSignal& u, const ControlSignal& d,
                           double T, double h) {
  if (x0.size() != model.n)
    throw std::invalid_argument("simulate: x0 has dimension " + std::to_string(x0.size()) +
                                ", model expects " + std::to_string(model.n));
  if (!(h > 0)) throw std::invalid_argument("simulate: step must be > 0");
  if (!(T >= 0)) throw std::invalid_argument("simulate: horizon must be >= 0");
  if (!all_finite(x0)) throw std::invalid_argument("simulate: x0 not finite");

  Trajectory tr;
  tr.step = h;
  tr.control = u;
  tr.disturbance = d;
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  if (T == 0) return tr;

  const std::size_t steps = static_cast<std::size_t>(std::ceil(T / h - 1e-9));
  Vec x = x0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t0 = static_cast<double>(k) * h;
    const bool last = (k + 1 == steps);
    const double hk = last ? T - t0 : h;
    Vec uk = eval_signal(u, t0);
    Vec dk = eval_signal(d, t0);
    if (uk.size() != model.m || dk.size() != model.p)
      throw std::invalid_argument("simulate: signal dimension mismatch");
    x = rk4_step(model, x, uk, dk, hk);
    if (!all_finite(x)) throw integration_error("simulate: non-finite state", t0);
    tr.times.push_back(last ? T : t0 + h);
    tr.states.push_back(x);
  }
  return tr;
}

// sampled two-point difference quotients of f in its state argument, inflated
// by a safety factor; the raw maximum is only a lower estimate of the true
// constant, so callers that need an upper bound keep the inflation
inline double estimate_lipschitz(const SystemModel& model, const Box& X,
                                 std::size_t samples = 10000, double safety = 1.5) {
  if (X.dim() != model.n)
    throw std::invalid_argument("estimate_lipschitz: box dimension mismatch");
  if (X.degenerate())
    throw std::invalid_argument("estimate_lipschitz: degenerate box");
  if (samples == 0) throw std::invalid_argument("estimate_lipschitz: no samples");

  const std::size_t n = model.n, m = model.m, p = model.p;
  double best = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vec unit = halton_point(s, 2 * n + m + p);
    Vec x1(n), x2(n), u(m), d(p);
    for (std::size_t i = 0; i < n; ++i)
      x1[i] = X.lower[i] + unit[i] * (X.upper[i] - X.lower[i]);
    for (std::size_t i = 0; i < m; ++i)
      u[i] = model.U.lower[i] + unit[n + i] * (model.U.upper[i] - model.U.lower[i]);
    for (std::size_t i = 0; i < p; ++i)
      d[i] = model.D.lower[i] + unit[n + m + i] * (model.D.upper[i] - model.D.lower[i]);
    if (s % 4 == 3) {
      // occasional long-range pair to catch non-local behaviour
      for (std::size_t i = 0; i < n; ++i)
        x2[i] = X.lower[i] + unit[n + m + p + i] * (X.upper[i] - X.lower[i]);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        double span = X.upper[i] - X.lower[i];
        x2[i] = x1[i] + (unit[n + m + p + i] - 0.5) * 2e-3 * span;
        x2[i] = std::min(std::max(x2[i], X.lower[i]), X.upper[i]);
      }
    }
    double dist = euclidean(x1, x2);
    if (dist == 0.0) continue;
    double r = euclidean(model.f(x1, u, d), model.f(x2, u, d)) / dist;
    if (r > best) best = r;
  }
  return best * safety;
}

}  // namespace rcis
