#pragma once
// Sign checks on the sampled partial derivatives of f, plus two
// simulation-based diagnostics: order preservation of the flow and the
// ball-expansion property used to justify the min-control reduction.

#include <cstddef>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dynamics.hpp"

namespace rcis {

struct KmViolation {
  char block;        // 'x', 'u' or 'd': which argument the derivative is in
  std::size_t fi;    // component of f
  std::size_t j;     // coordinate within the block
  Vec x, u, d;       // sample point
  double value;      // offending derivative estimate
};

struct MonotonicityReport {
  MonotoneClass classification = MonotoneClass::Unknown;
  std::vector<KmViolation> violations;
  std::size_t samples_used = 0;
};

inline std::string summarize(const MonotonicityReport& r) {
  std::ostringstream os;
  os << "classification: " << to_string(r.classification)
     << " (" << r.samples_used << " samples, " << r.violations.size()
     << " violations)\n";
  for (const auto& v : r.violations) {
    os << "  d f" << (v.fi + 1) << " / d " << v.block << (v.j + 1)
       << " = " << v.value << " at x=(";
    for (std::size_t i = 0; i < v.x.size(); ++i)
      os << (i ? "," : "") << v.x[i];
    os << ")\n";
  }
  return os.str();
}

// Cooperative sign pattern of f sampled on X x U x D with central finite
// differences. Off-diagonal state partials and all disturbance partials
// nonnegative give SM; nonnegative control partials on top of that give CSM.
// Sample points are shifted fd_step inward so the stencil stays in the box
// wherever the box leaves room.
inline MonotonicityReport check_kamke_muller(const SystemModel& model, const Box& X,
                                             std::size_t samples = 10000,
                                             double fd_step = 1e-5,
                                             double tol = 1e-9,
                                             std::size_t threads = 1) {
  if (X.dim() != model.n)
    throw std::invalid_argument("check_kamke_muller: box dimension mismatch");
  if (!(fd_step > 0) || !(tol >= 0))
    throw std::invalid_argument("check_kamke_muller: bad fd_step or tol");

  const std::size_t n = model.n, m = model.m, p = model.p;

  auto inward = [&](double v, double lo, double hi) {
    if (hi - lo >= 2 * fd_step)
      return std::min(std::max(v, lo + fd_step), hi - fd_step);
    return 0.5 * (lo + hi);
  };

  auto scan = [&](std::size_t begin, std::size_t end, std::vector<KmViolation>& out) {
    for (std::size_t s = begin; s < end; ++s) {
      Vec unit = halton_point(s, n + m + p);
      Vec x(n), u(m), d(p);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = inward(X.lower[i] + unit[i] * (X.upper[i] - X.lower[i]),
                      X.lower[i], X.upper[i]);
      for (std::size_t i = 0; i < m; ++i)
        u[i] = inward(model.U.lower[i] + unit[n + i] * (model.U.upper[i] - model.U.lower[i]),
                      model.U.lower[i], model.U.upper[i]);
      for (std::size_t i = 0; i < p; ++i)
        d[i] = inward(model.D.lower[i] + unit[n + m + i] * (model.D.upper[i] - model.D.lower[i]),
                      model.D.lower[i], model.D.upper[i]);

      auto central = [&](char block, std::size_t j) {
        Vec xp = x, xm = x, up = u, um = u, dp = d, dm = d;
        if (block == 'x') { xp[j] += fd_step; xm[j] -= fd_step; }
        if (block == 'u') { up[j] += fd_step; um[j] -= fd_step; }
        if (block == 'd') { dp[j] += fd_step; dm[j] -= fd_step; }
        Vec fp = model.f(xp, up, dp), fm = model.f(xm, um, dm);
        Vec g(n);
        for (std::size_t i = 0; i < n; ++i) g[i] = (fp[i] - fm[i]) / (2 * fd_step);
        return g;
      };

      for (std::size_t j = 0; j < n; ++j) {
        Vec g = central('x', j);
        for (std::size_t i = 0; i < n; ++i) {
          if (i == j) continue;  // diagonal is unconstrained
          if (g[i] < -tol) out.push_back({'x', i, j, x, u, d, g[i]});
        }
      }
      for (std::size_t j = 0; j < p; ++j) {
        Vec g = central('d', j);
        for (std::size_t i = 0; i < n; ++i)
          if (g[i] < -tol) out.push_back({'d', i, j, x, u, d, g[i]});
      }
      for (std::size_t j = 0; j < m; ++j) {
        Vec g = central('u', j);
        for (std::size_t i = 0; i < n; ++i)
          if (g[i] < -tol) out.push_back({'u', i, j, x, u, d, g[i]});
      }
    }
  };

  MonotonicityReport rep;
  rep.samples_used = samples;
  if (threads <= 1 || samples < 256) {
    scan(0, samples, rep.violations);
  } else {
    std::vector<std::vector<KmViolation>> parts(threads);
    std::vector<std::thread> pool;
    std::size_t chunk = (samples + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
      std::size_t b = t * chunk, e = std::min(samples, b + chunk);
      if (b >= e) break;
      pool.emplace_back([&, b, e, t] { scan(b, e, parts[t]); });
    }
    for (auto& th : pool) th.join();
    for (auto& part : parts)  // merged in submission order for determinism
      rep.violations.insert(rep.violations.end(), part.begin(), part.end());
  }

  bool sm_broken = false, u_broken = false;
  for (const auto& v : rep.violations) {
    if (v.block == 'u') u_broken = true;
    else sm_broken = true;
  }
  rep.classification = sm_broken ? MonotoneClass::None
                      : u_broken ? MonotoneClass::SM
                                 : MonotoneClass::CSM;
  return rep;
}

struct OrderCounterexample {
  Vec x1, x2, u1, u2, d1, d2;
  double t = 0;
  Vec phi1, phi2;
};

struct OrderPreservationResult {
  bool ok = true;
  std::optional<OrderCounterexample> counterexample;
  std::size_t trials_run = 0;
};

// Simulate ordered initial states (and ordered disturbances; ordered controls
// too when the model is annotated CSM) and require the flows to stay ordered
// at every grid time, up to a small slack.
inline OrderPreservationResult check_order_preservation(const SystemModel& model,
                                                        const Box& X, double T,
                                                        std::size_t trials = 20,
                                                        double h = 0.01,
                                                        double slack = 1e-6,
                                                        unsigned seed = 1u) {
  OrderPreservationResult res;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  const bool csm = model.monotone_class == MonotoneClass::CSM;

  auto between = [&](const Vec& lo, const Vec& hi) {
    Vec v(lo.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = lo[i] + un(rng) * (hi[i] - lo[i]);
    return v;
  };

  for (std::size_t s = 0; s < trials; ++s) {
    ++res.trials_run;
    Vec x1 = between(X.lower, X.upper);
    Vec x2 = between(x1, X.upper);  // x1 <= x2
    Vec u1 = between(model.U.lower, model.U.upper);
    Vec u2 = csm ? between(u1, model.U.upper) : u1;
    Vec d1 = between(model.D.lower, model.D.upper);
    Vec d2 = between(d1, model.D.upper);

    Trajectory t1 = simulate(model, x1, constant_signal(u1), constant_signal(d1), T, h);
    Trajectory t2 = simulate(model, x2, constant_signal(u2), constant_signal(d2), T, h);
    for (std::size_t k = 0; k < t1.states.size(); ++k) {
      if (!leq(t1.states[k], t2.states[k], slack)) {
        res.ok = false;
        res.counterexample = OrderCounterexample{x1, x2, u1, u2, d1, d2,
                                                 t1.times[k], t1.states[k], t2.states[k]};
        return res;
      }
    }
  }
  return res;
}

struct ExpansionCounterexample {
  Vec x1, x2, eps;
  double t = 0;
  Vec phi1, phi2;
};

struct ExpansionResult {
  bool holds = true;
  std::optional<ExpansionCounterexample> counterexample;
  std::size_t trials_run = 0;
};

// Diagnostic for the min-control reduction: starting the flow from x2 + eps
// under the minimal control and worst disturbance, a ball of radius min_i eps_i
// around the lower flow should stay inside the down-set of the upper flow,
// i.e. phi(t, x2)_i + min_k eps_k <= phi(t, x1)_i for all i and sampled t > 0.
// Contractive flows may fail this at large t; the result is reported, not
// asserted, by the shipped models' tests.
inline ExpansionResult check_expansion_condition(const SystemModel& model, const Box& X,
                                                 double T, std::size_t trials = 20,
                                                 double h = 0.01, double slack = 1e-9,
                                                 unsigned seed = 2u) {
  ExpansionResult res;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> un(0.0, 1.0);
  ControlSignal umin = constant_signal(model.U.lower);
  ControlSignal dmax = constant_signal(model.D.upper);

  for (std::size_t s = 0; s < trials; ++s) {
    ++res.trials_run;
    Vec x2(model.n), eps(model.n), x1(model.n);
    double emin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < model.n; ++i) {
      x2[i] = X.lower[i] + un(rng) * (X.upper[i] - X.lower[i]);
      eps[i] = un(rng) * (X.upper[i] - x2[i]);  // keeps x1 inside X
      x1[i] = x2[i] + eps[i];
      emin = std::min(emin, eps[i]);
    }
    Trajectory t1 = simulate(model, x1, umin, dmax, T, h);
    Trajectory t2 = simulate(model, x2, umin, dmax, T, h);
    for (std::size_t k = 1; k < t1.states.size(); ++k) {
      for (std::size_t i = 0; i < model.n; ++i) {
        if (t2.states[k][i] + emin > t1.states[k][i] + slack) {
          res.holds = false;
          res.counterexample =
              ExpansionCounterexample{x1, x2, eps, t1.times[k], t1.states[k], t2.states[k]};
          return res;
        }
      }
    }
  }
  return res;
}

}  // namespace rcis
