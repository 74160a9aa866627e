#pragma once
// Point classification against a lower-closed constraint set: simulate each
// candidate control under the worst constant disturbance and look for a grid
// time whose state is dominated by an earlier one. A hit certifies the point
// and induces a controlled invariant (the down-closure of the visited states,
// kept invariant by repeating the tail of the control forever). An exit under
// the minimal control of a control-state monotone model certifies the point
// unsafe; anything else stays unknown.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dynamics.hpp"
#include "models.hpp"

namespace rcis {

struct FeasibilityCertificate {
  Vec x0;
  ControlSignal control;  // candidate applied on [0, T]
  double T = 0;           // dominance time
  double t_dom = 0;       // earlier sample that dominates the state at T
  double delta = 0;       // T - t_dom, the repeated tail length
  double eps_T = 0;       // smallest coordinate gap of the domination
  double gamma = 0;       // clearance of the t>0 prefix to the ambient upper bounds
  double beta = 0;        // expansion radius; 0 until computed
};

enum class Feasibility { Feasible, Unsafe, Unknown };

inline const char* to_string(Feasibility k) {
  switch (k) {
    case Feasibility::Feasible: return "feasible";
    case Feasibility::Unsafe: return "unsafe";
    default: return "unknown";
  }
}

struct Classification {
  Feasibility kind = Feasibility::Unknown;
  std::optional<FeasibilityCertificate> certificate;  // Feasible
  double exit_time = 0;                               // Unsafe
  std::vector<double> prefix_times;                   // Unsafe: in-set samples
  std::vector<Vec> prefix_states;
  double horizon = 0;                                 // Unknown
  std::size_t controls_tried = 0;
};

struct ControlStrategy {
  enum class Kind { CsmMin, Grid, UserList };
  Kind kind = Kind::CsmMin;
  std::size_t grid_points_per_axis = 1;
  std::vector<ControlSignal> user;

  static ControlStrategy csm_min() { return {}; }
  static ControlStrategy grid(std::size_t k) {
    ControlStrategy s;
    s.kind = Kind::Grid;
    s.grid_points_per_axis = k;
    return s;
  }
  static ControlStrategy user_list(std::vector<ControlSignal> list) {
    ControlStrategy s;
    s.kind = Kind::UserList;
    s.user = std::move(list);
    return s;
  }
};

// csm_min is only sound when the minimal control is provably the best probe,
// which is what the CSM annotation asserts
inline std::vector<ControlSignal> candidate_controls(const SystemModel& model,
                                                     const ControlStrategy& strategy) {
  switch (strategy.kind) {
    case ControlStrategy::Kind::CsmMin:
      if (model.monotone_class != MonotoneClass::CSM)
        throw std::invalid_argument(
            "candidate_controls: csm_min needs a CSM-annotated model");
      return {constant_signal(model.U.lower)};
    case ControlStrategy::Kind::Grid: {
      const std::size_t k = strategy.grid_points_per_axis;
      if (k == 0) throw std::invalid_argument("candidate_controls: grid needs k >= 1");
      if (k == 1) return {constant_signal(model.U.lower)};
      std::vector<ControlSignal> out;
      std::vector<std::size_t> idx(model.m, 0);
      while (true) {
        Vec u(model.m);
        for (std::size_t i = 0; i < model.m; ++i)
          u[i] = model.U.lower[i] +
                 static_cast<double>(idx[i]) * (model.U.upper[i] - model.U.lower[i]) /
                     static_cast<double>(k - 1);
        out.push_back(constant_signal(u));
        std::size_t ax = model.m;
        while (ax-- > 0) {
          if (++idx[ax] < k) break;
          idx[ax] = 0;
          if (ax == 0) return out;
        }
      }
    }
    case ControlStrategy::Kind::UserList:
      if (strategy.user.empty())
        throw std::invalid_argument("candidate_controls: empty user list");
      return strategy.user;
  }
  throw std::logic_error("candidate_controls: bad strategy");
}

struct ClassifyOptions {
  double T_max = 200.0;
  double h = 0.01;
  double margin = 0.0;    // required coordinatewise domination gap
  double tau = 0.0;       // constraint-membership slack
  bool decisive = false;  // an all-exit over the candidate list proves unsafety
};

namespace detail {

// finds, at each new sample, whether some earlier sample dominates it by
// margin; keeps the maximal elements of the history so the common case costs
// O(antichain) per step, and only walks the full history once on a hit
struct DominanceTracker {
  double margin;
  std::vector<Vec> history;
  Antichain maximal;

  explicit DominanceTracker(double m) : margin(m) {}

  void push(const Vec& x) {
    history.push_back(x);
    insert_maximal(maximal, x);
  }

  // returns the largest earlier index whose sample dominates x, or npos
  std::size_t dominated_by(const Vec& x) const {
    const std::size_t k = history.size();
    if (k == 0) return npos;
    auto dominates = [&](const Vec& earlier) {
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > earlier[i] - margin) return false;
      return true;
    };
    if (dominates(history[k - 1])) return k - 1;  // typical: monotone descent
    bool exists = false;
    for (const Vec& a : maximal.points) {
      if (dominates(a)) {
        exists = true;
        break;
      }
    }
    if (!exists) return npos;
    for (std::size_t j = k - 1; j-- > 0;)
      if (dominates(history[j])) return j;
    return npos;
  }
};

}  // namespace detail

inline Classification classify_point(const SystemModel& model, const LowerSet& X,
                                     const Vec& x0,
                                     const std::vector<ControlSignal>& controls,
                                     const ClassifyOptions& opt = {}) {
  if (x0.size() != model.n)
    throw std::invalid_argument("classify_point: x0 dimension mismatch");
  if (controls.empty())
    throw std::invalid_argument("classify_point: no candidate controls");
  if (!(opt.h > 0) || !(opt.T_max > 0) || opt.margin < 0 || opt.tau < 0)
    throw std::invalid_argument("classify_point: bad options");
  if (!member_lower(X, x0, opt.tau))
    throw std::invalid_argument("classify_point: x0 outside the constraint set");

  const Vec d_worst = model.D.upper;
  const std::size_t steps =
      static_cast<std::size_t>(std::floor(opt.T_max / opt.h + 1e-9));

  bool all_exited = true;
  Classification first_exit;  // the prefix reported when every control exits

  for (std::size_t ci = 0; ci < controls.size(); ++ci) {
    const ControlSignal& u = controls[ci];
    detail::DominanceTracker dom(opt.margin);
    std::vector<double> times{0.0};
    std::vector<Vec> states{x0};
    dom.push(x0);
    Vec x = x0;
    bool exited = false;

    for (std::size_t k = 1; k <= steps; ++k) {
      const double t_prev = static_cast<double>(k - 1) * opt.h;
      const double t_k = static_cast<double>(k) * opt.h;
      x = rk4_step(model, x, eval_signal(u, t_prev), d_worst, opt.h);

      if (!all_finite(x) || !member_lower(X, x, opt.tau)) {
        exited = true;
        if (ci == 0) {
          first_exit.kind = Feasibility::Unsafe;
          first_exit.exit_time = t_k;
          first_exit.prefix_times = times;
          first_exit.prefix_states = states;
        }
        break;
      }

      std::size_t j = dom.dominated_by(x);
      if (j != npos) {
        FeasibilityCertificate cert;
        cert.x0 = x0;
        cert.control = u;
        cert.T = t_k;
        cert.t_dom = static_cast<double>(j) * opt.h;
        cert.delta = cert.T - cert.t_dom;
        double eps = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < model.n; ++i)
          eps = std::min(eps, states[j][i] - x[i]);
        cert.eps_T = eps;
        // clearance over strictly positive sample times; the defining
        // condition is an open time interval, and a start on the boundary
        // must not zero it out
        double gamma = std::numeric_limits<double>::infinity();
        for (std::size_t s = 1; s < states.size(); ++s)
          for (std::size_t i = 0; i < model.n; ++i)
            gamma = std::min(gamma, X.ambient.upper[i] - states[s][i]);
        for (std::size_t i = 0; i < model.n; ++i)
          gamma = std::min(gamma, X.ambient.upper[i] - x[i]);
        cert.gamma = std::max(gamma, 0.0);
        Classification res;
        res.kind = Feasibility::Feasible;
        res.certificate = std::move(cert);
        res.controls_tried = ci + 1;
        return res;
      }

      times.push_back(t_k);
      states.push_back(x);
      dom.push(x);
    }

    if (!exited) all_exited = false;  // ran out of horizon undecided
  }

  if (all_exited && opt.decisive) {
    first_exit.controls_tried = controls.size();
    return first_exit;
  }

  Classification res;
  res.kind = Feasibility::Unknown;
  res.horizon = opt.T_max;
  res.controls_tried = controls.size();
  return res;
}

inline Classification classify_point(const SystemModel& model, const LowerSet& X,
                                     const Vec& x0, const ControlStrategy& strategy,
                                     ClassifyOptions opt = {}) {
  opt.decisive = (strategy.kind == ControlStrategy::Kind::CsmMin);
  return classify_point(model, X, x0, candidate_controls(model, strategy), opt);
}

// repeat the certificate's control tail (t_dom, T] forever
inline ControlSignal periodic_control(const FeasibilityCertificate& cert) {
  if (cert.control.kind == ControlSignal::Kind::Constant) return cert.control;
  if (cert.control.kind == ControlSignal::Kind::Periodic) return cert.control;
  if (!(cert.delta > 0)) return cert.control;  // equilibrium-type certificate
  return periodic_signal(cert.control.piecewise, cert.T, cert.delta);
}

// down-closure of the certified trajectory: one generator per maximal sample
inline LowerSet invariant_from_certificate(const SystemModel& model,
                                           const FeasibilityCertificate& cert,
                                           double h) {
  Trajectory tr = simulate(model, cert.x0, cert.control,
                           constant_signal(model.D.upper), cert.T, h);
  LowerSet K;
  for (const Vec& s : tr.states) insert_maximal(K.generators, s);
  Vec hi(model.n, 0.0);
  for (const Vec& s : tr.states)
    for (std::size_t i = 0; i < model.n; ++i) hi[i] = std::max(hi[i], s[i]);
  K.ambient = Box{Vec(model.n, 0.0), hi};
  return K;
}

// radius of the up-cone ball around the certificate's start whose points stay
// feasible: eps * lambda * exp(-lambda T) / (1 + lambda) with
// eps = min(eps_T, gamma); degenerate certificates get 0
inline double beta_radius(const FeasibilityCertificate& cert, double lambda) {
  if (!(lambda > 0))
    throw std::invalid_argument("beta_radius: lambda must be positive");
  const double eps = std::min(cert.eps_T, cert.gamma);
  if (eps <= 0) return 0.0;
  return eps * lambda * std::exp(-lambda * cert.T) / (1.0 + lambda);
}

}  // namespace rcis
