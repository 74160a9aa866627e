#pragma once
// Invariant construction by classify-and-refine: certify the constraint set's
// extreme points first, then repeatedly classify the unclassified lattice
// point nearest the widest spot of the frontier band until the sampled gap
// between the certified-feasible and certified-unsafe frontiers closes below
// epsilon. Feasible points contribute the down-closure of their certified
// orbit; unsafe points contribute the up-closure of their escaping prefix.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "feasibility.hpp"
#include "monotonicity.hpp"

namespace rcis {

struct SolverConfig {
  double epsilon = 1.0;
  double T_max = 200.0;
  double h = 0.01;
  ControlStrategy strategy = ControlStrategy::csm_min();
  double margin = 0.0;
  double tau = 0.0;
  bool use_beta = false;
  std::optional<double> lipschitz;  // overrides the model annotation
  std::size_t max_iterations = 10000;
  double grid_resolution = 0.0;     // 0 picks epsilon / 2
  std::vector<Vec> seeds;           // classified before refinement starts
  std::size_t threads = 1;

  double resolved_resolution() const {
    double r = grid_resolution > 0 ? grid_resolution : 0.5 * epsilon;
    return std::min(r, epsilon);  // never coarser than the target gap
  }

  void validate() const {
    if (!(epsilon > 0)) throw std::invalid_argument("SolverConfig: epsilon must be > 0");
    if (!(T_max > 0) || !(h > 0)) throw std::invalid_argument("SolverConfig: bad horizon/step");
    if (margin < 0 || tau < 0) throw std::invalid_argument("SolverConfig: negative slack");
    if (max_iterations == 0) throw std::invalid_argument("SolverConfig: max_iterations == 0");
  }
};

enum class Termination { GapConverged, EmptySet, LatticeExhausted, UnknownLimited, IterationLimit };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::GapConverged: return "gap_converged";
    case Termination::EmptySet: return "empty";
    case Termination::LatticeExhausted: return "lattice_exhausted";
    case Termination::UnknownLimited: return "unknown_limited";
    case Termination::IterationLimit: return "iteration_limit";
  }
  return "?";
}

struct SolverStats {
  std::size_t classifications = 0;
  std::size_t simulations = 0;  // candidate-control trajectories examined
  std::size_t iterations = 0;   // refinement selections
  double wall_ms = 0;
};

struct SolverResult {
  LowerSet F1;
  UpperSet F2;
  std::vector<Vec> unknown_points;
  double gap = 0;
  Termination termination = Termination::GapConverged;
  std::vector<FeasibilityCertificate> certificates;
  // parallel to F1.generators.points: owning certificate and the sample time
  // of the generator on that certificate's orbit (0 for expansion points)
  std::vector<std::size_t> generator_certificate;
  std::vector<double> generator_time;
  SolverStats stats;
};

namespace detail {

struct TaggedGen {
  Vec x;
  std::size_t cert = 0;
  double t = 0;
};

inline void insert_maximal_tagged(std::vector<TaggedGen>& ac, TaggedGen g) {
  for (const auto& p : ac)
    if (leq(g.x, p.x)) return;
  std::erase_if(ac, [&](const TaggedGen& p) { return leq(p.x, g.x); });
  ac.push_back(std::move(g));
}

// maximal samples of the certified orbit, tagged with their sample times,
// plus the expansion points when the certificate carries a positive radius
inline std::vector<TaggedGen> certificate_generators(const SystemModel& model,
                                                     const LowerSet& X,
                                                     const FeasibilityCertificate& cert,
                                                     double h, std::size_t cert_index) {
  Trajectory tr = simulate(model, cert.x0, cert.control,
                           constant_signal(model.D.upper), cert.T, h);
  std::vector<TaggedGen> gens;
  for (std::size_t k = 0; k < tr.states.size(); ++k)
    insert_maximal_tagged(gens, {tr.states[k], cert_index, tr.times[k]});
  if (cert.beta > 0) {
    const double r = cert.beta / std::sqrt(static_cast<double>(model.n));
    std::vector<Vec> extra;
    for (std::size_t i = 0; i < model.n; ++i) {
      Vec p = cert.x0;
      p[i] += r;
      extra.push_back(std::move(p));
    }
    Vec diag = cert.x0;
    for (double& v : diag) v += r;
    extra.push_back(std::move(diag));
    for (Vec& p : extra)
      if (member_lower(X, p))  // the cone may poke out of the constraint set
        insert_maximal_tagged(gens, {std::move(p), cert_index, 0.0});
  }
  return gens;
}

}  // namespace detail

// down-closure contributed by one feasible certificate
inline LowerSet build_Z(const SystemModel& model, const LowerSet& X,
                        FeasibilityCertificate cert, double h,
                        bool use_beta = false, double lambda = 0.0) {
  if (use_beta && cert.beta == 0 && lambda > 0)
    cert.beta = beta_radius(cert, lambda);
  if (!use_beta) cert.beta = 0;
  LowerSet Z;
  Z.ambient = X.ambient;
  for (auto& g : detail::certificate_generators(model, X, cert, h, 0))
    Z.generators.points.push_back(std::move(g.x));
  return Z;
}

// up-closure contributed by one escaping prefix (in-set samples only)
inline UpperSet build_H(const LowerSet& X, const std::vector<Vec>& prefix_states) {
  if (prefix_states.empty())
    throw std::invalid_argument("build_H: empty prefix");
  UpperSet H;
  H.ambient = X.ambient;
  for (const Vec& s : prefix_states) insert_minimal(H.generators, s);
  return H;
}

inline SolverResult compute_invariant(const SystemModel& model, const LowerSet& X,
                                      const SolverConfig& config) {
  config.validate();
  if (X.ambient.dim() != model.n)
    throw std::invalid_argument("compute_invariant: constraint dimension mismatch");
  MonotoneClass mc = model.monotone_class;
  if (mc == MonotoneClass::Unknown)
    mc = check_kamke_muller(model, X.ambient.inset(1e-3), 2000, 1e-5, 1e-9,
                            std::max<std::size_t>(config.threads, 1))
             .classification;
  if (mc != MonotoneClass::SM && mc != MonotoneClass::CSM)
    throw std::invalid_argument("compute_invariant: model is not order preserving");

  const auto t_start = std::chrono::steady_clock::now();
  const std::vector<ControlSignal> controls = candidate_controls(model, config.strategy);
  ClassifyOptions copt;
  copt.T_max = config.T_max;
  copt.h = config.h;
  copt.margin = config.margin;
  copt.tau = config.tau;
  copt.decisive = (config.strategy.kind == ControlStrategy::Kind::CsmMin);

  double lambda = 0.0;
  if (config.use_beta) {
    if (config.lipschitz) lambda = *config.lipschitz;
    else if (model.lipschitz_x) lambda = *model.lipschitz_x;
    else lambda = estimate_lipschitz(model, X.ambient.inset(1e-3), 10000);
  }

  const Lattice lat = Lattice::over(X.ambient, config.resolved_resolution());
  std::vector<CellState> state(lat.size(), CellState::Unclassified);
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (!member_lower(X, lat.point(i), config.tau)) state[i] = CellState::Outside;

  SolverResult result;
  result.F2.ambient = X.ambient;
  std::vector<detail::TaggedGen> f1_gens;

  auto cell_diag = [&](std::size_t flat) {
    Vec p = lat.point(flat);
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + format_double(p[i]);
    return s + ")";
  };

  auto absorb_feasible = [&](const FeasibilityCertificate& cert) {
    const std::size_t ci = result.certificates.size();
    result.certificates.push_back(cert);
    std::vector<detail::TaggedGen> gens =
        detail::certificate_generators(model, X, cert, config.h, ci);
    for (const auto& g : gens) {
      for (std::size_t flat = 0; flat < lat.size(); ++flat) {
        CellState& cs = state[flat];
        if (cs == CellState::Outside || cs == CellState::InF1) continue;
        if (leq(lat.point(flat), g.x, config.tau)) {
          if (cs == CellState::InF2)
            throw std::runtime_error(
                "compute_invariant: lattice point " + cell_diag(flat) +
                " certified unsafe earlier now falls in a feasible down-closure; "
                "inconsistent classification (tolerance failure or model bug)");
          cs = CellState::InF1;
        }
      }
      detail::insert_maximal_tagged(f1_gens, g);
    }
  };

  auto absorb_unsafe = [&](const std::vector<Vec>& prefix) {
    UpperSet H = build_H(X, prefix);
    for (const Vec& g : H.generators.points) {
      for (std::size_t flat = 0; flat < lat.size(); ++flat) {
        CellState& cs = state[flat];
        if (cs == CellState::Outside || cs == CellState::InF2) continue;
        if (leq(g, lat.point(flat), config.tau)) {
          if (cs == CellState::InF1)
            throw std::runtime_error(
                "compute_invariant: lattice point " + cell_diag(flat) +
                " certified feasible earlier now falls in an unsafe up-closure; "
                "inconsistent classification (tolerance failure or model bug)");
          cs = CellState::InF2;
        }
      }
      insert_minimal(result.F2.generators, g);
    }
  };

  auto classify_and_absorb = [&](const Vec& x0) {
    Classification c = classify_point(model, X, x0, controls, copt);
    ++result.stats.classifications;
    result.stats.simulations += c.controls_tried;
    switch (c.kind) {
      case Feasibility::Feasible: {
        FeasibilityCertificate cert = *c.certificate;
        if (config.use_beta && lambda > 0) cert.beta = beta_radius(cert, lambda);
        absorb_feasible(cert);
        break;
      }
      case Feasibility::Unsafe:
        absorb_unsafe(c.prefix_states);
        break;
      case Feasibility::Unknown:
        break;
    }
    return c.kind;
  };

  auto finalize = [&](Termination why) {
    result.termination = why;
    result.gap = detail::frontier_gap_core(lat, state, nullptr);
    result.F1.ambient = X.ambient;
    for (auto& g : f1_gens) {
      result.F1.generators.points.push_back(g.x);
      result.generator_certificate.push_back(g.cert);
      result.generator_time.push_back(g.t);
    }
    for (std::size_t i = 0; i < lat.size(); ++i)
      if (state[i] == CellState::Unknown) result.unknown_points.push_back(lat.point(i));
    result.stats.wall_ms = std::chrono::duration<double, std::milli>(
                               std::chrono::steady_clock::now() - t_start)
                               .count();
    return result;
  };

  // extreme points first: the maximal generators, then the least point
  for (const Vec& g : X.generators.points) classify_and_absorb(g);

  bool covered = true;
  for (std::size_t i = 0; i < lat.size(); ++i)
    if (state[i] != CellState::Outside && state[i] != CellState::InF1) {
      covered = false;
      break;
    }
  if (covered) return finalize(Termination::GapConverged);

  const Vec least = X.ambient.lower;
  {
    std::size_t flat = 0;  // the lower corner is always tick 0 on every axis
    if (state[flat] == CellState::Unclassified) {
      Feasibility k = classify_and_absorb(least);
      if (k == Feasibility::Unknown) state[flat] = CellState::Unknown;
    }
    if (state[flat] == CellState::InF2) return finalize(Termination::EmptySet);
  }

  for (const Vec& s : config.seeds)
    if (member_lower(X, s, config.tau)) classify_and_absorb(s);

  GapWitness witness;
  while (true) {
    double gap = detail::frontier_gap_core(lat, state, &witness);
    if (gap <= config.epsilon) return finalize(Termination::GapConverged);
    if (result.stats.iterations >= config.max_iterations)
      return finalize(Termination::IterationLimit);

    // candidate: unclassified lattice point nearest the midpoint of the
    // widest frontier pair; lexicographic order breaks ties
    std::size_t pick = npos;
    double best = std::numeric_limits<double>::infinity();
    Vec mid;
    if (witness.valid) {
      mid = witness.on_f1;
      for (std::size_t i = 0; i < mid.size(); ++i)
        mid[i] = 0.5 * (mid[i] + witness.on_f2[i]);
    }
    for (std::size_t flat = 0; flat < lat.size(); ++flat) {
      if (state[flat] != CellState::Unclassified) continue;
      double d = witness.valid ? euclidean(lat.point(flat), mid) : 0.0;
      if (d < best) {
        best = d;
        pick = flat;
        if (!witness.valid) break;  // no witness: first in lexicographic order
      }
    }
    if (pick == npos) {
      bool any_unknown = false;
      for (CellState s : state)
        if (s == CellState::Unknown) { any_unknown = true; break; }
      return finalize(any_unknown ? Termination::UnknownLimited
                                  : Termination::LatticeExhausted);
    }

    ++result.stats.iterations;
    Feasibility k = classify_and_absorb(lat.point(pick));
    if (k == Feasibility::Unknown) state[pick] = CellState::Unknown;
  }
}

// ---------------------------------------------------------------------------
// result verification: replay every generator's certificate control (shifted
// to the generator's position on the orbit) against the worst disturbance and
// random admissible disturbance signals, requiring containment in F1 at all
// grid times; optionally recompute under a shrunken disturbance range and a
// shrunken control range and check the expected inclusions

struct VerifyReport {
  bool passed = true;
  std::size_t replays = 0;
  std::size_t violations = 0;
  std::vector<std::string> failures;
  bool lemma_checked = false;
  bool lemma_ok = true;
};

inline ControlSignal random_piecewise_disturbance(const Box& D, double horizon,
                                                  double h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> un(0.0, 1.0);
  const std::size_t segments = 8;
  double seg = std::max(h, std::ceil(horizon / static_cast<double>(segments) / h) * h);
  std::vector<double> times;
  std::vector<Vec> values;
  for (double t = 0.0; t < horizon; t += seg) {
    times.push_back(t);
    Vec v(D.dim());
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = D.lower[i] + un(rng) * (D.upper[i] - D.lower[i]);
    values.push_back(std::move(v));
  }
  return piecewise_signal(std::move(times), std::move(values));
}

inline VerifyReport verify_result(const SystemModel& model, const LowerSet& X,
                                  const SolverResult& result, const SolverConfig& config,
                                  std::size_t trials = 20, double slack = 1e-3,
                                  bool check_lemma = false, std::size_t threads = 1,
                                  unsigned seed = 7u) {
  VerifyReport rep;
  const std::size_t count = result.F1.generators.points.size();
  if (result.generator_certificate.size() != count ||
      result.generator_time.size() != count)
    throw std::invalid_argument("verify_result: generator bookkeeping out of sync");

  std::vector<std::string> fails(count);
  std::vector<std::size_t> viols(count, 0), reps(count, 0);

  auto replay_generator = [&](std::size_t gi) {
    const Vec& g = result.F1.generators.points[gi];
    const FeasibilityCertificate& cert =
        result.certificates.at(result.generator_certificate[gi]);
    ControlSignal control = shifted(periodic_control(cert), result.generator_time[gi]);
    const double horizon = 10.0 * cert.T;
    std::mt19937_64 rng(seed + 1315423911u * static_cast<unsigned>(gi));

    for (std::size_t trial = 0; trial <= trials; ++trial) {
      ControlSignal d = trial == 0
                            ? constant_signal(model.D.upper)
                            : random_piecewise_disturbance(model.D, horizon, config.h, rng);
      Trajectory tr = simulate(model, g, control, d, horizon, config.h);
      ++reps[gi];
      for (std::size_t k = 0; k < tr.states.size(); ++k) {
        if (!member_lower(result.F1, tr.states[k], slack)) {
          ++viols[gi];
          if (fails[gi].empty()) {
            std::string s = "generator " + std::to_string(gi) + " leaves F1 at t=" +
                            format_double(tr.times[k]) + " (trial " +
                            std::to_string(trial) + ")";
            fails[gi] = s;
          }
          break;
        }
      }
    }
  };

  if (threads <= 1 || count < 2) {
    for (std::size_t gi = 0; gi < count; ++gi) replay_generator(gi);
  } else {
    std::vector<std::thread> pool;
    std::size_t nthreads = std::min(threads, count);
    for (std::size_t t = 0; t < nthreads; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t gi = t; gi < count; gi += nthreads) replay_generator(gi);
      });
    for (auto& th : pool) th.join();
  }

  for (std::size_t gi = 0; gi < count; ++gi) {
    rep.replays += reps[gi];
    rep.violations += viols[gi];
    if (!fails[gi].empty()) rep.failures.push_back(fails[gi]);
  }

  if (check_lemma) {
    rep.lemma_checked = true;
    // weaker disturbances (same worst case) must not lose certified volume;
    // weaker controls (same minimum) must not gain any
    SystemModel weaker_d = model;
    weaker_d.D = Box{model.D.upper, model.D.upper};
    SystemModel weaker_u = model;
    Vec umid(model.m);
    for (std::size_t i = 0; i < model.m; ++i)
      umid[i] = 0.5 * (model.U.lower[i] + model.U.upper[i]);
    weaker_u.U = Box{model.U.lower, umid};
    SolverConfig cfg = config;
    cfg.seeds.clear();
    SolverResult rd = compute_invariant(weaker_d, X, cfg);
    SolverResult ru = compute_invariant(weaker_u, X, cfg);
    Lattice lat = Lattice::over(X.ambient, config.resolved_resolution());
    for (std::size_t i = 0; i < lat.size(); ++i) {
      Vec p = lat.point(i);
      if (member_lower(result.F1, p, config.tau) && !member_lower(rd.F1, p, config.tau)) {
        rep.lemma_ok = false;
        rep.failures.push_back("shrunken-D invariant lost lattice point");
        break;
      }
      if (member_lower(ru.F1, p, config.tau) && !member_lower(result.F1, p, config.tau)) {
        rep.lemma_ok = false;
        rep.failures.push_back("shrunken-U invariant gained lattice point");
        break;
      }
    }
  }

  rep.passed = rep.violations == 0 && (!rep.lemma_checked || rep.lemma_ok);
  return rep;
}

}  // namespace rcis
