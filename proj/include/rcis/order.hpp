#pragma once
// Componentwise partial order on the nonnegative orthant: boxes, antichains,
// finitely generated lower/upper closures, and the sampled frontier distance
// that drives the refinement loop.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rcis {

using Vec = std::vector<double>;

constexpr std::size_t npos = static_cast<std::size_t>(-1);

inline void require_same_dim(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch (" +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()) + ")");
}

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

// componentwise a <= b, optionally relaxed to a_i <= b_i + tau
inline bool leq(const Vec& a, const Vec& b, double tau = 0.0) {
  require_same_dim(a, b, "leq");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i] + tau) return false;
  return true;
}

inline bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline double euclidean(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

struct Box {
  Vec lower, upper;

  Box() = default;
  Box(Vec lo, Vec up) : lower(std::move(lo)), upper(std::move(up)) {
    require_same_dim(lower, upper, "Box");
    if (lower.empty()) throw std::invalid_argument("Box: dimension must be >= 1");
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (!(lower[i] <= upper[i]))
        throw std::invalid_argument("Box: lower exceeds upper in coordinate " +
                                    std::to_string(i));
  }

  std::size_t dim() const { return lower.size(); }

  bool contains(const Vec& x, double tau = 0.0) const {
    require_same_dim(x, lower, "Box::contains");
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x[i] < lower[i] - tau || x[i] > upper[i] + tau) return false;
    return true;
  }

  // positive volume in every coordinate
  bool degenerate() const {
    for (std::size_t i = 0; i < lower.size(); ++i)
      if (upper[i] <= lower[i]) return true;
    return false;
  }

  // shrink every face inward by m, collapsing to the midpoint if the side is
  // shorter than 2m
  Box inset(double m) const {
    Box b = *this;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (upper[i] - lower[i] >= 2 * m) {
        b.lower[i] += m;
        b.upper[i] -= m;
      } else {
        double mid = 0.5 * (lower[i] + upper[i]);
        b.lower[i] = b.upper[i] = mid;
      }
    }
    return b;
  }

  Vec clamp(const Vec& x) const {
    require_same_dim(x, lower, "Box::clamp");
    Vec y = x;
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = std::min(std::max(y[i], lower[i]), upper[i]);
    return y;
  }

  // map a point of the unit cube into the box
  Vec at(const Vec& unit) const {
    require_same_dim(unit, lower, "Box::at");
    Vec y(unit.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = lower[i] + unit[i] * (upper[i] - lower[i]);
    return y;
  }

  double diameter() const { return euclidean(lower, upper); }
};

// generator set kept pairwise incomparable by the insert routines
struct Antichain {
  std::vector<Vec> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  std::size_t dim() const { return points.empty() ? 0 : points[0].size(); }
};

inline bool pairwise_incomparable(const Antichain& ac, double tau = 0.0) {
  for (std::size_t i = 0; i < ac.points.size(); ++i)
    for (std::size_t j = i + 1; j < ac.points.size(); ++j)
      if (leq(ac.points[i], ac.points[j], tau) ||
          leq(ac.points[j], ac.points[i], tau))
        return false;
  return true;
}

// keep only maximal elements; a dominated or duplicate insert is a no-op
inline void insert_maximal(Antichain& ac, const Vec& x, double tau = 0.0) {
  for (const Vec& p : ac.points)
    if (leq(x, p, tau)) return;
  std::erase_if(ac.points, [&](const Vec& p) { return leq(p, x, tau); });
  ac.points.push_back(x);
}

// dual form: keep only minimal elements
inline void insert_minimal(Antichain& ac, const Vec& x, double tau = 0.0) {
  for (const Vec& p : ac.points)
    if (leq(p, x, tau)) return;
  std::erase_if(ac.points, [&](const Vec& p) { return leq(x, p, tau); });
  ac.points.push_back(x);
}

// x in (down-closure of generators) intersected with the ambient box and the
// nonnegative orthant
struct LowerSet {
  Antichain generators;
  Box ambient;
};

// x in (up-closure of generators) intersected with the ambient box
struct UpperSet {
  Antichain generators;
  Box ambient;
};

inline bool member_lower(const LowerSet& S, const Vec& x, double tau = 0.0) {
  if (!S.ambient.contains(x, tau)) return false;
  for (double v : x)
    if (v < -tau) return false;
  for (const Vec& g : S.generators.points)
    if (leq(x, g, tau)) return true;
  return false;
}

inline bool member_upper(const UpperSet& S, const Vec& x, double tau = 0.0) {
  if (!S.ambient.contains(x, tau)) return false;
  for (const Vec& g : S.generators.points)
    if (leq(g, x, tau)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// antichain CSV form: header x1,..,xn then one generator per row, printed so
// that parsing recovers the exact doubles

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_antichain_csv(std::ostream& os, const Antichain& ac,
                                std::size_t dim) {
  for (std::size_t i = 0; i < dim; ++i) os << (i ? "," : "") << "x" << (i + 1);
  os << "\n";
  for (const Vec& p : ac.points) {
    for (std::size_t i = 0; i < p.size(); ++i)
      os << (i ? "," : "") << format_double(p[i]);
    os << "\n";
  }
}

inline Antichain read_antichain_csv(std::istream& is) {
  Antichain ac;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("antichain csv: missing header");
  if (line.rfind("x1", 0) != 0)
    throw std::runtime_error("antichain csv: malformed header '" + line + "'");
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    Vec p;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        p.push_back(std::stod(cell, &used));
        if (used != cell.size() && cell.find_first_not_of(" \t", used) != std::string::npos)
          throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw std::runtime_error("antichain csv: line " + std::to_string(lineno) +
                                 ": bad number '" + cell + "'");
      }
    }
    if (!ac.points.empty() && p.size() != ac.points[0].size())
      throw std::runtime_error("antichain csv: line " + std::to_string(lineno) +
                               ": row width changed");
    ac.points.push_back(std::move(p));
  }
  return ac;
}

// ---------------------------------------------------------------------------
// sampled frontier distance
//
// Both sets are sampled on an axis-aligned lattice over the ambient box. The
// boundary sample of a set is the lattice points it contains that have a
// lattice neighbour it does not contain; the gap is the Euclidean Hausdorff
// distance between the two boundary samples. An empty feasible (resp. unsafe)
// sample is replaced by the box faces through the lower (resp. upper) corner,
// and the gap is 0 whenever no lattice point is left unclassified.

struct Lattice {
  Box box;
  double resolution = 0;
  std::vector<std::vector<double>> ticks;  // per-axis sample coordinates
  std::vector<std::size_t> strides;        // axis n-1 varies fastest

  static Lattice over(const Box& b, double res) {
    if (!(res > 0)) throw std::invalid_argument("Lattice: resolution must be > 0");
    Lattice lat;
    lat.box = b;
    lat.resolution = res;
    lat.ticks.resize(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) {
      auto& t = lat.ticks[i];
      double v = b.lower[i];
      for (std::size_t k = 0; v < b.upper[i] - 1e-9 * std::max(1.0, std::fabs(b.upper[i])); ++k) {
        t.push_back(v);
        v = b.lower[i] + static_cast<double>(k + 1) * res;
      }
      t.push_back(b.upper[i]);  // always sample the upper face exactly
    }
    lat.strides.assign(b.dim(), 1);
    for (std::size_t i = b.dim(); i-- > 1;)
      lat.strides[i - 1] = lat.strides[i] * lat.ticks[i].size();
    return lat;
  }

  std::size_t size() const { return strides.empty() ? 0 : strides[0] * ticks[0].size(); }

  // ascending flat index enumerates points in lexicographic coordinate order
  Vec point(std::size_t flat) const {
    Vec p(ticks.size());
    for (std::size_t i = 0; i < ticks.size(); ++i) {
      std::size_t idx = flat / strides[i];
      flat %= strides[i];
      p[i] = ticks[i][idx];
    }
    return p;
  }

  std::size_t axis_index(std::size_t flat, std::size_t axis) const {
    return (flat / strides[axis]) % ticks[axis].size();
  }
};

enum class CellState : unsigned char {
  Outside,       // not part of the constraint set; never counted as band
  Unclassified,  // candidate still to be decided
  InF1,
  InF2,
  Unknown        // classification attempted, horizon exhausted
};

struct GapWitness {
  Vec on_f1, on_f2;   // boundary sample pair realising the distance
  bool valid = false;
};

namespace detail {

inline double hausdorff_with_witness(const Lattice& lat,
                                     const std::vector<std::size_t>& A,
                                     const std::vector<std::size_t>& B,
                                     std::size_t& wa, std::size_t& wb) {
  std::vector<Vec> pa(A.size()), pb(B.size());
  for (std::size_t i = 0; i < A.size(); ++i) pa[i] = lat.point(A[i]);
  for (std::size_t i = 0; i < B.size(); ++i) pb[i] = lat.point(B[i]);
  double best = -1.0;
  wa = wb = npos;
  auto directed = [&](const std::vector<std::size_t>& from, const std::vector<Vec>& fp,
                      const std::vector<std::size_t>& to, const std::vector<Vec>& tp,
                      bool flip) {
    for (std::size_t i = 0; i < from.size(); ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      std::size_t arg = npos;
      for (std::size_t j = 0; j < to.size(); ++j) {
        double d = euclidean(fp[i], tp[j]);
        if (d < nearest) {
          nearest = d;
          arg = to[j];
        }
      }
      if (nearest > best) {
        best = nearest;
        wa = flip ? arg : from[i];
        wb = flip ? from[i] : arg;
      }
    }
  };
  directed(A, pa, B, pb, false);
  directed(B, pb, A, pa, true);
  return best;
}

// boundary sample of one side on the flag grid
inline std::vector<std::size_t> boundary_sample(const Lattice& lat,
                                                const std::vector<CellState>& state,
                                                CellState side) {
  std::vector<std::size_t> out;
  const std::size_t total = lat.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (state[flat] != side) continue;
    bool frontier = false;
    for (std::size_t ax = 0; ax < lat.ticks.size() && !frontier; ++ax) {
      std::size_t idx = lat.axis_index(flat, ax);
      if (idx > 0 && state[flat - lat.strides[ax]] != side) frontier = true;
      if (idx + 1 < lat.ticks[ax].size() && state[flat + lat.strides[ax]] != side)
        frontier = true;
    }
    if (frontier) out.push_back(flat);
  }
  return out;
}

// box faces through the lower (corner=false) or upper (corner=true) corner;
// stand-in boundary for a side with no classified points yet
inline std::vector<std::size_t> corner_faces(const Lattice& lat, bool upper) {
  std::vector<std::size_t> out;
  const std::size_t total = lat.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    for (std::size_t ax = 0; ax < lat.ticks.size(); ++ax) {
      std::size_t idx = lat.axis_index(flat, ax);
      if ((upper && idx + 1 == lat.ticks[ax].size()) || (!upper && idx == 0)) {
        out.push_back(flat);
        break;
      }
    }
  }
  return out;
}

inline double frontier_gap_core(const Lattice& lat,
                                const std::vector<CellState>& state,
                                GapWitness* witness) {
  bool band = false, anyF1 = false, anyF2 = false;
  for (CellState s : state) {
    if (s == CellState::Unclassified || s == CellState::Unknown) band = true;
    if (s == CellState::InF1) anyF1 = true;
    if (s == CellState::InF2) anyF2 = true;
  }
  if (witness) witness->valid = false;
  if (!band) return 0.0;

  std::vector<std::size_t> B1 = anyF1 ? boundary_sample(lat, state, CellState::InF1)
                                      : corner_faces(lat, false);
  std::vector<std::size_t> B2 = anyF2 ? boundary_sample(lat, state, CellState::InF2)
                                      : corner_faces(lat, true);
  std::size_t wa = npos, wb = npos;
  double gap = hausdorff_with_witness(lat, B1, B2, wa, wb);
  if (witness && wa != npos && wb != npos) {
    witness->on_f1 = lat.point(wa);
    witness->on_f2 = lat.point(wb);
    witness->valid = true;
  }
  return gap;
}

}  // namespace detail

inline double frontier_gap(const LowerSet& F1, const UpperSet& F2, const Box& X,
                           double resolution, GapWitness* witness = nullptr) {
  Lattice lat = Lattice::over(X, resolution);
  std::vector<CellState> state(lat.size(), CellState::Unclassified);
  for (std::size_t flat = 0; flat < lat.size(); ++flat) {
    Vec p = lat.point(flat);
    bool in1 = member_lower(F1, p);
    bool in2 = member_upper(F2, p);
    if (in1 && in2) {
      std::string msg = "frontier_gap: point in both sets at (";
      for (std::size_t i = 0; i < p.size(); ++i)
        msg += (i ? "," : "") + format_double(p[i]);
      throw std::runtime_error(msg + ")");
    }
    if (in1) state[flat] = CellState::InF1;
    else if (in2) state[flat] = CellState::InF2;
  }
  return detail::frontier_gap_core(lat, state, witness);
}

}  // namespace rcis
