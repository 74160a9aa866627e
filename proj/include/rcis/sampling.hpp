#pragma once
// Low-discrepancy sampling helpers shared by the derivative checks and the
// Lipschitz estimator. Halton points are deterministic, so every check that
// uses them is reproducible without seed plumbing.

#include <cstdint>
#include <vector>

namespace rcis {

// van der Corput radical inverse in the given base
inline double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base;
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

// point i (0-based) of the Halton sequence in [0,1]^dim; bases repeat past
// the table, which none of the shipped models get close to
inline std::vector<double> halton_point(std::uint64_t i, std::size_t dim) {
  static const unsigned bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  constexpr std::size_t nbases = sizeof(bases) / sizeof(bases[0]);
  std::vector<double> p(dim);
  for (std::size_t k = 0; k < dim; ++k)
    p[k] = radical_inverse(i + 1, bases[k % nbases]);
  return p;
}

}  // namespace rcis
