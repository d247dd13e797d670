#pragma once
// Seeded random draws of inputs, machine parameters, and blank states for
// verification runs. All draws are fully complex; the fixed default seed
// keeps verification output reproducible run to run.

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

#include "machine.hpp"

namespace qdel {

inline constexpr std::uint64_t default_seed = 12345;

// A uniformly random normalized pair of complex amplitudes (a Gaussian
// 4-vector scaled to the unit 3-sphere).
inline std::pair<Complex, Complex> random_normalized_pair(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double v[4];
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      n2 += x * x;
    }
  } while (n2 < 1e-12);
  const double inv = 1.0 / std::sqrt(n2);
  return {Complex(v[0] * inv, v[1] * inv), Complex(v[2] * inv, v[3] * inv)};
}

inline QubitState random_qubit_state(std::mt19937_64& rng) {
  auto [a, b] = random_normalized_pair(rng);
  return QubitState(a, b);
}

inline MachineParams random_machine_params(std::mt19937_64& rng) {
  // Redraw while p is too close to the excluded p = 0 machine.
  while (true) {
    auto [p, q] = random_normalized_pair(rng);
    if (std::abs(p) > 1e-6) return MachineParams(p, q);
  }
}

inline BlankState random_blank_state(std::mt19937_64& rng) {
  auto [m0, m1] = random_normalized_pair(rng);
  return BlankState(m0, m1);
}

}  // namespace qdel
