#pragma once
// Analysis layer: parameter sweeps, tables of deletion-fidelity extrema,
// optimal error amplitudes, the minimax deletion fidelity, and the
// error-beats-ideal crossover.
//
// Sweeps and tables work in the real restriction (real a, b, q with the |+>
// blank, q = +sqrt(1 - p^2)). The f2 columns are oracle-consistent and are
// spot-checked against the simulator on a seeded subsample; the f1 and delta
// columns reproduce published curves and therefore use published::f1_real
// (see published.hpp for that form's documented sign defect).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fidelity.hpp"
#include "published.hpp"
#include "random.hpp"

namespace qdel {

// Real amplitudes (a, b) with a >= |b| and a*b = ab; requires |ab| <= 0.5.
inline std::pair<double, double> amplitudes_from_ab(double ab) {
  if (!(std::abs(ab) <= 0.5)) {
    throw std::domain_error("amplitudes_from_ab: |ab| must be <= 0.5");
  }
  const double a = std::sqrt((1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * ab * ab))) / 2.0);
  return {a, ab / a};
}

// Non-negative real error amplitude paired with p in (0, 1].
inline double q_from_p(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("q_from_p: p must be in (0, 1]");
  }
  return std::sqrt(std::max(0.0, 1.0 - p * p));
}

// Error amplitude maximizing f2 for a fixed input: q* = ab / (1 - 2 (ab)^2).
// Negative for ab < 0 (the mirror image of the positive branch).
inline double optimal_q(double ab) {
  if (!(std::abs(ab) < 0.5)) {
    throw std::domain_error(
        "optimal_q: |ab| must be < 0.5 (at |ab| = 0.5 the optimum requires |q| = 1, "
        "i.e. the excluded p = 0 machine)");
  }
  return ab / (1.0 - 2.0 * ab * ab);
}

// Per-input maximum of f2 over the error amplitude:
//   max_f2(ab) = f2_real(a, b, optimal_q(ab)) = 1 - A + A / (2 (1 - 2A)).
inline double max_f2(double ab) {
  auto [a, b] = amplitudes_from_ab(ab);
  return f2_real(a, b, optimal_q(ab));
}

struct MinimaxResult {
  double A_star;  // worst-case A = (ab)^2
  double a_star;  // corresponding input amplitude, a^2 = (1 + sqrt(1-4A*))/2
  double value;   // min over inputs of max over q of f2
};

// The input minimizing the per-input maximum of f2. Setting the derivative
// of g(A) = 1 - A + A/(2(1-2A)) to zero gives (1-2A*)^2 = 1/2.
inline MinimaxResult minimax_f2() {
  const double A = (1.0 - 1.0 / std::sqrt(2.0)) / 2.0;
  const double a = std::sqrt((1.0 + std::sqrt(1.0 - 4.0 * A)) / 2.0);
  const double value = 1.0 - A + A / (2.0 * (1.0 - 2.0 * A));
  return {A, a, value};
}

// Smallest ab in (-0.5, 0.5) where the erroneous machine strictly beats the
// ideal one (f2 > 1 - (ab)^2), found by a 1001-point sign scan plus bisection
// to width 1e-9. Absent for p = 1: with q = 0 the two machines coincide.
inline std::optional<double> crossover_ab(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::domain_error("crossover_ab: p must be in (0, 1]");
  }
  const double q = q_from_p(p);
  if (q <= norm_tol) return std::nullopt;
  auto diff = [q](double x) {
    auto [a, b] = amplitudes_from_ab(x);
    return f2_real(a, b, q) - (1.0 - x * x);
  };
  const int scan = 1001;
  double prev_x = -0.5, prev_d = diff(prev_x);
  for (int k = 1; k < scan; ++k) {
    const double x = -0.5 + static_cast<double>(k) / (scan - 1);
    const double d = diff(x);
    if (prev_d < 0.0 && d >= 0.0) {
      double lo = prev_x, hi = x;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) < 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_x = x;
    prev_d = d;
  }
  return std::nullopt;  // unreachable for q > 0: diff(-0.5) < 0 < diff(0.5)
}

enum class SweepVariable { p, ab, a };

// A uniform one-variable grid. Variables:
//   p  — sweep p with the input (fixed_a, fixed_b) held fixed;
//   ab — sweep the input product ab with fixed_p held fixed;
//   a  — sweep the input amplitude a (b = +sqrt(1-a^2)) reporting the
//        q-OPTIMIZED deletion fidelity max_f2 per point, i.e. the per-input
//        optimum curve; no parameter is held fixed.
struct SweepSpec {
  SweepVariable variable;
  int steps;
  double grid_min, grid_max;
  double fixed_a = 1.0, fixed_b = 0.0;  // variable == p
  double fixed_p = 1.0;                 // variable == ab

  static SweepSpec over_p(double a, double b, int steps = 1000, double lo = 1e-3,
                          double hi = 1.0) {
    SweepSpec s{SweepVariable::p, steps, lo, hi};
    s.fixed_a = a;
    s.fixed_b = b;
    return s;
  }
  static SweepSpec over_ab(double p, int steps = 1001, double lo = -0.5, double hi = 0.5) {
    SweepSpec s{SweepVariable::ab, steps, lo, hi};
    s.fixed_p = p;
    return s;
  }
  static SweepSpec over_a(int steps = 999, double lo = 1e-3, double hi = 1.0) {
    return SweepSpec{SweepVariable::a, steps, lo, hi};
  }

  void validate() const {
    if (steps < 2) throw std::invalid_argument("SweepSpec: steps must be >= 2");
    if (!(grid_min < grid_max)) throw std::invalid_argument("SweepSpec: grid_min must be < grid_max");
    switch (variable) {
      case SweepVariable::p:
        if (!(grid_min > 0.0 && grid_max <= 1.0)) {
          throw std::domain_error("SweepSpec: p grid must lie in (0, 1]");
        }
        if (std::abs(fixed_a * fixed_a + fixed_b * fixed_b - 1.0) > norm_tol) {
          throw std::invalid_argument("SweepSpec: fixed input must satisfy a^2 + b^2 = 1");
        }
        break;
      case SweepVariable::ab:
        if (!(grid_min >= -0.5 && grid_max <= 0.5)) {
          throw std::domain_error("SweepSpec: ab grid must lie in [-0.5, 0.5]");
        }
        if (!(fixed_p > 0.0 && fixed_p <= 1.0)) {
          throw std::domain_error("SweepSpec: fixed p must be in (0, 1]");
        }
        break;
      case SweepVariable::a:
        if (!(grid_min >= 0.0 && grid_max <= 1.0)) {
          throw std::domain_error("SweepSpec: a grid must lie in [0, 1]");
        }
        break;
    }
  }
};

struct SweepRow {
  double x, f1, f2, delta;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepRow> rows;
  int oracle_spot_checks = 0;        // rows re-validated against the simulator
  double oracle_spot_max_dev = 0.0;  // max |f2 - oracle f2| among them
};

namespace detail {

// (a, b, q) at one grid point of a sweep.
struct SweepPoint {
  double a, b, q;
};

inline SweepPoint sweep_point(const SweepSpec& spec, double x) {
  switch (spec.variable) {
    case SweepVariable::p:
      return {spec.fixed_a, spec.fixed_b, q_from_p(x)};
    case SweepVariable::ab: {
      auto [a, b] = amplitudes_from_ab(x);
      return {a, b, q_from_p(spec.fixed_p)};
    }
    case SweepVariable::a:
    default: {
      const double a = std::min(x, 1.0);
      const double b = std::sqrt(std::max(0.0, 1.0 - a * a));
      // Guard the |ab| < 0.5 domain of optimal_q against rounding at a = b.
      double ab = a * b;
      if (std::abs(ab) >= 0.5) ab = std::copysign(0.5 - 5e-17, ab);
      return {a, b, optimal_q(ab)};
    }
  }
}

}  // namespace detail

// Evaluate a sweep and spot-check the f2 column against the simulation
// oracle on a seeded ~1% subsample (rows whose machine parameters are too
// close to the excluded p = 0 point are skipped). Throws if the spot check
// deviates beyond 1e-10.
inline SweepResult sweep(const SweepSpec& spec, std::uint64_t seed = default_seed) {
  spec.validate();
  SweepResult result{spec, {}, 0, 0.0};
  result.rows.reserve(spec.steps);
  for (int k = 0; k < spec.steps; ++k) {
    const double x =
        spec.grid_min + (spec.grid_max - spec.grid_min) * k / static_cast<double>(spec.steps - 1);
    const auto pt = detail::sweep_point(spec, x);
    const double f2 = f2_real(pt.a, pt.b, pt.q);
    const double f1 = published::f1_real(pt.a, pt.b, pt.q);
    result.rows.push_back({x, f1, f2, f2 - f1});
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, spec.steps - 1);
  const int checks = (spec.steps + 99) / 100;
  for (int c = 0; c < checks; ++c) {
    const auto& row = result.rows[pick(rng)];
    const auto pt = detail::sweep_point(spec, row.x);
    const double p = std::sqrt(std::max(0.0, 1.0 - pt.q * pt.q));
    if (p <= 1e-6) continue;  // degenerate corner; the formula value stands
    const auto pair =
        oracle_fidelities(QubitState(pt.a, pt.b), MachineParams(p, pt.q), BlankState::plus());
    const double dev = std::abs(row.f2 - pair.f2);
    result.oracle_spot_max_dev = std::max(result.oracle_spot_max_dev, dev);
    ++result.oracle_spot_checks;
    if (dev > 1e-10) {
      throw std::runtime_error("sweep: f2 disagrees with the simulation oracle beyond 1e-10");
    }
  }
  return result;
}

struct TableRow {
  double key;  // ab (table 1) or p (table 2)
  double f2_min;
  double x_at_min;
  bool min_at_limit = false;   // attained in the open-boundary limit (arg 0)
  bool min_symmetric = false;  // attained at both +/- x_at_min
  double f2_max;
  double x_at_max;
  bool max_at_limit = false;
  double f2_sd = 0.0;  // table 1 only
};

inline constexpr std::array<double, 8> table1_ab_values{-0.25, -0.10, 0.10, 0.25,
                                                        0.30,  0.35,  0.40, 0.45};
inline constexpr std::array<double, 8> table2_p_values{0.25, 0.50, 0.75, 0.90,
                                                       0.95, 0.99, 0.999, 1.00};

// Extrema and sample SD of f2 over p in [grid_min, 1] for each fixed ab.
// The p -> 0 boundary is evaluated analytically (q = 1) and flagged as a
// limit row when it undercuts the grid minimum; interior maxima are refined
// through optimal_q when the optimal error amplitude is feasible.
inline std::vector<TableRow> build_table1(std::span<const double> ab_values = table1_ab_values,
                                          int grid_points = 1000, double grid_min = 1e-3) {
  if (grid_points < 2 || !(grid_min > 0.0 && grid_min < 1.0)) {
    throw std::invalid_argument("build_table1: bad grid");
  }
  std::vector<TableRow> rows;
  rows.reserve(ab_values.size());
  for (double ab : ab_values) {
    auto [a, b] = amplitudes_from_ab(ab);
    TableRow row{};
    row.key = ab;
    double sum = 0.0, sum_sq = 0.0;
    double best_min = 2.0, best_max = -1.0, arg_min = 0.0, arg_max = 0.0;
    for (int k = 0; k < grid_points; ++k) {
      const double p = grid_min + (1.0 - grid_min) * k / static_cast<double>(grid_points - 1);
      const double f2 = f2_real(a, b, q_from_p(p));
      sum += f2;
      sum_sq += f2 * f2;
      if (f2 < best_min) {
        best_min = f2;
        arg_min = p;
      }
      if (f2 > best_max) {
        best_max = f2;
        arg_max = p;
      }
    }
    const double mean = sum / grid_points;
    row.f2_sd = std::sqrt(std::max(0.0, (sum_sq - grid_points * mean * mean) / (grid_points - 1)));

    row.f2_min = best_min;
    row.x_at_min = arg_min;
    const double boundary = f2_real(a, b, 1.0);  // q = 1, the p -> 0 limit
    if (boundary < best_min) {
      row.f2_min = boundary;
      row.x_at_min = 0.0;
      row.min_at_limit = true;
    }

    row.f2_max = best_max;
    row.x_at_max = arg_max;
    const double q_star = optimal_q(ab);
    if (q_star > 0.0 && q_star < 1.0) {
      const double interior = f2_real(a, b, q_star);
      if (interior > best_max) {
        row.f2_max = interior;
        row.x_at_max = std::sqrt(1.0 - q_star * q_star);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

// Extrema of f2 over ab in [-0.5, 0.5] for each fixed p. Interior maxima are
// refined through the stationary point ab* = q / (2 p^2) when it is feasible;
// the p = 1 row's maximum is the degenerate ab -> 0 limit (flagged), and its
// symmetric +/-0.5 minima carry the symmetry flag with the smallest x first.
inline std::vector<TableRow> build_table2(std::span<const double> p_values = table2_p_values,
                                          int grid_points = 1001) {
  if (grid_points < 3) throw std::invalid_argument("build_table2: bad grid");
  std::vector<TableRow> rows;
  rows.reserve(p_values.size());
  for (double p : p_values) {
    const double q = q_from_p(p);
    TableRow row{};
    row.key = p;
    std::vector<double> values(grid_points);
    double best_min = 2.0, best_max = -1.0, arg_min = 0.0, arg_max = 0.0;
    for (int k = 0; k < grid_points; ++k) {
      const double ab = -0.5 + 1.0 * k / static_cast<double>(grid_points - 1);
      auto [a, b] = amplitudes_from_ab(ab);
      const double f2 = f2_real(a, b, q);
      values[k] = f2;
      if (f2 < best_min) {
        best_min = f2;
        arg_min = ab;
      }
      if (f2 > best_max) {
        best_max = f2;
        arg_max = ab;
      }
    }
    row.f2_min = best_min;
    row.x_at_min = arg_min;
    // Symmetric minimum: the mirrored grid point attains the same value.
    const int mirror = grid_points - 1 - static_cast<int>(std::lround(
                           (arg_min + 0.5) * (grid_points - 1)));
    if (mirror >= 0 && mirror < grid_points && std::abs(values[mirror] - best_min) <= 1e-12 &&
        std::abs(arg_min) > 1e-12) {
      row.min_symmetric = true;
    }

    row.f2_max = best_max;
    row.x_at_max = arg_max;
    if (q > norm_tol) {
      const double ab_star = q / (2.0 * p * p);
      if (ab_star < 0.5) {
        auto [a, b] = amplitudes_from_ab(ab_star);
        const double interior = f2_real(a, b, q);
        if (interior > best_max) {
          row.f2_max = interior;
          row.x_at_max = ab_star;
        }
      }
    } else {
      // Ideal machine: f2 = 1 - (ab)^2, supremum 1 in the ab -> 0 limit.
      row.f2_max = 1.0;
      row.x_at_max = 0.0;
      row.max_at_limit = true;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qdel
