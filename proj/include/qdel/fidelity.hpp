#pragma once
// Closed-form fidelities for the deletion machine and the brute-force
// simulation oracle they are validated against.
//
// f1 is the retention fidelity <in| rho1 |in> of the kept mode; f2 is the
// deletion fidelity <S| rho2 |S> of the deleted mode against the blank state.
// Every form in this header agrees with the simulation oracle to numerical
// precision. Verbatim forms from the reproduced source — including its f1
// variant whose retention cross term carries the wrong sign — live in
// published.hpp and are quarantined there.

#include <complex>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "machine.hpp"

namespace qdel {

inline const SystemLayout& qubit_layout() {
  static const SystemLayout layout({2}, {"qubit"});
  return layout;
}

// Fidelity range slack: closed forms may stray this far outside [0, 1].
inline constexpr double fidelity_range_tol = 1e-12;

struct FidelityPair {
  double f1, f2, delta;  // delta = f2 - f1 exactly as computed
  FidelityPair(double f1_, double f2_) : f1(f1_), f2(f2_), delta(f2_ - f1_) {
    for (double f : {f1, f2}) {
      if (!(f >= -fidelity_range_tol && f <= 1.0 + fidelity_range_tol)) {
        throw std::invalid_argument("FidelityPair: fidelity outside [0, 1] beyond tolerance");
      }
    }
  }
};

// Retention fidelity in closed form, valid for complex a, b, q:
//   f1 = 1 - (2 - q - q*) |a|^2 |b|^2.
// Follows from the reduced state of the kept mode, whose off-diagonal is
// (q|a|^2 + q*|b|^2) a b*; the cross term enters <in|rho1|in> with a plus
// sign, so f1 -> 1 as q -> 1 (the machine degenerates to the identity).
inline double f1_closed(const QubitState& in, Complex q) {
  if (!is_finite(q) || std::abs(q) > 1.0 + norm_tol) {
    throw std::invalid_argument("f1_closed: |q| must be <= 1");
  }
  const double A = std::norm(in.a) * std::norm(in.b);
  return 1.0 - (2.0 - 2.0 * q.real()) * A;
}

// Deletion fidelity in closed form for complex a, b, p, q, m0, m1:
//   f2 = |p|^2 (1 - 2A) + |q|^2 (|a|^4 |m0|^2 + |b|^4 |m1|^2) + A
//        + 2 Re[ a b* m0* m1 (q |a|^2 + q* |b|^2) ],   A = |a|^2 |b|^2.
inline double f2_closed_general(const QubitState& in, const MachineParams& mp,
                                const BlankState& blank) {
  const double a2 = std::norm(in.a), b2 = std::norm(in.b);
  const double A = a2 * b2;
  double f = std::norm(mp.p) * (1.0 - 2.0 * A);
  f += std::norm(mp.q) * (a2 * a2 * std::norm(blank.m0) + b2 * b2 * std::norm(blank.m1));
  f += A;
  const Complex cross = in.a * std::conj(in.b) * std::conj(blank.m0) * blank.m1 *
                        (mp.q * a2 + std::conj(mp.q) * b2);
  f += 2.0 * cross.real();
  return f;
}

// Deletion fidelity specialized to the |+> blank (m0 = m1 = 1/sqrt(2)):
//   f2 = (1 - |q|^2/2)(1 - 2A) + A + Re[ a b* (q |a|^2 + q* |b|^2) ].
inline double f2_plus_blank(const QubitState& in, const MachineParams& mp) {
  const double a2 = std::norm(in.a), b2 = std::norm(in.b);
  const double A = a2 * b2;
  double f = (1.0 - 0.5 * std::norm(mp.q)) * (1.0 - 2.0 * A) + A;
  const Complex cross = in.a * std::conj(in.b) * (mp.q * a2 + std::conj(mp.q) * b2);
  f += cross.real();
  return f;
}

namespace detail {
inline void require_real_restriction(double a, double b, double q, const char* what) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(q)) {
    throw std::invalid_argument(std::string(what) + ": non-finite argument");
  }
  if (std::abs(a * a + b * b - 1.0) > norm_tol) {
    throw std::invalid_argument(std::string(what) + ": a^2 + b^2 must be 1");
  }
  if (std::abs(q) > 1.0 + norm_tol) {
    throw std::invalid_argument(std::string(what) + ": |q| must be <= 1");
  }
}
}  // namespace detail

// Real restriction of f1_closed (real a, b and real q; q may be negative,
// which is the mirror image q -> -q, ab -> -ab of the positive branch):
//   f1 = 1 - 2 a^2 b^2 (1 - q).
inline double f1_real(double a, double b, double q) {
  detail::require_real_restriction(a, b, q, "f1_real");
  return 1.0 - 2.0 * a * a * b * b * (1.0 - q);
}

// Real restriction of the deletion fidelity with the |+> blank:
//   f2 = (1 - 2 a^2 b^2)(1 - q^2/2) + q a b + a^2 b^2.
inline double f2_real(double a, double b, double q) {
  detail::require_real_restriction(a, b, q, "f2_real");
  const double A = a * a * b * b;
  return (1.0 - 2.0 * A) * (1.0 - 0.5 * q * q) + q * a * b + A;
}

// f2 - f1 under the matching oracle-consistent closed forms.
inline double delta_f(const QubitState& in, const MachineParams& mp, const BlankState& blank) {
  return f2_closed_general(in, mp, blank) - f1_closed(in, mp.q);
}

// Closed-form reduced state of the kept mode (independent of the blank):
//   rho1 = [[|a|^2, c],[c*, |b|^2]] with c = (q|a|^2 + q*|b|^2) a b*.
inline DensityMatrix rho1_closed(const QubitState& in, const MachineParams& mp) {
  const double a2 = std::norm(in.a), b2 = std::norm(in.b);
  const Complex c = (mp.q * a2 + std::conj(mp.q) * b2) * in.a * std::conj(in.b);
  return DensityMatrix(2, {Complex{a2}, c, std::conj(c), Complex{b2}});
}

// Closed-form reduced state of the deleted mode:
//   rho2 = |p|^2 (|a|^4 + |b|^4) |S><S|
//        + (|q|^2 |a|^4 + A)|0><0| + (|q|^2 |b|^4 + A)|1><1|
//        + (q|a|^2 + q*|b|^2) a b* |0><1| + h.c.
inline DensityMatrix rho2_closed(const QubitState& in, const MachineParams& mp,
                                 const BlankState& blank) {
  const double a2 = std::norm(in.a), b2 = std::norm(in.b);
  const double A = a2 * b2;
  const double s = std::norm(mp.p) * (a2 * a2 + b2 * b2);
  const double q2 = std::norm(mp.q);
  const Complex off = s * blank.m0 * std::conj(blank.m1) +
                      (mp.q * a2 + std::conj(mp.q) * b2) * in.a * std::conj(in.b);
  const Complex d0{s * std::norm(blank.m0) + q2 * a2 * a2 + A};
  const Complex d1{s * std::norm(blank.m1) + q2 * b2 * b2 + A};
  return DensityMatrix(2, {d0, off, std::conj(off), d1});
}

// Brute-force oracle: simulate the machine on the full 12-dim space, reduce
// each mode, and evaluate both fidelities directly. Shares no algebra with
// the closed forms above — this is the arbiter they are validated against.
inline FidelityPair oracle_fidelities(const QubitState& in, const MachineParams& mp,
                                      const BlankState& blank) {
  const DensityMatrix rho1 = reduced_state(mp, blank, in, MachineMode::mode1);
  const DensityMatrix rho2 = reduced_state(mp, blank, in, MachineMode::mode2);
  const PureState target1(qubit_layout(), {in.a, in.b});
  const PureState target2(qubit_layout(), {blank.m0, blank.m1});
  return FidelityPair(fidelity_pure(target1, rho1), fidelity_pure(target2, rho2));
}

}  // namespace qdel
