#pragma once
// The probabilistic deletion machine on mode1(2) x mode2(2) x ancilla(3).
//
// Action on the joint basis (ancilla basis written A, A0, A1):
//   |00>|A> -> p |0>|S>|A0> + q |00>|A>
//   |01>|A> ->   |01>|A>
//   |10>|A> ->   |10>|A>
//   |11>|A> -> p |1>|S>|A1> + q |11>|A>
// with |p|^2 + |q|^2 = 1, p != 0, and blank state |S> = m0|0> + m1|1>.
// q = 0 recovers the ideal (error-free) deletion machine.

#include <array>
#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace qdel {

// A single-qubit input a|0> + b|1>, normalized within norm_tol.
struct QubitState {
  Complex a, b;
  QubitState(Complex a_, Complex b_) : a(a_), b(b_) {
    if (!is_finite(a) || !is_finite(b)) {
      throw std::invalid_argument("QubitState: non-finite amplitude");
    }
    if (std::abs(std::norm(a) + std::norm(b) - 1.0) > norm_tol) {
      throw std::invalid_argument("QubitState: |a|^2 + |b|^2 deviates from 1 beyond tolerance");
    }
  }
};

// Machine branch amplitudes: |p|^2 + |q|^2 = 1 within norm_tol, p != 0.
struct MachineParams {
  Complex p, q;
  MachineParams(Complex p_, Complex q_) : p(p_), q(q_) {
    if (!is_finite(p) || !is_finite(q)) {
      throw std::invalid_argument("MachineParams: non-finite parameter");
    }
    if (std::abs(std::norm(p) + std::norm(q) - 1.0) > norm_tol) {
      throw std::invalid_argument("MachineParams: |p|^2 + |q|^2 deviates from 1 beyond tolerance");
    }
    if (std::abs(p) <= norm_tol) {
      throw std::invalid_argument("MachineParams: p must be nonzero");
    }
  }
};

// The blank state |S> the deleted mode is steered toward, normalized.
struct BlankState {
  Complex m0, m1;
  BlankState(Complex m0_, Complex m1_) : m0(m0_), m1(m1_) {
    if (!is_finite(m0) || !is_finite(m1)) {
      throw std::invalid_argument("BlankState: non-finite amplitude");
    }
    if (std::abs(std::norm(m0) + std::norm(m1) - 1.0) > norm_tol) {
      throw std::invalid_argument("BlankState: |m0|^2 + |m1|^2 deviates from 1 beyond tolerance");
    }
  }
  // |+> = (|0> + |1>)/sqrt(2), the blank used throughout the analysis layer.
  static BlankState plus() {
    const double s = 0.7071067811865476;
    return BlankState(s, s);
  }
};

enum class MachineMode { mode1, mode2 };

namespace detail {

// Raw 12-dim images of |00 A>, |01 A>, |10 A>, |11 A>; the isometry check and
// the test-only degraded construction share this shape.
inline std::array<std::vector<Complex>, 4> raw_basis_images(const MachineParams& mp,
                                                            const BlankState& blank,
                                                            int a0_index, int a1_index) {
  const SystemLayout& L = SystemLayout::machine();
  std::array<std::vector<Complex>, 4> ims;
  for (auto& v : ims) v.assign(L.total_dim(), Complex{0.0});
  ims[0][L.flatten({0, 0, a0_index})] += mp.p * blank.m0;
  ims[0][L.flatten({0, 1, a0_index})] += mp.p * blank.m1;
  ims[0][L.flatten({0, 0, 0})] += mp.q;
  ims[1][L.flatten({0, 1, 0})] = 1.0;
  ims[2][L.flatten({1, 0, 0})] = 1.0;
  ims[3][L.flatten({1, 0, a1_index})] += mp.p * blank.m0;
  ims[3][L.flatten({1, 1, a1_index})] += mp.p * blank.m1;
  ims[3][L.flatten({1, 1, 0})] += mp.q;
  return ims;
}

}  // namespace detail

// Images of the four input basis states |ij>|A> as normalized pure states.
inline std::array<PureState, 4> machine_basis_images(const MachineParams& mp,
                                                     const BlankState& blank) {
  auto raw = detail::raw_basis_images(mp, blank, /*a0_index=*/1, /*a1_index=*/2);
  const SystemLayout& L = SystemLayout::machine();
  return {PureState(L, std::move(raw[0])), PureState(L, std::move(raw[1])),
          PureState(L, std::move(raw[2])), PureState(L, std::move(raw[3]))};
}

struct IsometryReport {
  bool ok;
  double max_deviation;  // max entrywise |Gram - I|
};

// Gram-matrix check: the four images must be orthonormal for the linear
// extension of the machine action to be an isometry on span{|ij>|A>}.
inline IsometryReport gram_identity_check(std::span<const std::vector<Complex>> images) {
  double dev = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = 0; j < images.size(); ++j) {
      Complex g = 0.0;
      for (std::size_t k = 0; k < images[i].size(); ++k) {
        g += std::conj(images[i][k]) * images[j][k];
      }
      const Complex expected = (i == j) ? Complex{1.0} : Complex{0.0};
      dev = std::max(dev, std::abs(g - expected));
    }
  }
  return {dev <= isometry_tol, dev};
}

inline IsometryReport verify_isometry(const MachineParams& mp, const BlankState& blank) {
  auto raw = detail::raw_basis_images(mp, blank, 1, 2);
  return gram_identity_check(raw);
}

// Machine output for input (a|0> + b|1>) on both modes:
//   a^2 im00 + ab im01 + ab im10 + b^2 im11.
inline PureState apply_machine(const MachineParams& mp, const BlankState& blank,
                               const QubitState& in) {
  auto raw = detail::raw_basis_images(mp, blank, 1, 2);
  const Complex c[4] = {in.a * in.a, in.a * in.b, in.a * in.b, in.b * in.b};
  std::vector<Complex> out(raw[0].size(), Complex{0.0});
  for (int t = 0; t < 4; ++t) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] += c[t] * raw[t][k];
  }
  return PureState(SystemLayout::machine(), std::move(out));
}

// Reduced state of the kept mode after deletion (2x2 density matrix).
inline DensityMatrix reduced_state(const MachineParams& mp, const BlankState& blank,
                                   const QubitState& in, MachineMode keep) {
  const PureState out = apply_machine(mp, blank, in);
  const DensityMatrix rho = outer(out);
  return partial_trace(rho, SystemLayout::machine(),
                       keep == MachineMode::mode1 ? "mode1" : "mode2");
}

}  // namespace qdel
