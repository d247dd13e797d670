// Machine layer: basis images, isometry verification (with a deliberately
// degraded negative control), linear action, and reduced states.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "qdel/fidelity.hpp"
#include "qdel/machine.hpp"
#include "qdel/random.hpp"
#include "qdel/testing.hpp"

using qdel::BlankState;
using qdel::Complex;
using qdel::MachineMode;
using qdel::MachineParams;
using qdel::QubitState;
using qdel::SystemLayout;

TEST_CASE("basis images realize the machine action") {
  const MachineParams mp(0.6, 0.8);
  const BlankState blank = BlankState::plus();
  const SystemLayout& L = SystemLayout::machine();
  const auto ims = qdel::machine_basis_images(mp, blank);
  const double s = 0.7071067811865476;

  // |00>|A> -> p |0>|S>|A0> + q |00>|A>
  CHECK(std::abs(ims[0].amplitude(L.flatten({0, 0, 1})) - Complex{0.6 * s}) <= 1e-15);
  CHECK(std::abs(ims[0].amplitude(L.flatten({0, 1, 1})) - Complex{0.6 * s}) <= 1e-15);
  CHECK(std::abs(ims[0].amplitude(L.flatten({0, 0, 0})) - Complex{0.8}) <= 1e-15);
  // |01>|A> and |10>|A> are untouched.
  CHECK(std::abs(ims[1].amplitude(L.flatten({0, 1, 0})) - Complex{1.0}) <= 1e-15);
  CHECK(std::abs(ims[2].amplitude(L.flatten({1, 0, 0})) - Complex{1.0}) <= 1e-15);
  // |11>|A> -> p |1>|S>|A1> + q |11>|A>
  CHECK(std::abs(ims[3].amplitude(L.flatten({1, 0, 2})) - Complex{0.6 * s}) <= 1e-15);
  CHECK(std::abs(ims[3].amplitude(L.flatten({1, 1, 2})) - Complex{0.6 * s}) <= 1e-15);
  CHECK(std::abs(ims[3].amplitude(L.flatten({1, 1, 0})) - Complex{0.8}) <= 1e-15);

  // Everything else is zero: total weight per image is already 1.
  for (const auto& im : ims) {
    double n2 = 0.0;
    for (Complex z : im.amplitudes()) n2 += std::norm(z);
    CHECK(std::abs(n2 - 1.0) <= 1e-14);
  }
}

TEST_CASE("machine action is an isometry on the input span") {
  CHECK(qdel::verify_isometry(MachineParams(0.6, 0.8), BlankState::plus()).ok);
  CHECK(qdel::verify_isometry(MachineParams(Complex(0.0, 0.6), 0.8),
                              BlankState(Complex(0.28, 0.96), 0.0))
            .ok);
  // Error-free machine (q = 0).
  CHECK(qdel::verify_isometry(MachineParams(1.0, 0.0), BlankState::plus()).ok);

  std::mt19937_64 rng(qdel::default_seed);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto report =
        qdel::verify_isometry(qdel::random_machine_params(rng), qdel::random_blank_state(rng));
    REQUIRE(report.ok);
    worst = std::max(worst, report.max_deviation);
  }
  CHECK(worst <= qdel::isometry_tol);
}

TEST_CASE("degraded ancilla breaks the isometry") {
  const MachineParams mp(0.6, 0.8);
  const BlankState blank = BlankState::plus();
  const auto degraded = qdel::testing::degraded_ancilla_images(mp, blank);
  const auto report = qdel::gram_identity_check(degraded);
  CHECK_FALSE(report.ok);
  // The (00, 01) Gram entry collapses to p* m1* = 0.6/sqrt(2) here.
  CHECK(report.max_deviation > 0.1);
}

TEST_CASE("machine output is the linear extension of the basis images") {
  std::mt19937_64 rng(42);
  const SystemLayout& L = SystemLayout::machine();
  for (int t = 0; t < 50; ++t) {
    const QubitState in = qdel::random_qubit_state(rng);
    const MachineParams mp = qdel::random_machine_params(rng);
    const BlankState blank = qdel::random_blank_state(rng);
    const auto raw = qdel::detail::raw_basis_images(mp, blank, 1, 2);
    const auto out = qdel::apply_machine(mp, blank, in);
    for (int k = 0; k < L.total_dim(); ++k) {
      const Complex expect = in.a * in.a * raw[0][k] + in.a * in.b * (raw[1][k] + raw[2][k]) +
                             in.b * in.b * raw[3][k];
      REQUIRE(std::abs(out.amplitude(k) - expect) <= 1e-14);
    }
  }

  // Basis inputs map to the corresponding images.
  const MachineParams mp(0.6, 0.8);
  const BlankState blank = BlankState::plus();
  const auto ims = qdel::machine_basis_images(mp, blank);
  const auto out0 = qdel::apply_machine(mp, blank, QubitState(1.0, 0.0));
  const auto out1 = qdel::apply_machine(mp, blank, QubitState(0.0, 1.0));
  for (int k = 0; k < L.total_dim(); ++k) {
    CHECK(std::abs(out0.amplitude(k) - ims[0].amplitude(k)) <= 1e-15);
    CHECK(std::abs(out1.amplitude(k) - ims[3].amplitude(k)) <= 1e-15);
  }
}

TEST_CASE("reduced states match their closed forms") {
  std::mt19937_64 rng(qdel::default_seed);
  for (int t = 0; t < 200; ++t) {
    const QubitState in = qdel::random_qubit_state(rng);
    const MachineParams mp = qdel::random_machine_params(rng);
    const BlankState blank = qdel::random_blank_state(rng);
    const auto rho1 = qdel::reduced_state(mp, blank, in, MachineMode::mode1);
    const auto rho2 = qdel::reduced_state(mp, blank, in, MachineMode::mode2);
    const auto rho1c = qdel::rho1_closed(in, mp);
    const auto rho2c = qdel::rho2_closed(in, mp, blank);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        REQUIRE(std::abs(rho1.at(i, j) - rho1c.at(i, j)) <= 1e-12);
        REQUIRE(std::abs(rho2.at(i, j) - rho2c.at(i, j)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("error-free machine resets the deleted mode exactly") {
  // q = 0: rho2 = (|a|^4 + |b|^4) |S><S| + |a|^2 |b|^2 I, independent of any
  // error branch; rho1 = diag(|a|^2, |b|^2).
  std::mt19937_64 rng(99);
  const BlankState blank = BlankState::plus();
  for (int t = 0; t < 50; ++t) {
    const QubitState in = qdel::random_qubit_state(rng);
    const MachineParams mp(Complex(0.6, 0.8), 0.0);  // |p| = 1, complex phase
    const auto rho1 = qdel::reduced_state(mp, blank, in, MachineMode::mode1);
    const auto rho2 = qdel::reduced_state(mp, blank, in, MachineMode::mode2);
    const double a2 = std::norm(in.a), b2 = std::norm(in.b);
    const double A = a2 * b2, w = a2 * a2 + b2 * b2;
    REQUIRE(std::abs(rho1.at(0, 0) - Complex{a2}) <= 1e-13);
    REQUIRE(std::abs(rho1.at(0, 1)) <= 1e-13);
    REQUIRE(std::abs(rho1.at(1, 1) - Complex{b2}) <= 1e-13);
    REQUIRE(std::abs(rho2.at(0, 0) - Complex{w * 0.5 + A}) <= 1e-13);
    REQUIRE(std::abs(rho2.at(0, 1) - Complex{w * 0.5}) <= 1e-13);
    REQUIRE(std::abs(rho2.at(1, 1) - Complex{w * 0.5 + A}) <= 1e-13);
  }
}

TEST_CASE("parameter structs reject invalid values") {
  REQUIRE_THROWS_AS(QubitState(0.8, 0.7), std::invalid_argument);
  REQUIRE_THROWS_AS(QubitState(std::nan(""), 0.0), std::invalid_argument);
  REQUIRE_NOTHROW(QubitState(Complex(0.6, 0.0), Complex(0.0, 0.8)));
  REQUIRE_THROWS_AS(MachineParams(1.0, 0.1), std::invalid_argument);
  REQUIRE_THROWS_AS(MachineParams(0.0, 1.0), std::invalid_argument);
  REQUIRE_NOTHROW(MachineParams(0.8, Complex(0.0, 0.6)));
  REQUIRE_THROWS_AS(BlankState(1.1, 0.0), std::invalid_argument);
  REQUIRE_NOTHROW(BlankState(0.0, 1.0));
}
