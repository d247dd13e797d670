#pragma once
// Test-only constructions that deliberately violate machine validity. Kept
// out of the umbrella header and the production modules so production code
// cannot build invalid machines.

#include <array>
#include <vector>

#include "machine.hpp"

namespace qdel::testing {

// Basis images built with a degraded ancilla whose error-branch flag state
// coincides with the resting state (<A|A0> = 1). The Gram matrix then picks
// up blank-state overlaps (e.g. entry (00,01) becomes p* m1*), so the action
// is not an isometry for a generic machine.
inline std::array<std::vector<Complex>, 4> degraded_ancilla_images(const MachineParams& mp,
                                                                   const BlankState& blank) {
  return detail::raw_basis_images(mp, blank, /*a0_index=*/0, /*a1_index=*/2);
}

}  // namespace qdel::testing
