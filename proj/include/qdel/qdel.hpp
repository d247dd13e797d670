#pragma once
// Umbrella header: the deletion-machine simulator, its closed-form
// fidelities, and the analysis layer. (testing.hpp is intentionally not
// included here — it is a test-only boundary.)

#include "analysis.hpp"
#include "core.hpp"
#include "fidelity.hpp"
#include "machine.hpp"
#include "published.hpp"
#include "random.hpp"
#include "report.hpp"
