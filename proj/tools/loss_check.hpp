#pragma once

#include <cstdint>

namespace darkseg::cli {

/// Verifies every analytic loss gradient against central finite differences
/// (h = 1e-5) at 100 seeded random points per loss, with probabilities
/// sampled in [0.05, 0.95]. Prints the max relative error per loss and
/// returns true when all stay below 1e-4.
bool run_loss_check(std::uint64_t seed, bool verbose);

} // namespace darkseg::cli
