#pragma once

// Purpose tags for the documented seed-splitting contract. A consumer of
// stream (seed, tag[, index or path]) always draws in a fixed documented
// order, so independently generated components (per-atom drivers, per-vertex
// cuts, coupled mass/tree chains) are reproducible and can be shared across
// constructions that must see identical randomness.

#include <string_view>

namespace cpab::streams {

// Per-genealogical-index driver streams. The "mass" stream is the k-tuple of
// mass partitions s^u (drawn first, in row order); "colors" feeds the
// paintbox coloring of the cutting partitions; "perms" the k permutations.
inline constexpr std::string_view kDriverMass = "driver-mass";
inline constexpr std::string_view kDriverColors = "driver-colors";
inline constexpr std::string_view kDriverPerms = "driver-perms";

// Continuous-time constructions.
inline constexpr std::string_view kAtomTimes = "atom-times";
inline constexpr std::string_view kAtomDriver = "atom-driver";

}  // namespace cpab::streams
