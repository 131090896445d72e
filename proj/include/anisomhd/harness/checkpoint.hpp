#pragma once

#include "anisomhd/state.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace anisomhd {

/// Binary state snapshot, all integers and floats little-endian:
///
///   "AMHD"                       4 bytes
///   format version               u32 (currently 1)
///   n1, n2, n3                   3 x u32
///   L1, L2, L3                   3 x f64
///   t                            f64
///   u1, u2, u3, b1, b2, b3       6 blocks of n1*n2*n3 (re, im) f64 pairs
///
/// Inside a block coefficients run in storage order: axis 1 slowest, and
/// along each axis index i holds mode i for i < n/2, i - n otherwise.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const State& s);
State read_checkpoint(std::istream& in);

/// Writes through a temporary file and renames, so a crash never leaves a
/// truncated checkpoint behind.
void write_checkpoint(const std::filesystem::path& path, const State& s);
State read_checkpoint(const std::filesystem::path& path);

}  // namespace anisomhd
