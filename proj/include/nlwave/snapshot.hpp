#pragma once

#include "nlwave/spectral_grid.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>

namespace nlwave {

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// NLWV snapshot layout, all little-endian:
///   "NLWV" | u32 version | u32 n | u32 M | u32 N | f64 L | f64 t |
///   u values | v values
/// Values are M^n * N complex numbers stored as (re, im) f64 pairs in
/// row-major grid order with the fiber index fastest, physical
/// representation.
void write_snapshot(std::ostream &out, const State &state);
void write_snapshot(const std::filesystem::path &path, const State &state);

/// Reads a snapshot; fields are flagged real when every imaginary part is 0.
State read_snapshot(std::istream &in);
State read_snapshot(const std::filesystem::path &path);

} // namespace nlwave
