#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "nfield/grid.hpp"

namespace nfield {

// Binary layout, all little-endian:
//   "NFLD" | u16 version (=1) | u8 dim | dim x (u32 count, f64 spacing, f64 origin)
//   | values row-major as f64

inline constexpr std::uint16_t kSnapshotVersion = 1;

constexpr std::size_t snapshot_header_size(std::size_t dim) { return 4 + 2 + 1 + dim * (4 + 8 + 8); }

std::size_t write_snapshot(const Field& field, std::ostream& out);
std::size_t write_snapshot(const Field& field, const std::filesystem::path& path);

Field read_snapshot(std::istream& in);
Field read_snapshot(const std::filesystem::path& path);

}  // namespace nfield
