#include "nfield/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <optional>
#include <istream>
#include <ostream>
#include <string>

#include "nfield/error.hpp"

namespace nfield {
namespace {

constexpr std::array<char, 4> kMagic{'N', 'F', 'L', 'D'};

template <typename U>
void put_le(std::string& buf, U value) {
  for (std::size_t i = 0; i < sizeof(U); ++i)
    buf.push_back(static_cast<char>((value >> (8 * i)) & 0xffu));
}

void put_f64(std::string& buf, double v) { put_le(buf, std::bit_cast<std::uint64_t>(v)); }

template <typename U>
U get_le(const unsigned char* p) {
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_le<std::uint64_t>(p)); }

// Reads exactly n bytes or reports how many were available.
std::size_t read_bytes(std::istream& in, unsigned char* dst, std::size_t n) {
  in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
  return static_cast<std::size_t>(in.gcount());
}

}  // namespace

std::size_t write_snapshot(const Field& field, std::ostream& out) {
  const GridSpec& g = field.grid;
  std::string buf;
  buf.reserve(snapshot_header_size(g.dim()) + 8 * field.values.size());
  buf.append(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(buf, kSnapshotVersion);
  put_le<std::uint8_t>(buf, static_cast<std::uint8_t>(g.dim()));
  for (std::size_t i = 0; i < g.dim(); ++i) {
    put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(g.counts()[i]));
    put_f64(buf, g.spacing()[i]);
    put_f64(buf, g.origin()[i]);
  }
  for (double v : field.values) put_f64(buf, v);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw PersistenceError("failed to write snapshot");
  return buf.size();
}

std::size_t write_snapshot(const Field& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PersistenceError("cannot open " + path.string() + " for writing");
  return write_snapshot(field, out);
}

Field read_snapshot(std::istream& in) {
  using Kind = SnapshotError::Kind;
  std::array<unsigned char, 7> head{};
  if (read_bytes(in, head.data(), head.size()) != head.size())
    throw SnapshotError(Kind::Truncated, "snapshot header truncated");
  if (!std::equal(kMagic.begin(), kMagic.end(), head.begin(),
                  [](char a, unsigned char b) { return static_cast<unsigned char>(a) == b; }))
    throw SnapshotError(Kind::BadMagic, "bad snapshot magic");
  const auto version = get_le<std::uint16_t>(head.data() + 4);
  if (version != kSnapshotVersion)
    throw SnapshotError(Kind::UnsupportedVersion,
                        "unsupported snapshot version " + std::to_string(version));
  const std::size_t dim = head[6];
  if (dim < 1 || dim > 3)
    throw SnapshotError(Kind::Malformed, "snapshot dimension " + std::to_string(dim) + " not in 1..3");

  std::vector<std::size_t> counts(dim);
  std::vector<double> spacing(dim), origin(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::array<unsigned char, 20> axis{};
    if (read_bytes(in, axis.data(), axis.size()) != axis.size())
      throw SnapshotError(Kind::Truncated, "snapshot axis header truncated");
    counts[i] = get_le<std::uint32_t>(axis.data());
    spacing[i] = get_f64(axis.data() + 4);
    origin[i] = get_f64(axis.data() + 12);
  }

  std::optional<GridSpec> grid;
  try {
    grid.emplace(counts, spacing, origin);
  } catch (const Error& e) {
    throw SnapshotError(Kind::Malformed, std::string("invalid snapshot grid: ") + e.what());
  }

  const std::size_t n = grid->size();
  std::vector<unsigned char> payload(8 * n);
  const std::size_t got = read_bytes(in, payload.data(), payload.size());
  if (got != payload.size())
    throw SnapshotError(Kind::Truncated, "snapshot payload truncated: expected " +
                                             std::to_string(payload.size()) + " bytes, got " +
                                             std::to_string(got));
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) values[i] = get_f64(payload.data() + 8 * i);
  return Field(std::move(*grid), std::move(values));
}

Field read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PersistenceError("cannot open " + path.string() + " for reading");
  return read_snapshot(in);
}

}  // namespace nfield
