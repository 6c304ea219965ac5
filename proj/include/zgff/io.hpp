#ifndef ZGFF_IO_HPP
#define ZGFF_IO_HPP

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/surface.hpp"

namespace zgff {

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << v;
  return os.str();
}

/// Canonical text form of the model parameters, used for hashing.
inline std::string canonical(const ModelParams& m) {
  std::ostringstream os;
  os << std::setprecision(17) << "p=" << m.p << ";beta=" << m.beta << ";boundary=" << static_cast<int>(m.boundary.kind)
     << ":" << m.boundary.k << ":";
  for (bool b : m.boundary.arc) os << (b ? '1' : '0');
  for (const auto& [s, v] : m.boundary.custom) os << "(" << s.x << "," << s.y << ")=" << v;
  auto bound = [&os](const char* name, const BoundSpec& b) {
    os << ";" << name << "=" << static_cast<int>(b.kind) << ":" << b.value;
    for (const auto& r : b.regions) os << "[" << r.x0 << "," << r.y0 << "," << r.x1 << "," << r.y1 << "]=" << r.value;
  };
  bound("floor", m.floor);
  bound("ceiling", m.ceiling);
  os << ";H=" << m.plateau << ";n=" << m.level;
  return os.str();
}

inline std::uint64_t paramsHash(const ModelParams& m) { return fnv1a(canonical(m)); }

namespace detail {

inline void putU32(std::ostream& os, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b.data(), 4);
}
inline void putU64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
  os.write(b.data(), 8);
}
inline std::uint32_t getU32(std::istream& is) {
  std::array<unsigned char, 4> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 4)) throw StructuralError("snapshot truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t{b[i]} << (8 * i);
  return v;
}
inline std::uint64_t getU64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  if (!is.read(reinterpret_cast<char*>(b.data()), 8)) throw StructuralError("snapshot truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t{b[i]} << (8 * i);
  return v;
}

inline constexpr char kSnapshotMagic[8] = {'Z', 'G', 'F', 'F', 'S', 'N', 'P', '1'};

}  // namespace detail

/// Writes a snapshot; the byte layout is described in docs/snapshot-format.md.
inline void writeSnapshot(std::ostream& os, const SurfaceConfig& c, double p, double beta) {
  const bool hasFloor = c.hasAnyFloor(), hasCeil = c.hasAnyCeiling();
  os.write(detail::kSnapshotMagic, 8);
  detail::putU32(os, static_cast<std::uint32_t>(c.width()));
  detail::putU64(os, std::bit_cast<std::uint64_t>(p));
  detail::putU64(os, std::bit_cast<std::uint64_t>(beta));
  detail::putU32(os, (hasFloor ? 1u : 0u) | (hasCeil ? 2u : 0u));
  for (auto v : c.padded()) detail::putU32(os, static_cast<std::uint32_t>(v));
  const int L = c.width();
  auto interior = [&](const std::vector<std::int32_t>& a) {
    for (int y = 1; y <= L; ++y)
      for (int x = 1; x <= L; ++x) detail::putU32(os, static_cast<std::uint32_t>(a[c.index(x, y)]));
  };
  if (hasFloor) interior(c.paddedFloor());
  if (hasCeil) interior(c.paddedCeiling());
  if (!os) throw ResourceLimitError("snapshot write failed");
}

struct Snapshot {
  SurfaceConfig config;
  double p = 0.0;
  double beta = 0.0;
};

inline Snapshot readSnapshot(std::istream& is) {
  char magic[8];
  if (!is.read(magic, 8) || std::memcmp(magic, detail::kSnapshotMagic, 8) != 0)
    throw StructuralError("not a snapshot file (bad magic)");
  const auto L = detail::getU32(is);
  if (L == 0 || L > 1u << 15) throw StructuralError("snapshot has implausible width");
  Snapshot s;
  s.p = std::bit_cast<double>(detail::getU64(is));
  s.beta = std::bit_cast<double>(detail::getU64(is));
  const auto flags = detail::getU32(is);
  s.config = SurfaceConfig(static_cast<int>(L));
  const int W = static_cast<int>(L) + 2;
  for (int y = 0; y < W; ++y)
    for (int x = 0; x < W; ++x) {
      const auto v = static_cast<std::int32_t>(detail::getU32(is));
      if (s.config.isInterior(x, y))
        s.config.set(x, y, v);
      else
        s.config.setRingValue(x, y, v);
    }
  auto interior = [&](bool floor) {
    for (int y = 1; y <= static_cast<int>(L); ++y)
      for (int x = 1; x <= static_cast<int>(L); ++x) {
        const auto v = static_cast<std::int32_t>(detail::getU32(is));
        if (floor)
          s.config.setFloor(x, y, v == kNoFloor ? std::nullopt : std::optional<std::int32_t>(v));
        else
          s.config.setCeiling(x, y, v == kNoCeiling ? std::nullopt : std::optional<std::int32_t>(v));
      }
  };
  if (flags & 1u) interior(true);
  if (flags & 2u) interior(false);
  return s;
}

inline void writeSnapshotFile(const std::string& path, const SurfaceConfig& c, double p, double beta) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ResourceLimitError("cannot open " + path + " for writing");
  writeSnapshot(os, c, p, beta);
}

inline Snapshot readSnapshotFile(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw StructuralError("cannot open " + path);
  return readSnapshot(is);
}

}  // namespace zgff

#endif  // ZGFF_IO_HPP
