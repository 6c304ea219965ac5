#ifndef ZGFF_LEVEL_LINES_HPP
#define ZGFF_LEVEL_LINES_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "zgff/errors.hpp"
#include "zgff/surface.hpp"

namespace zgff {

// Dual geometry: site (x, y) of the padded grid is the unit cell
// [x, x+1] x [y, y+1]. Dual vertices are integer corners; a dual bond
// starts at a vertex and points in one of four directions. Everything
// outside the padded grid counts as lower than every level.

enum class Dir : std::uint8_t { E = 0, N = 1, W = 2, S = 3 };

inline constexpr std::array<int, 4> kDx{1, 0, -1, 0};
inline constexpr std::array<int, 4> kDy{0, 1, 0, -1};

inline char dirChar(Dir d) { return "ENWS"[static_cast<int>(d)]; }

struct DualBond {
  int x = 0;
  int y = 0;
  Dir dir = Dir::E;
  friend constexpr auto operator<=>(const DualBond&, const DualBond&) = default;
  friend constexpr bool operator==(const DualBond&, const DualBond&) = default;
  int endX() const { return x + kDx[static_cast<int>(dir)]; }
  int endY() const { return y + kDy[static_cast<int>(dir)]; }
};

/// Closed oriented circuit of dual bonds with the region {phi >= h} on the left.
struct LevelLoop {
  int level = 0;
  std::vector<DualBond> bonds;
  long long area = 0;
  bool macroscopic = false;
  std::size_t length() const { return bonds.size(); }
};

inline double macroscopicThreshold(int L) {
  const double l = std::log(static_cast<double>(L));
  return l * l;
}

namespace detail {

struct BondGrid {
  int size = 0;  // vertices per side: L + 3
  std::vector<std::uint8_t> out;
  std::size_t at(int x, int y) const { return static_cast<std::size_t>(y) * size + x; }
};

inline BondGrid levelBonds(const SurfaceConfig& c, int h) {
  const int L = c.width();
  BondGrid g;
  g.size = L + 3;
  g.out.assign(static_cast<std::size_t>(g.size) * g.size, 0);
  auto high = [&](int x, int y) { return c.inPadded(x, y) && c(x, y) >= h; };
  auto add = [&](int x, int y, Dir d) { g.out[g.at(x, y)] |= std::uint8_t(1u << static_cast<int>(d)); };
  for (int y = 0; y <= L + 1; ++y)
    for (int x = -1; x <= L + 1; ++x) {
      const bool a = high(x, y), b = high(x + 1, y);
      if (a && !b) add(x + 1, y, Dir::N);
      if (!a && b) add(x + 1, y + 1, Dir::S);
    }
  for (int x = 0; x <= L + 1; ++x)
    for (int y = -1; y <= L + 1; ++y) {
      const bool a = high(x, y), b = high(x, y + 1);
      if (b && !a) add(x, y + 1, Dir::E);
      if (a && !b) add(x + 1, y + 1, Dir::W);
    }
  return g;
}

}  // namespace detail

/// Cells enclosed by a single loop (even-odd rule along rows), as padded
/// site coordinates sorted by (y, x).
inline std::vector<Site> enclosedSites(const LevelLoop& loop) {
  std::map<int, std::vector<int>> rows;
  for (const auto& b : loop.bonds) {
    if (b.dir == Dir::N) rows[b.y].push_back(b.x);
    if (b.dir == Dir::S) rows[b.y - 1].push_back(b.x);
  }
  std::vector<Site> out;
  for (auto& [y, xs] : rows) {
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2)
      for (int x = xs[i]; x < xs[i + 1]; ++x) out.push_back({x, y});
  }
  std::sort(out.begin(), out.end(), [](Site a, Site b) { return std::pair(a.y, a.x) < std::pair(b.y, b.x); });
  return out;
}

inline long long enclosedArea(const LevelLoop& loop) {
  std::map<int, std::vector<int>> rows;
  for (const auto& b : loop.bonds) {
    if (b.dir == Dir::N) rows[b.y].push_back(b.x);
    if (b.dir == Dir::S) rows[b.y - 1].push_back(b.x);
  }
  long long a = 0;
  for (auto& [y, xs] : rows) {
    std::sort(xs.begin(), xs.end());
    for (std::size_t i = 0; i + 1 < xs.size(); i += 2) a += xs[i + 1] - xs[i];
  }
  return a;
}

/// All h level-lines of `config`. Degree-4 dual vertices are resolved by
/// pairing the north bond with the west bond and the south bond with the
/// east bond, which splits the circuit along the northeast diagonal.
inline std::vector<LevelLoop> extractLevelLines(const SurfaceConfig& config, int h) {
  auto g = detail::levelBonds(config, h);
  const auto orig = g.out;
  const double thr = macroscopicThreshold(config.width());
  std::vector<LevelLoop> loops;
  for (int y = 0; y < g.size; ++y)
    for (int x = 0; x < g.size; ++x)
      while (g.out[g.at(x, y)]) {
        const int d0 = std::countr_zero(g.out[g.at(x, y)]);
        LevelLoop loop;
        loop.level = h;
        int cx = x, cy = y, d = d0;
        do {
          auto& mask = g.out[g.at(cx, cy)];
          if (!(mask & (1u << d))) throw Error("level-line tracing lost its bond");
          mask &= std::uint8_t(~(1u << d));
          loop.bonds.push_back({cx, cy, static_cast<Dir>(d)});
          cx += kDx[d];
          cy += kDy[d];
          const auto o = orig[g.at(cx, cy)];
          d = std::popcount(o) == 2 ? (d ^ 1) : std::countr_zero(o);
        } while (!(cx == x && cy == y && d == d0));
        loop.area = enclosedArea(loop);
        loop.macroscopic = static_cast<double>(loop.length()) >= thr;
        loops.push_back(std::move(loop));
      }
  return loops;
}

struct LevelNesting {
  int level = 0;
  std::size_t loops = 0;
  std::size_t macroscopic = 0;
  bool unique() const { return macroscopic == 1; }
  /// Unique macroscopic loop contained in that of the previous level; empty
  /// when either level has no unique macroscopic loop.
  std::optional<bool> nestedInPrevious;
};

struct NestingReport {
  std::vector<LevelNesting> levels;
  bool allNested() const {
    for (const auto& l : levels)
      if (l.nestedInPrevious && !*l.nestedInPrevious) return false;
    return true;
  }
};

/// True when every enclosed site of `inner` is enclosed by `outer`.
inline bool loopContained(const LevelLoop& inner, const LevelLoop& outer) {
  const auto a = enclosedSites(inner), b = enclosedSites(outer);
  auto key = [](Site s) { return std::pair(s.y, s.x); };
  std::set<std::pair<int, int>> sb;
  for (auto s : b) sb.insert(key(s));
  return std::all_of(a.begin(), a.end(), [&](Site s) { return sb.count(key(s)) > 0; });
}

inline NestingReport nestingReport(const SurfaceConfig& config, int hLow, int hHigh) {
  NestingReport r;
  std::optional<LevelLoop> prev;
  for (int h = hLow; h <= hHigh; ++h) {
    const auto loops = extractLevelLines(config, h);
    LevelNesting e;
    e.level = h;
    e.loops = loops.size();
    std::optional<LevelLoop> mac;
    for (const auto& l : loops)
      if (l.macroscopic) {
        ++e.macroscopic;
        mac = l;
      }
    if (e.macroscopic != 1) mac.reset();
    if (mac && prev) e.nestedInPrevious = loopContained(*mac, *prev);
    prev = mac;
    r.levels.push_back(e);
  }
  return r;
}

/// The longest macroscopic loop at level h, if any.
inline std::optional<LevelLoop> topMacroscopicLoop(const SurfaceConfig& config, int h) {
  std::optional<LevelLoop> best;
  for (auto& l : extractLevelLines(config, h))
    if (l.macroscopic && (!best || l.length() > best->length())) best = std::move(l);
  return best;
}

/// Vertical distances of a loop from the bottom side over the columns
/// L/2 + x, |x| <= W. rho and rhoBar count interior sites below the
/// crossing; a column without a crossing in [0, L/2] is flagged.
struct LevelProfile {
  int level = 0;
  int n = 0;
  int halfWidth = 0;
  std::vector<int> xs;
  std::vector<int> rho;
  std::vector<int> rhoBar;
  std::vector<bool> covered;
};

inline int profileHalfWidth(double Nn, double K = 1.0) {
  return static_cast<int>(std::ceil(K * std::cbrt(Nn * Nn) - 1e-12));
}

inline LevelProfile profile(const LevelLoop& loop, int n, double Nn, int L, double K = 1.0) {
  if (!(Nn > 0)) throw DomainError("N_n must be positive");
  LevelProfile p;
  p.level = loop.level;
  p.n = n;
  p.halfWidth = profileHalfWidth(Nn, K);
  const int mid = L / 2;
  std::map<int, std::vector<int>> cross;
  for (const auto& b : loop.bonds)
    if (b.dir == Dir::E || b.dir == Dir::W) cross[std::min(b.x, b.endX())].push_back(b.y - 1);
  bool any = false;
  for (int x = -p.halfWidth; x <= p.halfWidth; ++x) {
    int lo = -1, hi = -1;
    if (auto it = cross.find(mid + x); it != cross.end())
      for (int r : it->second)
        if (r >= 0 && 2 * r <= L) {
          lo = lo < 0 ? r : std::min(lo, r);
          hi = std::max(hi, r);
        }
    p.xs.push_back(x);
    p.rho.push_back(lo);
    p.rhoBar.push_back(hi);
    p.covered.push_back(lo >= 0);
    any = any || lo >= 0;
  }
  if (!any) throw InfeasibleError("loop does not cross any column of the profile interval");
  return p;
}

struct RescaledProfile {
  std::vector<double> t;
  std::vector<double> Y;
  std::vector<double> Ybar;
  std::vector<bool> covered;
  double supGap = 0.0;
};

inline RescaledProfile rescale(const LevelProfile& p, double Nn) {
  if (!(Nn > 0)) throw DomainError("N_n must be positive");
  RescaledProfile r;
  const double sx = std::cbrt(Nn * Nn), sy = std::cbrt(Nn);
  int gap = 0;
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    r.t.push_back(p.xs[i] / sx);
    r.covered.push_back(p.covered[i]);
    r.Y.push_back(p.covered[i] ? p.rho[i] / sy : std::nan(""));
    r.Ybar.push_back(p.covered[i] ? p.rhoBar[i] / sy : std::nan(""));
    if (p.covered[i]) gap = std::max(gap, p.rhoBar[i] - p.rho[i]);
  }
  r.supGap = gap / sy;
  return r;
}

inline nlohmann::json loopToJson(const LevelLoop& l) {
  nlohmann::json j;
  j["level"] = l.level;
  j["length"] = l.length();
  j["area"] = l.area;
  j["macroscopic"] = l.macroscopic;
  auto& b = j["bonds"] = nlohmann::json::array();
  for (const auto& e : l.bonds) b.push_back({e.x, e.y, std::string(1, dirChar(e.dir))});
  return j;
}

inline void writeProfileCsv(std::ostream& os, const LevelProfile& p, const RescaledProfile& r) {
  os << "t,rho,rhoBar,Y,covered\n";
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    os << r.t[i] << ',';
    if (p.covered[i])
      os << p.rho[i] << ',' << p.rhoBar[i] << ',' << r.Y[i] << ",1\n";
    else
      os << ",,,0\n";
  }
}

}  // namespace zgff

#endif  // ZGFF_LEVEL_LINES_HPP
