#ifndef ZGFF_SURFACE_HPP
#define ZGFF_SURFACE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zgff/errors.hpp"

namespace zgff {

/// Lattice site in padded coordinates: the interior box is [1, L]^2 and
/// the boundary ring occupies x or y in {0, L + 1}. y grows northwards.
struct Site {
  int x = 0;
  int y = 0;
  friend constexpr bool operator==(Site, Site) = default;
  friend constexpr auto operator<=>(Site, Site) = default;
};

using BoundaryMap = std::map<Site, std::int32_t>;

enum class Side { Bottom = 0, Right = 1, Top = 2, Left = 3 };

/// Boundary condition pattern.
struct BoundarySpec {
  enum class Kind { AllK, SplitArc, Custom };
  Kind kind = Kind::AllK;
  std::int32_t k = 0;
  /// Sides carrying H - n under SplitArc; the remaining sides get H - n - 1.
  std::array<bool, 4> arc{false, true, true, true};
  BoundaryMap custom;

  static BoundarySpec allK(std::int32_t k) {
    BoundarySpec s;
    s.kind = Kind::AllK;
    s.k = k;
    return s;
  }
  static BoundarySpec splitArc(std::array<bool, 4> sides) {
    BoundarySpec s;
    s.kind = Kind::SplitArc;
    s.arc = sides;
    return s;
  }
};

inline BoundarySpec::Kind parseBoundaryKind(std::string_view name) {
  if (name == "all-k" || name == "zero" || name == "flat") return BoundarySpec::Kind::AllK;
  if (name == "split-arc") return BoundarySpec::Kind::SplitArc;
  if (name == "custom") return BoundarySpec::Kind::Custom;
  throw ConfigError("unknown boundary pattern '" + std::string(name) + "'");
}

/// Axis-aligned rectangle of interior sites (inclusive) carrying a bound.
struct RegionBound {
  int x0 = 1, y0 = 1, x1 = 1, y1 = 1;
  std::int32_t value = 0;
  bool contains(int x, int y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }
};

/// Floor or ceiling specification: none, a uniform value, or per-region
/// values (sites outside every region are unconstrained; later regions win).
struct BoundSpec {
  enum class Kind { None, Uniform, PerRegion };
  Kind kind = Kind::None;
  std::int32_t value = 0;
  std::vector<RegionBound> regions;

  static BoundSpec none() { return {}; }
  static BoundSpec uniform(std::int32_t v) {
    BoundSpec b;
    b.kind = Kind::Uniform;
    b.value = v;
    return b;
  }
  std::optional<std::int32_t> at(int x, int y) const {
    switch (kind) {
      case Kind::None:
        return std::nullopt;
      case Kind::Uniform:
        return value;
      case Kind::PerRegion: {
        std::optional<std::int32_t> v;
        for (const auto& r : regions)
          if (r.contains(x, y)) v = r.value;
        return v;
      }
    }
    return std::nullopt;
  }
};

/// Gradient exponent p, inverse temperature beta and the constraint specs.
/// p = 2 is the Discrete Gaussian, p = 1 solid-on-solid.
struct ModelParams {
  double p = 2.0;
  double beta = 1.0;
  BoundarySpec boundary;
  BoundSpec floor;
  BoundSpec ceiling;
  /// Plateau height H and level index n, used by the split-arc pattern.
  std::int32_t plateau = 0;
  std::int32_t level = 0;

  void validate() const {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("gradient exponent p must be >= 1");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("beta must be > 0");
  }
};

/// |d|^p with fast paths for the SOS and Gaussian cases.
inline double gradientCost(std::int64_t d, double p) {
  const double a = static_cast<double>(d < 0 ? -d : d);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (a == 0.0) return 0.0;
  return std::pow(a, p);
}

inline constexpr std::int32_t kNoFloor = std::numeric_limits<std::int32_t>::min();
inline constexpr std::int32_t kNoCeiling = std::numeric_limits<std::int32_t>::max();

/// Integer height field on an L x L box with an explicit boundary ring and
/// optional per-site floors and ceilings.
class SurfaceConfig {
 public:
  SurfaceConfig() = default;

  explicit SurfaceConfig(int L)
      : L_(L),
        heights_(static_cast<std::size_t>(L + 2) * (L + 2), 0),
        assigned_(heights_.size(), 1),
        floor_(heights_.size(), kNoFloor),
        ceiling_(heights_.size(), kNoCeiling) {
    if (L < 1) throw StructuralError("box width must be positive");
  }

  int width() const noexcept { return L_; }
  int stride() const noexcept { return L_ + 2; }
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(L_ + 2) + static_cast<std::size_t>(x);
  }
  bool inPadded(int x, int y) const noexcept { return x >= 0 && y >= 0 && x <= L_ + 1 && y <= L_ + 1; }
  bool isInterior(int x, int y) const noexcept { return x >= 1 && y >= 1 && x <= L_ && y <= L_; }
  bool isRing(int x, int y) const noexcept { return inPadded(x, y) && !isInterior(x, y); }

  std::int32_t operator()(int x, int y) const noexcept { return heights_[index(x, y)]; }
  std::int32_t at(Site s) const noexcept { return (*this)(s.x, s.y); }

  void set(int x, int y, std::int32_t v) {
    if (!isInterior(x, y)) throw StructuralError("set() only addresses interior sites");
    heights_[index(x, y)] = v;
  }
  /// Unchecked interior write used by the samplers.
  void setUnchecked(std::size_t idx, std::int32_t v) noexcept { heights_[idx] = v; }

  void fill(std::int32_t v) {
    for (int y = 1; y <= L_; ++y)
      for (int x = 1; x <= L_; ++x) heights_[index(x, y)] = v;
  }

  /// Replaces the boundary ring. The mapping must cover every ring site.
  void setBoundary(const BoundaryMap& boundary) {
    for (int y = 0; y <= L_ + 1; ++y)
      for (int x = 0; x <= L_ + 1; ++x) {
        if (!isRing(x, y)) continue;
        auto it = boundary.find({x, y});
        if (it == boundary.end())
          throw StructuralError("boundary mapping misses ring site (" + std::to_string(x) + "," +
                                std::to_string(y) + ")");
        heights_[index(x, y)] = it->second;
        assigned_[index(x, y)] = 1;
      }
    for (const auto& [s, v] : boundary)
      if (!isRing(s.x, s.y)) throw StructuralError("boundary mapping names a non-ring site");
  }

  void setRingValue(int x, int y, std::int32_t v) {
    if (!isRing(x, y)) throw StructuralError("not a ring site");
    heights_[index(x, y)] = v;
    assigned_[index(x, y)] = 1;
  }
  void unassignRing(int x, int y) {
    if (!isRing(x, y)) throw StructuralError("not a ring site");
    assigned_[index(x, y)] = 0;
  }
  bool ringAssigned(int x, int y) const noexcept { return assigned_[index(x, y)] != 0; }

  BoundaryMap boundary() const {
    BoundaryMap m;
    for (int y = 0; y <= L_ + 1; ++y)
      for (int x = 0; x <= L_ + 1; ++x)
        if (isRing(x, y)) m[{x, y}] = (*this)(x, y);
    return m;
  }

  void setFloor(int x, int y, std::optional<std::int32_t> v) {
    if (!isInterior(x, y)) throw StructuralError("floors live on interior sites");
    floor_[index(x, y)] = v.value_or(kNoFloor);
  }
  void setCeiling(int x, int y, std::optional<std::int32_t> v) {
    if (!isInterior(x, y)) throw StructuralError("ceilings live on interior sites");
    ceiling_[index(x, y)] = v.value_or(kNoCeiling);
  }
  void applyBounds(const BoundSpec& floor, const BoundSpec& ceiling) {
    for (int y = 1; y <= L_; ++y)
      for (int x = 1; x <= L_; ++x) {
        setFloor(x, y, floor.at(x, y));
        setCeiling(x, y, ceiling.at(x, y));
      }
  }

  std::optional<std::int32_t> floorAt(int x, int y) const {
    const auto v = floor_[index(x, y)];
    return v == kNoFloor ? std::nullopt : std::optional<std::int32_t>(v);
  }
  std::optional<std::int32_t> ceilingAt(int x, int y) const {
    const auto v = ceiling_[index(x, y)];
    return v == kNoCeiling ? std::nullopt : std::optional<std::int32_t>(v);
  }
  std::int32_t rawFloor(std::size_t idx) const noexcept { return floor_[idx]; }
  std::int32_t rawCeiling(std::size_t idx) const noexcept { return ceiling_[idx]; }

  bool hasAnyFloor() const noexcept {
    return std::any_of(floor_.begin(), floor_.end(), [](auto v) { return v != kNoFloor; });
  }
  bool hasAnyCeiling() const noexcept {
    return std::any_of(ceiling_.begin(), ceiling_.end(), [](auto v) { return v != kNoCeiling; });
  }

  /// Throws if a height violates its floor/ceiling or bounds cross.
  void validate() const {
    for (int y = 1; y <= L_; ++y)
      for (int x = 1; x <= L_; ++x) {
        const auto i = index(x, y);
        if (floor_[i] != kNoFloor && ceiling_[i] != kNoCeiling && floor_[i] > ceiling_[i])
          throw ConstraintError("floor exceeds ceiling at (" + std::to_string(x) + "," + std::to_string(y) + ")");
        if (heights_[i] < floor_[i] || heights_[i] > ceiling_[i])
          throw ConstraintError("height outside [floor, ceiling] at (" + std::to_string(x) + "," +
                                std::to_string(y) + ")");
      }
  }

  const std::vector<std::int32_t>& padded() const noexcept { return heights_; }
  const std::vector<std::int32_t>& paddedFloor() const noexcept { return floor_; }
  const std::vector<std::int32_t>& paddedCeiling() const noexcept { return ceiling_; }

  double meanHeight() const {
    double s = 0.0;
    for (int y = 1; y <= L_; ++y)
      for (int x = 1; x <= L_; ++x) s += heights_[index(x, y)];
    return s / (static_cast<double>(L_) * L_);
  }

  friend bool operator==(const SurfaceConfig&, const SurfaceConfig&) = default;

 private:
  int L_ = 0;
  std::vector<std::int32_t> heights_;
  std::vector<std::uint8_t> assigned_;
  std::vector<std::int32_t> floor_;
  std::vector<std::int32_t> ceiling_;
};

/// beta * sum over nearest-neighbour pairs with at least one interior
/// endpoint of |phi_x - phi_y|^p.
inline double energy(const SurfaceConfig& config, const ModelParams& params) {
  const int L = config.width();
  for (int y = 0; y <= L + 1; ++y)
    for (int x = 0; x <= L + 1; ++x) {
      const bool corner = (x == 0 || x == L + 1) && (y == 0 || y == L + 1);
      if (config.isRing(x, y) && !corner && !config.ringAssigned(x, y))
        throw StructuralError("boundary value missing at (" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  double e = 0.0;
  for (int y = 1; y <= L; ++y)
    for (int x = 0; x <= L; ++x) e += gradientCost(std::int64_t{config(x, y)} - config(x + 1, y), params.p);
  for (int x = 1; x <= L; ++x)
    for (int y = 0; y <= L; ++y) e += gradientCost(std::int64_t{config(x, y)} - config(x, y + 1), params.p);
  return params.beta * e;
}

/// Boundary ring for a named pattern. Under split-arc, ring corners follow
/// the side that comes next when walking the ring clockwise: top-left goes
/// with the top side, top-right with the right, bottom-right with the
/// bottom and bottom-left with the left.
inline BoundaryMap buildBoundary(const BoundarySpec& spec, int L, std::int32_t H = 0, std::int32_t n = 0) {
  if (L < 1) throw StructuralError("box width must be positive");
  BoundaryMap m;
  auto sideOf = [L](int x, int y) -> Side {
    if (x == 0 && y == L + 1) return Side::Top;
    if (x == L + 1 && y == L + 1) return Side::Right;
    if (x == L + 1 && y == 0) return Side::Bottom;
    if (x == 0 && y == 0) return Side::Left;
    if (y == 0) return Side::Bottom;
    if (y == L + 1) return Side::Top;
    if (x == 0) return Side::Left;
    return Side::Right;
  };
  for (int y = 0; y <= L + 1; ++y)
    for (int x = 0; x <= L + 1; ++x) {
      if (x >= 1 && x <= L && y >= 1 && y <= L) continue;
      switch (spec.kind) {
        case BoundarySpec::Kind::AllK:
          m[{x, y}] = spec.k;
          break;
        case BoundarySpec::Kind::SplitArc:
          m[{x, y}] = spec.arc[static_cast<int>(sideOf(x, y))] ? H - n : H - n - 1;
          break;
        case BoundarySpec::Kind::Custom: {
          auto it = spec.custom.find({x, y});
          if (it == spec.custom.end())
            throw StructuralError("custom boundary misses ring site (" + std::to_string(x) + "," + std::to_string(y) +
                                  ")");
          m[{x, y}] = it->second;
          break;
        }
      }
    }
  return m;
}

/// Exact single-site conditional law on a contiguous integer support.
struct LocalLaw {
  std::int32_t lowest = 0;
  std::vector<double> prob;
  std::vector<double> cdf;

  std::int32_t highest() const { return lowest + static_cast<std::int32_t>(prob.size()) - 1; }
  double pmf(std::int64_t k) const {
    if (k < lowest || k > highest()) return 0.0;
    return prob[static_cast<std::size_t>(k - lowest)];
  }
  double cdfAt(std::int64_t k) const {
    if (k < lowest) return 0.0;
    if (k >= highest()) return 1.0;
    return cdf[static_cast<std::size_t>(k - lowest)];
  }
  /// Inverse-CDF draw: the smallest k with F(k) > u.
  std::int32_t sample(double u) const {
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    return lowest + static_cast<std::int32_t>(it - cdf.begin());
  }
  std::int32_t mode() const {
    return lowest + static_cast<std::int32_t>(std::max_element(prob.begin(), prob.end()) - prob.begin());
  }
};

namespace detail {

/// Relative tail threshold for truncating the height support.
inline constexpr double kTailCut = 1e-15;

/// Fills `law` with the conditional of one site given its four neighbours
/// and bounds lo <= k <= hi. Enumerates outward from the neighbour median
/// and stops on each side once the weights decay and the newest weight is
/// below kTailCut of the running total. `logw` is scratch space.
inline void buildLocalLaw(const std::array<std::int32_t, 4>& nb, std::int64_t lo, std::int64_t hi, double p,
                          double beta, LocalLaw& law, std::vector<double>& logw) {
  auto sorted = nb;
  std::sort(sorted.begin(), sorted.end());
  const std::int64_t mid2 = std::int64_t{sorted[1]} + sorted[2];
  std::int64_t start = mid2 >= 0 ? mid2 / 2 : -((1 - mid2) / 2);
  start = std::clamp(start, lo, hi);
  auto logWeight = [&](std::int64_t k) {
    double e = 0.0;
    for (auto n : nb) e += gradientCost(k - n, p);
    return -beta * e;
  };

  // Upward and downward sweeps store into two halves, then merge.
  thread_local std::vector<double> up, down;
  up.clear();
  down.clear();
  double lmax = logWeight(start);
  double total = 1.0;  // in units of exp(lmax)
  up.push_back(lmax);
  auto accept = [&](double l, double prev) {
    if (l > lmax) {
      total = total * std::exp(lmax - l) + 1.0;
      lmax = l;
      return true;
    }
    const double rel = std::exp(l - lmax);
    total += rel;
    return !(l <= prev && rel < kTailCut * total);
  };
  double prev = lmax;
  for (std::int64_t k = start + 1; k <= hi; ++k) {
    const double l = logWeight(k);
    const bool more = accept(l, prev);
    up.push_back(l);
    prev = l;
    if (!more) break;
  }
  prev = up.front();
  for (std::int64_t k = start - 1; k >= lo; --k) {
    const double l = logWeight(k);
    const bool more = accept(l, prev);
    down.push_back(l);
    prev = l;
    if (!more) break;
  }
  logw.clear();
  logw.insert(logw.end(), down.rbegin(), down.rend());
  logw.insert(logw.end(), up.begin(), up.end());
  law.lowest = static_cast<std::int32_t>(start - static_cast<std::int64_t>(down.size()));
  law.prob.resize(logw.size());
  law.cdf.resize(logw.size());
  double s = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    law.prob[i] = std::exp(logw[i] - lmax);
    s += law.prob[i];
  }
  double c = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    law.prob[i] /= s;
    c += law.prob[i];
    law.cdf[i] = c;
  }
  law.cdf.back() = 1.0;
}

}  // namespace detail

/// Single-site Gibbs conditional: P(k) proportional to
/// exp(-beta * sum_i |k - n_i|^p) on [floor, ceiling].
inline LocalLaw localConditional(const std::array<std::int32_t, 4>& neighbors, std::optional<std::int32_t> floor,
                                 std::optional<std::int32_t> ceiling, const ModelParams& params) {
  params.validate();
  if (floor && ceiling && *floor > *ceiling) throw ConstraintError("floor exceeds ceiling");
  const std::int64_t lo = floor ? *floor : std::numeric_limits<std::int32_t>::min() / 2;
  const std::int64_t hi = ceiling ? *ceiling : std::numeric_limits<std::int32_t>::max() / 2;
  LocalLaw law;
  std::vector<double> scratch;
  detail::buildLocalLaw(neighbors, lo, hi, params.p, params.beta, law, scratch);
  return law;
}

/// Fresh configuration for `params` on an L x L box: boundary from the
/// pattern, bounds applied, interior at the boundary-free default 0 clamped
/// into [floor, ceiling].
inline SurfaceConfig makeConfig(const ModelParams& params, int L) {
  SurfaceConfig c(L);
  c.setBoundary(buildBoundary(params.boundary, L, params.plateau, params.level));
  c.applyBounds(params.floor, params.ceiling);
  for (int y = 1; y <= L; ++y)
    for (int x = 1; x <= L; ++x) {
      std::int32_t v = 0;
      if (auto f = c.floorAt(x, y)) v = std::max(v, *f);
      if (auto cl = c.ceilingAt(x, y)) v = std::min(v, *cl);
      c.set(x, y, v);
    }
  c.validate();
  return c;
}

}  // namespace zgff

#endif  // ZGFF_SURFACE_HPP
