#ifndef ZGFF_POLYMER_HPP
#define ZGFF_POLYMER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/surface.hpp"

namespace zgff {

/// Dual-lattice vertex; site (x, y) is the cell [x, x+1] x [y, y+1].
struct Point {
  int x = 0;
  int y = 0;
  friend constexpr auto operator<=>(const Point&, const Point&) = default;
  friend constexpr bool operator==(const Point&, const Point&) = default;
};

/// Unit dual bond starting at (x, y), going up when `vertical`, right
/// otherwise. A vertical bond separates sites (x-1, y) | (x, y) and carries
/// phi(west) - phi(east); a horizontal one separates (x, y-1) below from
/// (x, y) above and carries phi(north) - phi(south).
struct PolymerBond {
  int x = 0;
  int y = 0;
  bool vertical = false;
  int gradient = 0;
  Point start() const { return {x, y}; }
  Point end() const { return vertical ? Point{x, y + 1} : Point{x + 1, y}; }
  friend constexpr auto operator<=>(const PolymerBond&, const PolymerBond&) = default;
  friend constexpr bool operator==(const PolymerBond&, const PolymerBond&) = default;
};

struct LabeledPolymer {
  std::vector<PolymerBond> bonds;             // sorted
  std::vector<std::vector<Site>> regions;     // components of the interior minus the polymer
  std::vector<int> labels;                    // one per region
  std::vector<bool> labelConsistent;          // inner *-boundary carries a single height

  long length() const {
    long n = 0;
    for (const auto& b : bonds) n += std::abs(b.gradient);
    return n;
  }
  double energy(double beta, double p) const {
    double e = 0.0;
    for (const auto& b : bonds) e += gradientCost(b.gradient, p);
    return beta * e;
  }
  std::set<Point> vertices() const {
    std::set<Point> v;
    for (const auto& b : bonds) {
      v.insert(b.start());
      v.insert(b.end());
    }
    return v;
  }
};

namespace detail {

/// Every dual bond whose primal edge has at least one interior endpoint.
template <class F>
void forEachInteriorEdge(const SurfaceConfig& c, F&& f) {
  const int L = c.width();
  for (int y = 1; y <= L; ++y)
    for (int x = 0; x <= L; ++x) f(x, y, x + 1, y, PolymerBond{x + 1, y, true, c(x, y) - c(x + 1, y)});
  for (int x = 1; x <= L; ++x)
    for (int y = 0; y <= L; ++y) f(x, y, x, y + 1, PolymerBond{x, y + 1, false, c(x, y + 1) - c(x, y)});
}

}  // namespace detail

/// All disagreement bonds of the configuration (interior-touching edges only).
inline std::vector<PolymerBond> disagreementBonds(const SurfaceConfig& c) {
  const int L = c.width();
  for (int i = 1; i <= L; ++i)
    if (!c.ringAssigned(0, i) || !c.ringAssigned(L + 1, i) || !c.ringAssigned(i, 0) || !c.ringAssigned(i, L + 1))
      throw ConstraintError("boundary must be specified before extracting polymers");
  std::vector<PolymerBond> out;
  detail::forEachInteriorEdge(c, [&](int, int, int, int, const PolymerBond& b) {
    if (b.gradient != 0) out.push_back(b);
  });
  std::sort(out.begin(), out.end());
  return out;
}

/// Maximal connected components of disagreement bonds, with the regions
/// of the interior they cut out and the region labels.
inline std::vector<LabeledPolymer> extractPolymers(const SurfaceConfig& c) {
  const auto bonds = disagreementBonds(c);
  std::map<Point, std::vector<std::size_t>> at;
  for (std::size_t i = 0; i < bonds.size(); ++i) {
    at[bonds[i].start()].push_back(i);
    at[bonds[i].end()].push_back(i);
  }
  std::vector<int> comp(bonds.size(), -1);
  int ncomp = 0;
  for (std::size_t s = 0; s < bonds.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (const Point& v : {bonds[i].start(), bonds[i].end()})
        for (auto j : at[v])
          if (comp[j] < 0) {
            comp[j] = ncomp;
            stack.push_back(j);
          }
    }
    ++ncomp;
  }
  std::vector<LabeledPolymer> polys(static_cast<std::size_t>(ncomp));
  for (std::size_t i = 0; i < bonds.size(); ++i) polys[static_cast<std::size_t>(comp[i])].bonds.push_back(bonds[i]);

  const int L = c.width();
  for (auto& poly : polys) {
    std::set<std::pair<Point, bool>> cut;
    for (const auto& b : poly.bonds) cut.insert({b.start(), b.vertical});
    auto blocked = [&](int x0, int y0, int x1, int y1) {
      if (x1 != x0) return cut.count({Point{std::max(x0, x1), y0}, true}) > 0;
      return cut.count({Point{x0, std::max(y0, y1)}, false}) > 0;
    };
    std::vector<int> reg(static_cast<std::size_t>(L) * L, -1);
    auto id = [L](int x, int y) { return static_cast<std::size_t>(y - 1) * L + (x - 1); };
    for (int y = 1; y <= L; ++y)
      for (int x = 1; x <= L; ++x) {
        if (reg[id(x, y)] >= 0) continue;
        const int r = static_cast<int>(poly.regions.size());
        poly.regions.emplace_back();
        std::vector<Site> stack{{x, y}};
        reg[id(x, y)] = r;
        while (!stack.empty()) {
          const Site s = stack.back();
          stack.pop_back();
          poly.regions.back().push_back(s);
          constexpr int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
          for (int k = 0; k < 4; ++k) {
            const int nx = s.x + dx[k], ny = s.y + dy[k];
            if (nx < 1 || ny < 1 || nx > L || ny > L || reg[id(nx, ny)] >= 0 || blocked(s.x, s.y, nx, ny)) continue;
            reg[id(nx, ny)] = r;
            stack.push_back({nx, ny});
          }
        }
        std::sort(poly.regions.back().begin(), poly.regions.back().end());
      }
    // Labels: heights of region sites *-adjacent to an interior site outside the region.
    for (std::size_t r = 0; r < poly.regions.size(); ++r) {
      std::set<int> seen;
      for (const auto& s : poly.regions[r]) {
        bool boundary = false;
        for (int dy = -1; dy <= 1 && !boundary; ++dy)
          for (int dx = -1; dx <= 1 && !boundary; ++dx) {
            const int nx = s.x + dx, ny = s.y + dy;
            if ((dx || dy) && c.isInterior(nx, ny) && reg[id(nx, ny)] != static_cast<int>(r)) boundary = true;
          }
        if (boundary) seen.insert(c(s.x, s.y));
      }
      if (seen.empty()) seen.insert(c(poly.regions[r].front().x, poly.regions[r].front().y));
      poly.labels.push_back(*seen.begin());
      poly.labelConsistent.push_back(seen.size() == 1);
    }
  }
  return polys;
}

/// Sites of `region` that are not *-adjacent to anything outside it.
inline std::vector<Site> regionInterior(const std::vector<Site>& region) {
  const std::set<Site> in(region.begin(), region.end());
  std::vector<Site> out;
  for (const auto& s : region) {
    bool inner = true;
    for (int dy = -1; dy <= 1 && inner; ++dy)
      for (int dx = -1; dx <= 1 && inner; ++dx)
        if ((dx || dy) && !in.count({s.x + dx, s.y + dy})) inner = false;
    if (inner) out.push_back(s);
  }
  return out;
}

struct FloorFactor {
  double value = 1.0;
  bool exact = true;
  std::size_t sites = 0;
};

/// Probability that the no-floor measure on `sites` with boundary height
/// `label` stays >= 0 everywhere. Exact summation over heights for at
/// most 9 sites; otherwise exp(-siteProbBelowZero * |sites|).
inline FloorFactor floorFactor(const std::vector<Site>& sites, int label, double p, double beta,
                               double siteProbBelowZero) {
  FloorFactor f;
  f.sites = sites.size();
  if (sites.empty()) return f;
  if (sites.size() > 9) {
    f.exact = false;
    f.value = std::exp(-siteProbBelowZero * static_cast<double>(sites.size()));
    return f;
  }
  const std::size_t n = sites.size();
  std::map<Site, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[sites[i]] = i;
  std::vector<std::vector<std::size_t>> nbr(n);
  std::vector<int> outside(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    constexpr int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
    for (int k = 0; k < 4; ++k) {
      const auto it = index.find({sites[i].x + dx[k], sites[i].y + dy[k]});
      if (it == index.end()) ++outside[i];
      else nbr[i].push_back(it->second);
    }
  }
  // Frontier dynamic programme in index order: the state holds the heights
  // of processed sites that still have an unprocessed neighbour.
  const int window = std::clamp(static_cast<int>(std::ceil(std::pow(40.0 / beta, 1.0 / p))), 2, 12);
  struct Acc {
    double all = 0.0, pos = 0.0;
  };
  std::vector<std::size_t> frontier;
  std::map<std::vector<int>, Acc> states{{{}, {1.0, 1.0}}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> next = frontier;
    next.push_back(i);
    std::vector<std::size_t> keep;
    for (auto j : next) {
      bool open = false;
      for (auto k : nbr[j]) open = open || k > i;
      if (open) keep.push_back(j);
    }
    std::map<std::vector<int>, Acc> out;
    for (const auto& [hs, acc] : states) {
      for (int v = label - window; v <= label + window; ++v) {
        double de = outside[i] * gradientCost(v - label, p);
        for (std::size_t a = 0; a < frontier.size(); ++a)
          if (std::find(nbr[i].begin(), nbr[i].end(), frontier[a]) != nbr[i].end()) de += gradientCost(v - hs[a], p);
        const double w = std::exp(-beta * de);
        if (w == 0.0) continue;
        std::vector<int> key;
        key.reserve(keep.size());
        for (auto j : keep) {
          if (j == i) {
            key.push_back(v);
          } else {
            const auto pos = static_cast<std::size_t>(std::find(frontier.begin(), frontier.end(), j) - frontier.begin());
            key.push_back(hs[pos]);
          }
        }
        auto& o = out[key];
        o.all += acc.all * w;
        if (v >= 0) o.pos += acc.pos * w;
      }
    }
    states = std::move(out);
    frontier = std::move(keep);
  }
  double zAll = 0.0, zPos = 0.0;
  for (const auto& [hs, acc] : states) {
    zAll += acc.all;
    zPos += acc.pos;
  }
  f.value = zPos / zAll;
  return f;
}

// ---------------------------------------------------------------------------
// Paths, cone-points and the decomposition into irreducible pieces.

/// Self-avoiding dual path given by its start and unit steps (Dir codes
/// E=0, N=1, W=2, S=3) with a gradient magnitude per step.
struct LatticePath {
  Point start;
  std::vector<int> steps;
  std::vector<int> gradients;  // empty means all 1

  std::size_t size() const { return steps.size(); }
  int gradientAt(std::size_t i) const { return gradients.empty() ? 1 : gradients[i]; }
  std::vector<Point> vertices() const {
    static constexpr int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
    std::vector<Point> v{start};
    for (int s : steps) v.push_back({v.back().x + dx[s], v.back().y + dy[s]});
    return v;
  }
  Point end() const { return vertices().back(); }
  Point displacement() const {
    const auto e = end();
    return {e.x - start.x, e.y - start.y};
  }
  bool selfAvoiding() const {
    const auto v = vertices();
    std::set<Point> s(v.begin(), v.end());
    return s.size() == v.size();
  }
  long length() const {
    long n = 0;
    for (std::size_t i = 0; i < size(); ++i) n += std::abs(gradientAt(i));
    return n;
  }
  double energy(double beta, double p) const {
    double e = 0.0;
    for (std::size_t i = 0; i < size(); ++i) e += gradientCost(gradientAt(i), p);
    return beta * e;
  }
  friend bool operator==(const LatticePath&, const LatticePath&) = default;
};

/// Unit-slope closed double cone about m: |y - m.y| <= |x - m.x|.
inline bool inDoubleCone(Point m, Point q) { return std::abs(q.y - m.y) <= std::abs(q.x - m.x); }

/// Forward cone: q - m in {(x, y) : |y| <= x}.
inline bool inForwardCone(Point m, Point q) { return std::abs(q.y - m.y) <= q.x - m.x; }

/// Cone-points among the candidates: every point of the set lies in the
/// closed double cone around m. Sorted by x.
inline std::vector<Point> conePoints(const std::vector<Point>& points, const std::vector<Point>& candidates) {
  std::vector<Point> out;
  for (const auto& m : candidates) {
    bool ok = true;
    for (const auto& q : points)
      if (!inDoubleCone(m, q)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(m);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Interior cone-points of a path, in path order (which is x order).
inline std::vector<Point> conePoints(const LatticePath& path) {
  const auto v = path.vertices();
  if (v.size() < 3) return {};
  std::vector<Point> cands(v.begin() + 1, v.end() - 1);
  auto cp = conePoints(v, cands);
  return cp;
}

/// Interior cone-points of a polymer (all of its vertices are candidates
/// except the designated endpoints).
inline std::vector<Point> conePoints(const LabeledPolymer& poly, Point a, Point b) {
  const auto vs = poly.vertices();
  std::vector<Point> pts(vs.begin(), vs.end()), cands;
  for (const auto& v : vs)
    if (v != a && v != b) cands.push_back(v);
  return conePoints(pts, cands);
}

struct AnimalDecomposition {
  bool decomposable = false;
  std::string status;
  std::vector<Point> conePoints;
  LatticePath left;                   // start to first cone-point
  std::vector<LatticePath> interior;  // between consecutive cone-points
  LatticePath right;                  // last cone-point to end

  std::vector<LatticePath> all() const {
    std::vector<LatticePath> out{left};
    out.insert(out.end(), interior.begin(), interior.end());
    out.push_back(right);
    return out;
  }
};

inline LatticePath subPath(const LatticePath& p, std::size_t from, std::size_t to) {
  LatticePath s;
  s.start = p.vertices()[from];
  s.steps.assign(p.steps.begin() + static_cast<std::ptrdiff_t>(from), p.steps.begin() + static_cast<std::ptrdiff_t>(to));
  if (!p.gradients.empty())
    s.gradients.assign(p.gradients.begin() + static_cast<std::ptrdiff_t>(from),
                       p.gradients.begin() + static_cast<std::ptrdiff_t>(to));
  return s;
}

inline LatticePath concatenate(const std::vector<LatticePath>& parts) {
  if (parts.empty()) return {};
  LatticePath out;
  out.start = parts.front().start;
  bool anyGrad = false;
  for (const auto& q : parts) anyGrad = anyGrad || !q.gradients.empty();
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k > 0 && parts[k].start != parts[k - 1].end()) throw StructuralError("pieces do not join");
    out.steps.insert(out.steps.end(), parts[k].steps.begin(), parts[k].steps.end());
    if (anyGrad)
      for (std::size_t i = 0; i < parts[k].size(); ++i) out.gradients.push_back(parts[k].gradientAt(i));
  }
  return out;
}

/// Splits the path at every interior cone-point.
inline AnimalDecomposition decompose(const LatticePath& path) {
  AnimalDecomposition d;
  d.conePoints = conePoints(path);
  if (d.conePoints.size() < 2) {
    d.status = "not decomposable: fewer than two cone-points";
    return d;
  }
  const auto v = path.vertices();
  std::vector<std::size_t> cut;
  std::set<Point> cps(d.conePoints.begin(), d.conePoints.end());
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (cps.count(v[i])) cut.push_back(i);
  d.left = subPath(path, 0, cut.front());
  for (std::size_t k = 0; k + 1 < cut.size(); ++k) d.interior.push_back(subPath(path, cut[k], cut[k + 1]));
  d.right = subPath(path, cut.back(), path.size());
  d.decomposable = true;
  d.status = "ok";
  return d;
}

}  // namespace zgff

#endif  // ZGFF_POLYMER_HPP
