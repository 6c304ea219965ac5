#ifndef ZGFF_TENSION_HPP
#define ZGFF_TENSION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/polymer.hpp"

namespace zgff {

// Truncated polymer class: simple dual paths, unit gradient on every bond,
// no decorations. Each bond costs beta, so the weight of a path is
// exp(-beta * length) for every p.

/// Folds an angle into [-pi/4, pi/4] using the quarter-turn symmetry.
inline double foldQuarterTurn(double theta) {
  const double q = std::numbers::pi / 2;
  return theta - q * std::round(theta / q);
}

namespace detail {

/// log Z of x-directed dual paths from the origin to (N, s N) for each
/// requested N, by a column transfer over heights. A path is a vertical run
/// in column 0 followed by N (right step, vertical run) blocks.
inline std::vector<double> directedRayLogZ(double beta, double s, const std::vector<long>& sizes) {
  const long nMax = *std::max_element(sizes.begin(), sizes.end());
  const double spread = 12.0 * std::sqrt(static_cast<double>(nMax)) * (1.0 + std::abs(s)) + 60.0;
  const long lo = static_cast<long>(std::floor(std::min(0.0, s * nMax) - spread));
  const long hi = static_cast<long>(std::ceil(std::max(0.0, s * nMax) + spread));
  const auto R = static_cast<std::size_t>(hi - lo + 1);
  const double lx = -beta;
  constexpr double kNone = -INFINITY;
  // Log-space values; exp(z) is the partial partition function.
  std::vector<double> z(R, kNone), f(R), b(R);
  auto idx = [lo](long y) { return static_cast<std::size_t>(y - lo); };
  auto lse = [](double u, double v) {
    if (u == -INFINITY) return v;
    if (v == -INFINITY) return u;
    return u > v ? u + std::log1p(std::exp(v - u)) : v + std::log1p(std::exp(u - v));
  };
  auto band = [&](long c, long& a, long& e) {
    const long w = static_cast<long>(spread);
    a = std::max(lo, static_cast<long>(std::floor(s * c)) - w);
    e = std::min(hi, static_cast<long>(std::ceil(s * c)) + w);
  };
  // Two-sided geometric kernel x^{|j|} applied in O(range):
  // out(y) = F(y) + x B(y+1) with F, B the one-sided running sums.
  auto convolve = [&](long a, long e, double shift) {
    for (long y = a; y <= e; ++y) f[idx(y)] = lse(z[idx(y)], y > a ? lx + f[idx(y - 1)] : kNone);
    for (long y = e; y >= a; --y) b[idx(y)] = lse(z[idx(y)], y < e ? lx + b[idx(y + 1)] : kNone);
    for (long y = a; y <= e; ++y) z[idx(y)] = shift + lse(f[idx(y)], y < e ? lx + b[idx(y + 1)] : kNone);
  };
  auto logAt = [&](double y) {
    const long y0 = static_cast<long>(std::floor(y));
    const double t = y - static_cast<double>(y0);
    const double l0 = z[idx(y0)];
    if (t == 0.0) return l0;
    const double l1 = z[idx(y0 + 1)], lm = z[idx(y0 - 1)];
    return l0 + 0.5 * t * (l1 - lm) + 0.5 * t * t * (l1 - 2 * l0 + lm);
  };
  z[idx(0)] = 0.0;
  long pa = 0, pe = 0;
  band(0, pa, pe);
  convolve(pa, pe, 0.0);
  std::map<long, double> want;
  for (long n : sizes) want[n] = 0.0;
  for (long c = 1; c <= nMax; ++c) {
    long a, e;
    band(c, a, e);
    const long ua = std::min(a, pa), ue = std::max(e, pe);
    convolve(ua, ue, lx);
    for (long y = ua; y < a; ++y) z[idx(y)] = kNone;
    for (long y = e + 1; y <= ue; ++y) z[idx(y)] = kNone;
    pa = a;
    pe = e;
    if (want.count(c)) want[c] = logAt(s * static_cast<double>(c));
  }
  std::vector<double> out;
  for (long n : sizes) out.push_back(want[n]);
  return out;
}

}  // namespace detail

struct TensionEntry {
  double theta = 0.0;
  double tau = 0.0;  // homogeneous tension at the unit vector of angle theta
  double ci = 0.0;   // |difference of the last two Richardson estimates|
  long nUsed = 0;
  bool budgetLimited = false;
};

struct TensionOptions {
  long baseColumns = 1024;    // sizes N0, 2 N0, 4 N0
  double maxWork = 4e9;       // columns x heights
};

/// Transfer-route tension at angle theta. The x-directed class is used on
/// the folded angle in [-pi/4, pi/4].
inline TensionEntry estimateTension(double beta, int n, double p, double theta, const TensionOptions& opt = {}) {
  (void)n;
  (void)p;
  if (!(beta > 0)) throw DomainError("beta must be positive");
  const double t0 = foldQuarterTurn(theta);
  const double s = std::tan(t0);
  TensionEntry e;
  e.theta = theta;
  long n0 = opt.baseColumns;
  auto work = [&](long nn) {
    return 4.0 * nn * (2 * 12.0 * std::sqrt(4.0 * nn) * (1 + std::abs(s)) + 120.0) * 3.0;
  };
  while (n0 > 16 && work(n0) > opt.maxWork) {
    n0 /= 2;
    e.budgetLimited = true;
  }
  const std::vector<long> sizes{n0, 2 * n0, 4 * n0};
  const auto lz = detail::directedRayLogZ(beta, s, sizes);
  std::vector<double> rate;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double N = static_cast<double>(sizes[i]);
    rate.push_back((-lz[i] - 0.5 * std::log(N)) / N);
  }
  const double r1 = 2 * rate[1] - rate[0], r2 = 2 * rate[2] - rate[1];
  e.tau = r2 * std::cos(t0);
  e.ci = std::abs(r2 - r1) * std::cos(t0);
  e.nUsed = sizes.back();
  return e;
}

struct TensionTable {
  double beta = 0.0;
  int n = 0;
  double p = 2.0;
  std::string route;
  std::vector<TensionEntry> entries;  // increasing theta on [0, 2 pi)

  std::vector<double> angles() const {
    std::vector<double> a;
    for (const auto& e : entries) a.push_back(e.theta);
    return a;
  }
  std::vector<double> values() const {
    std::vector<double> v;
    for (const auto& e : entries) v.push_back(e.tau);
    return v;
  }
  /// Periodic linear interpolation.
  double at(double theta) const {
    const double tp = 2 * std::numbers::pi;
    double t = std::fmod(theta, tp);
    if (t < 0) t += tp;
    const std::size_t m = entries.size();
    for (std::size_t i = 0; i < m; ++i) {
      const double a = entries[i].theta, b = i + 1 < m ? entries[i + 1].theta : entries[0].theta + tp;
      if (t >= a && t <= b) return entries[i].tau + (t - a) / (b - a) * ((i + 1 < m ? entries[i + 1] : entries[0]).tau - entries[i].tau);
    }
    return entries[0].tau + (t + tp - entries[m - 1].theta) / (entries[0].theta + tp - entries[m - 1].theta) *
                                (entries[0].tau - entries[m - 1].tau);
  }
  /// Homogeneous extension tau(v) = |v| tau(angle of v).
  double homogeneous(double vx, double vy) const { return std::hypot(vx, vy) * at(std::atan2(vy, vx)); }
};

/// Table on `count` equally spaced angles; folded duplicates are computed once.
inline TensionTable tensionTable(double beta, int n, double p, std::size_t count, const TensionOptions& opt = {}) {
  if (count < 4) throw DomainError("need at least four angles");
  TensionTable t;
  t.beta = beta;
  t.n = n;
  t.p = p;
  t.route = "column transfer, x-directed simple paths";
  std::map<long long, TensionEntry> cache;
  for (std::size_t k = 0; k < count; ++k) {
    const double th = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count);
    const auto key = std::llround(foldQuarterTurn(th) * 1e12);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, estimateTension(beta, n, p, th, opt)).first;
    TensionEntry e = it->second;
    e.theta = th;
    t.entries.push_back(e);
  }
  return t;
}

inline void writeTensionCsv(std::ostream& os, const TensionTable& t) {
  os << "theta,tau,ci,N_used\n";
  os.precision(12);
  for (const auto& e : t.entries) os << e.theta << ',' << e.tau << ',' << e.ci << ',' << e.nUsed << '\n';
}

/// Sampled strict-convexity surrogate: tau(u) + tau(v) > tau(u + v) on all
/// non-parallel pairs of table directions. Returns the smallest margin.
inline double convexityMargin(const TensionTable& t) {
  double worst = INFINITY;
  for (std::size_t i = 0; i < t.entries.size(); ++i)
    for (std::size_t j = i + 1; j < t.entries.size(); ++j) {
      const double a = t.entries[i].theta, b = t.entries[j].theta;
      if (std::abs(std::sin(a - b)) < 1e-9) continue;
      const double ux = std::cos(a), uy = std::sin(a), vx = std::cos(b), vy = std::sin(b);
      worst = std::min(worst, t.entries[i].tau + t.entries[j].tau - t.homogeneous(ux + vx, uy + vy));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Exact enumeration of simple dual paths.

/// Number of simple paths from the origin to `target` by excess length:
/// byExcess[k] counts paths of length minLength + k.
struct PathCounts {
  Point target;
  long minLength = 0;
  std::vector<std::uint64_t> byExcess;

  double logZ(double beta) const {
    double m = -INFINITY;
    std::vector<double> terms;
    for (std::size_t k = 0; k < byExcess.size(); ++k)
      if (byExcess[k]) {
        terms.push_back(std::log(static_cast<double>(byExcess[k])) - beta * static_cast<double>(minLength + static_cast<long>(k)));
        m = std::max(m, terms.back());
      }
    double s = 0.0;
    for (double v : terms) s += std::exp(v - m);
    return m + std::log(s);
  }
};

inline PathCounts enumeratePaths(Point target, int maxExcess, bool xDirected = false) {
  PathCounts pc;
  pc.target = target;
  pc.minLength = std::abs(target.x) + std::abs(target.y);
  pc.byExcess.assign(static_cast<std::size_t>(maxExcess) + 1, 0);
  const long maxLen = pc.minLength + maxExcess;
  const int pad = maxExcess + 2;
  const int x0 = std::min(0, target.x) - pad, y0 = std::min(0, target.y) - pad;
  const int W = std::abs(target.x) + 2 * pad + 1, H = std::abs(target.y) + 2 * pad + 1;
  std::vector<char> seen(static_cast<std::size_t>(W) * H, 0);
  auto at = [&](int x, int y) -> char& { return seen[static_cast<std::size_t>(y - y0) * W + (x - x0)]; };
  static constexpr int dx[4] = {1, 0, -1, 0}, dy[4] = {0, 1, 0, -1};
  struct Rec {
    const PathCounts& pcr;
    std::vector<std::uint64_t>& out;
    long maxLen;
    bool xDirected;
    int x0, y0, W, H;
    decltype(at)& atr;
    void go(int x, int y, long len) {
      if (x == pcr.target.x && y == pcr.target.y) {
        ++out[static_cast<std::size_t>(len - pcr.minLength)];
        return;
      }
      for (int d = 0; d < 4; ++d) {
        if (xDirected && d == 2) continue;
        const int nx = x + dx[d], ny = y + dy[d];
        if (nx < x0 || ny < y0 || nx >= x0 + W || ny >= y0 + H) continue;
        const long rest = std::abs(pcr.target.x - nx) + std::abs(pcr.target.y - ny);
        if (len + 1 + rest > maxLen || atr(nx, ny)) continue;
        atr(nx, ny) = 1;
        go(nx, ny, len + 1);
        atr(nx, ny) = 0;
      }
    }
  } rec{pc, pc.byExcess, maxLen, xDirected, x0, y0, W, H, at};
  at(0, 0) = 1;
  rec.go(0, 0, 0);
  return pc;
}

/// Enumeration-route tension along the primitive direction (a, b): exact
/// path counts at k (a, b) for k = 1..K with K (|a| + |b|) <= maxL1.
struct EnumeratedTension {
  Point direction;
  std::vector<double> logZ;  // index k-1
  std::vector<long> l1;      // ||k (a, b)||_1
  double tau = 0.0;          // homogeneous, unit Euclidean vector
  double ci = 0.0;
};

inline EnumeratedTension enumeratedTension(double beta, Point dir, int maxL1, int maxExcess) {
  const int step = std::abs(dir.x) + std::abs(dir.y);
  if (step == 0 || step > maxL1) throw DomainError("direction does not fit the enumeration range");
  EnumeratedTension r;
  r.direction = dir;
  for (int k = 1; k * step <= maxL1; ++k) {
    const auto pc = enumeratePaths({k * dir.x, k * dir.y}, maxExcess);
    r.logZ.push_back(pc.logZ(beta));
    r.l1.push_back(static_cast<long>(k) * step);
  }
  const double norm = std::hypot(dir.x, dir.y);
  const std::size_t K = r.logZ.size();
  if (K == 1) {
    r.tau = -r.logZ[0] / norm;
    r.ci = INFINITY;
    return r;
  }
  const double last = -(r.logZ[K - 1] - r.logZ[K - 2]) / norm;
  const double prev = K > 2 ? -(r.logZ[K - 2] - r.logZ[K - 3]) / norm : -r.logZ[0] / norm;
  r.tau = last;
  r.ci = std::abs(last - prev);
  return r;
}

// ---------------------------------------------------------------------------
// Irreducible components of x-directed paths.

/// Counts of irreducible components grouped by (displacement, length):
/// x-directed simple paths from the origin starting and ending with a right
/// step, contained in the forward cone of the start and the backward cone
/// of the end, with no interior cone-point. Displacement ||X||_1 <= kMax.
struct IrreducibleCounts {
  int kMax = 0;
  std::map<std::tuple<int, int, int>, std::uint64_t> counts;  // (X1, X2, length)
};

inline IrreducibleCounts enumerateIrreducible(int kMax) {
  if (kMax < 1 || kMax > 12) throw DomainError("kMax must lie in [1, 12]");
  IrreducibleCounts ic;
  ic.kMax = kMax;
  std::vector<Point> path{{0, 0}};
  // steps: 0 right, 1 up, 3 down; `last` forbids immediate reversal.
  auto check = [&](const Point& end) {
    for (const auto& q : path)
      if (std::abs(q.y - end.y) > end.x - q.x) return false;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      bool cone = true;
      for (const auto& q : path)
        if (!inDoubleCone(path[i], q)) {
          cone = false;
          break;
        }
      if (cone) return false;
    }
    return true;
  };
  struct Rec {
    std::vector<Point>& path;
    IrreducibleCounts& ic;
    decltype(check)& ok;
    int kMax;
    void go(int last) {
      const Point c = path.back();
      for (int d : {0, 1, 3}) {
        if ((d == 1 && last == 3) || (d == 3 && last == 1)) continue;
        if (path.size() == 1 && d != 0) continue;
        const Point n{c.x + (d == 0), c.y + (d == 1) - (d == 3)};
        if (std::abs(n.y) > n.x) continue;                 // forward cone of the origin
        // Every admissible end X lies in the forward cone of n, which forces
        // ||X||_1 >= n.x + |n.y|.
        if (n.x + std::abs(n.y) > kMax) continue;
        path.push_back(n);
        if (d == 0 && ok(n))
          ++ic.counts[{n.x, n.y, static_cast<int>(path.size()) - 1}];
        go(d);
        path.pop_back();
      }
    }
  } rec{path, ic, check, kMax};
  rec.go(-1);
  return ic;
}

struct IrreducibleSummary {
  double totalMass = 0.0;  // sum of exp(tau X1) exp(-beta length)
  double meanX = 0.0, meanY = 0.0;
  double varY = 0.0;       // under the normalized law
  std::size_t components = 0;
};

inline IrreducibleSummary summarizeIrreducible(const IrreducibleCounts& ic, double beta, double tau0) {
  IrreducibleSummary s;
  double m1x = 0, m1y = 0, m2y = 0;
  for (const auto& [key, cnt] : ic.counts) {
    const auto [X1, X2, len] = key;
    const double w = static_cast<double>(cnt) * std::exp(tau0 * X1 - beta * len);
    s.totalMass += w;
    m1x += w * X1;
    m1y += w * X2;
    m2y += w * X2 * X2;
    s.components += cnt;
  }
  s.meanX = m1x / s.totalMass;
  s.meanY = m1y / s.totalMass;
  s.varY = m2y / s.totalMass - s.meanY * s.meanY;
  return s;
}

}  // namespace zgff

#endif  // ZGFF_TENSION_HPP
