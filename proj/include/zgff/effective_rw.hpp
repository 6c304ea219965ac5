#ifndef ZGFF_EFFECTIVE_RW_HPP
#define ZGFF_EFFECTIVE_RW_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/ferrari_spohn.hpp"
#include "zgff/rng.hpp"
#include "zgff/stats.hpp"
#include "zgff/tension.hpp"

namespace zgff {

// ---------------------------------------------------------------------------
// Increment laws.

struct Step {
  int dx = 1;
  int dy = 0;
  double prob = 0.0;
};

struct IncrementLaw {
  std::vector<Step> steps;
  std::string source;
  double truncatedMass = 0.0;  // 1 - enumerated mass before normalization
  double tailRate = 0.0;       // shell mass ~ C exp(-tailRate k), k = |X|_1
  double tailPrefactor = 0.0;
  std::string status = "ok";

  double meanX() const {
    double m = 0.0;
    for (const auto& s : steps) m += s.prob * s.dx;
    return m;
  }
  double meanY() const {
    double m = 0.0;
    for (const auto& s : steps) m += s.prob * s.dy;
    return m;
  }
  double yVariance() const {
    const double my = meanY();
    double v = 0.0;
    for (const auto& s : steps) v += s.prob * (s.dy - my) * (s.dy - my);
    return v;
  }
  bool unitSteps() const {
    return std::all_of(steps.begin(), steps.end(), [](const Step& s) { return s.dx == 1; });
  }
  int maxAbsDy() const {
    int m = 0;
    for (const auto& s : steps) m = std::max(m, std::abs(s.dy));
    return m;
  }
  double prob(int dx, int dy) const {
    for (const auto& s : steps)
      if (s.dx == dx && s.dy == dy) return s.prob;
    return 0.0;
  }
  void validate() const {
    if (steps.empty()) throw DomainError("increment law has no support");
    double total = 0.0;
    for (const auto& s : steps) {
      if (s.dx <= 0) throw DomainError("increment x-components must be positive");
      if (!(s.prob >= 0.0)) throw DomainError("negative increment probability");
      total += s.prob;
      if (std::abs(prob(s.dx, -s.dy) - s.prob) > 1e-12) throw DomainError("increment law is not y-symmetric");
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("increment probabilities do not sum to one");
  }
};

/// Three-step caricature: (1,0) with 1 - 2q, (1,+-1) with q each.
inline IncrementLaw basicIncrementLaw(double q) {
  if (!(q > 0.0 && q < 0.5)) throw DomainError("q must lie in (0, 1/2)");
  IncrementLaw law;
  law.steps = {{1, 0, 1.0 - 2.0 * q}, {1, 1, q}, {1, -1, q}};
  law.source = "three-step caricature";
  return law;
}

/// Law of the irreducible components of the truncated polymer class,
/// weighted by exp(tau X1 - beta length) with tau the transfer-route tension
/// in the horizontal direction, then normalized.
inline IncrementLaw enumeratedIncrementLaw(double beta, int n, double p, int kMax) {
  if (kMax < 1 || kMax > 8) throw DomainError("kMax must lie in [1, 8]");
  const double tau = estimateTension(beta, n, p, 0.0).tau;
  const auto ic = enumerateIrreducible(kMax);
  std::map<std::pair<int, int>, double> w;
  std::map<int, double> shell;
  double total = 0.0;
  for (const auto& [key, cnt] : ic.counts) {
    const auto [X1, X2, len] = key;
    const double v = static_cast<double>(cnt) * std::exp(tau * X1 - beta * len);
    w[{X1, X2}] += v;
    shell[X1 + std::abs(X2)] += v;
    total += v;
  }
  IncrementLaw law;
  law.source = "enumerated irreducible components";
  law.truncatedMass = 1.0 - total;
  for (const auto& [k, v] : w) law.steps.push_back({k.first, k.second, v / total});
  // Symmetrize exactly and renormalize so that the invariants hold to rounding.
  double s = 0.0;
  for (auto& st : law.steps) {
    st.prob = 0.5 * (st.prob + law.prob(st.dx, -st.dy));
    s += st.prob;
  }
  for (auto& st : law.steps) st.prob /= s;
  std::vector<double> ks, ls;
  for (const auto& [k, v] : shell)
    if (k >= 2 && v > 0) {
      ks.push_back(k);
      ls.push_back(std::log(v));
    }
  if (ks.size() >= 2) {
    const auto fit = stats::linearFit(ks, ls);
    law.tailRate = -fit.slope;
    law.tailPrefactor = std::exp(fit.intercept);
  }
  if (law.truncatedMass > 0.1) law.status = "warning: truncated mass exceeds 10%";
  return law;
}

// ---------------------------------------------------------------------------
// Area-tilted bridges.

struct TiltedBridgeSpec {
  Point u;
  Point v;
  std::optional<int> floor = 0;
  std::optional<int> ceiling;
  double tiltN = std::numeric_limits<double>::infinity();
  IncrementLaw law;

  int width() const { return v.x - u.x; }
  bool tilted() const { return std::isfinite(tiltN); }
  void validate() const {
    if (v.x <= u.x) throw DomainError("bridge endpoints must satisfy v.x > u.x");
    if (!(tiltN > 0)) throw DomainError("tilt scale must be positive");
    if (tilted() && !floor) throw DomainError("an area tilt needs a floor");
    if (floor && (u.y < *floor || v.y < *floor)) throw InfeasibleError("endpoints lie below the floor");
    if (ceiling && (u.y > *ceiling || v.y > *ceiling)) throw InfeasibleError("endpoints lie above the ceiling");
    if (floor && ceiling && *ceiling < *floor) throw InfeasibleError("ceiling below floor");
    law.validate();
  }
  /// Heights that any bridge can reach, intersected with floor and ceiling.
  std::pair<int, int> reachableWindow() const {
    // A path of at most W steps must leave u and come back to v.
    const long reach = static_cast<long>(width()) * law.maxAbsDy();
    long hi = static_cast<long>(std::floor((u.y + v.y + reach) / 2.0));
    long lo = static_cast<long>(std::ceil((u.y + v.y - reach) / 2.0));
    if (floor) lo = std::max<long>(lo, *floor);
    if (ceiling) hi = std::min<long>(hi, *ceiling);
    return {static_cast<int>(lo), static_cast<int>(hi)};
  }
};

/// Column-sum area of a path given by its vertices, with linear
/// interpolation at the integer columns between vertices.
inline double bridgeArea(const std::vector<Point>& vertices, int floor) {
  double a = vertices.front().y - floor;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[i + 1];
    for (int x = p.x + 1; x <= q.x; ++x)
      a += p.y + static_cast<double>(q.y - p.y) * (x - p.x) / (q.x - p.x) - floor;
  }
  return a;
}

/// log of prod p(steps) exp(-A / N), or -inf outside the floor/ceiling.
inline double bridgeLogWeight(const TiltedBridgeSpec& spec, const std::vector<Point>& vertices) {
  double lw = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const double pr = spec.law.prob(vertices[i + 1].x - vertices[i].x, vertices[i + 1].y - vertices[i].y);
    if (pr <= 0.0) return -INFINITY;
    lw += std::log(pr);
  }
  for (const auto& q : vertices) {
    if (spec.floor && q.y < *spec.floor) return -INFINITY;
    if (spec.ceiling && q.y > *spec.ceiling) return -INFINITY;
  }
  if (spec.tilted()) lw -= bridgeArea(vertices, *spec.floor) / spec.tiltN;
  return lw;
}

/// Heights at every integer column, interpolated between vertices.
inline std::vector<double> columnHeights(const std::vector<Point>& vertices) {
  std::vector<double> h{static_cast<double>(vertices.front().y)};
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const auto& p = vertices[i];
    const auto& q = vertices[i + 1];
    for (int x = p.x + 1; x <= q.x; ++x) h.push_back(p.y + static_cast<double>(q.y - p.y) * (x - p.x) / (q.x - p.x));
  }
  return h;
}

/// Vertex-occupation probabilities per column: prob[x][h - lo] is the
/// probability that the bridge has a vertex at (u.x + x, h). For unit-step
/// laws every column is visited and each row sums to one.
struct ColumnMarginals {
  int lo = 0;
  int hi = 0;
  std::vector<std::vector<double>> prob;
  double logZ = 0.0;
  bool capped = false;  // the height window truncated the model

  double mean(std::size_t x) const {
    double m = 0.0, s = 0.0;
    for (std::size_t k = 0; k < prob[x].size(); ++k) {
      m += prob[x][k] * (lo + static_cast<double>(k));
      s += prob[x][k];
    }
    return m / s;
  }
  double cdf(std::size_t x, int h) const {
    double s = 0.0;
    for (int k = lo; k <= std::min(h, hi); ++k) s += prob[x][static_cast<std::size_t>(k - lo)];
    return s;
  }
};

/// Forward and backward messages of the bridge over columns and heights in
/// [lo, hi], each column stored with its own log scale.
class BridgeTransfer {
 public:
  BridgeTransfer(const TiltedBridgeSpec& spec, int lo, int hi) : spec_(spec), lo_(lo), hi_(hi) {
    spec.validate();
    if (hi < lo) throw InfeasibleError("empty height window");
    if (spec.u.y < lo || spec.u.y > hi || spec.v.y < lo || spec.v.y > hi)
      throw ResourceLimitError("height cap excludes an endpoint");
    const int W = spec.width();
    const auto H = static_cast<std::size_t>(hi - lo + 1);
    fwd_.assign(static_cast<std::size_t>(W + 1), std::vector<double>(H, 0.0));
    bwd_ = fwd_;
    fs_.assign(static_cast<std::size_t>(W + 1), -INFINITY);
    bs_ = fs_;
    fwd_[0][idx(spec.u.y)] = 1.0;
    fs_[0] = 0.0;
    for (int x = 1; x <= W; ++x) pull(x, true);
    bwd_[static_cast<std::size_t>(W)][idx(spec.v.y)] = 1.0;
    bs_[static_cast<std::size_t>(W)] = 0.0;
    for (int x = W - 1; x >= 0; --x) pull(x, false);
    const double end = fwd_[static_cast<std::size_t>(W)][idx(spec.v.y)];
    if (!(end > 0.0)) throw InfeasibleError("no admissible bridge between the endpoints");
    logZ_ = std::log(end) + fs_[static_cast<std::size_t>(W)];
    if (spec.tilted()) logZ_ -= (spec.u.y - *spec.floor) / spec.tiltN;
  }

  double logZ() const { return logZ_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }

  ColumnMarginals marginals() const {
    ColumnMarginals m;
    m.lo = lo_;
    m.hi = hi_;
    m.logZ = logZ_;
    const double lz = std::log(fwd_.back()[idx(spec_.v.y)]) + fs_.back();
    for (std::size_t x = 0; x < fwd_.size(); ++x) {
      std::vector<double> row(fwd_[x].size(), 0.0);
      for (std::size_t k = 0; k < row.size(); ++k)
        if (fwd_[x][k] > 0.0 && bwd_[x][k] > 0.0)
          row[k] = std::exp(std::log(fwd_[x][k]) + std::log(bwd_[x][k]) + fs_[x] + bs_[x] - lz);
      m.prob.push_back(std::move(row));
    }
    return m;
  }

  /// Exact draw: forward simulation driven by the backward messages.
  std::vector<Point> sample(SplitMix64& g) const {
    const int W = spec_.width();
    std::vector<Point> path{{0, spec_.u.y}};
    std::vector<double> w;
    while (path.back().x < W) {
      const auto [x, h] = path.back();
      w.clear();
      double tot = 0.0;
      for (const auto& s : spec_.law.steps) {
        const int nx = x + s.dx, nh = h + s.dy;
        double v = 0.0;
        if (nx <= W && nh >= lo_ && nh <= hi_ && s.prob > 0) {
          const double b = bwd_[static_cast<std::size_t>(nx)][idx(nh)];
          if (b > 0) v = std::exp(std::log(s.prob * b) - stepArea(h, s) + bs_[static_cast<std::size_t>(nx)] - bs_[static_cast<std::size_t>(x)]);
        }
        w.push_back(v);
        tot += v;
      }
      double r = g.uniform() * tot;
      std::size_t k = 0;
      for (; k + 1 < w.size(); ++k) {
        if (r < w[k]) break;
        r -= w[k];
      }
      while (w[k] == 0.0) --k;  // guard against rounding at the top end
      path.push_back({x + spec_.law.steps[k].dx, h + spec_.law.steps[k].dy});
    }
    for (auto& q : path) q.x += spec_.u.x;
    return path;
  }

 private:
  std::size_t idx(int h) const { return static_cast<std::size_t>(h - lo_); }

  // Area of the columns covered by one step, divided by N.
  double stepArea(int h, const Step& s) const {
    if (!spec_.tilted()) return 0.0;
    const double a = s.dx * static_cast<double>(h - *spec_.floor) + s.dy * (s.dx + 1) / 2.0;
    return a / spec_.tiltN;
  }

  void pull(int x, bool forward) {
    const int W = spec_.width();
    auto& out = forward ? fwd_[static_cast<std::size_t>(x)] : bwd_[static_cast<std::size_t>(x)];
    auto& scale = forward ? fs_ : bs_;
    const auto& msg = forward ? fwd_ : bwd_;
    double ref = -INFINITY;
    for (const auto& s : spec_.law.steps) {
      const int y = forward ? x - s.dx : x + s.dx;
      if (y >= 0 && y <= W) ref = std::max(ref, scale[static_cast<std::size_t>(y)]);
    }
    if (ref == -INFINITY) return;
    for (const auto& s : spec_.law.steps) {
      const int y = forward ? x - s.dx : x + s.dx;
      if (y < 0 || y > W || s.prob <= 0) continue;
      const double f = std::exp(scale[static_cast<std::size_t>(y)] - ref) * s.prob;
      if (f == 0.0) continue;
      const auto& src = msg[static_cast<std::size_t>(y)];
      for (int h = lo_; h <= hi_; ++h) {
        // forward: (y, h - dy) -> (x, h); backward: (x, h) -> (y, h + dy)
        const int g = forward ? h - s.dy : h + s.dy;
        if (g < lo_ || g > hi_) continue;
        const double v = src[idx(g)];
        if (v == 0.0) continue;
        out[idx(h)] += v * f * std::exp(-stepArea(forward ? g : h, s));
      }
    }
    const double mx = *std::max_element(out.begin(), out.end());
    if (mx > 0.0) {
      for (auto& v : out) v /= mx;
      scale[static_cast<std::size_t>(x)] = ref + std::log(mx);
    }
  }

  TiltedBridgeSpec spec_;
  int lo_, hi_;
  std::vector<std::vector<double>> fwd_, bwd_;
  std::vector<double> fs_, bs_;
  double logZ_ = 0.0;
};

inline std::pair<int, int> capWindow(const TiltedBridgeSpec& spec, int M, bool& capped) {
  if (M < 1) throw DomainError("height cap must be positive");
  int lo, hi;
  if (spec.floor) {
    lo = *spec.floor;
    hi = lo + M - 1;
    capped = !spec.ceiling || *spec.ceiling > hi;
    if (spec.ceiling) hi = std::min(hi, *spec.ceiling);
  } else if (spec.ceiling) {
    hi = *spec.ceiling;
    lo = hi - M + 1;
    capped = true;
  } else {
    throw DomainError("a height cap needs a floor or a ceiling");
  }
  const auto [rlo, rhi] = spec.reachableWindow();
  if (rlo >= lo && rhi <= hi) capped = false;
  return {lo, hi};
}

/// Exact column marginals for small instances (W <= 20, M <= 40 heights).
inline ColumnMarginals transferMatrixExact(const TiltedBridgeSpec& spec, int M) {
  spec.validate();
  if (spec.width() > 20 || M > 40) throw ResourceLimitError("transfer oracle limited to W <= 20 and M <= 40");
  bool capped = false;
  const auto [lo, hi] = capWindow(spec, M, capped);
  auto m = BridgeTransfer(spec, lo, hi).marginals();
  m.capped = capped;
  return m;
}

/// Independent oracle: every bridge in the window, weighted directly.
struct EnumeratedBridges {
  std::vector<std::vector<Point>> paths;
  std::vector<double> logWeights;
  double logZ = 0.0;
};

inline EnumeratedBridges enumerateBridges(const TiltedBridgeSpec& spec, int lo, int hi, std::size_t maxPaths = 5'000'000) {
  spec.validate();
  EnumeratedBridges out;
  std::vector<Point> cur{spec.u};
  struct Rec {
    const TiltedBridgeSpec& spec;
    int lo, hi;
    std::size_t maxPaths;
    std::vector<Point>& cur;
    EnumeratedBridges& out;
    void go() {
      const Point c = cur.back();
      if (c.x == spec.v.x) {
        if (c.y != spec.v.y) return;
        const double lw = bridgeLogWeight(spec, cur);
        if (lw == -INFINITY) return;
        if (out.paths.size() >= maxPaths) throw ResourceLimitError("too many bridges to enumerate");
        out.paths.push_back(cur);
        out.logWeights.push_back(lw);
        return;
      }
      for (const auto& s : spec.law.steps) {
        const Point n{c.x + s.dx, c.y + s.dy};
        if (n.x > spec.v.x || n.y < lo || n.y > hi || s.prob <= 0) continue;
        cur.push_back(n);
        go();
        cur.pop_back();
      }
    }
  } rec{spec, lo, hi, maxPaths, cur, out};
  rec.go();
  if (out.paths.empty()) throw InfeasibleError("no admissible bridge between the endpoints");
  const double m = *std::max_element(out.logWeights.begin(), out.logWeights.end());
  double s = 0.0;
  for (double lw : out.logWeights) s += std::exp(lw - m);
  out.logZ = m + std::log(s);
  return out;
}

inline ColumnMarginals enumerationMarginals(const TiltedBridgeSpec& spec, int M) {
  spec.validate();
  bool capped = false;
  const auto [lo, hi] = capWindow(spec, M, capped);
  const auto e = enumerateBridges(spec, lo, hi);
  ColumnMarginals m;
  m.lo = lo;
  m.hi = hi;
  m.logZ = e.logZ;
  m.capped = capped;
  m.prob.assign(static_cast<std::size_t>(spec.width() + 1), std::vector<double>(static_cast<std::size_t>(hi - lo + 1), 0.0));
  for (std::size_t i = 0; i < e.paths.size(); ++i) {
    const double w = std::exp(e.logWeights[i] - e.logZ);
    for (const auto& q : e.paths[i]) m.prob[static_cast<std::size_t>(q.x - spec.u.x)][static_cast<std::size_t>(q.y - lo)] += w;
  }
  return m;
}

// ---------------------------------------------------------------------------
// Sampling.

enum class BridgeMethod { Auto, Enumeration, Mcmc, Transfer };

struct BridgeSamplerOptions {
  BridgeMethod method = BridgeMethod::Auto;
  long burnIn = 2000;  // sweeps
  long thin = 1;       // sweeps between recorded paths
  int heightCap = 0;   // 0: no cap beyond floor/ceiling
};

struct BridgeSample {
  std::vector<std::vector<double>> paths;  // heights at every integer column
  std::string method;
  double acceptance = std::numeric_limits<double>::quiet_NaN();
  double autocorrTime = std::numeric_limits<double>::quiet_NaN();  // of the midpoint height, in recorded samples
};

namespace detail {

inline std::pair<int, int> samplerWindow(const TiltedBridgeSpec& spec, int heightCap) {
  auto [lo, hi] = spec.reachableWindow();
  if (heightCap > 0) {
    bool capped = false;
    const auto w = capWindow(spec, heightCap, capped);
    lo = std::max(lo, w.first);
    hi = std::min(hi, w.second);
  }
  return {lo, hi};
}

// Lowest admissible path, from boolean reachability in the window.
inline std::vector<int> lowestBridge(const TiltedBridgeSpec& spec, int lo, int hi) {
  const int W = spec.width();
  const auto H = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::vector<char>> ok(static_cast<std::size_t>(W + 1), std::vector<char>(H, 0));
  ok[static_cast<std::size_t>(W)][static_cast<std::size_t>(spec.v.y - lo)] = 1;
  for (int x = W - 1; x >= 0; --x)
    for (int h = lo; h <= hi; ++h)
      for (const auto& s : spec.law.steps)
        if (s.prob > 0 && h + s.dy >= lo && h + s.dy <= hi && ok[static_cast<std::size_t>(x + 1)][static_cast<std::size_t>(h + s.dy - lo)])
          ok[static_cast<std::size_t>(x)][static_cast<std::size_t>(h - lo)] = 1;
  if (!ok[0][static_cast<std::size_t>(spec.u.y - lo)]) throw InfeasibleError("no admissible bridge between the endpoints");
  std::vector<int> h{spec.u.y};
  for (int x = 1; x <= W; ++x) {
    int best = std::numeric_limits<int>::max();
    for (const auto& s : spec.law.steps) {
      const int n = h.back() + s.dy;
      if (s.prob > 0 && n >= lo && n <= hi && ok[static_cast<std::size_t>(x)][static_cast<std::size_t>(n - lo)]) best = std::min(best, n);
    }
    h.push_back(best);
  }
  return h;
}

}  // namespace detail

/// Metropolis chain on height sequences (unit-step laws): single-column
/// shifts by +-1 and swaps of the two increments around a column.
inline BridgeSample mcmcBridges(const TiltedBridgeSpec& spec, std::size_t count, std::uint64_t seed,
                                const BridgeSamplerOptions& opt = {}) {
  spec.validate();
  if (!spec.law.unitSteps()) throw DomainError("path MCMC needs a unit-step increment law");
  const int W = spec.width();
  const auto [lo, hi] = detail::samplerWindow(spec, opt.heightCap);
  auto h = detail::lowestBridge(spec, lo, hi);
  BridgeSample out;
  out.method = "mcmc";
  if (W < 2) {
    out.paths.assign(count, std::vector<double>(h.begin(), h.end()));
    return out;
  }
  SplitMix64 g(seed);
  const double invN = spec.tilted() ? 1.0 / spec.tiltN : 0.0;
  long accepted = 0, proposed = 0;
  auto sweep = [&] {
    for (int k = 0; k < W - 1; ++k) {
      const int i = 1 + static_cast<int>(g.below(static_cast<std::uint64_t>(W - 1)));
      const auto ui = static_cast<std::size_t>(i);
      int nh;
      if (g.below(2) == 0)
        nh = h[ui] + (g.below(2) ? 1 : -1);
      else
        nh = h[ui - 1] + (h[ui + 1] - h[ui]);
      ++proposed;
      if (nh == h[ui] || nh < lo || nh > hi) continue;
      const double pOld = spec.law.prob(1, h[ui] - h[ui - 1]) * spec.law.prob(1, h[ui + 1] - h[ui]);
      const double pNew = spec.law.prob(1, nh - h[ui - 1]) * spec.law.prob(1, h[ui + 1] - nh);
      if (pNew <= 0.0) continue;
      const double ratio = pNew / pOld * std::exp(-(nh - h[ui]) * invN);
      if (ratio >= 1.0 || g.uniform() < ratio) {
        h[ui] = nh;
        ++accepted;
      }
    }
  };
  for (long s = 0; s < opt.burnIn; ++s) sweep();
  std::vector<double> trace;
  out.paths.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    for (long s = 0; s < std::max(1L, opt.thin); ++s) sweep();
    out.paths.emplace_back(h.begin(), h.end());
    trace.push_back(h[static_cast<std::size_t>(W / 2)]);
  }
  out.acceptance = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 0.0;
  if (trace.size() > 10) out.autocorrTime = stats::integratedAutocorrTime(trace);
  return out;
}

/// Bridges drawn from the tilted measure. Auto picks enumeration for short
/// bridges, MCMC for longer ones with unit steps, otherwise the exact
/// transfer sampler.
inline BridgeSample sampleTiltedBridge(const TiltedBridgeSpec& spec, std::size_t count, std::uint64_t seed,
                                       const BridgeSamplerOptions& opt = {}) {
  spec.validate();
  auto method = opt.method;
  if (method == BridgeMethod::Auto)
    method = spec.width() <= 10 ? BridgeMethod::Enumeration : spec.law.unitSteps() ? BridgeMethod::Mcmc : BridgeMethod::Transfer;
  if (method == BridgeMethod::Mcmc) return mcmcBridges(spec, count, seed, opt);
  const auto [lo, hi] = detail::samplerWindow(spec, opt.heightCap);
  BridgeSample out;
  SplitMix64 g(seed);
  if (method == BridgeMethod::Enumeration) {
    out.method = "enumeration";
    const auto e = enumerateBridges(spec, lo, hi);
    std::vector<double> cum;
    double s = 0.0;
    for (double lw : e.logWeights) cum.push_back(s += std::exp(lw - e.logZ));
    for (std::size_t n = 0; n < count; ++n) {
      const double r = g.uniform() * s;
      const auto k = std::min<std::size_t>(static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), r) - cum.begin()), cum.size() - 1);
      out.paths.push_back(columnHeights(e.paths[k]));
    }
    return out;
  }
  out.method = "transfer";
  const BridgeTransfer t(spec, lo, hi);
  for (std::size_t n = 0; n < count; ++n) out.paths.push_back(columnHeights(t.sample(g)));
  return out;
}

// ---------------------------------------------------------------------------
// Comparison with the Ferrari-Spohn law.

struct FsComparison {
  double N = 0.0;
  double sigma = 0.0;
  std::size_t samples = 0;
  double critical95 = 0.0;
  std::vector<double> t;
  std::vector<std::size_t> column;
  std::vector<double> ks;

  double midpointKs() const {
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] == 0.0) return ks[i];
    throw StructuralError("midpoint not among the compared times");
  }
};

/// Rescales heights by N^{-1/3} (relative to the floor) and columns by
/// N^{-2/3} from the bridge midpoint, and compares the marginals at the
/// given times with the FS stationary law.
inline FsComparison fsComparison(const std::vector<std::vector<double>>& paths, double N, double sigma, double floor = 0.0,
                                 std::vector<double> times = {-1.0, -0.5, 0.0, 0.5}) {
  if (paths.size() < 20) throw InfeasibleError("too few paths for a KS comparison");
  if (!(N > 0) || !(sigma > 0)) throw DomainError("N and sigma must be positive");
  const double span = std::pow(N, 2.0 / 3.0), hs = std::cbrt(N);
  const std::size_t W = paths.front().size() - 1;
  if (static_cast<double>(W) < 6.0 * span - 1.0) throw DomainError("bridge narrower than 6 N^{2/3}");
  const FSModel fs(sigma);
  FsComparison r;
  r.N = N;
  r.sigma = sigma;
  r.samples = paths.size();
  r.critical95 = stats::ksCritical95(paths.size());
  for (double t : times) {
    if (std::abs(t) > 1.0) throw DomainError("comparison times must lie in [-1, 1]");
    const auto col = static_cast<std::size_t>(std::llround(static_cast<double>(W) / 2.0 + t * span));
    std::vector<double> xs;
    xs.reserve(paths.size());
    for (const auto& p : paths) {
      if (p.size() != W + 1) throw StructuralError("paths of different widths");
      xs.push_back((p[col] - floor) / hs);
    }
    r.t.push_back(t);
    r.column.push_back(col);
    r.ks.push_back(stats::ksStatistic(std::move(xs), [&](double x) { return fs.cdf(x); }));
  }
  return r;
}

}  // namespace zgff

#endif  // ZGFF_EFFECTIVE_RW_HPP
