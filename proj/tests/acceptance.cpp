// Acceptance run: one PASS/FAIL line per criterion. Oracles are written
// out here independently of the unit tests.

#include <CLI11.hpp>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "zgff/airy.hpp"
#include "zgff/effective_rw.hpp"
#include "zgff/ferrari_spohn.hpp"
#include "zgff/level_lines.hpp"
#include "zgff/mcmc.hpp"
#include "zgff/rng.hpp"
#include "zgff/scales.hpp"
#include "zgff/stats.hpp"
#include "zgff/tension.hpp"

using namespace zgff;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  bool gating;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1. Gibbs exactness ----------------------------------------------------

// The 81 states of a 2x2 interior in {0,1,2}^4 with zero boundary, p = 2:
// each site has two boundary neighbours and two interior neighbours.
std::array<double, 81> gibbs2x2(double beta) {
  std::array<double, 81> w{};
  double z = 0.0;
  for (int s = 0; s < 81; ++s) {
    const int a = s % 3, b = s / 3 % 3, c = s / 9 % 3, d = s / 27;
    const double e = 2.0 * (a * a + b * b + c * c + d * d) + (a - b) * (a - b) + (c - d) * (c - d) + (a - c) * (a - c) +
                     (b - d) * (b - d);
    z += w[static_cast<std::size_t>(s)] = std::exp(-beta * e);
  }
  for (auto& v : w) v /= z;
  return w;
}

Outcome gibbsExactness() {
  ModelParams m;
  m.beta = 1.0;
  m.p = 2.0;
  m.floor = BoundSpec::uniform(0);
  m.ceiling = BoundSpec::uniform(2);
  ChainState st{makeConfig(m, 2), 1, 0, ScanOrder::Raster};
  std::array<double, 81> hist{};
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    heatBathSweepInPlace(st, m);
    const auto& c = st.config;
    hist[static_cast<std::size_t>(c(1, 1) + 3 * c(2, 1) + 9 * c(1, 2) + 27 * c(2, 2))] += 1.0 / n;
  }
  const auto ex = gibbs2x2(1.0);
  double tv = 0.0;
  for (std::size_t s = 0; s < 81; ++s) tv += 0.5 * std::abs(hist[s] - ex[s]);
  return {tv < 0.02, fmt("TV = %.5f over 81 states after 1e6 sweeps (threshold 0.02)", tv)};
}

// --- 2. Monotone coupling --------------------------------------------------

Outcome monotoneCoupling() {
  SplitMix64 g(2);
  long violations = 0;
  const int pairs = 10'000, sweeps = 100, L = 6;
  for (int t = 0; t < pairs; ++t) {
    ModelParams m;
    const double ps[] = {1.0, 1.5, 2.0, 3.0};
    m.p = ps[g.below(4)];
    m.beta = 0.2 + 2.0 * g.uniform();
    SurfaceConfig lo(L), hi(L);
    for (int y = 0; y <= L + 1; ++y)
      for (int x = 0; x <= L + 1; ++x) {
        const auto a = static_cast<std::int32_t>(g.below(4));
        const auto b = a + static_cast<std::int32_t>(g.below(3));
        if (lo.isInterior(x, y)) {
          lo.setFloor(x, y, 0);
          hi.setFloor(x, y, static_cast<std::int32_t>(std::min<std::int32_t>(b, g.below(2))));
          lo.set(x, y, a);
          hi.set(x, y, b);
        } else {
          lo.setRingValue(x, y, a);
          hi.setRingValue(x, y, b);
        }
      }
    ChainState a{lo, 0, 0, g.uniform() < 0.5 ? ScanOrder::Raster : ScanOrder::RandomPermutation};
    ChainState b{hi, 0, 0, a.scanOrder};
    const CounterRng shared(g());
    for (int s = 0; s < sweeps; ++s) {
      monotoneCoupledSweepInPlace(a, b, m, shared, static_cast<std::uint64_t>(s));
      if (!pointwiseOrdered(a.config, b.config)) {
        ++violations;
        break;
      }
    }
  }
  return {violations == 0, fmt("%ld order violations in %d pairs x %d coupled sweeps", violations, pairs, sweeps)};
}

// --- 3. Level lines --------------------------------------------------------

using Segment = std::tuple<int, int, int, int>;

Segment segment(int x0, int y0, int x1, int y1) {
  if (std::pair(x1, y1) < std::pair(x0, y0)) return {x1, y1, x0, y0};
  return {x0, y0, x1, y1};
}

// Dual unit segments between a cell below h and a cell at or above h;
// cells outside the padded box count as -infinity.
std::set<Segment> disagreementDuals(const SurfaceConfig& c, int h) {
  const int L = c.width();
  auto val = [&](int x, int y) -> long long { return c.inPadded(x, y) ? c(x, y) : -(1LL << 40); };
  std::set<Segment> s;
  for (int y = -1; y <= L + 2; ++y)
    for (int x = -1; x <= L + 2; ++x) {
      const bool a = val(x, y) < h;
      if (a != (val(x + 1, y) < h)) s.insert(segment(x + 1, y, x + 1, y + 1));
      if (a != (val(x, y + 1) < h)) s.insert(segment(x, y + 1, x + 1, y + 1));
    }
  return s;
}

Outcome levelLines() {
  SplitMix64 g(3);
  long mismatches = 0, badLoops = 0, shared = 0, escapes = 0, loops = 0;
  const int L = 8;
  for (int t = 0; t < 1000; ++t) {
    SurfaceConfig c(L);
    const int range = 1 + static_cast<int>(g.below(6));
    for (int y = 0; y <= L + 1; ++y)
      for (int x = 0; x <= L + 1; ++x) {
        const auto v = static_cast<std::int32_t>(g.below(static_cast<std::uint64_t>(range) + 1));
        if (c.isInterior(x, y))
          c.set(x, y, v);
        else
          c.setRingValue(x, y, v);
      }
    std::set<std::pair<int, int>> prev;
    bool first = true;
    for (int h = 0; h <= range + 1; ++h) {
      std::set<Segment> got;
      std::size_t total = 0;
      std::set<std::pair<int, int>> inside;
      for (const auto& l : extractLevelLines(c, h)) {
        ++loops;
        bool ok = l.length() % 2 == 0 && l.length() >= 4;
        for (std::size_t i = 0; i < l.bonds.size(); ++i) {
          const auto& b = l.bonds[i];
          const auto& nx = l.bonds[(i + 1) % l.bonds.size()];
          ok = ok && b.endX() == nx.x && b.endY() == nx.y;
          got.insert(segment(b.x, b.y, b.endX(), b.endY()));
          ++total;
        }
        if (!ok) ++badLoops;
        for (auto s : enclosedSites(l)) inside.insert({s.x, s.y});
      }
      if (total != got.size()) ++shared;
      if (got != disagreementDuals(c, h)) ++mismatches;
      if (!first)
        for (const auto& k : inside)
          if (!prev.count(k)) {
            ++escapes;
            break;
          }
      prev = std::move(inside);
      first = false;
    }
  }
  const bool pass = mismatches == 0 && badLoops == 0 && shared == 0 && escapes == 0;
  return {pass, fmt("1000 fields, %ld loops: %ld bond-set mismatches, %ld open/odd loops, %ld levels with shared bonds, "
                    "%ld nesting violations",
                    loops, mismatches, badLoops, shared, escapes)};
}

// --- 4. Airy / FS numerics -------------------------------------------------

long double seriesAi(long double x) {
  // Ai(x) = c1 f(x) - c2 g(x), Maclaurin series of the two solutions.
  const long double c1 = 1.0L / (std::pow(3.0L, 2.0L / 3.0L) * std::tgamma(2.0L / 3.0L));
  const long double c2 = 1.0L / (std::pow(3.0L, 1.0L / 3.0L) * std::tgamma(1.0L / 3.0L));
  long double f = 1, g = x, tf = 1, tg = x;
  const long double x3 = x * x * x;
  for (int k = 1; k < 200; ++k) {
    tf *= x3 / ((3.0L * k - 1) * (3.0L * k));
    tg *= x3 / ((3.0L * k) * (3.0L * k + 1));
    f += tf;
    g += tg;
  }
  return c1 * f - c2 * g;
}

Outcome airyFs() {
  std::ostringstream d;
  bool pass = true;
  const double ai0 = std::abs(airy::ai(0.0) - static_cast<double>(seriesAi(0.0L)));
  pass = pass && ai0 < 1e-10;
  long double a = 2.0L, b = 2.6L;
  for (int i = 0; i < 200; ++i) {
    const long double m = 0.5L * (a + b);
    if ((seriesAi(-a) > 0) == (seriesAi(-m) > 0))
      a = m;
    else
      b = m;
  }
  const double w1 = std::abs(airy::omega1() - static_cast<double>(0.5L * (a + b)));
  pass = pass && w1 < 1e-8;
  const FSModel fs(1.0);
  double mass = 0.0;
  for (int i = 0; i < 200; ++i) mass += adaptiveSimpson([&](double x) { return fs.density(x); }, 0.05 * i, 0.05 * (i + 1), 1e-15);
  mass += adaptiveSimpson([&](double x) { return fs.density(x); }, 10.0, 40.0, 1e-15);
  pass = pass && std::abs(mass - 1.0) < 1e-8;
  double resid = 0.0;
  for (double x = 0.05; x <= 6.0; x += 0.01) {
    const double h = 1e-5;
    const double dp = (fs.density(x + h) - fs.density(x - h)) / (2 * h);
    resid = std::max(resid, std::abs(0.5 * dp - fs.drift(x) * fs.density(x)));
  }
  pass = pass && resid < 1e-6;
  const auto path = samplePath(fs, 1000.0, 1e-3, fs.argmax(), 1);
  const double ks = ksDistance(path, fs);
  pass = pass && ks < 0.02;
  d << fmt("|Ai(0) - series| = %.2e; |omega1 - bisection| = %.2e; |mass - 1| = %.2e; flux residual = %.2e; "
           "path KS (1e6 steps) = %.4f",
           ai0, w1, std::abs(mass - 1.0), resid, ks);
  return {pass, d.str()};
}

// --- 5. Transfer oracle equivalence ----------------------------------------

TiltedBridgeSpec basicBridge(int W, double N) {
  TiltedBridgeSpec s;
  s.u = {0, 0};
  s.v = {W, 0};
  s.tiltN = N;
  s.law = basicIncrementLaw(0.25);
  return s;
}

Outcome transferOracle() {
  double worst = 0.0;
  for (double N : {0.5, 2.0, 10.0}) {
    const auto s = basicBridge(6, N);
    const auto a = transferMatrixExact(s, 6);
    // Direct enumeration of every bridge in the same window.
    const auto e = enumerateBridges(s, a.lo, a.hi);
    std::vector<std::vector<double>> occ(7, std::vector<double>(static_cast<std::size_t>(a.hi - a.lo + 1), 0.0));
    for (std::size_t i = 0; i < e.paths.size(); ++i) {
      const double w = std::exp(e.logWeights[i] - e.logZ);
      for (const auto& q : e.paths[i]) occ[static_cast<std::size_t>(q.x)][static_cast<std::size_t>(q.y - a.lo)] += w;
    }
    for (std::size_t x = 0; x < occ.size(); ++x)
      for (std::size_t k = 0; k < occ[x].size(); ++k) worst = std::max(worst, std::abs(occ[x][k] - a.prob[x][k]));
  }
  auto s = basicBridge(12, 4.0);
  s.ceiling = 19;
  const auto exact = transferMatrixExact(s, 20);
  BridgeSamplerOptions opt;
  opt.method = BridgeMethod::Mcmc;
  opt.thin = 2;
  const std::size_t n = 100000, batches = 50, per = n / batches;
  const auto smp = sampleTiltedBridge(s, n, 11, opt);
  int outside = 0, cells = 0;
  double worstZ = 0.0;
  for (std::size_t x = 1; x < 12; ++x)
    for (int h = 0; h < 20; ++h) {
      std::vector<double> means(batches, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        if (smp.paths[i][x] == h) means[i / per] += 1.0 / static_cast<double>(per);
      const double m = stats::mean(means);
      const double p = exact.prob[x][static_cast<std::size_t>(h)];
      const double se = std::max(std::sqrt(stats::variance(means) / batches), std::sqrt(p * (1 - p) / n));
      ++cells;
      if (se > 0) worstZ = std::max(worstZ, std::abs(m - p) / se);
      if (std::abs(m - p) > 3 * se + 1e-15) ++outside;
    }
  const bool pass = worst < 1e-12 && outside == 0;
  return {pass, fmt("W=6,M=6 max |transfer - enumeration| = %.2e (threshold 1e-12); W=12,M=20 MCMC 1e5 samples: "
                    "%d of %d cells beyond 3 SE (max |z| = %.2f)",
                    worst, outside, cells, worstZ)};
}

// --- 6. Effective-model limit ----------------------------------------------

double exactMidpointKs(const TiltedBridgeSpec& s, double N, const FSModel& fs) {
  const auto [lo, hi] = s.reachableWindow();
  const auto m = BridgeTransfer(s, lo, hi).marginals();
  const auto mid = static_cast<std::size_t>(s.width() / 2);
  double d = 0.0;
  for (int h = m.lo; h <= m.hi; ++h) {
    const double F = fs.cdf((h - *s.floor) / std::cbrt(N));
    d = std::max({d, std::abs(m.cdf(mid, h) - F), std::abs(m.cdf(mid, h - 1) - F)});
  }
  return d;
}

Outcome effectiveLimit() {
  const double sigma = std::sqrt(0.5);
  const FSModel fs(sigma);
  const std::size_t perSeed = 4000;
  const std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::map<double, double> med, exact;
  for (double N : {3000.0, 6000.0}) {
    const int W = static_cast<int>(std::ceil(6 * std::pow(N, 2.0 / 3.0)));
    auto s = basicBridge(W + (W % 2), N);
    if (std::abs(s.law.yVariance() - 0.5) > 1e-15) return {false, "increment law variance is not 0.5"};
    BridgeSamplerOptions opt;
    opt.method = BridgeMethod::Transfer;
    std::vector<double> ks(seeds.size());
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      pool.emplace_back([&, i] { ks[i] = fsComparison(sampleTiltedBridge(s, perSeed, seeds[i], opt).paths, N, sigma).midpointKs(); });
    for (auto& t : pool) t.join();
    med[N] = stats::median(ks);
    exact[N] = exactMidpointKs(s, N, fs);
  }
  const bool level = med[3000.0] < 0.05, trend = med[6000.0] <= med[3000.0];
  return {level && trend,
          fmt("median midpoint KS over 5 seeds x %zu bridges: N=3000 %.4f (threshold 0.05: %s), N=6000 %.4f "
              "(non-increasing: %s); exact marginal KS without sampling: %.4f, %.4f",
              perSeed, med[3000.0], level ? "met" : "not met", med[6000.0], trend ? "yes" : "no", exact[3000.0], exact[6000.0])};
}

// --- 7. Surface tension ----------------------------------------------------

Outcome surfaceTension() {
  const double beta = 6.0;
  const int maxL1 = 14, maxExcess = 4;
  const auto e0 = enumeratedTension(beta, {1, 0}, maxL1, maxExcess);
  const auto e90 = enumeratedTension(beta, {0, 1}, maxL1, maxExcess);
  const auto a = enumeratedTension(beta, {2, 1}, maxL1, maxExcess);
  const auto aRefl = enumeratedTension(beta, {2, -1}, maxL1, maxExcess);
  const auto aTurn = enumeratedTension(beta, {-1, 2}, maxL1, maxExcess);
  const bool reflect = std::abs(a.tau - aRefl.tau) <= a.ci + aRefl.ci;
  const bool turn = std::abs(e0.tau - e90.tau) <= e0.ci + e90.ci && std::abs(a.tau - aTurn.tau) <= a.ci + aTurn.ci;
  const double r6 = e0.tau / 6.0, r8 = enumeratedTension(8.0, {1, 0}, maxL1, maxExcess).tau / 8.0;
  const bool ratio = std::abs(r6 / r8 - 1.0) < 0.05;
  const double tau = estimateTension(beta, 1, 2.0, 0.0).tau;
  double sup = 0.0, prev = 0.0, lastStep = 0.0;
  for (int N = 1; N <= maxL1; ++N) {
    const double s = enumeratePaths({N, 0}, maxExcess).logZ(beta) + tau * N + 0.5 * std::log(N);
    sup = std::max(sup, std::abs(s));
    lastStep = s - prev;
    prev = s;
  }
  const bool bounded = sup < 2.0 && std::abs(lastStep) < 0.05;
  return {reflect && turn && ratio && bounded,
          fmt("tau(2,1)-tau(2,-1) = %.1e (ci %.1e); tau(0)-tau(pi/2) = %.1e, tau(2,1)-tau(-1,2) = %.1e; "
              "tau(0)/beta at 6 vs 8: %.5f / %.5f; sup|log Z_N + tau N + log(N)/2| = %.3f over N<=%d, last step %.1e",
              std::abs(a.tau - aRefl.tau), a.ci + aRefl.ci, std::abs(e0.tau - e90.tau), std::abs(a.tau - aTurn.tau), r6, r8,
              sup, maxL1, lastStep)};
}

// --- 8. Scale arithmetic ---------------------------------------------------

Outcome scaleArithmetic() {
  const auto hist = HeightHistogram::fromTable({{1, 0.1}, {2, 0.01}, {3, 0.0005}}, 1.0);
  const auto t = computeScales(hist, 1000, 2);
  bool table = t.H == 2 && t.N.size() == 2 && std::abs(t.N[0] - 100) < 1e-9 && std::abs(t.N[1] - 10) < 1e-9 &&
               t.Lh.at(1) == 50 && t.Lh.at(2) == 500 && t.Lh.at(3) == 10000 && t.exceptional.size() == 3;
  const std::vector<std::pair<long long, long long>> want{{38, 50}, {375, 500}, {7500, 10000}};
  for (std::size_t i = 0; table && i < 3; ++i) table = t.exceptional[i].lo == want[i].first && t.exceptional[i].hi == want[i].second;
  table = table && !t.inExceptional && std::abs(t.threshold() - 0.005) < 1e-15;
  const auto ld = exceptionalLogDensityDiagnostic(t);
  std::ostringstream dens;
  for (std::size_t i = 0; i < ld.grid.size(); ++i) dens << (i ? ", " : "") << ld.grid[i] << ":" << fmt("%.4f", ld.density[i]);
  return {table && ld.nonIncreasing,
          fmt("worked table (H=2, N0=100, N1=10, B=[38,50]u[375,500]u[7500,10000]) %s; log-density at L_h {%s} "
              "non-increasing: %s",
              table ? "reproduced" : "NOT reproduced", dens.str().c_str(), ld.nonIncreasing ? "yes" : "no")};
}

// --- 9. Observational end-to-end (extended) --------------------------------

struct FluctuationRun {
  int L = 0;
  int level = 0;
  std::size_t samples = 0;
  std::size_t snapshots = 0;
  std::size_t withLoops = 0;  // snapshots with a macroscopic level line at some h >= 1
  double sd = 0.0;
};

// Standard deviation of the bottom-side distance of the top macroscopic
// level line at the middle column, at the level that is most often the
// top macroscopic one.
FluctuationRun fluctuationScale(int L, double beta, std::size_t snapshots, std::uint64_t seed) {
  ModelParams m;
  m.beta = beta;
  m.p = 2.0;
  m.floor = BoundSpec::uniform(0);
  ChainState st{makeConfig(m, L), seed, 0, ScanOrder::Raster};
  const std::uint64_t burnIn = static_cast<std::uint64_t>(10 * L), thin = 5;
  for (std::uint64_t s = 0; s < burnIn; ++s) heatBathSweepInPlace(st, m);
  std::map<int, std::vector<double>> rho;
  std::map<int, std::size_t> topCount;
  for (std::size_t k = 0; k < snapshots; ++k) {
    for (std::uint64_t s = 0; s < thin; ++s) heatBathSweepInPlace(st, m);
    int top = 0;
    for (int h = 1;; ++h) {
      const auto loop = topMacroscopicLoop(st.config, h);
      if (!loop) break;
      top = h;
      try {
        const auto p = profile(*loop, 0, 1.0, L);
        if (p.covered[static_cast<std::size_t>(p.halfWidth)]) rho[h].push_back(p.rho[static_cast<std::size_t>(p.halfWidth)]);
      } catch (const InfeasibleError&) {
      }
    }
    if (top > 0) ++topCount[top];
  }
  FluctuationRun r;
  r.L = L;
  r.snapshots = snapshots;
  for (auto [h, c] : topCount) r.withLoops += c;
  std::size_t best = 0;
  for (auto [h, c] : topCount)
    if (c > best) {
      best = c;
      r.level = h;
    }
  if (rho[r.level].size() >= 2) {
    r.samples = rho[r.level].size();
    r.sd = std::sqrt(stats::variance(rho[r.level]));
  }
  return r;
}

Outcome observationalEndToEnd(std::size_t snapshots) {
  const std::vector<int> Ls{128, 256, 512};
  std::vector<FluctuationRun> runs(Ls.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < Ls.size(); ++i)
    pool.emplace_back([&, i] { runs[i] = fluctuationScale(Ls[i], 2.5, snapshots, 9 + i); });
  for (auto& t : pool) t.join();
  std::vector<double> x, y;
  std::ostringstream d;
  for (const auto& r : runs) {
    if (r.withLoops == 0)
      d << fmt("L=%d: no macroscopic level line at any h >= 1 in %zu snapshots; ", r.L, r.snapshots);
    else
      d << fmt("L=%d level %d sd %.3f (%zu samples, %zu of %zu snapshots with loops); ", r.L, r.level, r.sd, r.samples,
               r.withLoops, r.snapshots);
    if (r.sd > 0) {
      x.push_back(std::log(r.L));
      y.push_back(std::log(r.sd));
    }
  }
  if (x.size() < 2) return {false, d.str() + "too few levels with fluctuations to fit"};
  const auto fit = stats::linearFit(x, y);
  const bool pass = fit.slope >= 0.15 && fit.slope <= 0.5;
  d << fmt("fitted exponent %.3f (band [0.15, 0.5])", fit.slope);
  return {pass, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  bool extended = false;
  std::size_t snapshots = 10000;
  std::vector<int> only;
  app.add_flag("--extended", extended, "also run the long observational end-to-end criterion");
  app.add_option("--snapshots", snapshots, "snapshots per side length for the extended criterion");
  app.add_option("--only", only, "run only these criteria");
  CLI11_PARSE(app, argc, argv);

  std::vector<Criterion> criteria{
      {1, "Gibbs exactness", true, gibbsExactness},
      {2, "Monotone coupling", true, monotoneCoupling},
      {3, "Level-line correctness", true, levelLines},
      {4, "Airy/FS numerics", true, airyFs},
      {5, "Transfer-matrix oracle equivalence", true, transferOracle},
      {6, "Effective-model limit", true, effectiveLimit},
      {7, "Surface tension sanity", true, surfaceTension},
      {8, "Scale arithmetic", true, scaleArithmetic},
      {9, "Observational end-to-end", false, [snapshots] { return observationalEndToEnd(snapshots); }},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    if (c.id == 9 && !extended) {
      std::cout << "SKIP " << c.id << " " << c.name << ": non-gating, run with --extended\n";
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.id << " " << c.name << (c.gating ? "" : " (non-gating)") << ": " << o.detail
              << fmt(" [%.1f s]", secs) << std::endl;
    if (!o.pass && c.gating) ++failures;
  }
  std::cout << (failures == 0 ? "ALL GATING CRITERIA PASS" : fmt("%d GATING CRITERIA FAIL", failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
