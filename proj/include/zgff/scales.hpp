#ifndef ZGFF_SCALES_HPP
#define ZGFF_SCALES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "zgff/errors.hpp"
#include "zgff/mcmc.hpp"
#include "zgff/stats.hpp"
#include "zgff/surface.hpp"

namespace zgff {

/// Single-site height law of the no-floor measure.
struct HeightHistogram {
  double p = 2.0;
  double beta = 1.0;
  int boxSize = 0;
  std::map<int, double> prob;
  std::map<int, double> ciHalfWidth;
  std::size_t samples = 0;
  /// "ok", or a warning when the requested CI was not reached.
  std::string status = "ok";

  double at(int h) const {
    auto it = prob.find(h);
    return it == prob.end() ? 0.0 : it->second;
  }
  double ci(int h) const {
    auto it = ciHalfWidth.find(h);
    return it == ciHalfWidth.end() ? 0.0 : it->second;
  }
  static HeightHistogram fromTable(std::map<int, double> table, double beta, double p = 2.0) {
    HeightHistogram h;
    h.prob = std::move(table);
    h.beta = beta;
    h.p = p;
    return h;
  }
};

inline int defaultProxyBox(int L) {
  const double l = std::log(static_cast<double>(L));
  return std::max(64, static_cast<int>(std::ceil(4.0 * l * l)));
}

struct HeightEstimateOptions {
  std::size_t chains = 4;
  std::size_t burnIn = 0;  // 0: sweeps / 10 per chain, at least 100
  std::size_t batches = 20;
  /// Warn if some h with P(h) >= warnFloor has CI half-width above this fraction of P(h).
  double targetRelativeCI = 0.0;
  double warnFloor = 1e-6;
  unsigned threads = 0;
};

/// Rao-Blackwellized estimate of the centre-site law on a box with zero
/// boundary and no floor: each sweep contributes the exact conditional law
/// of the centre given its neighbours. Samples are sweeps, split evenly
/// across independent chains; CIs are 95% batch-means intervals.
inline HeightHistogram estimateHeightProb(double p, double beta, int boxSize, std::size_t samples,
                                          std::uint64_t seed, HeightEstimateOptions opt = {}) {
  const double lb = std::log(static_cast<double>(boxSize));
  if (boxSize < 1 || boxSize < 2.0 * lb * lb) throw DomainError("box too small to decorrelate the centre site");
  ModelParams m;
  m.p = p;
  m.beta = beta;
  m.validate();
  opt.chains = std::max<std::size_t>(1, opt.chains);
  const std::size_t perChain = samples / opt.chains;
  if (perChain < opt.batches) throw InfeasibleError("too few samples for batch means");
  const std::size_t burn = opt.burnIn ? opt.burnIn : std::max<std::size_t>(100, perChain / 10);
  const std::size_t perBatch = perChain / opt.batches;
  const int cx = (boxSize + 1) / 2;

  std::vector<std::map<int, std::vector<double>>> batchMeansPerChain(opt.chains);
  auto runChain = [&](std::size_t k) {
    ChainState st{makeConfig(m, boxSize), deriveSeed(seed, k), 0, ScanOrder::Raster};
    detail::SiteUpdater up(p, beta);
    const auto idx = st.config.index(cx, cx);
    for (std::size_t s = 0; s < burn; ++s) heatBathSweepInPlace(st, m);
    auto& out = batchMeansPerChain[k];
    std::map<int, double> acc;
    for (std::size_t b = 0; b < opt.batches; ++b) {
      acc.clear();
      for (std::size_t s = 0; s < perBatch; ++s) {
        heatBathSweepInPlace(st, m);
        const auto& law = up.law(st.config, idx);
        for (std::size_t i = 0; i < law.prob.size(); ++i) acc[law.lowest + static_cast<int>(i)] += law.prob[i];
      }
      for (auto& [h, v] : acc) {
        auto& vec = out[h];
        vec.resize(opt.batches, 0.0);
        vec[b] = v / static_cast<double>(perBatch);
      }
    }
  };
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < std::min<std::size_t>(threads, opt.chains); ++t)
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < opt.chains;) runChain(k);
      });
    for (auto& t : pool) t.join();
  }
  std::map<int, std::vector<double>> all;
  for (const auto& chain : batchMeansPerChain)
    for (const auto& [h, v] : chain) all[h];
  for (const auto& chain : batchMeansPerChain)
    for (auto& [h, vec] : all) {
      auto it = chain.find(h);
      for (std::size_t b = 0; b < opt.batches; ++b) vec.push_back(it == chain.end() ? 0.0 : it->second[b]);
    }
  HeightHistogram hist;
  hist.p = p;
  hist.beta = beta;
  hist.boxSize = boxSize;
  hist.samples = perBatch * opt.batches * opt.chains;
  double total = 0.0;
  for (auto& [h, v] : all) {
    const double mu = stats::mean(v);
    const double se = std::sqrt(stats::variance(v) / static_cast<double>(v.size()));
    hist.prob[h] = mu;
    hist.ciHalfWidth[h] = 1.96 * se;
    total += mu;
  }
  for (auto& [h, v] : hist.prob) v /= total;
  if (opt.targetRelativeCI > 0.0)
    for (const auto& [h, v] : hist.prob)
      if (v >= opt.warnFloor && hist.ciHalfWidth[h] > opt.targetRelativeCI * v) {
        hist.status = "warning: insufficient samples for requested CI at h=" + std::to_string(h);
        break;
      }
  return hist;
}

struct IntegerInterval {
  long long lo = 0;
  long long hi = 0;
  bool contains(long long v) const { return v >= lo && v <= hi; }
};

struct ScaleTable {
  int L = 0;
  double beta = 1.0;
  double thresholdConstant = 5.0;
  int H = 0;
  std::vector<double> N;
  std::map<int, long long> Lh;
  std::vector<IntegerInterval> exceptional;
  bool inExceptional = false;
  std::optional<IntegerInterval> containingInterval;

  double threshold() const { return thresholdConstant * beta / L; }
};

namespace detail {
/// Ceiling that ignores floating noise just above an integer.
inline long long robustCeil(double v) {
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v))) return static_cast<long long>(r);
  return static_cast<long long>(std::ceil(v));
}
}  // namespace detail

/// H = max{h : P(h) >= c beta / L}, N_n = 1/P(H - n), L_h = ceil(c beta / P(h))
/// for h >= 1, exceptional intervals [ceil(3 L_h / 4), L_h].
inline ScaleTable computeScales(const HeightHistogram& hist, int L, int m, double thresholdConstant = 5.0) {
  if (L < 1) throw DomainError("L must be positive");
  if (m < 1) throw DomainError("need at least one level");
  ScaleTable t;
  t.L = L;
  t.beta = hist.beta;
  t.thresholdConstant = thresholdConstant;
  const double thr = t.threshold();
  std::optional<int> H;
  for (const auto& [h, v] : hist.prob)
    if (v >= thr) H = h;
  if (!H) throw InfeasibleError("no height reaches the threshold " + std::to_string(thr));
  if (!hist.prob.count(*H + 1))
    throw InfeasibleError("histogram truncated too aggressively: height " + std::to_string(*H + 1) + " missing");
  t.H = *H;
  for (int n = 0; n < m; ++n) {
    const int h = t.H - n;
    if (!hist.prob.count(h) || hist.prob.at(h) <= 0.0)
      throw InfeasibleError("histogram truncated too aggressively: height " + std::to_string(h) + " missing");
    t.N.push_back(1.0 / hist.prob.at(h));
  }
  for (const auto& [h, v] : hist.prob) {
    if (h < 1 || !(v > 0.0)) continue;
    const double raw = thresholdConstant * hist.beta / v;
    if (!(raw < 9e18)) continue;
    const long long Lh = detail::robustCeil(raw);
    t.Lh[h] = Lh;
    const IntegerInterval iv{(3 * Lh + 3) / 4, Lh};
    t.exceptional.push_back(iv);
    if (iv.contains(L)) {
      t.inExceptional = true;
      t.containingInterval = iv;
    }
  }
  return t;
}

/// Sum of 1/k for k = a..b; direct below 2^20 terms, Euler-Maclaurin above.
inline double harmonicRange(long long a, long long b) {
  if (b < a) return 0.0;
  if (b - a < (1LL << 20)) {
    double s = 0.0;
    for (long long k = b; k >= a; --k) s += 1.0 / static_cast<double>(k);
    return s;
  }
  auto tail = [](double n) {  // H_n - log n - gamma
    const double n2 = n * n;
    return 1.0 / (2 * n) - 1.0 / (12 * n2) + 1.0 / (120 * n2 * n2);
  };
  const double A = static_cast<double>(a - 1), B = static_cast<double>(b);
  if (a - 1 < 64) {
    double ha = 0.0;
    for (long long k = 1; k < a; ++k) ha += 1.0 / static_cast<double>(k);
    return std::log(B) + 0.57721566490153286 + tail(B) - ha;
  }
  return std::log(B / A) + tail(B) - tail(A);
}

/// (sum over k in the exceptional set with k <= n of 1/k) / log n.
inline double exceptionalLogDensity(const ScaleTable& t, long long n) {
  if (n < 2) throw DomainError("log density needs n >= 2");
  double s = 0.0;
  for (const auto& iv : t.exceptional) s += harmonicRange(iv.lo, std::min(iv.hi, n));
  return s / std::log(static_cast<double>(n));
}

struct LogDensityReport {
  std::vector<long long> grid;
  std::vector<double> density;
  bool nonIncreasing = true;
};

/// Log-density of the exceptional set sampled at the right endpoints L_h
/// of the table.
inline LogDensityReport exceptionalLogDensityDiagnostic(const ScaleTable& t) {
  LogDensityReport r;
  for (const auto& [h, Lh] : t.Lh)
    if (Lh >= 2) r.grid.push_back(Lh);
  std::sort(r.grid.begin(), r.grid.end());
  for (auto n : r.grid) r.density.push_back(exceptionalLogDensity(t, n));
  for (std::size_t i = 1; i < r.density.size(); ++i)
    if (r.density[i] > r.density[i - 1] + 1e-15) r.nonIncreasing = false;
  return r;
}

struct LDReport {
  bool sufficient = false;
  std::vector<int> heights;
  std::vector<double> ratios;  // P(h)/P(h-1) for heights[1..]
  bool strictlyDecreasingRatios = false;
  std::string regressor;
  stats::LinearFit fit;
};

/// Large-deviation diagnostics on the positive heights (P(h) symmetrized
/// with P(-h)). Reports, never asserts, the asymptotic forms.
inline LDReport ldDiagnostics(const HeightHistogram& hist) {
  LDReport r;
  std::vector<double> ps;
  for (int h = 0;; ++h) {
    const double v = 0.5 * (hist.at(h) + hist.at(-h));
    if (!(v > 0.0) || (!hist.prob.count(h) && !hist.prob.count(-h))) break;
    r.heights.push_back(h);
    ps.push_back(v);
  }
  if (r.heights.size() < 3) return r;
  r.sufficient = true;
  for (std::size_t i = 1; i < ps.size(); ++i) r.ratios.push_back(ps[i] / ps[i - 1]);
  r.strictlyDecreasingRatios = true;
  for (std::size_t i = 1; i < r.ratios.size(); ++i)
    if (!(r.ratios[i] < r.ratios[i - 1])) r.strictlyDecreasingRatios = false;
  std::vector<double> xs, ys;
  const bool gauss = hist.p == 2.0;
  r.regressor = gauss ? "h^2/log h" : "h^min(p,2)";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const double h = r.heights[i];
    if (h < 1 || (gauss && h < 2)) continue;
    xs.push_back(gauss ? h * h / std::log(h) : std::pow(h, std::min(hist.p, 2.0)));
    ys.push_back(std::log(ps[i]));
  }
  if (xs.size() >= 2) r.fit = stats::linearFit(xs, ys);
  return r;
}

struct FloorCheck {
  double lhs = 1.0;
  double rhs = 1.0;
  double ratio = 1.0;
  double lhsCiHalfWidth = 0.0;
  std::string status = "ok";
};

/// Compares pi_V(phi_x >= -h on F) with exp(-pi_inf(phi_o < -h) |F|) for a
/// rectangle F centred in a zero-boundary box of side `boxSize`.
inline FloorCheck floorProbabilityCheck(double p, double beta, int boxSize, int fw, int fh, int h,
                                        const HeightHistogram& hist, std::size_t sweeps, std::uint64_t seed) {
  FloorCheck r;
  if (fw <= 0 || fh <= 0) return r;
  if (fw > boxSize || fh > boxSize) throw DomainError("region larger than the box");
  double tail = 0.0;
  for (const auto& [k, v] : hist.prob)
    if (k < -h) tail += v;
  r.rhs = std::exp(-tail * fw * fh);
  ModelParams m;
  m.p = p;
  m.beta = beta;
  ChainState st{makeConfig(m, boxSize), seed, 0, ScanOrder::Raster};
  const int x0 = (boxSize - fw) / 2 + 1, y0 = (boxSize - fh) / 2 + 1;
  for (std::size_t s = 0; s < std::max<std::size_t>(100, sweeps / 10); ++s) heatBathSweepInPlace(st, m);
  std::vector<double> ind;
  ind.reserve(sweeps);
  for (std::size_t s = 0; s < sweeps; ++s) {
    heatBathSweepInPlace(st, m);
    bool ok = true;
    for (int y = y0; y < y0 + fh && ok; ++y)
      for (int x = x0; x < x0 + fw && ok; ++x) ok = st.config(x, y) >= -h;
    ind.push_back(ok ? 1.0 : 0.0);
  }
  r.lhs = stats::mean(ind);
  if (r.lhs == 0.0) {
    r.status = "failure: event never observed";
    r.ratio = 0.0;
    return r;
  }
  if (sweeps >= 40) r.lhsCiHalfWidth = 1.96 * stats::batchMeans(ind).stdError;
  r.ratio = r.lhs / r.rhs;
  return r;
}

inline void writeScaleCsv(std::ostream& os, const HeightHistogram& hist, const ScaleTable& t) {
  os << "h,P,ci,L_h\n";
  for (const auto& [h, v] : hist.prob) {
    os << h << ',' << v << ',' << hist.ci(h) << ',';
    if (auto it = t.Lh.find(h); it != t.Lh.end()) os << it->second;
    os << '\n';
  }
}

inline nlohmann::json scaleJson(const ScaleTable& t) {
  nlohmann::json j;
  j["L"] = t.L;
  j["H"] = t.H;
  j["threshold"] = t.threshold();
  j["N"] = t.N;
  auto& b = j["exceptional"] = nlohmann::json::array();
  for (const auto& iv : t.exceptional) b.push_back({iv.lo, iv.hi});
  j["L_in_exceptional"] = t.inExceptional;
  return j;
}

}  // namespace zgff

#endif  // ZGFF_SCALES_HPP
