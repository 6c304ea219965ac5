#ifndef ZGFF_MCMC_HPP
#define ZGFF_MCMC_HPP

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <limits>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/io.hpp"
#include "zgff/rng.hpp"
#include "zgff/stats.hpp"
#include "zgff/surface.hpp"

namespace zgff {

enum class ScanOrder { Raster, RandomPermutation };

inline std::string toString(ScanOrder s) { return s == ScanOrder::Raster ? "raster" : "random-permutation"; }
inline ScanOrder parseScanOrder(std::string_view s) {
  if (s == "raster") return ScanOrder::Raster;
  if (s == "random-permutation" || s == "random") return ScanOrder::RandomPermutation;
  throw ConfigError("unknown scan order '" + std::string(s) + "'");
}

struct ChainState {
  SurfaceConfig config;
  std::uint64_t seed = 0;
  std::uint64_t sweepCount = 0;
  ScanOrder scanOrder = ScanOrder::Raster;
};

namespace detail {

/// Site visiting order for one sweep, as padded indices.
inline void scanSites(const SurfaceConfig& c, ScanOrder order, std::uint64_t seed, std::uint64_t sweep,
                      std::vector<std::size_t>& out) {
  const int L = c.width();
  out.clear();
  for (int y = 1; y <= L; ++y)
    for (int x = 1; x <= L; ++x) out.push_back(c.index(x, y));
  if (order == ScanOrder::RandomPermutation) {
    SplitMix64 g(deriveSeed(seed ^ 0x7065726dULL, sweep));
    for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[g.below(i)]);
  }
}

/// Reusable single-site heat-bath kernel.
class SiteUpdater {
 public:
  SiteUpdater(double p, double beta) : p_(p), beta_(beta) {}

  const LocalLaw& law(const SurfaceConfig& c, std::size_t idx) {
    const auto& h = c.padded();
    const auto s = static_cast<std::size_t>(c.stride());
    const std::array<std::int32_t, 4> nb{h[idx - 1], h[idx + 1], h[idx - s], h[idx + s]};
    const std::int64_t lo = c.rawFloor(idx) == kNoFloor ? std::numeric_limits<std::int32_t>::min() / 2 : c.rawFloor(idx);
    const std::int64_t hi =
        c.rawCeiling(idx) == kNoCeiling ? std::numeric_limits<std::int32_t>::max() / 2 : c.rawCeiling(idx);
    buildLocalLaw(nb, lo, hi, p_, beta_, law_, scratch_);
    return law_;
  }

  std::int32_t draw(const SurfaceConfig& c, std::size_t idx, double u) { return law(c, idx).sample(u); }

 private:
  double p_, beta_;
  LocalLaw law_;
  std::vector<double> scratch_;
};

}  // namespace detail

/// One systematic heat-bath sweep in place. Site uniforms come from the
/// counter stream (seed, sweep, site index).
inline void heatBathSweepInPlace(ChainState& state, const ModelParams& params) {
  params.validate();
  const CounterRng rng(state.seed);
  detail::SiteUpdater up(params.p, params.beta);
  thread_local std::vector<std::size_t> order;
  detail::scanSites(state.config, state.scanOrder, state.seed, state.sweepCount, order);
  for (auto idx : order)
    state.config.setUnchecked(idx, up.draw(state.config, idx, rng.uniform(state.sweepCount, idx)));
  ++state.sweepCount;
}

inline ChainState heatBathSweep(ChainState state, const ModelParams& params) {
  heatBathSweepInPlace(state, params);
  return state;
}

/// True when a <= b at every padded site and in every floor and ceiling.
inline bool pointwiseOrdered(const SurfaceConfig& a, const SurfaceConfig& b) {
  if (a.width() != b.width()) return false;
  const auto &ha = a.padded(), &hb = b.padded();
  const auto &fa = a.paddedFloor(), &fb = b.paddedFloor();
  const auto &ca = a.paddedCeiling(), &cb = b.paddedCeiling();
  for (std::size_t i = 0; i < ha.size(); ++i)
    if (ha[i] > hb[i] || fa[i] > fb[i] || ca[i] > cb[i]) return false;
  return true;
}

/// One coupled sweep of two chains driven by the same uniform per site
/// (the stream of `shared`, keyed by `sweep`). Inverse-CDF sampling of
/// stochastically ordered conditionals keeps lower <= upper.
inline void monotoneCoupledSweepInPlace(ChainState& lower, ChainState& upper, const ModelParams& params,
                                        const CounterRng& shared, std::uint64_t sweep) {
  params.validate();
  if (!pointwiseOrdered(lower.config, upper.config))
    throw ConstraintError("coupled sweep needs lower <= upper in heights, boundary, floor and ceiling");
  detail::SiteUpdater ul(params.p, params.beta), uu(params.p, params.beta);
  thread_local std::vector<std::size_t> order;
  detail::scanSites(lower.config, lower.scanOrder, shared.key(), sweep, order);
  for (auto idx : order) {
    const double u = shared.uniform(sweep, idx);
    lower.config.setUnchecked(idx, ul.draw(lower.config, idx, u));
    upper.config.setUnchecked(idx, uu.draw(upper.config, idx, u));
  }
  ++lower.sweepCount;
  ++upper.sweepCount;
}

inline std::pair<ChainState, ChainState> monotoneCoupledSweep(ChainState lower, ChainState upper,
                                                              const ModelParams& params, const CounterRng& shared,
                                                              std::uint64_t sweep) {
  monotoneCoupledSweepInPlace(lower, upper, params, shared, sweep);
  return {std::move(lower), std::move(upper)};
}

struct EquilibriumRun {
  std::vector<SurfaceConfig> snapshots;
  /// Mean interior height after every post-burn-in sweep.
  std::vector<double> meanHeightTrace;
  double autocorrTime = 1.0;
  std::uint64_t seed = 0;
};

/// Upper bound on bytes of snapshots held in memory by sampleEquilibrium.
inline constexpr std::size_t kSnapshotMemoryLimit = std::size_t{4} << 30;

inline EquilibriumRun sampleEquilibrium(const ModelParams& params, int L, std::uint64_t sweeps, std::uint64_t burnIn,
                                        std::uint64_t thinning, std::uint64_t seed,
                                        ScanOrder scan = ScanOrder::Raster) {
  if (sweeps <= burnIn) throw DomainError("sweeps must exceed burn-in");
  if (thinning == 0) throw DomainError("thinning must be positive");
  const std::uint64_t count = (sweeps - burnIn) / thinning;
  const std::size_t bytes = static_cast<std::size_t>(count) * static_cast<std::size_t>(L + 2) * (L + 2) * 12;
  if (bytes > kSnapshotMemoryLimit)
    throw ResourceLimitError("requested snapshots need " + std::to_string(bytes >> 20) + " MiB");
  ChainState st{makeConfig(params, L), seed, 0, scan};
  EquilibriumRun run;
  run.seed = seed;
  run.snapshots.reserve(static_cast<std::size_t>(count));
  run.meanHeightTrace.reserve(static_cast<std::size_t>(sweeps - burnIn));
  for (std::uint64_t s = 1; s <= sweeps; ++s) {
    heatBathSweepInPlace(st, params);
    if (s <= burnIn) continue;
    run.meanHeightTrace.push_back(st.config.meanHeight());
    if ((s - burnIn) % thinning == 0) run.snapshots.push_back(st.config);
  }
  run.autocorrTime = stats::integratedAutocorrTime(run.meanHeightTrace);
  return run;
}

/// Independent chains, one per seed, spread over worker threads. Results
/// are ordered like `seeds` and do not depend on scheduling.
inline std::vector<EquilibriumRun> runParallelChains(const ModelParams& params, int L, std::uint64_t sweeps,
                                                     std::uint64_t burnIn, std::uint64_t thinning,
                                                     const std::vector<std::uint64_t>& seeds, unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<EquilibriumRun> out(seeds.size());
  std::vector<std::exception_ptr> errors(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < seeds.size();) {
      try {
        out[i] = sampleEquilibrium(params, L, sweeps, burnIn, thinning, seeds[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(threads, seeds.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct SandwichReport {
  std::vector<double> lowerMean;
  std::vector<double> upperMean;
  /// First sweep after which the mean-height gap stays below tolerance; -1 if never.
  long long agreementSweep = -1;
  double finalGap = 0.0;
  bool coalesced = false;
};

/// Burn-in check by the monotone sandwich: a chain started at the floor
/// (or at -top when there is none) and a chain started at `top` (capped by
/// ceilings), coupled with shared randomness.
inline SandwichReport sandwichDiagnostic(const ModelParams& params, int L, std::uint64_t sweeps, std::int32_t top,
                                         std::uint64_t seed, double tolerance = 0.05) {
  SurfaceConfig base = makeConfig(params, L);
  SurfaceConfig lo = base, hi = base;
  for (int y = 1; y <= L; ++y)
    for (int x = 1; x <= L; ++x) {
      lo.set(x, y, base.floorAt(x, y).value_or(-top));
      hi.set(x, y, std::min(top, base.ceilingAt(x, y).value_or(top)));
      if (lo(x, y) > hi(x, y)) hi.set(x, y, lo(x, y));
    }
  ChainState a{lo, seed, 0, ScanOrder::Raster}, b{hi, seed, 0, ScanOrder::Raster};
  const CounterRng shared(seed);
  SandwichReport r;
  for (std::uint64_t s = 0; s < sweeps; ++s) {
    monotoneCoupledSweepInPlace(a, b, params, shared, s);
    r.lowerMean.push_back(a.config.meanHeight());
    r.upperMean.push_back(b.config.meanHeight());
    const double gap = r.upperMean.back() - r.lowerMean.back();
    if (gap > tolerance)
      r.agreementSweep = -1;
    else if (r.agreementSweep < 0)
      r.agreementSweep = static_cast<long long>(s + 1);
  }
  r.finalGap = r.upperMean.empty() ? 0.0 : r.upperMean.back() - r.lowerMean.back();
  r.coalesced = a.config == b.config;
  return r;
}

/// Coupling from the past for configurations where every interior site has
/// a finite floor and ceiling. Returns an exact Gibbs sample.
inline SurfaceConfig cftpSample(const ModelParams& params, const SurfaceConfig& start, std::uint64_t seed,
                                std::uint64_t maxSweeps = std::uint64_t{1} << 20) {
  const int L = start.width();
  SurfaceConfig bottom = start, top = start;
  for (int y = 1; y <= L; ++y)
    for (int x = 1; x <= L; ++x) {
      const auto f = start.floorAt(x, y), c = start.ceilingAt(x, y);
      if (!f || !c) throw ConstraintError("coupling from the past needs finite floor and ceiling at every site");
      bottom.set(x, y, *f);
      top.set(x, y, *c);
    }
  const CounterRng shared(seed);
  for (std::uint64_t T = 1; T <= maxSweeps; T *= 2) {
    ChainState a{bottom, seed, 0, ScanOrder::Raster}, b{top, seed, 0, ScanOrder::Raster};
    // Time -t uses stream index t, so doubling T reuses the recent past.
    for (std::uint64_t t = T; t >= 1; --t) monotoneCoupledSweepInPlace(a, b, params, shared, t);
    if (a.config == b.config) return a.config;
  }
  throw ResourceLimitError("coupling from the past did not coalesce within the sweep budget");
}

/// Checkpoint: a snapshot file plus a `<path>.meta` key=value sidecar.
inline void writeCheckpoint(const std::string& path, const ChainState& st, const ModelParams& params) {
  writeSnapshotFile(path, st.config, params.p, params.beta);
  std::ofstream os(path + ".meta");
  if (!os) throw ResourceLimitError("cannot write checkpoint sidecar " + path + ".meta");
  os << "seed = " << st.seed << "\n"
     << "sweepCount = " << st.sweepCount << "\n"
     << "scanOrder = " << toString(st.scanOrder) << "\n"
     << "paramsHash = " << hex64(paramsHash(params)) << "\n";
}

inline ChainState readCheckpoint(const std::string& path, const ModelParams& params) {
  ChainState st;
  st.config = readSnapshotFile(path).config;
  std::ifstream is(path + ".meta");
  if (!is) throw StructuralError("missing checkpoint sidecar " + path + ".meta");
  std::string line;
  std::string hash;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      s.erase(0, s.find_first_not_of(" \t"));
      s.erase(s.find_last_not_of(" \t\r") + 1);
      return s;
    };
    const auto key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key == "seed") st.seed = std::stoull(val);
    else if (key == "sweepCount") st.sweepCount = std::stoull(val);
    else if (key == "scanOrder") st.scanOrder = parseScanOrder(val);
    else if (key == "paramsHash") hash = val;
  }
  if (hash != hex64(paramsHash(params))) throw ConfigError("checkpoint was written with different model parameters");
  return st;
}

}  // namespace zgff

#endif  // ZGFF_MCMC_HPP
