#ifndef ZGFF_EXPERIMENTS_HPP
#define ZGFF_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "zgff/config.hpp"
#include "zgff/effective_rw.hpp"
#include "zgff/errors.hpp"
#include "zgff/ferrari_spohn.hpp"
#include "zgff/io.hpp"
#include "zgff/level_lines.hpp"
#include "zgff/mcmc.hpp"
#include "zgff/scales.hpp"
#include "zgff/stats.hpp"
#include "zgff/tension.hpp"
#include "zgff/wulff.hpp"

namespace zgff {

inline const std::map<std::string, std::string>& moduleVersions() {
  static const std::map<std::string, std::string> v{
      {"surface-model", "1.0"}, {"level-lines", "1.0"},  {"scale-calculator", "1.0"}, {"ferrari-spohn", "1.0"},
      {"polymers", "1.0"},      {"surface-tension", "1.0"}, {"wulff", "1.0"},         {"effective-rw", "1.0"},
      {"cli-experiments", "1.0"}};
  return v;
}

struct RunManifest {
  std::string configHash;
  std::string pipeline;
  std::map<std::string, std::string> versions = moduleVersions();
  double wallClockSeconds = 0.0;
  std::vector<std::string> artifacts;  // relative to the output directory
  nlohmann::json summary = nlohmann::json::object();

  /// Everything except the wall clock, which lives in timing.json so that
  /// replays produce byte-identical manifests.
  nlohmann::json toJson() const {
    nlohmann::json j;
    j["config_hash"] = configHash;
    j["pipeline"] = pipeline;
    j["module_versions"] = versions;
    j["artifacts"] = artifacts;
    j["summary"] = summary;
    j["timing"] = "timing.json";
    return j;
  }
};

/// Serializes every file write of a run and records what was written.
class ManifestWriter {
 public:
  ManifestWriter(std::filesystem::path dir, std::string hash) : dir_(std::move(dir)), hash_(std::move(hash)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ResourceLimitError("cannot create output directory " + dir_.string() + ": " + ec.message());
  }

  const std::string& hash() const { return hash_; }
  const std::filesystem::path& dir() const { return dir_; }

  /// CSV files start with a "# config <hash>" line.
  void csv(const std::string& name, const std::string& body) { text(name, "# config " + hash_ + "\n" + body); }

  void json(const std::string& name, nlohmann::json j) {
    j["config_hash"] = hash_;
    text(name, j.dump(2) + "\n");
  }

  /// Binary artifacts carry the hash in their file name.
  std::string snapshot(const std::string& stem, const SurfaceConfig& c, double p, double beta) {
    const std::string name = stem + "_" + hash_ + ".zgs";
    std::lock_guard lock(mu_);
    writeSnapshotFile((dir_ / name).string(), c, p, beta);
    record(name);
    return name;
  }

  void text(const std::string& name, const std::string& body) {
    std::lock_guard lock(mu_);
    std::ofstream os(dir_ / name, std::ios::binary);
    os << body;
    if (!os) throw ResourceLimitError("cannot write " + (dir_ / name).string());
    record(name);
  }

  std::vector<std::string> artifacts() const {
    std::lock_guard lock(mu_);
    return artifacts_;
  }

 private:
  void record(const std::string& name) {
    if (std::find(artifacts_.begin(), artifacts_.end(), name) == artifacts_.end()) artifacts_.push_back(name);
  }

  std::filesystem::path dir_;
  std::string hash_;
  mutable std::mutex mu_;
  std::vector<std::string> artifacts_;
};

namespace detail {

inline std::ostringstream numStream() {
  std::ostringstream os;
  os << std::setprecision(12);
  return os;
}

inline std::string fmt(double v) {
  if (!std::isfinite(v)) return "";
  auto os = numStream();
  os << v;
  return os.str();
}

inline nlohmann::json jnum(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

/// Runs `work(i)` for i < n on worker threads; the first exception wins.
inline void parallelFor(std::size_t n, const std::function<void(std::size_t)>& work) {
  const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(n)));
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

/// Delivers the retained snapshots of one chain, in order, to `sink`.
/// Called concurrently for different seeds.
using SnapshotSink = std::function<void(std::size_t index, const SurfaceConfig&)>;
using SnapshotSource =
    std::function<void(const ExperimentConfig&, const ModelParams&, std::uint64_t seed, const SnapshotSink&)>;

inline void heatBathSource(const ExperimentConfig& cfg, const ModelParams& params, std::uint64_t seed,
                           const SnapshotSink& sink) {
  ChainState st{makeConfig(params, cfg.L), seed, 0, ScanOrder::Raster};
  std::size_t index = 0;
  for (std::uint64_t s = 1; s <= cfg.sweeps; ++s) {
    heatBathSweepInPlace(st, params);
    if (s > cfg.burnIn && (s - cfg.burnIn) % cfg.thin == 0) sink(index++, st.config);
  }
}

/// Per-seed results gathered in seed order, independent of scheduling.
template <class R>
std::vector<std::vector<R>> collectSnapshots(const ExperimentConfig& cfg, const ModelParams& params,
                                             const SnapshotSource& source,
                                             const std::function<R(std::size_t, const SurfaceConfig&)>& analyze) {
  std::vector<std::vector<R>> out(cfg.seeds.size());
  detail::parallelFor(cfg.seeds.size(), [&](std::size_t i) {
    source(cfg, params, cfg.seeds[i], [&](std::size_t idx, const SurfaceConfig& c) { out[i].push_back(analyze(idx, c)); });
  });
  return out;
}

// ---------------------------------------------------------------------------
// Pipelines.

inline HeightHistogram heightLaw(const ExperimentConfig& cfg) {
  if (!cfg.heightTable.empty()) return HeightHistogram::fromTable(cfg.parsedHeightTable(), cfg.beta, cfg.p);
  const int box = cfg.box > 0 ? cfg.box : defaultProxyBox(cfg.L);
  return estimateHeightProb(cfg.p, cfg.beta, box, cfg.heightSamples, cfg.seeds.front());
}

inline ScaleTable scalesFor(const ExperimentConfig& cfg, const HeightHistogram& hist) {
  return computeScales(hist, cfg.L, cfg.levels, cfg.thresholdConstant);
}

inline void runSurface(const ExperimentConfig& cfg, const SnapshotSource& source, ManifestWriter& w, RunManifest& m) {
  const auto params = cfg.model();
  struct Row {
    std::size_t index;
    double mean;
    std::int32_t minH, maxH;
  };
  std::vector<std::optional<SurfaceConfig>> last(cfg.seeds.size());
  std::vector<std::vector<Row>> rows(cfg.seeds.size());
  detail::parallelFor(cfg.seeds.size(), [&](std::size_t i) {
    source(cfg, params, cfg.seeds[i], [&](std::size_t idx, const SurfaceConfig& c) {
      std::int32_t lo = c(1, 1), hi = lo;
      for (int y = 1; y <= c.width(); ++y)
        for (int x = 1; x <= c.width(); ++x) {
          lo = std::min(lo, c(x, y));
          hi = std::max(hi, c(x, y));
        }
      rows[i].push_back({idx, c.meanHeight(), lo, hi});
      last[i] = c;
    });
  });
  auto os = detail::numStream();
  os << "snapshot,seed,mean_height,min_height,max_height\n";
  nlohmann::json chains = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
    std::vector<double> trace;
    for (const auto& r : rows[i]) {
      os << r.index << ',' << cfg.seeds[i] << ',' << r.mean << ',' << r.minH << ',' << r.maxH << '\n';
      trace.push_back(r.mean);
    }
    nlohmann::json c{{"seed", cfg.seeds[i]}, {"snapshots", trace.size()}};
    if (!trace.empty()) {
      c["mean_height"] = stats::mean(trace);
      c["autocorr_time"] = detail::jnum(trace.size() > 2 ? stats::integratedAutocorrTime(trace) : std::nan(""));
    }
    if (last[i]) c["final_snapshot"] = w.snapshot("snapshot_seed" + std::to_string(cfg.seeds[i]), *last[i], cfg.p, cfg.beta);
    chains.push_back(c);
  }
  w.csv("surface.csv", os.str());
  m.summary["chains"] = chains;
}

inline void runLevelLines(const ExperimentConfig& cfg, const SnapshotSource& source, ManifestWriter& w, RunManifest& m) {
  const auto params = cfg.model();
  struct Row {
    std::size_t index;
    std::vector<LevelLoop> loops;
  };
  const auto res = collectSnapshots<Row>(cfg, params, source, [](std::size_t idx, const SurfaceConfig& c) {
    Row r{idx, {}};
    std::int32_t top = c(1, 1);
    for (int y = 0; y <= c.width() + 1; ++y)
      for (int x = 0; x <= c.width() + 1; ++x) top = std::max(top, c(x, y));
    std::int32_t bottom = top;
    for (int y = 0; y <= c.width() + 1; ++y)
      for (int x = 0; x <= c.width() + 1; ++x) bottom = std::min(bottom, c(x, y));
    for (int h = bottom + 1; h <= top; ++h)
      for (auto& l : extractLevelLines(c, h)) r.loops.push_back(std::move(l));
    return r;
  });
  auto os = detail::numStream();
  os << "snapshot,seed,level,length,area,macroscopic\n";
  std::map<int, std::size_t> macroCount;
  std::size_t total = 0;
  nlohmann::json lastLoops = nlohmann::json::array();
  for (std::size_t i = 0; i < res.size(); ++i)
    for (const auto& r : res[i]) {
      for (const auto& l : r.loops) {
        os << r.index << ',' << cfg.seeds[i] << ',' << l.level << ',' << l.length() << ',' << l.area << ','
           << (l.macroscopic ? 1 : 0) << '\n';
        if (l.macroscopic) ++macroCount[l.level];
        ++total;
      }
    }
  if (!res.empty() && !res.front().empty())
    for (const auto& l : res.front().back().loops)
      if (l.macroscopic) lastLoops.push_back(loopToJson(l));
  w.csv("level_lines.csv", os.str());
  w.json("macroscopic_loops.json", {{"seed", cfg.seeds.front()}, {"snapshot", res.front().empty() ? 0 : res.front().back().index},
                                    {"loops", lastLoops}});
  nlohmann::json mc = nlohmann::json::object();
  for (auto [h, c] : macroCount) mc[std::to_string(h)] = c;
  m.summary["loops"] = total;
  m.summary["macroscopic_by_level"] = mc;
  m.summary["macroscopic_threshold"] = macroscopicThreshold(cfg.L);
}

inline void runScales(const ExperimentConfig& cfg, ManifestWriter& w, RunManifest& m) {
  const auto hist = heightLaw(cfg);
  const auto t = scalesFor(cfg, hist);
  std::ostringstream os;
  writeScaleCsv(os, hist, t);
  w.csv("scales.csv", os.str());
  auto j = scaleJson(t);
  const auto ld = exceptionalLogDensityDiagnostic(t);
  j["height_law_status"] = hist.status;
  w.json("scales.json", j);
  m.summary["H"] = t.H;
  m.summary["N"] = t.N;
  m.summary["L_in_exceptional_set"] = t.inExceptional;
  m.summary["log_density_nonincreasing"] = ld.nonIncreasing;
}

inline void runFs(const ExperimentConfig& cfg, ManifestWriter& w, RunManifest& m) {
  const FSModel fs(cfg.sigma);
  std::ostringstream table;
  writeFsTable(table, fs, static_cast<std::size_t>(cfg.fsPoints));
  w.csv("fs_table.csv", table.str());
  auto os = detail::numStream();
  os << "seed,step,t,x\n";
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.01 / cfg.fsDt)));
  nlohmann::json ks = nlohmann::json::array();
  for (auto seed : cfg.seeds) {
    const auto path = samplePath(fs, cfg.fsT, cfg.fsDt, fs.quantile(0.5), seed);
    for (std::size_t k = 0; k < path.size(); k += stride)
      os << seed << ',' << k << ',' << static_cast<double>(k) * cfg.fsDt << ',' << path[k] << '\n';
    ks.push_back({{"seed", seed}, {"steps", path.size() - 1}, {"ks_time_average", ksDistance(path, fs)}});
  }
  w.csv("fs_paths.csv", os.str());
  m.summary["sigma"] = cfg.sigma;
  m.summary["omega1"] = fs.omega1();
  m.summary["paths"] = ks;
}

inline int defaultBridgeWidth(double N) {
  int W = static_cast<int>(std::ceil(6 * std::pow(N, 2.0 / 3.0) - 1e-9));
  return W + (W % 2);
}

inline void runRw(const ExperimentConfig& cfg, ManifestWriter& w, RunManifest& m) {
  TiltedBridgeSpec spec;
  spec.law = basicIncrementLaw(cfg.rwQ);
  spec.tiltN = cfg.rwN;
  const int W = cfg.rwWidth > 0 ? cfg.rwWidth : defaultBridgeWidth(cfg.rwN);
  spec.u = {0, 0};
  spec.v = {W, 0};
  spec.validate();
  const auto [lo, hi] = spec.reachableWindow();
  const BridgeTransfer transfer(spec, lo, hi);
  const auto marg = transfer.marginals();
  auto os = detail::numStream();
  os << "t,height,probability\n";
  for (std::size_t x = 0; x < marg.prob.size(); ++x)
    for (std::size_t k = 0; k < marg.prob[x].size(); ++k)
      if (marg.prob[x][k] > 1e-15) os << x << ',' << marg.lo + static_cast<int>(k) << ',' << marg.prob[x][k] << '\n';
  w.csv("rw_marginals.csv", os.str());

  BridgeSamplerOptions opt;
  if (cfg.rwMethod == "transfer")
    opt.method = BridgeMethod::Transfer;
  else if (cfg.rwMethod == "mcmc")
    opt.method = BridgeMethod::Mcmc;
  else if (cfg.rwMethod == "enumeration")
    opt.method = BridgeMethod::Enumeration;
  else if (cfg.rwMethod == "auto")
    opt.method = BridgeMethod::Auto;
  else
    throw ConfigError("unknown rw method '" + cfg.rwMethod + "'");
  opt.thin = cfg.rwThin;
  const double sigma = std::sqrt(spec.law.yVariance() / spec.law.meanX());
  const FSModel fs(sigma);
  const auto mid = static_cast<std::size_t>(W / 2);
  const double hs = std::cbrt(cfg.rwN);
  const double exactKs = [&] {
    double d = 0.0;
    for (std::size_t k = 0; k < marg.prob[mid].size(); ++k) {
      const double h = marg.lo + static_cast<double>(k);
      const double below = marg.cdf(mid, static_cast<int>(h) - 1), at = marg.cdf(mid, static_cast<int>(h));
      const double F = fs.cdf(h / hs);
      d = std::max({d, std::abs(at - F), std::abs(below - F)});
    }
    return d;
  }();

  auto ss = detail::numStream();
  ss << "seed,sample,column,height\n";
  nlohmann::json reports = nlohmann::json::array();
  std::vector<double> ks;
  for (auto seed : cfg.seeds) {
    const auto smp = sampleTiltedBridge(spec, cfg.rwSamples, seed, opt);
    for (std::size_t s = 0; s < smp.paths.size(); ++s) ss << seed << ',' << s << ',' << mid << ',' << smp.paths[s][mid] << '\n';
    const auto cmp = fsComparison(smp.paths, cfg.rwN, sigma);
    nlohmann::json r{{"seed", seed}, {"method", smp.method}, {"samples", cmp.samples}, {"critical95", cmp.critical95}};
    for (std::size_t i = 0; i < cmp.t.size(); ++i) r["ks"].push_back({{"t", cmp.t[i]}, {"column", cmp.column[i]}, {"ks", cmp.ks[i]}});
    r["acceptance"] = detail::jnum(smp.acceptance);
    reports.push_back(r);
    ks.push_back(cmp.midpointKs());
  }
  w.csv("rw_midpoint_samples.csv", ss.str());
  w.json("rw_ks.json", {{"N", cfg.rwN}, {"width", W}, {"sigma", sigma}, {"exact_midpoint_ks", exactKs}, {"seeds", reports}});
  m.summary["width"] = W;
  m.summary["sigma"] = sigma;
  m.summary["median_midpoint_ks"] = stats::median(ks);
  m.summary["exact_midpoint_ks"] = exactKs;
}

inline void runTension(const ExperimentConfig& cfg, ManifestWriter& w, RunManifest& m) {
  TensionOptions opt;
  opt.baseColumns = cfg.tensionColumns;
  const auto t = tensionTable(cfg.beta, cfg.level, cfg.p, static_cast<std::size_t>(cfg.tensionAngles), opt);
  std::ostringstream os;
  writeTensionCsv(os, t);
  w.csv("tension.csv", os.str());
  const auto shape = wulffShape(t);
  auto j = wulffJson(shape);
  j["w1"] = wulffFunctional(shape);
  w.json("wulff.json", j);
  m.summary["tau0"] = t.entries.front().tau;
  m.summary["convexity_margin"] = convexityMargin(t);
  m.summary["w1"] = wulffFunctional(shape);
}

// ---------------------------------------------------------------------------
// End-to-end comparison of level-line profiles with the FS law.

struct LevelObservation {
  int n = 0;
  int level = 0;
  std::string status;  // "ok", "no macroscopic loop", "no crossing", "uncovered at t=0"
  std::optional<LevelProfile> prof;
  std::optional<RescaledProfile> resc;
  double y0 = std::nan("");
  double ybar0 = std::nan("");
};

inline std::vector<LevelObservation> observeLevels(const SurfaceConfig& c, const ScaleTable& t, int L) {
  std::vector<LevelObservation> out;
  for (int n = 0; n < static_cast<int>(t.N.size()); ++n) {
    LevelObservation o;
    o.n = n;
    o.level = t.H - n;
    const auto loop = topMacroscopicLoop(c, o.level);
    if (!loop) {
      o.status = "no macroscopic loop";
    } else {
      try {
        o.prof = profile(*loop, n, t.N[static_cast<std::size_t>(n)], L);
        o.resc = rescale(*o.prof, t.N[static_cast<std::size_t>(n)]);
        const auto mid = static_cast<std::size_t>(o.prof->halfWidth);
        if (o.resc->covered[mid]) {
          o.y0 = o.resc->Y[mid];
          o.ybar0 = o.resc->Ybar[mid];
          o.status = "ok";
        } else {
          o.status = "uncovered at t=0";
        }
      } catch (const InfeasibleError&) {
        o.status = "no crossing";
      }
    }
    out.push_back(std::move(o));
  }
  return out;
}

/// Diffusivity of the effective walk at level n: Var(dy) / E(dx).
inline double effectiveSigma(const ExperimentConfig& cfg, int n, std::string* status = nullptr) {
  const auto law = enumeratedIncrementLaw(cfg.beta, n, cfg.p, cfg.kMax);
  if (status) *status = law.status;
  return std::sqrt(law.yVariance() / law.meanX());
}

inline void runEndToEnd(const ExperimentConfig& cfg, const SnapshotSource& source, ManifestWriter& w, RunManifest& m) {
  const auto hist = heightLaw(cfg);
  const auto table = scalesFor(cfg, hist);
  if (table.inExceptional)
    throw ConfigError("L = " + std::to_string(cfg.L) + " lies in the exceptional interval [" +
                      std::to_string(table.containingInterval->lo) + ", " + std::to_string(table.containingInterval->hi) + "]");
  {
    std::ostringstream os;
    writeScaleCsv(os, hist, table);
    w.csv("scales.csv", os.str());
    w.json("scales.json", scaleJson(table));
  }
  const auto params = cfg.model();
  struct Row {
    std::size_t index;
    std::vector<LevelObservation> obs;
  };
  const auto res = collectSnapshots<Row>(cfg, params, source, [&](std::size_t idx, const SurfaceConfig& c) {
    return Row{idx, observeLevels(c, table, cfg.L)};
  });

  const std::size_t m_ = table.N.size();
  std::vector<std::ostringstream> prof(m_);
  for (auto& os : prof) {
    os << std::setprecision(12);
    os << "snapshot,seed,level,n,t,rho,rhoBar,Y,Ybar,covered\n";
  }
  auto y0 = detail::numStream();
  y0 << "snapshot,seed,n,level,status,Y0,Ybar0,sup_gap\n";
  // Per level: Y_n(0) samples; per level and snapshot: value or NaN, for pairing.
  std::vector<std::vector<double>> samples(m_), gaps(m_), aligned(m_);
  std::vector<std::map<std::string, std::size_t>> statusCount(m_);
  for (std::size_t i = 0; i < res.size(); ++i)
    for (const auto& r : res[i])
      for (const auto& o : r.obs) {
        const auto n = static_cast<std::size_t>(o.n);
        ++statusCount[n][o.status];
        aligned[n].push_back(o.y0);
        if (std::isfinite(o.y0)) samples[n].push_back(o.y0);
        double gap = std::nan("");
        if (o.resc) {
          gap = o.resc->supGap;
          gaps[n].push_back(gap);
          for (std::size_t k = 0; k < o.prof->xs.size(); ++k) {
            prof[n] << r.index << ',' << cfg.seeds[i] << ',' << o.level << ',' << o.n << ',' << o.resc->t[k] << ',';
            if (o.prof->covered[k])
              prof[n] << o.prof->rho[k] << ',' << o.prof->rhoBar[k] << ',' << o.resc->Y[k] << ',' << o.resc->Ybar[k] << ",1\n";
            else
              prof[n] << ",,,,0\n";
          }
        }
        y0 << r.index << ',' << cfg.seeds[i] << ',' << o.n << ',' << o.level << ',' << o.status << ','
           << detail::fmt(o.y0) << ',' << detail::fmt(o.ybar0) << ',' << detail::fmt(gap) << '\n';
      }
  for (std::size_t n = 0; n < m_; ++n) w.csv("profiles_n" + std::to_string(n) + ".csv", prof[n].str());
  w.csv("y0.csv", y0.str());

  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t n = 0; n < m_; ++n) {
    std::string lawStatus;
    const double sigma = effectiveSigma(cfg, static_cast<int>(n), &lawStatus);
    nlohmann::json l{{"n", n},
                     {"level", table.H - static_cast<int>(n)},
                     {"N_n", table.N[n]},
                     {"sigma_n", sigma},
                     {"increment_law_status", lawStatus},
                     {"samples", samples[n].size()},
                     {"status_counts", statusCount[n]}};
    if (!samples[n].empty()) {
      const FSModel fs(sigma);
      l["ks"] = ksDistance(samples[n], fs);
      l["critical95"] = stats::ksCritical95(samples[n].size());
      l["mean_Y0"] = stats::mean(samples[n]);
    } else {
      l["ks"] = nullptr;
    }
    if (!gaps[n].empty()) {
      l["mean_sup_gap"] = stats::mean(gaps[n]);
      l["max_sup_gap"] = *std::max_element(gaps[n].begin(), gaps[n].end());
    }
    levels.push_back(l);
  }
  nlohmann::json corr = nlohmann::json::array();
  for (std::size_t n = 0; n + 1 < m_; ++n) {
    std::vector<double> a, b;
    for (std::size_t k = 0; k < aligned[n].size(); ++k)
      if (std::isfinite(aligned[n][k]) && std::isfinite(aligned[n + 1][k])) {
        a.push_back(aligned[n][k]);
        b.push_back(aligned[n + 1][k]);
      }
    nlohmann::json c{{"n", n}, {"pairs", a.size()}};
    try {
      c["correlation"] = stats::pearson(a, b);
      const auto ci = stats::correlationCI(a, b, 1000, cfg.seeds.front());
      c["ci95"] = {detail::jnum(ci.lo), detail::jnum(ci.hi)};
    } catch (const InfeasibleError& e) {
      c["correlation"] = nullptr;
      c["status"] = e.what();
    }
    corr.push_back(c);
  }
  nlohmann::json report{{"label", "observational"}, {"H", table.H}, {"levels", levels}, {"cross_level", corr}};
  if (table.H < 1) {
    report["warning"] = "H < 1: the plateau sits at the floor and no level line at h >= 1 is expected at this L";
    m.summary["warning"] = report["warning"];
  }
  w.json("endtoend.json", report);
  m.summary["label"] = "observational";
  m.summary["H"] = table.H;
  m.summary["levels"] = levels;
  m.summary["cross_level"] = corr;
}

/// Runs the configured pipeline and writes manifest.json and timing.json
/// into the output directory.
inline RunManifest runExperiment(const ExperimentConfig& cfg, const SnapshotSource& source = heatBathSource) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  RunManifest m;
  m.configHash = configHash(cfg);
  m.pipeline = toString(cfg.pipeline);
  ManifestWriter w(cfg.outDir, m.configHash);
  {
    auto hashed = cfg;
    hashed.outDir.clear();
    w.text("config_" + m.configHash + ".ini", toText(hashed));
  }
  switch (cfg.pipeline) {
    case Pipeline::Surface: runSurface(cfg, source, w, m); break;
    case Pipeline::LevelLines: runLevelLines(cfg, source, w, m); break;
    case Pipeline::Scales: runScales(cfg, w, m); break;
    case Pipeline::Fs: runFs(cfg, w, m); break;
    case Pipeline::Rw: runRw(cfg, w, m); break;
    case Pipeline::Tension: runTension(cfg, w, m); break;
    case Pipeline::EndToEnd: runEndToEnd(cfg, source, w, m); break;
  }
  m.artifacts = w.artifacts();
  m.wallClockSeconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  w.text("manifest.json", m.toJson().dump(2) + "\n");
  w.text("timing.json", nlohmann::json{{"config_hash", m.configHash}, {"wall_clock_seconds", m.wallClockSeconds}}.dump(2) + "\n");
  return m;
}

}  // namespace zgff

#endif  // ZGFF_EXPERIMENTS_HPP
