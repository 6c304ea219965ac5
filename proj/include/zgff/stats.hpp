#ifndef ZGFF_STATS_HPP
#define ZGFF_STATS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <vector>

#include "zgff/errors.hpp"
#include "zgff/rng.hpp"

namespace zgff::stats {

inline double mean(std::span<const double> x) {
  if (x.empty()) throw InfeasibleError("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Unbiased sample variance.
inline double variance(std::span<const double> x) {
  if (x.size() < 2) throw InfeasibleError("variance needs at least two values");
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty()) throw InfeasibleError("empirical CDF of empty sample");
    std::sort(sorted_.begin(), sorted_.end());
  }
  double operator()(double x) const {
    const auto k = std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin();
    return static_cast<double>(k) / static_cast<double>(sorted_.size());
  }
  const std::vector<double>& sorted() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return sorted_.size(); }

 private:
  std::vector<double> sorted_;
};

/// One-sample Kolmogorov-Smirnov statistic sup|F_n - F| for a continuous
/// model CDF.
inline double ksStatistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw InfeasibleError("KS distance of empty sample");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

inline double ksTwoSample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InfeasibleError("KS distance of empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

/// Asymptotic 95% critical value of the one-sample KS statistic.
inline double ksCritical95(std::size_t n) { return 1.3581 / std::sqrt(static_cast<double>(n)); }

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DomainError("correlation needs equal-length inputs");
  if (x.size() < 2) throw InfeasibleError("correlation needs at least two pairs");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw InfeasibleError("correlation of a constant sequence");
  return sxy / std::sqrt(sxx * syy);
}

/// Integrated autocorrelation time 1 + 2 sum rho(t) with the automatic
/// window t <= 5 tau (Sokal). Returns 1 for constant series.
inline double integratedAutocorrTime(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 4) return 1.0;
  const double m = mean(x);
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  c0 /= static_cast<double>(n);
  if (c0 <= 0.0) return 1.0;
  double tau = 1.0;
  for (std::size_t t = 1; t < n / 2; ++t) {
    double c = 0.0;
    for (std::size_t i = 0; i + t < n; ++i) c += (x[i] - m) * (x[i + t] - m);
    c /= static_cast<double>(n) * c0;
    tau += 2.0 * c;
    if (static_cast<double>(t) >= 5.0 * tau) break;
  }
  return std::max(tau, 1.0);
}

struct BatchMeans {
  double mean = 0.0;
  double stdError = 0.0;
  std::size_t batches = 0;
};

inline BatchMeans batchMeans(std::span<const double> x, std::size_t batches = 20) {
  if (x.size() < 2 * batches || batches < 2) throw InfeasibleError("too few values for batch means");
  const std::size_t b = x.size() / batches;
  std::vector<double> means(batches);
  for (std::size_t k = 0; k < batches; ++k)
    means[k] = mean(x.subspan(k * b, b));
  BatchMeans r;
  r.mean = mean(means);
  r.stdError = std::sqrt(variance(means) / static_cast<double>(batches));
  r.batches = batches;
  return r;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
  double width() const { return hi - lo; }
};

/// Moving-block bootstrap percentile interval for a statistic of index
/// sets, so paired data is resampled jointly.
inline Interval blockBootstrapCI(std::size_t n, std::size_t block,
                                 const std::function<double(const std::vector<std::size_t>&)>& statistic,
                                 std::size_t reps, std::uint64_t seed, double level = 0.95) {
  if (n < 2) throw InfeasibleError("bootstrap needs at least two observations");
  block = std::clamp<std::size_t>(block, 1, n);
  SplitMix64 rng(seed);
  std::vector<double> stats;
  stats.reserve(reps);
  std::vector<std::size_t> idx;
  idx.reserve(n + block);
  for (std::size_t r = 0; r < reps; ++r) {
    idx.clear();
    while (idx.size() < n) {
      const std::size_t start = rng.below(n - block + 1);
      for (std::size_t k = 0; k < block && idx.size() < n; ++k) idx.push_back(start + k);
    }
    const double s = statistic(idx);
    if (std::isfinite(s)) stats.push_back(s);
  }
  if (stats.size() < 10) throw InfeasibleError("bootstrap statistic degenerate on resamples");
  std::sort(stats.begin(), stats.end());
  const double a = (1.0 - level) / 2.0;
  auto q = [&](double p) {
    const double pos = p * static_cast<double>(stats.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < stats.size() ? stats[i] * (1 - f) + stats[i + 1] * f : stats[i];
  };
  return {q(a), q(1.0 - a)};
}

/// Bootstrap CI of the Pearson correlation with block = 5 tau_int.
inline Interval correlationCI(std::span<const double> x, std::span<const double> y, std::size_t reps,
                              std::uint64_t seed, double level = 0.95) {
  const double tau = std::max(integratedAutocorrTime(x), integratedAutocorrTime(y));
  const auto block = static_cast<std::size_t>(std::ceil(5.0 * tau));
  std::vector<double> bx, by;
  return blockBootstrapCI(
      x.size(), block,
      [&](const std::vector<std::size_t>& idx) {
        bx.resize(idx.size());
        by.resize(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
          bx[i] = x[idx[i]];
          by[i] = y[idx[i]];
        }
        try {
          return pearson(bx, by);
        } catch (const InfeasibleError&) {
          return std::nan("");
        }
      },
      reps, seed, level);
}

/// Two-sided p-value of the z statistic for equal means.
inline double twoSampleZPValue(double m1, double se1, double m2, double se2) {
  const double s = std::sqrt(se1 * se1 + se2 * se2);
  if (s == 0.0) return m1 == m2 ? 1.0 : 0.0;
  return std::erfc(std::abs(m1 - m2) / s / std::sqrt(2.0));
}

inline double median(std::vector<double> x) {
  if (x.empty()) throw InfeasibleError("median of empty sample");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  return n % 2 ? x[n / 2] : 0.5 * (x[n / 2 - 1] + x[n / 2]);
}

/// Ordinary least squares y = a + b x.
struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

inline LinearFit linearFit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InfeasibleError("linear fit needs two or more pairs");
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw InfeasibleError("linear fit with constant regressor");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace zgff::stats

#endif  // ZGFF_STATS_HPP
