#ifndef ZGFF_FERRARI_SPOHN_HPP
#define ZGFF_FERRARI_SPOHN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "zgff/airy.hpp"
#include "zgff/errors.hpp"
#include "zgff/rng.hpp"
#include "zgff/stats.hpp"

namespace zgff {

namespace detail {

inline double simpsonRec(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                         double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15 * tol) return left + right + diff / 15;
  return simpsonRec(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
         simpsonRec(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
inline double adaptiveSimpson(const std::function<double(double)>& f, double a, double b, double tol = 1e-13,
                              int maxDepth = 40) {
  if (b == a) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return detail::simpsonRec(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), tol, maxDepth);
}

/// Ferrari-Spohn diffusion with diffusion coefficient sigma. With
/// c = (2/sigma^2)^{1/3} and phi(x) = Ai(c x - omega1), the stationary
/// density is c phi(x)^2 / Ai'(-omega1)^2 on (0, inf).
class FSModel {
 public:
  static constexpr std::size_t kGridPoints = 10000;

  explicit FSModel(double sigma) : sigma_(sigma) {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("sigma must be positive");
    omega1_ = airy::omega1();
    c_ = std::cbrt(2.0 / (sigma * sigma));
    aipZero_ = airy::aiPrime(-omega1_);
    norm_ = c_ / (aipZero_ * aipZero_);
    xMax_ = (9.0 + omega1_) / c_;
    buildGrid();
  }

  double sigma() const noexcept { return sigma_; }
  double omega1() const noexcept { return omega1_; }
  double scale() const noexcept { return c_; }
  double aiPrimeAtMinusOmega1() const noexcept { return aipZero_; }
  double normalization() const noexcept { return norm_; }
  double support() const noexcept { return xMax_; }

  double phi(double x) const { return airy::ai(c_ * x - omega1_); }
  double phiPrime(double x) const { return c_ * airy::aiPrime(c_ * x - omega1_); }

  double density(double x) const {
    if (x <= 0) return 0.0;
    const double a = phi(x);
    return norm_ * a * a;
  }

  /// sigma^2 phi'/phi; diverges at 0+.
  double drift(double x) const {
    if (!(x > 0)) throw DomainError("drift is defined for x > 0 only");
    return sigma_ * sigma_ * c_ * airy::logDerivative(c_ * x - omega1_);
  }

  double argmax() const { return (omega1_ + airy::firstDerivativeZero()) / c_; }

  /// Quadrature CDF: cached grid value plus adaptive Simpson on the last cell.
  double cdf(double x) const {
    if (x <= 0) return 0.0;
    if (x >= xMax_) return 1.0;
    const double pos = x / h_;
    const auto i = std::min(static_cast<std::size_t>(pos), kGridPoints - 1);
    const double x0 = static_cast<double>(i) * h_;
    const double v = grid_[i] + adaptiveSimpson([this](double t) { return density(t); }, x0, x, 1e-15, 20);
    return std::clamp(v, 0.0, 1.0);
  }

  /// Inverse CDF: bracket on the grid, then safeguarded Newton.
  double quantile(double u) const {
    if (!(u > 0)) return 0.0;
    if (u >= 1) return xMax_;
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), u);
    const auto i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, (it - grid_.begin()) - 1));
    double lo = static_cast<double>(i) * h_, hi = std::min(xMax_, lo + h_);
    const double glo = grid_[i], ghi = i + 1 < grid_.size() ? grid_[i + 1] : 1.0;
    double x = ghi > glo ? lo + (u - glo) / (ghi - glo) * (hi - lo) : 0.5 * (lo + hi);
    for (int k = 0; k < 50; ++k) {
      const double f = cdf(x) - u;
      if (std::abs(f) < 1e-15) break;
      (f > 0 ? hi : lo) = x;
      const double d = density(x);
      double nx = d > 0 ? x - f / d : 0.5 * (lo + hi);
      if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
      if (std::abs(nx - x) < 1e-16 * std::max(1.0, x)) {
        x = nx;
        break;
      }
      x = nx;
    }
    return x;
  }

  /// Total mass of the cached quadrature.
  double totalMass() const { return grid_.back() + adaptiveSimpson([this](double t) { return density(t); },
                                                                    static_cast<double>(kGridPoints - 1) * h_, xMax_,
                                                                    1e-16, 30) +
                                    tailMass(); }

 private:
  void buildGrid() {
    h_ = xMax_ / static_cast<double>(kGridPoints);
    grid_.resize(kGridPoints);
    grid_[0] = 0.0;
    for (std::size_t i = 1; i < kGridPoints; ++i)
      grid_[i] = grid_[i - 1] + adaptiveSimpson([this](double t) { return density(t); },
                                                static_cast<double>(i - 1) * h_, static_cast<double>(i) * h_,
                                                1e-16, 20);
  }
  double tailMass() const {
    return adaptiveSimpson([this](double t) { return density(t); }, xMax_, 2 * xMax_, 1e-18, 30);
  }

  double sigma_, omega1_ = 0, c_ = 0, aipZero_ = 0, norm_ = 0, xMax_ = 0, h_ = 0;
  std::vector<double> grid_;
};

/// Euler-Maruyama path of dX = drift(X) dt + sigma dW. A proposed step at
/// or below 0 is discarded and its Gaussian increment redrawn.
inline std::vector<double> samplePath(const FSModel& m, double T, double dt, double x0, std::uint64_t seed) {
  if (!(x0 > 0)) throw DomainError("x0 must be positive");
  if (!(dt > 0) || !(T > 0)) throw DomainError("T and dt must be positive");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  SplitMix64 g(seed);
  std::vector<double> path;
  path.reserve(steps + 1);
  path.push_back(x0);
  double x = x0;
  const double sd = m.sigma() * std::sqrt(dt);
  for (std::size_t i = 0; i < steps; ++i) {
    const double mu = x + m.drift(x) * dt;
    double nx;
    do {
      nx = mu + sd * g.normal();
    } while (nx <= 0.0);
    x = nx;
    path.push_back(x);
  }
  return path;
}

/// Coupled Euler-Maruyama runs at steps 4h, 2h, h from exact stationary
/// starts sharing Brownian increments. Reports the mean of F(X_T) at each
/// step and the successive differences with standard errors; a first-order
/// scheme gives d1/d2 close to 2.
struct StepBiasReport {
  double mean4h = 0, mean2h = 0, meanH = 0;
  double d1 = 0, d2 = 0, se1 = 0, se2 = 0;
  double ratio() const { return d1 / d2; }
};

inline StepBiasReport stepBias(const FSModel& m, double T, double h, std::size_t paths, std::uint64_t seed) {
  if (!(h > 0) || !(T > 0) || paths < 2) throw DomainError("stepBias needs T, h > 0 and at least two paths");
  const auto fine = static_cast<std::size_t>(std::llround(T / h)) / 4 * 4;
  SplitMix64 g(seed), aux(deriveSeed(seed, 1));
  std::vector<double> w(fine), a(paths), b(paths), c(paths);
  const double sh = std::sqrt(h);
  for (std::size_t p = 0; p < paths; ++p) {
    const double x0 = m.quantile(g.uniformOpen());
    for (auto& v : w) v = sh * g.normal();
    double out[3];
    for (int l = 0; l < 3; ++l) {
      const std::size_t agg = std::size_t{4} >> l;
      const double dt = h * static_cast<double>(agg), sd = std::sqrt(dt);
      double x = x0;
      for (std::size_t i = 0; i < fine; i += agg) {
        double dw = 0;
        for (std::size_t k = 0; k < agg; ++k) dw += w[i + k];
        const double mu = x + m.drift(x) * dt;
        double nx = mu + dw;
        while (nx <= 0.0) nx = mu + sd * aux.normal();
        x = nx;
      }
      out[l] = m.cdf(x);
    }
    a[p] = out[0];
    b[p] = out[1];
    c[p] = out[2];
  }
  StepBiasReport r;
  r.mean4h = stats::mean(a);
  r.mean2h = stats::mean(b);
  r.meanH = stats::mean(c);
  std::vector<double> e1(paths), e2(paths);
  for (std::size_t p = 0; p < paths; ++p) {
    e1[p] = a[p] - b[p];
    e2[p] = b[p] - c[p];
  }
  const double n = static_cast<double>(paths);
  r.d1 = stats::mean(e1);
  r.d2 = stats::mean(e2);
  r.se1 = std::sqrt(stats::variance(e1) / n);
  r.se2 = std::sqrt(stats::variance(e2) / n);
  return r;
}

inline double ksDistance(const std::vector<double>& samples, const FSModel& m) {
  return stats::ksStatistic(samples, [&m](double x) { return m.cdf(x); });
}

/// Exact draws by inverse CDF.
inline std::vector<double> sampleStationary(const FSModel& m, std::size_t n, std::uint64_t seed) {
  SplitMix64 g(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = m.quantile(g.uniformOpen());
  return out;
}

inline void writeFsTable(std::ostream& os, const FSModel& m, std::size_t points) {
  os << "x,pdf,cdf\n";
  const double top = m.support();
  for (std::size_t i = 0; i <= points; ++i) {
    const double x = top * static_cast<double>(i) / static_cast<double>(points);
    os << x << ',' << m.density(x) << ',' << m.cdf(x) << '\n';
  }
}

}  // namespace zgff

#endif  // ZGFF_FERRARI_SPOHN_HPP
