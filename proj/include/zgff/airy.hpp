#ifndef ZGFF_AIRY_HPP
#define ZGFF_AIRY_HPP

#include <cmath>
#include <numbers>
#include <utility>

namespace zgff::airy {

struct AiryValue {
  double ai = 0.0;
  double aip = 0.0;
};

/// Ai(0) and -Ai'(0).
inline constexpr long double kC1 = 0.355028053887817239260063186004183176L;
inline constexpr long double kC2 = 0.258819403792806798405183560189203963L;

/// Switch-over points between the Maclaurin series and the asymptotic
/// expansions. On the negative side the series stays accurate further out
/// because it is summed in extended precision.
inline constexpr double kSeriesHigh = 6.0;
inline constexpr double kSeriesLow = -10.0;

/// Maclaurin series Ai = c1 f - c2 g, summed in long double.
inline AiryValue series(double xd) {
  const long double x = xd, x3 = x * x * x;
  long double f = 1, fp = 0, g = x, gp = 1;
  long double t = 1, u = x * x / 2, s = x, v = 1;
  fp = u;
  for (int k = 0; k < 200; ++k) {
    const long double k3 = 3.0L * k;
    t *= x3 / ((k3 + 2) * (k3 + 3));
    u *= x3 / ((k3 + 3) * (k3 + 5));
    s *= x3 / ((k3 + 3) * (k3 + 4));
    v *= x3 / ((k3 + 1) * (k3 + 3));
    f += t;
    fp += u;
    g += s;
    gp += v;
    const long double m = fabsl(t) + fabsl(u) + fabsl(s) + fabsl(v);
    if (m < 1e-30L * (fabsl(f) + fabsl(g) + fabsl(fp) + fabsl(gp))) break;
  }
  return {static_cast<double>(kC1 * f - kC2 * g), static_cast<double>(kC1 * fp - kC2 * gp)};
}

namespace detail {

/// Sums sum_k sign_k c_k z^-k for the u_k (or v_k) coefficients, stopping at
/// the smallest term. `parity` < 0 keeps all terms; 0 or 1 keeps even or odd k
/// with alternating signs in the reduced index.
inline double asymSum(double zeta, bool derivative, int parity) {
  long double uk = 1.0L, zk = 1.0L, sum = 0.0L, prev = INFINITY;
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      uk *= static_cast<long double>((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / ((2 * k - 1) * 216.0L * k);
      zk /= zeta;
    }
    const long double ck = derivative ? -uk * (6 * k + 1) / (6 * k - 1) : uk;
    const long double term = ck * zk;
    if (fabsl(term) > prev) break;
    prev = fabsl(term);
    if (parity < 0) {
      sum += (k % 2 ? -term : term);
    } else if (k % 2 == parity) {
      const int j = k / 2;
      sum += (j % 2 ? -term : term);
    }
    if (fabsl(term) < 1e-22L * fabsl(sum)) break;
  }
  return static_cast<double>(sum);
}

}  // namespace detail

/// Large-|x| asymptotic expansions.
inline AiryValue asymptotic(double x) {
  const double sqpi = std::sqrt(std::numbers::pi);
  if (x > 0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const double e = std::exp(-zeta), q = std::sqrt(std::sqrt(x));
    return {e / (2 * sqpi * q) * detail::asymSum(zeta, false, -1),
            -q * e / (2 * sqpi) * detail::asymSum(zeta, true, -1)};
  }
  const double y = -x;
  const double zeta = 2.0 / 3.0 * y * std::sqrt(y);
  const double q = std::sqrt(std::sqrt(y));
  const double ph = zeta - std::numbers::pi / 4;
  const double c = std::cos(ph), s = std::sin(ph);
  const double ai = (c * detail::asymSum(zeta, false, 0) + s * detail::asymSum(zeta, false, 1)) / (sqpi * q);
  const double aip = q / sqpi * (s * detail::asymSum(zeta, true, 0) - c * detail::asymSum(zeta, true, 1));
  return {ai, aip};
}

/// Ai(x) and Ai'(x).
inline AiryValue airy(double x) {
  if (x >= kSeriesLow && x <= kSeriesHigh) return series(x);
  return asymptotic(x);
}

inline double ai(double x) { return airy(x).ai; }

/// Ai'(x)/Ai(x). For large positive x the exponential factors cancel
/// analytically so the ratio stays finite where Ai underflows.
inline double logDerivative(double x) {
  if (x > kSeriesHigh) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    return -std::sqrt(x) * detail::asymSum(zeta, true, -1) / detail::asymSum(zeta, false, -1);
  }
  const auto v = airy(x);
  return v.aip / v.ai;
}
inline double aiPrime(double x) { return airy(x).aip; }

/// Smallest positive root of Ai(-x), by bisection on [2, 3].
inline double omega1() {
  static const double w = [] {
    double lo = 2.0, hi = 3.0;  // Ai(-2) > 0 > Ai(-3)
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      (ai(-mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return w;
}

/// First zero of Ai' on the negative axis (returned negative), by bisection.
inline double firstDerivativeZero() {
  static const double a = [] {
    double lo = -1.5, hi = -0.5;  // Ai'(-1.5) > 0 > Ai'(-0.5)
    for (int i = 0; i < 200 && hi - lo > 1e-16; ++i) {
      const double mid = 0.5 * (lo + hi);
      (aiPrime(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }();
  return a;
}

}  // namespace zgff::airy

#endif  // ZGFF_AIRY_HPP
