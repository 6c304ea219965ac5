#include <gtest/gtest.h>

#include <boost/math/special_functions/airy.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "zgff/ferrari_spohn.hpp"

using namespace zgff;

namespace {

// Closed-form CDF from the antiderivative of Ai^2.
double closedFormCdf(const FSModel& m, double x) {
  if (x <= 0) return 0.0;
  const double u = m.scale() * x - m.omega1();
  const double a = boost::math::airy_ai(u), ap = boost::math::airy_ai_prime(u);
  const double z = boost::math::airy_ai_prime(-m.omega1());
  return (u * a * a - ap * ap + z * z) / (z * z);
}

}  // namespace

TEST(Airy, ValueAtZero) {
  const double oracle = 1.0 / (std::pow(3.0, 2.0 / 3.0) * boost::math::tgamma(2.0 / 3.0));
  EXPECT_NEAR(airy::ai(0.0), oracle, 1e-15);
  EXPECT_NEAR(airy::ai(0.0), 0.3550280538878172, 1e-15);
  EXPECT_NEAR(airy::aiPrime(0.0), -0.2588194037928068, 1e-15);
}

TEST(Airy, MatchesIndependentImplementationOnGrid) {
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    EXPECT_NEAR(airy::ai(x), boost::math::airy_ai(x), 1e-10) << x;
    EXPECT_NEAR(airy::aiPrime(x), boost::math::airy_ai_prime(x), 1e-9) << x;
  }
}

TEST(Airy, RelativeAccuracyBeyondTen) {
  for (double x : {10.5, 12.0, 20.0, 35.0}) {
    EXPECT_NEAR(airy::ai(x) / boost::math::airy_ai(x), 1.0, 1e-8) << x;
    EXPECT_NEAR(airy::aiPrime(x) / boost::math::airy_ai_prime(x), 1.0, 1e-8) << x;
  }
  for (double x : {-10.5, -13.0, -25.0}) {
    EXPECT_NEAR(airy::ai(x), boost::math::airy_ai(x), 1e-8 * 0.5) << x;
    EXPECT_NEAR(airy::aiPrime(x), boost::math::airy_ai_prime(x), 1e-8 * 2.5) << x;
  }
}

TEST(Airy, SeriesAndAsymptoticAgreeInCrossCheckBand) {
  for (double x = 5.0; x <= 7.0; x += 0.05) {
    const auto s = airy::series(x), a = airy::asymptotic(x);
    EXPECT_NEAR(s.ai, a.ai, 1e-8) << x;
    EXPECT_NEAR(s.aip, a.aip, 1e-8) << x;
  }
}

TEST(Airy, DecaysMonotonicallyOnPositiveAxis) {
  double prev = airy::ai(0.0);
  for (double x = 0.05; x <= 30; x += 0.05) {
    const double v = airy::ai(x);
    EXPECT_LT(v, prev) << x;
    EXPECT_GT(v, 0.0);
    prev = v;
  }
}

TEST(Airy, FirstZeros) {
  EXPECT_NEAR(airy::omega1(), 2.338107410459767, 1e-12);
  EXPECT_NEAR(std::abs(airy::ai(-airy::omega1())), 0.0, 1e-14);
  EXPECT_NEAR(airy::firstDerivativeZero(), -1.018792971647471, 1e-12);
  EXPECT_NEAR(airy::aiPrime(-airy::omega1()), 0.7012108227206912, 1e-12);
}

TEST(FerrariSpohn, DensityBasics) {
  const FSModel m(1.0);
  EXPECT_EQ(m.density(0.0), 0.0);
  EXPECT_EQ(m.density(-1.0), 0.0);
  EXPECT_NEAR(m.totalMass(), 1.0, 1e-8);
  double mass = 0.0;
  for (int i = 0; i < 400; ++i)
    mass += adaptiveSimpson([&](double x) { return m.density(x); }, 0.1 * i, 0.1 * (i + 1), 1e-15);
  EXPECT_NEAR(mass, 1.0, 1e-8);
}

TEST(FerrariSpohn, NormalizedForSeveralSigmas) {
  for (double s : {0.3, std::sqrt(0.5), 1.0, 2.5}) {
    const FSModel m(s);
    EXPECT_NEAR(m.totalMass(), 1.0, 1e-8) << s;
  }
}

TEST(FerrariSpohn, CdfMatchesClosedForm) {
  for (double s : {std::sqrt(0.5), 1.0, 1.7}) {
    const FSModel m(s);
    for (double x = 0.0; x < m.support(); x += m.support() / 397)
      EXPECT_NEAR(m.cdf(x), closedFormCdf(m, x), 1e-10) << s << " " << x;
  }
}

TEST(FerrariSpohn, ArgmaxLocation) {
  for (double s : {0.5, 1.0, 2.0}) {
    const FSModel m(s);
    const double expected = std::cbrt(s * s / 2) * (2.338107410459767 - 1.018792971647471);
    EXPECT_NEAR(m.argmax(), expected, 1e-10);
    // Numeric maximization by golden section on the density.
    double a = 0.0, b = 4.0 * expected;
    const double r = (std::sqrt(5.0) - 1) / 2;
    for (int i = 0; i < 200; ++i) {
      const double c = b - r * (b - a), d = a + r * (b - a);
      (m.density(c) > m.density(d) ? b : a) = (m.density(c) > m.density(d) ? d : c);
    }
    EXPECT_NEAR(0.5 * (a + b), expected, 1e-6);
    EXPECT_NEAR(m.drift(m.argmax()), 0.0, 1e-9);
  }
}

TEST(FerrariSpohn, DriftSignAndDomain) {
  const FSModel m(1.0);
  for (double x = m.argmax() + 0.01; x < 8; x += 0.01) EXPECT_LT(m.drift(x), 0.0) << x;
  for (double x = 0.01; x < m.argmax() - 0.01; x += 0.01) EXPECT_GT(m.drift(x), 0.0) << x;
  EXPECT_GT(m.drift(1e-6), 1e5);
  EXPECT_THROW(m.drift(0.0), DomainError);
  EXPECT_THROW(m.drift(-1.0), DomainError);
}

TEST(FerrariSpohn, DriftMatchesLogDerivative) {
  for (double s : {0.7, 1.0}) {
    const FSModel m(s);
    for (double x = 0.1; x <= 5.0; x += 0.05) {
      const double h = 1e-5;
      const double fd = s * s * (std::log(std::abs(m.phi(x + h))) - std::log(std::abs(m.phi(x - h)))) / (2 * h);
      EXPECT_NEAR(m.drift(x), fd, 1e-6 * std::max(1.0, std::abs(fd))) << x;
    }
  }
}

TEST(FerrariSpohn, ZeroFluxStationarity) {
  const FSModel m(1.3);
  double worst = 0.0;
  for (double x = 0.05; x <= 6.0; x += 0.01) {
    const double h = 1e-5;
    const double dp = (m.density(x + h) - m.density(x - h)) / (2 * h);
    worst = std::max(worst, std::abs(0.5 * 1.69 * dp - m.drift(x) * m.density(x)));
  }
  EXPECT_LT(worst, 1e-6);
}

TEST(FerrariSpohn, AiryEigenRelation) {
  // (sigma^2/2) phi'' + x-shift: phi'' = c^2 (c x - omega1) phi.
  const double s = 0.9;
  const FSModel m(s);
  for (double x = 0.2; x <= 5.0; x += 0.1) {
    const double h = 1e-4;
    const double d2 = (m.phi(x + h) - 2 * m.phi(x) + m.phi(x - h)) / (h * h);
    const double c = m.scale();
    EXPECT_NEAR(d2, c * c * (c * x - m.omega1()) * m.phi(x), 1e-5);
  }
}

TEST(FerrariSpohn, ScalingCovariance) {
  const double s1 = 1.0, s2 = 0.6;
  const FSModel a(s1), b(s2);
  const double k = std::cbrt(s1 * s1 / (s2 * s2));
  for (double x = 0.01; x < 6; x += 0.07) EXPECT_NEAR(a.density(x), b.density(x / k) / k, 1e-12) << x;
}

TEST(FerrariSpohn, QuantileInvertsCdf) {
  const FSModel m(1.0);
  for (double u = 0.001; u < 1.0; u += 0.0371) EXPECT_NEAR(m.cdf(m.quantile(u)), u, 1e-12);
}

TEST(FerrariSpohn, KsCalibration) {
  const FSModel m(1.0);
  const auto xs = sampleStationary(m, 4000, 77);
  EXPECT_LT(ksDistance(xs, m), stats::ksCritical95(xs.size()));
  EXPECT_NEAR(ksDistance(std::vector<double>(100, m.quantile(0.5)), m), 0.5, 1e-9);
  EXPECT_GT(ksDistance(std::vector<double>(100, 50.0), m), 0.999);
  EXPECT_THROW(ksDistance({}, m), InfeasibleError);
}

TEST(FerrariSpohn, PathReplayAndPositivity) {
  const FSModel m(1.0);
  const auto a = samplePath(m, 5.0, 1e-3, 1.0, 3), b = samplePath(m, 5.0, 1e-3, 1.0, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 5001u);
  for (double x : a) EXPECT_GT(x, 0.0);
  EXPECT_THROW(samplePath(m, 1.0, 1e-3, 0.0, 1), DomainError);
}

TEST(FerrariSpohn, PathMarginalApproachesDensity) {
  const FSModel m(1.0);
  const auto path = samplePath(m, 200.0, 1e-3, m.argmax(), 12);
  EXPECT_LT(ksDistance(path, m), 0.08);
}

TEST(FerrariSpohn, HalvingStepHalvesBias) {
  const FSModel m(1.0);
  const auto r = stepBias(m, 1.0, 5e-3, 40000, 1);
  EXPECT_GT(r.d1, 3 * r.se1);
  EXPECT_GT(r.d2, 3 * r.se2);
  EXPECT_GT(r.ratio(), 1.3);
  EXPECT_LT(r.ratio(), 3.0);
}

TEST(FerrariSpohn, DriftFiniteFarOut) {
  const FSModel m(1.0);
  for (double x : {10.0, 50.0, 300.0}) {
    EXPECT_TRUE(std::isfinite(m.drift(x)));
    EXPECT_LT(m.drift(x), 0.0);
  }
  EXPECT_NEAR(m.drift(8.0), -std::sqrt(m.scale() * 8.0 - m.omega1()) * m.scale(), 0.05);
}
