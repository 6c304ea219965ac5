#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "zgff/tension.hpp"

using namespace zgff;

namespace {

// Large-deviation rate of x-directed paths from the log moment generating
// function of one (right step, vertical run) block.
double blockLogMgf(double beta, double lambda) {
  const double x = std::exp(-beta);
  return -beta + std::log((1 - x * x) / ((1 - x * std::exp(lambda)) * (1 - x * std::exp(-lambda))));
}

double legendreTension(double beta, double theta) {
  const double s = std::tan(theta);
  double a = -beta + 1e-12, b = beta - 1e-12;
  auto g = [&](double l) { return l * s - blockLogMgf(beta, l); };
  const double r = (std::sqrt(5.0) - 1) / 2;
  for (int i = 0; i < 300; ++i) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (g(c) > g(d))
      b = d;
    else
      a = c;
  }
  return std::cos(theta) * g(0.5 * (a + b));
}

}  // namespace

TEST(Tension, FoldQuarterTurn) {
  const double q = std::numbers::pi / 2;
  for (double t : {0.1, -0.3, 0.7}) {
    EXPECT_NEAR(foldQuarterTurn(t + q), t, 1e-12);
    EXPECT_NEAR(foldQuarterTurn(t - 3 * q), t, 1e-12);
    EXPECT_LE(std::abs(foldQuarterTurn(t + 5.0)), std::numbers::pi / 4 + 1e-12);
  }
}

TEST(Tension, LegendreOracleClosedFormAtZero) {
  for (double beta : {2.0, 4.0, 6.0})
    EXPECT_NEAR(legendreTension(beta, 0.0), beta - std::log(1.0 / std::tanh(beta / 2)), 1e-10);
}

TEST(Tension, TransferMatchesLegendre) {
  for (double beta : {2.0, 4.0, 6.0})
    for (double theta : {0.0, 0.2, 0.5, std::numbers::pi / 4}) {
      const auto e = estimateTension(beta, 1, 2.0, theta);
      const double oracle = legendreTension(beta, theta);
      EXPECT_NEAR(e.tau, oracle, std::max(3 * e.ci, 2e-5)) << beta << " " << theta;
      EXPECT_LT(e.ci, 1e-3);
    }
}

TEST(Tension, ReflectionAndQuarterTurn) {
  for (double theta : {0.15, 0.6}) {
    const auto a = estimateTension(5.0, 1, 2.0, theta), b = estimateTension(5.0, 1, 2.0, -theta);
    EXPECT_NEAR(a.tau, b.tau, a.ci + b.ci + 1e-9);
    const auto c = estimateTension(5.0, 1, 2.0, theta + std::numbers::pi / 2);
    EXPECT_DOUBLE_EQ(a.tau, c.tau);
  }
}

TEST(Tension, IndependentOfHeightIndexAndExponent) {
  const auto a = estimateTension(4.0, 1, 2.0, 0.3), b = estimateTension(4.0, 7, 1.3, 0.3);
  EXPECT_DOUBLE_EQ(a.tau, b.tau);
}

TEST(Tension, DomainChecks) {
  EXPECT_THROW(estimateTension(0.0, 1, 2.0, 0.0), DomainError);
  EXPECT_THROW(tensionTable(1.0, 1, 2.0, 3), DomainError);
}

TEST(Tension, TransferAgreesWithDirectedEnumeration) {
  // At large beta the excess-length truncation is negligible.
  const double beta = 5.0;
  for (Point t : {Point{3, 0}, Point{3, 1}, Point{4, 2}, Point{2, 2}}) {
    const auto pc = enumeratePaths(t, 10, true);
    const double s = static_cast<double>(t.y) / t.x;
    const auto lz = detail::directedRayLogZ(beta, s, {t.x});
    EXPECT_NEAR(lz[0], pc.logZ(beta), 1e-9) << t.x << "," << t.y;
  }
}

TEST(Tension, EnumerationCountsAreSymmetric) {
  const auto a = enumeratePaths({3, 2}, 4), b = enumeratePaths({-2, 3}, 4), c = enumeratePaths({3, -2}, 4);
  EXPECT_EQ(a.byExcess, b.byExcess);
  EXPECT_EQ(a.byExcess, c.byExcess);
  EXPECT_EQ(a.minLength, 5);
  EXPECT_EQ(a.byExcess[0], 10u);  // binomial(5, 2)
  EXPECT_EQ(a.byExcess[1], 0u);   // parity
  const auto straight = enumeratePaths({4, 0}, 2);
  EXPECT_EQ(straight.byExcess[0], 1u);
  // Excess 2: one detour of two extra vertical steps.
  EXPECT_GT(straight.byExcess[2], 0u);
}

TEST(Tension, EnumeratedRouteSymmetries) {
  const double beta = 6.0;
  const auto e0 = enumeratedTension(beta, {1, 0}, 12, 4);
  const auto e90 = enumeratedTension(beta, {0, 1}, 12, 4);
  EXPECT_NEAR(e0.tau, e90.tau, e0.ci + e90.ci + 1e-12);
  const auto d1 = enumeratedTension(beta, {2, 1}, 12, 4), d2 = enumeratedTension(beta, {2, -1}, 12, 4);
  const auto d3 = enumeratedTension(beta, {-1, 2}, 12, 4);
  EXPECT_NEAR(d1.tau, d2.tau, d1.ci + d2.ci + 1e-12);
  EXPECT_NEAR(d1.tau, d3.tau, d1.ci + d3.ci + 1e-12);
  // Close to the exact value up to the pre-asymptotic bias.
  EXPECT_NEAR(e0.tau, legendreTension(beta, 0.0), 4 * std::exp(-beta));
}

TEST(Tension, ScalesLinearlyInBeta) {
  const double r6 = estimateTension(6.0, 1, 2.0, 0.0).tau / 6.0;
  const double r8 = estimateTension(8.0, 1, 2.0, 0.0).tau / 8.0;
  EXPECT_NEAR(r6 / r8, 1.0, 0.05);
  EXPECT_GT(r6, 0.99);
}

TEST(Tension, CorrectedPartitionFunctionStaysBounded) {
  const double beta = 6.0;
  const double tau = estimateTension(beta, 1, 2.0, 0.0).tau;
  double prev = 0.0, last = 0.0;
  for (int N = 1; N <= 12; ++N) {
    const double s = enumeratePaths({N, 0}, 4).logZ(beta) + tau * N + 0.5 * std::log(N);
    EXPECT_LT(std::abs(s), 2.0) << N;
    last = s - prev;
    prev = s;
  }
  EXPECT_LT(std::abs(last), 0.05);
}

TEST(Tension, TableIsConvexAndPeriodic) {
  TensionOptions opt;
  opt.baseColumns = 256;
  const auto t = tensionTable(4.0, 1, 2.0, 32, opt);
  ASSERT_EQ(t.entries.size(), 32u);
  EXPECT_GT(convexityMargin(t), 0.0);
  EXPECT_NEAR(t.at(0.1), t.at(0.1 + 2 * std::numbers::pi), 1e-12);
  EXPECT_NEAR(t.at(t.entries[5].theta), t.entries[5].tau, 1e-12);
  EXPECT_NEAR(t.homogeneous(3.0, 0.0), 3 * t.entries[0].tau, 1e-12);
  std::ostringstream os;
  writeTensionCsv(os, t);
  EXPECT_EQ(os.str().substr(0, 18), "theta,tau,ci,N_use");
}

TEST(Irreducible, SmallCounts) {
  const auto ic = enumerateIrreducible(2);
  // The single right step is the only component with X = (1, 0).
  EXPECT_EQ(ic.counts.at({1, 0, 1}), 1u);
  EXPECT_THROW(enumerateIrreducible(0), DomainError);
  EXPECT_THROW(enumerateIrreducible(13), DomainError);
}

TEST(Irreducible, MassApproachesOne) {
  const double beta = 6.0;
  const double tau = legendreTension(beta, 0.0);
  double prev = 0.0;
  for (int k = 2; k <= 6; ++k) {
    const auto s = summarizeIrreducible(enumerateIrreducible(k), beta, tau);
    EXPECT_GE(s.totalMass, prev);
    EXPECT_LE(s.totalMass, 1.0 + 1e-12) << k << " " << s.totalMass - 1.0;
    EXPECT_NEAR(s.meanY, 0.0, 1e-12);
    prev = s.totalMass;
  }
  EXPECT_GT(prev, 1.0 - 1e-3);
}

TEST(Irreducible, VarianceStableAndDecreasingInBeta) {
  const double t4 = estimateTension(4.0, 1, 2.0, 0.0).tau, t6 = estimateTension(6.0, 1, 2.0, 0.0).tau;
  const auto a = summarizeIrreducible(enumerateIrreducible(4), 6.0, t6);
  const auto b = summarizeIrreducible(enumerateIrreducible(8), 6.0, t6);
  EXPECT_NEAR(a.varY / b.varY, 1.0, 0.02);
  const auto c = summarizeIrreducible(enumerateIrreducible(8), 4.0, t4);
  EXPECT_GT(c.varY, b.varY);
  EXPECT_GT(b.varY, 0.0);
}
