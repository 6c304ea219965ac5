#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "zgff/wulff.hpp"

using namespace zgff;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> uniformAngles(std::size_t m) {
  std::vector<double> a;
  for (std::size_t k = 0; k < m; ++k) a.push_back(2 * kPi * static_cast<double>(k) / static_cast<double>(m));
  return a;
}

std::vector<double> constantTau(std::size_t m, double c) { return std::vector<double>(m, c); }

// l1 norm of the unit vector at each angle: dual ball is [-1, 1]^2.
std::vector<double> l1Tau(const std::vector<double>& angles) {
  std::vector<double> t;
  for (double a : angles) t.push_back(std::abs(std::cos(a)) + std::abs(std::sin(a)));
  return t;
}

}  // namespace

TEST(Wulff, ConstantTensionGivesDisk) {
  const std::size_t m = 720;
  const double c = 1.7;
  const auto w = wulffShape(uniformAngles(m), constantTau(m, c));
  // Circumscribed regular polygon of inradius c.
  EXPECT_NEAR(w.area(), m * c * c * std::tan(kPi / static_cast<double>(m)), 1e-9);
  EXPECT_NEAR(w.area(), kPi * c * c, 1e-4);
  for (const auto& v : w.vertices) EXPECT_NEAR(std::hypot(v.x, v.y), c, 1e-4);
  EXPECT_NEAR(unitWulff(w).area(), 1.0, 1e-12);
  EXPECT_NEAR(wulffFunctional(w), 2 * std::sqrt(kPi) * c, 1e-4);
}

TEST(Wulff, L1TensionGivesSquare) {
  const auto angles = uniformAngles(64);
  const auto w = wulffShape(angles, l1Tau(angles));
  EXPECT_NEAR(w.area(), 4.0, 1e-9);
  for (const auto& v : w.vertices) {
    EXPECT_NEAR(std::abs(v.x), 1.0, 1e-9);
    EXPECT_NEAR(std::abs(v.y), 1.0, 1e-9);
  }
  EXPECT_EQ(w.vertices.size(), 4u);
  EXPECT_NEAR(w.perimeter(), 8.0, 1e-9);
  // Quarter-turn symmetry.
  for (const auto& v : w.vertices) {
    bool found = false;
    for (const auto& u : w.vertices) found = found || (std::abs(u.x + v.y) < 1e-9 && std::abs(u.y - v.x) < 1e-9);
    EXPECT_TRUE(found);
  }
  EXPECT_NEAR(wulffFunctional(w), 4.0, 1e-9);
}

TEST(Wulff, Dilation) {
  const auto angles = uniformAngles(48);
  std::vector<double> tau, tau2;
  for (double a : angles) {
    tau.push_back(1.0 + 0.05 * std::cos(4 * a));
    tau2.push_back(2 * tau.back());
  }
  const auto w = wulffShape(angles, tau), w2 = wulffShape(angles, tau2);
  ASSERT_EQ(w.vertices.size(), w2.vertices.size());
  for (std::size_t i = 0; i < w.vertices.size(); ++i) {
    EXPECT_NEAR(w2.vertices[i].x, 2 * w.vertices[i].x, 1e-9);
    EXPECT_NEAR(w2.vertices[i].y, 2 * w.vertices[i].y, 1e-9);
  }
  EXPECT_NEAR(wulffFunctional(w2), 2 * wulffFunctional(w), 1e-9);
}

TEST(Wulff, FunctionalEqualsTwiceRootArea) {
  const auto angles = uniformAngles(96);
  std::vector<double> tau;
  for (double a : angles) tau.push_back(2.0 + 0.08 * std::cos(4 * a) + 0.05 * std::sin(2 * a));
  const auto w = wulffShape(angles, tau);
  EXPECT_NEAR(wulffFunctional(w), 2 * std::sqrt(w.area()), 1e-9);
}

TEST(Wulff, RejectsNonConvexAndShortTables) {
  const auto angles = uniformAngles(32);
  auto tau = constantTau(32, 1.0);
  tau[5] = 3.0;  // a constraint that cannot touch the shape
  EXPECT_THROW(wulffShape(angles, tau), ConstraintError);
  EXPECT_THROW(wulffShape(uniformAngles(8), constantTau(8, 1.0)), DomainError);
  EXPECT_THROW(wulffShape(angles, constantTau(31, 1.0)), DomainError);
  // Smooth but with tau + tau'' < 0 near the axes.
  std::vector<double> wavy;
  for (double a : angles) wavy.push_back(1.0 + 0.1 * std::cos(4 * a));
  EXPECT_THROW(wulffShape(angles, wavy), ConstraintError);
  tau[5] = -1.0;
  EXPECT_THROW(wulffShape(angles, tau), DomainError);
}

TEST(Wulff, FromTensionTable) {
  TensionOptions opt;
  opt.baseColumns = 128;
  const auto t = tensionTable(3.0, 1, 2.0, 32, opt);
  const auto w = wulffShape(t);
  EXPECT_GT(w.area(), 0.0);
  EXPECT_NEAR(wulffFunctional(w), 2 * std::sqrt(w.area()), 1e-9);
  const auto j = wulffJson(w);
  EXPECT_EQ(j["vertices"].size(), w.vertices.size() + 1);
}

TEST(Wulff, StiffnessOfSmoothFunction) {
  auto f = [](double t) { return 1.0 + 0.1 * std::cos(4 * t); };
  // tau + tau'' = 1 - 1.5 cos(4 theta)
  EXPECT_NEAR(stiffness(f, 0.3), 1.0 - 1.5 * std::cos(1.2), 1e-5);
  TensionTable t;
  for (double a : uniformAngles(360)) t.entries.push_back({a, f(a), 0.0, 0, false});
  EXPECT_NEAR(stiffness(t, 10), 1.0 - 1.5 * std::cos(4 * t.entries[10].theta), 1e-3);
}

TEST(MidpointDrop, PlugIn) {
  const auto m = wulffMidpointDrop(0.1, 0.0, 1.5, 0.5, 4.0);
  EXPECT_NEAR(m.value, 0.00125, 1e-15);
  EXPECT_LT(m.lo, m.value);
  EXPECT_GT(m.hi, m.value);
}

TEST(MidpointDrop, QuadraticInChordLength) {
  for (double th : {0.0, 0.3, kPi / 4}) {
    const double a = wulffMidpointDrop(0.05, th, 1.0, 0.4, 3.0).value;
    const double b = wulffMidpointDrop(0.1, th, 1.0, 0.4, 3.0).value;
    EXPECT_NEAR(b / a, 4.0, 1e-12);
  }
}

TEST(MidpointDrop, Errors) {
  EXPECT_THROW(wulffMidpointDrop(0.1, 0.0, 1.0, -1.0, 4.0), DomainError);
  EXPECT_THROW(wulffMidpointDrop(0.1, 0.0, 1.0, -2.0, 4.0), DomainError);
  EXPECT_THROW(wulffMidpointDrop(0.1, 1.0, 1.0, 0.0, 4.0), DomainError);
  EXPECT_THROW(wulffMidpointDrop(0.0, 0.0, 1.0, 0.0, 4.0), DomainError);
}

TEST(MidpointDrop, CircleSagitta) {
  const std::size_t m = 4000;
  const auto unit = unitWulff(wulffShape(uniformAngles(m), constantTau(m, 1.0)));
  const double r = 1.0 / std::sqrt(kPi), w1 = 2 * std::sqrt(kPi);
  for (double th : {0.0, 0.4}) {
    for (double d : {0.1, 0.2}) {
      const double predicted = wulffMidpointDrop(d, th, 1.0, 0.0, w1).value;
      const double sagitta = (r - std::sqrt(r * r - d * d / 4)) / std::cos(th);
      EXPECT_NEAR(sagitta, predicted, 2 * std::pow(d, 4)) << th << " " << d;
      EXPECT_NEAR(measuredMidpointDrop(unit, d, th), sagitta, 1e-4) << th << " " << d;
    }
  }
}

TEST(GrowthGadget, Identities) {
  const double Nn = 5000, a = 0.7, L = 800, tau = 2.0, tau2 = -0.5;
  for (double th : {0.0, 0.5}) {
    const auto g = growthGadgetParams(Nn, a, th, tau, tau2, L);
    EXPECT_NEAR(g.Y, -g.sigma2 * std::pow(std::log(L), a) / (2 * std::cbrt(Nn)), 1e-9 * std::abs(g.Y));
    EXPECT_LT(g.Y, 0.0);
    EXPECT_GT(g.sigma2, 0.0);
  }
  EXPECT_THROW(growthGadgetParams(Nn, a, 0.0, 1.0, -1.0, L), DomainError);
  EXPECT_THROW(growthGadgetParams(-1, a, 0.0, 1.0, 0.0, L), DomainError);
  EXPECT_DOUBLE_EQ(gMu(7.0, 0.2, 0.0, Nn, tau, tau2), -tau * 7.0);
  EXPECT_NEAR(gMu(10.0, 0.2, 2.0, 10.0, 1.0, 0.0), -10.0 + 1000.0 * 4.0 / (24.0 * 100.0), 1e-12);
}

TEST(GrowthGadget, LengthAndKappaHelpers) {
  EXPECT_NEAR(ellN(4.0, 1000.0, 0.1, 100.0), 4.0 * 1000.0 / (2 * 0.9 * 100.0), 1e-12);
  EXPECT_NEAR(kappaNB(1000.0, 2.0, std::exp(1.0)), 10.0 / std::exp(1.0), 1e-12);
}
