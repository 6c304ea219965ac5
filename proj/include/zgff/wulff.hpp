#ifndef ZGFF_WULFF_HPP
#define ZGFF_WULFF_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "json.hpp"
#include "zgff/errors.hpp"
#include "zgff/tension.hpp"

namespace zgff {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// Convex polygon, counter-clockwise. `edgeNormal[i]` is the angle of the
/// outward normal of the edge from vertex i to vertex i+1 and `edgeTau[i]`
/// the tension value attached to it.
struct WulffShape {
  std::vector<Vec2> vertices;
  std::vector<double> edgeNormal;
  std::vector<double> edgeTau;

  double area() const {
    double a = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& p = vertices[i];
      const auto& q = vertices[(i + 1) % vertices.size()];
      a += p.x * q.y - q.x * p.y;
    }
    return 0.5 * a;
  }
  double perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& p = vertices[i];
      const auto& q = vertices[(i + 1) % vertices.size()];
      s += std::hypot(q.x - p.x, q.y - p.y);
    }
    return s;
  }
  WulffShape scaled(double k) const {
    WulffShape w = *this;
    for (auto& v : w.vertices) {
      v.x *= k;
      v.y *= k;
    }
    for (auto& t : w.edgeTau) t *= k;
    return w;
  }
  /// Largest y on the boundary above abscissa x (shape assumed to contain x).
  double topAt(double x) const {
    double best = -INFINITY;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const auto& p = vertices[i];
      const auto& q = vertices[(i + 1) % vertices.size()];
      const double lo = std::min(p.x, q.x), hi = std::max(p.x, q.x);
      if (x < lo || x > hi) continue;
      if (hi - lo < 1e-300) {
        best = std::max({best, p.y, q.y});
      } else {
        best = std::max(best, p.y + (x - p.x) / (q.x - p.x) * (q.y - p.y));
      }
    }
    return best;
  }
};

/// Intersection of the half-planes {v : v . n(theta_i) <= tau_i}. Throws
/// ConstraintError when some sampled constraint does not touch the
/// intersection, which happens only for a non-convex table.
inline WulffShape wulffShape(const std::vector<double>& angles, const std::vector<double>& tau) {
  if (angles.size() != tau.size()) throw DomainError("angle and tension tables differ in length");
  if (angles.size() < 16) throw DomainError("need tension on at least 16 angles");
  std::vector<std::size_t> order(angles.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return angles[a] < angles[b]; });
  double scale = 0.0;
  for (double t : tau) {
    if (!(t > 0)) throw DomainError("tension must be positive");
    scale = std::max(scale, t);
  }
  const double B = 4.0 * scale + 1.0;
  std::vector<Vec2> poly{{-B, -B}, {B, -B}, {B, B}, {-B, B}};
  for (auto i : order) {
    const double nx = std::cos(angles[i]), ny = std::sin(angles[i]), c = tau[i];
    std::vector<Vec2> out;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const auto& P = poly[k];
      const auto& Q = poly[(k + 1) % poly.size()];
      const double fp = P.x * nx + P.y * ny - c, fq = Q.x * nx + Q.y * ny - c;
      if (fp <= 0) out.push_back(P);
      if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
        const double t = fp / (fp - fq);
        out.push_back({P.x + t * (Q.x - P.x), P.y + t * (Q.y - P.y)});
      }
    }
    poly = std::move(out);
    if (poly.size() < 3) throw ConstraintError("empty Wulff intersection");
  }
  WulffShape w;
  // Drop coincident vertices, then attach to every edge the constraint whose
  // line carries it.
  for (const auto& v : poly)
    if (w.vertices.empty() || std::hypot(v.x - w.vertices.back().x, v.y - w.vertices.back().y) > 1e-13 * scale)
      w.vertices.push_back(v);
  if (w.vertices.size() > 1 &&
      std::hypot(w.vertices.front().x - w.vertices.back().x, w.vertices.front().y - w.vertices.back().y) <= 1e-13 * scale)
    w.vertices.pop_back();
  for (std::size_t k = 0; k < w.vertices.size(); ++k) {
    const auto& P = w.vertices[k];
    const auto& Q = w.vertices[(k + 1) % w.vertices.size()];
    std::size_t best = 0;
    double bestRes = INFINITY;
    for (std::size_t i = 0; i < angles.size(); ++i) {
      const double nx = std::cos(angles[i]), ny = std::sin(angles[i]);
      const double r = std::max(std::abs(P.x * nx + P.y * ny - tau[i]), std::abs(Q.x * nx + Q.y * ny - tau[i]));
      if (r < bestRes) {
        bestRes = r;
        best = i;
      }
    }
    if (bestRes > 1e-8 * scale) throw ConstraintError("Wulff intersection is unbounded for this table");
    w.edgeNormal.push_back(angles[best]);
    w.edgeTau.push_back(tau[best]);
  }
  for (std::size_t i = 0; i < angles.size(); ++i) {
    const double nx = std::cos(angles[i]), ny = std::sin(angles[i]);
    double m = -INFINITY;
    for (const auto& v : w.vertices) m = std::max(m, v.x * nx + v.y * ny);
    if (tau[i] - m > 1e-9 * scale)
      throw ConstraintError("tension table is not convex: a sampled direction does not support the Wulff shape");
  }
  return w;
}

inline WulffShape wulffShape(const TensionTable& t) { return wulffShape(t.angles(), t.values()); }

/// Unit-area copy.
inline WulffShape unitWulff(const WulffShape& w) { return w.scaled(1.0 / std::sqrt(w.area())); }

/// Boundary integral of tau(normal) over the unit-area Wulff shape, by
/// summing along the polygon edges with the original tension values.
inline double wulffFunctional(const WulffShape& w) {
  const auto u = unitWulff(w);
  const double k = 1.0 / std::sqrt(w.area());
  double s = 0.0;
  for (std::size_t i = 0; i < u.vertices.size(); ++i) {
    const auto& p = u.vertices[i];
    const auto& q = u.vertices[(i + 1) % u.vertices.size()];
    s += (u.edgeTau[i] / k) * std::hypot(q.x - p.x, q.y - p.y);
  }
  return s;
}

inline nlohmann::json wulffJson(const WulffShape& w) {
  nlohmann::json j;
  j["area"] = w.area();
  auto& vs = j["vertices"] = nlohmann::json::array();
  for (const auto& v : w.vertices) vs.push_back({v.x, v.y});
  if (!w.vertices.empty()) vs.push_back({w.vertices.front().x, w.vertices.front().y});
  return j;
}

/// tau + tau'' at table node i by the periodic second difference (uniform grid).
inline double stiffness(const TensionTable& t, std::size_t i) {
  const std::size_t m = t.entries.size();
  const double h = 2 * std::numbers::pi / static_cast<double>(m);
  const double a = t.entries[(i + m - 1) % m].tau, b = t.entries[i].tau, c = t.entries[(i + 1) % m].tau;
  return b + (a - 2 * b + c) / (h * h);
}

inline double stiffness(const std::function<double(double)>& tau, double theta, double h = 1e-3) {
  return tau(theta) + (tau(theta + h) - 2 * tau(theta) + tau(theta - h)) / (h * h);
}

struct MidpointDrop {
  double value = 0.0;  // leading order
  double lo = 0.0;     // value (1 - d^2)
  double hi = 0.0;     // value (1 + d^2)
};

/// Vertical distance between the midpoint of a chord of length d at angle
/// theta on the unit Wulff boundary and the boundary, at leading order.
inline MidpointDrop wulffMidpointDrop(double d, double theta, double tau, double tauSecond, double w1) {
  const double stiff = tau + tauSecond;
  if (!(stiff > 0)) throw DomainError("invalid curvature: tau + tau'' must be positive");
  if (!(d > 0)) throw DomainError("chord length must be positive");
  if (theta < 0 || theta > std::numbers::pi / 4 + 1e-15) throw DomainError("theta must lie in [0, pi/4]");
  MidpointDrop m;
  m.value = w1 * d * d / (16.0 * stiff * std::cos(theta));
  m.lo = m.value * (1 - d * d);
  m.hi = m.value * (1 + d * d);
  return m;
}

/// Same quantity measured on a polygon: the chord of length d parallel to
/// angle theta cut from the top side of the shape.
inline double measuredMidpointDrop(const WulffShape& w, double d, double theta) {
  const double nx = -std::sin(theta), ny = std::cos(theta), tx = std::cos(theta), ty = std::sin(theta);
  double h = -INFINITY;
  for (const auto& v : w.vertices) h = std::max(h, v.x * nx + v.y * ny);
  auto chord = [&](double t, Vec2& a, Vec2& b) {
    // Intersect the line {v . n = h - t} with the polygon.
    double smin = INFINITY, smax = -INFINITY;
    for (std::size_t i = 0; i < w.vertices.size(); ++i) {
      const auto& p = w.vertices[i];
      const auto& q = w.vertices[(i + 1) % w.vertices.size()];
      const double fp = p.x * nx + p.y * ny - (h - t), fq = q.x * nx + q.y * ny - (h - t);
      if ((fp <= 0 && fq >= 0) || (fp >= 0 && fq <= 0)) {
        if (fp == fq) continue;
        const double u = fp / (fp - fq);
        const Vec2 X{p.x + u * (q.x - p.x), p.y + u * (q.y - p.y)};
        const double s = X.x * tx + X.y * ty;
        if (s < smin) {
          smin = s;
          a = X;
        }
        if (s > smax) {
          smax = s;
          b = X;
        }
      }
    }
    return smax - smin;
  };
  Vec2 a, b;
  double lo = 0.0, hi = 0.0;
  for (const auto& v : w.vertices) hi = std::max(hi, h - (v.x * nx + v.y * ny));
  if (chord(hi * 0.5, a, b) < d) throw DomainError("chord longer than the shape allows");
  hi *= 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chord(mid, a, b) < d ? lo : hi) = mid;
  }
  chord(hi, a, b);
  const Vec2 X{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return w.topAt(X.x) - X.y;
}

struct GrowthGadget {
  double Y = 0.0;
  double sigma2 = 0.0;
};

/// Target depth Y and Gaussian variance sigma^2 of the growth gadget.
inline GrowthGadget growthGadgetParams(double Nn, double a, double theta, double tau, double tauSecond, double L) {
  const double stiff = tau + tauSecond;
  if (!(stiff > 0)) throw DomainError("invalid curvature: tau + tau'' must be positive");
  if (!(Nn > 0) || !(a > 0) || !(L > 1)) throw DomainError("growth gadget parameters must be positive");
  if (theta < 0 || theta > std::numbers::pi / 4 + 1e-15) throw DomainError("theta must lie in [0, pi/4]");
  const double lg = std::log(L), c3 = std::pow(std::cos(theta), 3);
  GrowthGadget g;
  g.Y = -std::cbrt(Nn) * std::pow(lg, 2 * a) / (8 * stiff * c3);
  g.sigma2 = std::pow(Nn, 2.0 / 3.0) * std::pow(lg, a) / (4 * stiff * c3);
  return g;
}

inline double gMu(double ell, double theta, double mu, double Nn, double tau, double tauSecond) {
  (void)theta;
  const double stiff = tau + tauSecond;
  if (!(stiff > 0)) throw DomainError("invalid curvature: tau + tau'' must be positive");
  return -tau * ell + ell * ell * ell * mu * mu / (24 * stiff * Nn * Nn);
}

inline double ellN(double w1, double Nn, double delta, double L) { return w1 * Nn / (2 * (1 - delta) * L); }

inline double kappaNB(double Nn, double b, double L) { return std::cbrt(Nn) * std::pow(std::log(L), b) / L; }

}  // namespace zgff

#endif  // ZGFF_WULFF_HPP
