#include "bopomdp/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bopomdp/errors.hpp"

namespace bopomdp {

double wrap_angle(double a) {
  double r = std::fmod(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  if (r > std::numbers::pi) r -= 2.0 * std::numbers::pi;
  return r;
}

namespace {

struct QuadTable {
  std::array<double, 32> nodes{};    // on [-1, 1]
  std::array<double, 32> weights{};
};

QuadTable compute_gauss_legendre32() {
  constexpr int n = 32;
  QuadTable t;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    t.nodes[i] = -x;  // ascending order
    t.nodes[n - 1 - i] = x;
    t.weights[i] = w;
    t.weights[n - 1 - i] = w;
  }
  return t;
}

const QuadTable& gl32() {
  static const QuadTable t = compute_gauss_legendre32();
  return t;
}

double speed_at(const SplineParams& p, double u) {
  return (p.beta * Eigen::Vector4d(0.0, 1.0, 2.0 * u, 3.0 * u * u)).norm();
}

SplineParams from_hermite(const Eigen::Vector2d& p0, const Eigen::Vector2d& t0,
                          const Eigen::Vector2d& p1, const Eigen::Vector2d& t1,
                          double length) {
  SplineParams sp;
  sp.length = length;
  sp.beta.col(0) = p0;
  sp.beta.col(1) = t0;
  sp.beta.col(2) = 3.0 * (p1 - p0) - 2.0 * t0 - t1;
  sp.beta.col(3) = 2.0 * (p0 - p1) + t0 + t1;
  return sp;
}

}  // namespace

std::vector<ActionTemplate> default_action_set() {
  constexpr double deg = std::numbers::pi / 180.0;
  return make_action_set({-60.0 * deg, -25.0 * deg, 0.0, 25.0 * deg, 60.0 * deg});
}

std::vector<ActionTemplate> make_action_set(std::vector<double> offsets_rad,
                                            double curvature_shape) {
  std::sort(offsets_rad.begin(), offsets_rad.end());
  std::vector<ActionTemplate> out;
  out.reserve(offsets_rad.size());
  for (std::size_t i = 0; i < offsets_rad.size(); ++i) {
    out.push_back(ActionTemplate{static_cast<int>(i), offsets_rad[i], curvature_shape});
  }
  return out;
}

double arc_length(const SplineParams& params) {
  const QuadTable& q = gl32();
  double s = 0.0;
  for (int i = 0; i < 32; ++i) {
    double u = 0.5 * (q.nodes[i] + 1.0);
    s += 0.5 * q.weights[i] * speed_at(params, u);
  }
  return s;
}

double cumulative_arc_length(const SplineParams& params, double u) {
  if (u <= 0.0) return 0.0;
  const QuadTable& q = gl32();
  double s = 0.0;
  for (int i = 0; i < 32; ++i) {
    double t = 0.5 * u * (q.nodes[i] + 1.0);
    s += 0.5 * u * q.weights[i] * speed_at(params, t);
  }
  return s;
}

SplineParams build_spline(const ActionTemplate& tmpl, const Pose& pose,
                          double length) {
  if (!(length > 0.0)) throw std::invalid_argument("spline length must be positive");
  if (!(tmpl.curvature_shape > 0.0))
    throw std::invalid_argument("curvature_shape must be positive");

  const Eigen::Vector2d p0(pose.x, pose.y);
  const double h0 = pose.heading;
  const double dh = tmpl.end_heading_offset;
  const Eigen::Vector2d d0(std::cos(h0), std::sin(h0));
  const Eigen::Vector2d d1(std::cos(h0 + dh), std::sin(h0 + dh));

  // Endpoint on the constant-turn-rate geometry: a circular arc of the same
  // length and total turn has its chord along the half-offset direction.
  const double half = 0.5 * dh;
  const double sinc = std::abs(half) < 1e-9 ? 1.0 : std::sin(half) / half;
  const double chord = length * sinc;
  const Eigen::Vector2d p1 =
      p0 + chord * Eigen::Vector2d(std::cos(h0 + half), std::sin(h0 + half));

  const double s = tmpl.curvature_shape;
  const double m0 = 2.0 / (1.0 + s);
  const double m1 = 2.0 * s / (1.0 + s);
  auto make = [&](double scale) {
    return from_hermite(p0, scale * length * m0 * d0, p1, scale * length * m1 * d1,
                        length);
  };

  // Secant iteration on the common tangent-magnitude scale. The contract only
  // needs 1e-4 relative, but we polish to near machine precision so the
  // construction commutes with rigid motions to within 1e-9.
  const double tight = 1e-12 * length;
  double x0 = 1.0;
  SplineParams sp = make(x0);
  double g0 = arc_length(sp) - length;
  if (std::abs(g0) <= tight) return sp;

  double x1 = x0 * length / (length + g0);
  if (!(x1 > 0.0) || x1 == x0) x1 = 0.9 * x0;

  double best_err = std::abs(g0);
  SplineParams best = sp;
  for (int it = 0; it < 50; ++it) {
    sp = make(x1);
    double g1 = arc_length(sp) - length;
    if (std::abs(g1) < best_err) {
      best_err = std::abs(g1);
      best = sp;
    }
    if (std::abs(g1) <= tight) return sp;
    double denom = g1 - g0;
    if (denom == 0.0) break;
    double x2 = x1 - g1 * (x1 - x0) / denom;
    if (!std::isfinite(x2)) break;
    x2 = std::clamp(x2, 1e-3, 1e3);
    if (x2 == x1) break;
    x0 = x1;
    g0 = g1;
    x1 = x2;
  }
  if (best_err <= 1e-4 * length) return best;
  throw NormalizationFailure("arc-length normalization did not converge");
}

Eigen::Vector2d eval_spline(const SplineParams& params, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::out_of_range("spline parameter outside [0, 1]");
  return params.beta * Eigen::Vector4d(1.0, u, u * u, u * u * u);
}

Eigen::Vector2d spline_derivative(const SplineParams& params, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw std::out_of_range("spline parameter outside [0, 1]");
  return params.beta * Eigen::Vector4d(0.0, 1.0, 2.0 * u, 3.0 * u * u);
}

std::vector<Eigen::Vector2d> sample_points(const SplineParams& params, int M) {
  if (M < 1) throw std::invalid_argument("sample count must be at least 1");
  const double total = arc_length(params);
  const double tol = 1e-6 * params.length;

  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(M));
  double lo_prev = 0.0;
  for (int i = 0; i < M; ++i) {
    if (i == M - 1) {
      pts.push_back(eval_spline(params, 1.0));
      break;
    }
    const double target = (i + 1) * params.length / M;
    if (target >= total) {
      pts.push_back(eval_spline(params, 1.0));
      lo_prev = 1.0;
      continue;
    }
    double lo = lo_prev, hi = 1.0;
    double u = std::clamp(target / total, lo, hi);
    for (int it = 0; it < 80; ++it) {
      const double f = cumulative_arc_length(params, u) - target;
      if (std::abs(f) <= tol) break;
      if (f > 0.0) hi = u; else lo = u;
      const double sp = speed_at(params, u);
      double un = sp > 1e-12 ? u - f / sp : 0.5 * (lo + hi);
      u = (un > lo && un < hi) ? un : 0.5 * (lo + hi);
    }
    pts.push_back(eval_spline(params, u));
    lo_prev = u;
  }
  return pts;
}

Pose end_pose(const SplineParams& params) {
  const Eigen::Vector2d d = spline_derivative(params, 1.0);
  if (d.norm() < 1e-12) throw DegenerateTangent("end tangent vanishes");
  const Eigen::Vector2d p = eval_spline(params, 1.0);
  return Pose{p.x(), p.y(), wrap_angle(std::atan2(d.y(), d.x()))};
}

}  // namespace bopomdp
