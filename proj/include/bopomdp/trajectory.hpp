#pragma once

#include <Eigen/Dense>
#include <vector>

namespace bopomdp {

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;  // radians, (-pi, pi]

  Eigen::Vector2d position() const { return {x, y}; }
};

// Maps any angle into (-pi, pi].
double wrap_angle(double a);

// Planar cubic x(u) = beta * [1, u, u^2, u^3]^T for u in [0, 1].
// `length` is the requested arc length the curve was normalized to.
struct SplineParams {
  Eigen::Matrix<double, 2, 4> beta = Eigen::Matrix<double, 2, 4>::Zero();
  double length = 1.0;
};

struct ActionTemplate {
  int id = 0;
  double end_heading_offset = 0.0;  // radians relative to the start heading
  double curvature_shape = 1.0;     // end/start tangent magnitude ratio
};

// Five templates with end-heading offsets -60, -25, 0, +25, +60 degrees,
// ids 0..4 in ascending offset order.
std::vector<ActionTemplate> default_action_set();

// Builds templates from arbitrary offsets (radians); ids follow ascending
// offset order.
std::vector<ActionTemplate> make_action_set(std::vector<double> offsets_rad,
                                            double curvature_shape = 1.0);

// Fits a cubic that starts at `pose` tangent to its heading, ends with the
// template's heading offset, and is scaled so its arc length matches
// `length`. Throws NormalizationFailure if the tangent scaling does not
// converge.
SplineParams build_spline(const ActionTemplate& tmpl, const Pose& pose,
                          double length);

Eigen::Vector2d eval_spline(const SplineParams& params, double u);
Eigen::Vector2d spline_derivative(const SplineParams& params, double u);

// 32-point Gauss-Legendre quadrature of the tangent speed.
double arc_length(const SplineParams& params);
double cumulative_arc_length(const SplineParams& params, double u);

// M points at arc-length fractions (i+1)/M of the nominal length, start
// excluded, end included. The final point is pinned to u = 1.
std::vector<Eigen::Vector2d> sample_points(const SplineParams& params, int M);

// Endpoint position plus the heading of the end tangent.
Pose end_pose(const SplineParams& params);

}  // namespace bopomdp
