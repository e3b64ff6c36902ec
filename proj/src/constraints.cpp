#include "greyhull/constraints.hpp"

#include <algorithm>
#include <cmath>

#include "greyhull/errors.hpp"
#include "greyhull/forces.hpp"

namespace greyhull {

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  if (n == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

void check_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw UsageError(std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw UsageError(std::string(name) + " grid has a non-finite point");
    if (i > 0 && !(g[i] > g[i - 1]))
      throw UsageError(std::string(name) + " grid is not strictly increasing");
  }
}

// |X_n| at bollard pull and full rpm; reference for the lateral-thrust band.
double reference_thrust(const VesselConfig& c) {
  const double x = std::abs(propeller_thrust(0.0, c.n_max, c));
  return x > 0.0 ? x : 1.0;
}

double slope_scale(const ConstraintSet& cs) {
  const double u_top = std::max(cs.speed_grid.back(), 1.0);
  return cs.resistance_max / u_top;
}

}  // namespace

ConstraintSet ConstraintSet::standard(double u_max, std::size_t speed_points,
                                      std::size_t inflow_points, double inflow_max) {
  if (!(u_max > 0.0)) throw UsageError("constraint speed ceiling must be positive");
  ConstraintSet cs;
  cs.speed_grid = linspace(0.0, u_max, speed_points);
  cs.inflow_grid = linspace(-inflow_max, inflow_max, inflow_points);
  return cs;
}

void ConstraintSet::validate() const {
  check_grid(speed_grid, "speed");
  check_grid(inflow_grid, "inflow");
  if (!(resistance_max > resistance_min)) throw UsageError("resistance bounds are inverted");
  if (!(lateral_thrust_ratio >= 0.0)) throw UsageError("lateral thrust ratio must be >= 0");
  if (!(lift_bound > 0.0)) throw UsageError("lift bound must be positive");
  if (!(drag_max > drag_min)) throw UsageError("drag bounds are inverted");
}

const char* to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::ResistanceLower: return "resistance_lower";
    case ConstraintKind::ResistanceUpper: return "resistance_upper";
    case ConstraintKind::ResistanceSlope: return "resistance_slope";
    case ConstraintKind::LateralThrust: return "lateral_thrust";
    case ConstraintKind::LiftSign: return "lift_sign";
    case ConstraintKind::LiftMagnitude: return "lift_magnitude";
    case ConstraintKind::DragLower: return "drag_lower";
    case ConstraintKind::DragUpper: return "drag_upper";
    case ConstraintKind::DragAtZero: return "drag_at_zero";
    case ConstraintKind::ParameterBound: return "parameter_bound";
  }
  return "unknown";
}

double LinearConstraint::evaluate(const KeyParams& p) const {
  double s = 0.0;
  for (std::size_t j = 0; j < kNumKeyParams; ++j) s += coeffs[j] * p[j];
  return s - bound;
}

bool LinearConstraint::is_trivial() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; }) &&
         bound >= 0.0;
}

std::vector<ConstraintValue> evaluate_constraints(const KeyParams& p, const ConstraintSet& cs,
                                                  const VesselConfig& config) {
  cs.validate();
  std::vector<ConstraintValue> out;
  out.reserve(3 * cs.speed_grid.size() + 4 * cs.inflow_grid.size() + 3);
  const auto push = [&](ConstraintKind k, double at, double excess, double scale) {
    out.push_back({k, at, std::max(0.0, excess), scale});
  };

  const double r_scale = cs.resistance_max;
  const double s_scale = slope_scale(cs);
  for (double u : cs.speed_grid) {
    const double R = resistance(u, p);
    push(ConstraintKind::ResistanceLower, u, cs.resistance_min - R, r_scale);
    push(ConstraintKind::ResistanceUpper, u, R - cs.resistance_max, r_scale);
    push(ConstraintKind::ResistanceSlope, u, cs.monotonicity_margin - resistance_slope(u, p),
         s_scale);
  }

  // Lateral propeller force at the bollard-pull reference state, oriented so the
  // band reads |Y_n| <= k |X_n|.
  VesselState ref;
  ref.n = config.n_max;
  const ForceTriple prop = propeller_forces(ref, p, config);
  double x_ref = std::abs(prop.X);
  double y_ref = prop.X < 0.0 ? -prop.Y : prop.Y;
  if (x_ref == 0.0) {
    x_ref = 1.0;
    y_ref = p[0];
  }
  push(ConstraintKind::LateralThrust, 0.0, y_ref - cs.lateral_thrust_ratio * x_ref, x_ref);
  push(ConstraintKind::LateralThrust, 0.0, -y_ref - cs.lateral_thrust_ratio * x_ref, x_ref);

  for (double a : cs.inflow_grid) {
    const RudderCoefficients k = rudder_coefficients(a, p);
    if (a < 0.0) {
      push(ConstraintKind::LiftSign, a, k.lift, 1.0);
      push(ConstraintKind::LiftMagnitude, a, -k.lift - cs.lift_bound, 1.0);
    } else {
      push(ConstraintKind::LiftSign, a, -k.lift, 1.0);
      push(ConstraintKind::LiftMagnitude, a, k.lift - cs.lift_bound, 1.0);
    }
    push(ConstraintKind::DragLower, a, cs.drag_min - k.drag, 1.0);
    push(ConstraintKind::DragUpper, a, k.drag - cs.drag_max, 1.0);
  }
  push(ConstraintKind::DragAtZero, 0.0, rudder_coefficients(0.0, p).drag - cs.drag_at_zero_max,
       1.0);
  return out;
}

std::vector<LinearConstraint> linear_constraints(const ConstraintSet& cs,
                                                 const VesselConfig& config) {
  cs.validate();
  std::vector<LinearConstraint> rows;
  const auto row = [&](ConstraintKind k, double at, std::array<double, kNumKeyParams> c,
                       double bound, double scale) { rows.push_back({k, at, c, bound, scale}); };

  const double r_scale = cs.resistance_max;
  const double s_scale = slope_scale(cs);
  for (double u : cs.speed_grid) {
    const double u2 = u * u;
    const double u3 = u2 * u;
    row(ConstraintKind::ResistanceLower, u, {0, -u, -u2, -u3, 0, 0, 0, 0, 0, 0, 0},
        -cs.resistance_min, r_scale);
    row(ConstraintKind::ResistanceUpper, u, {0, u, u2, u3, 0, 0, 0, 0, 0, 0, 0},
        cs.resistance_max, r_scale);
    row(ConstraintKind::ResistanceSlope, u, {0, -1.0, -2.0 * u, -3.0 * u2, 0, 0, 0, 0, 0, 0, 0},
        -cs.monotonicity_margin, s_scale);
  }

  const double x_ref = reference_thrust(config);
  row(ConstraintKind::LateralThrust, 0.0, {x_ref, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      cs.lateral_thrust_ratio * x_ref, x_ref);
  row(ConstraintKind::LateralThrust, 0.0, {-x_ref, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0},
      cs.lateral_thrust_ratio * x_ref, x_ref);

  for (double a : cs.inflow_grid) {
    const double a2 = a * a;
    const double a3 = a2 * a;
    const std::array<double, kNumKeyParams> lift{0, 0, 0, 0, 1.0, a, a2, a3, 0, 0, 0};
    std::array<double, kNumKeyParams> neg_lift{};
    for (std::size_t j = 0; j < kNumKeyParams; ++j) neg_lift[j] = -lift[j];
    if (a < 0.0) {
      row(ConstraintKind::LiftSign, a, lift, 0.0, 1.0);
      row(ConstraintKind::LiftMagnitude, a, neg_lift, cs.lift_bound, 1.0);
    } else {
      row(ConstraintKind::LiftSign, a, neg_lift, 0.0, 1.0);
      row(ConstraintKind::LiftMagnitude, a, lift, cs.lift_bound, 1.0);
    }
    row(ConstraintKind::DragLower, a, {0, 0, 0, 0, 0, 0, 0, 0, -1.0, -a, -a2}, -cs.drag_min, 1.0);
    row(ConstraintKind::DragUpper, a, {0, 0, 0, 0, 0, 0, 0, 0, 1.0, a, a2}, cs.drag_max, 1.0);
  }
  row(ConstraintKind::DragAtZero, 0.0, {0, 0, 0, 0, 0, 0, 0, 0, 1.0, 0, 0}, cs.drag_at_zero_max,
      1.0);
  return rows;
}

double max_normalized_violation(const std::vector<ConstraintValue>& values) {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, v.normalized());
  return m;
}

}  // namespace greyhull
