#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "greyhull/key_params.hpp"
#include "greyhull/vessel_config.hpp"

namespace greyhull {

/// Physical-consistency requirements on the fitted parameters, discretized on
/// fixed speed and inflow-angle grids.
struct ConstraintSet {
  std::vector<double> speed_grid;   // m/s, strictly increasing
  std::vector<double> inflow_grid;  // rad, strictly increasing

  double resistance_min = 0.0;       // N
  double resistance_max = 80000.0;   // N
  double monotonicity_margin = 0.0;  // dR/du must exceed this, N s/m
  double lateral_thrust_ratio = 0.05;
  double lift_bound = 1.0;
  double drag_min = 0.0;
  double drag_max = 1.5;
  double drag_at_zero_max = 0.05;

  /// 64-point speed grid on [0, u_max] and 64-point inflow grid on
  /// [-inflow_max, inflow_max].
  static ConstraintSet standard(double u_max, std::size_t speed_points = 64,
                                std::size_t inflow_points = 64,
                                double inflow_max = 0.6108652381980153);

  /// Throws UsageError if a grid is empty or not strictly increasing.
  void validate() const;
};

enum class ConstraintKind {
  ResistanceLower,   // R(u) >= R_min
  ResistanceUpper,   // R(u) <= R_max
  ResistanceSlope,   // dR/du > margin
  LateralThrust,     // |Y_n| <= k |X_n|
  LiftSign,          // c_L(a) <= 0 for a < 0, c_L(a) >= 0 for a >= 0
  LiftMagnitude,     // |c_L(a)| <= 1
  DragLower,         // c_D(a) >= 0
  DragUpper,         // c_D(a) <= 1.5
  DragAtZero,        // c_D(0) <= 0.05
  ParameterBound,    // b_l <= p <= b_u
};

const char* to_string(ConstraintKind k);

/// One scalar constraint evaluated at a grid point. `violation` is in physical
/// units (N, N s/m, or dimensionless), never negative.
struct ConstraintValue {
  ConstraintKind kind;
  double at = 0.0;  // grid abscissa (u or a_r); 0 where not applicable
  double violation = 0.0;
  double scale = 1.0;  // normalizer for feasibility tolerances

  double normalized() const { return violation / scale; }
};

/// All constraints happen to be linear in p: coeffs . p <= bound.
struct LinearConstraint {
  ConstraintKind kind;
  double at = 0.0;
  std::array<double, kNumKeyParams> coeffs{};
  double bound = 0.0;
  double scale = 1.0;

  double evaluate(const KeyParams& p) const;  // coeffs . p - bound
  bool is_trivial() const;                    // zero row with bound >= 0
};

/// Direct evaluation of every scalar constraint through the force model.
std::vector<ConstraintValue> evaluate_constraints(const KeyParams& p, const ConstraintSet& cs,
                                                  const VesselConfig& config);

/// The same constraints, in the same order, as rows of a linear system.
std::vector<LinearConstraint> linear_constraints(const ConstraintSet& cs,
                                                 const VesselConfig& config);

double max_normalized_violation(const std::vector<ConstraintValue>& values);

}  // namespace greyhull
