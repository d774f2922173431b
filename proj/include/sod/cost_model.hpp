#pragma once

#include "sod/demand.hpp"

namespace sod {

// Monetary weights of the generalized cost. Access and waiting factors are
// multiples of the riding value of time; the last two are operator rates.
struct CostParams {
  double value_of_time = 0.0;      // $/h
  double access_factor = 0.0;
  double waiting_factor = 0.0;
  double operating_cost_km = 0.0;  // $/km
  double vehicle_cost_h = 0.0;     // $/veh-h

  void validate() const;  // all fields must be > 0
};

// Hourly cost components of one corridor design. riding_y, operating_y and
// the detour share of `vehicle` vanish when the flexible portion is empty.
struct CostBreakdown {
  double access = 0.0;
  double waiting = 0.0;
  double riding_x = 0.0;
  double riding_y = 0.0;
  double operating_x = 0.0;
  double operating_y = 0.0;
  double vehicle = 0.0;
  double total = 0.0;

  double user() const { return access + waiting + riding_x + riding_y; }
  double operator_cost() const { return operating_x + operating_y + vehicle; }
};

enum class RouteForm { Fixed, Hybrid, Flexible };

const char* route_form_name(RouteForm form);

struct RouteFormResult {
  RouteForm form = RouteForm::Fixed;
  // Mean detour is zero: lateral pickups cost nothing, so the flexible form
  // wins trivially and the access/detour trade-off is undefined.
  bool degenerate_detour = false;
};

struct FlexiblePortion {
  double x_f_km = 0.0;
  RouteForm form = RouteForm::Fixed;
  bool degenerate_detour = false;
};

// Fixed-headway model. x_f is the length of the on-demand (flexible) portion
// measured from the far end of the route; headway_h the constant dispatch
// interval.

// Lateral detour time added to one vehicle cycle.
double detour_time(const Corridor&, const DemandDistribution&, double headway_h, double x_f_km);

// Vehicles needed to hold the headway: round-trip cycle time over headway.
double fleet_size(const Corridor&, const DemandDistribution&, double headway_h, double x_f_km);

CostBreakdown cost_breakdown(const Corridor&, const DemandDistribution&, const CostParams&,
                             double headway_h, double x_f_km);
double total_cost(const Corridor&, const DemandDistribution&, const CostParams&,
                  double headway_h, double x_f_km);

// d(total)/d(x_f); proportional to the local density, so it vanishes on empty
// stretches of an empirical profile.
double cost_derivative(const Corridor&, const DemandDistribution&, const CostParams&,
                       double headway_h, double x_f_km);

// Optimal route form from the access/detour ratio thresholds. Equality at a
// threshold resolves to the non-hybrid form.
RouteFormResult classify_route_form(const Corridor&, const DemandDistribution&,
                                    const CostParams&, double headway_h);

// Demand best served on demand, counted from the far end. Unclamped: may be
// negative or exceed the corridor total; clamping happens in
// optimal_flexible_portion via the classifier. Independent of the demand
// profile shape.
double optimal_flexible_demand(const Corridor&, const CostParams&, double headway_h);

FlexiblePortion optimal_flexible_portion(const Corridor&, const DemandDistribution&,
                                         const CostParams&, double headway_h);

// Fleet size at the optimal flexible portion of a hybrid route; independent
// of the demand profile shape.
double optimal_fleet_size(const Corridor&, const CostParams&, double headway_h);

// Fleets are real-valued throughout the model (fractional vehicles stand for
// interlining across routes); this rounding is for reporting only.
double fleet_ceiling(double fleet);

}  // namespace sod
