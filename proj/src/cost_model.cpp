#include "sod/cost_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sod {

namespace {

void check_inputs(const Corridor& corridor, const DemandDistribution& demand) {
  corridor.validate();
  if (std::abs(corridor.length_km - demand.length_km()) > 1e-9 * corridor.length_km)
    throw std::invalid_argument("corridor and demand route lengths disagree");
}

void check_headway(double headway_h) {
  if (!(headway_h > 0.0)) throw std::domain_error("headway must be > 0 h");
}

}  // namespace

void CostParams::validate() const {
  if (!(value_of_time > 0.0)) throw std::invalid_argument("costs: value_of_time must be > 0");
  if (!(access_factor > 0.0)) throw std::invalid_argument("costs: access_factor must be > 0");
  if (!(waiting_factor > 0.0)) throw std::invalid_argument("costs: waiting_factor must be > 0");
  if (!(operating_cost_km > 0.0))
    throw std::invalid_argument("costs: operating_cost_km must be > 0");
  if (!(vehicle_cost_h > 0.0)) throw std::invalid_argument("costs: vehicle_cost_h must be > 0");
}

const char* route_form_name(RouteForm form) {
  switch (form) {
    case RouteForm::Fixed: return "fixed";
    case RouteForm::Hybrid: return "hybrid";
    case RouteForm::Flexible: return "flexible";
  }
  return "?";
}

double detour_time(const Corridor& corridor, const DemandDistribution& demand,
                   double headway_h, double x_f_km) {
  check_inputs(corridor, demand);
  check_headway(headway_h);
  return headway_h * corridor.cross.detour_km / corridor.speed_kmh * demand.cumulative(x_f_km);
}

double fleet_size(const Corridor& corridor, const DemandDistribution& demand,
                  double headway_h, double x_f_km) {
  check_inputs(corridor, demand);
  check_headway(headway_h);
  const double cycle = corridor.length_km / corridor.speed_kmh +
                       detour_time(corridor, demand, headway_h, x_f_km) + corridor.layover_h;
  return 2.0 / headway_h * cycle;
}

CostBreakdown cost_breakdown(const Corridor& corridor, const DemandDistribution& demand,
                             const CostParams& params, double headway_h, double x_f_km) {
  check_inputs(corridor, demand);
  params.validate();
  check_headway(headway_h);

  const double value = params.value_of_time;
  const double speed = corridor.speed_kmh;
  const double detour = corridor.cross.detour_km;
  const double flexible_demand = demand.cumulative(x_f_km);
  const double total_demand = demand.total_pax_h();

  CostBreakdown out;
  out.access = value * params.access_factor * corridor.cross.access_time_h *
               (total_demand - flexible_demand);
  out.waiting = value * params.waiting_factor * total_demand * headway_h / 2.0;
  out.riding_x = value / speed * demand.riding_integral();
  out.riding_y = value * headway_h * detour / (2.0 * speed) * flexible_demand * flexible_demand;
  out.operating_x = params.operating_cost_km * corridor.length_km / headway_h;
  out.operating_y = params.operating_cost_km * detour * flexible_demand;
  out.vehicle = params.vehicle_cost_h * fleet_size(corridor, demand, headway_h, x_f_km);
  out.total = out.access + out.waiting + out.riding_x + out.riding_y + out.operating_x +
              out.operating_y + out.vehicle;
  return out;
}

double total_cost(const Corridor& corridor, const DemandDistribution& demand,
                  const CostParams& params, double headway_h, double x_f_km) {
  return cost_breakdown(corridor, demand, params, headway_h, x_f_km).total;
}

double cost_derivative(const Corridor& corridor, const DemandDistribution& demand,
                       const CostParams& params, double headway_h, double x_f_km) {
  check_inputs(corridor, demand);
  params.validate();
  check_headway(headway_h);
  const double detour = corridor.cross.detour_km;
  const double speed = corridor.speed_kmh;
  const double marginal =
      -params.value_of_time * params.access_factor * corridor.cross.access_time_h +
      params.value_of_time * headway_h * detour / speed * demand.cumulative(x_f_km) +
      params.operating_cost_km * detour + 2.0 * params.vehicle_cost_h * detour / speed;
  return demand.density(x_f_km) * marginal;
}

RouteFormResult classify_route_form(const Corridor& corridor, const DemandDistribution& demand,
                                    const CostParams& params, double headway_h) {
  check_inputs(corridor, demand);
  params.validate();
  check_headway(headway_h);
  if (!(demand.total_pax_h() > 0.0))
    throw std::domain_error("classify_route_form: total demand must be > 0");
  if (corridor.cross.detour_km == 0.0) return {RouteForm::Flexible, true};

  const double ratio = corridor.cross.access_time_h / corridor.cross.detour_km;
  const double value_of_access = params.value_of_time * params.access_factor;
  const double fixed_threshold = params.operating_cost_km / value_of_access +
                                 2.0 * params.vehicle_cost_h / (value_of_access * corridor.speed_kmh);
  const double flexible_threshold =
      headway_h * demand.total_pax_h() / (params.access_factor * corridor.speed_kmh) +
      fixed_threshold;

  if (ratio <= fixed_threshold) return {RouteForm::Fixed, false};
  if (ratio >= flexible_threshold) return {RouteForm::Flexible, false};
  return {RouteForm::Hybrid, false};
}

double optimal_flexible_demand(const Corridor& corridor, const CostParams& params,
                               double headway_h) {
  corridor.validate();
  params.validate();
  check_headway(headway_h);
  if (corridor.cross.detour_km == 0.0)
    throw std::domain_error("optimal_flexible_demand: mean detour must be > 0");
  const double speed = corridor.speed_kmh;
  return 1.0 / headway_h *
         (params.access_factor * speed * corridor.cross.access_time_h / corridor.cross.detour_km -
          params.operating_cost_km / params.value_of_time * speed -
          2.0 * params.vehicle_cost_h / params.value_of_time);
}

FlexiblePortion optimal_flexible_portion(const Corridor& corridor,
                                         const DemandDistribution& demand,
                                         const CostParams& params, double headway_h) {
  check_inputs(corridor, demand);
  const RouteFormResult cls = classify_route_form(corridor, demand, params, headway_h);
  switch (cls.form) {
    case RouteForm::Fixed:
      return {0.0, cls.form, cls.degenerate_detour};
    case RouteForm::Flexible:
      return {corridor.length_km, cls.form, cls.degenerate_detour};
    case RouteForm::Hybrid:
      break;
  }
  const double threshold = optimal_flexible_demand(corridor, params, headway_h);
  return {demand.inverse_cumulative(std::clamp(threshold, 0.0, demand.total_pax_h())), cls.form,
          cls.degenerate_detour};
}

double optimal_fleet_size(const Corridor& corridor, const CostParams& params, double headway_h) {
  corridor.validate();
  params.validate();
  check_headway(headway_h);
  const double speed = corridor.speed_kmh;
  const double detour = corridor.cross.detour_km;
  const double cycle = corridor.length_km / speed +
                       params.access_factor * corridor.cross.access_time_h -
                       params.operating_cost_km / params.value_of_time * detour -
                       2.0 * params.vehicle_cost_h / params.value_of_time * detour / speed +
                       corridor.layover_h;
  if (cycle < 0.0)
    throw std::domain_error(
        "optimal_fleet_size: parameters yield a negative cycle time (inconsistent inputs)");
  return 2.0 / headway_h * cycle;
}

double fleet_ceiling(double fleet) {
  // Tolerate float dust just below an integer.
  return std::ceil(fleet - 1e-9);
}

}  // namespace sod
