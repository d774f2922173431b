#include "sod/joint_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sod/csv.hpp"
#include "sod/errors.hpp"
#include "sod/numeric.hpp"
#include "sod/parallel.hpp"

namespace sod {

namespace {

void check_pair(const Corridor& corridor, const DemandDistribution& demand) {
  corridor.validate();
  if (std::abs(corridor.length_km - demand.length_km()) > 1e-9 * corridor.length_km)
    throw std::invalid_argument("corridor and demand route lengths disagree");
}

CostParams effective_params(const CostParams& user_costs, const VehicleType& vehicle) {
  CostParams p = user_costs;
  p.operating_cost_km = vehicle.operating_cost_km;
  p.vehicle_cost_h = vehicle.vehicle_cost_h;
  return p;
}

// Fleet size minimizing cost at fixed x_f, before projection onto the
// capacity bound. The cost is strictly convex in the cycle slack
// u = fleet * speed / 2 - detour_km * F(x_f), so the minimizer is closed form.
double unconstrained_fleet(const Corridor& corridor, const DemandDistribution& demand,
                           const CostParams& user_costs, const VehicleType& vehicle,
                           double x_f_km) {
  const double speed = corridor.speed_kmh;
  const double span = corridor.length_km + corridor.layover_h * speed;
  const double flexible_demand = demand.cumulative(x_f_km);
  const double lateral = corridor.cross.detour_km * flexible_demand;
  const double headway_weight =
      user_costs.value_of_time * user_costs.waiting_factor * demand.total_pax_h() / 2.0 +
      user_costs.value_of_time * corridor.cross.detour_km * flexible_demand * flexible_demand /
          (2.0 * speed);
  const double slack_weight =
      vehicle.operating_cost_km * corridor.length_km / span + 2.0 * vehicle.vehicle_cost_h / speed;
  const double slack = headway_weight > 0.0 ? std::sqrt(headway_weight * span / slack_weight) : 0.0;
  return 2.0 * (slack + lateral) / speed;
}

}  // namespace

void VehicleType::validate() const {
  if (!(capacity > 0.0)) throw std::invalid_argument("vehicle '" + name + "': capacity must be > 0");
  if (!(operating_cost_km > 0.0))
    throw std::invalid_argument("vehicle '" + name + "': operating_cost_per_km must be > 0");
  if (!(vehicle_cost_h > 0.0))
    throw std::invalid_argument("vehicle '" + name + "': vehicle_cost_per_h must be > 0");
}

void CapacityPolicy::validate() const {
  if (!(buffer > 0.0 && buffer <= 1.0))
    throw std::invalid_argument("capacity buffer must be in (0, 1]");
}

double headway(const Corridor& corridor, const DemandDistribution& demand, double x_f_km,
               double fleet) {
  check_pair(corridor, demand);
  const double span = corridor.length_km + corridor.layover_h * corridor.speed_kmh;
  const double denom =
      fleet * corridor.speed_kmh / 2.0 - corridor.cross.detour_km * demand.cumulative(x_f_km);
  if (!(denom > 0.0))
    throw InfeasibleError("headway: fleet of " + format_double(fleet) +
                          " veh is too small to complete cycles at x_f = " +
                          format_double(x_f_km) + " km");
  return span / denom;
}

double fleet_lower_bound(const Corridor& corridor, const DemandDistribution& demand,
                         const CapacityPolicy& policy, const VehicleType& vehicle,
                         double x_f_km) {
  check_pair(corridor, demand);
  policy.validate();
  vehicle.validate();
  const double span = corridor.length_km + corridor.layover_h * corridor.speed_kmh;
  return 2.0 / corridor.speed_kmh *
         (demand.total_pax_h() / (policy.buffer * vehicle.capacity) * span +
          corridor.cross.detour_km * demand.cumulative(x_f_km));
}

CostBreakdown total_cost_variable(const Corridor& corridor, const DemandDistribution& demand,
                                  const CostParams& user_costs, const VehicleType& vehicle,
                                  double x_f_km, double fleet) {
  vehicle.validate();
  const double h = headway(corridor, demand, x_f_km, fleet);
  const CostParams params = effective_params(user_costs, vehicle);
  params.validate();

  const double value = params.value_of_time;
  const double speed = corridor.speed_kmh;
  const double detour = corridor.cross.detour_km;
  const double flexible_demand = demand.cumulative(x_f_km);

  CostBreakdown out;
  out.access = value * params.access_factor * corridor.cross.access_time_h *
               (demand.total_pax_h() - flexible_demand);
  out.waiting = value * params.waiting_factor * demand.total_pax_h() * h / 2.0;
  out.riding_x = value / speed * demand.riding_integral();
  out.riding_y = value * detour / (2.0 * speed) * flexible_demand * flexible_demand * h;
  out.operating_x = params.operating_cost_km * corridor.length_km / h;
  out.operating_y = params.operating_cost_km * detour * flexible_demand;
  out.vehicle = params.vehicle_cost_h * fleet;
  out.total = out.access + out.waiting + out.riding_x + out.riding_y + out.operating_x +
              out.operating_y + out.vehicle;
  return out;
}

ServiceMetrics service_metrics(const Corridor& corridor, const DemandDistribution& demand,
                               const DesignSolution& solution) {
  check_pair(corridor, demand);
  const double total = demand.total_pax_h();
  ServiceMetrics m;
  if (!(total > 0.0)) return m;

  const double h = solution.headway_h;
  const double x_f = solution.x_f_km;
  const double speed = corridor.speed_kmh;
  const double detour = corridor.cross.detour_km;
  const double flexible_demand = demand.cumulative(x_f);
  const double fixed_share = (total - flexible_demand) / total;

  m.avg_access_min = 60.0 * corridor.cross.access_time_h * fixed_share;
  m.avg_wait_min = 60.0 * h / 2.0;
  m.avg_ride_min = 60.0 * (demand.riding_integral() / (total * speed) +
                           h * detour * flexible_demand * flexible_demand / (2.0 * speed * total));
  m.std_wait_min = 60.0 * h / std::sqrt(12.0);
  // Walk times are |y| / walk speed with |y| uniform, so their spread is
  // mean / sqrt(3); mixing with the zero-access flexible share gives
  // variance = mean^2 * share * (4/3 - share).
  m.std_access_min = 60.0 * corridor.cross.access_time_h *
                     std::sqrt(std::max(0.0, fixed_share * (4.0 / 3.0 - fixed_share)));

  // Riding-time spread across boarding positions, with the detour exposure of
  // each position taken at its expected value.
  auto ride_time = [&](double x) {
    double t = (corridor.length_km - x) / speed;
    if (x < x_f) t += h * detour / speed * (flexible_demand - demand.cumulative(x));
    return t;
  };
  std::vector<double> edges = demand.segment_edges();
  if (x_f > 0.0 && x_f < corridor.length_km) edges.push_back(x_f);
  std::sort(edges.begin(), edges.end());
  double mean = 0.0, second = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i], b = edges[i + 1];
    if (!(b > a)) continue;
    mean += integrate_simpson([&](double x) { return demand.density(x) * ride_time(x); }, a, b);
    second += integrate_simpson(
        [&](double x) { const double t = ride_time(x); return demand.density(x) * t * t; }, a, b);
  }
  mean /= total;
  second /= total;
  m.std_ride_min = 60.0 * std::sqrt(std::max(0.0, second - mean * mean));
  return m;
}

DesignSolution optimize_for_vehicle(const Corridor& corridor, const DemandDistribution& demand,
                                    const CostParams& user_costs, const VehicleType& vehicle,
                                    const CapacityPolicy& policy, const OptimizeOptions& options) {
  check_pair(corridor, demand);
  vehicle.validate();
  policy.validate();
  effective_params(user_costs, vehicle).validate();
  if (!(demand.total_pax_h() > 0.0))
    throw InfeasibleError("vehicle '" + vehicle.name +
                          "': no demand to serve, design is unbounded");
  if (options.grid < 2 || options.polish_starts < 1)
    throw std::invalid_argument("optimizer options: grid >= 2 and polish_starts >= 1 required");

  const double length = corridor.length_km;
  const double fleet_cap =
      options.fleet_upper_factor * fleet_lower_bound(corridor, demand, policy, vehicle, length);

  auto projected_fleet = [&](double x_f) {
    const double lo = fleet_lower_bound(corridor, demand, policy, vehicle, x_f);
    const double s = unconstrained_fleet(corridor, demand, user_costs, vehicle, x_f);
    return std::clamp(s, lo, std::max(lo, fleet_cap));
  };
  auto objective = [&](double x_f) {
    return total_cost_variable(corridor, demand, user_costs, vehicle, x_f, projected_fleet(x_f))
        .total;
  };

  // Coarse scan of the feasible box. The fleet axis only seeds the scan; the
  // polish recovers the exact fleet from the convex subproblem.
  const int n = options.grid;
  std::vector<double> column_best(n, std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i) {
    const double x_f = length * i / (n - 1);
    const double lo = fleet_lower_bound(corridor, demand, policy, vehicle, x_f);
    const double hi = std::max(lo, fleet_cap);
    for (int j = 0; j < n; ++j) {
      const double fleet = lo + (hi - lo) * j / (n - 1);
      const double value =
          total_cost_variable(corridor, demand, user_costs, vehicle, x_f, fleet).total;
      column_best[i] = std::min(column_best[i], value);
    }
  }

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return column_best[a] < column_best[b]; });

  double best_x = 0.0;
  double best_value = std::numeric_limits<double>::infinity();
  auto consider = [&](double x, double value) {
    if (value < best_value) {
      best_value = value;
      best_x = x;
    }
  };

  const double step = length / (n - 1);
  const int starts = std::min(options.polish_starts, n);
  for (int k = 0; k < starts; ++k) {
    const double center = length * order[k] / (n - 1);
    const double lo = std::max(0.0, center - 2.0 * step);
    const double hi = std::min(length, center + 2.0 * step);
    const ScalarMinimum local = minimize_scalar(objective, lo, hi, options.x_tol_km);
    consider(local.x, local.value);
  }
  // The boundary forms are exact candidates, not limits of the line search.
  consider(0.0, objective(0.0));
  consider(length, objective(length));

  DesignSolution solution;
  solution.vehicle = vehicle;
  solution.x_f_km = best_x;
  solution.fleet = projected_fleet(best_x);
  solution.headway_h = headway(corridor, demand, best_x, solution.fleet);
  solution.breakdown =
      total_cost_variable(corridor, demand, user_costs, vehicle, best_x, solution.fleet);
  solution.metrics = service_metrics(corridor, demand, solution);
  return solution;
}

FleetDesign optimize_over_fleet(const Corridor& corridor, const DemandDistribution& demand,
                                const CostParams& user_costs,
                                const std::vector<VehicleType>& vehicles,
                                const CapacityPolicy& policy, const OptimizeOptions& options) {
  if (vehicles.empty()) throw std::invalid_argument("optimize_over_fleet: empty vehicle list");

  std::vector<VehicleOutcome> table(vehicles.size());
  parallel_for(vehicles.size(), options.threads, [&](std::size_t i) {
    table[i].vehicle = vehicles[i];
    try {
      table[i].solution =
          optimize_for_vehicle(corridor, demand, user_costs, vehicles[i], policy, options);
    } catch (const std::exception& e) {
      table[i].error = e.what();
    }
  });

  const VehicleOutcome* best = nullptr;
  for (const auto& row : table) {
    if (!row.solution) continue;
    if (!best || row.solution->breakdown.total < best->solution->breakdown.total ||
        (row.solution->breakdown.total == best->solution->breakdown.total &&
         row.vehicle.capacity < best->vehicle.capacity)) {
      best = &row;
    }
  }
  if (!best) {
    std::string causes;
    for (const auto& row : table) causes += "\n  " + row.vehicle.name + ": " + row.error;
    throw InfeasibleError("no vehicle type admits a feasible design:" + causes);
  }
  return {*best->solution, std::move(table)};
}

std::vector<VehicleType> default_vehicle_catalog() {
  return {
      {"car", 5.0, 0.6187, 2.53},
      {"van", 8.0, 0.6370, 3.63},
      {"20-seater", 20.0, 0.6938, 7.59},
      {"minibus", 44.0, 0.7507, 11.55},
      {"standard-bus", 70.0, 0.8900, 15.73},
  };
}

std::vector<VehicleType> vehicles_from_csv(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  const std::size_t name_col = table.column("name", path);
  const std::size_t cap_col = table.column("capacity", path);
  const std::size_t op_col = table.column("operating_cost_per_km", path);
  const std::size_t veh_col = table.column("vehicle_cost_per_h", path);
  std::vector<VehicleType> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = path + " row " + std::to_string(r + 2);
    VehicleType v;
    v.name = table.rows[r][name_col];
    v.capacity = parse_double_field(table.rows[r][cap_col], where + ", capacity");
    v.operating_cost_km =
        parse_double_field(table.rows[r][op_col], where + ", operating_cost_per_km");
    v.vehicle_cost_h = parse_double_field(table.rows[r][veh_col], where + ", vehicle_cost_per_h");
    try {
      v.validate();
    } catch (const std::exception& e) {
      throw IoError(where + ": " + e.what());
    }
    out.push_back(std::move(v));
  }
  if (out.empty()) throw IoError(path + ": no vehicle rows");
  return out;
}

}  // namespace sod
