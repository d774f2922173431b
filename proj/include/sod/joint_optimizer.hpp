#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sod/cost_model.hpp"

namespace sod {

struct VehicleType {
  std::string name;
  double capacity = 0.0;           // pax/veh
  double operating_cost_km = 0.0;  // $/km
  double vehicle_cost_h = 0.0;     // $/veh-h

  void validate() const;
};

struct CapacityPolicy {
  // Usable fraction of nominal capacity; the rest is slack for demand swings.
  double buffer = 0.7;

  void validate() const;
};

// Per-passenger service quality, in minutes. Spreads assume uniform arrivals
// within a headway and a uniform lateral offset in the catchment; the riding
// spread ignores detour-count noise and is therefore slightly optimistic.
struct ServiceMetrics {
  double avg_access_min = 0.0;
  double avg_wait_min = 0.0;
  double avg_ride_min = 0.0;
  double std_access_min = 0.0;
  double std_wait_min = 0.0;
  double std_ride_min = 0.0;
};

struct DesignSolution {
  VehicleType vehicle;
  double x_f_km = 0.0;
  double fleet = 0.0;
  double headway_h = 0.0;
  CostBreakdown breakdown;
  ServiceMetrics metrics;
};

struct OptimizeOptions {
  int grid = 64;                    // coarse multi-start grid per axis
  int polish_starts = 5;            // best grid cells refined locally
  double fleet_upper_factor = 4.0;  // fleet cap, multiple of the full-length lower bound
  double x_tol_km = 1e-8;
  unsigned threads = 0;             // fleet enumeration; 0 = hardware default
};

// Variable-headway model: the headway follows from fleet size and cycle time
// instead of being fixed. `user_costs` supplies the rider-side weights; the
// operating and vehicle rates come from the vehicle type.

// Headway sustained by `fleet` vehicles given the detours up to x_f. Throws
// InfeasibleError when the fleet cannot complete cycles at all.
double headway(const Corridor&, const DemandDistribution&, double x_f_km, double fleet);

// Smallest fleet able to carry the whole demand within the capacity buffer.
double fleet_lower_bound(const Corridor&, const DemandDistribution&, const CapacityPolicy&,
                         const VehicleType&, double x_f_km);

CostBreakdown total_cost_variable(const Corridor&, const DemandDistribution&,
                                  const CostParams& user_costs, const VehicleType&,
                                  double x_f_km, double fleet);

ServiceMetrics service_metrics(const Corridor&, const DemandDistribution&,
                               const DesignSolution&);

// Minimizes total cost over (x_f, fleet) subject to the capacity bound, with
// a coarse grid scan followed by local polish; the fleet direction is convex
// for any fixed x_f and is solved exactly with projection onto the bound.
DesignSolution optimize_for_vehicle(const Corridor&, const DemandDistribution&,
                                    const CostParams& user_costs, const VehicleType&,
                                    const CapacityPolicy&, const OptimizeOptions& = {});

struct VehicleOutcome {
  VehicleType vehicle;
  std::optional<DesignSolution> solution;
  std::string error;  // set when this vehicle admits no feasible design
};

struct FleetDesign {
  DesignSolution best;
  std::vector<VehicleOutcome> table;  // one row per vehicle, input order
};

// Enumerates vehicle types (concurrently; the result does not depend on
// thread count) and picks the cheapest design. Cost ties go to the smaller
// vehicle. Throws InfeasibleError when every type fails, listing the causes.
FleetDesign optimize_over_fleet(const Corridor&, const DemandDistribution&,
                                const CostParams& user_costs,
                                const std::vector<VehicleType>&, const CapacityPolicy&,
                                const OptimizeOptions& = {});

std::vector<VehicleType> default_vehicle_catalog();

// Reads header "name,capacity,operating_cost_per_km,vehicle_cost_per_h".
std::vector<VehicleType> vehicles_from_csv(const std::string& path);

}  // namespace sod
