#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "sod/cost_model.hpp"

namespace sod {

// Classifies point demand around stations into fixed- and flexible-service
// areas: nearest-station partitioning, a principal axis per station zone,
// projection onto that axis, per-corridor parameter extraction, and the
// flexible/fixed cutoff from the demand threshold.
//
// Inputs are planar coordinates in km (pre-projected);
// project_equirectangular below helps with desk-scale lon/lat data.

struct Station {
  std::string id;
  double x_km = 0.0;
  double y_km = 0.0;
};

struct DemandPoint {
  std::string id;
  double x_km = 0.0;
  double y_km = 0.0;
  double trips_per_h = 0.0;
};

enum class ServiceArea { FixedArea, FlexibleArea };

const char* service_area_name(ServiceArea area);

struct CorridorAssignment {
  std::string point_id;
  std::string station_id;
  std::string corridor_id;
  double x_along_axis_km = 0.0;  // 0 at the far end of the corridor, L at the station
  double y_offset_km = 0.0;      // signed perpendicular offset from the axis
  ServiceArea service = ServiceArea::FixedArea;
  bool beyond_walk_coverage = false;
};

// Principal axis of a station zone: unit vector from the station towards the
// farthest demand point; length is that distance.
struct CorridorAxis {
  double unit_x = 0.0;
  double unit_y = 0.0;
  double length_km = 0.0;
  bool degenerate = false;  // every point coincides with the station
};

struct PipelineConfig {
  double vehicle_speed_kmh = 30.0;
  double layover_h = 1.0 / 6.0;
  double headway_h = 0.25;
  CostParams costs;
  double walk_speed_kmh = 4.0;
  double max_access_time_h = 0.25;  // caps the catchment width at 2 * walk reach
  int bins = DemandDistribution::kDefaultBins;
  int max_corridors_per_subzone = 1;
  unsigned threads = 0;
};

// Aggregated costs of running every corridor one way (all fixed, or with the
// optimal flexible prefix). Money is $/h over the analysis hour.
struct ModeTotals {
  double access = 0.0;
  double waiting = 0.0;
  double riding = 0.0;
  double user = 0.0;
  double operating = 0.0;  // distance-based
  double vehicle = 0.0;    // time-based fleet cost
  double operator_total = 0.0;
  double generalized = 0.0;
  double avg_access_min = 0.0;
  double avg_wait_min = 0.0;
  double avg_ride_min = 0.0;
};

struct CaseStudySummary {
  std::size_t stations = 0;
  std::size_t routes = 0;         // corridors with demand
  std::size_t routes_hybrid = 0;  // both service areas populated (by trips)
  std::size_t routes_fully_flexible = 0;
  std::size_t routes_fixed_only = 0;
  std::size_t points = 0;
  std::size_t flexible_points = 0;
  double total_pax_h = 0.0;
  double flexible_pax_h = 0.0;
  double flexible_threshold_pax_h = 0.0;  // demand threshold shared by corridors
  ModeTotals baseline;                    // every corridor fully fixed
  ModeTotals semi_on_demand;              // optimal flexible prefix per corridor
};

struct CorridorReport {
  std::string corridor_id;
  std::string station_id;
  double length_km = 0.0;
  double total_pax_h = 0.0;
  double flexible_pax_h = 0.0;
  double cutoff_x_km = 0.0;  // flexible/fixed boundary along the axis
  double catchment_width_km = 0.0;
  bool empty = false;       // no trips; excluded from cost totals
  bool degenerate = false;  // zero-length axis or zero detour geometry
  CostBreakdown baseline;
  CostBreakdown semi_on_demand;
};

struct PipelineResult {
  std::vector<CorridorAssignment> assignments;  // sorted by point id
  std::vector<CorridorReport> corridors;        // sorted by corridor id
  CaseStudySummary summary;
};

// Step operations; run_pipeline wires them together.

// Index of the nearest station per point (ties to the lowest station id).
std::vector<std::size_t> assign_to_nearest_station(const std::vector<Station>&,
                                                   const std::vector<DemandPoint>&);

// Farthest-point axis of one zone (ties to the lowest point id).
CorridorAxis define_corridor_axis(const Station&, const std::vector<DemandPoint>& zone_points);

// Axis coordinates of one zone point: x counts down from the station end
// (station maps to L, the far end to 0) and is clamped to [0, L].
struct AxisPosition {
  double x_km = 0.0;
  double y_km = 0.0;
};
AxisPosition project_onto_axis(const Station&, const CorridorAxis&, const DemandPoint&);

// Demand profile and cross-section of one corridor. The catchment width is
// estimated from the mean |y| offset under a uniform-offset assumption and
// capped at the walk-coverage width.
struct CorridorParameters {
  DemandDistribution profile;
  CrossSection cross;
  double width_km = 0.0;
};
CorridorParameters extract_corridor_parameters(const std::vector<AxisPosition>& positions,
                                               const std::vector<double>& trips_per_h,
                                               double length_km, double walk_speed_kmh,
                                               double max_width_km, int bins);

// Flexible/fixed labels for corridor members, far end first: the smallest
// prefix (in rising x) whose trips cover the demand threshold goes flexible.
// A zero mean detour sends everything flexible.
struct FlexibleClassification {
  std::vector<ServiceArea> labels;  // parallel to the member order
  double cutoff_x_km = 0.0;
  double threshold_pax_h = 0.0;  // clamped to [0, corridor total]
  bool degenerate_detour = false;
};
FlexibleClassification classify_flexible(const Corridor& geometry,
                                         const DemandDistribution& profile,
                                         const std::vector<WeightedPosition>& members,
                                         const CostParams& costs, double headway_h);

PipelineResult run_pipeline(const std::vector<Station>&, const std::vector<DemandPoint>&,
                            const PipelineConfig&);

// I/O ---------------------------------------------------------------------

std::vector<Station> read_stations_csv(const std::string& path);
std::vector<Station> read_stations_geojson(const std::string& path);
std::vector<DemandPoint> read_demand_points_csv(const std::string& path);

void write_assignments_csv(const std::string& path, const std::vector<CorridorAssignment>&);
void write_summary_json(const std::string& path, const CaseStudySummary&);
void write_points_geojson(const std::string& path, const std::vector<CorridorAssignment>&,
                          const std::vector<DemandPoint>&);
std::string summary_to_json(const CaseStudySummary&);  // pretty-printed

// Equirectangular approximation around a reference point; good enough for
// metro-scale test data, not for continental extents.
struct PlanarPoint {
  double x_km = 0.0;
  double y_km = 0.0;
};
PlanarPoint project_equirectangular(double lon_deg, double lat_deg, double ref_lon_deg,
                                    double ref_lat_deg);

}  // namespace sod
