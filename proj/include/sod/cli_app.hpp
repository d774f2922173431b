#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sod/geo_pipeline.hpp"
#include "sod/joint_optimizer.hpp"

namespace sod {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitIo = 4;

// One flat bag of settings for all subcommands. Time-valued knobs use _min
// keys in minutes and are converted to hours once, here; distances are km.
struct RunConfig {
  // Corridor geometry and operations.
  double route_length_km = 0.0;
  double vehicle_speed_kmh = 0.0;
  double layover_min = 0.0;
  double access_time_min = 0.0;
  double detour_km = 0.0;

  // Demand profile.
  std::string demand_kind = "uniform";  // uniform | triangular | empirical
  double total_demand_pax_h = 0.0;
  std::string demand_csv;  // required for the empirical kind
  int bins = DemandDistribution::kDefaultBins;

  // Cost weights.
  double value_of_time = 0.0;
  double access_factor = 0.0;
  double waiting_factor = 0.0;
  double operating_cost_per_km = 0.0;
  double vehicle_cost_per_h = 0.0;

  double headway_min = 0.0;

  // Joint optimization.
  std::vector<VehicleType> vehicles;
  double capacity_buffer = 0.7;

  // Sweep.
  std::string sweep_param;
  double sweep_from = 0.0;
  double sweep_to = 0.0;
  int sweep_steps = 0;

  // Case study inputs.
  std::string stations_path;
  std::string demand_points_path;
  double walk_speed_kmh = 4.0;
  double max_access_time_min = 15.0;
  int max_corridors_per_subzone = 1;
  bool emit_geojson = false;

  // Output.
  std::string out_dir = ".";
  std::string format = "csv";  // report format: csv | json
  int curve_samples = 200;
  unsigned threads = 0;

  Corridor corridor() const;
  DemandDistribution demand() const;
  CostParams costs() const;
  double headway_h() const { return headway_min / 60.0; }

  // Throws std::invalid_argument listing every offending field.
  void validate_common() const;
};

// Built-in scenarios "cta126" and "cta84" with the default vehicle catalog.
RunConfig preset_config(const std::string& name);

// Merges a JSON config file into `config`; unknown keys are rejected.
void apply_config_file(RunConfig& config, const std::string& path);

int cmd_analyze(const RunConfig&, std::ostream& out, std::ostream& err);
int cmd_optimize(const RunConfig&, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig&, std::ostream& out, std::ostream& err);
int cmd_casestudy(const RunConfig&, std::ostream& out, std::ostream& err);

}  // namespace sod
