#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sod/cli_app.hpp"
#include "sod/errors.hpp"

namespace {

struct CommonArgs {
  std::string preset;
  std::string config_file;
  std::string out_dir;
  std::string format;
  // Scalar overrides; only applied when the flag is present.
  std::optional<double> headway_min, total_demand, route_length_km, speed_kmh, layover_min,
      access_time_min, detour_km, value_of_time, access_factor, waiting_factor,
      operating_cost_per_km, vehicle_cost_per_h, capacity_buffer;
  std::optional<int> bins, curve_samples, threads;
  std::optional<std::string> demand_kind, demand_csv, vehicles_csv;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--preset", args.preset, "Built-in scenario: cta126 or cta84");
  cmd->add_option("--config", args.config_file, "JSON config file (overrides the preset)");
  cmd->add_option("--out", args.out_dir, "Output directory (default .)");
  cmd->add_option("--format", args.format, "Report format: csv or json");
  cmd->add_option("--headway-min", args.headway_min, "Fixed headway in minutes");
  cmd->add_option("--total-demand", args.total_demand, "Total demand in pax/h");
  cmd->add_option("--route-length-km", args.route_length_km, "Route length in km");
  cmd->add_option("--speed-kmh", args.speed_kmh, "Vehicle speed in km/h");
  cmd->add_option("--layover-min", args.layover_min, "Layover per round trip in minutes");
  cmd->add_option("--access-time-min", args.access_time_min, "Mean access time in minutes");
  cmd->add_option("--detour-km", args.detour_km, "Mean detour in km");
  cmd->add_option("--value-of-time", args.value_of_time, "Value of time in $/h");
  cmd->add_option("--access-factor", args.access_factor, "Access time weight");
  cmd->add_option("--waiting-factor", args.waiting_factor, "Waiting time weight");
  cmd->add_option("--operating-cost-per-km", args.operating_cost_per_km, "Operating cost in $/km");
  cmd->add_option("--vehicle-cost-per-h", args.vehicle_cost_per_h, "Vehicle cost in $/veh-h");
  cmd->add_option("--capacity-buffer", args.capacity_buffer, "Usable capacity fraction (0, 1]");
  cmd->add_option("--bins", args.bins, "Bins for empirical demand profiles");
  cmd->add_option("--samples", args.curve_samples, "Points per emitted curve");
  cmd->add_option("--threads", args.threads, "Worker threads (0 = auto)");
  cmd->add_option("--demand-kind", args.demand_kind, "uniform, triangular or empirical");
  cmd->add_option("--demand-csv", args.demand_csv, "Empirical demand profile (x_km,trips_per_h)");
  cmd->add_option("--vehicles-csv", args.vehicles_csv, "Vehicle catalog CSV");
}

int build_config(const CommonArgs& args, sod::RunConfig& config, std::ostream& err) {
  try {
    if (!args.preset.empty()) config = sod::preset_config(args.preset);
    if (!args.config_file.empty()) sod::apply_config_file(config, args.config_file);
    if (!args.out_dir.empty()) config.out_dir = args.out_dir;
    if (!args.format.empty()) config.format = args.format;
    if (args.headway_min) config.headway_min = *args.headway_min;
    if (args.total_demand) config.total_demand_pax_h = *args.total_demand;
    if (args.route_length_km) config.route_length_km = *args.route_length_km;
    if (args.speed_kmh) config.vehicle_speed_kmh = *args.speed_kmh;
    if (args.layover_min) config.layover_min = *args.layover_min;
    if (args.access_time_min) config.access_time_min = *args.access_time_min;
    if (args.detour_km) config.detour_km = *args.detour_km;
    if (args.value_of_time) config.value_of_time = *args.value_of_time;
    if (args.access_factor) config.access_factor = *args.access_factor;
    if (args.waiting_factor) config.waiting_factor = *args.waiting_factor;
    if (args.operating_cost_per_km) config.operating_cost_per_km = *args.operating_cost_per_km;
    if (args.vehicle_cost_per_h) config.vehicle_cost_per_h = *args.vehicle_cost_per_h;
    if (args.capacity_buffer) config.capacity_buffer = *args.capacity_buffer;
    if (args.bins) config.bins = *args.bins;
    if (args.curve_samples) config.curve_samples = *args.curve_samples;
    if (args.threads) config.threads = static_cast<unsigned>(std::max(0, *args.threads));
    if (args.demand_kind) config.demand_kind = *args.demand_kind;
    if (args.demand_csv) {
      config.demand_csv = *args.demand_csv;
      config.demand_kind = "empirical";
    }
    if (args.vehicles_csv) config.vehicles = sod::vehicles_from_csv(*args.vehicles_csv);
  } catch (const sod::IoError& e) {
    err << "error: " << e.what() << "\n";
    return sod::kExitIo;
  } catch (const std::exception& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return sod::kExitValidation;
  }
  return sod::kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Design tool for semi-on-demand hybrid transit routes: cost analysis,\n"
      "joint design optimization, parameter sweeps and geospatial case studies."};
  app.require_subcommand(1);

  CommonArgs analyze_args, optimize_args, sweep_args, case_args;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "Fixed-headway analysis: route form, flexible portion, fleet and costs");
  add_common_options(analyze, analyze_args);

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Joint optimization of flexible portion, fleet and headway per vehicle type");
  add_common_options(optimize, optimize_args);

  CLI::App* sweep =
      app.add_subcommand("sweep", "Re-run the analysis or optimization over a parameter range");
  add_common_options(sweep, sweep_args);
  std::string sweep_param;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  sweep->add_option("--param", sweep_param,
                    "operator_cost_scale, headway, demand, detour, access_time or value_of_time");
  sweep->add_option("--from", sweep_from, "First value");
  sweep->add_option("--to", sweep_to, "Last value");
  sweep->add_option("--steps", sweep_steps, "Number of values");

  CLI::App* casestudy = app.add_subcommand(
      "casestudy", "Classify point demand around stations into fixed and flexible service areas");
  add_common_options(casestudy, case_args);
  std::string stations_path, demand_points_path;
  std::optional<double> walk_speed, max_access_min;
  std::optional<int> max_corridors;
  bool emit_geojson = false;
  casestudy->add_option("--stations", stations_path, "Stations CSV (id,x_km,y_km) or GeoJSON");
  casestudy->add_option("--demand-points", demand_points_path,
                        "Demand CSV (id,x_km,y_km,trips_per_h)");
  casestudy->add_option("--walk-speed-kmh", walk_speed, "Walking speed in km/h");
  casestudy->add_option("--max-access-time-min", max_access_min,
                        "Walk coverage limit in minutes");
  casestudy->add_option("--max-corridors", max_corridors, "Corridors per subzone");
  casestudy->add_flag("--geojson", emit_geojson, "Also write labeled points as GeoJSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sod::kExitValidation;
  }

  sod::RunConfig config;
  if (analyze->parsed()) {
    if (int rc = build_config(analyze_args, config, std::cerr)) return rc;
    return sod::cmd_analyze(config, std::cout, std::cerr);
  }
  if (optimize->parsed()) {
    if (int rc = build_config(optimize_args, config, std::cerr)) return rc;
    return sod::cmd_optimize(config, std::cout, std::cerr);
  }
  if (sweep->parsed()) {
    if (int rc = build_config(sweep_args, config, std::cerr)) return rc;
    if (!sweep_param.empty()) config.sweep_param = sweep_param;
    if (sweep->count("--from")) config.sweep_from = sweep_from;
    if (sweep->count("--to")) config.sweep_to = sweep_to;
    if (sweep->count("--steps")) config.sweep_steps = sweep_steps;
    return sod::cmd_sweep(config, std::cout, std::cerr);
  }
  if (casestudy->parsed()) {
    if (int rc = build_config(case_args, config, std::cerr)) return rc;
    if (!stations_path.empty()) config.stations_path = stations_path;
    if (!demand_points_path.empty()) config.demand_points_path = demand_points_path;
    if (walk_speed) config.walk_speed_kmh = *walk_speed;
    if (max_access_min) config.max_access_time_min = *max_access_min;
    if (max_corridors) config.max_corridors_per_subzone = *max_corridors;
    if (emit_geojson) config.emit_geojson = true;
    return sod::cmd_casestudy(config, std::cout, std::cerr);
  }
  return sod::kExitValidation;
}
