#include "sod/cli_app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "sod/csv.hpp"
#include "sod/errors.hpp"
#include "sod/parallel.hpp"

namespace sod {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

const std::set<std::string> kSweepParams = {"operator_cost_scale", "headway",     "demand",
                                            "detour",              "access_time", "value_of_time"};

void require_total_consistent(const CostBreakdown& b, const std::string& where) {
  const double sum = b.access + b.waiting + b.riding_x + b.riding_y + b.operating_x +
                     b.operating_y + b.vehicle;
  if (std::abs(sum - b.total) > 1e-6 * std::max(1.0, std::abs(sum)))
    throw std::logic_error(where + ": cost components do not add up to the total");
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

fs::path prepare_out_dir(const RunConfig& config) {
  fs::path dir(config.out_dir.empty() ? "." : config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

const char* kBreakdownColumns =
    "access,waiting,riding_x,riding_y,operating_x,operating_y,vehicle_cost,total";

void write_breakdown_fields(std::ostream& out, const CostBreakdown& b) {
  out << format_double(b.access) << ',' << format_double(b.waiting) << ','
      << format_double(b.riding_x) << ',' << format_double(b.riding_y) << ','
      << format_double(b.operating_x) << ',' << format_double(b.operating_y) << ','
      << format_double(b.vehicle) << ',' << format_double(b.total);
}

json breakdown_to_json(const CostBreakdown& b) {
  return json{{"access", b.access},           {"waiting", b.waiting},
              {"riding_x", b.riding_x},       {"riding_y", b.riding_y},
              {"operating_x", b.operating_x}, {"operating_y", b.operating_y},
              {"vehicle", b.vehicle},         {"total", b.total}};
}

// Writes the report as pretty JSON or as key,value CSV rows.
void write_report(const fs::path& dir, const std::string& stem, const RunConfig& config,
                  const json& report) {
  if (config.format == "json") {
    auto out = open_output(dir / (stem + ".json"));
    out << report.dump(2) << "\n";
    return;
  }
  auto out = open_output(dir / (stem + ".csv"));
  out << "key,value\n";
  const std::function<void(const std::string&, const json&)> emit =
      [&](const std::string& prefix, const json& node) {
        if (node.is_object()) {
          for (const auto& [key, value] : node.items())
            emit(prefix.empty() ? key : prefix + "." + key, value);
        } else if (node.is_number_float()) {
          out << prefix << ',' << format_double(node.get<double>()) << '\n';
        } else if (node.is_string()) {
          out << prefix << ',' << node.get<std::string>() << '\n';
        } else {
          out << prefix << ',' << node.dump() << '\n';
        }
      };
  emit("", report);
}

int guard(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::domain_error& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return kExitValidation;
  }
}

// --- JSON config ----------------------------------------------------------

void take_number(const json& obj, const char* key, double& target) {
  if (obj.contains(key)) {
    if (!obj[key].is_number()) throw std::invalid_argument(std::string(key) + ": expected a number");
    target = obj[key].get<double>();
  }
}

void take_int(const json& obj, const char* key, int& target) {
  if (obj.contains(key)) {
    if (!obj[key].is_number_integer())
      throw std::invalid_argument(std::string(key) + ": expected an integer");
    target = obj[key].get<int>();
  }
}

void take_string(const json& obj, const char* key, std::string& target) {
  if (obj.contains(key)) {
    if (!obj[key].is_string()) throw std::invalid_argument(std::string(key) + ": expected a string");
    target = obj[key].get<std::string>();
  }
}

void take_bool(const json& obj, const char* key, bool& target) {
  if (obj.contains(key)) {
    if (!obj[key].is_boolean())
      throw std::invalid_argument(std::string(key) + ": expected a boolean");
    target = obj[key].get<bool>();
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
}

}  // namespace

Corridor RunConfig::corridor() const {
  return {route_length_km, vehicle_speed_kmh, layover_min / 60.0,
          CrossSection{access_time_min / 60.0, detour_km}};
}

DemandDistribution RunConfig::demand() const {
  if (demand_kind == "uniform")
    return DemandDistribution::uniform(total_demand_pax_h, route_length_km);
  if (demand_kind == "triangular")
    return DemandDistribution::triangular(total_demand_pax_h, route_length_km);
  if (demand_kind == "empirical")
    return DemandDistribution::empirical_from_csv(demand_csv, route_length_km, bins);
  throw std::invalid_argument("demand.kind: expected uniform, triangular or empirical");
}

CostParams RunConfig::costs() const {
  return {value_of_time, access_factor, waiting_factor, operating_cost_per_km,
          vehicle_cost_per_h};
}

void RunConfig::validate_common() const {
  std::vector<std::string> problems;
  auto require = [&](bool ok, const char* message) {
    if (!ok) problems.emplace_back(message);
  };
  require(route_length_km > 0.0, "corridor.route_length_km: must be > 0");
  require(vehicle_speed_kmh > 0.0, "corridor.vehicle_speed_kmh: must be > 0");
  require(layover_min >= 0.0, "corridor.layover_min: must be >= 0");
  require(access_time_min >= 0.0, "corridor.access_time_min: must be >= 0");
  require(detour_km >= 0.0, "corridor.detour_km: must be >= 0");
  require(demand_kind == "uniform" || demand_kind == "triangular" || demand_kind == "empirical",
          "demand.kind: expected uniform, triangular or empirical");
  if (demand_kind == "empirical")
    require(!demand_csv.empty(), "demand.csv: required for the empirical kind");
  else
    require(total_demand_pax_h > 0.0, "demand.total_pax_h: must be > 0");
  require(bins >= 1, "demand.bins: must be >= 1");
  require(value_of_time > 0.0, "costs.value_of_time_per_h: must be > 0");
  require(access_factor > 0.0, "costs.access_factor: must be > 0");
  require(waiting_factor > 0.0, "costs.waiting_factor: must be > 0");
  require(operating_cost_per_km > 0.0, "costs.operating_cost_per_km: must be > 0");
  require(vehicle_cost_per_h > 0.0, "costs.vehicle_cost_per_h: must be > 0");
  require(headway_min > 0.0, "headway_min: must be > 0");
  require(capacity_buffer > 0.0 && capacity_buffer <= 1.0,
          "capacity_buffer: must be in (0, 1]");
  require(curve_samples >= 2, "output.curve_samples: must be >= 2");
  require(format == "csv" || format == "json", "output.format: expected csv or json");
  require(walk_speed_kmh > 0.0, "casestudy.walk_speed_kmh: must be > 0");
  require(max_access_time_min >= 0.0, "casestudy.max_access_time_min: must be >= 0");
  require(max_corridors_per_subzone >= 1, "casestudy.max_corridors_per_subzone: must be >= 1");
  if (!problems.empty()) {
    std::string message = "configuration errors:";
    for (const auto& p : problems) message += "\n  - " + p;
    throw std::invalid_argument(message);
  }
}

RunConfig preset_config(const std::string& name) {
  RunConfig config;
  config.vehicle_speed_kmh = 30.0;
  config.layover_min = 10.0;
  config.demand_kind = "uniform";
  config.total_demand_pax_h = 80.0;
  config.value_of_time = 16.5;
  config.access_factor = 2.0;
  config.waiting_factor = 1.5;
  config.operating_cost_per_km = 0.5;
  config.vehicle_cost_per_h = 12.0;
  config.headway_min = 15.0;
  config.vehicles = default_vehicle_catalog();
  config.capacity_buffer = 0.7;
  config.walk_speed_kmh = 4.0;
  config.max_access_time_min = 15.0;
  if (name == "cta126") {
    config.route_length_km = 10.9;
    config.access_time_min = 2.25;
    config.detour_km = 0.13;
  } else if (name == "cta84") {
    config.route_length_km = 13.4;
    config.access_time_min = 6.75;
    config.detour_km = 0.53;
  } else {
    throw std::invalid_argument("unknown preset '" + name + "' (expected cta126 or cta84)");
  }
  return config;
}

void apply_config_file(RunConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument(path + ": top level must be an object");
  reject_unknown(doc, {"corridor", "demand", "costs", "headway_min", "vehicles",
                       "capacity_buffer", "sweep", "casestudy", "output", "threads"},
                 path);

  if (doc.contains("corridor")) {
    const json& c = doc["corridor"];
    reject_unknown(c, {"route_length_km", "vehicle_speed_kmh", "layover_min", "access_time_min",
                       "detour_km"},
                   "corridor");
    take_number(c, "route_length_km", config.route_length_km);
    take_number(c, "vehicle_speed_kmh", config.vehicle_speed_kmh);
    take_number(c, "layover_min", config.layover_min);
    take_number(c, "access_time_min", config.access_time_min);
    take_number(c, "detour_km", config.detour_km);
  }
  if (doc.contains("demand")) {
    const json& d = doc["demand"];
    reject_unknown(d, {"kind", "total_pax_h", "csv", "bins"}, "demand");
    take_string(d, "kind", config.demand_kind);
    take_number(d, "total_pax_h", config.total_demand_pax_h);
    take_string(d, "csv", config.demand_csv);
    take_int(d, "bins", config.bins);
  }
  if (doc.contains("costs")) {
    const json& c = doc["costs"];
    reject_unknown(c, {"value_of_time_per_h", "access_factor", "waiting_factor",
                       "operating_cost_per_km", "vehicle_cost_per_h"},
                   "costs");
    take_number(c, "value_of_time_per_h", config.value_of_time);
    take_number(c, "access_factor", config.access_factor);
    take_number(c, "waiting_factor", config.waiting_factor);
    take_number(c, "operating_cost_per_km", config.operating_cost_per_km);
    take_number(c, "vehicle_cost_per_h", config.vehicle_cost_per_h);
  }
  take_number(doc, "headway_min", config.headway_min);
  take_number(doc, "capacity_buffer", config.capacity_buffer);
  if (doc.contains("vehicles")) {
    const json& v = doc["vehicles"];
    if (v.is_string() && v.get<std::string>() == "default") {
      config.vehicles = default_vehicle_catalog();
    } else if (v.is_object() && v.contains("csv")) {
      reject_unknown(v, {"csv"}, "vehicles");
      config.vehicles = vehicles_from_csv(v["csv"].get<std::string>());
    } else if (v.is_object() && v.contains("catalog")) {
      reject_unknown(v, {"catalog"}, "vehicles");
      config.vehicles.clear();
      for (const auto& row : v["catalog"]) {
        VehicleType vt;
        take_string(row, "name", vt.name);
        take_number(row, "capacity", vt.capacity);
        take_number(row, "operating_cost_per_km", vt.operating_cost_km);
        take_number(row, "vehicle_cost_per_h", vt.vehicle_cost_h);
        vt.validate();
        config.vehicles.push_back(std::move(vt));
      }
    } else {
      throw std::invalid_argument(
          "vehicles: expected \"default\", {\"csv\": path} or {\"catalog\": [...]}");
    }
  }
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    reject_unknown(s, {"param", "from", "to", "steps"}, "sweep");
    take_string(s, "param", config.sweep_param);
    take_number(s, "from", config.sweep_from);
    take_number(s, "to", config.sweep_to);
    take_int(s, "steps", config.sweep_steps);
  }
  if (doc.contains("casestudy")) {
    const json& c = doc["casestudy"];
    reject_unknown(c, {"stations", "demand_points", "walk_speed_kmh", "max_access_time_min",
                       "max_corridors_per_subzone", "geojson"},
                   "casestudy");
    take_string(c, "stations", config.stations_path);
    take_string(c, "demand_points", config.demand_points_path);
    take_number(c, "walk_speed_kmh", config.walk_speed_kmh);
    take_number(c, "max_access_time_min", config.max_access_time_min);
    take_int(c, "max_corridors_per_subzone", config.max_corridors_per_subzone);
    take_bool(c, "geojson", config.emit_geojson);
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    reject_unknown(o, {"dir", "format", "curve_samples"}, "output");
    take_string(o, "dir", config.out_dir);
    take_string(o, "format", config.format);
    take_int(o, "curve_samples", config.curve_samples);
  }
  if (doc.contains("threads")) {
    int t = 0;
    take_int(doc, "threads", t);
    if (t < 0) throw std::invalid_argument("threads: must be >= 0");
    config.threads = static_cast<unsigned>(t);
  }
}

// --- analyze ---------------------------------------------------------------

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guard(err, [&] {
    config.validate_common();
    const Corridor corridor = config.corridor();
    const DemandDistribution profile = config.demand();
    const CostParams params = config.costs();
    const double H = config.headway_h();

    const FlexiblePortion portion = optimal_flexible_portion(corridor, profile, params, H);
    const double fleet = fleet_size(corridor, profile, H, portion.x_f_km);
    const CostBreakdown best = cost_breakdown(corridor, profile, params, H, portion.x_f_km);
    require_total_consistent(best, "analyze");

    const fs::path dir = prepare_out_dir(config);
    {
      auto csv = open_output(dir / "analyze_curves.csv");
      csv << "x_f_km,fleet," << kBreakdownColumns << "\n";
      const int n = config.curve_samples;
      for (int i = 0; i < n; ++i) {
        const double x = corridor.length_km * i / (n - 1);
        const CostBreakdown b = cost_breakdown(corridor, profile, params, H, x);
        require_total_consistent(b, "analyze curve");
        csv << format_double(x) << ',' << format_double(fleet_size(corridor, profile, H, x))
            << ',';
        write_breakdown_fields(csv, b);
        csv << '\n';
      }
    }

    json report{{"route_form", route_form_name(portion.form)},
                {"degenerate_detour", portion.degenerate_detour},
                {"x_f_km", portion.x_f_km},
                {"flexible_demand_pax_h", profile.cumulative(portion.x_f_km)},
                {"fleet", fleet},
                {"fleet_ceil", fleet_ceiling(fleet)},
                {"headway_min", config.headway_min},
                {"cost", breakdown_to_json(best)}};
    write_report(dir, "analyze_report", config, report);

    out << "route form:       " << route_form_name(portion.form) << "\n"
        << "flexible portion: " << format_double(portion.x_f_km) << " km of "
        << format_double(corridor.length_km) << " km\n"
        << "flexible demand:  " << format_double(profile.cumulative(portion.x_f_km))
        << " pax/h of " << format_double(profile.total_pax_h()) << " pax/h\n"
        << "fleet size:       " << format_double(fleet) << " veh\n"
        << "total cost:       " << format_double(best.total) << " $/h\n";
  });
}

// --- optimize ---------------------------------------------------------------

namespace {

void write_fleet_table(std::ostream& csv, const FleetDesign& design) {
  csv << "vehicle,capacity,feasible,x_f_km,fleet,headway_min,avg_access_min,avg_wait_min,"
         "avg_ride_min,std_access_min,std_wait_min,std_ride_min,"
      << kBreakdownColumns << ",note\n";
  for (const auto& row : design.table) {
    csv << row.vehicle.name << ',' << format_double(row.vehicle.capacity) << ','
        << (row.solution ? 1 : 0) << ',';
    if (row.solution) {
      const DesignSolution& s = *row.solution;
      require_total_consistent(s.breakdown, "optimize table");
      csv << format_double(s.x_f_km) << ',' << format_double(s.fleet) << ','
          << format_double(60.0 * s.headway_h) << ',' << format_double(s.metrics.avg_access_min)
          << ',' << format_double(s.metrics.avg_wait_min) << ','
          << format_double(s.metrics.avg_ride_min) << ','
          << format_double(s.metrics.std_access_min) << ','
          << format_double(s.metrics.std_wait_min) << ','
          << format_double(s.metrics.std_ride_min) << ',';
      write_breakdown_fields(csv, s.breakdown);
      csv << ",\n";
    } else {
      csv << ",,,,,,,,,,,,,,,,,," << row.error << "\n";
    }
  }
}

json solution_to_json(const DesignSolution& s) {
  return json{{"vehicle", s.vehicle.name},
              {"capacity", s.vehicle.capacity},
              {"x_f_km", s.x_f_km},
              {"fleet", s.fleet},
              {"fleet_ceil", fleet_ceiling(s.fleet)},
              {"headway_min", 60.0 * s.headway_h},
              {"metrics",
               {{"avg_access_min", s.metrics.avg_access_min},
                {"avg_wait_min", s.metrics.avg_wait_min},
                {"avg_ride_min", s.metrics.avg_ride_min},
                {"std_access_min", s.metrics.std_access_min},
                {"std_wait_min", s.metrics.std_wait_min},
                {"std_ride_min", s.metrics.std_ride_min}}},
              {"cost", breakdown_to_json(s.breakdown)}};
}

}  // namespace

int cmd_optimize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guard(err, [&] {
    config.validate_common();
    if (config.vehicles.empty())
      throw std::invalid_argument("vehicles: a catalog is required for optimize");
    const Corridor corridor = config.corridor();
    const DemandDistribution profile = config.demand();
    OptimizeOptions options;
    options.threads = config.threads;

    const FleetDesign design = optimize_over_fleet(corridor, profile, config.costs(),
                                                   config.vehicles, {config.capacity_buffer},
                                                   options);

    const fs::path dir = prepare_out_dir(config);
    {
      auto csv = open_output(dir / "optimize_table.csv");
      write_fleet_table(csv, design);
    }
    write_report(dir, "optimize_report", config, solution_to_json(design.best));

    out << "best vehicle:     " << design.best.vehicle.name << " ("
        << format_double(design.best.vehicle.capacity) << " pax)\n"
        << "flexible portion: " << format_double(design.best.x_f_km) << " km of "
        << format_double(corridor.length_km) << " km\n"
        << "fleet size:       " << format_double(design.best.fleet) << " veh\n"
        << "headway:          " << format_double(60.0 * design.best.headway_h) << " min\n"
        << "total cost:       " << format_double(design.best.breakdown.total) << " $/h\n";
    for (const auto& row : design.table)
      if (!row.solution) out << "infeasible:       " << row.vehicle.name << ": " << row.error << "\n";
  });
}

// --- sweep -------------------------------------------------------------------

namespace {

RunConfig config_for_sweep_value(const RunConfig& base, const std::string& param, double value) {
  RunConfig c = base;
  if (param == "operator_cost_scale") {
    c.operating_cost_per_km *= value;
    c.vehicle_cost_per_h *= value;
    for (auto& v : c.vehicles) {
      v.operating_cost_km *= value;
      v.vehicle_cost_h *= value;
    }
  } else if (param == "headway") {
    c.headway_min = value;
  } else if (param == "demand") {
    c.total_demand_pax_h = value;
  } else if (param == "detour") {
    c.detour_km = value;
  } else if (param == "access_time") {
    c.access_time_min = value;
  } else if (param == "value_of_time") {
    c.value_of_time = value;
  }
  return c;
}

}  // namespace

int cmd_sweep(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guard(err, [&] {
    config.validate_common();
    if (!kSweepParams.count(config.sweep_param)) {
      std::string names;
      for (const auto& p : kSweepParams) names += (names.empty() ? "" : ", ") + p;
      throw std::invalid_argument("sweep.param: unknown parameter '" + config.sweep_param +
                                  "' (expected one of " + names + ")");
    }
    if (config.sweep_steps < 1) throw std::invalid_argument("sweep.steps: must be >= 1");

    std::vector<double> values(config.sweep_steps);
    for (int i = 0; i < config.sweep_steps; ++i)
      values[i] = config.sweep_steps == 1
                      ? config.sweep_from
                      : config.sweep_from + (config.sweep_to - config.sweep_from) * i /
                                                (config.sweep_steps - 1);

    // The headway knob only exists in the fixed-headway model; other sweeps
    // use the joint optimizer whenever a vehicle catalog is present.
    const bool use_optimizer = !config.vehicles.empty() && config.sweep_param != "headway";

    struct Row {
      double value;
      std::string vehicle;
      std::string form;
      double x_f_km, fleet, headway_min;
      CostBreakdown cost;
    };
    std::vector<std::vector<Row>> rows(values.size());
    std::vector<std::string> failures(values.size());

    parallel_for(values.size(), config.threads, [&](std::size_t i) {
      try {
        const RunConfig local = config_for_sweep_value(config, config.sweep_param, values[i]);
        const Corridor corridor = local.corridor();
        const DemandDistribution profile = local.demand();
        if (use_optimizer) {
          OptimizeOptions options;
          options.threads = 1;  // parallelism lives at the sweep level
          const FleetDesign design = optimize_over_fleet(
              corridor, profile, local.costs(), local.vehicles, {local.capacity_buffer}, options);
          for (const auto& entry : design.table) {
            if (!entry.solution) continue;
            const DesignSolution& s = *entry.solution;
            rows[i].push_back({values[i], entry.vehicle.name, "", s.x_f_km, s.fleet,
                               60.0 * s.headway_h, s.breakdown});
          }
        } else {
          const CostParams params = local.costs();
          const double H = local.headway_h();
          const FlexiblePortion portion = optimal_flexible_portion(corridor, profile, params, H);
          rows[i].push_back({values[i], "", route_form_name(portion.form), portion.x_f_km,
                             fleet_size(corridor, profile, H, portion.x_f_km), local.headway_min,
                             cost_breakdown(corridor, profile, params, H, portion.x_f_km)});
        }
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    });

    for (std::size_t i = 0; i < values.size(); ++i)
      if (!failures[i].empty())
        throw InfeasibleError("sweep value " + format_double(values[i]) + ": " + failures[i]);

    const fs::path dir = prepare_out_dir(config);
    auto csv = open_output(dir / "sweep.csv");
    csv << "parameter,value,vehicle,route_form,x_f_km,fleet,headway_min," << kBreakdownColumns
        << "\n";
    std::size_t total_rows = 0;
    for (const auto& group : rows) {
      for (const auto& r : group) {
        require_total_consistent(r.cost, "sweep row");
        csv << config.sweep_param << ',' << format_double(r.value) << ',' << r.vehicle << ','
            << r.form << ',' << format_double(r.x_f_km) << ',' << format_double(r.fleet) << ','
            << format_double(r.headway_min) << ',';
        write_breakdown_fields(csv, r.cost);
        csv << '\n';
        ++total_rows;
      }
    }
    out << "sweep of " << config.sweep_param << ": " << values.size() << " values, "
        << total_rows << " rows -> " << (dir / "sweep.csv").string() << "\n";
  });
}

// --- casestudy ----------------------------------------------------------------

int cmd_casestudy(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guard(err, [&] {
    config.validate_common();
    if (config.stations_path.empty())
      throw std::invalid_argument("casestudy.stations: input file required");
    if (config.demand_points_path.empty())
      throw std::invalid_argument("casestudy.demand_points: input file required");

    const bool geojson_stations = config.stations_path.size() > 8 &&
                                  config.stations_path.rfind(".geojson") ==
                                      config.stations_path.size() - 8;
    const std::vector<Station> stations = geojson_stations
                                              ? read_stations_geojson(config.stations_path)
                                              : read_stations_csv(config.stations_path);
    const std::vector<DemandPoint> points = read_demand_points_csv(config.demand_points_path);
    if (points.empty()) err << "warning: no demand points; writing an empty summary\n";

    PipelineConfig pipeline;
    pipeline.vehicle_speed_kmh = config.vehicle_speed_kmh;
    pipeline.layover_h = config.layover_min / 60.0;
    pipeline.headway_h = config.headway_h();
    pipeline.costs = config.costs();
    pipeline.walk_speed_kmh = config.walk_speed_kmh;
    pipeline.max_access_time_h = config.max_access_time_min / 60.0;
    pipeline.bins = config.bins;
    pipeline.max_corridors_per_subzone = config.max_corridors_per_subzone;
    pipeline.threads = config.threads;

    const PipelineResult result = run_pipeline(stations, points, pipeline);

    const fs::path dir = prepare_out_dir(config);
    write_assignments_csv((dir / "assignments.csv").string(), result.assignments);
    write_summary_json((dir / "summary.json").string(), result.summary);
    if (config.emit_geojson)
      write_points_geojson((dir / "points.geojson").string(), result.assignments, points);

    const CaseStudySummary& s = result.summary;
    out << "stations:           " << s.stations << "\n"
        << "routes with demand: " << s.routes << " (" << s.routes_hybrid << " hybrid, "
        << s.routes_fully_flexible << " fully flexible, " << s.routes_fixed_only
        << " fixed-only)\n"
        << "points:             " << s.points << " (" << s.flexible_points
        << " in flexible areas)\n"
        << "passengers:         " << format_double(s.total_pax_h) << " pax/h ("
        << format_double(s.flexible_pax_h) << " flexible)\n"
        << "flexible threshold: " << format_double(s.flexible_threshold_pax_h) << " pax/h ("
        << format_double(s.flexible_threshold_pax_h * pipeline.headway_h) << " pax/trip)\n"
        << "generalized cost:   " << format_double(s.baseline.generalized) << " -> "
        << format_double(s.semi_on_demand.generalized) << " $/h\n";
  });
}

}  // namespace sod
