#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "sod/cli_app.hpp"
#include "sod/csv.hpp"

using namespace sod;
using nlohmann::json;

namespace {

const std::string kDataDir = SOD_TEST_DATA_DIR;

std::filesystem::path fresh_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return json::parse(in);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("analyze reproduces the preset design points") {
  auto config = preset_config("cta126");
  config.format = "json";
  config.out_dir = fresh_dir("sod_cli_analyze").string();
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(config, out, err) == 0);

  const json report = read_json(std::filesystem::path(config.out_dir) / "analyze_report.json");
  CHECK(report["route_form"] == "hybrid");
  CHECK(report["x_f_km"].get<double>() == doctest::Approx(7.91).epsilon(0.05));
  CHECK(report["fleet"].get<double>() == doctest::Approx(4.76).epsilon(0.005));

  // Curve file: header plus the requested samples, totals re-validated.
  const CsvTable curves =
      read_csv_file((std::filesystem::path(config.out_dir) / "analyze_curves.csv").string());
  CHECK(curves.rows.size() == 200);
  const auto x_col = curves.column("x_f_km", "curves");
  CHECK(parse_double_field(curves.rows.front()[x_col], "x") == 0.0);
  CHECK(parse_double_field(curves.rows.back()[x_col], "x") == doctest::Approx(10.9));

  auto triangular = config;
  triangular.demand_kind = "triangular";
  triangular.out_dir = fresh_dir("sod_cli_analyze_tri").string();
  REQUIRE(cmd_analyze(triangular, out, err) == 0);
  const json tri = read_json(std::filesystem::path(triangular.out_dir) / "analyze_report.json");
  CHECK(tri["x_f_km"].get<double>() == doctest::Approx(9.28).epsilon(0.05));
}

TEST_CASE("a fixed-regime configuration pins the portion at zero") {
  auto config = preset_config("cta126");
  config.access_time_min = 0.01;  // walking is nearly free, detours are not
  config.format = "json";
  config.out_dir = fresh_dir("sod_cli_fixed").string();
  std::ostringstream out, err;
  REQUIRE(cmd_analyze(config, out, err) == 0);
  const json report = read_json(std::filesystem::path(config.out_dir) / "analyze_report.json");
  CHECK(report["route_form"] == "fixed");
  CHECK(report["x_f_km"].get<double>() == 0.0);

  // With negligible walk times the access curve is flat against the total.
  const CsvTable curves =
      read_csv_file((std::filesystem::path(config.out_dir) / "analyze_curves.csv").string());
  const auto access_col = curves.column("access", "curves");
  const auto total_col = curves.column("total", "curves");
  double min_access = 1e300, max_access = -1e300;
  for (const auto& row : curves.rows) {
    const double a = parse_double_field(row[access_col], "access");
    min_access = std::min(min_access, a);
    max_access = std::max(max_access, a);
  }
  CHECK(max_access - min_access <=
        0.01 * parse_double_field(curves.rows.front()[total_col], "total"));
}

TEST_CASE("optimize emits the joint-design table") {
  auto config = preset_config("cta84");
  config.format = "json";
  config.out_dir = fresh_dir("sod_cli_optimize").string();
  std::ostringstream out, err;
  REQUIRE(cmd_optimize(config, out, err) == 0);

  const json report = read_json(std::filesystem::path(config.out_dir) / "optimize_report.json");
  CHECK(report["vehicle"] == "van");
  CHECK(report["cost"]["total"].get<double>() == doctest::Approx(649.66).epsilon(0.01));

  const CsvTable table =
      read_csv_file((std::filesystem::path(config.out_dir) / "optimize_table.csv").string());
  CHECK(table.rows.size() == 5);
}

TEST_CASE("validation failures exit with code 2 and name the field") {
  auto config = preset_config("cta126");
  config.vehicle_speed_kmh = 0.0;
  std::ostringstream out, err;
  CHECK(cmd_analyze(config, out, err) == kExitValidation);
  CHECK(err.str().find("vehicle_speed_kmh") != std::string::npos);

  auto no_vehicles = preset_config("cta126");
  no_vehicles.vehicles.clear();
  err.str("");
  CHECK(cmd_optimize(no_vehicles, out, err) == kExitValidation);

  auto bad_sweep = preset_config("cta126");
  bad_sweep.sweep_param = "nonsense";
  bad_sweep.sweep_from = 1;
  bad_sweep.sweep_to = 2;
  bad_sweep.sweep_steps = 2;
  err.str("");
  CHECK(cmd_sweep(bad_sweep, out, err) == kExitValidation);
  CHECK(err.str().find("nonsense") != std::string::npos);
}

TEST_CASE("io failures exit with code 4") {
  auto config = preset_config("cta126");
  config.stations_path = "/nonexistent/stations.csv";
  config.demand_points_path = "/nonexistent/demand.csv";
  std::ostringstream out, err;
  CHECK(cmd_casestudy(config, out, err) == kExitIo);
}

TEST_CASE("an unserviceable demand profile exits with code 3") {
  const auto dir = fresh_dir("sod_cli_infeasible");
  const auto demand_csv = dir / "zero.csv";
  {
    std::ofstream f(demand_csv);
    f << "x_km,trips_per_h\n2,0\n5,0\n";
  }
  auto config = preset_config("cta126");
  config.demand_kind = "empirical";
  config.demand_csv = demand_csv.string();
  config.out_dir = dir.string();
  std::ostringstream out, err;
  CHECK(cmd_optimize(config, out, err) == kExitInfeasible);
}

TEST_CASE("operator-cost sweep tracks the sensitivity pattern") {
  auto config = preset_config("cta84");
  config.sweep_param = "operator_cost_scale";
  config.sweep_from = 1.0;
  config.sweep_to = 3.0;
  config.sweep_steps = 3;
  config.out_dir = fresh_dir("sod_cli_sweep").string();
  std::ostringstream out, err;
  REQUIRE(cmd_sweep(config, out, err) == 0);

  const CsvTable table =
      read_csv_file((std::filesystem::path(config.out_dir) / "sweep.csv").string());
  const auto value_col = table.column("value", "sweep");
  const auto vehicle_col = table.column("vehicle", "sweep");
  const auto x_col = table.column("x_f_km", "sweep");
  const auto total_col = table.column("total", "sweep");
  CHECK(table.rows.size() == 15);  // 3 values x 5 vehicles

  std::map<std::pair<std::string, std::string>, double> x_f, totals;
  for (const auto& row : table.rows) {
    const auto key = std::make_pair(row[value_col], row[vehicle_col]);
    x_f[key] = parse_double_field(row[x_col], "x_f");
    totals[key] = parse_double_field(row[total_col], "total");
  }
  CHECK(x_f[{"1", "minibus"}] == doctest::Approx(13.40).epsilon(0.05));
  CHECK(x_f[{"2", "minibus"}] == doctest::Approx(5.87).epsilon(0.05));
  CHECK(x_f[{"3", "minibus"}] == doctest::Approx(2.75).epsilon(0.05));

  // The unit-scale rows agree with a plain optimize run.
  auto plain = preset_config("cta84");
  plain.format = "json";
  plain.out_dir = fresh_dir("sod_cli_sweep_ref").string();
  REQUIRE(cmd_optimize(plain, out, err) == 0);
  const json report = read_json(std::filesystem::path(plain.out_dir) / "optimize_report.json");
  CHECK(totals[{"1", report["vehicle"].get<std::string>()}] ==
        doctest::Approx(report["cost"]["total"].get<double>()).epsilon(1e-9));

  // Costlier operations never extend the flexible portion.
  for (const std::string vehicle : {"car", "van", "20-seater", "minibus", "standard-bus"}) {
    CHECK(x_f[{"2", vehicle}] <= x_f[{"1", vehicle}] + 1e-9);
    CHECK(x_f[{"3", vehicle}] <= x_f[{"2", vehicle}] + 1e-9);
  }
}

TEST_CASE("case study run writes assignments, summary and geojson") {
  auto config = preset_config("cta126");
  config.stations_path = kDataDir + "/stations.csv";
  config.demand_points_path = kDataDir + "/demand_points.csv";
  config.emit_geojson = true;
  config.out_dir = fresh_dir("sod_cli_case").string();
  std::ostringstream out, err;
  REQUIRE(cmd_casestudy(config, out, err) == 0);

  const json summary = read_json(std::filesystem::path(config.out_dir) / "summary.json");
  CHECK(summary["demand"]["flexible_threshold_pax_h"].get<double>() ==
        doctest::Approx(35.5455).epsilon(1e-4));
  CHECK(summary["counts"]["routes"].get<int>() == 5);
  CHECK(std::filesystem::exists(std::filesystem::path(config.out_dir) / "assignments.csv"));
  CHECK(std::filesystem::exists(std::filesystem::path(config.out_dir) / "points.geojson"));
  // The threshold echo reaches the console, per-trip load included.
  CHECK(out.str().find("flexible threshold") != std::string::npos);
  CHECK(out.str().find("8.886") != std::string::npos);
}

TEST_CASE("an empty demand file warns and exits cleanly") {
  const auto dir = fresh_dir("sod_cli_empty");
  const auto demand_csv = dir / "empty.csv";
  {
    std::ofstream f(demand_csv);
    f << "id,x_km,y_km,trips_per_h\n";
  }
  auto config = preset_config("cta126");
  config.stations_path = kDataDir + "/stations.csv";
  config.demand_points_path = demand_csv.string();
  config.out_dir = dir.string();
  std::ostringstream out, err;
  CHECK(cmd_casestudy(config, out, err) == 0);
  CHECK(err.str().find("warning") != std::string::npos);
  const json summary = read_json(dir / "summary.json");
  CHECK(summary["counts"]["routes"].get<int>() == 0);
  CHECK(summary["demand"]["total_pax_h"].get<double>() == 0.0);
}

TEST_CASE("identical runs produce byte-identical outputs") {
  for (int run = 0; run < 2; ++run) {
    auto config = preset_config("cta84");
    config.out_dir = fresh_dir("sod_cli_det_" + std::to_string(run)).string();
    config.threads = run == 0 ? 1 : 4;
    std::ostringstream out, err;
    REQUIRE(cmd_optimize(config, out, err) == 0);
  }
  const auto a = read_text(std::filesystem::temp_directory_path() / "sod_cli_det_0" /
                           "optimize_table.csv");
  const auto b = read_text(std::filesystem::temp_directory_path() / "sod_cli_det_1" /
                           "optimize_table.csv");
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("config file merging and unknown-key rejection") {
  const auto dir = fresh_dir("sod_cli_config");
  const auto path = dir / "config.json";
  {
    std::ofstream f(path);
    f << R"({"headway_min": 10, "corridor": {"detour_km": 0.3}})";
  }
  auto config = preset_config("cta126");
  apply_config_file(config, path.string());
  CHECK(config.headway_min == 10.0);
  CHECK(config.detour_km == 0.3);
  CHECK(config.route_length_km == 10.9);  // untouched preset value

  {
    std::ofstream f(path);
    f << R"({"corridor": {"detour": 0.3}})";
  }
  CHECK_THROWS_AS(apply_config_file(config, path.string()), std::invalid_argument);

  {
    std::ofstream f(path);
    f << R"({"vehicles": {"catalog": [
        {"name": "pod", "capacity": 4, "operating_cost_per_km": 0.5, "vehicle_cost_per_h": 2.0}
      ]}})";
  }
  apply_config_file(config, path.string());
  REQUIRE(config.vehicles.size() == 1);
  CHECK(config.vehicles[0].name == "pod");
}
