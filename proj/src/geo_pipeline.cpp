#include "sod/geo_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "sod/csv.hpp"
#include "sod/errors.hpp"
#include "sod/parallel.hpp"

namespace sod {

namespace {

using nlohmann::json;

double squared_distance(double ax, double ay, double bx, double by) {
  const double dx = ax - bx, dy = ay - by;
  return dx * dx + dy * dy;
}

struct CorridorWork {
  std::string id;
  std::size_t station = 0;
  CorridorAxis axis;
  std::vector<std::size_t> members;  // indices into the demand point list
};

// Splits one sign-of-y subzone into up to `limit` corridors. Seeds are picked
// farthest-first: the next seed is the point farthest (in perpendicular
// distance) from every existing seed axis; points then join the nearest axis.
std::vector<CorridorWork> split_subzone(const Station& station, std::size_t station_index,
                                        const std::vector<DemandPoint>& points,
                                        const std::vector<std::size_t>& members,
                                        const CorridorAxis& zone_axis, const std::string& base_id,
                                        int limit) {
  if (limit <= 1 || members.size() <= 1) {
    return {{base_id, station_index, zone_axis, members}};
  }

  auto axis_through = [&](std::size_t seed) {
    CorridorAxis a;
    const double dx = points[seed].x_km - station.x_km;
    const double dy = points[seed].y_km - station.y_km;
    const double d = std::sqrt(dx * dx + dy * dy);
    a.length_km = d;
    a.degenerate = !(d > 0.0);
    if (!a.degenerate) {
      a.unit_x = dx / d;
      a.unit_y = dy / d;
    }
    return a;
  };
  auto perp_distance = [&](const CorridorAxis& a, std::size_t p) {
    const double vx = points[p].x_km - station.x_km;
    const double vy = points[p].y_km - station.y_km;
    return std::abs(a.unit_x * vy - a.unit_y * vx);
  };

  // Farthest member from the station starts the seed list.
  std::vector<std::size_t> seeds;
  {
    std::size_t best = members.front();
    double best_d = -1.0;
    for (std::size_t p : members) {
      const double d = squared_distance(points[p].x_km, points[p].y_km, station.x_km, station.y_km);
      if (d > best_d || (d == best_d && points[p].id < points[best].id)) {
        best_d = d;
        best = p;
      }
    }
    if (!(best_d > 0.0)) return {{base_id, station_index, zone_axis, members}};
    seeds.push_back(best);
  }
  std::vector<CorridorAxis> axes{axis_through(seeds[0])};
  while (static_cast<int>(seeds.size()) < limit) {
    std::size_t best = members.front();
    double best_d = -1.0;
    for (std::size_t p : members) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& a : axes) d = std::min(d, perp_distance(a, p));
      if (d > best_d || (d == best_d && points[p].id < points[best].id)) {
        best_d = d;
        best = p;
      }
    }
    if (!(best_d > 1e-12)) break;
    seeds.push_back(best);
    axes.push_back(axis_through(best));
  }

  std::vector<CorridorWork> out(seeds.size());
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    out[k].id = base_id + std::to_string(k);
    out[k].station = station_index;
    out[k].axis = axes[k];
  }
  for (std::size_t p : members) {
    std::size_t pick = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < axes.size(); ++k) {
      const double d = perp_distance(axes[k], p);
      if (d < best_d) {
        best_d = d;
        pick = k;
      }
    }
    out[pick].members.push_back(p);
  }
  // Each corridor reaches as far as its farthest member projects.
  for (auto& w : out) {
    double reach = 0.0;
    for (std::size_t p : w.members) {
      const double vx = points[p].x_km - station.x_km;
      const double vy = points[p].y_km - station.y_km;
      reach = std::max(reach, vx * w.axis.unit_x + vy * w.axis.unit_y);
    }
    w.axis.length_km = reach;
    w.axis.degenerate = !(reach > 0.0);
  }
  std::erase_if(out, [](const CorridorWork& w) { return w.members.empty(); });
  return out;
}

struct CorridorOutput {
  CorridorReport report;
  std::vector<CorridorAssignment> assignments;
  // Time aggregates for the summary, pax-h per hour of operation.
  double access_time_base = 0.0, access_time_sod = 0.0;
  double wait_time = 0.0;
  double ride_time_base = 0.0, ride_time_sod = 0.0;
  std::size_t flexible_points = 0;
  double flexible_pax = 0.0;
  double fixed_labeled_pax = 0.0;
};

CorridorOutput process_corridor(const CorridorWork& work, const std::vector<Station>& stations,
                                const std::vector<DemandPoint>& points,
                                const PipelineConfig& config) {
  const Station& station = stations[work.station];
  CorridorOutput out;
  out.report.corridor_id = work.id;
  out.report.station_id = station.id;
  out.report.length_km = work.axis.length_km;

  const double walk_reach_km = config.walk_speed_kmh * config.max_access_time_h;
  const double max_width_km = 2.0 * walk_reach_km;

  struct Member {
    std::size_t point;
    AxisPosition pos;
  };
  std::vector<Member> members;
  members.reserve(work.members.size());
  double total = 0.0;
  for (std::size_t p : work.members) {
    Member m{p, {}};
    if (!work.axis.degenerate) m.pos = project_onto_axis(station, work.axis, points[p]);
    members.push_back(m);
    total += points[p].trips_per_h;
  }
  out.report.total_pax_h = total;

  auto emit = [&](const Member& m, ServiceArea service) {
    out.assignments.push_back({points[m.point].id, station.id, work.id, m.pos.x_km, m.pos.y_km,
                               service, std::abs(m.pos.y_km) > walk_reach_km});
  };

  if (work.axis.degenerate || !(total > 0.0)) {
    out.report.degenerate = work.axis.degenerate;
    out.report.empty = !(total > 0.0);
    for (const auto& m : members) emit(m, ServiceArea::FixedArea);
    return out;
  }

  // Members in rising x (far end first), ids breaking ties, so classification
  // labels line up with a deterministic order.
  std::sort(members.begin(), members.end(), [&](const Member& a, const Member& b) {
    if (a.pos.x_km != b.pos.x_km) return a.pos.x_km < b.pos.x_km;
    return points[a.point].id < points[b.point].id;
  });
  std::vector<AxisPosition> positions;
  std::vector<double> trips;
  std::vector<WeightedPosition> weighted;
  positions.reserve(members.size());
  trips.reserve(members.size());
  weighted.reserve(members.size());
  for (const auto& m : members) {
    positions.push_back(m.pos);
    trips.push_back(points[m.point].trips_per_h);
    weighted.push_back({m.pos.x_km, points[m.point].trips_per_h});
  }

  CorridorParameters params = extract_corridor_parameters(
      positions, trips, work.axis.length_km, config.walk_speed_kmh, max_width_km, config.bins);
  out.report.catchment_width_km = params.width_km;
  const Corridor geometry{work.axis.length_km, config.vehicle_speed_kmh, config.layover_h,
                          params.cross};

  const FlexibleClassification cls =
      classify_flexible(geometry, params.profile, weighted, config.costs, config.headway_h);
  out.report.flexible_pax_h = cls.threshold_pax_h;
  out.report.cutoff_x_km = cls.cutoff_x_km;
  for (std::size_t i = 0; i < members.size(); ++i) {
    emit(members[i], cls.labels[i]);
    if (cls.labels[i] == ServiceArea::FlexibleArea) {
      ++out.flexible_points;
      out.flexible_pax += trips[i];
    } else {
      out.fixed_labeled_pax += trips[i];
    }
  }

  out.report.baseline =
      cost_breakdown(geometry, params.profile, config.costs, config.headway_h, 0.0);
  out.report.semi_on_demand = cost_breakdown(geometry, params.profile, config.costs,
                                             config.headway_h, out.report.cutoff_x_km);

  // Time aggregates follow from the cost components and their value weights.
  const double value = config.costs.value_of_time;
  out.access_time_base = out.report.baseline.access / (value * config.costs.access_factor);
  out.access_time_sod = out.report.semi_on_demand.access / (value * config.costs.access_factor);
  out.wait_time = out.report.baseline.waiting / (value * config.costs.waiting_factor);
  out.ride_time_base = (out.report.baseline.riding_x + out.report.baseline.riding_y) / value;
  out.ride_time_sod =
      (out.report.semi_on_demand.riding_x + out.report.semi_on_demand.riding_y) / value;
  return out;
}

void accumulate(ModeTotals& mode, const CostBreakdown& b) {
  mode.access += b.access;
  mode.waiting += b.waiting;
  mode.riding += b.riding_x + b.riding_y;
  mode.user += b.user();
  mode.operating += b.operating_x + b.operating_y;
  mode.vehicle += b.vehicle;
  mode.operator_total += b.operator_cost();
  mode.generalized += b.total;
}

json mode_to_json(const ModeTotals& m) {
  return json{{"access", m.access},
              {"waiting", m.waiting},
              {"riding", m.riding},
              {"user", m.user},
              {"operating", m.operating},
              {"vehicle", m.vehicle},
              {"operator_total", m.operator_total},
              {"generalized", m.generalized},
              {"avg_access_min", m.avg_access_min},
              {"avg_wait_min", m.avg_wait_min},
              {"avg_ride_min", m.avg_ride_min}};
}

double pct_change(double base, double now) {
  return base != 0.0 ? (now - base) / base * 100.0 : 0.0;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

const char* service_area_name(ServiceArea area) {
  return area == ServiceArea::FixedArea ? "fixed" : "flexible";
}

std::vector<std::size_t> assign_to_nearest_station(const std::vector<Station>& stations,
                                                   const std::vector<DemandPoint>& points) {
  if (stations.empty())
    throw std::invalid_argument("assign_to_nearest_station: at least one station required");
  std::vector<std::size_t> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < stations.size(); ++s) {
      const double d =
          squared_distance(points[p].x_km, points[p].y_km, stations[s].x_km, stations[s].y_km);
      if (d < best_d || (d == best_d && stations[s].id < stations[best].id)) {
        best_d = d;
        best = s;
      }
    }
    out[p] = best;
  }
  return out;
}

CorridorAxis define_corridor_axis(const Station& station,
                                  const std::vector<DemandPoint>& zone_points) {
  if (zone_points.empty())
    throw std::invalid_argument("define_corridor_axis: zone has no points");
  const DemandPoint* far = &zone_points.front();
  double far_d = -1.0;
  for (const auto& p : zone_points) {
    const double d = squared_distance(p.x_km, p.y_km, station.x_km, station.y_km);
    if (d > far_d || (d == far_d && p.id < far->id)) {
      far_d = d;
      far = &p;
    }
  }
  CorridorAxis axis;
  axis.length_km = std::sqrt(std::max(0.0, far_d));
  axis.degenerate = !(axis.length_km > 0.0);
  if (!axis.degenerate) {
    axis.unit_x = (far->x_km - station.x_km) / axis.length_km;
    axis.unit_y = (far->y_km - station.y_km) / axis.length_km;
  }
  return axis;
}

AxisPosition project_onto_axis(const Station& station, const CorridorAxis& axis,
                               const DemandPoint& point) {
  if (axis.degenerate) throw std::invalid_argument("project_onto_axis: degenerate axis");
  const double vx = point.x_km - station.x_km;
  const double vy = point.y_km - station.y_km;
  const double along = vx * axis.unit_x + vy * axis.unit_y;  // distance from the station
  AxisPosition out;
  out.x_km = std::clamp(axis.length_km - along, 0.0, axis.length_km);
  out.y_km = axis.unit_x * vy - axis.unit_y * vx;
  return out;
}

CorridorParameters extract_corridor_parameters(const std::vector<AxisPosition>& positions,
                                               const std::vector<double>& trips_per_h,
                                               double length_km, double walk_speed_kmh,
                                               double max_width_km, int bins) {
  if (positions.empty())
    throw std::invalid_argument("extract_corridor_parameters: corridor has no points");
  if (positions.size() != trips_per_h.size())
    throw std::invalid_argument("extract_corridor_parameters: positions/trips size mismatch");

  double abs_offset_sum = 0.0;
  std::vector<WeightedPosition> samples;
  samples.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    abs_offset_sum += std::abs(positions[i].y_km);
    samples.push_back({positions[i].x_km, trips_per_h[i]});
  }
  // Under a uniform offset the mean |y| is a quarter of the catchment width.
  const double width_km = std::min(4.0 * abs_offset_sum / positions.size(), max_width_km);
  return {DemandDistribution::empirical(samples, length_km, bins),
          cross_section_from_uniform_width(width_km, walk_speed_kmh), width_km};
}

FlexibleClassification classify_flexible(const Corridor& geometry,
                                         const DemandDistribution& profile,
                                         const std::vector<WeightedPosition>& members,
                                         const CostParams& costs, double headway_h) {
  const double total = profile.total_pax_h();
  FlexibleClassification out;
  // A zero detour means lateral pickups are free; everything goes flexible.
  if (geometry.cross.detour_km == 0.0) {
    out.threshold_pax_h = total;
    out.degenerate_detour = true;
  } else {
    out.threshold_pax_h =
        std::clamp(optimal_flexible_demand(geometry, costs, headway_h), 0.0, total);
  }
  out.cutoff_x_km = profile.inverse_cumulative(out.threshold_pax_h);

  std::vector<std::size_t> order(members.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return members[a].x_km < members[b].x_km;
  });
  out.labels.assign(members.size(), ServiceArea::FixedArea);
  const double tol = 1e-9 * std::max(total, 1.0);
  double remaining = out.threshold_pax_h;
  for (std::size_t i : order) {
    if (remaining > tol) {
      out.labels[i] = ServiceArea::FlexibleArea;
      remaining -= members[i].trips_per_h;
    }
  }
  return out;
}

PipelineResult run_pipeline(const std::vector<Station>& stations,
                            const std::vector<DemandPoint>& points,
                            const PipelineConfig& config) {
  config.costs.validate();
  if (!(config.headway_h > 0.0)) throw std::invalid_argument("pipeline: headway must be > 0");
  if (!(config.walk_speed_kmh > 0.0))
    throw std::invalid_argument("pipeline: walk_speed_kmh must be > 0");
  if (!(config.max_access_time_h >= 0.0))
    throw std::invalid_argument("pipeline: max_access_time_h must be >= 0");
  if (config.bins < 1) throw std::invalid_argument("pipeline: bins must be >= 1");
  if (config.max_corridors_per_subzone < 1)
    throw std::invalid_argument("pipeline: max_corridors_per_subzone must be >= 1");

  const std::vector<std::size_t> nearest = assign_to_nearest_station(stations, points);

  // Corridor list: one or more per sign-of-y subzone of each station zone.
  std::vector<CorridorWork> work;
  for (std::size_t s = 0; s < stations.size(); ++s) {
    std::vector<std::size_t> zone;
    for (std::size_t p = 0; p < points.size(); ++p)
      if (nearest[p] == s) zone.push_back(p);
    if (zone.empty()) continue;

    std::vector<DemandPoint> zone_points;
    zone_points.reserve(zone.size());
    for (std::size_t p : zone) zone_points.push_back(points[p]);
    const CorridorAxis axis = define_corridor_axis(stations[s], zone_points);

    if (axis.degenerate) {
      work.push_back({stations[s].id + "+", s, axis, zone});
      continue;
    }
    std::vector<std::size_t> plus, minus;
    for (std::size_t p : zone) {
      const AxisPosition pos = project_onto_axis(stations[s], axis, points[p]);
      (pos.y_km >= 0.0 ? plus : minus).push_back(p);
    }
    for (const auto* side : {&plus, &minus}) {
      if (side->empty()) continue;
      const std::string base = stations[s].id + (side == &plus ? "+" : "-");
      auto split = split_subzone(stations[s], s, points, *side, axis, base,
                                 config.max_corridors_per_subzone);
      work.insert(work.end(), split.begin(), split.end());
    }
  }

  std::vector<CorridorOutput> outputs(work.size());
  parallel_for(work.size(), config.threads,
               [&](std::size_t i) { outputs[i] = process_corridor(work[i], stations, points, config); });

  PipelineResult result;
  CaseStudySummary& summary = result.summary;
  summary.stations = stations.size();
  summary.points = points.size();

  double pax_weighted_wait = 0.0;
  double included_pax = 0.0;
  for (auto& o : outputs) {
    result.assignments.insert(result.assignments.end(), o.assignments.begin(),
                              o.assignments.end());
    result.corridors.push_back(o.report);
    if (o.report.empty || o.report.degenerate) continue;

    summary.routes += 1;
    const bool has_flexible = o.flexible_pax > 0.0;
    const bool has_fixed = o.fixed_labeled_pax > 0.0;
    if (has_flexible && has_fixed) summary.routes_hybrid += 1;
    else if (has_flexible) summary.routes_fully_flexible += 1;
    else summary.routes_fixed_only += 1;

    summary.flexible_points += o.flexible_points;
    summary.total_pax_h += o.report.total_pax_h;
    summary.flexible_pax_h += o.flexible_pax;
    included_pax += o.report.total_pax_h;
    pax_weighted_wait += o.wait_time;

    accumulate(summary.baseline, o.report.baseline);
    accumulate(summary.semi_on_demand, o.report.semi_on_demand);
    summary.baseline.avg_access_min += o.access_time_base;
    summary.semi_on_demand.avg_access_min += o.access_time_sod;
    summary.baseline.avg_ride_min += o.ride_time_base;
    summary.semi_on_demand.avg_ride_min += o.ride_time_sod;
  }
  if (included_pax > 0.0) {
    for (ModeTotals* mode : {&summary.baseline, &summary.semi_on_demand}) {
      mode->avg_access_min *= 60.0 / included_pax;
      mode->avg_ride_min *= 60.0 / included_pax;
      mode->avg_wait_min = 60.0 * pax_weighted_wait / included_pax;
    }
  }

  // The threshold is shared by every corridor: under the uniform-width
  // catchment the access/detour ratio is width-independent.
  {
    const CrossSection unit = cross_section_from_uniform_width(1.0, config.walk_speed_kmh);
    const Corridor dummy{1.0, config.vehicle_speed_kmh, config.layover_h, unit};
    summary.flexible_threshold_pax_h =
        optimal_flexible_demand(dummy, config.costs, config.headway_h);
  }

  std::sort(result.assignments.begin(), result.assignments.end(),
            [](const CorridorAssignment& a, const CorridorAssignment& b) {
              return a.point_id < b.point_id;
            });
  std::sort(result.corridors.begin(), result.corridors.end(),
            [](const CorridorReport& a, const CorridorReport& b) {
              return a.corridor_id < b.corridor_id;
            });
  return result;
}

std::vector<Station> read_stations_csv(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  const std::size_t id_col = table.column("id", path);
  const std::size_t x_col = table.column("x_km", path);
  const std::size_t y_col = table.column("y_km", path);
  std::vector<Station> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = path + " row " + std::to_string(r + 2);
    out.push_back({table.rows[r][id_col],
                   parse_double_field(table.rows[r][x_col], where + ", x_km"),
                   parse_double_field(table.rows[r][y_col], where + ", y_km")});
  }
  return out;
}

std::vector<Station> read_stations_geojson(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features"))
    throw IoError(path + ": expected a GeoJSON FeatureCollection");
  std::vector<Station> out;
  std::size_t n = 0;
  for (const auto& feature : doc["features"]) {
    ++n;
    const std::string where = path + " feature " + std::to_string(n);
    const auto& geom = feature.value("geometry", json::object());
    if (geom.value("type", "") != "Point") throw IoError(where + ": only Point geometry supported");
    const auto& coords = geom.value("coordinates", json::array());
    if (coords.size() < 2) throw IoError(where + ": Point needs two coordinates");
    std::string id;
    if (feature.contains("properties") && feature["properties"].contains("id")) {
      const auto& pid = feature["properties"]["id"];
      id = pid.is_string() ? pid.get<std::string>() : pid.dump();
    } else if (feature.contains("id")) {
      id = feature["id"].is_string() ? feature["id"].get<std::string>() : feature["id"].dump();
    } else {
      throw IoError(where + ": missing id property");
    }
    out.push_back({id, coords[0].get<double>(), coords[1].get<double>()});
  }
  return out;
}

std::vector<DemandPoint> read_demand_points_csv(const std::string& path) {
  const CsvTable table = read_csv_file(path);
  const std::size_t id_col = table.column("id", path);
  const std::size_t x_col = table.column("x_km", path);
  const std::size_t y_col = table.column("y_km", path);
  const std::size_t t_col = table.column("trips_per_h", path);
  std::vector<DemandPoint> out;
  out.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::string where = path + " row " + std::to_string(r + 2);
    DemandPoint p{table.rows[r][id_col],
                  parse_double_field(table.rows[r][x_col], where + ", x_km"),
                  parse_double_field(table.rows[r][y_col], where + ", y_km"),
                  parse_double_field(table.rows[r][t_col], where + ", trips_per_h")};
    if (!(p.trips_per_h >= 0.0)) throw IoError(where + ": trips_per_h must be >= 0");
    out.push_back(std::move(p));
  }
  return out;
}

void write_assignments_csv(const std::string& path,
                           const std::vector<CorridorAssignment>& assignments) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "point_id,station_id,corridor_id,x_km,y_km,service,beyond_walk_coverage\n";
  for (const auto& a : assignments) {
    out << a.point_id << ',' << a.station_id << ',' << a.corridor_id << ','
        << format_double(a.x_along_axis_km) << ',' << format_double(a.y_offset_km) << ','
        << service_area_name(a.service) << ',' << (a.beyond_walk_coverage ? 1 : 0) << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

std::string summary_to_json(const CaseStudySummary& s) {
  json doc{
      {"counts",
       {{"stations", s.stations},
        {"routes", s.routes},
        {"routes_hybrid", s.routes_hybrid},
        {"routes_fully_flexible", s.routes_fully_flexible},
        {"routes_fixed_only", s.routes_fixed_only},
        {"points", s.points},
        {"flexible_points", s.flexible_points}}},
      {"demand",
       {{"total_pax_h", s.total_pax_h},
        {"flexible_pax_h", s.flexible_pax_h},
        {"flexible_threshold_pax_h", s.flexible_threshold_pax_h}}},
      {"baseline", mode_to_json(s.baseline)},
      {"semi_on_demand", mode_to_json(s.semi_on_demand)},
      {"pct_change",
       {{"access", pct_change(s.baseline.access, s.semi_on_demand.access)},
        {"waiting", pct_change(s.baseline.waiting, s.semi_on_demand.waiting)},
        {"riding", pct_change(s.baseline.riding, s.semi_on_demand.riding)},
        {"user", pct_change(s.baseline.user, s.semi_on_demand.user)},
        {"operating", pct_change(s.baseline.operating, s.semi_on_demand.operating)},
        {"vehicle", pct_change(s.baseline.vehicle, s.semi_on_demand.vehicle)},
        {"operator_total",
         pct_change(s.baseline.operator_total, s.semi_on_demand.operator_total)},
        {"generalized", pct_change(s.baseline.generalized, s.semi_on_demand.generalized)}}}};
  return doc.dump(2) + "\n";
}

void write_summary_json(const std::string& path, const CaseStudySummary& summary) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << summary_to_json(summary);
  if (!out) throw IoError("write failed: " + path);
}

void write_points_geojson(const std::string& path,
                          const std::vector<CorridorAssignment>& assignments,
                          const std::vector<DemandPoint>& points) {
  json features = json::array();
  for (const auto& a : assignments) {
    const DemandPoint* p = nullptr;
    for (const auto& candidate : points)
      if (candidate.id == a.point_id) {
        p = &candidate;
        break;
      }
    if (!p) continue;
    features.push_back(json{{"type", "Feature"},
                            {"geometry", {{"type", "Point"}, {"coordinates", {p->x_km, p->y_km}}}},
                            {"properties",
                             {{"id", a.point_id},
                              {"station_id", a.station_id},
                              {"corridor_id", a.corridor_id},
                              {"x_km", a.x_along_axis_km},
                              {"y_km", a.y_offset_km},
                              {"trips_per_h", p->trips_per_h},
                              {"service", service_area_name(a.service)},
                              {"beyond_walk_coverage", a.beyond_walk_coverage}}}});
  }
  json doc{{"type", "FeatureCollection"}, {"features", features}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << doc.dump(2) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

PlanarPoint project_equirectangular(double lon_deg, double lat_deg, double ref_lon_deg,
                                    double ref_lat_deg) {
  constexpr double kEarthRadiusKm = 6371.0;
  const double to_rad = std::numbers::pi / 180.0;
  return {kEarthRadiusKm * (lon_deg - ref_lon_deg) * to_rad * std::cos(ref_lat_deg * to_rad),
          kEarthRadiusKm * (lat_deg - ref_lat_deg) * to_rad};
}

}  // namespace sod
