#include "thermorisk/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace thermorisk {

using detail::format_exact;
using detail::trim;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
  return ss.str();
}

// ---------------------------------------------------------------------------
// Material database

namespace {

const std::vector<std::string> kMaterialColumns{"name", "thickness_m", "conductivity_W_mK",
                                                "rsi_m2K_W", "std_fraction"};
const std::vector<std::string> kClimateColumns{"month",      "t_out_C",    "hours",
                                               "irr_N_W_m2", "irr_S_W_m2", "irr_E_W_m2",
                                               "irr_W_W_m2"};

void check_header(std::string_view line, const std::vector<std::string>& expected,
                  const std::string& source) {
  const auto cells = detail::split(line, ',');
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= cells.size() || trim(cells[i]) != expected[i]) {
      throw ParseError(source, 1,
                       "missing required column '" + expected[i] + "' at position " +
                           std::to_string(i + 1));
    }
  }
  if (cells.size() != expected.size()) {
    throw ParseError(source, 1, "unexpected column '" + std::string(trim(cells[expected.size()])) +
                                    "'");
  }
}

std::optional<double> optional_cell(std::string_view cell, const std::string& column,
                                    const std::string& source, std::size_t line) {
  const auto t = trim(cell);
  if (t.empty()) return std::nullopt;
  const auto v = detail::parse_double(t);
  if (!v) {
    throw ParseError(source, line,
                     "non-numeric cell '" + std::string(t) + "' in column '" + column + "'");
  }
  return v;
}

double required_cell(std::string_view cell, const std::string& column, const std::string& source,
                     std::size_t line) {
  const auto v = optional_cell(cell, column, source, line);
  if (!v) throw ParseError(source, line, "empty cell in column '" + column + "'");
  return *v;
}

}  // namespace

std::vector<MaterialRecord> parse_material_db(std::string_view text, const std::string& source) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "empty material database");
  check_header(lines[0], kMaterialColumns, source);

  std::vector<MaterialRecord> records;
  std::set<std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    const auto cells = detail::split(lines[i], ',');
    if (cells.size() != kMaterialColumns.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(kMaterialColumns.size()) + " cells, got " +
                           std::to_string(cells.size()));
    }
    MaterialRecord m;
    m.name = std::string(trim(cells[0]));
    if (m.name.empty()) throw ParseError(source, line_no, "empty material name");
    if (!names.insert(m.name).second) {
      throw ParseError(source, line_no, "duplicate material name '" + m.name + "'");
    }
    m.thickness_m = optional_cell(cells[1], kMaterialColumns[1], source, line_no);
    m.conductivity_W_mK = optional_cell(cells[2], kMaterialColumns[2], source, line_no);
    const auto rsi = optional_cell(cells[3], kMaterialColumns[3], source, line_no);
    m.std_fraction = optional_cell(cells[4], kMaterialColumns[4], source, line_no).value_or(0.0);

    if (m.thickness_m && !(*m.thickness_m > 0.0)) {
      throw ParseError(source, line_no, "thickness_m must be > 0 for '" + m.name + "'");
    }
    if (m.conductivity_W_mK && !(*m.conductivity_W_mK > 0.0)) {
      throw ParseError(source, line_no, "conductivity_W_mK must be > 0 for '" + m.name + "'");
    }
    if (rsi) {
      if (!(*rsi > 0.0)) {
        throw ParseError(source, line_no, "rsi_m2K_W must be > 0 for '" + m.name + "'");
      }
      m.rsi_m2K_W = *rsi;
    } else if (m.thickness_m && m.conductivity_W_mK) {
      m.rsi_m2K_W = *m.thickness_m / *m.conductivity_W_mK;
    } else {
      throw ParseError(source, line_no,
                       "'" + m.name + "' needs rsi_m2K_W or thickness_m with conductivity_W_mK");
    }
    if (!(m.std_fraction >= 0.0 && m.std_fraction < 1.0)) {
      throw ParseError(source, line_no, "std_fraction must lie in [0, 1) for '" + m.name + "'");
    }
    records.push_back(std::move(m));
  }
  return records;
}

std::vector<MaterialRecord> load_material_db(const std::filesystem::path& path) {
  return parse_material_db(read_text_file(path), path.string());
}

// ---------------------------------------------------------------------------
// Climate table

ClimateTable parse_climate(std::string_view text, const std::string& source) {
  const auto lines = detail::split_lines(text);
  if (lines.empty()) throw ParseError(source, 1, "empty climate table");
  check_header(lines[0], kClimateColumns, source);

  ClimateTable table;
  std::size_t row = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (trim(lines[i]).empty()) continue;
    const auto cells = detail::split(lines[i], ',');
    if (cells.size() != kClimateColumns.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(kClimateColumns.size()) + " cells, got " +
                           std::to_string(cells.size()));
    }
    if (row >= 12) throw ParseError(source, line_no, "more than 12 monthly rows");
    auto& m = table.months[row];
    const auto month = detail::parse_int<int>(cells[0]);
    if (!month) throw ParseError(source, line_no, "non-numeric cell in column 'month'");
    if (*month != static_cast<int>(row) + 1) {
      throw ParseError(source, line_no,
                       "month " + std::to_string(*month) + " out of order; expected " +
                           std::to_string(row + 1));
    }
    m.month = *month;
    m.t_out_C = required_cell(cells[1], kClimateColumns[1], source, line_no);
    m.hours = required_cell(cells[2], kClimateColumns[2], source, line_no);
    for (const auto o : kOrientations) {
      const auto col = 3 + static_cast<std::size_t>(o);
      m.irradiance_W_m2[o] = required_cell(cells[col], kClimateColumns[col], source, line_no);
    }
    ++row;
  }
  if (row != 12) {
    throw ParseError(source, lines.size(),
                     "expected 12 monthly rows, got " + std::to_string(row));
  }
  return table;
}

ClimateTable load_climate(const std::filesystem::path& path) {
  auto table = parse_climate(read_text_file(path), path.string());
  auto report = validate_climate(table);
  if (!report.empty()) throw ValidationError(std::move(report));
  return table;
}

ValidationReport validate_climate(const ClimateTable& climate) {
  ValidationReport report;
  for (std::size_t i = 0; i < climate.months.size(); ++i) {
    const auto& m = climate.months[i];
    const std::string path = "climate[" + std::to_string(i + 1) + "]";
    if (m.month != static_cast<int>(i) + 1) {
      report.push_back({path + ".month", "ClimateTable months 1..12 in order",
                        std::to_string(m.month)});
    }
    if (!std::isfinite(m.t_out_C)) {
      report.push_back({path + ".t_out_C", "finite temperature", format_exact(m.t_out_C)});
    }
    if (!(m.hours >= 672.0 && m.hours <= 744.0)) {
      report.push_back({path + ".hours", "ClimateTable hours in [672, 744]", format_exact(m.hours)});
    }
    for (const auto o : kOrientations) {
      if (!(m.irradiance_W_m2[o] >= 0.0)) {
        report.push_back({path + ".irr_" + std::string(orientation_label(o)) + "_W_m2",
                          "ClimateTable irradiance >= 0", format_exact(m.irradiance_W_m2[o])});
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Merge

namespace {

struct AssemblySlot {
  AssemblyProperty DesignOption::*member;
  const char* label;
  bool invert;  // glazing: the db carries RSI, the option wants U
};

constexpr AssemblySlot kSlots[] = {
    {&DesignOption::wall_rsi, "wall_rsi", false},
    {&DesignOption::floor_rsi, "floor_rsi", false},
    {&DesignOption::roof_rsi, "roof_rsi", false},
    {&DesignOption::glazing_u, "glazing_u", true},
};

}  // namespace

ProjectConfig merge_material_properties(ProjectConfig project,
                                        std::span<const MaterialRecord> db) {
  std::map<std::string, const MaterialRecord*> by_name;
  for (const auto& m : db) by_name.emplace(m.name, &m);

  std::vector<std::string> missing;
  for (auto& option : project.options) {
    for (const auto& slot : kSlots) {
      auto& prop = option.*slot.member;
      if (prop.materials.empty()) {
        if (!prop.value) {
          missing.push_back("option " + std::to_string(option.id) + " " + slot.label);
        }
        continue;
      }
      double rsi_sum = 0.0;
      double variance_sum = 0.0;
      bool complete = true;
      for (const auto& name : prop.materials) {
        const auto it = by_name.find(name);
        if (it == by_name.end()) {
          if (!prop.value) missing.push_back(name);
          complete = false;
          continue;
        }
        rsi_sum += it->second->rsi_m2K_W;
        const double sd = it->second->std_fraction * it->second->rsi_m2K_W;
        variance_sum += sd * sd;
      }
      if (!complete) continue;
      if (!prop.value) prop.value = slot.invert ? 1.0 / rsi_sum : rsi_sum;
      // Layers in series: independent layer spreads add in quadrature.
      if (!prop.std_fraction) prop.std_fraction = std::sqrt(variance_sum) / rsi_sum;
    }
  }
  if (!missing.empty()) throw UnresolvedMaterialError(std::move(missing));
  return project;
}

// ---------------------------------------------------------------------------
// Geometry

EnvelopeAreas derive_areas(const BuildingGeometry& g) {
  EnvelopeAreas a;
  const double footprint = g.length_m * g.width_m;
  a.gross_floor_m2 = footprint * g.stories;
  a.roof_m2 = footprint;
  a.ground_floor_m2 = footprint;
  const double height = g.stories * g.story_height_m;
  const PerOrientation wwr = g.wwr.value_or(PerOrientation{});
  for (const auto o : kOrientations) {
    const bool long_side = o == Orientation::North || o == Orientation::South;
    a.facade_m2[o] = (long_side ? g.length_m : g.width_m) * height;
    a.glazing_m2[o] = a.facade_m2[o] * wwr[o];
    a.opaque_m2[o] = a.facade_m2[o] - a.glazing_m2[o];
  }
  return a;
}

BuildingGeometry option_geometry(const ProjectConfig& project, const DesignOption& option) {
  BuildingGeometry g = project.geometry;
  if (option.wwr) g.wwr = option.wwr;
  return g;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void positive(const std::string& path, const char* rule, double v) {
    if (!(v > 0.0)) add(path, rule, v);
  }
  void non_negative(const std::string& path, const char* rule, double v) {
    if (!(v >= 0.0)) add(path, rule, v);
  }
  void fraction(const std::string& path, const char* rule, double v) {
    if (!(v >= 0.0 && v <= 1.0)) add(path, rule, v);
  }
  void add(const std::string& path, const std::string& rule, double v) {
    report_.push_back({path, rule, format_exact(v)});
  }
  void add(const std::string& path, const std::string& rule, const std::string& actual) {
    report_.push_back({path, rule, actual});
  }

 private:
  ValidationReport& report_;
};

void check_wwr(Checker& c, const std::string& prefix, const PerOrientation& wwr) {
  for (const auto o : kOrientations) {
    c.fraction(prefix + ".wwr_" + std::string(orientation_label(o)),
               "BuildingGeometry.wwr in [0, 1]", wwr[o]);
  }
}

void check_assembly(Checker& c, const std::string& path, const char* rule,
                    const AssemblyProperty& a, Resolution resolution) {
  if (a.value) {
    c.positive(path, rule, *a.value);
  } else if (resolution == Resolution::Required || a.materials.empty()) {
    c.add(path, "property resolved from project or material database", "unresolved");
  }
  if (a.std_fraction && !(*a.std_fraction >= 0.0 && *a.std_fraction < 1.0)) {
    c.add(path + "_std_fraction", "MaterialRecord.std_fraction in [0, 1)", *a.std_fraction);
  }
}

}  // namespace

ValidationReport validate(const ProjectConfig& p, Resolution resolution) {
  ValidationReport report;
  Checker c(report);

  const auto& g = p.geometry;
  c.positive("geometry.length_m", "BuildingGeometry.length > 0", g.length_m);
  c.positive("geometry.width_m", "BuildingGeometry.width > 0", g.width_m);
  if (g.stories <= 0) c.add("geometry.stories", "BuildingGeometry.stories > 0", g.stories);
  c.positive("geometry.story_height_m", "BuildingGeometry.story_height > 0", g.story_height_m);
  if (g.wwr) check_wwr(c, "geometry", *g.wwr);

  const auto& l = p.loads;
  c.non_negative("loads.equipment_W_m2", "SystemLoads.equipment_per_area >= 0", l.equipment_W_m2);
  c.non_negative("loads.lighting_W_m2", "SystemLoads.lighting_per_area >= 0", l.lighting_W_m2);
  c.non_negative("loads.people_per_m2", "SystemLoads.people_per_area >= 0", l.people_per_m2);
  c.non_negative("loads.infiltration_m3_s_m2", "SystemLoads.infiltration_per_area >= 0",
                 l.infiltration_m3_s_m2);
  c.non_negative("loads.ventilation_m3_s_m2", "SystemLoads.ventilation_per_area >= 0",
                 l.ventilation_m3_s_m2);
  c.non_negative("loads.ventilation_m3_s_person", "SystemLoads.ventilation_per_person >= 0",
                 l.ventilation_m3_s_person);
  if (!(l.operation_fraction > 0.0 && l.operation_fraction <= 1.0)) {
    c.add("loads.operation_fraction", "SystemLoads.operation_fraction in (0, 1]",
          l.operation_fraction);
  }
  c.positive("loads.infiltration_schedule_factor", "SystemLoads.infiltration_schedule_factor > 0",
             l.infiltration_schedule_factor);

  c.non_negative("engine.people_gain_W_person", "EngineSettings.people_gain >= 0",
                 p.engine.people_gain_W_person);
  c.fraction("engine.ground_coupling_factor", "EngineSettings.ground_coupling_factor in [0, 1]",
             p.engine.ground_coupling_factor);
  c.positive("engine.air_heat_capacity_J_m3K", "EngineSettings.air_heat_capacity > 0",
             p.engine.air_heat_capacity_J_m3K);

  if (p.campaign.samples < 2) {
    c.add("campaign.samples", "CampaignConfig.n_samples >= 2",
          std::to_string(p.campaign.samples));
  }

  if (p.options.empty()) c.add("options", "ProjectConfig has >= 1 design option", "0");
  std::set<int> ids;
  for (const auto& o : p.options) {
    const std::string path = "options[" + std::to_string(o.id) + "]";
    if (!ids.insert(o.id).second) {
      c.add(path + ".id", "DesignOption.id unique within project", std::to_string(o.id));
    }
    check_assembly(c, path + ".wall_rsi", "DesignOption.wall_rsi > 0", o.wall_rsi, resolution);
    check_assembly(c, path + ".floor_rsi", "DesignOption.floor_rsi > 0", o.floor_rsi, resolution);
    check_assembly(c, path + ".roof_rsi", "DesignOption.roof_rsi > 0", o.roof_rsi, resolution);
    check_assembly(c, path + ".glazing_u", "GlazingSpec.u_value > 0", o.glazing_u, resolution);
    if (!(o.glazing_shgc > 0.0 && o.glazing_shgc <= 1.0)) {
      c.add(path + ".glazing_shgc", "GlazingSpec.shgc in (0, 1]", o.glazing_shgc);
    }
    if (o.wwr) {
      check_wwr(c, path, *o.wwr);
    } else if (!g.wwr) {
      c.add(path + ".wwr", "window-to-wall ratios set on the option or the geometry", "unset");
    }
    if (!(o.hvac.heating_setpoint_C < o.hvac.cooling_setpoint_C)) {
      c.add(path + ".hvac",
            "HvacSettings.heating_setpoint_C < HvacSettings.cooling_setpoint_C",
            format_exact(o.hvac.heating_setpoint_C) + " >= " +
                format_exact(o.hvac.cooling_setpoint_C));
    }
  }

  std::set<std::string> names;
  for (std::size_t i = 0; i < p.uncertain.size(); ++i) {
    const auto& u = p.uncertain[i];
    const std::string path = "uncertain[" + std::to_string(i + 1) + "]";
    if (u.name.empty()) c.add(path + ".name", "UncertainInput.name non-empty", "''");
    if (!names.insert(u.name).second) {
      c.add(path + ".name", "UncertainInput.name unique", u.name);
    }
    const auto target = parse_target(u.target);
    if (!target) {
      c.add(path + ".target", "UncertainInput.target names an existing field", u.target);
      continue;
    }
    const bool poisson = u.kind == DistributionKind::PoissonScaled;
    if (u.sigma && !(*u.sigma > 0.0)) c.add(path + ".sigma", "Normal sigma > 0", *u.sigma);
    if (u.cv) {
      if (poisson && !(*u.cv > 0.0 && *u.cv < 1.0)) {
        c.add(path + ".cv", "PoissonScaled 0 < cv < 1", *u.cv);
      } else if (!poisson && !(*u.cv > 0.0)) {
        c.add(path + ".cv", "Normal cv > 0", *u.cv);
      }
    }
    if (u.mean && poisson && !(*u.mean > 0.0)) {
      c.add(path + ".mean", "PoissonScaled mean > 0", *u.mean);
    }
    if (!u.sigma && !u.cv) {
      // Fallback to db std_fraction only exists for assembly targets.
      const bool assembly = *target == Target::WallRsi || *target == Target::FloorRsi ||
                            *target == Target::RoofRsi || *target == Target::GlazingU;
      if (!assembly || poisson) {
        c.add(path, "UncertainInput has a dispersion (sigma or cv)", "none");
      }
    }
    if (!u.mean && poisson) {
      // Mean comes from the target; it must be usable as a Poisson mean.
      for (const auto& o : p.options) {
        const auto v = target_value(p, o, *target);
        if (v && *v == 0.0) {
          c.add(path + ".mean", "PoissonScaled mean > 0 (taken from target)", *v);
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace thermorisk
