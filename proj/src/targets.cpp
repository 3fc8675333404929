#include <array>
#include <cmath>

#include "thermorisk/model.hpp"

namespace thermorisk {

namespace {

struct TargetInfo {
  Target target;
  std::string_view name;
};

constexpr std::array<TargetInfo, 15> kTargets{{
    {Target::WallRsi, "wall_rsi"},
    {Target::FloorRsi, "floor_rsi"},
    {Target::RoofRsi, "roof_rsi"},
    {Target::GlazingU, "glazing_u"},
    {Target::GlazingShgc, "glazing_shgc"},
    {Target::HeatingSetpoint, "heating_setpoint"},
    {Target::CoolingSetpoint, "cooling_setpoint"},
    {Target::Equipment, "equipment_per_area"},
    {Target::Lighting, "lighting_per_area"},
    {Target::People, "people_per_area"},
    {Target::Infiltration, "infiltration_per_area"},
    {Target::VentilationArea, "ventilation_per_area"},
    {Target::VentilationPerson, "ventilation_per_person"},
    {Target::OperationFraction, "operation_fraction"},
    {Target::InfiltrationSchedule, "infiltration_schedule_factor"},
}};

}  // namespace

std::string_view orientation_label(Orientation o) {
  switch (o) {
    case Orientation::North: return "N";
    case Orientation::South: return "S";
    case Orientation::East: return "E";
    case Orientation::West: return "W";
  }
  return "?";
}

std::optional<Target> parse_target(std::string_view name) {
  for (const auto& t : kTargets) {
    if (t.name == name) return t.target;
  }
  return std::nullopt;
}

std::string_view target_name(Target t) {
  for (const auto& info : kTargets) {
    if (info.target == t) return info.name;
  }
  return "?";
}

bool is_option_target(Target t) {
  switch (t) {
    case Target::WallRsi:
    case Target::FloorRsi:
    case Target::RoofRsi:
    case Target::GlazingU:
    case Target::GlazingShgc:
    case Target::HeatingSetpoint:
    case Target::CoolingSetpoint:
      return true;
    default:
      return false;
  }
}

std::optional<double> target_value(const ProjectConfig& project, const DesignOption& option,
                                   Target t) {
  const auto& l = project.loads;
  switch (t) {
    case Target::WallRsi: return option.wall_rsi.value;
    case Target::FloorRsi: return option.floor_rsi.value;
    case Target::RoofRsi: return option.roof_rsi.value;
    case Target::GlazingU: return option.glazing_u.value;
    case Target::GlazingShgc: return option.glazing_shgc;
    case Target::HeatingSetpoint: return option.hvac.heating_setpoint_C;
    case Target::CoolingSetpoint: return option.hvac.cooling_setpoint_C;
    case Target::Equipment: return l.equipment_W_m2;
    case Target::Lighting: return l.lighting_W_m2;
    case Target::People: return l.people_per_m2;
    case Target::Infiltration: return l.infiltration_m3_s_m2;
    case Target::VentilationArea: return l.ventilation_m3_s_m2;
    case Target::VentilationPerson: return l.ventilation_m3_s_person;
    case Target::OperationFraction: return l.operation_fraction;
    case Target::InfiltrationSchedule: return l.infiltration_schedule_factor;
  }
  return std::nullopt;
}

std::optional<std::string> target_range_violation(Target t, double value) {
  if (!std::isfinite(value)) return std::string("value must be finite");
  switch (t) {
    case Target::WallRsi:
    case Target::FloorRsi:
    case Target::RoofRsi:
      if (!(value > 0.0)) return std::string("RSI > 0");
      break;
    case Target::GlazingU:
      if (!(value > 0.0)) return std::string("GlazingSpec.u_value > 0");
      break;
    case Target::GlazingShgc:
      if (!(value > 0.0 && value <= 1.0)) return std::string("GlazingSpec.shgc in (0, 1]");
      break;
    case Target::HeatingSetpoint:
    case Target::CoolingSetpoint:
      break;
    case Target::OperationFraction:
      if (!(value > 0.0 && value <= 1.0)) {
        return std::string("SystemLoads.operation_fraction in (0, 1]");
      }
      break;
    case Target::InfiltrationSchedule:
      if (!(value > 0.0)) return std::string("SystemLoads.infiltration_schedule_factor > 0");
      break;
    default:
      if (!(value >= 0.0)) return std::string("SystemLoads rate >= 0");
      break;
  }
  return std::nullopt;
}

const DesignOption* ProjectConfig::find_option(int id) const {
  for (const auto& o : options) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

}  // namespace thermorisk
