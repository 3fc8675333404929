#include "thermorisk/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace thermorisk {

namespace {

AssemblyProperty DesignOption::*assembly_member(Target t) {
  switch (t) {
    case Target::WallRsi: return &DesignOption::wall_rsi;
    case Target::FloorRsi: return &DesignOption::floor_rsi;
    case Target::RoofRsi: return &DesignOption::roof_rsi;
    case Target::GlazingU: return &DesignOption::glazing_u;
    default: return nullptr;
  }
}

double resolved(const AssemblyProperty& p, int option_id, const char* label) {
  if (!p.value) {
    throw Error("option " + std::to_string(option_id) + " " + label +
                " is unresolved; merge the material database first");
  }
  return *p.value;
}

}  // namespace

std::vector<UncertainInput> resolve_inputs(const ProjectConfig& project,
                                           const DesignOption& option) {
  std::vector<UncertainInput> inputs;
  inputs.reserve(project.uncertain.size());
  for (std::size_t i = 0; i < project.uncertain.size(); ++i) {
    const auto& decl = project.uncertain[i];
    const std::string path = "uncertain[" + std::to_string(i + 1) + "]";
    const auto target = parse_target(decl.target);
    if (!target) {
      throw ValidationError({{path + ".target", "UncertainInput.target names an existing field",
                              decl.target}});
    }
    UncertainInput in;
    in.id = i + 1;
    in.name = decl.name;
    in.target = decl.target;
    if (decl.mean) {
      in.mean = *decl.mean;
    } else if (const auto v = target_value(project, option, *target)) {
      in.mean = *v;
    } else {
      throw ValidationError({{path + ".mean", "target value resolved", "unresolved"}});
    }

    if (decl.kind == DistributionKind::PoissonScaled) {
      if (!decl.cv || !(*decl.cv > 0.0 && *decl.cv < 1.0) || !(in.mean > 0.0)) {
        throw ValidationError({{path, "PoissonScaled with mean > 0 and 0 < cv < 1",
                                decl.cv ? std::to_string(*decl.cv) : "no cv"}});
      }
      in.distribution = PoissonScaledDist{*decl.cv};
    } else {
      double sigma = 0.0;
      if (decl.sigma) {
        sigma = *decl.sigma;
      } else if (decl.cv) {
        sigma = *decl.cv * std::fabs(in.mean);
      } else if (const auto member = assembly_member(*target);
                 member && (option.*member).std_fraction) {
        sigma = *(option.*member).std_fraction * std::fabs(in.mean);
      }
      if (!(sigma > 0.0)) {
        throw ValidationError({{path, "Normal sigma > 0 (sigma, cv or material std_fraction)",
                                std::to_string(sigma)}});
      }
      in.distribution = NormalDist{sigma};
    }
    inputs.push_back(std::move(in));
  }
  return inputs;
}

ThermalModel build_thermal_model(const DesignOption& option, const ProjectConfig& project,
                                 std::span<const double> x) {
  if (x.size() != project.uncertain.size()) {
    throw std::invalid_argument("build_thermal_model: expected " +
                                std::to_string(project.uncertain.size()) + " values, got " +
                                std::to_string(x.size()));
  }
  ThermalModel m;
  m.areas = derive_areas(option_geometry(project, option));
  m.wall_rsi = resolved(option.wall_rsi, option.id, "wall_rsi");
  m.floor_rsi = resolved(option.floor_rsi, option.id, "floor_rsi");
  m.roof_rsi = resolved(option.roof_rsi, option.id, "roof_rsi");
  m.glazing = {resolved(option.glazing_u, option.id, "glazing_u"), option.glazing_shgc};
  m.loads = project.loads;
  m.hvac = option.hvac;
  m.engine = project.engine;

  std::size_t setpoint_variable = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& decl = project.uncertain[i];
    const auto target = parse_target(decl.target);
    if (!target) throw std::invalid_argument("unknown target '" + decl.target + "'");
    const double v = x[i];
    if (const auto rule = target_range_violation(*target, v)) {
      throw InvalidDrawError(i, decl.name, v, *rule);
    }
    switch (*target) {
      case Target::WallRsi: m.wall_rsi = v; break;
      case Target::FloorRsi: m.floor_rsi = v; break;
      case Target::RoofRsi: m.roof_rsi = v; break;
      case Target::GlazingU: m.glazing.u_value_W_m2K = v; break;
      case Target::GlazingShgc: m.glazing.shgc = v; break;
      case Target::HeatingSetpoint:
        m.hvac.heating_setpoint_C = v;
        setpoint_variable = i;
        break;
      case Target::CoolingSetpoint:
        m.hvac.cooling_setpoint_C = v;
        setpoint_variable = i;
        break;
      case Target::Equipment: m.loads.equipment_W_m2 = v; break;
      case Target::Lighting: m.loads.lighting_W_m2 = v; break;
      case Target::People: m.loads.people_per_m2 = v; break;
      case Target::Infiltration: m.loads.infiltration_m3_s_m2 = v; break;
      case Target::VentilationArea: m.loads.ventilation_m3_s_m2 = v; break;
      case Target::VentilationPerson: m.loads.ventilation_m3_s_person = v; break;
      case Target::OperationFraction: m.loads.operation_fraction = v; break;
      case Target::InfiltrationSchedule: m.loads.infiltration_schedule_factor = v; break;
    }
  }
  if (!(m.hvac.heating_setpoint_C < m.hvac.cooling_setpoint_C)) {
    if (setpoint_variable < x.size()) {
      throw InvalidDrawError(setpoint_variable, project.uncertain[setpoint_variable].name,
                             x[setpoint_variable], "HvacSettings heating < cooling setpoint");
    }
    throw Error("option " + std::to_string(option.id) + ": heating setpoint >= cooling setpoint");
  }
  return m;
}

double transmission_coefficient(const ThermalModel& m) {
  const auto& a = m.areas;
  double h = 0.0;
  for (const auto o : kOrientations) h += a.opaque_m2[o] / m.wall_rsi;
  h += a.roof_m2 / m.roof_rsi;
  h += m.engine.ground_coupling_factor * a.ground_floor_m2 / m.floor_rsi;
  h += m.glazing.u_value_W_m2K * a.glazing_m2.sum();
  return h;
}

double ventilation_coefficient(const ThermalModel& m) {
  const auto& l = m.loads;
  const double floor = m.areas.gross_floor_m2;
  const double q_inf = l.infiltration_m3_s_m2 * floor * l.infiltration_schedule_factor;
  const double q_vent =
      l.ventilation_m3_s_m2 * floor + l.ventilation_m3_s_person * l.people_per_m2 * floor;
  return m.engine.air_heat_capacity_J_m3K * (q_inf + q_vent);
}

double monthly_gains(const ThermalModel& m, const ClimateMonth& month) {
  const auto& l = m.loads;
  const double internal_W_m2 =
      l.equipment_W_m2 + l.lighting_W_m2 + m.engine.people_gain_W_person * l.people_per_m2;
  const double internal_kWh =
      internal_W_m2 * m.areas.gross_floor_m2 * l.operation_fraction * month.hours / 1000.0;
  double solar_kWh = 0.0;
  for (const auto o : kOrientations) {
    solar_kWh += m.glazing.shgc * m.areas.glazing_m2[o] * month.irradiance_W_m2[o] * month.hours /
                 1000.0;
  }
  return internal_kWh + solar_kWh;
}

MonthLoad utilized_balance(double h_W_K, const HvacSettings& hvac, double t_out_C, double hours,
                           double gains_kWh) {
  const double g = gains_kWh;
  const double loss_heat = std::max(0.0, h_W_K * (hvac.heating_setpoint_C - t_out_C) * hours / 1000.0);
  const double loss_cool = std::max(0.0, h_W_K * (hvac.cooling_setpoint_C - t_out_C) * hours / 1000.0);

  const double gain_utilization = loss_heat + g > 0.0 ? loss_heat / (loss_heat + g) : 0.0;
  const double loss_utilization = g + loss_cool > 0.0 ? g / (g + loss_cool) : 0.0;

  MonthLoad out;
  out.heating_kWh = std::max(0.0, loss_heat - gain_utilization * g);
  out.cooling_kWh = std::max(0.0, g - loss_utilization * loss_cool);
  return out;
}

MonthLoad monthly_balance(const ThermalModel& m, const ClimateMonth& month) {
  const double h = transmission_coefficient(m) + ventilation_coefficient(m);
  return utilized_balance(h, m.hvac, month.t_out_C, month.hours, monthly_gains(m, month));
}

LoadBreakdown annual_load(const ThermalModel& m, const ClimateTable& climate) {
  LoadBreakdown b;
  for (std::size_t i = 0; i < climate.months.size(); ++i) {
    b.months[i] = monthly_balance(m, climate.months[i]);
    b.annual_heating_kWh += b.months[i].heating_kWh;
    b.annual_cooling_kWh += b.months[i].cooling_kWh;
  }
  b.annual_load_kWh_m2 = (b.annual_heating_kWh + b.annual_cooling_kWh) / m.areas.gross_floor_m2;
  return b;
}

}  // namespace thermorisk
