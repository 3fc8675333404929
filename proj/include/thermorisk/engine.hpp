#pragma once

// Single-zone monthly quasi-steady-state thermal balance. The annual heating
// plus cooling load per floor area is the model function y = f(x) that the
// Monte Carlo campaign propagates uncertainty through.

#include <array>
#include <span>
#include <vector>

#include "thermorisk/model.hpp"
#include "thermorisk/sampling.hpp"

namespace thermorisk {

struct ThermalModel {
  EnvelopeAreas areas;
  double wall_rsi = 0.0;
  double floor_rsi = 0.0;
  double roof_rsi = 0.0;
  GlazingSpec glazing;
  SystemLoads loads;
  HvacSettings hvac;
  EngineSettings engine;

  bool operator==(const ThermalModel&) const = default;
};

struct MonthLoad {
  double heating_kWh = 0.0;
  double cooling_kWh = 0.0;

  bool operator==(const MonthLoad&) const = default;
};

struct LoadBreakdown {
  std::array<MonthLoad, 12> months{};
  double annual_heating_kWh = 0.0;
  double annual_cooling_kWh = 0.0;
  double annual_load_kWh_m2 = 0.0;  // the KPI

  bool operator==(const LoadBreakdown&) const = default;
};

/// Uncertain inputs of `project` resolved against `option`: means default to
/// the option's field values and a missing cv on an assembly falls back to the
/// material-database std_fraction. Throws ValidationError when a declaration
/// cannot be resolved.
std::vector<UncertainInput> resolve_inputs(const ProjectConfig& project,
                                           const DesignOption& option);

/// Builds the model for `option` with `x[i]` written into the target of the
/// i-th uncertain input. Throws InvalidDrawError when a substituted value
/// breaks its field's invariant.
ThermalModel build_thermal_model(const DesignOption& option, const ProjectConfig& project,
                                 std::span<const double> x);

/// Transmission heat-transfer coefficient H_tr [W/K].
double transmission_coefficient(const ThermalModel& m);

/// Ventilation and infiltration heat-transfer coefficient H_ve [W/K].
double ventilation_coefficient(const ThermalModel& m);

/// Internal plus solar gains over the month [kWh].
double monthly_gains(const ThermalModel& m, const ClimateMonth& month);

/// Gain/loss-utilization balance for one month. Losses are
/// H * (setpoint - t_out) * hours / 1000 clamped at zero; heating is
/// L_h^2 / (L_h + G) and cooling G^2 / (G + L_c).
MonthLoad utilized_balance(double h_W_K, const HvacSettings& hvac, double t_out_C, double hours,
                           double gains_kWh);

MonthLoad monthly_balance(const ThermalModel& m, const ClimateMonth& month);

LoadBreakdown annual_load(const ThermalModel& m, const ClimateTable& climate);

}  // namespace thermorisk
