#pragma once

// Building project description: domain types, ingestion of the project file,
// material database and climate table, material merge and validation.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thermorisk/error.hpp"

namespace thermorisk {

enum class Orientation : std::size_t { North = 0, South = 1, East = 2, West = 3 };

inline constexpr std::array<Orientation, 4> kOrientations{Orientation::North, Orientation::South,
                                                          Orientation::East, Orientation::West};

/// "N", "S", "E" or "W".
std::string_view orientation_label(Orientation o);

/// Four values keyed by facade orientation.
struct PerOrientation {
  std::array<double, 4> values{};

  double& operator[](Orientation o) { return values[static_cast<std::size_t>(o)]; }
  double operator[](Orientation o) const { return values[static_cast<std::size_t>(o)]; }
  double sum() const { return values[0] + values[1] + values[2] + values[3]; }

  bool operator==(const PerOrientation&) const = default;
};

struct MaterialRecord {
  std::string name;
  std::optional<double> thickness_m;
  std::optional<double> conductivity_W_mK;
  double rsi_m2K_W = 0.0;
  double std_fraction = 0.0;

  bool operator==(const MaterialRecord&) const = default;
};

struct GlazingSpec {
  double u_value_W_m2K = 0.0;
  double shgc = 0.0;

  bool operator==(const GlazingSpec&) const = default;
};

struct BuildingGeometry {
  double length_m = 0.0;  // facade length of the N and S elevations
  double width_m = 0.0;   // facade length of the E and W elevations
  int stories = 0;
  double story_height_m = 4.0;
  std::optional<PerOrientation> wwr;  // default window-to-wall ratios

  bool operator==(const BuildingGeometry&) const = default;
};

struct EnvelopeAreas {
  double gross_floor_m2 = 0.0;
  double roof_m2 = 0.0;
  double ground_floor_m2 = 0.0;
  PerOrientation facade_m2;
  PerOrientation opaque_m2;
  PerOrientation glazing_m2;

  bool operator==(const EnvelopeAreas&) const = default;
};

struct SystemLoads {
  double equipment_W_m2 = 0.0;
  double lighting_W_m2 = 0.0;
  double people_per_m2 = 0.0;
  double infiltration_m3_s_m2 = 0.0;
  double ventilation_m3_s_m2 = 0.0;
  double ventilation_m3_s_person = 0.0;
  double operation_fraction = 0.45;
  double infiltration_schedule_factor = 1.0;

  bool operator==(const SystemLoads&) const = default;
};

/// Constants of the monthly balance that the project file may override.
struct EngineSettings {
  double people_gain_W_person = 120.0;
  double ground_coupling_factor = 0.5;
  double air_heat_capacity_J_m3K = 1200.0;

  bool operator==(const EngineSettings&) const = default;
};

struct HvacSettings {
  double heating_setpoint_C = 0.0;
  double cooling_setpoint_C = 0.0;

  bool operator==(const HvacSettings&) const = default;
};

/// A thermal property of an assembly: given directly, or resolved from one or
/// more material-database records (layers are summed in series).
struct AssemblyProperty {
  std::optional<double> value;
  std::optional<double> std_fraction;
  std::vector<std::string> materials;

  bool resolved() const { return value.has_value(); }

  bool operator==(const AssemblyProperty&) const = default;
};

struct DesignOption {
  int id = 0;
  std::string name;
  AssemblyProperty wall_rsi;
  AssemblyProperty floor_rsi;
  AssemblyProperty roof_rsi;
  AssemblyProperty glazing_u;  // from the db as 1 / sum(RSI)
  double glazing_shgc = 0.0;
  std::optional<PerOrientation> wwr;
  HvacSettings hvac;
  /// Carried through untouched (supply-air and water temperatures, etc.).
  std::vector<std::pair<std::string, std::string>> metadata;

  GlazingSpec glazing() const { return {glazing_u.value.value_or(0.0), glazing_shgc}; }

  bool operator==(const DesignOption&) const = default;
};

enum class DistributionKind { Normal, PoissonScaled };

/// Declaration of an uncertain input as written in the project file. The mean
/// defaults to the current value of the target field; dispersion is either an
/// absolute sigma (Normal only) or a coefficient of variation. A missing cv on
/// an assembly target falls back to the db std_fraction.
struct UncertainDecl {
  std::string name;
  std::string target;
  DistributionKind kind = DistributionKind::Normal;
  std::optional<double> mean;
  std::optional<double> sigma;
  std::optional<double> cv;

  bool operator==(const UncertainDecl&) const = default;
};

struct CampaignSettings {
  std::size_t samples = 500;
  std::uint64_t seed = 0;

  bool operator==(const CampaignSettings&) const = default;
};

struct ProjectConfig {
  std::string name;
  std::string materials_file;  // relative to the project file
  std::string climate_file;    // relative to the project file
  BuildingGeometry geometry;
  SystemLoads loads;
  EngineSettings engine;
  std::vector<DesignOption> options;
  std::vector<UncertainDecl> uncertain;
  CampaignSettings campaign;

  const DesignOption* find_option(int id) const;

  bool operator==(const ProjectConfig&) const = default;
};

struct ClimateMonth {
  int month = 0;
  double t_out_C = 0.0;
  double hours = 0.0;
  PerOrientation irradiance_W_m2;

  bool operator==(const ClimateMonth&) const = default;
};

struct ClimateTable {
  std::array<ClimateMonth, 12> months{};

  bool operator==(const ClimateTable&) const = default;
};

// ---------------------------------------------------------------------------
// Field targets addressable by uncertain inputs.

enum class Target {
  WallRsi,
  FloorRsi,
  RoofRsi,
  GlazingU,
  GlazingShgc,
  HeatingSetpoint,
  CoolingSetpoint,
  Equipment,
  Lighting,
  People,
  Infiltration,
  VentilationArea,
  VentilationPerson,
  OperationFraction,
  InfiltrationSchedule,
};

std::optional<Target> parse_target(std::string_view name);
std::string_view target_name(Target t);
/// True for targets that live on a DesignOption rather than the shared loads.
bool is_option_target(Target t);
/// Current value of `t` for `option` within `project`; nullopt for an
/// unresolved assembly property.
std::optional<double> target_value(const ProjectConfig& project, const DesignOption& option,
                                   Target t);
/// Rule text when `value` breaks the invariant of `t`'s field, else nullopt.
std::optional<std::string> target_range_violation(Target t, double value);

// ---------------------------------------------------------------------------
// Ingestion.

/// Parses the sectioned key/value project format. Checks syntax and schema
/// only; field invariants are left to `validate`.
ProjectConfig parse_project(std::string_view text, const std::string& source = "<project>");

/// Reads, parses and validates a project file. Unresolved material references
/// are kept for `merge_material_properties`; every other invariant must hold.
ProjectConfig load_project(const std::filesystem::path& path);

/// Writes a project in the format accepted by `parse_project`.
std::string serialize_project(const ProjectConfig& project);

inline constexpr std::string_view kMaterialsHeader =
    "name,thickness_m,conductivity_W_mK,rsi_m2K_W,std_fraction";
inline constexpr std::string_view kClimateHeader =
    "month,t_out_C,hours,irr_N_W_m2,irr_S_W_m2,irr_E_W_m2,irr_W_W_m2";

std::vector<MaterialRecord> parse_material_db(std::string_view text,
                                              const std::string& source = "<materials>");
std::vector<MaterialRecord> load_material_db(const std::filesystem::path& path);

ClimateTable parse_climate(std::string_view text, const std::string& source = "<climate>");
ClimateTable load_climate(const std::filesystem::path& path);

/// Fills unresolved assembly properties from `db` by exact name match. Values
/// already present in the project win. Throws UnresolvedMaterialError naming
/// every reference that cannot be satisfied.
ProjectConfig merge_material_properties(ProjectConfig project, std::span<const MaterialRecord> db);

// ---------------------------------------------------------------------------
// Geometry and validation.

EnvelopeAreas derive_areas(const BuildingGeometry& geometry);

/// Geometry with the option's window-to-wall ratios applied.
BuildingGeometry option_geometry(const ProjectConfig& project, const DesignOption& option);

enum class Resolution {
  AllowPending,  // material references awaiting merge are acceptable
  Required,      // every assembly property must carry a value
};

ValidationReport validate(const ProjectConfig& project,
                          Resolution resolution = Resolution::Required);
ValidationReport validate_climate(const ClimateTable& climate);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace thermorisk
