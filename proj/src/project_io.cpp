// Project file format.
//
// A flat, sectioned key/value document. Units are part of the key names.
//
//   # comment
//   [project]          name, materials, climate
//   [geometry]         length_m, width_m, stories, story_height_m, wwr_N/S/E/W | wwr
//   [loads]            equipment_W_m2, lighting_W_m2, people_per_m2, infiltration_m3_s_m2,
//                      ventilation_m3_s_m2, ventilation_m3_s_person, operation_fraction,
//                      infiltration_schedule_factor
//   [engine]           people_gain_W_person, ground_coupling_factor, air_heat_capacity_J_m3K
//   [campaign]         samples, seed
//   [[option]]         id, name, {wall,floor,roof}_rsi_m2K_W, glazing_u_W_m2K,
//                      {wall,floor,roof,glazing}_material, {wall,floor,roof,glazing}_std_fraction,
//                      glazing_shgc, wwr_N/S/E/W | wwr, heating_setpoint_C, cooling_setpoint_C,
//                      meta.<key>
//   [[uncertain]]      name, target, distribution (normal | poisson), mean, sigma, cv
//
// `[[...]]` sections repeat; their order is significant.

#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "text_util.hpp"
#include "thermorisk/model.hpp"

namespace thermorisk {

namespace {

using detail::trim;

struct Entry {
  std::string value;
  std::size_t line = 0;
};

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;  // meta.* keys keep file order
};

class SectionReader {
 public:
  SectionReader(const Section& section, const std::string& source)
      : section_(section), source_(source) {}

  bool has(const std::string& key) const { return section_.entries.count(key) != 0; }

  const std::string* text(const std::string& key) {
    const auto it = section_.entries.find(key);
    if (it == section_.entries.end()) return nullptr;
    used_.insert(key);
    return &it->second.value;
  }

  std::string required_text(const std::string& key) {
    const auto* t = text(key);
    if (t == nullptr) missing(key);
    return *t;
  }

  std::optional<double> number(const std::string& key) {
    const auto* t = text(key);
    if (t == nullptr) return std::nullopt;
    const auto v = detail::parse_double(*t);
    if (!v) bad_value(key, "a number");
    return v;
  }

  double required_number(const std::string& key) {
    const auto v = number(key);
    if (!v) missing(key);
    return *v;
  }

  template <typename Int>
  std::optional<Int> integer(const std::string& key) {
    const auto* t = text(key);
    if (t == nullptr) return std::nullopt;
    const auto v = detail::parse_int<Int>(*t);
    if (!v) bad_value(key, "an integer");
    return v;
  }

  void claim_prefix(const std::string& prefix,
                    const std::function<void(const std::string&, const std::string&)>& fn) {
    for (const auto& key : section_.order) {
      if (key.rfind(prefix, 0) == 0) {
        used_.insert(key);
        fn(key.substr(prefix.size()), section_.entries.at(key).value);
      }
    }
  }

  /// Rejects any key nobody asked for.
  void finish() const {
    for (const auto& key : section_.order) {
      if (used_.count(key) == 0) {
        throw ParseError(source_, section_.entries.at(key).line,
                         "unknown key '" + key + "' in [" + section_.name + "]");
      }
    }
  }

  [[noreturn]] void missing(const std::string& key) const {
    throw ParseError(source_, section_.line,
                     "missing required key '" + key + "' in [" + section_.name + "]");
  }

  [[noreturn]] void bad_value(const std::string& key, const std::string& expected) const {
    const auto& e = section_.entries.at(key);
    throw ParseError(source_, e.line,
                     "key '" + key + "' expects " + expected + ", got '" + e.value + "'");
  }

  std::size_t line() const { return section_.line; }

 private:
  const Section& section_;
  const std::string& source_;
  std::set<std::string> used_;
};

std::vector<Section> split_sections(std::string_view text, const std::string& source) {
  std::vector<Section> sections;
  std::size_t line_no = 0;
  for (auto raw : detail::split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      const bool array = line.size() >= 4 && line.substr(0, 2) == "[[";
      const std::string_view close = array ? "]]" : "]";
      if (line.size() < close.size() * 2 + 1 ||
          line.substr(line.size() - close.size()) != close) {
        throw ParseError(source, line_no, "malformed section header '" + std::string(line) + "'");
      }
      const auto inner = trim(line.substr(close.size(), line.size() - 2 * close.size()));
      if (inner.empty()) throw ParseError(source, line_no, "empty section name");
      Section s;
      s.name = array ? "[" + std::string(inner) + "]" : std::string(inner);
      s.line = line_no;
      sections.push_back(std::move(s));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected 'key = value', got '" + std::string(line) + "'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ParseError(source, line_no, "empty key");
    if (sections.empty()) {
      throw ParseError(source, line_no, "key '" + key + "' appears before any section");
    }
    auto& s = sections.back();
    if (s.entries.count(key) != 0) {
      throw ParseError(source, line_no, "duplicate key '" + key + "' in [" + s.name + "]");
    }
    s.entries.emplace(key, Entry{value, line_no});
    s.order.push_back(key);
  }
  return sections;
}

std::optional<PerOrientation> read_wwr(SectionReader& r) {
  const bool any_face = r.has("wwr_N") || r.has("wwr_S") || r.has("wwr_E") || r.has("wwr_W");
  if (r.has("wwr")) {
    if (any_face) r.bad_value("wwr", "either 'wwr' or per-orientation wwr_N/S/E/W, not both");
    const double v = *r.number("wwr");
    return PerOrientation{{v, v, v, v}};
  }
  if (!any_face) return std::nullopt;
  PerOrientation wwr;
  for (const auto o : kOrientations) {
    wwr[o] = r.required_number("wwr_" + std::string(orientation_label(o)));
  }
  return wwr;
}

std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> names;
  for (auto part : detail::split(text, ',')) {
    const auto t = trim(part);
    if (!t.empty()) names.emplace_back(t);
  }
  return names;
}

AssemblyProperty read_assembly(SectionReader& r, const std::string& prefix,
                               const std::string& value_key) {
  AssemblyProperty p;
  p.value = r.number(value_key);
  p.std_fraction = r.number(prefix + "_std_fraction");
  if (const auto* m = r.text(prefix + "_material")) {
    p.materials = split_names(*m);
    if (p.materials.empty()) r.bad_value(prefix + "_material", "one or more material names");
  }
  if (!p.value && p.materials.empty()) {
    r.missing(value_key + "' or '" + prefix + "_material");
  }
  return p;
}

DistributionKind read_kind(SectionReader& r) {
  const auto text = r.required_text("distribution");
  if (text == "normal") return DistributionKind::Normal;
  if (text == "poisson") return DistributionKind::PoissonScaled;
  r.bad_value("distribution", "'normal' or 'poisson'");
}

}  // namespace

ProjectConfig parse_project(std::string_view text, const std::string& source) {
  ProjectConfig p;
  bool seen_geometry = false;
  bool seen_loads = false;
  std::set<std::string> singletons;

  for (const auto& section : split_sections(text, source)) {
    SectionReader r(section, source);
    const bool repeated = section.name.front() == '[';
    if (!repeated && !singletons.insert(section.name).second) {
      throw ParseError(source, section.line, "duplicate section [" + section.name + "]");
    }

    if (section.name == "project") {
      if (const auto* t = r.text("name")) p.name = *t;
      p.materials_file = r.text("materials") ? *r.text("materials") : "";
      p.climate_file = r.required_text("climate");
    } else if (section.name == "geometry") {
      seen_geometry = true;
      auto& g = p.geometry;
      g.length_m = r.required_number("length_m");
      g.width_m = r.required_number("width_m");
      const auto stories = r.integer<int>("stories");
      if (!stories) r.missing("stories");
      g.stories = *stories;
      g.story_height_m = r.number("story_height_m").value_or(4.0);
      g.wwr = read_wwr(r);
    } else if (section.name == "loads") {
      seen_loads = true;
      auto& l = p.loads;
      l.equipment_W_m2 = r.required_number("equipment_W_m2");
      l.lighting_W_m2 = r.required_number("lighting_W_m2");
      l.people_per_m2 = r.required_number("people_per_m2");
      l.infiltration_m3_s_m2 = r.required_number("infiltration_m3_s_m2");
      l.ventilation_m3_s_m2 = r.required_number("ventilation_m3_s_m2");
      l.ventilation_m3_s_person = r.required_number("ventilation_m3_s_person");
      l.operation_fraction = r.number("operation_fraction").value_or(0.45);
      l.infiltration_schedule_factor = r.number("infiltration_schedule_factor").value_or(1.0);
    } else if (section.name == "engine") {
      auto& e = p.engine;
      e.people_gain_W_person = r.number("people_gain_W_person").value_or(120.0);
      e.ground_coupling_factor = r.number("ground_coupling_factor").value_or(0.5);
      e.air_heat_capacity_J_m3K = r.number("air_heat_capacity_J_m3K").value_or(1200.0);
    } else if (section.name == "campaign") {
      p.campaign.samples = r.integer<std::size_t>("samples").value_or(500);
      p.campaign.seed = r.integer<std::uint64_t>("seed").value_or(0);
    } else if (section.name == "[option]") {
      DesignOption o;
      const auto id = r.integer<int>("id");
      if (!id) r.missing("id");
      o.id = *id;
      o.name = r.text("name") ? *r.text("name") : "Option " + std::to_string(o.id);
      o.wall_rsi = read_assembly(r, "wall", "wall_rsi_m2K_W");
      o.floor_rsi = read_assembly(r, "floor", "floor_rsi_m2K_W");
      o.roof_rsi = read_assembly(r, "roof", "roof_rsi_m2K_W");
      o.glazing_u = read_assembly(r, "glazing", "glazing_u_W_m2K");
      o.glazing_shgc = r.required_number("glazing_shgc");
      o.wwr = read_wwr(r);
      o.hvac.heating_setpoint_C = r.required_number("heating_setpoint_C");
      o.hvac.cooling_setpoint_C = r.required_number("cooling_setpoint_C");
      r.claim_prefix("meta.", [&](const std::string& k, const std::string& v) {
        o.metadata.emplace_back(k, v);
      });
      p.options.push_back(std::move(o));
    } else if (section.name == "[uncertain]") {
      UncertainDecl u;
      u.name = r.required_text("name");
      u.target = r.required_text("target");
      u.kind = read_kind(r);
      u.mean = r.number("mean");
      u.sigma = r.number("sigma");
      u.cv = r.number("cv");
      if (u.sigma && u.cv) r.bad_value("sigma", "either 'sigma' or 'cv', not both");
      if (u.sigma && u.kind == DistributionKind::PoissonScaled) {
        r.bad_value("sigma", "'cv' for a poisson distribution");
      }
      p.uncertain.push_back(std::move(u));
    } else {
      throw ParseError(source, section.line, "unknown section [" + section.name + "]");
    }
    r.finish();
  }

  if (p.climate_file.empty()) throw ParseError(source, 0, "missing [project] climate");
  if (!seen_geometry) throw ParseError(source, 0, "missing [geometry] section");
  if (!seen_loads) throw ParseError(source, 0, "missing [loads] section");
  if (p.options.empty()) throw ParseError(source, 0, "at least one [[option]] is required");
  return p;
}

ProjectConfig load_project(const std::filesystem::path& path) {
  auto project = parse_project(read_text_file(path), path.string());
  auto report = validate(project, Resolution::AllowPending);
  if (!report.empty()) throw ValidationError(std::move(report));
  return project;
}

namespace {

void put(std::ostream& os, std::string_view key, double v) {
  os << key << " = " << detail::format_exact(v) << '\n';
}

void put_wwr(std::ostream& os, const PerOrientation& wwr) {
  for (const auto o : kOrientations) put(os, "wwr_" + std::string(orientation_label(o)), wwr[o]);
}

void put_assembly(std::ostream& os, const std::string& prefix, const std::string& value_key,
                  const AssemblyProperty& a) {
  if (a.value) put(os, value_key, *a.value);
  if (!a.materials.empty()) {
    os << prefix << "_material = ";
    for (std::size_t i = 0; i < a.materials.size(); ++i) {
      os << (i ? ", " : "") << a.materials[i];
    }
    os << '\n';
  }
  if (a.std_fraction) put(os, prefix + "_std_fraction", *a.std_fraction);
}

}  // namespace

std::string serialize_project(const ProjectConfig& p) {
  std::ostringstream os;
  os << "[project]\n";
  if (!p.name.empty()) os << "name = " << p.name << '\n';
  if (!p.materials_file.empty()) os << "materials = " << p.materials_file << '\n';
  os << "climate = " << p.climate_file << "\n\n";

  os << "[geometry]\n";
  put(os, "length_m", p.geometry.length_m);
  put(os, "width_m", p.geometry.width_m);
  os << "stories = " << p.geometry.stories << '\n';
  put(os, "story_height_m", p.geometry.story_height_m);
  if (p.geometry.wwr) put_wwr(os, *p.geometry.wwr);

  const auto& l = p.loads;
  os << "\n[loads]\n";
  put(os, "equipment_W_m2", l.equipment_W_m2);
  put(os, "lighting_W_m2", l.lighting_W_m2);
  put(os, "people_per_m2", l.people_per_m2);
  put(os, "infiltration_m3_s_m2", l.infiltration_m3_s_m2);
  put(os, "ventilation_m3_s_m2", l.ventilation_m3_s_m2);
  put(os, "ventilation_m3_s_person", l.ventilation_m3_s_person);
  put(os, "operation_fraction", l.operation_fraction);
  put(os, "infiltration_schedule_factor", l.infiltration_schedule_factor);

  os << "\n[engine]\n";
  put(os, "people_gain_W_person", p.engine.people_gain_W_person);
  put(os, "ground_coupling_factor", p.engine.ground_coupling_factor);
  put(os, "air_heat_capacity_J_m3K", p.engine.air_heat_capacity_J_m3K);

  os << "\n[campaign]\n";
  os << "samples = " << p.campaign.samples << '\n';
  os << "seed = " << p.campaign.seed << '\n';

  for (const auto& o : p.options) {
    os << "\n[[option]]\n";
    os << "id = " << o.id << '\n';
    os << "name = " << o.name << '\n';
    put_assembly(os, "wall", "wall_rsi_m2K_W", o.wall_rsi);
    put_assembly(os, "floor", "floor_rsi_m2K_W", o.floor_rsi);
    put_assembly(os, "roof", "roof_rsi_m2K_W", o.roof_rsi);
    put_assembly(os, "glazing", "glazing_u_W_m2K", o.glazing_u);
    put(os, "glazing_shgc", o.glazing_shgc);
    if (o.wwr) put_wwr(os, *o.wwr);
    put(os, "heating_setpoint_C", o.hvac.heating_setpoint_C);
    put(os, "cooling_setpoint_C", o.hvac.cooling_setpoint_C);
    for (const auto& [k, v] : o.metadata) os << "meta." << k << " = " << v << '\n';
  }

  for (const auto& u : p.uncertain) {
    os << "\n[[uncertain]]\n";
    os << "name = " << u.name << '\n';
    os << "target = " << u.target << '\n';
    os << "distribution = " << (u.kind == DistributionKind::Normal ? "normal" : "poisson") << '\n';
    if (u.mean) put(os, "mean", *u.mean);
    if (u.sigma) put(os, "sigma", *u.sigma);
    if (u.cv) put(os, "cv", *u.cv);
  }
  return os.str();
}

}  // namespace thermorisk
