#include <doctest.h>

#include <functional>
#include <random>

#include "support.hpp"
#include "thermorisk/error.hpp"
#include "thermorisk/model.hpp"

using namespace thermorisk;
using testing::fixture;

namespace {

ProjectConfig parsed_fixture() {
  return parse_project(testing::read_file(testing::project_file()), "project.ini");
}

std::vector<MaterialRecord> fixture_db() {
  return load_material_db(testing::fixture_dir() / "materials.csv");
}

DesignOption& option(ProjectConfig& p, int id) {
  for (auto& o : p.options) {
    if (o.id == id) return o;
  }
  throw std::out_of_range("no option");
}

std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("fixture option 1 carries its design values") {
  const auto* o = fixture().project.find_option(1);
  REQUIRE(o != nullptr);
  CHECK(*o->wall_rsi.value == 3.7);
  CHECK(*o->floor_rsi.value == 4.59);
  CHECK(*o->roof_rsi.value == 5.88);
  CHECK(o->glazing() == GlazingSpec{1.7, 0.20});
  REQUIRE(o->wwr.has_value());
  CHECK((*o->wwr)[Orientation::North] == 0.70);
  CHECK((*o->wwr)[Orientation::South] == 0.65);
  CHECK((*o->wwr)[Orientation::East] == 0.60);
  CHECK((*o->wwr)[Orientation::West] == 0.20);
  CHECK(o->hvac == HvacSettings{21.0, 23.0});
  CHECK(fixture().project.options.size() == 4);
  CHECK(fixture().project.uncertain.size() == 11);
}

TEST_CASE("project without design options is a schema error") {
  const std::string text =
      "[project]\nclimate = c.csv\n[geometry]\nlength_m = 93\nwidth_m = 54\nstories = 5\n"
      "wwr = 0.4\n[loads]\nequipment_W_m2 = 1\nlighting_W_m2 = 1\npeople_per_m2 = 0.1\n"
      "infiltration_m3_s_m2 = 0.0003\nventilation_m3_s_m2 = 0.0006\n"
      "ventilation_m3_s_person = 0.005\n";
  CHECK_THROWS_WITH_AS(parse_project(text), doctest::Contains("[[option]]"), ParseError);
}

TEST_CASE("parse errors name the key and line") {
  const auto text = replace_once(testing::read_file(testing::project_file()), "length_m = 93",
                                 "length_m = ninety");
  try {
    parse_project(text, "p.ini");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("length_m") != std::string::npos);
    CHECK(e.line() > 0);
  }
  CHECK_THROWS_AS(parse_project("[project]\nclimate = a\nbogus = 1\n"), ParseError);
  CHECK_THROWS_AS(parse_project("[project\n"), ParseError);
  CHECK_THROWS_AS(parse_project("[project]\nclimate = a\nclimate = b\n"), ParseError);
}

TEST_CASE("inverted setpoints name HvacSettings") {
  auto p = fixture().project;
  option(p, 2).hvac = {23.0, 21.0};
  const auto report = validate(p);
  REQUIRE(report.size() == 1);
  CHECK(report[0].path == "options[2].hvac");
  CHECK(report[0].rule.find("HvacSettings") != std::string::npos);

  const auto dir = testing::scratch_dir("hvac");
  auto text = replace_once(testing::portable_project_text(), "heating_setpoint_C = 21\ncooling_setpoint_C = 23",
                           "heating_setpoint_C = 23\ncooling_setpoint_C = 21");
  testing::write_file(dir / "p.ini", text);
  CHECK_THROWS_WITH_AS(load_project(dir / "p.ini"), doctest::Contains("HvacSettings"),
                       ValidationError);
}

TEST_CASE("load_project reports a missing file") {
  CHECK_THROWS_AS(load_project("/nonexistent/project.ini"), IoError);
}

TEST_CASE("material database parsing") {
  const std::string header = std::string(kMaterialsHeader) + "\n";
  SUBCASE("direct rsi with blank cells") {
    const auto db = parse_material_db(header + "ExtWall-SIP, , ,3.7,0.10\n");
    REQUIRE(db.size() == 1);
    CHECK(db[0].name == "ExtWall-SIP");
    CHECK(db[0].rsi_m2K_W == 3.7);
    CHECK(db[0].std_fraction == 0.10);
    CHECK_FALSE(db[0].thickness_m.has_value());
  }
  SUBCASE("rsi derived from thickness and conductivity") {
    const auto db = parse_material_db(header + "Board,0.10,0.05,,0.1\n");
    REQUIRE(db.size() == 1);
    CHECK(db[0].rsi_m2K_W == doctest::Approx(2.0).epsilon(1e-15));
  }
  SUBCASE("duplicate names") {
    CHECK_THROWS_WITH_AS(
        parse_material_db(header + "Plasterboard,,,0.1,0.1\nPlasterboard,,,0.2,0.1\n"),
        doctest::Contains("duplicate"), ParseError);
  }
  SUBCASE("missing column") {
    CHECK_THROWS_WITH_AS(parse_material_db("name,thickness_m,rsi_m2K_W,std_fraction\nA,,1,0.1\n"),
                         doctest::Contains("column"), ParseError);
  }
  SUBCASE("non-numeric cell") {
    CHECK_THROWS_WITH_AS(parse_material_db(header + "A,,,abc,0.1\n"),
                         doctest::Contains("non-numeric"), ParseError);
  }
  SUBCASE("fixture database") {
    const auto db = fixture_db();
    CHECK(db.size() == 9);
    CHECK(db.back().rsi_m2K_W == doctest::Approx(3.75));
  }
}

TEST_CASE("merge fills, keeps project values, and reports missing names") {
  const std::vector<MaterialRecord> db{{"ExtWall-Steel-Stud", {}, {}, 3.35, 0.1},
                                       {"Gypsum", 0.0127, 0.16, 0.079375, 0.1}};
  auto p = fixture().project;
  auto& o = option(p, 3);

  o.wall_rsi = AssemblyProperty{{}, {}, {"ExtWall-Steel-Stud"}};
  auto merged = merge_material_properties(p, db);
  CHECK(*merged.find_option(3)->wall_rsi.value == 3.35);
  CHECK(*merged.find_option(3)->wall_rsi.std_fraction == 0.1);

  o.wall_rsi = AssemblyProperty{2.76, {}, {"ExtWall-Steel-Stud"}};
  merged = merge_material_properties(p, db);
  CHECK(*merged.find_option(3)->wall_rsi.value == 2.76);

  o.wall_rsi = AssemblyProperty{{}, {}, {"Aerogel-X"}};
  try {
    merge_material_properties(p, db);
    FAIL("expected unresolved material");
  } catch (const UnresolvedMaterialError& e) {
    REQUIRE(e.names().size() == 1);
    CHECK(e.names()[0] == "Aerogel-X");
  }

  o.wall_rsi = AssemblyProperty{{}, {}, {"ExtWall-Steel-Stud", "Gypsum"}};
  merged = merge_material_properties(p, db);
  CHECK(*merged.find_option(3)->wall_rsi.value == doctest::Approx(3.35 + 0.079375));
}

TEST_CASE("merge is idempotent") {
  const auto db = fixture_db();
  const auto once = merge_material_properties(parsed_fixture(), db);
  const auto twice = merge_material_properties(once, db);
  CHECK(once == twice);
  CHECK(once == fixture().project);
}

TEST_CASE("serialize round-trips") {
  const auto raw = parsed_fixture();
  CHECK(parse_project(serialize_project(raw)) == raw);
  const auto& merged = fixture().project;
  CHECK(parse_project(serialize_project(merged)) == merged);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 10.0);
  for (int i = 0; i < 50; ++i) {
    auto p = merged;
    p.geometry.length_m = u(rng);
    p.loads.equipment_W_m2 = u(rng);
    option(p, 1).wall_rsi.value = u(rng);
    option(p, 2).glazing_shgc = u(rng) / 10.0;
    CHECK(parse_project(serialize_project(p)) == p);
  }
}

TEST_CASE("derive_areas") {
  BuildingGeometry g{93.0, 54.0, 5, 4.0, PerOrientation{{0.70, 0.65, 0.60, 0.20}}};
  const auto a = derive_areas(g);
  CHECK(a.gross_floor_m2 == 25110.0);
  CHECK(a.roof_m2 == 5022.0);
  CHECK(a.ground_floor_m2 == 5022.0);
  CHECK(a.facade_m2[Orientation::North] == 1860.0);
  CHECK(a.facade_m2[Orientation::East] == 1080.0);
  CHECK(a.glazing_m2[Orientation::North] == doctest::Approx(1302.0).epsilon(1e-14));
  CHECK(a.opaque_m2[Orientation::North] == doctest::Approx(558.0).epsilon(1e-14));

  g.wwr = PerOrientation{};
  const auto z = derive_areas(g);
  CHECK(z.glazing_m2.sum() == 0.0);
  CHECK(z.opaque_m2 == z.facade_m2);
}

TEST_CASE("derive_areas conserves facade area") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> len(5.0, 200.0), frac(0.0, 1.0);
  std::uniform_int_distribution<int> stories(1, 40);
  for (int i = 0; i < 1000; ++i) {
    BuildingGeometry g{len(rng), len(rng), stories(rng), 2.5 + frac(rng) * 3,
                       PerOrientation{{frac(rng), frac(rng), frac(rng), frac(rng)}}};
    const auto a = derive_areas(g);
    double total = 0.0;
    for (const auto o : kOrientations) total += a.opaque_m2[o] + a.glazing_m2[o];
    const double expected = 2.0 * (g.length_m + g.width_m) * g.stories * g.story_height_m;
    CHECK(total == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("validate: fixture clean, single-field violations") {
  CHECK(validate(fixture().project).empty());
  CHECK(validate(parsed_fixture(), Resolution::AllowPending).empty());
  CHECK(validate(parsed_fixture(), Resolution::Required).size() == 12);

  SUBCASE("shgc out of range") {
    auto p = fixture().project;
    option(p, 1).glazing_shgc = 1.3;
    const auto r = validate(p);
    REQUIRE(r.size() == 1);
    CHECK(r[0].rule.find("GlazingSpec.shgc") != std::string::npos);
    CHECK(r[0].actual == "1.3");
  }
  SUBCASE("dangling uncertain target") {
    auto p = fixture().project;
    p.uncertain[0].target = "wall_rs";
    const auto r = validate(p);
    REQUIRE(r.size() == 1);
    CHECK(r[0].actual == "wall_rs");
  }
}

TEST_CASE("validate: any one out-of-range numeric field gives exactly one violation") {
  struct Mutation {
    std::string field;
    std::function<void(ProjectConfig&)> apply;
  };
  const std::vector<Mutation> mutations{
      {"length_m", [](ProjectConfig& p) { p.geometry.length_m = -1; }},
      {"width_m", [](ProjectConfig& p) { p.geometry.width_m = 0; }},
      {"stories", [](ProjectConfig& p) { p.geometry.stories = 0; }},
      {"story_height_m", [](ProjectConfig& p) { p.geometry.story_height_m = -4; }},
      {"equipment_W_m2", [](ProjectConfig& p) { p.loads.equipment_W_m2 = -1; }},
      {"lighting_W_m2", [](ProjectConfig& p) { p.loads.lighting_W_m2 = -1; }},
      {"people_per_m2", [](ProjectConfig& p) { p.loads.people_per_m2 = -0.1; }},
      {"infiltration_m3_s_m2", [](ProjectConfig& p) { p.loads.infiltration_m3_s_m2 = -1; }},
      {"ventilation_m3_s_m2", [](ProjectConfig& p) { p.loads.ventilation_m3_s_m2 = -1; }},
      {"ventilation_m3_s_person", [](ProjectConfig& p) { p.loads.ventilation_m3_s_person = -1; }},
      {"operation_fraction", [](ProjectConfig& p) { p.loads.operation_fraction = 1.5; }},
      {"infiltration_schedule_factor",
       [](ProjectConfig& p) { p.loads.infiltration_schedule_factor = 0; }},
      {"people_gain_W_person", [](ProjectConfig& p) { p.engine.people_gain_W_person = -1; }},
      {"ground_coupling_factor", [](ProjectConfig& p) { p.engine.ground_coupling_factor = 2; }},
      {"air_heat_capacity_J_m3K", [](ProjectConfig& p) { p.engine.air_heat_capacity_J_m3K = 0; }},
      {"samples", [](ProjectConfig& p) { p.campaign.samples = 1; }},
      {"wall_rsi", [](ProjectConfig& p) { option(p, 1).wall_rsi.value = -3.7; }},
      {"floor_rsi", [](ProjectConfig& p) { option(p, 2).floor_rsi.value = 0.0; }},
      {"roof_rsi", [](ProjectConfig& p) { option(p, 3).roof_rsi.value = -1.0; }},
      {"glazing_u", [](ProjectConfig& p) { option(p, 4).glazing_u.value = -1.2; }},
      {"glazing_shgc", [](ProjectConfig& p) { option(p, 4).glazing_shgc = 0.0; }},
      {"wwr_N", [](ProjectConfig& p) { (*option(p, 1).wwr)[Orientation::North] = 1.2; }},
      {"wwr_W", [](ProjectConfig& p) { (*option(p, 3).wwr)[Orientation::West] = -0.1; }},
      {"hvac", [](ProjectConfig& p) { option(p, 1).hvac.heating_setpoint_C = 30; }},
      {"cv", [](ProjectConfig& p) { p.uncertain[4].cv = 1.5; }},
      {"sigma", [](ProjectConfig& p) {
         p.uncertain[1].cv.reset();
         p.uncertain[1].sigma = -0.2;
       }},
  };
  for (const auto& m : mutations) {
    CAPTURE(m.field);
    auto p = fixture().project;
    m.apply(p);
    const auto r = validate(p);
    REQUIRE(r.size() == 1);
    CHECK(r[0].path.find(m.field) != std::string::npos);
  }
}

TEST_CASE("climate table") {
  const auto& c = fixture().climate;
  for (std::size_t i = 0; i < 12; ++i) CHECK(c.months[i].month == static_cast<int>(i + 1));
  CHECK(c.months[0].t_out_C == -4.6);
  CHECK(validate_climate(c).empty());
  CHECK_THROWS_AS(parse_climate("month,t,hours\n1,2,3\n"), ParseError);
  const auto text = testing::read_file(testing::fixture_dir() / "climate.csv");
  CHECK_THROWS_AS(parse_climate(text.substr(0, text.rfind("12,"))), ParseError);
  CHECK(parse_climate(text) == c);
}

TEST_CASE("targets") {
  for (const auto name : {"wall_rsi", "glazing_u", "equipment_per_area", "ventilation_per_person",
                          "infiltration_schedule_factor"}) {
    const auto t = parse_target(name);
    REQUIRE(t.has_value());
    CHECK(target_name(*t) == name);
  }
  CHECK_FALSE(parse_target("wall_rs").has_value());
  const auto& p = fixture().project;
  CHECK(*target_value(p, *p.find_option(2), Target::WallRsi) == 2.76);
  CHECK(*target_value(p, *p.find_option(2), Target::Equipment) == 10.765);
  CHECK(target_range_violation(Target::WallRsi, -0.1).has_value());
  CHECK_FALSE(target_range_violation(Target::WallRsi, 0.1).has_value());
}
