#include <filesystem>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "growform/ablation.hpp"
#include "growform/config_error.hpp"
#include "growform/gcode.hpp"
#include "growform/io.hpp"
#include "growform/run_store.hpp"

using namespace growform;

TEST_CASE("genome JSON and validation") {
  Genome g{0.001, 0.4, 7.0, 1.2, 0.3};
  CHECK(genome_from_json(to_json(g)) == g);
  CHECK_THROWS_AS(genome_from_json({{"eta", 0.1}}), ConfigError);
  auto j = to_json(g);
  j["rho"] = 1.0;
  CHECK_THROWS_AS(genome_from_json(j), ConfigError);
  j = to_json(g);
  j["extra"] = 1;
  CHECK_THROWS_AS(genome_from_json(j), ConfigError);
}

TEST_CASE("search box maps the unit cube") {
  const SearchBox box;
  const Genome lo = box.denormalize({0, 0, 0, 0, 0}), hi = box.denormalize({1, 1, 1, 1, 1});
  CHECK(lo.eta == box.ranges[0].min);
  CHECK(hi.rho == box.ranges[4].max);
  const Genome mid = box.denormalize({0.5, 0.5, 0.5, 0.5, 0.5});
  CHECK(box.contains(mid));
  const auto back = box.normalize(mid);
  for (double v : back) CHECK(v == doctest::Approx(0.5));
  CHECK(search_box_from_json(to_json(box)).ranges[2].max == box.ranges[2].max);
}

TEST_CASE("sim params JSON") {
  SimParams p;
  p.k_r = 2.0;
  p.flags.no_energy = true;
  CHECK(sim_params_from_json(to_json(p)) == p);
  CHECK(sim_params_from_json(nlohmann::json::object()) == SimParams{});
  CHECK_THROWS_AS(sim_params_from_json({{"k_rr", 1.0}}), ConfigError);
  CHECK_THROWS_AS(sim_params_from_json({{"grid_size", 0}}), ConfigError);
}

TEST_CASE("fitness params JSON") {
  FitnessParams f;
  f.w_p = 0.1;
  f.w_c = 0.9;
  CHECK(fitness_params_from_json(to_json(f)) == f);
  CHECK_THROWS_AS(fitness_params_from_json({{"w_p", -1.0}, {"w_c", 2.0}}), ConfigError);
  CHECK_THROWS_AS(fitness_params_from_json({{"w_p", 0.3}}), ConfigError);
}

TEST_CASE("form history JSON is byte-stable") {
  std::mt19937_64 rng(1);
  const auto h = fixtures::random_history(rng, 6, 0.5);
  const std::string text = dump_form_history(h);
  const FormHistory back = form_history_from_json(nlohmann::json::parse(text));
  CHECK(back == h);
  CHECK(dump_form_history(back) == text);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("outputs are written with a manifest of digests") {
  const auto dir = std::filesystem::temp_directory_path() / "growform_test_outputs";
  std::filesystem::remove_all(dir);
  Manifest m;
  m.command = "grow";
  m.seed = 4;
  write_outputs(dir, {{"a.txt", "alpha"}, {"b.txt", "beta"}}, m);
  CHECK(read_file(dir / "a.txt") == "alpha");
  const Manifest back = manifest_from_json(nlohmann::json::parse(read_file(dir / "manifest.json")));
  CHECK(back.outputs.at("b.txt") == sha256_hex("beta"));
  CHECK(back.command == "grow");
  for (const auto &entry : std::filesystem::directory_iterator(dir))
    CHECK(entry.path().extension() != ".tmp");
  std::filesystem::remove_all(dir);
}

TEST_CASE("champion record JSON") {
  ChampionRecord c;
  c.champion.genome = Genome{};
  c.champion.env_seed = 99;
  c.champion.printability = 0.7;
  c.steps = 150;
  const auto back = champion_record_from_json(to_json(c));
  CHECK(back.champion == c.champion);
  CHECK(back.steps == 150);
  auto j = to_json(c);
  j.erase("env_seed");
  CHECK_THROWS_AS(champion_record_from_json(j), ConfigError);
}

TEST_CASE("form volume") {
  FormHistory h;
  h.units_to_mm = 0.5;
  h.layer_height_mm = 0.2;
  h.layers = {{{{0, 0}, {10, 0}, {10, 10}, {0, 10}}}, {{{0, 0}, {20, 0}, {20, 10}, {0, 10}}}};
  CHECK(form_volume(h) == doctest::Approx((25.0 + 50.0) * 0.2));
  CHECK(volume_variation(h) == doctest::Approx(2.5));
}

TEST_CASE("ablation bookkeeping") {
  auto c = EvolutionConfig::desk_profile();
  c.steps_per_individual = 15;
  const AblationReport r = ablate(4, 3, c);
  REQUIRE(r.rows.size() == 5);
  CHECK(r.rows[0].condition == "full model");
  for (const auto &ratio : r.rows[0].ratio)
    if (ratio) CHECK(*ratio == 1.0);
  CHECK(r.rows[3].flags.no_meta);
  CHECK(r.rows[4].flags.no_physics);
  const std::string table = ablation_table_csv(r);
  CHECK(table.rfind("condition,sigma_P,sigma_C,sigma_V,sigma_D\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 6);
  CHECK(to_json(ablate(4, 3, c)) == to_json(r));
  CHECK_THROWS(ablate(1, 3, c));
}

TEST_CASE("shipped profile and config files load") {
  const std::filesystem::path root = std::filesystem::path(GROWFORM_TEST_DATA).parent_path();
  for (const char *name : {"generic-0.4", "large-format-600"}) {
    const auto j = nlohmann::json::parse(read_file(root / "profiles" / (std::string(name) + ".json")));
    CHECK(printer_profile_from_json(j) == bundled_profile(name));
  }
  CHECK_NOTHROW(genome_from_json(nlohmann::json::parse(read_file(root / "configs" / "genome.json"))));
  const auto explore_cfg =
      evolution_config_from_json(nlohmann::json::parse(read_file(root / "configs" / "explore-desk-complexity.json")));
  CHECK(explore_cfg.lambda == 16);
  CHECK(explore_cfg.w_c == 1.0);
  auto refine_json = nlohmann::json::parse(read_file(root / "configs" / "refine-desk.json"));
  CHECK_THROWS_AS(evolution_config_from_json(refine_json), ConfigError);
  refine_json["reference"] = to_json(Genome{});
  refine_json["reference_env_seed"] = std::uint64_t{5};
  const auto refine_cfg = evolution_config_from_json(refine_json);
  CHECK(refine_cfg.stage == Stage::refine);
  CHECK(refine_cfg.sigma_init == 1e-4);
}
