#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "growform/colony.hpp"
#include "growform/config_error.hpp"
#include "growform/forces.hpp"

using namespace growform;

namespace {

Organism ring(std::size_t n, double radius, double energy, Vec2 centre = {300, 300}) {
  Organism o;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    Cell c;
    c.id = i;
    c.position = centre + Vec2{std::cos(a), std::sin(a)} * radius;
    c.energy = energy;
    o.cells.push_back(c);
  }
  update_rest_lengths(o, SimParams{});
  return o;
}

double colony_energy(const std::vector<Organism> &orgs) {
  double e = 0.0;
  for (const auto &o : orgs) e += o.total_energy();
  return e;
}

}  // namespace

TEST_CASE("initial ring") {
  SimParams p;
  CHECK(initial_cell_count(p) == 62);
  Colony c(Genome{}, p, 1);
  REQUIRE(c.organisms().size() == 1);
  const auto &cells = c.organisms()[0].cells;
  REQUIRE(cells.size() == 62);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    CHECK(distance(cells[i].position, {300, 300}) == doctest::Approx(100.0));
    CHECK(distance(cells[i].position, cells[(i + 1) % 62].position) ==
          doctest::Approx(distance(cells[0].position, cells[1].position)));
  }
  REQUIRE(c.field().sources().size() == 5);
  for (const auto &s : c.field().sources()) {
    CHECK(s.alpha == 0.1);
    CHECK(s.beta >= 5.0);
    CHECK(s.beta < 10.0);
  }
}

TEST_CASE("repulsion spot values") {
  SimParams p;
  CHECK(repulsion_force(p.r_r, p) == 0.0);
  CHECK(std::abs(repulsion_force(p.r_r / 2, p) - (-1.0 / 3.0)) < 1e-12);
  CHECK(repulsion_force(2 * p.r_r, p) == 0.0);
  CHECK(std::isfinite(repulsion_force(0.0, p)));
  CHECK(repulsion_between({1, 1}, {1, 1}, p) == Vec2{});
  const Vec2 f = repulsion_between({0, 0}, {1.5, 0}, p);
  CHECK(f.x == doctest::Approx(-1.0 / 3.0));
  CHECK(f.y == 0.0);
}

TEST_CASE("spatial-hash repulsion matches the all-pairs reference") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 60);
  SimParams p;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec2> pts(200 + trial * 10);
    for (auto &q : pts) q = {u(rng), u(rng)};
    std::vector<Vec2> a(pts.size()), b(pts.size());
    accumulate_repulsion(pts, p, a);
    accumulate_repulsion_reference(pts, p, b);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      CHECK(std::abs(a[i].x - b[i].x) < 1e-9);
      CHECK(std::abs(a[i].y - b[i].y) < 1e-9);
    }
  }
}

TEST_CASE("spring forces") {
  Organism o;
  o.cells.resize(2);
  o.cells[0].position = {0, 0};
  o.cells[1].position = {2, 0};
  o.rest_lengths = {2.0, 2.0};
  auto [t0, h0] = spring_force(o, 0, 2.0);
  CHECK(t0 == Vec2{});
  CHECK(h0 == Vec2{});
  o.rest_lengths = {1.5, 1.5};
  auto [t, h] = spring_force(o, 0, 2.0);
  CHECK(t.x == doctest::Approx(1.0));
  CHECK(h.x == doctest::Approx(-1.0));
  CHECK(t + h == Vec2{});
  o.cells[1].position = {0, 0};
  auto [tz, hz] = spring_force(o, 0, 2.0);
  CHECK(tz == Vec2{});
  CHECK(hz == Vec2{});
}

TEST_CASE("rest length") {
  SimParams p;
  p.c_l = 1.0;
  CHECK(rest_length(4, 5, p) == 3.0);
  CHECK(rest_length(0, 0, p) == doctest::Approx(std::sqrt(p.eps_floor)));
  CHECK(rest_length(8, 10, p) == doctest::Approx(3.0 * std::sqrt(2.0)));
  Organism o = ring(10, 20, 3.0);
  update_rest_lengths(o, p);
  for (double r : o.rest_lengths) CHECK(r == o.rest_lengths[0]);
}

TEST_CASE("metabolic cost and energy step") {
  SimParams p;
  Genome g;
  g.eta = 0.0;
  CHECK(energy_step(2.0, metabolic_cost(0.0, g, p), 0, 0) == 2.0 - p.c1);
  g.eta = 0.1;
  g.eps_max = 5.0;
  CHECK(std::abs(metabolic_cost(0.0, g, p) - 0.501) < 1e-12);
  CHECK(energy_step(0.0005, 0.001, 0, 0) == 0.0);
  Organism o = ring(4, 10, 1.0);
  o.cells[2].energy = 0.0;
  CellId next = 10;
  const RuleOutcome r = apply_cell_rules(o, g, p, next);
  CHECK(r.died == 1);
  CHECK(o.size() == 3);
}

TEST_CASE("energy diffusion") {
  SimParams p;
  p.omega = 0.0;
  Organism t = ring(3, 1, 2.0);
  t.cells[0].energy = 10;
  t.cells[2].energy = 10;
  diffuse_energy(t, p);
  CHECK(t.cells[0].energy == doctest::Approx(9.0));
  CHECK(t.cells[2].energy == doctest::Approx(9.0));
  CHECK(t.cells[1].energy == doctest::Approx(4.0));

  Organism flat = ring(8, 10, 3.0);
  const Organism before = flat;
  diffuse_energy(flat, SimParams{});
  CHECK(flat == before);

  SimParams lossy;
  lossy.omega = 100.0;
  Organism far = ring(3, 50, 1.0);
  far.cells[0].energy = 9.0;
  diffuse_energy(far, lossy);
  CHECK(far.cells[0].energy == 9.0);
}

TEST_CASE("energy diffusion with omega = 0 conserves energy over 500 steps") {
  SimParams p;
  p.omega = 0.0;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 10);
  Organism o = ring(40, 30, 1.0);
  for (auto &c : o.cells) c.energy = u(rng);
  double total = o.total_energy();
  for (int s = 0; s < 500; ++s) {
    diffuse_energy(o, p);
    CHECK(std::abs(o.total_energy() - total) < 1e-9);
    total = o.total_energy();
  }
}

TEST_CASE("nutrient diffusion") {
  SUBCASE("uniform field without decay is unchanged") {
    NutrientField f(6, 600, 0.5, 0.0);
    for (auto &v : f.grid()) v = 2.5;
    const auto before = f.grid();
    f.diffuse(1.0);
    CHECK(f.grid() == before);
  }
  SUBCASE("single spike on a 3x3 patch") {
    NutrientField f(3, 300, 0.5, 0.0);
    f.at(1, 1) = 1.0;
    f.diffuse(1.0);
    CHECK(f.at(1, 1) == 0.0);
    CHECK(f.at(0, 1) == 0.25);
    CHECK(f.at(2, 1) == 0.25);
    CHECK(f.at(1, 0) == 0.25);
    CHECK(f.at(1, 2) == 0.25);
    CHECK(f.at(0, 0) == 0.0);
    CHECK(f.at(2, 2) == 0.0);
  }
  SUBCASE("mass is conserved without decay or sources") {
    NutrientField f(15, 600, 0.5, 0.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0, 3);
    for (auto &v : f.grid()) v = u(rng);
    double total = f.total();
    for (int s = 0; s < 500; ++s) {
      f.diffuse(1.0);
      CHECK(std::abs(f.total() - total) < 1e-6);
      total = f.total();
    }
  }
}

TEST_CASE("nutrient gradient") {
  NutrientField f(10, 100, 0.5, 0.0);
  CHECK(f.gradient({50, 50}) == Vec2{});
  for (int iy = 0; iy < 10; ++iy)
    for (int ix = 0; ix < 10; ++ix) f.at(ix, iy) = ix;
  const Vec2 g = f.gradient({42, 37});
  CHECK(g.x > 0.0);
  CHECK(std::abs(g.y) < 1e-12);
  CHECK(g.x == doctest::Approx(0.1));
}

TEST_CASE("sources emit and are replaced") {
  SimParams p;
  Rng rng(4);
  NutrientField f(p.grid_size, p.env_size, p.gamma, p.c_n);
  f.seed_sources(5, p, rng);
  const double capacity = f.sources()[0].beta;
  const int steps = static_cast<int>(std::ceil(capacity / 0.1)) + 1;
  for (int i = 0; i < steps; ++i) f.emit_and_replace(p, rng);
  CHECK(f.sources().size() == 5);
  for (const auto &s : f.sources()) CHECK_FALSE(s.exhausted());
  CHECK(f.total() > 0.0);
}

TEST_CASE("cell rules") {
  SimParams p;
  Genome g;
  g.eps_max = 5.0;
  CellId next = 100;
  SUBCASE("three-cell ring with a dead cell is deleted") {
    Organism o = ring(3, 10, 1.0);
    o.cells[1].energy = 0.0;
    CHECK(apply_cell_rules(o, g, p, next).deleted);
  }
  SUBCASE("a full cell divides in half") {
    Organism o = ring(4, 10, 1.0);
    o.cells[2].energy = 5.0;
    const double before = o.total_energy();
    const RuleOutcome r = apply_cell_rules(o, g, p, next);
    CHECK(r.divided == 1);
    REQUIRE(o.size() == 5);
    CHECK(o.cells[2].energy == 2.5);
    CHECK(o.cells[3].energy == 2.5);
    CHECK(o.cells[3].id == 100);
    CHECK(o.total_energy() == before);
    CHECK(o.well_formed());
  }
  SUBCASE("division conserves energy exactly") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.1, 9.9);
    for (int trial = 0; trial < 200; ++trial) {
      Organism o = ring(12, 10, 1.0);
      for (auto &c : o.cells) c.energy = u(rng);
      const Organism before = o;
      const RuleOutcome r = apply_cell_rules(o, g, p, next);
      CHECK(r.divided > 0);
      std::size_t k = 0;
      for (const auto &c : before.cells) {
        if (c.energy >= g.eps_max) {
          CHECK(o.cells[k].energy + o.cells[k + 1].energy == c.energy);
          k += 2;
        } else {
          CHECK(o.cells[k++].energy == c.energy);
        }
      }
      CHECK(k == o.size());
    }
  }
  SUBCASE("no rule fires in between") {
    Organism o = ring(6, 10, 2.0);
    const Organism before = o;
    const RuleOutcome r = apply_cell_rules(o, g, p, next);
    CHECK(r.died == 0);
    CHECK(r.divided == 0);
    CHECK(o == before);
  }
}

TEST_CASE("organism split") {
  SimParams p;
  CellId next = 50;
  Organism o = ring(6, 10, 2.0);
  const auto pair = choose_split_pair(o, 0.5);
  REQUIRE(pair);
  CHECK(pair->first == 0);
  CHECK(pair->second == 3);
  const auto halves = split_ring(o, pair->first, pair->second, p, next);
  REQUIRE(halves);
  CHECK(halves->first.size() == 4);
  CHECK(halves->second.size() == 4);
  CHECK(halves->first.well_formed());
  CHECK(halves->second.well_formed());
  CHECK(halves->first.total_energy() + halves->second.total_energy() == o.total_energy());

  Organism skewed = ring(6, 10, 0.1);
  skewed.cells[0].energy = 10.0;
  CHECK_FALSE(choose_split_pair(skewed, 0.999));
}

TEST_CASE("colonies below the split threshold never split") {
  Genome g;
  g.eta = 0.0;
  SimParams p;
  p.flags.no_meta = true;
  p.init_radius = 10.0;
  Colony c(g, p, 3);
  REQUIRE(c.total_energy() < p.eps_org_split());
  for (int i = 0; i < 30; ++i) {
    c.step();
    REQUIRE(c.organisms().size() == 1);
    CHECK_FALSE(c.organisms()[0].pending);
  }
}

TEST_CASE("starving organism loses energy every step") {
  Genome g;
  g.eta = 0.002;
  SimParams p;
  p.n_sources = 0;
  Colony c(g, p, 11);
  double e = c.total_energy();
  for (int i = 0; i < 40 && !c.extinct(); ++i) {
    c.step();
    CHECK(c.total_energy() < e);
    e = c.total_energy();
  }
}

TEST_CASE("internal forces sum to zero and rings stay intact") {
  Genome g;
  g.eta = 0.0025;
  g.eps_max = 6.0;
  Colony c(g, SimParams{}, 7);
  for (int i = 0; i < 150 && !c.extinct(); ++i) {
    c.step();
    const Vec2 s = c.internal_force_sum();
    CHECK(std::abs(s.x) < 1e-9);
    CHECK(std::abs(s.y) < 1e-9);
    std::set<CellId> ids;
    for (const auto &o : c.organisms()) {
      CHECK(o.well_formed());
      for (const auto &cell : o.cells) {
        CHECK(ids.insert(cell.id).second);
        CHECK(cell.energy >= 0.0);
        CHECK(cell.energy <= g.eps_max);
        CHECK(cell.position.x >= 0.0);
        CHECK(cell.position.x <= 600.0);
      }
    }
  }
}

TEST_CASE("grow") {
  Genome g;
  SimParams p;
  SUBCASE("zero steps yields the seeded circle") {
    const FormHistory h = grow(g, p, 1, 0);
    REQUIRE(h.layers.size() == 1);
    CHECK(h.layers[0][0].size() == 62);
  }
  SUBCASE("deterministic") { CHECK(grow(g, p, 42, 60) == grow(g, p, 42, 60)); }
  SUBCASE("layer cap") {
    CHECK_THROWS_AS(grow(g, p, 1, kMaxLayers + 1), ConfigError);
    CHECK_THROWS_AS(grow(g, p, 1, -1), ConfigError);
  }
  SUBCASE("height stays within 10 cm for 500 steps") {
    const FormHistory h = grow(g, p, 5, 500);
    CHECK(h.layers.size() <= 500);
    CHECK(static_cast<double>(h.layers.size()) * h.layer_height_mm <= 100.0);
  }
  SUBCASE("no_meta keeps the layers nearly constant") {
    p.flags.no_meta = true;
    const FormHistory h = grow(g, p, 5, 100);
    REQUIRE(h.layers.size() == 100);
    REQUIRE(h.layers.front().size() == 1);
    double step = 0.0;
    for (std::size_t t = 1; t < h.layers.size(); ++t) {
      const auto &a = h.layers[t - 1][0], &b = h.layers[t][0];
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) step = std::max(step, distance(a[i], b[i]));
    }
    MESSAGE("largest per-layer displacement " << step);
    CHECK(step < 0.5);
  }
}
