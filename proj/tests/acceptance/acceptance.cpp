// Acceptance checks, one per criterion. Usage: acceptance [N ...]; with no
// arguments every criterion runs. Prints one [PASS]/[FAIL] line each and
// exits nonzero if any fails.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "../fixtures.hpp"
#include "../oracles.hpp"
#include "growform/ablation.hpp"
#include "growform/cmaes.hpp"
#include "growform/colony.hpp"
#include "growform/evolve.hpp"
#include "growform/fitness.hpp"
#include "growform/gcode.hpp"
#include "growform/hull.hpp"
#include "growform/io.hpp"

using namespace growform;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(const std::string &line) { std::printf("    %s\n", line.c_str()); }

// 1. Geometry oracles.
Outcome geometry_oracles() {
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-80, 80);
  double hull_err = 0, width_err = 0, support_err = 0, disp_err = 0;
  int hull_mismatch = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    std::vector<Vec2> cloud(5 + t % 40);
    for (auto &p : cloud) p = {u(rng), u(rng)};
    const auto fast = convex_hull(cloud);
    const auto slow = oracle::hull_vertices(cloud);
    if (fast.size() != slow.size()) {
      ++hull_mismatch;
    } else {
      for (const auto &v : fast) {
        double best = 1e300;
        for (const auto &w : slow) best = std::min(best, distance(v, w));
        hull_err = std::max(hull_err, best);
      }
    }
    width_err = std::max(width_err, std::abs(min_diameter(cloud) - oracle::min_width(cloud)));

    const Layer below{oracle::star_polygon(rng, 4 + t % 30, 15, 60, t % 2 == 0)};
    const Vec2 p{u(rng), u(rng)};
    const double h = 0.3 + (t % 9);
    support_err = std::max(support_err, std::abs(support_score(p, below, h) - oracle::support(p, below, h)));

    std::vector<Polyline> polys{oracle::star_polygon(rng, 4 + t % 25, 5, 50, t % 3 != 0)};
    disp_err = std::max(disp_err, std::abs(angle_dispersion(polys) -
                                           oracle::quartile_dispersion(oracle::interior_angles(polys))));
  }
  const double worst = std::max({hull_err, width_err, support_err, disp_err});
  return {hull_mismatch == 0 && worst <= 1e-9,
          fmt("%d inputs each; max abs error hull %.2e, min_diameter %.2e, support %.2e, dispersion %.2e; "
              "hull size mismatches %d",
              trials, hull_err, width_err, support_err, disp_err, hull_mismatch)};
}

// 2. Conservation.
Outcome conservation() {
  double energy_drift = 0, mass_drift = 0, force_max = 0;
  bool division_exact = true;

  SimParams p;
  p.omega = 0.0;
  std::mt19937_64 rng(2002);
  std::uniform_real_distribution<double> u(0, 10);
  Organism org;
  for (int i = 0; i < 50; ++i) {
    Cell c;
    c.id = static_cast<CellId>(i);
    const double a = 2 * std::numbers::pi * i / 50;
    c.position = {300 + 80 * std::cos(a), 300 + 80 * std::sin(a)};
    c.energy = u(rng);
    org.cells.push_back(c);
  }
  for (int s = 0; s < 500; ++s) {
    const double before = org.total_energy();
    diffuse_energy(org, p);
    energy_drift = std::max(energy_drift, std::abs(org.total_energy() - before));
  }

  NutrientField field(15, 600, 0.5, 0.0);
  for (auto &v : field.grid()) v = u(rng);
  for (int s = 0; s < 500; ++s) {
    const double before = field.total();
    field.diffuse(1.0);
    mass_drift = std::max(mass_drift, std::abs(field.total() - before));
  }

  Genome g;
  g.eps_max = 5.0;
  CellId next = 1000;
  for (int t = 0; t < 500; ++t) {
    Organism o = org;
    for (auto &c : o.cells) c.energy = std::uniform_real_distribution<double>(0.1, 9.99)(rng);
    const Organism before = o;
    apply_cell_rules(o, g, SimParams{}, next);
    std::size_t k = 0;
    for (const auto &c : before.cells) {
      if (c.energy >= g.eps_max) {
        division_exact = division_exact && o.cells[k].energy + o.cells[k + 1].energy == c.energy;
        k += 2;
      } else {
        division_exact = division_exact && o.cells[k++].energy == c.energy;
      }
    }
  }

  Genome grower;
  grower.eta = 0.0025;
  Colony colony(grower, SimParams{}, 2002);
  int steps = 0;
  for (; steps < 500 && !colony.extinct(); ++steps) {
    colony.step();
    const Vec2 f = colony.internal_force_sum();
    force_max = std::max({force_max, std::abs(f.x), std::abs(f.y)});
  }
  return {energy_drift <= 1e-9 && mass_drift <= 1e-6 && division_exact && force_max <= 1e-9,
          fmt("energy drift/step %.2e, nutrient drift/step %.2e, division exact %s, "
              "max internal force component %.2e over %d steps",
              energy_drift, mass_drift, division_exact ? "yes" : "no", force_max, steps)};
}

// 3. Determinism across runs and thread counts.
Outcome determinism() {
  Genome g;
  auto grow_text = [&](int threads) {
    omp_set_num_threads(threads);
    const FormHistory h = grow(g, SimParams{}, 3003, 500);
    const FitnessReport r = evaluate(h, FitnessParams{});
    return dump_form_history(h) + to_json(r).dump() + emit_gcode(h, PrinterProfile{});
  };
  const std::string g1 = grow_text(1), g1b = grow_text(1), g8 = grow_text(8);

  auto run = [](int jobs) {
    EvolutionConfig c = EvolutionConfig::desk_profile();
    c.master_seed = 3003;
    c.jobs = jobs;
    const RunLog log = explore(c);
    nlohmann::json j = nlohmann::json::array();
    for (const auto &r : log.records) j.push_back(to_json(r));
    for (const auto &ch : log.champions) j.push_back(to_json(ch));
    return j.dump();
  };
  const std::string e1 = run(1), e1b = run(1), e8 = run(8);
  omp_set_num_threads(1);
  const bool grow_ok = g1 == g1b && g1 == g8;
  const bool explore_ok = e1 == e1b && e1 == e8;
  return {grow_ok && explore_ok,
          fmt("grow+score+emit_gcode (500 steps) identical: %s [sha %.12s]; desk explore identical: %s [sha %.12s]",
              grow_ok ? "yes" : "no", sha256_hex(g1).c_str(), explore_ok ? "yes" : "no", sha256_hex(e1).c_str())};
}

// 4. Design-space trend.
Outcome design_space() {
  EvolutionConfig c = EvolutionConfig::desk_profile();
  c.master_seed = 4004;
  c.steps_per_individual = 150;
  const DesignSpaceReport r = sample_design_space(500, c);
  return {r.printability.median >= 0.8 && r.complexity.median <= 0.25,
          fmt("n=500, 150 steps: P mean %.3f sd %.3f median %.3f; C mean %.3f sd %.3f median %.3f",
              r.printability.mean, r.printability.stddev, r.printability.median, r.complexity.mean,
              r.complexity.stddev, r.complexity.median)};
}

// 5. Ablation trend.
Outcome ablation() {
  EvolutionConfig c = EvolutionConfig::desk_profile();
  const AblationReport r = ablate(100, 5005, c);
  auto ratio = [&](std::size_t row, std::size_t col) { return r.rows[row].ratio[col]; };
  bool full_ok = true;
  for (std::size_t k = 0; k < 4; ++k) full_ok = full_ok && ratio(0, k) && *ratio(0, k) == 1.0;
  const auto meta = ratio(3, 0), physics = ratio(4, 0);
  for (const auto &row : r.rows) {
    std::string line = row.condition + ":";
    for (std::size_t k = 0; k < 4; ++k) line += row.ratio[k] ? fmt(" %.4f", *row.ratio[k]) : " undefined";
    note(line);
  }
  const bool pass = full_ok && meta && *meta <= 0.05 && physics && *physics <= 0.1;
  return {pass, fmt("n=100, 150 steps: sigma_P ratio no_meta %.4f (<= 0.05), no_physics %.4f (<= 0.1), "
                    "full model all 1.0: %s",
                    meta ? *meta : NAN, physics ? *physics : NAN, full_ok ? "yes" : "no")};
}

// 6. Explore trend with complexity-only fitness.
Outcome explore_trend() {
  int ratio_passes = 0;
  bool monotone = true;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EvolutionConfig c = EvolutionConfig::desk_profile();
    c.master_seed = 6000 + seed;
    c.w_p = 0.0;
    c.w_c = 1.0;
    const RunLog log = explore(c);
    for (std::size_t i = 1; i < log.records.size(); ++i)
      monotone = monotone && log.records[i].best_so_far_c >= log.records[i - 1].best_so_far_c;
    const double c0 = log.records.front().best_c, c_end = log.records.back().best_so_far_c;
    const bool ok = c_end >= 1.25 * c0;
    ratio_passes += ok;
    note(fmt("seed %llu: gen-0 best C %.4f, final best C %.4f, ratio %.2f %s", (unsigned long long)c.master_seed,
             c0, c_end, c0 > 0 ? c_end / c0 : INFINITY, ok ? "ok" : "short"));
  }
  return {monotone && ratio_passes >= 2,
          fmt("best-so-far C non-decreasing: %s; ratio >= 1.25 on %d of 3 seeds", monotone ? "yes" : "no",
              ratio_passes)};
}

// 7. Refine trend from a low-printability champion.
Outcome refine_trend() {
  int passes = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    EvolutionConfig x = EvolutionConfig::desk_profile();
    x.master_seed = 7000 + seed;
    x.w_p = 0.0;
    x.w_c = 1.0;
    x.archive_size = 16;
    const RunLog archive = explore(x);
    const Champion *seed_form = nullptr;
    for (const auto &ch : archive.champions)
      if (ch.printability <= 0.8) {
        seed_form = &ch;
        break;
      }
    if (!seed_form) {
      note(fmt("seed %llu: no archived champion with P <= 0.8", (unsigned long long)x.master_seed));
      continue;
    }
    EvolutionConfig r = EvolutionConfig::refine_defaults();
    r.master_seed = x.master_seed;
    r.lambda = 16;
    r.generations = 100;
    r.steps_per_individual = x.steps_per_individual;
    r.search_box = x.search_box;
    r.reference = seed_form->genome;
    r.reference_env_seed = seed_form->env_seed;
    r.reference_printability = seed_form->printability;
    r.reference_complexity = seed_form->complexity;
    const RunLog log = refine(r);
    const GenerationRecord &last = log.records.back();
    const double gain = last.best_so_far_p - seed_form->printability;
    const double c_change = (last.best_so_far_c - seed_form->complexity) / seed_form->complexity;
    const bool ok = gain >= 0.05 && std::abs(c_change) <= 0.25;
    passes += ok;
    note(fmt("seed %llu: champion P %.4f C %.4f -> refined P %.4f (+%.4f) C %.4f (%+.1f%%) %s",
             (unsigned long long)x.master_seed, seed_form->printability, seed_form->complexity, last.best_so_far_p,
             gain, last.best_so_far_c, 100 * c_change, ok ? "ok" : "short"));
  }
  return {passes >= 2, fmt("P gain >= 0.05 with C within 25%% on %d of 3 seeds", passes)};
}

// 8. CMA-ES on sphere and Rosenbrock.
Outcome cmaes_benchmarks() {
  CmaEsOptions o;
  o.lambda = 8;
  o.mu = 4;
  o.sigma = 0.5;
  auto run = [&](std::function<double(const Eigen::VectorXd &)> f, Eigen::VectorXd x0, int gens, bool &monotone) {
    CmaEs es(x0, o, 8008);
    double best = INFINITY, prev = INFINITY;
    monotone = true;
    for (int g = 0; g < gens; ++g) {
      const auto &pop = es.ask();
      std::vector<double> v;
      for (const auto &x : pop) v.push_back(f(x));
      for (double y : v) best = std::min(best, y);
      monotone = monotone && best <= prev;
      prev = best;
      es.tell(v);
    }
    return best;
  };
  bool m1, m2;
  const double sphere = run([](const Eigen::VectorXd &x) { return x.squaredNorm(); }, Eigen::VectorXd::Ones(5), 200, m1);
  const double rosen = run(
      [](const Eigen::VectorXd &x) {
        double f = 0;
        for (int i = 0; i < 4; ++i) f += 100 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1 - x[i], 2);
        return f;
      },
      Eigen::VectorXd::Zero(5), 300, m2);
  return {sphere < 1e-6 && m2, fmt("sphere best after 200 generations %.3e; Rosenbrock best-so-far monotone %s, "
                                   "final %.4g",
                                   sphere, m2 ? "yes" : "no", rosen)};
}

// 9. G-code validity.
Outcome gcode_validity() {
  const std::string dir = std::string(GROWFORM_TEST_DATA) + "/golden/";
  const bool golden = read_file(dir + "square.gcode") == emit_gcode(fixtures::square_layer(), PrinterProfile{}) &&
                      read_file(dir + "two_organisms.gcode") ==
                          emit_gcode(fixtures::two_organisms(), bundled_profile("large-format-600"));
  std::mt19937_64 rng(9009);
  int violations = 0;
  double worst_rel = 0;
  for (int t = 0; t < 100; ++t) {
    const auto h = fixtures::random_history(rng, 5 + t % 30, 1.0);
    const PrinterProfile p = t % 2 ? PrinterProfile{} : bundled_profile("large-format-600");
    std::istringstream in(emit_gcode(h, p));
    std::string line;
    double z = 0, e_layer = -INFINITY, last_e = 0;
    while (std::getline(in, line)) {
      if (line.rfind("G0 ", 0) && line.rfind("G1 ", 0)) continue;
      std::istringstream words(line.substr(3));
      std::string w;
      bool has_xy = false;
      double e = NAN;
      while (words >> w) {
        const double v = std::stod(w.substr(1));
        if (w[0] == 'X') has_xy = true, violations += v < 0 || v > p.plate_width;
        if (w[0] == 'Y') has_xy = true, violations += v < 0 || v > p.plate_depth;
        if (w[0] == 'Z') violations += v < z, z = v, e_layer = -INFINITY;
        if (w[0] == 'E') e = v;
      }
      if (line[1] == '1' && has_xy && !std::isnan(e)) violations += e < e_layer, e_layer = e, last_e = e;
    }
    double length = 0;
    for (const auto &layer : h.layers)
      for (const auto &poly : layer) length += perimeter(poly) * h.units_to_mm;
    const double expected = length * p.line_width * p.layer_height / (std::numbers::pi * std::pow(p.filament_diameter / 2, 2));
    worst_rel = std::max(worst_rel, std::abs(last_e - expected) / expected);
  }
  return {golden && violations == 0 && worst_rel <= 1e-6,
          fmt("golden files match: %s; 100 random histories: %d bound/monotonicity violations, "
              "worst extrusion error %.2e relative",
              golden ? "yes" : "no", violations, worst_rel)};
}

// 10. Formula spot values.
Outcome spot_values() {
  struct Case {
    const char *name;
    double got, want;
  };
  SimParams sp;
  SimParams unit_l = sp;
  unit_l.c_l = 1.0;
  Genome g;
  g.eta = 0.1;
  g.eps_max = 5.0;
  const std::vector<double> ratios{1, 0}, lengths{1, 3};
  const Case cases[] = {
      {"support d=1.5h", support_from_distance(1.5 * 0.4, 0.4), 0.5},
      {"support d=0.5h", support_from_distance(0.2, 0.4), 1.0},
      {"support d=2.5h", support_from_distance(1.0, 0.4), 0.0},
      {"printability lengths 1,3 ratios 1,0", weighted_printability(ratios, lengths), 0.25},
      {"dispersion {90x3,180x3}", quartile_dispersion({90, 90, 90, 180, 180, 180}), 1.0 / 3.0},
      {"edge ratio df=0.5", edge_support_ratio(1, 1, 1, 0.5), 0.5},
      {"diameter factor 5/10", diameter_factor(5, 10), 0.5},
      {"edge ratio S=1,0.5,0", edge_support_ratio(1, 0.5, 0, 1), 0.5},
      {"overall fitness P=0.695 C=0.417", overall_fitness(0.695, 0.417, FitnessParams{}), 0.556},
      {"complexity a=1", combine_complexity(0.8, 0.3, 1.0), 0.2},
      {"complexity a=0", combine_complexity(0.8, 0.3, 0.0), 0.3},
      {"repulsion d=r_r/2", repulsion_force(1.5, sp), -1.0 / 3.0},
      {"rest length E=4,5", rest_length(4, 5, unit_l), 3.0},
      {"metabolic cost", metabolic_cost(0, g, sp), 0.501},
  };
  double worst = 0;
  std::string failed;
  for (const auto &c : cases) {
    const double err = std::abs(c.got - c.want);
    worst = std::max(worst, err);
    if (err > 1e-12) failed += std::string(" ") + c.name;
  }
  return {failed.empty(), fmt("%zu cases, max abs error %.2e%s%s", std::size(cases), worst,
                              failed.empty() ? "" : "; failed:", failed.c_str())};
}

}  // namespace

int main(int argc, char **argv) {
  const std::map<int, std::pair<const char *, std::function<Outcome()>>> criteria = {
      {1, {"geometry oracle suite", geometry_oracles}},
      {2, {"conservation suite", conservation}},
      {3, {"determinism", determinism}},
      {4, {"design-space trend", design_space}},
      {5, {"ablation trend", ablation}},
      {6, {"explore trend", explore_trend}},
      {7, {"refine trend", refine_trend}},
      {8, {"CMA-ES correctness", cmaes_benchmarks}},
      {9, {"G-code validity", gcode_validity}},
      {10, {"formula spot values", spot_values}},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto &[n, c] : criteria) selected.push_back(n);

  omp_set_num_threads(1);
  int failures = 0;
  for (int n : selected) {
    const auto it = criteria.find(n);
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion %d\n", n);
      return 2;
    }
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = it->second.second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", n, it->second.first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
