#include "growform/colony.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "growform/config_error.hpp"
#include "growform/forces.hpp"

namespace growform {

std::size_t initial_cell_count(const SimParams &params) {
  return static_cast<std::size_t>(std::floor(2.0 * std::numbers::pi * params.init_radius / (2.0 * params.eps_init)));
}

Colony::Colony(const Genome &genome, const SimParams &params, std::uint64_t env_seed)
    : genome_(genome),
      params_(params),
      field_(params.grid_size, params.env_size, params.gamma, params.c_n),
      rng_(env_seed) {
  const std::size_t n = std::max<std::size_t>(3, initial_cell_count(params));
  const Vec2 centre{0.5 * params.env_size, 0.5 * params.env_size};
  Organism org;
  org.cells.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    Cell c;
    c.id = next_id_++;
    c.position = centre + Vec2{std::cos(angle), std::sin(angle)} * params.init_radius;
    c.energy = params.eps_init;
    org.cells.push_back(c);
  }
  update_rest_lengths(org, params_);
  organisms_.push_back(std::move(org));
  field_.seed_sources(params.n_sources, params_, rng_);
}

std::size_t Colony::cell_count() const {
  std::size_t n = 0;
  for (const auto &o : organisms_) n += o.size();
  return n;
}

double Colony::total_energy() const {
  double e = 0.0;
  for (const auto &o : organisms_) e += o.total_energy();
  return e;
}

void Colony::absorb_nutrients(std::vector<double> &metabolised) {
  metabolised.clear();
  for (auto &org : organisms_) {
    for (auto &cell : org.cells) {
      cell.nutrient_force = {};
      double gained = 0.0;
      if (!params_.flags.no_meta) {
        if (cell.energy > 0.0 && field_.senses_nutrient(cell.position, params_.sense_radius)) {
          const Vec2 g = field_.gradient(cell.position);
          const double gn = norm(g);
          if (gn > 0.0) cell.nutrient_force = g * (params_.c_F * cell.energy / gn);
        }
        int ix, iy;
        field_.tile_of(cell.position, ix, iy);
        double &tile = field_.at(ix, iy);
        const double uptake = std::min(tile, std::min(tile, params_.a_max) * genome_.eta);
        if (uptake > 0.0) {
          tile -= uptake;
          gained = params_.nutrient_yield * uptake;
        }
      }
      metabolised.push_back(gained);
    }
  }
}

void Colony::update_energies(const std::vector<double> &metabolised) {
  std::size_t k = 0;
  for (auto &org : organisms_) {
    for (auto &cell : org.cells) {
      const double gained = metabolised[k++];
      if (params_.flags.no_energy) {
        cell.energy += gained;
      } else {
        const double loss = params_.flags.no_meta ? params_.c1
                                                  : metabolic_cost(norm(cell.nutrient_force), genome_, params_);
        cell.energy = energy_step(cell.energy, loss, 0.0, gained);
      }
    }
  }
  if (!params_.flags.no_energy)
    for (auto &org : organisms_) diffuse_energy(org, params_);
}

void Colony::resolve_rules() {
  std::vector<Organism> alive;
  alive.reserve(organisms_.size());
  for (auto &org : organisms_) {
    const RuleOutcome r = apply_cell_rules(org, genome_, params_, next_id_);
    if (!r.deleted) alive.push_back(std::move(org));
  }
  organisms_ = std::move(alive);
}

void Colony::progress_splits() {
  if (params_.flags.no_division) return;
  std::vector<Organism> next;
  next.reserve(organisms_.size() + 1);
  for (auto &org : organisms_) {
    if (org.pending) {
      const std::size_t a = org.index_of(org.pending->max_cell);
      const std::size_t b = org.index_of(org.pending->split_cell);
      if (a == org.size() || b == org.size()) {
        org.pending.reset();
      } else if (distance(org.cells[a].position, org.cells[b].position) <= 2.0 * params_.r_r) {
        auto halves = split_ring(org, a, b, params_, next_id_);
        if (halves) {
          next.push_back(std::move(halves->first));
          next.push_back(std::move(halves->second));
          continue;
        }
        org.pending.reset();
      }
    } else if (org.total_energy() > params_.eps_org_split()) {
      if (auto pair = choose_split_pair(org, genome_.rho))
        org.pending = PendingSplit{org.cells[pair->first].id, org.cells[pair->second].id};
    }
    next.push_back(std::move(org));
  }
  organisms_ = std::move(next);
}

namespace {

// Forces that cancel pairwise: repulsion, springs, split attraction.
std::vector<Vec2> internal_forces(const std::vector<Organism> &organisms, const Genome &g, const SimParams &p) {
  std::vector<Vec2> positions;
  for (const auto &o : organisms)
    for (const auto &c : o.cells) positions.push_back(c.position);
  std::vector<Vec2> forces(positions.size());
  accumulate_repulsion(positions, p, forces);

  const double stiffness = p.k_s * g.k;
  std::size_t base = 0;
  for (const auto &o : organisms) {
    const std::size_t n = o.size();
    for (std::size_t e = 0; e < n; ++e) {
      const auto [tail, head] = spring_force(o, e, stiffness);
      forces[base + e] += tail;
      forces[base + (e + 1) % n] += head;
    }
    if (o.pending) {
      const std::size_t a = o.index_of(o.pending->max_cell);
      const std::size_t b = o.index_of(o.pending->split_cell);
      if (a < n && b < n) {
        const Vec2 ab = o.cells[b].position - o.cells[a].position;
        const double d = norm(ab);
        if (d > 0.0) {
          const Vec2 f = ab * (p.f_attr / d);
          forces[base + a] += f;
          forces[base + b] -= f;
        }
      }
    }
    base += n;
  }
  return forces;
}

}  // namespace

std::vector<Vec2> Colony::accumulate_forces() const {
  auto forces = internal_forces(organisms_, genome_, params_);
  std::size_t k = 0;
  for (const auto &o : organisms_)
    for (const auto &c : o.cells) forces[k++] += c.nutrient_force;
  return forces;
}

Vec2 Colony::internal_force_sum() const {
  Vec2 sum;
  for (const auto &f : internal_forces(organisms_, genome_, params_)) sum += f;
  return sum;
}

void Colony::integrate(const std::vector<Vec2> &forces) {
  const double dt = params_.dt;
  const double vmax = params_.max_speed / dt;
  const double hi = params_.env_size;
  std::size_t k = 0;
  for (auto &org : organisms_) {
    for (auto &cell : org.cells) {
      const double m = cell.mass(params_);
      const double damping = std::clamp(genome_.nu * m, 0.0, 1.0);
      Vec2 v = cell.velocity * (1.0 - damping) + forces[k++] * (dt / m);
      const double speed = norm(v);
      if (speed > vmax) v *= vmax / speed;
      Vec2 x = cell.position + v * dt;
      if (x.x < 0.0 || x.x > hi) {
        x.x = std::clamp(x.x, 0.0, hi);
        v.x = 0.0;
      }
      if (x.y < 0.0 || x.y > hi) {
        x.y = std::clamp(x.y, 0.0, hi);
        v.y = 0.0;
      }
      cell.velocity = v;
      cell.position = x;
    }
  }
}

Layer Colony::step() {
  field_.diffuse(params_.dt);
  field_.emit_and_replace(params_, rng_);

  std::vector<double> metabolised;
  absorb_nutrients(metabolised);
  update_energies(metabolised);
  resolve_rules();
  progress_splits();

  if (!params_.flags.no_physics) integrate(accumulate_forces());

  for (auto &org : organisms_) update_rest_lengths(org, params_);
  ++clock_;
  return snapshot();
}

Layer Colony::snapshot() const {
  Layer layer;
  layer.reserve(organisms_.size());
  for (const auto &org : organisms_) {
    Polyline poly;
    poly.reserve(org.size());
    for (const auto &c : org.cells)
      if (poly.empty() || !(poly.back() == c.position)) poly.push_back(c.position);
    while (poly.size() > 1 && poly.back() == poly.front()) poly.pop_back();
    if (poly.size() >= 3) layer.push_back(std::move(poly));
  }
  return layer;
}

FormHistory grow(const Genome &genome, const SimParams &params, std::uint64_t env_seed, int n_steps) {
  if (n_steps < 0) throw ConfigError("steps", "must be >= 0");
  if (n_steps > kMaxLayers)
    throw ConfigError("steps", std::to_string(n_steps) + " exceeds " + std::to_string(kMaxLayers) + "-layer cap");
  FormHistory history;
  history.layer_height_mm = params.layer_height_mm;
  history.units_to_mm = params.units_to_mm;

  Colony colony(genome, params, env_seed);
  Layer initial = colony.snapshot();
  for (int t = 0; t < n_steps; ++t) {
    Layer layer = colony.step();
    if (colony.extinct() || layer.empty()) break;
    history.layers.push_back(std::move(layer));
  }
  if (history.layers.empty()) history.layers.push_back(std::move(initial));
  return history;
}

}  // namespace growform
