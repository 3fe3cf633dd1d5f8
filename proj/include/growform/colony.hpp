#pragma once

#include <cstdint>
#include <vector>

#include "growform/form_history.hpp"
#include "growform/genome.hpp"
#include "growform/nutrient_field.hpp"
#include "growform/organism.hpp"
#include "growform/rng.hpp"
#include "growform/sim_params.hpp"

namespace growform {

/// Live simulation state. Advancing it is strictly sequential; distinct
/// colonies share nothing.
class Colony {
 public:
  Colony(const Genome &genome, const SimParams &params, std::uint64_t env_seed);

  const std::vector<Organism> &organisms() const { return organisms_; }
  std::vector<Organism> &organisms() { return organisms_; }
  const NutrientField &field() const { return field_; }
  NutrientField &field() { return field_; }
  const Genome &genome() const { return genome_; }
  const SimParams &params() const { return params_; }
  int clock() const { return clock_; }
  bool extinct() const { return organisms_.empty(); }

  std::size_t cell_count() const;
  double total_energy() const;

  /// One full timestep in fixed order; returns the emitted layer.
  Layer step();

  /// Current organism outlines with consecutive coincident vertices merged.
  Layer snapshot() const;

  /// Sum of repulsion, spring and split-attraction forces over every cell
  /// for the current state. Internal forces only, so this is zero up to
  /// rounding.
  Vec2 internal_force_sum() const;

  friend bool operator==(const Colony &, const Colony &) = default;

 private:
  void absorb_nutrients(std::vector<double> &metabolised);
  void update_energies(const std::vector<double> &metabolised);
  void resolve_rules();
  void progress_splits();
  std::vector<Vec2> accumulate_forces() const;
  void integrate(const std::vector<Vec2> &forces);

  Genome genome_;
  SimParams params_;
  NutrientField field_;
  std::vector<Organism> organisms_;
  Rng rng_;
  int clock_ = 0;
  CellId next_id_ = 0;
};

/// Runs `n_steps` timesteps and records one layer per step; n_steps == 0
/// yields just the seeded circle. Stops early when the colony dies out.
FormHistory grow(const Genome &genome, const SimParams &params, std::uint64_t env_seed, int n_steps);

/// Number of cells in the initial ring: floor(2 pi r / (2 eps_init)).
std::size_t initial_cell_count(const SimParams &params);

}  // namespace growform
