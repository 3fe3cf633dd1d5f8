#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "growform/genome.hpp"
#include "growform/geometry.hpp"
#include "growform/sim_params.hpp"

namespace growform {

using CellId = std::uint64_t;

struct Cell {
  CellId id = 0;
  Vec2 position;
  Vec2 velocity;
  double energy = 0.0;
  /// Nutrient-seeking force chosen this step; its magnitude is also the
  /// F_N term of the movement cost.
  Vec2 nutrient_force;

  double mass(const SimParams &p) const { return p.mass_floor + p.c_m * energy; }

  friend bool operator==(const Cell &, const Cell &) = default;
};

/// Two cells that are being drawn together before their organism splits.
struct PendingSplit {
  CellId max_cell = 0;
  CellId split_cell = 0;
  friend bool operator==(const PendingSplit &, const PendingSplit &) = default;
};

/// Closed ring of cells. Edge i joins cell i to cell (i + 1) % n and the
/// traversal order defines the leading direction.
struct Organism {
  std::vector<Cell> cells;
  std::vector<double> rest_lengths;  ///< one per edge
  std::optional<PendingSplit> pending;

  std::size_t size() const { return cells.size(); }
  double total_energy() const;
  /// Index of the cell with this id, or size() when absent.
  std::size_t index_of(CellId id) const;
  /// Edge count matches cell count, at least three cells, unique ids.
  bool well_formed() const;

  friend bool operator==(const Organism &, const Organism &) = default;
};

/// Scalar repulsion between two cell centres a distance d apart:
/// k_r (1/r_r^2 - 1/d^2) inside the radius, 0 outside. The value is <= 0;
/// its magnitude pushes the cells apart. d is clamped below by d_min_clamp.
double repulsion_force(double d, const SimParams &p);

/// Hooke forces for edge `edge`: {force on tail, force on head}. Equal and
/// opposite; zero when the endpoints coincide.
std::pair<Vec2, Vec2> spring_force(const Organism &org, std::size_t edge, double stiffness);

double rest_length(double e_tail, double e_head, const SimParams &p);
void update_rest_lengths(Organism &org, const SimParams &p);

/// Internal energy loss per step: c1 + eta (eps_max + c2 F_N / nu^2).
double metabolic_cost(double nutrient_force_magnitude, const Genome &g, const SimParams &p);

/// E(t+1) = E(t) - loss + diffused + metabolised, floored at zero. The upper
/// clamp to eps_max happens after Divide.
double energy_step(double energy, double loss, double diffused, double metabolised);

/// Neighbour-to-neighbour energy diffusion. For each edge whose ends differ,
/// the donor loses chi E_donor and the receiver gains chi E_donor - omega d.
/// A transfer whose receiver gain would be negative is skipped. All transfers
/// read the pre-step energies.
void diffuse_energy(Organism &org, const SimParams &p);

struct RuleOutcome {
  bool deleted = false;
  int died = 0;
  int divided = 0;
};

/// Die (E == 0) then Divide (E >= eps_max), both decided on a snapshot of
/// the energies. New cells draw ids from `next_id`.
RuleOutcome apply_cell_rules(Organism &org, const Genome &g, const SimParams &p, CellId &next_id);

/// Locates the highest-energy cell, then walks the leading direction summing
/// energies until the running fraction of the total reaches rho. Returns
/// {max index, split index}, or nothing when either resulting ring would
/// have fewer than three cells.
std::optional<std::pair<std::size_t, std::size_t>> choose_split_pair(const Organism &org, double rho);

/// Duplicates the two pending cells and rewires the ring into two closed
/// rings. Each duplicate takes half its original's energy. Returns nothing
/// (and changes nothing) when a ring would be degenerate.
std::optional<std::pair<Organism, Organism>> split_ring(const Organism &org, std::size_t max_index,
                                                        std::size_t split_index, const SimParams &p,
                                                        CellId &next_id);

}  // namespace growform
