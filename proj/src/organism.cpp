#include "growform/organism.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace growform {

double Organism::total_energy() const {
  double total = 0.0;
  for (const auto &c : cells) total += c.energy;
  return total;
}

std::size_t Organism::index_of(CellId id) const {
  for (std::size_t i = 0; i < cells.size(); ++i)
    if (cells[i].id == id) return i;
  return cells.size();
}

bool Organism::well_formed() const {
  if (cells.size() < 3 || rest_lengths.size() != cells.size()) return false;
  std::unordered_set<CellId> ids;
  for (const auto &c : cells)
    if (!ids.insert(c.id).second) return false;
  for (double r : rest_lengths)
    if (!(r > 0.0)) return false;
  return true;
}

double repulsion_force(double d, const SimParams &p) {
  if (d > p.r_r) return 0.0;
  const double dc = std::max(d, p.d_min_clamp);
  return p.k_r * (-1.0 / (dc * dc) + 1.0 / (p.r_r * p.r_r));
}

std::pair<Vec2, Vec2> spring_force(const Organism &org, std::size_t edge, double stiffness) {
  const std::size_t n = org.cells.size();
  const Vec2 tail = org.cells[edge].position;
  const Vec2 head = org.cells[(edge + 1) % n].position;
  const Vec2 axis = head - tail;
  const double len = norm(axis);
  if (len == 0.0) return {{}, {}};
  const double delta = len - org.rest_lengths[edge];
  // Extension (delta > 0) pulls the tail toward the head.
  const Vec2 f = axis * (stiffness * delta / len);
  return {f, -f};
}

double rest_length(double e_tail, double e_head, const SimParams &p) {
  const double sum = e_tail + e_head;
  return p.c_l * std::sqrt(sum > 0.0 ? sum : p.eps_floor);
}

void update_rest_lengths(Organism &org, const SimParams &p) {
  const std::size_t n = org.cells.size();
  org.rest_lengths.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    org.rest_lengths[i] = rest_length(org.cells[i].energy, org.cells[(i + 1) % n].energy, p);
}

double metabolic_cost(double nutrient_force_magnitude, const Genome &g, const SimParams &p) {
  return p.c1 + g.eta * (g.eps_max + p.c2 * nutrient_force_magnitude / (g.nu * g.nu));
}

double energy_step(double energy, double loss, double diffused, double metabolised) {
  return std::max(0.0, energy - loss + diffused + metabolised);
}

void diffuse_energy(Organism &org, const SimParams &p) {
  const std::size_t n = org.cells.size();
  if (n < 2) return;
  std::vector<double> before(n);
  for (std::size_t i = 0; i < n; ++i) before[i] = org.cells[i].energy;
  std::vector<double> delta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (before[i] == before[j]) continue;
    const std::size_t donor = before[i] > before[j] ? i : j;
    const std::size_t receiver = donor == i ? j : i;
    const double given = p.chi * before[donor];
    const double gained = given - p.omega * distance(org.cells[i].position, org.cells[j].position);
    if (gained < 0.0) continue;
    delta[donor] -= given;
    delta[receiver] += gained;
  }
  for (std::size_t i = 0; i < n; ++i) org.cells[i].energy = std::max(0.0, before[i] + delta[i]);
}

RuleOutcome apply_cell_rules(Organism &org, const Genome &g, const SimParams &p, CellId &next_id) {
  RuleOutcome out;
  std::vector<double> snapshot(org.cells.size());
  for (std::size_t i = 0; i < snapshot.size(); ++i) snapshot[i] = org.cells[i].energy;

  // Die: removing a cell drops its leading edge; the predecessor's edge now
  // reaches the successor.
  std::vector<Cell> survivors;
  std::vector<double> surviving_energy;
  survivors.reserve(org.cells.size());
  for (std::size_t i = 0; i < org.cells.size(); ++i) {
    if (snapshot[i] <= 0.0) {
      ++out.died;
      continue;
    }
    survivors.push_back(org.cells[i]);
    surviving_energy.push_back(snapshot[i]);
  }
  if (survivors.size() < 3) {
    org.cells.clear();
    org.rest_lengths.clear();
    org.pending.reset();
    out.deleted = true;
    return out;
  }

  std::vector<Cell> result;
  result.reserve(survivors.size() * 2);
  for (std::size_t i = 0; i < survivors.size(); ++i) {
    Cell cell = survivors[i];
    if (!p.flags.no_division && surviving_energy[i] >= g.eps_max) {
      const double half = 0.5 * cell.energy;
      cell.energy = std::min(half, g.eps_max);
      Cell child = cell;
      child.id = next_id++;
      result.push_back(cell);
      result.push_back(child);
      ++out.divided;
    } else {
      cell.energy = std::min(cell.energy, g.eps_max);
      result.push_back(cell);
    }
  }
  org.cells = std::move(result);
  if (org.pending && (org.index_of(org.pending->max_cell) == org.size() ||
                      org.index_of(org.pending->split_cell) == org.size()))
    org.pending.reset();
  update_rest_lengths(org, p);
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> choose_split_pair(const Organism &org, double rho) {
  const std::size_t n = org.cells.size();
  if (n < 4) return std::nullopt;
  const double total = org.total_energy();
  if (!(total > 0.0)) return std::nullopt;

  std::size_t max_index = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (org.cells[i].energy > org.cells[max_index].energy) max_index = i;

  double accumulated = 0.0;
  std::size_t split = max_index;
  for (std::size_t step = 1; step <= n; ++step) {
    split = (max_index + step) % n;
    accumulated += org.cells[split].energy;
    if (accumulated / total >= rho) break;
  }
  if (split == max_index) split = (split + 1) % n;

  const std::size_t gap = (split + n - max_index) % n;
  const std::size_t ring_a = gap + 1;
  const std::size_t ring_b = n - gap + 1;
  if (ring_a < 3 || ring_b < 3) return std::nullopt;
  return std::make_pair(max_index, split);
}

std::optional<std::pair<Organism, Organism>> split_ring(const Organism &org, std::size_t max_index,
                                                        std::size_t split_index, const SimParams &p,
                                                        CellId &next_id) {
  const std::size_t n = org.cells.size();
  if (max_index >= n || split_index >= n || max_index == split_index) return std::nullopt;
  const std::size_t gap = (split_index + n - max_index) % n;
  if (gap + 1 < 3 || n - gap + 1 < 3) return std::nullopt;

  Organism a, b;
  // Ring A: max .. split along the leading direction, closed split -> max.
  for (std::size_t s = 0; s <= gap; ++s) a.cells.push_back(org.cells[(max_index + s) % n]);
  // Ring B: split' .. max', closed max' -> split'.
  for (std::size_t s = gap; s <= n; ++s) b.cells.push_back(org.cells[(max_index + s) % n]);

  a.cells.front().energy *= 0.5;
  a.cells.back().energy *= 0.5;
  b.cells.front().energy *= 0.5;
  b.cells.back().energy *= 0.5;
  b.cells.front().id = next_id++;
  b.cells.back().id = next_id++;

  update_rest_lengths(a, p);
  update_rest_lengths(b, p);
  return std::make_pair(std::move(a), std::move(b));
}

}  // namespace growform
