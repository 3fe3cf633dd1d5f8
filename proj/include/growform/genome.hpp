#pragma once

#include <array>
#include <string_view>

#include "json.hpp"

namespace growform {

/// The five alleles shared by every cell of a colony.
struct Genome {
  double eta = 0.0015;    ///< metabolic rate
  double nu = 0.3;        ///< cell drag coefficient per unit area
  double eps_max = 9.0;   ///< energy capacity
  double k = 0.5;         ///< edge spring coefficient
  double rho = 0.5;       ///< energy ratio used when an organism splits

  static constexpr std::size_t kAlleles = 5;
  static constexpr std::array<std::string_view, kAlleles> kNames = {"eta", "nu", "eps_max", "k", "rho"};

  std::array<double, kAlleles> to_array() const { return {eta, nu, eps_max, k, rho}; }
  static Genome from_array(const std::array<double, kAlleles> &a) { return {a[0], a[1], a[2], a[3], a[4]}; }

  friend bool operator==(const Genome &, const Genome &) = default;
};

struct AlleleRange {
  double min = 0.0;
  double max = 1.0;
};

/// Per-allele bounds. The optimizer works on the unit cube and maps
/// through this box.
struct SearchBox {
  std::array<AlleleRange, Genome::kAlleles> ranges = {{
      {0.0, 0.003},  // eta
      {0.05, 1.0},   // nu
      {5.5, 15.0},   // eps_max
      {0.05, 2.0},   // k
      {0.1, 0.9},    // rho
  }};

  Genome clamp(const Genome &g) const;
  bool contains(const Genome &g) const;
  std::array<double, Genome::kAlleles> normalize(const Genome &g) const;
  Genome denormalize(const std::array<double, Genome::kAlleles> &unit) const;
};

/// Throws ConfigError when an allele violates its declared domain
/// (eta >= 0; nu, eps_max, k > 0; 0 < rho < 1).
void validate(const Genome &g, const std::string &path = "genome");

nlohmann::json to_json(const Genome &g);
Genome genome_from_json(const nlohmann::json &j, const std::string &path = "genome");

nlohmann::json to_json(const SearchBox &box);
SearchBox search_box_from_json(const nlohmann::json &j, const std::string &path = "search_box");

}  // namespace growform
