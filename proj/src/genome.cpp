#include "growform/genome.hpp"

#include <algorithm>
#include <cmath>

#include "growform/json_fields.hpp"

namespace growform {

Genome SearchBox::clamp(const Genome &g) const {
  auto a = g.to_array();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::clamp(a[i], ranges[i].min, ranges[i].max);
  return Genome::from_array(a);
}

bool SearchBox::contains(const Genome &g) const {
  const auto a = g.to_array();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] >= ranges[i].min && a[i] <= ranges[i].max)) return false;
  return true;
}

std::array<double, Genome::kAlleles> SearchBox::normalize(const Genome &g) const {
  auto a = g.to_array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double span = ranges[i].max - ranges[i].min;
    a[i] = span > 0.0 ? (a[i] - ranges[i].min) / span : 0.0;
  }
  return a;
}

Genome SearchBox::denormalize(const std::array<double, Genome::kAlleles> &unit) const {
  std::array<double, Genome::kAlleles> a{};
  for (std::size_t i = 0; i < a.size(); ++i)
    a[i] = ranges[i].min + std::clamp(unit[i], 0.0, 1.0) * (ranges[i].max - ranges[i].min);
  return Genome::from_array(a);
}

void validate(const Genome &g, const std::string &path) {
  auto finite = [&](double v, const char *name) {
    if (!std::isfinite(v)) throw ConfigError(path + "." + name, "must be finite");
  };
  finite(g.eta, "eta");
  finite(g.nu, "nu");
  finite(g.eps_max, "eps_max");
  finite(g.k, "k");
  finite(g.rho, "rho");
  if (g.eta < 0.0) throw ConfigError(path + ".eta", "must be >= 0");
  if (g.nu <= 0.0) throw ConfigError(path + ".nu", "must be > 0");
  if (g.eps_max <= 0.0) throw ConfigError(path + ".eps_max", "must be > 0");
  if (g.k <= 0.0) throw ConfigError(path + ".k", "must be > 0");
  if (!(g.rho > 0.0 && g.rho < 1.0)) throw ConfigError(path + ".rho", "must lie in (0, 1)");
}

nlohmann::json to_json(const Genome &g) {
  return {{"eta", g.eta}, {"nu", g.nu}, {"eps_max", g.eps_max}, {"k", g.k}, {"rho", g.rho}};
}

Genome genome_from_json(const nlohmann::json &j, const std::string &path) {
  Genome g;
  detail::FieldReader r(j, path);
  r.required("eta", g.eta);
  r.required("nu", g.nu);
  r.required("eps_max", g.eps_max);
  r.required("k", g.k);
  r.required("rho", g.rho);
  r.finish();
  validate(g, path);
  return g;
}

nlohmann::json to_json(const SearchBox &box) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < Genome::kAlleles; ++i)
    j[std::string(Genome::kNames[i])] = {box.ranges[i].min, box.ranges[i].max};
  return j;
}

SearchBox search_box_from_json(const nlohmann::json &j, const std::string &path) {
  SearchBox box;
  detail::FieldReader r(j, path);
  for (std::size_t i = 0; i < Genome::kAlleles; ++i) {
    const std::string name(Genome::kNames[i]);
    std::array<double, 2> range{box.ranges[i].min, box.ranges[i].max};
    r.optional(name.c_str(), range);
    if (!(range[0] <= range[1])) throw ConfigError(path + "." + name, "min must not exceed max");
    box.ranges[i] = {range[0], range[1]};
  }
  r.finish();
  return box;
}

}  // namespace growform
