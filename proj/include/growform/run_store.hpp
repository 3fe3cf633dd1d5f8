#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "growform/evolve.hpp"
#include "json.hpp"

namespace growform {

inline constexpr const char *kToolVersion = "0.1.0";

/// Archived champion as written to champion_<rank>.json; refine reads it
/// back as its reference.
struct ChampionRecord {
  Champion champion;
  int steps = 0;
  SimParams sim;
  double complexity_a = 0.5;
  double min_diameter_threshold = 10.0;
};

nlohmann::json to_json(const ChampionRecord &c);
ChampionRecord champion_record_from_json(const nlohmann::json &j, const std::string &path = "champion");

/// File name -> content for every artifact of a finished or interrupted
/// run: generations.csv, runlog.json and one genome/history pair per
/// champion. Histories are regrown from the archived genome and seed.
std::map<std::string, std::string> run_artifacts(const RunLog &log, const EvolutionConfig &config);

/// Run manifest. Holds no timestamps, so equal runs give equal bytes.
struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  std::string seed_source = "flag";  ///< "flag", "config" or "entropy"
  nlohmann::json config = nlohmann::json::object();
  nlohmann::json inputs = nlohmann::json::object();
  std::map<std::string, std::string> outputs;  ///< file name -> sha256
  std::string status = "complete";           ///< "running" or "complete"
};

nlohmann::json to_json(const Manifest &m);
Manifest manifest_from_json(const nlohmann::json &j);

/// Writes every artifact atomically into `dir`, then the manifest listing
/// their digests.
void write_outputs(const std::filesystem::path &dir, const std::map<std::string, std::string> &files, Manifest manifest);

}  // namespace growform
