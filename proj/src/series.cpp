#include "growform/series.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace growform {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string emit_series_csv(const RunLog &log) {
  std::string out;
  for (std::size_t i = 0; i < kGenerationColumns.size(); ++i) {
    if (i) out += ',';
    out += kGenerationColumns[i];
  }
  out += '\n';
  for (const auto &r : log.records) {
    out += std::to_string(r.generation);
    for (double v : {r.best_p, r.best_c, r.best_fitness, r.mean_fitness, r.sigma, r.covariance_trace,
                     r.best_so_far_p, r.best_so_far_c, r.best_so_far_fitness})
      out += ',' + num(v);
    out += '\n';
  }
  return out;
}

std::vector<GenerationRecord> parse_series_csv(const std::string &csv) {
  std::istringstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("series CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() != kGenerationColumns.size()) throw std::runtime_error("series CSV header has wrong width");
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] != kGenerationColumns[i]) throw std::runtime_error("unexpected series column '" + header[i] + "'");

  std::vector<GenerationRecord> records;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != kGenerationColumns.size())
      throw std::runtime_error("series CSV row " + std::to_string(row) + " has wrong width");
    GenerationRecord r;
    try {
      r.generation = std::stoi(cells[0]);
      r.best_p = std::stod(cells[1]);
      r.best_c = std::stod(cells[2]);
      r.best_fitness = std::stod(cells[3]);
      r.mean_fitness = std::stod(cells[4]);
      r.sigma = std::stod(cells[5]);
      r.covariance_trace = std::stod(cells[6]);
      r.best_so_far_p = std::stod(cells[7]);
      r.best_so_far_c = std::stod(cells[8]);
      r.best_so_far_fitness = std::stod(cells[9]);
    } catch (const std::logic_error &) {
      throw std::runtime_error("series CSV row " + std::to_string(row) + " has a non-numeric field");
    }
    records.push_back(r);
  }
  return records;
}

std::string emit_layer_series_csv(const FitnessReport &report) {
  std::string out = "layer,printability,convexity,dispersion,min_diameter_factor\n";
  for (const auto &l : report.per_layer)
    out += std::to_string(l.layer) + ',' + num(l.printability) + ',' + num(l.convexity) + ',' + num(l.dispersion) +
           ',' + num(l.min_diameter_factor) + '\n';
  return out;
}

}  // namespace growform
