#pragma once

// Experiment configuration: flat sectioned key/value text (INI), with numeric
// grids written as start:stop:count.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "catlgt/model.hpp"

namespace catlgt::cli {

class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  /// Canonical INI text: sections and keys sorted, values verbatim.
  std::string serialize() const;
  /// SHA-256 of serialize(), hex encoded.
  std::string hash() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, const std::string& value);
  void erase(const std::string& key) { values_.erase(key); }
  /// Applies every key of `other` on top of this config.
  void merge(const ExperimentConfig& other);
  const std::map<std::string, std::string>& values() const { return values_; }

  std::string get(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  std::vector<double> grid(const std::string& key, const std::vector<double>& fallback) const;

  /// Link parameters from the [system] block (beta0 overrides G; g3 or
  /// g3_over_gap).
  LinkParams link() const;
  ChainParams chain() const;
  /// Checks every physical parameter and grid without running anything.
  void validate() const;

 private:
  std::map<std::string, std::string> values_;  // "section.key" -> value
};

/// "start:stop:count[:log]", a comma list, or a single number.
std::vector<double> parse_grid(const std::string& text);
double parse_number(const std::string& text, const std::string& what);

std::string sha256_hex(const std::string& data);

}  // namespace catlgt::cli
