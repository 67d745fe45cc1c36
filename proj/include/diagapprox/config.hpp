#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diagapprox/metric_sets.hpp"
#include "diagapprox/places.hpp"

namespace diagapprox {

/// Experiment settings. Keys mirror the CLI flags without the leading dashes
/// (places, psi, c, theta, psi-table, n-max, samples, digits, seed, out,
/// format, dirichlet-points, threads).
struct ExperimentConfig {
  std::string places = "2";
  std::string psi = "scaled_cap";
  std::string c = "1/2";
  unsigned long theta = 2;
  std::string psi_table;
  unsigned long n_max = 4;
  std::uint64_t samples = 100000;
  unsigned long digits = 0;  // 0 picks the smallest admissible precision
  std::uint64_t seed = 20240601;
  std::string out;
  std::string format = "csv";
  unsigned long dirichlet_points = 8;
  unsigned threads = 0;  // 0 uses the hardware concurrency

  void set(std::string_view key, std::string_view value);
  /// Flat "key = value" lines; '#' starts a comment.
  void load_text(std::string_view text);
  void load_file(const std::string& path);

  PlaceSet place_set() const;
  /// Builds psi, reading psi-table when psi = table.
  PsiFunction psi_function(const PlaceSet& places) const;

  /// Ordered key/value pairs as they appear in reports.
  std::vector<std::pair<std::string, std::string>> entries() const;
};

}  // namespace diagapprox
