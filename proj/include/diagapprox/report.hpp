#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "diagapprox/config.hpp"
#include "diagapprox/dirichlet.hpp"
#include "diagapprox/metric_sets.hpp"
#include "diagapprox/sampling.hpp"

namespace diagapprox {

struct MeasureRow {
  PZElement gamma;
  Rational level;
  Rational L;
  Rational psi;
  MeasureBounds bounds;
};

struct OverlapRow {
  PZElement beta;
  PZElement gamma;
  Rational overlap;
  Rational bound;
  bool pass() const { return overlap <= bound; }
};

struct SecondMomentRow {
  unsigned long N = 1;
  std::size_t sets = 0;
  Rational sum_measures;
  Rational sum_pairwise;
  std::optional<Rational> bound;
};

struct McRow {
  std::string label;  // "union" or the gamma of a single set
  std::optional<Rational> exact;        // single sets
  std::optional<Rational> lower_bound;  // union: the second-moment bound
  MCEstimate estimate;
  // Single sets: |estimate - exact| <= 3 sqrt(exact (1 - exact) / samples).
  // Union: lower_bound <= estimate + 3 standard_error.
  bool pass = false;
};

struct DirichletRow {
  std::vector<Rational> point;
  unsigned long N = 1;
  DirichletResult result;
  Rational level;
  Rational bound;  // M / N
  bool pass = false;
};

struct VerifyCheck {
  std::string name;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::uint64_t allowed_failures = 0;  // nonzero only for statistical checks
  std::string detail;                  // first counterexample, if any
  bool pass() const { return failures <= allowed_failures; }
};

struct VerifySummary {
  std::vector<VerifyCheck> checks;
  bool all_pass() const;
};

struct Report {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<MeasureRow> measure_table;
  std::vector<SeriesPoint> series;
  std::vector<OverlapRow> overlaps;
  std::vector<SecondMomentRow> second_moment;
  std::vector<McRow> mc;
  std::vector<DirichletRow> dirichlet;
  std::optional<VerifySummary> verify;
};

std::vector<MeasureRow> build_measure_table(const PlaceSet& places, const PsiFunction& psi, unsigned long N_max);
std::vector<OverlapRow> build_overlap_table(const PlaceSet& places, const PsiFunction& psi, unsigned long N_max);
/// (sum lambda)^2 / (sum pairwise lambda) over {A_gamma : level <= N}, N = 1..N_max.
std::vector<SecondMomentRow> build_second_moment(const PlaceSet& places, const PsiFunction& psi,
                                                 unsigned long N_max);
/// Union estimate over level <= N_max plus one estimate per set.
std::vector<McRow> build_mc(const PlaceSet& places, const PsiFunction& psi, const ExperimentConfig& config);
std::vector<DirichletRow> build_dirichlet(const PlaceSet& places, const ExperimentConfig& config);

/// Exhaustive and sampled checks of every finite statement at the scale of
/// the config (level <= n-max, m, n <= 30 for the linear-equation count).
VerifySummary run_verify(const ExperimentConfig& config);

/// Every section, in the order of the JSON report.
Report run_report(const ExperimentConfig& config);

/// Section names: config, measure_table, series, overlaps, second_moment, mc,
/// dirichlet, verify_summary.
void write_json(const Report& report, std::ostream& out);
void write_csv_section(const Report& report, const std::string& section, std::ostream& out);
/// json: a single file at path (stdout when empty). csv: path is a directory
/// receiving one <section>.csv per non-empty section (stdout when empty).
void write_report(const Report& report, const std::string& format, const std::string& path);
/// Every section to one stream; CSV sections are preceded by "# <name>".
void write_report(const Report& report, const std::string& format, std::ostream& out);

}  // namespace diagapprox
