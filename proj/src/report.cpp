#include "diagapprox/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "diagapprox/error.hpp"

namespace diagapprox {

namespace {

using nlohmann::ordered_json;

std::string frac(const Rational& q) { return to_fraction_string(q); }

std::string decimal(double x) {
  std::ostringstream out;
  out << std::setprecision(12) << std::fixed << x;
  return out.str();
}

std::string point_string(const std::vector<Rational>& coords) {
  std::string out;
  for (std::size_t k = 0; k < coords.size(); ++k) {
    if (k) out += ';';
    out += frac(coords[k]);
  }
  return out;
}

double sigma_for(const Rational& exact, std::uint64_t samples) {
  const double m = exact.get_d();
  return std::sqrt(m * (1 - m) / static_cast<double>(samples));
}

}  // namespace

bool VerifySummary::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass()) return false;
  }
  return true;
}

std::vector<MeasureRow> build_measure_table(const PlaceSet& places, const PsiFunction& psi, unsigned long N_max) {
  std::vector<MeasureRow> rows;
  for (const auto& gamma : positive_index_set(places, N_max)) {
    auto desc = build_A_gamma(gamma, psi, places);
    rows.push_back({gamma, level(gamma, places), big_L(gamma, places), desc.psi_value,
                    measure_bounds_check(desc, places)});
  }
  return rows;
}

std::vector<OverlapRow> build_overlap_table(const PlaceSet& places, const PsiFunction& psi, unsigned long N_max) {
  const auto index = positive_index_set(places, N_max);
  std::vector<ApproxSetDescriptor> sets;
  sets.reserve(index.size());
  for (const auto& g : index) sets.push_back(build_A_gamma(g, psi, places));
  std::vector<OverlapRow> rows;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      rows.push_back({index[i], index[j], overlap_measure(sets[i], sets[j]),
                      overlap_bound(sets[i].psi_value, sets[j].psi_value, places)});
    }
  }
  return rows;
}

std::vector<SecondMomentRow> build_second_moment(const PlaceSet& places, const PsiFunction& psi,
                                                 unsigned long N_max) {
  // Index is ordered by level, so the family for N is a prefix.
  const auto index = positive_index_set(places, N_max);
  std::vector<ApproxSetDescriptor> sets;
  for (const auto& g : index) sets.push_back(build_A_gamma(g, psi, places));
  std::vector<SecondMomentRow> rows;
  Rational sum = 0, pairwise = 0;
  std::size_t done = 0;
  for (unsigned long N = 1; N <= N_max; ++N) {
    for (; done < index.size() && level(index[done], places) <= N; ++done) {
      sum += sets[done].exact_measure;
      pairwise += sets[done].exact_measure;
      for (std::size_t j = 0; j < done; ++j) pairwise += 2 * overlap_measure(sets[done], sets[j]);
    }
    SecondMomentRow row{N, done, sum, pairwise, std::nullopt};
    if (pairwise != 0) row.bound = Rational(sum * sum / pairwise);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<McRow> build_mc(const PlaceSet& places, const PsiFunction& psi, const ExperimentConfig& config) {
  const auto index = positive_index_set(places, config.n_max);
  std::vector<ApproxSetDescriptor> sets;
  for (const auto& g : index) sets.push_back(build_A_gamma(g, psi, places));
  std::vector<McRow> rows;

  const auto moments = build_second_moment(places, psi, config.n_max);
  McRow uni;
  uni.label = "union";
  uni.lower_bound = moments.back().bound;
  uni.estimate = mc_union_measure(sets, places, config.samples, config.digits, config.seed, config.threads);
  uni.pass = !uni.lower_bound ||
             uni.lower_bound->get_d() <= uni.estimate.estimate + 3 * uni.estimate.standard_error;
  rows.push_back(std::move(uni));

  for (std::size_t i = 0; i < sets.size(); ++i) {
    McRow row;
    row.label = to_string(index[i]);
    row.exact = sets[i].exact_measure;
    row.estimate = mc_union_measure({sets[i]}, places, config.samples, config.digits,
                                    chunk_seed(config.seed, 0x5e7 + i), config.threads);
    row.pass = std::abs(row.estimate.estimate - row.exact->get_d()) <= 3 * sigma_for(*row.exact, config.samples);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DirichletRow> build_dirichlet(const PlaceSet& places, const ExperimentConfig& config) {
  std::mt19937_64 rng(chunk_seed(config.seed, 0xd1));
  std::vector<DirichletRow> rows;
  for (unsigned long k = 0; k < config.dirichlet_points; ++k) {
    const auto x = random_rational_point(rng, places, 1000);
    for (unsigned long N = 1; N <= config.n_max; N *= 2) {
      auto res = dirichlet_approximate(x, places, N);
      DirichletRow row{x.coords(), N, res, level(res.gamma, places), make_rational(places.max_prime(), N), false};
      row.pass = res.gamma.is_positive() && row.level <= N && res.distance <= row.bound &&
                 res.distance == distance(scale(res.gamma.value(), x), diagonal(res.beta.value(), places), places);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

Report run_report(const ExperimentConfig& config) {
  const auto places = config.place_set();
  const auto psi = config.psi_function(places);
  Report report;
  report.config = config.entries();
  report.config.emplace_back("rng", kRngAlgorithm);
  report.config.emplace_back("real_resolution", "2^-53");
  report.measure_table = build_measure_table(places, psi, config.n_max);
  report.series = series_table(psi, places, config.n_max);
  report.overlaps = build_overlap_table(places, psi, config.n_max);
  report.second_moment = build_second_moment(places, psi, config.n_max);
  report.mc = build_mc(places, psi, config);
  report.dirichlet = build_dirichlet(places, config);
  report.verify = run_verify(config);
  return report;
}

namespace {

ordered_json config_json(const Report& r) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : r.config) j[k] = v;
  return j;
}

ordered_json measure_json(const Report& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& m : r.measure_table) {
    ordered_json nu = ordered_json::array();
    for (auto e : m.gamma.exponents()) nu.push_back(e);
    rows.push_back({{"gamma", frac(m.gamma.value())},
                    {"n", to_string(m.gamma.unit())},
                    {"nu", nu},
                    {"level", frac(m.level)},
                    {"L", frac(m.L)},
                    {"psi", frac(m.psi)},
                    {"measure", frac(m.bounds.exact)},
                    {"lower_bound", frac(m.bounds.lower)},
                    {"upper_bound", frac(m.bounds.upper)},
                    {"lower_pass", m.bounds.lower_ok},
                    {"upper_pass", m.bounds.upper_ok},
                    {"pass", m.bounds.ok()}});
  }
  return rows;
}

ordered_json series_json(const Report& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& s : r.series) {
    rows.push_back({{"N", s.N}, {"S", frac(s.S)}, {"D", frac(s.D)}, {"R", s.R ? ordered_json(frac(*s.R)) : ordered_json()}});
  }
  return rows;
}

ordered_json overlaps_json(const Report& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& o : r.overlaps) {
    rows.push_back({{"beta", frac(o.beta.value())},
                    {"gamma", frac(o.gamma.value())},
                    {"overlap", frac(o.overlap)},
                    {"bound", frac(o.bound)},
                    {"pass", o.pass()}});
  }
  return rows;
}

ordered_json second_moment_json(const Report& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& s : r.second_moment) {
    rows.push_back({{"N", s.N},
                    {"sets", s.sets},
                    {"sum_measures", frac(s.sum_measures)},
                    {"sum_pairwise", frac(s.sum_pairwise)},
                    {"bound", s.bound ? ordered_json(frac(*s.bound)) : ordered_json()}});
  }
  return rows;
}

ordered_json mc_json(const Report& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& m : r.mc) {
    rows.push_back({{"label", m.label},
                    {"exact", m.exact ? ordered_json(frac(*m.exact)) : ordered_json()},
                    {"lower_bound", m.lower_bound ? ordered_json(frac(*m.lower_bound)) : ordered_json()},
                    {"estimate", m.estimate.estimate},
                    {"standard_error", m.estimate.standard_error},
                    {"samples", m.estimate.samples},
                    {"hits", m.estimate.hits},
                    {"seed", m.estimate.seed},
                    {"digits", m.estimate.digits},
                    {"pass", m.pass}});
  }
  return rows;
}

ordered_json dirichlet_json(const Report& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& d : r.dirichlet) {
    ordered_json point = ordered_json::array();
    for (const auto& c : d.point) point.push_back(frac(c));
    rows.push_back({{"point", point},
                    {"N", d.N},
                    {"beta", frac(d.result.beta.value())},
                    {"gamma", frac(d.result.gamma.value())},
                    {"level", frac(d.level)},
                    {"distance", frac(d.result.distance)},
                    {"bound", frac(d.bound)},
                    {"scanned", d.result.scanned},
                    {"pass", d.pass}});
  }
  return rows;
}

ordered_json verify_json(const Report& r) {
  ordered_json j = ordered_json::object();
  if (!r.verify) return j;
  ordered_json checks = ordered_json::array();
  for (const auto& c : r.verify->checks) {
    checks.push_back({{"check", c.name},
                      {"checked", c.checked},
                      {"failures", c.failures},
                      {"allowed_failures", c.allowed_failures},
                      {"pass", c.pass()},
                      {"detail", c.detail}});
  }
  j["all_pass"] = r.verify->all_pass();
  j["checks"] = checks;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const char* flag(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_json(const Report& report, std::ostream& out) {
  ordered_json j;
  j["config"] = config_json(report);
  j["measure_table"] = measure_json(report);
  j["series"] = series_json(report);
  j["overlaps"] = overlaps_json(report);
  j["second_moment"] = second_moment_json(report);
  j["mc"] = mc_json(report);
  j["dirichlet"] = dirichlet_json(report);
  j["verify_summary"] = verify_json(report);
  out << j.dump(2) << '\n';
}

void write_csv_section(const Report& r, const std::string& section, std::ostream& out) {
  if (section == "config") {
    out << "key,value\n";
    for (const auto& [k, v] : r.config) out << csv_field(k) << ',' << csv_field(v) << '\n';
  } else if (section == "measure_table") {
    const std::size_t rr = r.measure_table.empty() ? 0 : r.measure_table.front().gamma.exponents().size();
    std::vector<std::string> primes;
    for (const auto& [k, v] : r.config) {
      if (k != "places") continue;
      std::string inner = v.substr(1, v.size() - 2);  // "{inf,2,3}"
      std::istringstream in(inner);
      std::string item;
      while (std::getline(in, item, ',')) {
        if (item != "inf") primes.push_back(item);
      }
    }
    out << "gamma,n";
    for (std::size_t i = 0; i < rr; ++i) out << ",nu_" << (i < primes.size() ? primes[i] : std::to_string(i + 1));
    out << ",level,L,psi,measure,lower_bound,upper_bound,pass\n";
    for (const auto& m : r.measure_table) {
      out << frac(m.gamma.value()) << ',' << m.gamma.unit().get_str();
      for (auto e : m.gamma.exponents()) out << ',' << e;
      out << ',' << frac(m.level) << ',' << frac(m.L) << ',' << frac(m.psi) << ',' << frac(m.bounds.exact) << ','
          << frac(m.bounds.lower) << ',' << frac(m.bounds.upper) << ',' << flag(m.bounds.ok()) << '\n';
    }
  } else if (section == "series") {
    out << "N,S,D,R\n";
    for (const auto& s : r.series) {
      out << s.N << ',' << frac(s.S) << ',' << frac(s.D) << ',' << (s.R ? frac(*s.R) : "") << '\n';
    }
  } else if (section == "overlaps") {
    out << "beta,gamma,overlap,bound,pass\n";
    for (const auto& o : r.overlaps) {
      out << frac(o.beta.value()) << ',' << frac(o.gamma.value()) << ',' << frac(o.overlap) << ','
          << frac(o.bound) << ',' << flag(o.pass()) << '\n';
    }
  } else if (section == "second_moment") {
    out << "N,sets,sum_measures,sum_pairwise,bound\n";
    for (const auto& s : r.second_moment) {
      out << s.N << ',' << s.sets << ',' << frac(s.sum_measures) << ',' << frac(s.sum_pairwise) << ','
          << (s.bound ? frac(*s.bound) : "") << '\n';
    }
  } else if (section == "mc") {
    out << "label,exact,lower_bound,estimate,standard_error,samples,hits,seed,digits,pass\n";
    for (const auto& m : r.mc) {
      out << csv_field(m.label) << ',' << (m.exact ? frac(*m.exact) : "") << ','
          << (m.lower_bound ? frac(*m.lower_bound) : "") << ',' << decimal(m.estimate.estimate) << ','
          << decimal(m.estimate.standard_error) << ',' << m.estimate.samples << ',' << m.estimate.hits << ','
          << m.estimate.seed << ',' << m.estimate.digits << ',' << flag(m.pass) << '\n';
    }
  } else if (section == "dirichlet") {
    out << "point,N,beta,gamma,level,distance,bound,scanned,pass\n";
    for (const auto& d : r.dirichlet) {
      out << point_string(d.point) << ',' << d.N << ',' << frac(d.result.beta.value()) << ','
          << frac(d.result.gamma.value()) << ',' << frac(d.level) << ',' << frac(d.result.distance) << ','
          << frac(d.bound) << ',' << d.result.scanned << ',' << flag(d.pass) << '\n';
    }
  } else if (section == "verify_summary") {
    out << "check,checked,failures,allowed_failures,pass,detail\n";
    if (!r.verify) return;
    for (const auto& c : r.verify->checks) {
      out << csv_field(c.name) << ',' << c.checked << ',' << c.failures << ',' << c.allowed_failures << ','
          << flag(c.pass()) << ',' << csv_field(c.detail) << '\n';
    }
  } else {
    fail(ErrorCode::invalid_argument, "unknown report section '" + section + "'");
  }
}

namespace {

constexpr const char* kSections[] = {"config",        "measure_table", "series",    "overlaps",
                                     "second_moment", "mc",            "dirichlet", "verify_summary"};

bool has_section(const Report& r, const std::string& s) {
  if (s == "config") return !r.config.empty();
  if (s == "measure_table") return !r.measure_table.empty();
  if (s == "series") return !r.series.empty();
  if (s == "overlaps") return !r.overlaps.empty();
  if (s == "second_moment") return !r.second_moment.empty();
  if (s == "mc") return !r.mc.empty();
  if (s == "dirichlet") return !r.dirichlet.empty();
  return r.verify.has_value();
}

}  // namespace

void write_report(const Report& report, const std::string& format, std::ostream& out) {
  if (format == "json") {
    write_json(report, out);
    return;
  }
  if (format != "csv") fail(ErrorCode::invalid_argument, "format must be csv or json");
  bool first = true;
  for (const char* s : kSections) {
    if (!has_section(report, s)) continue;
    if (!first) out << '\n';
    first = false;
    out << "# " << s << '\n';
    write_csv_section(report, s, out);
  }
}

void write_report(const Report& report, const std::string& format, const std::string& path) {
  if (path.empty()) {
    write_report(report, format, std::cout);
    return;
  }
  if (format == "json") {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    write_json(report, out);
    if (!out) fail(ErrorCode::io, "write to " + path + " failed");
    return;
  }
  if (format != "csv") fail(ErrorCode::invalid_argument, "format must be csv or json");
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec || !std::filesystem::is_directory(path)) fail(ErrorCode::io, "cannot create directory " + path);
  for (const char* s : kSections) {
    if (!has_section(report, s)) continue;
    const auto file = (std::filesystem::path(path) / (std::string(s) + ".csv")).string();
    std::ofstream out(file, std::ios::binary);
    if (!out) fail(ErrorCode::io, "cannot write " + file);
    write_csv_section(report, s, out);
    if (!out) fail(ErrorCode::io, "write to " + file + " failed");
  }
}

}  // namespace diagapprox
