#include "diagapprox/diagapprox.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <new>
#include <random>
#include <sstream>

#include "diagapprox/config.hpp"
#include "diagapprox/dirichlet.hpp"
#include "diagapprox/error.hpp"
#include "diagapprox/metric_sets.hpp"
#include "diagapprox/report.hpp"
#include "diagapprox/sampling.hpp"
#include "table.hpp"

using namespace diagapprox;
using nlohmann::ordered_json;

struct da_places {
  PlaceSet value;
};
struct da_psi {
  PsiFunction value;
};
struct da_config {
  ExperimentConfig value;
};

namespace {

thread_local std::string g_last_error;

da_status status_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return DA_INVALID_ARGUMENT;
    case ErrorCode::not_in_localization: return DA_NOT_IN_LOCALIZATION;
    case ErrorCode::cap_violation: return DA_CAP_VIOLATION;
    case ErrorCode::diagonal_rational: return DA_DIAGONAL_RATIONAL;
    case ErrorCode::exhausted: return DA_EXHAUSTED;
    case ErrorCode::precision: return DA_PRECISION;
    case ErrorCode::io: return DA_IO;
  }
  return DA_INTERNAL;
}

template <class F>
da_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DA_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DA_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::invalid_argument, std::string(what) + " is null");
}

da_status emit(const std::string& text, char** out, bool all_pass = true) {
  *out = dup(text);
  return all_pass ? DA_OK : DA_VERIFY_FAILED;
}

std::string frac(const Rational& q) { return to_fraction_string(q); }

AdelicPoint parse_point(const std::string& text, const PlaceSet& places) {
  std::vector<Rational> coords;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ';')) {
    std::istringstream parts(item);
    std::string part;
    while (std::getline(parts, part, ',')) {
      if (!part.empty()) coords.push_back(parse_rational(part));
    }
  }
  AdelicPoint x(std::move(coords));
  check_point(x, places);
  return x;
}

std::string point_string(const AdelicPoint& x) {
  std::string out;
  for (std::size_t k = 0; k < x.size(); ++k) out += (k ? ";" : "") + frac(x[k]);
  return out;
}

PZElement parse_pz(const char* text, const PlaceSet& places) {
  need(text, "element");
  return decompose(parse_rational(text), places);
}

PZElement parse_positive(const char* text, const PlaceSet& places) {
  auto g = parse_pz(text, places);
  if (!g.is_positive()) fail(ErrorCode::invalid_argument, "gamma must be positive");
  return g;
}

std::vector<std::string> prime_columns(const PlaceSet& places) {
  std::vector<std::string> out;
  for (auto p : places.primes()) out.push_back("nu_" + std::to_string(p));
  return out;
}

ordered_json measure_row(const MeasureRow& m, const PlaceSet& places) {
  ordered_json row = {{"gamma", frac(m.gamma.value())}, {"n", m.gamma.unit().get_str()}};
  for (std::size_t i = 0; i < places.r(); ++i) row["nu_" + std::to_string(places.prime(i))] = m.gamma.exponent(i);
  row["level"] = frac(m.level);
  row["L"] = frac(m.L);
  row["psi"] = frac(m.psi);
  row["measure"] = frac(m.bounds.exact);
  row["lower_bound"] = frac(m.bounds.lower);
  row["upper_bound"] = frac(m.bounds.upper);
  row["pass"] = m.bounds.ok();
  return row;
}

ordered_json dirichlet_row(const DirichletRow& d) {
  return {{"point", point_string(AdelicPoint(d.point))},
          {"N", d.N},
          {"beta", frac(d.result.beta.value())},
          {"gamma", frac(d.result.gamma.value())},
          {"level", frac(d.level)},
          {"distance", frac(d.result.distance)},
          {"bound", frac(d.bound)},
          {"scanned", d.result.scanned},
          {"pass", d.pass}};
}

ordered_json mc_row(const McRow& m) {
  return {{"label", m.label},
          {"exact", m.exact ? ordered_json(frac(*m.exact)) : ordered_json()},
          {"lower_bound", m.lower_bound ? ordered_json(frac(*m.lower_bound)) : ordered_json()},
          {"estimate", m.estimate.estimate},
          {"standard_error", m.estimate.standard_error},
          {"samples", m.estimate.samples},
          {"hits", m.estimate.hits},
          {"seed", m.estimate.seed},
          {"digits", m.estimate.digits},
          {"pass", m.pass}};
}

ordered_json overlap_row(const ApproxSetDescriptor& a, const ApproxSetDescriptor& b, const PsiFunction& psi,
                         const PlaceSet& places) {
  const auto& beta = a.gamma;
  const auto& gamma = b.gamma;
  const auto overlap = overlap_measure(a, b);
  const auto bound = overlap_bound(a.psi_value, b.psi_value, places);
  const auto geom = overlap_geometry(beta, gamma, psi, places);
  const auto count = overlap_count_N(beta, gamma, geom, places);
  std::string tau;
  for (std::size_t i = 0; i < geom.tau.size(); ++i) tau += (i ? ";" : "") + std::to_string(geom.tau[i]);
  return {{"beta", frac(beta.value())},
          {"gamma", frac(gamma.value())},
          {"overlap", frac(overlap)},
          {"bound", frac(bound)},
          {"pass", overlap <= bound},
          {"tau", tau},
          {"count", count.count.get_str()},
          {"zero_count", count.zero_count.get_str()},
          {"count_bound", frac(count.tau_bound)},
          {"count_pass", Rational(count.count) <= count.tau_bound}};
}

bool rows_pass(const Table& t, const char* key = "pass") {
  for (const auto& row : t.rows) {
    if (row.contains(key) && row.at(key).is_boolean() && !row.at(key).get<bool>()) return false;
  }
  return true;
}

}  // namespace

extern "C" {

const char* da_version(void) { return "1.0.0"; }

const char* da_status_name(da_status status) {
  switch (status) {
    case DA_OK: return "ok";
    case DA_INVALID_ARGUMENT: return "invalid_argument";
    case DA_NOT_IN_LOCALIZATION: return "not_in_localization";
    case DA_CAP_VIOLATION: return "cap_violation";
    case DA_DIAGONAL_RATIONAL: return "diagonal_rational";
    case DA_EXHAUSTED: return "exhausted";
    case DA_PRECISION: return "precision";
    case DA_IO: return "io";
    case DA_VERIFY_FAILED: return "verify_failed";
    case DA_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* da_last_error(void) { return g_last_error.c_str(); }

void da_string_free(char* s) { std::free(s); }

da_status da_places_create(const char* text, da_places** out) {
  return guarded([&] {
    need(text, "text");
    need(out, "out");
    *out = new da_places{PlaceSet::parse(text)};
    return DA_OK;
  });
}

void da_places_destroy(da_places* places) { delete places; }

da_status da_places_describe(const da_places* places, char** out) {
  return guarded([&] {
    need(places, "places");
    need(out, "out");
    return emit(places->value.to_string(), out);
  });
}

da_status da_decompose(const da_places* places, const char* q, char** out) {
  return guarded([&] {
    need(places, "places");
    need(out, "out");
    const auto g = parse_pz(q, places->value);
    std::string text = std::to_string(g.sign()) + " " + g.unit().get_str();
    for (auto e : g.exponents()) text += " " + std::to_string(e);
    return emit(text, out);
  });
}

da_status da_level(const da_places* places, const char* gamma, char** out) {
  return guarded([&] {
    need(places, "places");
    need(out, "out");
    return emit(frac(level(parse_pz(gamma, places->value), places->value)), out);
  });
}

da_status da_big_L(const da_places* places, const char* gamma, char** out) {
  return guarded([&] {
    need(places, "places");
    need(out, "out");
    const auto g = parse_pz(gamma, places->value);
    if (g.is_zero()) fail(ErrorCode::invalid_argument, "L is undefined at 0");
    return emit(frac(big_L(g, places->value)), out);
  });
}

da_status da_psi_create(const char* family, const char* c, unsigned long theta, da_psi** out) {
  return guarded([&] {
    need(family, "family");
    need(c, "c");
    need(out, "out");
    const std::string f = family;
    if (f == "scaled_cap") {
      *out = new da_psi{PsiFunction::scaled_cap(parse_rational(c))};
    } else if (f == "power") {
      *out = new da_psi{PsiFunction::power(parse_rational(c), theta)};
    } else {
      fail(ErrorCode::invalid_argument, "unknown psi family '" + f + "'");
    }
    return DA_OK;
  });
}

da_status da_psi_from_table(const char* path, const da_places* places, da_psi** out) {
  return guarded([&] {
    need(path, "path");
    need(places, "places");
    need(out, "out");
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, std::string("cannot read ") + path);
    *out = new da_psi{PsiFunction::parse_table(in, places->value)};
    return DA_OK;
  });
}

void da_psi_destroy(da_psi* psi) { delete psi; }

da_status da_psi_eval(const da_psi* psi, const da_places* places, const char* gamma, char** out) {
  return guarded([&] {
    need(psi, "psi");
    need(places, "places");
    need(out, "out");
    return emit(frac(psi->value(parse_pz(gamma, places->value), places->value)), out);
  });
}

da_status da_set_measure(const da_places* places, const da_psi* psi, const char* gamma, char** out) {
  return guarded([&] {
    need(places, "places");
    need(psi, "psi");
    need(out, "out");
    const auto desc = build_A_gamma(parse_positive(gamma, places->value), psi->value, places->value);
    return emit(frac(desc.exact_measure), out);
  });
}

da_status da_overlap_measure(const da_places* places, const da_psi* psi, const char* beta, const char* gamma,
                             char** out) {
  return guarded([&] {
    need(places, "places");
    need(psi, "psi");
    need(out, "out");
    const auto& ps = places->value;
    return emit(frac(overlap_measure(parse_positive(beta, ps), parse_positive(gamma, ps), psi->value, ps)), out);
  });
}

da_status da_reduce(const da_places* places, const char* point, char** out) {
  return guarded([&] {
    need(places, "places");
    need(point, "point");
    need(out, "out");
    const auto red = reduce_to_fundamental_domain(parse_point(point, places->value), places->value);
    return emit(point_string(red.point.point()) + ";" + frac(red.shift.value()), out);
  });
}

da_status da_membership(const da_places* places, const da_psi* psi, const char* point, const char* gamma,
                        int* inside) {
  return guarded([&] {
    need(places, "places");
    need(psi, "psi");
    need(point, "point");
    need(inside, "inside");
    const auto& ps = places->value;
    const FundamentalDomainPoint z(parse_point(point, ps), ps);
    *inside = membership(z, parse_positive(gamma, ps), psi->value, ps) ? 1 : 0;
    return DA_OK;
  });
}

da_status da_config_create(da_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new da_config{};
    return DA_OK;
  });
}

void da_config_destroy(da_config* config) { delete config; }

da_status da_config_set(da_config* config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    config->value.set(key, value);
    return DA_OK;
  });
}

da_status da_config_load(da_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    config->value.load_file(path);
    return DA_OK;
  });
}

da_status da_config_get(const da_config* config, const char* key, char** out) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(out, "out");
    std::string k = key;
    while (!k.empty() && k.front() == '-') k.erase(k.begin());
    for (auto& ch : k) ch = ch == '_' ? '-' : ch;
    if (k == "out") return emit(config->value.out, out);
    if (k == "threads") return emit(std::to_string(config->value.threads), out);
    for (const auto& [name, value] : config->value.entries()) {
      if (name == k) return emit(value, out);
    }
    fail(ErrorCode::invalid_argument, "unknown config key '" + std::string(key) + "'");
  });
}

da_status da_cmd_dirichlet(const da_config* config, const char* point, unsigned long n, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    Table t{{"point", "N", "beta", "gamma", "level", "distance", "bound", "scanned", "pass"}, {}};
    if (point) {
      const auto x = parse_point(point, places);
      const unsigned long N = n ? n : cfg.n_max;
      const auto res = dirichlet_approximate(x, places, N);
      DirichletRow row{x.coords(), N, res, level(res.gamma, places), make_rational(places.max_prime(), N), false};
      row.pass = res.gamma.is_positive() && row.level <= N && res.distance <= row.bound;
      t.rows.push_back(dirichlet_row(row));
    } else {
      ExperimentConfig c = cfg;
      if (n) c.n_max = n;
      for (const auto& row : build_dirichlet(places, c)) t.rows.push_back(dirichlet_row(row));
    }
    return emit(t.render(cfg.format), out, rows_pass(t));
  });
}

da_status da_cmd_coprime(const da_config* config, const char* point, unsigned long count, char** out) {
  return guarded([&] {
    need(config, "config");
    need(point, "point");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    const auto x = parse_point(point, places);
    const Rational M = places.max_prime();
    Table t{{"beta", "gamma", "level", "distance", "bound", "pass"}, {}};
    for (const auto& a : coprime_approximants(x, places, count ? count : 5, 1UL << 20)) {
      const auto lv = level(a.gamma, places);
      t.rows.push_back({{"beta", frac(a.beta.value())},
                        {"gamma", frac(a.gamma.value())},
                        {"level", frac(lv)},
                        {"distance", frac(a.distance)},
                        {"bound", frac(M / lv)},
                        {"pass", a.distance <= M / lv && gcd_pz(a.beta, a.gamma) == 1}});
    }
    return emit(t.render(cfg.format), out, rows_pass(t));
  });
}

da_status da_cmd_enumerate(const da_config* config, unsigned long n, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    const unsigned long N = n ? n : cfg.n_max;
    Table t{{"zeta", "n"}, {}};
    for (const auto& c : prime_columns(places)) t.columns.push_back(c);
    t.columns.push_back("level");
    for (const auto& z : enumerate_z_n(places, N)) {
      ordered_json row = {{"zeta", frac(z.value())}, {"n", z.unit().get_str()}};
      for (std::size_t i = 0; i < places.r(); ++i) row["nu_" + std::to_string(places.prime(i))] = z.exponent(i);
      row["level"] = frac(level(z, places));
      t.rows.push_back(std::move(row));
    }
    return emit(t.render(cfg.format), out);
  });
}

da_status da_cmd_measure(const da_config* config, const char* gamma, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    const auto psi = cfg.psi_function(places);
    Table t{{"gamma", "n"}, {}};
    for (const auto& c : prime_columns(places)) t.columns.push_back(c);
    for (const char* c : {"level", "L", "psi", "measure", "lower_bound", "upper_bound", "pass"}) t.columns.push_back(c);
    std::vector<MeasureRow> rows;
    if (gamma) {
      const auto g = parse_positive(gamma, places);
      const auto desc = build_A_gamma(g, psi, places);
      rows.push_back({g, level(g, places), big_L(g, places), desc.psi_value, measure_bounds_check(desc, places)});
    } else {
      rows = build_measure_table(places, psi, cfg.n_max);
    }
    for (const auto& m : rows) t.rows.push_back(measure_row(m, places));
    return emit(t.render(cfg.format), out, rows_pass(t));
  });
}

da_status da_cmd_overlap(const da_config* config, const char* beta, const char* gamma, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    const auto psi = cfg.psi_function(places);
    Table t{{"beta", "gamma", "overlap", "bound", "pass", "tau", "count", "zero_count", "count_bound", "count_pass"}, {}};
    if (beta || gamma) {
      need(beta, "beta");
      need(gamma, "gamma");
      t.rows.push_back(overlap_row(build_A_gamma(parse_positive(beta, places), psi, places),
                                   build_A_gamma(parse_positive(gamma, places), psi, places), psi, places));
    } else {
      std::vector<ApproxSetDescriptor> sets;
      for (const auto& g : positive_index_set(places, cfg.n_max)) sets.push_back(build_A_gamma(g, psi, places));
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) t.rows.push_back(overlap_row(sets[i], sets[j], psi, places));
      }
    }
    return emit(t.render(cfg.format), out, rows_pass(t) && rows_pass(t, "count_pass"));
  });
}

da_status da_cmd_series(const da_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    Table t{{"N", "S", "D", "R"}, {}};
    for (const auto& s : series_table(cfg.psi_function(places), places, cfg.n_max)) {
      t.rows.push_back({{"N", s.N}, {"S", frac(s.S)}, {"D", frac(s.D)}, {"R", s.R ? ordered_json(frac(*s.R)) : ordered_json()}});
    }
    return emit(t.render(cfg.format), out);
  });
}

da_status da_cmd_montecarlo(const da_config* config, const char* gammas, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    const auto places = cfg.place_set();
    const auto psi = cfg.psi_function(places);
    Table t{{"label", "exact", "lower_bound", "estimate", "standard_error", "samples", "hits", "seed", "digits", "pass"},
            {}};
    if (!gammas) {
      for (const auto& row : build_mc(places, psi, cfg)) t.rows.push_back(mc_row(row));
      return emit(t.render(cfg.format), out, rows_pass(t));
    }
    std::vector<ApproxSetDescriptor> sets;
    std::string label;
    std::istringstream in(gammas);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      sets.push_back(build_A_gamma(parse_positive(item.c_str(), places), psi, places));
      label += (label.empty() ? "" : ";") + frac(sets.back().gamma.value());
    }
    McRow row;
    row.label = label.empty() ? "empty" : label;
    // The union measure is exact when the sets are pairwise disjoint.
    Rational sum = 0;
    bool disjoint = true;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      sum += sets[i].exact_measure;
      for (std::size_t j = i + 1; j < sets.size() && disjoint; ++j) disjoint = overlap_measure(sets[i], sets[j]) == 0;
    }
    row.estimate = mc_union_measure(sets, places, cfg.samples, cfg.digits, cfg.seed, cfg.threads);
    if (disjoint) {
      row.exact = sum;
      const double m = sum.get_d();
      const double sigma = cfg.samples ? std::sqrt(m * (1 - m) / static_cast<double>(cfg.samples)) : 0;
      row.pass = std::abs(row.estimate.estimate - m) <= 3 * sigma;
    } else {
      row.pass = true;
    }
    t.rows.push_back(mc_row(row));
    return emit(t.render(cfg.format), out, rows_pass(t));
  });
}

da_status da_cmd_verify(const da_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto summary = run_verify(config->value);
    Table t{{"check", "checked", "failures", "allowed_failures", "pass", "detail"}, {}};
    for (const auto& c : summary.checks) {
      t.rows.push_back({{"check", c.name},
                        {"checked", c.checked},
                        {"failures", c.failures},
                        {"allowed_failures", c.allowed_failures},
                        {"pass", c.pass()},
                        {"detail", c.detail}});
    }
    return emit(t.render(config->value.format), out, summary.all_pass());
  });
}

da_status da_cmd_report(const da_config* config, char** out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    const auto& cfg = config->value;
    // Builds psi first so a bad table fails before anything is written.
    cfg.psi_function(cfg.place_set());
    const auto report = run_report(cfg);
    const bool ok = report.verify && report.verify->all_pass();
    if (cfg.out.empty()) {
      std::ostringstream text;
      write_report(report, cfg.format, text);
      return emit(text.str(), out, ok);
    }
    write_report(report, cfg.format, cfg.out);
    return emit("", out, ok);
  });
}

}  // extern "C"
