// Command-line front end over the C API.
//
// Exit codes: 0 every check passed, 1 usage or configuration error,
// 2 a verified bound failed.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "diagapprox/diagapprox.h"

namespace {

struct ConfigDeleter {
  void operator()(da_config* c) const { da_config_destroy(c); }
};
using ConfigPtr = std::unique_ptr<da_config, ConfigDeleter>;

struct Options {
  std::string config_file;
  std::map<std::string, std::string> flags;  // only the flags given on the command line
  std::optional<std::string> point, gamma, beta, gammas;
  unsigned long n = 0;
  unsigned long count = 0;
};

int report_error(da_status s) {
  std::cerr << "error (" << da_status_name(s) << "): " << da_last_error() << '\n';
  return 1;
}

void add_config_flags(CLI::App* app, Options& opt) {
  auto flag = [&](const char* name, const char* help) {
    app->add_option_function<std::string>(
        std::string("--") + name, [&opt, name](const std::string& v) { opt.flags[name] = v; }, help);
  };
  app->add_option("--config", opt.config_file, "key = value file; flags override it");
  flag("places", "finite primes, e.g. 2,3 or inf,2,3");
  flag("psi", "scaled_cap, power or table");
  flag("c", "psi constant, a rational");
  flag("theta", "exponent of the power family");
  flag("psi-table", "file of 'gamma value' lines for psi = table");
  flag("n-max", "largest level considered");
  flag("samples", "Monte Carlo samples");
  flag("digits", "p-adic digits per sample (0 = smallest admissible)");
  flag("seed", "random seed");
  flag("out", "output file, or directory for csv reports");
  flag("format", "csv or json");
  flag("dirichlet-points", "random points for the Dirichlet table");
  flag("threads", "worker threads (0 = all cores)");
}

int write_output(const char* text, const da_config* cfg, bool to_out) {
  char* out_path = nullptr;
  if (to_out && da_config_get(cfg, "out", &out_path) == DA_OK && out_path && *out_path) {
    std::ofstream f(out_path, std::ios::binary);
    const bool ok = static_cast<bool>(f << text);
    if (!ok) std::cerr << "error (io): cannot write " << out_path << '\n';
    da_string_free(out_path);
    return ok ? 0 : 1;
  }
  if (out_path) da_string_free(out_path);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diagonal Diophantine approximation over finitely many places"};
  app.require_subcommand(1);
  Options opt;

  auto* dirichlet = app.add_subcommand("dirichlet", "pigeonhole approximants (or coprime pairs with --count)");
  dirichlet->add_option("--point", opt.point, "coordinates real;p_1;...;p_r");
  dirichlet->add_option("--n", opt.n, "level bound N (default n-max)");
  dirichlet->add_option("--count", opt.count, "number of coprime pairs to generate");
  auto* enumerate = app.add_subcommand("enumerate", "the set Z_N");
  enumerate->add_option("--n", opt.n, "level bound N (default n-max)");
  auto* measure = app.add_subcommand("measure", "exact measure of A_gamma against its bounds");
  measure->add_option("--gamma", opt.gamma, "a single gamma");
  auto* overlap = app.add_subcommand("overlap", "pairwise overlaps against the overlap bound");
  overlap->add_option("--beta", opt.beta, "first index");
  overlap->add_option("--gamma", opt.gamma, "second index");
  auto* series = app.add_subcommand("series", "partial sums S(N), D(N) and R(N)");
  auto* montecarlo = app.add_subcommand("montecarlo", "Monte Carlo measure estimates");
  montecarlo->add_option("--gammas", opt.gammas, "comma-separated indices of one union");
  auto* verify = app.add_subcommand("verify", "every invariant check");
  auto* report = app.add_subcommand("report", "every table into one artifact");
  for (auto* sub : {dirichlet, enumerate, measure, overlap, series, montecarlo, verify, report}) {
    add_config_flags(sub, opt);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  da_config* raw = nullptr;
  if (da_status s = da_config_create(&raw); s != DA_OK) return report_error(s);
  ConfigPtr cfg(raw);
  if (!opt.config_file.empty()) {
    if (da_status s = da_config_load(cfg.get(), opt.config_file.c_str()); s != DA_OK) return report_error(s);
  }
  for (const auto& [key, value] : opt.flags) {
    if (da_status s = da_config_set(cfg.get(), key.c_str(), value.c_str()); s != DA_OK) return report_error(s);
  }

  auto c_str = [](const std::optional<std::string>& s) { return s ? s->c_str() : nullptr; };
  char* text = nullptr;
  da_status s = DA_OK;
  bool to_out = true;
  if (dirichlet->parsed()) {
    if (opt.count) {
      if (!opt.point) {
        std::cerr << "error: --count needs --point\n";
        return 1;
      }
      s = da_cmd_coprime(cfg.get(), opt.point->c_str(), opt.count, &text);
    } else {
      s = da_cmd_dirichlet(cfg.get(), c_str(opt.point), opt.n, &text);
    }
  } else if (enumerate->parsed()) {
    s = da_cmd_enumerate(cfg.get(), opt.n, &text);
  } else if (measure->parsed()) {
    s = da_cmd_measure(cfg.get(), c_str(opt.gamma), &text);
  } else if (overlap->parsed()) {
    s = da_cmd_overlap(cfg.get(), c_str(opt.beta), c_str(opt.gamma), &text);
  } else if (series->parsed()) {
    s = da_cmd_series(cfg.get(), &text);
  } else if (montecarlo->parsed()) {
    s = da_cmd_montecarlo(cfg.get(), c_str(opt.gammas), &text);
  } else if (verify->parsed()) {
    s = da_cmd_verify(cfg.get(), &text);
  } else if (report->parsed()) {
    s = da_cmd_report(cfg.get(), &text);
    to_out = false;  // the library already wrote to the out path
  }

  if (s != DA_OK && s != DA_VERIFY_FAILED) return report_error(s);
  const int written = write_output(text, cfg.get(), to_out);
  da_string_free(text);
  if (written != 0) return written;
  return s == DA_VERIFY_FAILED ? 2 : 0;
}
