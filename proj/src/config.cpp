#include "diagapprox/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "diagapprox/error.hpp"

namespace diagapprox {

namespace {

std::string normalize_key(std::string_view key) {
  std::string out(key);
  while (!out.empty() && out.front() == '-') out.erase(out.begin());
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

std::string trimmed(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_unsigned(std::string_view key, std::string_view value) {
  Integer z = parse_integer(value);
  if (z < 0 || !mpz_fits_ulong_p(z.get_mpz_t())) {
    fail(ErrorCode::invalid_argument, std::string(key) + " must be a nonnegative integer");
  }
  return z.get_ui();
}

}  // namespace

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
  const std::string key = normalize_key(raw_key);
  const std::string value = trimmed(raw_value);
  if (key == "places") {
    PlaceSet::parse(value);
    places = value;
  } else if (key == "psi") {
    if (value != "scaled_cap" && value != "power" && value != "table") {
      fail(ErrorCode::invalid_argument, "psi must be scaled_cap, power or table");
    }
    psi = value;
  } else if (key == "c") {
    parse_rational(value);
    c = value;
  } else if (key == "theta") {
    theta = parse_unsigned(key, value);
    if (theta < 1) fail(ErrorCode::invalid_argument, "theta must be at least 1");
  } else if (key == "psi-table") {
    psi_table = value;
  } else if (key == "n-max") {
    n_max = parse_unsigned(key, value);
    if (n_max < 1) fail(ErrorCode::invalid_argument, "n-max must be at least 1");
  } else if (key == "samples") {
    samples = parse_unsigned(key, value);
  } else if (key == "digits") {
    digits = parse_unsigned(key, value);
  } else if (key == "seed") {
    seed = parse_unsigned(key, value);
  } else if (key == "out") {
    out = value;
  } else if (key == "format") {
    if (value != "csv" && value != "json") fail(ErrorCode::invalid_argument, "format must be csv or json");
    format = value;
  } else if (key == "dirichlet-points") {
    dirichlet_points = parse_unsigned(key, value);
  } else if (key == "threads") {
    threads = static_cast<unsigned>(parse_unsigned(key, value));
  } else {
    fail(ErrorCode::invalid_argument, "unknown config key '" + std::string(raw_key) + "'");
  }
}

void ExperimentConfig::load_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trimmed(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::invalid_argument, "config line " + std::to_string(line_no) + " has no '='");
    }
    set(trimmed(std::string_view(line).substr(0, eq)), std::string_view(line).substr(eq + 1));
  }
}

void ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot read config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  load_text(buffer.str());
}

PlaceSet ExperimentConfig::place_set() const { return PlaceSet::parse(places); }

PsiFunction ExperimentConfig::psi_function(const PlaceSet& ps) const {
  if (psi == "scaled_cap") return PsiFunction::scaled_cap(parse_rational(c));
  if (psi == "power") return PsiFunction::power(parse_rational(c), theta);
  if (psi_table.empty()) fail(ErrorCode::invalid_argument, "psi = table needs psi-table");
  std::ifstream in(psi_table);
  if (!in) fail(ErrorCode::io, "cannot read psi table " + psi_table);
  return PsiFunction::parse_table(in, ps);
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> out = {
      {"places", place_set().to_string()},
      {"psi", psi},
      {"c", c},
      {"theta", std::to_string(theta)},
      {"psi-table", psi_table},
      {"n-max", std::to_string(n_max)},
      {"samples", std::to_string(samples)},
      {"digits", std::to_string(digits)},
      {"seed", std::to_string(seed)},
      {"format", format},
      {"dirichlet-points", std::to_string(dirichlet_points)},
  };
  return out;
}

}  // namespace diagapprox
