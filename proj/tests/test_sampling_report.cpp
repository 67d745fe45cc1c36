#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "diagapprox/config.hpp"
#include "diagapprox/error.hpp"
#include "diagapprox/report.hpp"
#include "diagapprox/sampling.hpp"

using namespace diagapprox;

namespace {

Rational q(long a, long b = 1) { return make_rational(a, b); }

bool within_3_sigma(const MCEstimate& e, double exact) {
  return std::abs(e.estimate - exact) <= 3 * std::sqrt(exact * (1 - exact) / static_cast<double>(e.samples));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("sampling is reproducible and lands in Z_P") {
  const PlaceSet p23({2, 3});
  std::mt19937_64 a(17), b(17);
  for (int s = 0; s < 200; ++s) {
    const auto x = sample_fundamental_domain(a, p23, 4);
    CHECK(x == sample_fundamental_domain(b, p23, 4));
    CHECK(FundamentalDomainPoint::contains(x.point(), p23));
    CHECK(x.point().finite(0) < 16);
    CHECK(x.point().finite(1) < 81);
  }
  std::uint64_t s1 = 1, s2 = 1;
  CHECK(splitmix64(s1) == splitmix64(s2));
  CHECK(chunk_seed(5, 0) != chunk_seed(5, 1));
}

TEST_CASE("one 2-adic digit is a fair coin") {
  const PlaceSet p2({2});
  std::mt19937_64 rng(99);
  int ones = 0;
  const int n = 10000;
  for (int s = 0; s < n; ++s) ones += sample_fundamental_domain(rng, p2, 1).point().finite(0) == 1;
  CHECK(std::abs(ones - n / 2) <= 3 * std::sqrt(n * 0.25));
}

TEST_CASE("Monte Carlo examples") {
  const PlaceSet p2({2});
  const auto psi = PsiFunction::scaled_cap(q(1, 2));
  const auto g2 = decompose(q(2), p2), g3 = decompose(q(3), p2);
  const auto e3 = mc_union_measure(std::vector<PZElement>{g3}, psi, p2, 100000, 0, 1);
  CHECK(within_3_sigma(e3, 1.0 / 36));
  CHECK(std::abs(e3.standard_error - std::sqrt(e3.estimate * (1 - e3.estimate) / 100000)) < 1e-15);
  CHECK(mc_union_measure(std::vector<PZElement>{}, psi, p2, 1000, 0, 1).estimate == 0);
  const auto e23 = mc_union_measure(std::vector<PZElement>{g2, g3}, psi, p2, 100000, 0, 2);
  CHECK(within_3_sigma(e23, 1.0 / 16 + 1.0 / 36));
}

TEST_CASE("precision and threads") {
  const PlaceSet p2({2});
  const auto psi = PsiFunction::scaled_cap(q(1, 2));
  const std::vector<ApproxSetDescriptor> sets{build_A_gamma(decompose(q(3), p2), psi, p2)};
  CHECK(required_digits(sets, p2) == 3);  // ball measure 1/8
  CHECK_THROWS_AS(check_precision(sets, p2, 2), Error);
  CHECK_NOTHROW(check_precision(sets, p2, 3));
  try {
    mc_union_measure(sets, p2, 100, 1, 1);
    FAIL("expected a precision error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precision);
  }
  const auto one = mc_union_measure(sets, p2, 20000, 0, 7, 1);
  const auto many = mc_union_measure(sets, p2, 20000, 0, 7, 4);
  CHECK(one.hits == many.hits);
  CHECK(one.estimate == many.estimate);
}

TEST_CASE("config parsing") {
  ExperimentConfig c;
  c.load_text("# comment\nplaces = inf,2,3\nn_max = 7\nseed=5\n\nformat = json\n");
  CHECK(c.place_set().primes() == std::vector<unsigned long>{2, 3});
  CHECK(c.n_max == 7);
  CHECK(c.seed == 5);
  CHECK(c.format == "json");
  CHECK_THROWS_AS(c.set("bogus", "1"), Error);
  CHECK_THROWS_AS(c.set("format", "xml"), Error);
  CHECK_THROWS_AS(c.set("n-max", "0"), Error);
  CHECK_THROWS_AS(c.set("places", "4"), Error);
  CHECK_THROWS_AS(c.load_text("places\n"), Error);
  c.set("psi", "power");
  c.set("theta", "3");
  CHECK(c.psi_function(c.place_set()).family() == PsiFunction::Family::power);
}

TEST_CASE("reports") {
  ExperimentConfig c;
  c.places = "2";
  c.n_max = 2;
  c.samples = 2000;
  c.dirichlet_points = 2;
  const auto dir = std::filesystem::temp_directory_path() / "diagapprox_report_test";
  std::filesystem::remove_all(dir);
  const Report r = run_report(c);
  write_report(r, "csv", (dir / "a").string());
  write_report(run_report(c), "csv", (dir / "b").string());
  for (const char* name : {"measure_table", "series", "overlaps", "second_moment", "mc", "dirichlet", "verify_summary"}) {
    const auto a = dir / "a" / (std::string(name) + ".csv");
    REQUIRE(std::filesystem::exists(a));
    CHECK(slurp(a) == slurp(dir / "b" / (std::string(name) + ".csv")));
  }
  const std::string series = slurp(dir / "a" / "series.csv");
  CHECK(series.find("2,5/12,7/16,20/21") != std::string::npos);
  CHECK(slurp(dir / "a" / "measure_table.csv").rfind("gamma,n,nu_2,level,L,psi,measure,lower_bound,upper_bound,pass", 0) == 0);

  std::ostringstream j1, j2;
  write_json(r, j1);
  write_json(run_report(c), j2);
  CHECK(j1.str() == j2.str());
  for (const char* key : {"\"config\"", "\"measure_table\"", "\"series\"", "\"overlaps\"", "\"second_moment\"", "\"mc\"",
                          "\"dirichlet\"", "\"verify_summary\""}) {
    CHECK(j1.str().find(key) != std::string::npos);
  }
  CHECK(j1.str().find("\"5/12\"") != std::string::npos);

  // A table psi above the cap fails before anything is written.
  const auto table = dir / "psi.txt";
  std::ofstream(table) << "3 1/5\n";
  c.psi = "table";
  c.psi_table = table.string();
  try {
    run_report(c);
    FAIL("expected a cap violation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::cap_violation);
  }
  CHECK_THROWS_AS(write_report(r, "csv", "/proc/definitely/not/writable"), Error);
  std::filesystem::remove_all(dir);
}
