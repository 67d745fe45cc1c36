#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "diagapprox/report.hpp"

namespace diagapprox {

namespace {

class Check {
 public:
  explicit Check(std::string name, std::uint64_t allowed = 0) { c_.name = std::move(name); c_.allowed_failures = allowed; }

  // Records one case; the first failing case is kept as the detail.
  void record(bool ok, const std::string& what = {}) {
    ++c_.checked;
    if (ok) return;
    if (c_.failures++ == 0) c_.detail = what;
  }

  template <class F>
  void record_with(bool ok, F&& describe) {
    record(ok, ok ? std::string() : describe());
  }

  VerifyCheck done() { return std::move(c_); }

 private:
  VerifyCheck c_;
};

std::string str(const Rational& q) { return to_fraction_string(q); }

std::vector<ApproxSetDescriptor> build_all(const std::vector<PZElement>& index, const PsiFunction& psi,
                                           const PlaceSet& places) {
  std::vector<ApproxSetDescriptor> out;
  out.reserve(index.size());
  for (const auto& g : index) out.push_back(build_A_gamma(g, psi, places));
  return out;
}

VerifyCheck check_z_n(const PlaceSet& places, unsigned long n_max) {
  Check c("z_n_count");
  for (unsigned long N = 1; N <= n_max; ++N) {
    const auto count = enumerate_z_n(places, N).size();
    const auto expected = z_n_count(places, N);
    c.record_with(Integer(static_cast<unsigned long>(count)) == expected, [&] {
      return "N=" + std::to_string(N) + ": " + std::to_string(count) + " != " + expected.get_str();
    });
  }
  return c.done();
}

VerifyCheck check_dirichlet(const PlaceSet& places, const ExperimentConfig& config) {
  Check c("dirichlet_guarantee");
  std::mt19937_64 rng(chunk_seed(config.seed, 0xd1));
  const Rational M = places.max_prime();
  for (unsigned long k = 0; k < config.dirichlet_points; ++k) {
    const auto x = random_rational_point(rng, places, 1000);
    for (unsigned long N = 1; N <= config.n_max; N *= 2) {
      const auto res = dirichlet_approximate(x, places, N);
      const auto d = distance(scale(res.gamma.value(), x), diagonal(res.beta.value(), places), places);
      const bool ok = res.gamma.is_positive() && level(res.gamma, places) <= N && d <= M / N;
      c.record_with(ok, [&] { return "N=" + std::to_string(N) + " gamma=" + str(res.gamma.value()) + " d=" + str(d); });
    }
  }
  return c.done();
}

VerifyCheck check_coprime_pairs(const PlaceSet& places, const ExperimentConfig& config) {
  Check c("coprime_approximants");
  std::mt19937_64 rng(chunk_seed(config.seed, 0xc0));
  const Rational M = places.max_prime();
  for (unsigned long k = 0; k < std::min<unsigned long>(config.dirichlet_points, 4); ++k) {
    auto x = random_rational_point(rng, places, 1000);
    if (std::all_of(x.coords().begin(), x.coords().end(), [&](const Rational& q) { return q == x.real(); })) continue;
    try {
      for (const auto& a : coprime_approximants(x, places, 5, 1UL << 16)) {
        const auto d = distance(scale(a.gamma.value(), x), diagonal(a.beta.value(), places), places);
        const bool ok = a.gamma.is_positive() && gcd_pz(a.beta, a.gamma) == 1 && d == a.distance &&
                        d <= M / level(a.gamma, places);
        c.record_with(ok, [&] { return "beta=" + str(a.beta.value()) + " gamma=" + str(a.gamma.value()); });
      }
    } catch (const ExhaustedError& e) {
      c.record(false, e.what());
    }
  }
  return c.done();
}

VerifyCheck check_measure_bounds(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places) {
  Check c("measure_bracketing");
  for (const auto& d : sets) {
    const auto b = measure_bounds_check(d, places);
    c.record_with(b.ok(), [&] {
      return "gamma=" + str(d.gamma.value()) + " measure=" + str(b.exact) + " bounds=(" + str(b.lower) + ", " +
             str(b.upper) + "]";
    });
  }
  return c.done();
}

VerifyCheck check_box_disjointness(const std::vector<ApproxSetDescriptor>& sets) {
  Check c("box_disjointness");
  for (const auto& d : sets) {
    for (std::size_t i = 0; i < d.boxes.size(); ++i) {
      for (std::size_t j = i + 1; j < d.boxes.size(); ++j) {
        c.record_with(box_intersection_measure(d.boxes[i], d.boxes[j]) == 0, [&] {
          return "gamma=" + str(d.gamma.value()) + " a=" + d.numerators[i].get_str() + "," +
                 d.numerators[j].get_str();
        });
      }
    }
  }
  return c.done();
}

VerifyCheck check_overlaps(const std::vector<PZElement>& index, const std::vector<ApproxSetDescriptor>& sets,
                           const PlaceSet& places) {
  Check c("overlap_bound");
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const auto o = overlap_measure(sets[i], sets[j]);
      const auto b = overlap_bound(sets[i].psi_value, sets[j].psi_value, places);
      c.record_with(o <= b, [&] {
        return "beta=" + str(index[i].value()) + " gamma=" + str(index[j].value()) + " overlap=" + str(o) +
               " bound=" + str(b);
      });
    }
  }
  return c.done();
}

// The chain is checked twice: on the full count, and on the count without
// the pairs with a n = b m, which the bounding sum over k >= 1 never sees.
std::vector<VerifyCheck> check_overlap_counts(const std::vector<PZElement>& index, const PsiFunction& psi,
                                              const PlaceSet& places) {
  Check full("overlap_count_chain");
  Check nonzero("overlap_count_chain_nonzero");
  for (std::size_t i = 0; i < index.size(); ++i) {
    for (std::size_t j = i + 1; j < index.size(); ++j) {
      const auto geom = overlap_geometry(index[i], index[j], psi, places);
      const auto n = overlap_count_N(index[i], index[j], geom, places);
      auto describe = [&](const Integer& count) {
        return "beta=" + str(index[i].value()) + " gamma=" + str(index[j].value()) + " N=" + count.get_str() +
               " bound=" + str(n.tau_bound);
      };
      const bool chain = n.tau_bound <= n.bound;
      full.record_with(chain && Rational(n.count) <= n.tau_bound, [&] { return describe(n.count); });
      const Integer rest = n.count - n.zero_count;
      nonzero.record_with(chain && Rational(rest) <= n.tau_bound, [&] { return describe(rest); });
    }
  }
  return {full.done(), nonzero.done()};
}

// Over Z, a n - b m = x is solvable exactly when gcd(m, n) | x; inside the
// box 1 <= a <= m, 1 <= b <= n there are at most gcd(m, n) solutions and
// none when gcd(m, n) does not divide x.
VerifyCheck check_linear_solutions() {
  Check c("linear_solutions");
  for (long m = 1; m <= 30; ++m) {
    for (long n = 1; n <= 30; ++n) {
      const long g = std::gcd(m, n);
      for (long x = -m * n; x <= m * n; ++x) {
        bool solvable = false;  // a n = x (mod m) for some residue a
        for (long a = 0; a < m && !solvable; ++a) solvable = ((a * n - x) % m + m) % m == 0;
        const auto count = count_linear_solutions(m, n, x);
        const bool divides = x % g == 0;
        const bool ok = solvable == divides && (divides || count == 0) && count <= g;
        c.record_with(ok, [&] {
          return "m=" + std::to_string(m) + " n=" + std::to_string(n) + " x=" + std::to_string(x) +
                 " count=" + count.get_str();
        });
      }
    }
  }
  return c.done();
}

VerifyCheck check_membership(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places,
                             const ExperimentConfig& config) {
  Check c("membership_consistency");
  std::mt19937_64 rng(chunk_seed(config.seed, 0x3e));
  const auto digits = required_digits(sets, places) + 2;
  for (int s = 0; s < 2000; ++s) {
    const auto z = sample_fundamental_domain(rng, places, digits);
    for (const auto& d : sets) {
      if (d.empty()) continue;
      const bool by_box = membership(z.point(), d);
      const auto hits = containing_boxes(z.point(), d).size();
      const bool by_search = membership_by_search(z, d.gamma, d.psi_value, places);
      c.record_with(by_box == (hits == 1) && hits <= 1 && by_box == by_search, [&] {
        std::ostringstream out;
        out << "gamma=" << str(d.gamma.value()) << " z=";
        for (const auto& q : z.point().coords()) out << str(q) << ' ';
        return out.str();
      });
    }
  }
  return c.done();
}

VerifyCheck check_reduction(const PlaceSet& places, const ExperimentConfig& config) {
  Check c("reduction");
  std::mt19937_64 rng(chunk_seed(config.seed, 0x4d));
  const auto lattice = positive_index_set(places, 8);
  std::uniform_int_distribution<std::size_t> pick(0, lattice.size() - 1);
  for (int s = 0; s < 1000; ++s) {
    const auto x = random_rational_point(rng, places, 1000);
    const auto red = reduce_to_fundamental_domain(x, places);
    const auto again = reduce_to_fundamental_domain(red.point.point(), places);
    bool ok = again.point == red.point && again.shift.is_zero() &&
              translate(red.point.point(), red.shift.value()) == x;
    const Rational shift = (s % 2 ? -1 : 1) * lattice[pick(rng)].value();
    const auto moved = reduce_to_fundamental_domain(translate(x, shift), places);
    ok = ok && moved.point == red.point;
    c.record_with(ok, [&] { return "shift=" + str(shift); });
  }
  return c.done();
}

VerifyCheck check_transfer(const PlaceSet& places, const ExperimentConfig& config) {
  Check c("transfer_map");
  unsigned long q = places.prime_product().get_ui() + 1;
  while (!is_prime(q)) ++q;
  const auto zero = FundamentalDomainPoint(diagonal(0, places), places);
  c.record(transfer_map(zero, q, 0, places) == zero, "T(0) != 0");
  std::mt19937_64 rng(chunk_seed(config.seed, 0x7a));
  for (int s = 0; s < 200; ++s) {
    const auto x = reduce_to_fundamental_domain(random_rational_point(rng, places, 1000), places).point;
    const auto y = transfer_map(x, q, Integer(s % 7 - 3), places);
    c.record(FundamentalDomainPoint::contains(y.point(), places), "image outside Z_P");
  }
  return c.done();
}

VerifyCheck check_series(const std::vector<SeriesPoint>& series) {
  Check c("series_monotone");
  for (std::size_t k = 1; k < series.size(); ++k) {
    c.record_with(series[k - 1].S <= series[k].S && series[k - 1].D <= series[k].D,
                  [&] { return "N=" + std::to_string(series[k].N); });
  }
  return c.done();
}

VerifyCheck check_mc(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places,
                     const ExperimentConfig& config) {
  // 3 sigma misses about 0.3% of the time; allow 1% of the seeds to miss.
  const std::uint64_t seeds = 20;
  Check c("mc_consistency", seeds / 100 + 1);
  const std::uint64_t samples = std::max<std::uint64_t>(config.samples / 10, 1000);
  std::vector<const ApproxSetDescriptor*> picked;
  for (const auto& d : sets) {
    if (!d.empty()) picked.push_back(&d);
    if (picked.size() == 3) break;
  }
  for (const auto* d : picked) {
    for (std::uint64_t k = 0; k < seeds; ++k) {
      const auto est = mc_union_measure({*d}, places, samples, 0, chunk_seed(config.seed, 0x1000 + k), config.threads);
      const double m = d->exact_measure.get_d();
      c.record_with(std::abs(est.estimate - m) <= 3 * est.standard_error, [&] {
        return "gamma=" + str(d->gamma.value()) + " estimate=" + std::to_string(est.estimate);
      });
    }
  }
  return c.done();
}

VerifyCheck check_second_moment(const std::vector<SecondMomentRow>& rows, const PlaceSet& places,
                                const std::vector<ApproxSetDescriptor>& sets, const ExperimentConfig& config) {
  Check c("second_moment_vs_mc");
  if (!rows.empty() && rows.back().bound) {
    const auto est = mc_union_measure(sets, places, config.samples, config.digits, config.seed, config.threads);
    const double bound = rows.back().bound->get_d();
    c.record_with(bound <= est.estimate + 3 * est.standard_error, [&] {
      return "bound=" + str(*rows.back().bound) + " estimate=" + std::to_string(est.estimate);
    });
  }
  return c.done();
}

}  // namespace

VerifySummary run_verify(const ExperimentConfig& config) {
  const auto places = config.place_set();
  const auto psi = config.psi_function(places);
  const auto index = positive_index_set(places, config.n_max);
  const auto sets = build_all(index, psi, places);

  VerifySummary out;
  out.checks.push_back(check_z_n(places, config.n_max));
  out.checks.push_back(check_dirichlet(places, config));
  out.checks.push_back(check_coprime_pairs(places, config));
  out.checks.push_back(check_measure_bounds(sets, places));
  out.checks.push_back(check_box_disjointness(sets));
  out.checks.push_back(check_overlaps(index, sets, places));
  for (auto& c : check_overlap_counts(index, psi, places)) out.checks.push_back(std::move(c));
  out.checks.push_back(check_linear_solutions());
  out.checks.push_back(check_membership(sets, places, config));
  out.checks.push_back(check_reduction(places, config));
  out.checks.push_back(check_transfer(places, config));
  out.checks.push_back(check_series(series_table(psi, places, config.n_max)));
  out.checks.push_back(check_mc(sets, places, config));
  out.checks.push_back(check_second_moment(build_second_moment(places, psi, config.n_max), places, sets, config));
  return out;
}

}  // namespace diagapprox
