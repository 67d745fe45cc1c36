#include "diagapprox/metric_sets.hpp"

#include <algorithm>
#include <istream>
#include <sstream>

#include "diagapprox/dirichlet.hpp"
#include "diagapprox/error.hpp"

namespace diagapprox {

Rational psi_cap(const PZElement& gamma, const PlaceSet& places) {
  return 1 / (2 * big_L(gamma, places));
}

PsiFunction PsiFunction::scaled_cap(const Rational& c) {
  if (c < 0 || c > make_rational(1, 2)) {
    fail(ErrorCode::cap_violation, "scaled_cap needs 0 <= c <= 1/2, got " + to_string(c));
  }
  PsiFunction psi;
  psi.family_ = Family::scaled_cap;
  psi.c_ = c;
  return psi;
}

PsiFunction PsiFunction::power(const Rational& c, unsigned long theta) {
  if (c < 0) fail(ErrorCode::invalid_argument, "power family needs c >= 0");
  if (theta < 1) fail(ErrorCode::invalid_argument, "power family needs theta >= 1");
  PsiFunction psi;
  psi.family_ = Family::power;
  psi.c_ = c;
  psi.theta_ = theta;
  return psi;
}

PsiFunction PsiFunction::table(const std::vector<std::pair<Rational, Rational>>& entries,
                               const PlaceSet& places) {
  PsiFunction psi;
  psi.family_ = Family::table;
  psi.c_ = 0;
  for (const auto& [key, value] : entries) {
    if (key == 0) fail(ErrorCode::invalid_argument, "psi table key 0 is not allowed");
    auto gamma = decompose(key, places);
    if (value < 0) fail(ErrorCode::cap_violation, "negative psi value at " + to_string(key));
    const Rational cap = psi_cap(gamma, places);
    if (value > cap) {
      fail(ErrorCode::cap_violation, "psi(" + to_string(key) + ") = " + to_string(value) +
                                         " exceeds 1/(2L) = " + to_string(cap));
    }
    psi.table_[key] = value;
  }
  return psi;
}

PsiFunction PsiFunction::parse_table(std::istream& in, const PlaceSet& places) {
  std::vector<std::pair<Rational, Rational>> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string key, value, extra;
    if (!(fields >> key)) continue;
    if (!(fields >> value) || (fields >> extra)) {
      fail(ErrorCode::invalid_argument, "psi table line needs exactly two fields: '" + line + "'");
    }
    entries.emplace_back(parse_rational(key), parse_rational(value));
  }
  return table(entries, places);
}

std::string PsiFunction::describe() const {
  switch (family_) {
    case Family::scaled_cap: return "scaled_cap(c=" + to_string(c_) + ")";
    case Family::power: return "power(c=" + to_string(c_) + ",theta=" + std::to_string(theta_) + ")";
    case Family::table: return "table(" + std::to_string(table_.size()) + " entries)";
  }
  return "unknown";
}

Rational PsiFunction::operator()(const PZElement& gamma, const PlaceSet& places) const {
  if (gamma.is_zero()) fail(ErrorCode::invalid_argument, "psi is not evaluated at 0");
  switch (family_) {
    case Family::scaled_cap:
      return c_ / big_L(gamma, places);
    case Family::power: {
      const Rational L = big_L(gamma, places);
      Rational Lt = 1;
      for (unsigned long k = 0; k < theta_; ++k) Lt *= L;
      return std::min(Rational(c_ / Lt), Rational(1 / (2 * L)));
    }
    case Family::table: {
      auto it = table_.find(gamma.value());
      return it == table_.end() ? Rational(0) : it->second;
    }
  }
  return 0;
}

ApproxSetDescriptor build_A_gamma(const PZElement& gamma, const PsiFunction& psi, const PlaceSet& places) {
  return build_A_gamma(gamma, psi(gamma, places), places);
}

ApproxSetDescriptor build_A_gamma(const PZElement& gamma, const Rational& psi_value, const PlaceSet& places) {
  if (!gamma.is_positive()) fail(ErrorCode::invalid_argument, "A_gamma needs gamma > 0");
  if (psi_value < 0) fail(ErrorCode::invalid_argument, "psi must be nonnegative");
  if (psi_value > psi_cap(gamma, places)) {
    fail(ErrorCode::cap_violation, "psi(" + to_string(gamma) + ") exceeds 1/(2L)");
  }
  ApproxSetDescriptor desc;
  desc.gamma = gamma;
  desc.psi_value = psi_value;
  desc.exact_measure = 0;
  if (psi_value == 0) return desc;

  desc.real_radius = psi_value / abs_infinite(gamma, places);
  for (std::size_t i = 0; i < places.r(); ++i) {
    desc.padic_radii.push_back(psi_value / abs_finite(gamma, places, i));
  }
  const Integer& n = gamma.unit();
  for (Integer a = 1; a <= n; ++a) {
    if (gcd(a, n) != 1) continue;
    desc.numerators.push_back(a);
    desc.boxes.push_back(make_box(make_rational(a, n), desc.real_radius, desc.padic_radii, places));
  }
  // The boxes are translates of one another.
  desc.exact_measure = box_measure(desc.boxes.front()) * static_cast<unsigned long>(desc.boxes.size());
  // Consecutive arcs (cyclically) are the only candidates for overlap.
  for (std::size_t k = 0; k + 1 < desc.boxes.size(); ++k) {
    if (box_intersection_measure(desc.boxes[k], desc.boxes[k + 1]) != 0) {
      fail(ErrorCode::cap_violation, "boxes of A_" + to_string(gamma) + " overlap");
    }
  }
  if (desc.boxes.size() > 2 && box_intersection_measure(desc.boxes.back(), desc.boxes.front()) != 0) {
    fail(ErrorCode::cap_violation, "boxes of A_" + to_string(gamma) + " overlap");
  }
  return desc;
}

MeasureBounds measure_bounds_check(const ApproxSetDescriptor& desc, const PlaceSet& places) {
  MeasureBounds out;
  out.exact = desc.exact_measure;
  if (desc.psi_value == 0) {
    out.lower = 0;
    out.upper = 0;
    out.lower_ok = false;
    out.upper_ok = true;
    return out;
  }
  const Integer& n = desc.gamma.unit();
  Rational psi_pow = 1;
  for (std::size_t k = 0; k <= places.r(); ++k) psi_pow *= desc.psi_value;
  out.upper = 2 * Rational(euler_phi(n)) * psi_pow / n;
  out.lower = out.upper / places.prime_product();
  out.lower_ok = out.lower < out.exact;
  out.upper_ok = out.exact <= out.upper;
  return out;
}

std::vector<std::size_t> containing_boxes(const AdelicPoint& z, const ApproxSetDescriptor& desc) {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < desc.boxes.size(); ++k) {
    if (box_contains(desc.boxes[k], z)) out.push_back(k);
  }
  return out;
}

bool membership(const AdelicPoint& z, const ApproxSetDescriptor& desc) {
  if (desc.empty()) return false;
  const Integer& n = desc.gamma.unit();
  if (2 * desc.real_radius * n > 1) return !containing_boxes(z, desc).empty();
  // Under the cap each arc has radius at most 1/(2n), so only the centres
  // floor(n z)/n and (floor(n z) + 1)/n can reach z.
  const Integer t = floor(Rational(z.real() * n));
  for (Integer a : {Integer(t), Integer(t + 1)}) {
    mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
    if (a == 0) a = n;
    auto it = std::lower_bound(desc.numerators.begin(), desc.numerators.end(), a);
    if (it == desc.numerators.end() || *it != a) continue;
    if (box_contains(desc.boxes[static_cast<std::size_t>(it - desc.numerators.begin())], z)) return true;
  }
  return false;
}

bool membership(const FundamentalDomainPoint& z, const PZElement& gamma, const PsiFunction& psi,
                const PlaceSet& places) {
  return membership(z.point(), build_A_gamma(gamma, psi, places));
}

bool membership_by_search(const FundamentalDomainPoint& z, const PZElement& gamma, const Rational& psi_value,
                          const PlaceSet& places) {
  if (!gamma.is_positive()) fail(ErrorCode::invalid_argument, "membership needs gamma > 0");
  if (psi_value == 0) return false;
  // Every place must put beta within psi < 1 of gamma z, which pins beta to
  // the lattice shift of gamma z or the next integer.
  const AdelicPoint u = scale(gamma.value(), z.point());
  const Rational beta0 = reduce_to_fundamental_domain(u, places).shift.value();
  for (int step = 0; step <= 1; ++step) {
    const Rational beta = beta0 + step;
    if (gcd_pz(decompose(beta, places), gamma) != 1) continue;
    if (distance(u, diagonal(beta, places), places) < psi_value) return true;
  }
  return false;
}

Rational overlap_measure(const ApproxSetDescriptor& a, const ApproxSetDescriptor& b) {
  if (a.empty() || b.empty()) return 0;
  const Integer& n = b.gamma.unit();
  const Rational reach = a.real_radius + b.real_radius;
  Rational total = 0;
  for (std::size_t i = 0; i < a.boxes.size(); ++i) {
    const Rational& centre = a.boxes[i].real_center;
    const Integer lo = ceil(Rational((centre - reach) * n));
    const Integer hi = floor(Rational((centre + reach) * n));
    if (hi - lo + 1 >= n) {
      for (const auto& box : b.boxes) total += box_intersection_measure(a.boxes[i], box);
      continue;
    }
    for (Integer k = lo; k <= hi; ++k) {
      Integer residue;
      mpz_fdiv_r(residue.get_mpz_t(), k.get_mpz_t(), n.get_mpz_t());
      if (residue == 0) residue = n;
      auto it = std::lower_bound(b.numerators.begin(), b.numerators.end(), residue);
      if (it == b.numerators.end() || *it != residue) continue;
      total += box_intersection_measure(a.boxes[i], b.boxes[static_cast<std::size_t>(it - b.numerators.begin())]);
    }
  }
  return total;
}

Rational overlap_measure(const PZElement& beta, const PZElement& gamma, const PsiFunction& psi,
                         const PlaceSet& places) {
  return overlap_measure(build_A_gamma(beta, psi, places), build_A_gamma(gamma, psi, places));
}

Rational overlap_bound(const Rational& psi_beta, const Rational& psi_gamma, const PlaceSet& places) {
  Rational prod = 16;
  for (std::size_t k = 0; k <= places.r(); ++k) prod *= psi_beta * psi_gamma;
  return prod;
}

OverlapGeometry overlap_geometry(const PZElement& beta, const PZElement& gamma, const PsiFunction& psi,
                                 const PlaceSet& places) {
  if (!beta.is_positive() || !gamma.is_positive()) fail(ErrorCode::invalid_argument, "overlap needs beta, gamma > 0");
  const Rational psi_b = psi(beta, places);
  const Rational psi_g = psi(gamma, places);
  if (psi_b == 0 || psi_g == 0) fail(ErrorCode::invalid_argument, "overlap geometry needs psi > 0");
  OverlapGeometry g;
  const Rational rb = psi_b / abs_infinite(beta, places);
  const Rational rg = psi_g / abs_infinite(gamma, places);
  g.delta_max_real = 2 * std::max(rb, rg);
  g.delta_min_real = 2 * std::min(rb, rg);
  for (std::size_t i = 0; i < places.r(); ++i) {
    const unsigned long p = places.prime(i);
    const Rational db = power(p, beta.exponent(i)) * psi_b;
    const Rational dg = power(p, gamma.exponent(i)) * psi_g;
    g.delta_max_padic.push_back(std::max(db, dg));
    g.delta_min_padic.push_back(std::min(db, dg));
    const Rational floor_power = ball_measure(PadicBall{p, 0, g.delta_max_padic.back(), Openness::weak});
    g.tau.push_back(-padic_valuation(floor_power, p));
  }
  return g;
}

OverlapCount overlap_count_N(const PZElement& beta, const PZElement& gamma, const OverlapGeometry& geom,
                             const PlaceSet& places) {
  const Integer& m = beta.unit();
  const Integer& n = gamma.unit();
  // |x| <= m n Delta_inf  <=>  |x| <= floor(m n Delta_inf), and since |x|_p
  // is a power of p, |x|_p <= Delta_{p_i}  <=>  x = 0 or p_i^{tau_i} | x.
  const Integer window = floor(Rational(m * n * geom.delta_max_real));
  Integer modulus = 1;
  for (std::size_t i = 0; i < places.r(); ++i) {
    if (geom.tau[i] > 0) modulus *= ipower(places.prime(i), static_cast<unsigned long>(geom.tau[i]));
  }
  OverlapCount out;
  out.count = 0;
  out.zero_count = 0;
  if (m.fits_slong_p() && n.fits_slong_p() && m * n < Integer(1L << 40) && modulus.fits_slong_p()) {
    const long mm = m.get_si(), nn = n.get_si(), mod = modulus.get_si();
    const long w = window.fits_slong_p() ? window.get_si() : mm * nn;
    long count = 0, zeros = 0;
    for (long a = 1; a <= mm; ++a) {
      for (long b = 1; b <= nn; ++b) {
        const long x = a * nn - b * mm;
        if ((x < 0 ? -x : x) <= w && x % mod == 0) {
          ++count;
          zeros += x == 0;
        }
      }
    }
    out.count = count;
    out.zero_count = zeros;
  } else {
    for (Integer a = 1; a <= m; ++a) {
      for (Integer b = 1; b <= n; ++b) {
        const Integer x = a * n - b * m;
        if (abs(x) <= window && mpz_divisible_p(x.get_mpz_t(), modulus.get_mpz_t())) {
          ++out.count;
          if (x == 0) ++out.zero_count;
        }
      }
    }
  }
  out.tau_bound = 4 * Rational(m * n) * geom.delta_max_real;
  out.bound = out.tau_bound;
  for (std::size_t i = 0; i < places.r(); ++i) {
    out.tau_bound *= power(places.prime(i), -geom.tau[i]);
    out.bound *= geom.delta_max_padic[i];
  }
  return out;
}

Integer count_linear_solutions(const Integer& m, const Integer& n, const Integer& x) {
  if (m < 1 || n < 1) fail(ErrorCode::invalid_argument, "m and n must be positive");
  if (m.fits_slong_p() && n.fits_slong_p() && x.fits_slong_p() && m * n < Integer(1L << 40) &&
      abs(x) < Integer(1L << 40)) {
    const long mm = m.get_si(), nn = n.get_si(), xx = x.get_si();
    long count = 0;
    for (long a = 1; a <= mm; ++a) {
      const long bm = a * nn - xx;
      if (bm % mm != 0) continue;
      const long b = bm / mm;
      if (b >= 1 && b <= nn) ++count;
    }
    return count;
  }
  Integer count = 0;
  for (Integer a = 1; a <= m; ++a) {
    const Integer bm = a * n - x;
    if (!mpz_divisible_p(bm.get_mpz_t(), m.get_mpz_t())) continue;
    const Integer b = bm / m;
    if (b >= 1 && b <= n) ++count;
  }
  return count;
}

std::vector<PZElement> positive_index_set(const PlaceSet& places, unsigned long N) {
  auto all = enumerate_z_n(places, N);
  std::vector<std::pair<Rational, PZElement>> keyed;
  keyed.reserve(all.size());
  for (auto& g : all) {
    if (g.is_zero()) continue;
    keyed.emplace_back(level(g, places), std::move(g));
  }
  std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second < y.second;
  });
  std::vector<PZElement> out;
  out.reserve(keyed.size());
  for (auto& [lvl, g] : keyed) out.push_back(std::move(g));
  return out;
}

std::vector<SeriesPoint> series_table(const PsiFunction& psi, const PlaceSet& places, unsigned long N_max) {
  if (N_max < 1) fail(ErrorCode::invalid_argument, "N must be at least 1");
  const auto index = positive_index_set(places, N_max);
  std::vector<SeriesPoint> out;
  Rational S = 0, D = 0;
  std::size_t k = 0;
  for (unsigned long N = 1; N <= N_max; ++N) {
    for (; k < index.size() && level(index[k], places) <= N; ++k) {
      const auto& gamma = index[k];
      Rational psi_pow = 1;
      const Rational value = psi(gamma, places);
      for (std::size_t j = 0; j <= places.r(); ++j) psi_pow *= value;
      S += Rational(euler_phi(gamma.unit())) * psi_pow / gamma.unit();
      D += psi_pow;
    }
    SeriesPoint point{N, S, D, std::nullopt};
    if (D != 0) point.R = Rational(S / D);
    out.push_back(std::move(point));
  }
  return out;
}

SeriesPoint series_partial(const PsiFunction& psi, const PlaceSet& places, unsigned long N) {
  return series_table(psi, places, N).back();
}

Rational second_moment_bound(std::span<const Rational> measures, const RationalMatrix& pairwise) {
  const std::size_t k = measures.size();
  if (pairwise.size != k || pairwise.entries.size() != k * k) {
    fail(ErrorCode::invalid_argument, "pairwise matrix must be k x k");
  }
  Rational sum = 0, denom = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (pairwise.at(i, i) != measures[i]) fail(ErrorCode::invalid_argument, "diagonal must equal the measures");
    sum += measures[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (pairwise.at(i, j) < 0) fail(ErrorCode::invalid_argument, "negative intersection measure");
      if (pairwise.at(i, j) != pairwise.at(j, i)) fail(ErrorCode::invalid_argument, "pairwise matrix not symmetric");
      denom += pairwise.at(i, j);
    }
  }
  if (denom == 0) fail(ErrorCode::invalid_argument, "sum of pairwise measures is zero");
  return sum * sum / denom;
}

FundamentalDomainPoint transfer_map(const FundamentalDomainPoint& x, unsigned long q, const Integer& s,
                                    const PlaceSet& places) {
  if (!is_prime(q)) fail(ErrorCode::invalid_argument, std::to_string(q) + " is not prime");
  if (!(Integer(q) > places.prime_product())) {
    fail(ErrorCode::invalid_argument, "q must exceed p_1...p_r = " + to_string(places.prime_product()));
  }
  const Rational factor = make_rational(q, places.prime_product());
  const Rational shift = make_rational(s * places.prime_product(), q);
  return reduce_to_fundamental_domain(translate(scale(factor, x.point()), shift), places).point;
}

}  // namespace diagapprox
