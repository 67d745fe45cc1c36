#include "diagapprox/dirichlet.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>

namespace diagapprox {

LevelBallIndex level_ball_index(const PlaceSet& places, unsigned long N) {
  if (N < 1) fail(ErrorCode::invalid_argument, "N must be at least 1");
  LevelBallIndex out{N, {}, 1};
  for (auto p : places.primes()) {
    unsigned long e = 0;
    Integer pe = 1;
    while (pe * p <= N) {
      pe *= p;
      ++e;
    }
    out.exponents.push_back(e);
    out.denominator *= pe;
  }
  return out;
}

Integer z_n_count(const PlaceSet& places, unsigned long N) {
  return Integer(N) * level_ball_index(places, N).denominator + 1;
}

std::vector<PZElement> enumerate_z_n(const PlaceSet& places, unsigned long N) {
  const auto index = level_ball_index(places, N);
  const Integer top = Integer(N) * index.denominator;
  if (!top.fits_ulong_p()) fail(ErrorCode::invalid_argument, "Z_N too large to enumerate");
  std::vector<PZElement> out;
  out.reserve(top.get_ui() + 1);
  out.push_back(PZElement::zero(places));
  for (unsigned long k = 1; k <= top.get_ui(); ++k) {
    // k / D = unit(k) * prod p_i^{v_i(k) - n_i}
    unsigned long unit = k;
    std::vector<long> exponents(places.r());
    for (std::size_t i = 0; i < places.r(); ++i) {
      long v = 0;
      while (unit % places.prime(i) == 0) {
        unit /= places.prime(i);
        ++v;
      }
      exponents[i] = v - static_cast<long>(index.exponents[i]);
    }
    out.emplace_back(1, Integer(unit), std::move(exponents), places);
  }
  return out;
}

PigeonholePartition pigeonhole_partition(const PlaceSet& places, unsigned long N) {
  PigeonholePartition part;
  part.index = level_ball_index(places, N);
  const unsigned long M = places.max_prime();
  part.eta = part.index.exponents.back();  // primes are sorted, M is last
  part.real_cells = ipower(M, part.eta);
  part.box_count = part.real_cells * part.index.denominator;
  part.diameter = make_rational(1, part.real_cells);
  for (std::size_t i = 0; i < places.r(); ++i) {
    part.diameter = std::max(part.diameter, power(places.prime(i), -static_cast<long>(part.index.exponents[i])));
    if (!(Integer(N) < M * ipower(places.prime(i), part.index.exponents[i]))) {
      fail(ErrorCode::invalid_argument, "N < M p_i^{n_i} fails");
    }
  }
  if (!(part.box_count < z_n_count(places, N))) {
    fail(ErrorCode::invalid_argument, "pigeonhole needs more points than boxes");
  }
  if (part.diameter > make_rational(M, N)) {
    fail(ErrorCode::invalid_argument, "box diameter exceeds M/N");
  }
  return part;
}

namespace {

struct Reduced {
  AdelicPoint point;
  Rational beta;
};

Reduced reduce_multiple(const Rational& zeta, const AdelicPoint& x, const PlaceSet& places) {
  auto red = reduce_to_fundamental_domain(scale(zeta, x), places);
  return {red.point.point(), red.shift.value()};
}

// Mixed-radix index of the partition box holding z.
Integer box_key(const AdelicPoint& z, const PigeonholePartition& part, const PlaceSet& places) {
  Integer key = floor(Rational(z.real() * part.real_cells));
  for (std::size_t i = 0; i < places.r(); ++i) {
    const unsigned long digits = part.index.exponents[i];
    key = key * ipower(places.prime(i), digits) + padic_residue(z.finite(i), places.prime(i), digits);
  }
  return key;
}

bool is_origin(const AdelicPoint& z) {
  return std::all_of(z.coords().begin(), z.coords().end(), [](const Rational& c) { return c == 0; });
}

using i128 = __int128;

Integer to_integer(i128 v) {
  const bool negative = v < 0;
  unsigned __int128 m = negative ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer out = static_cast<unsigned long>(m >> 64);
  out <<= 64;
  out += static_cast<unsigned long>(m & ~0UL);
  return negative ? Integer(-out) : out;
}

i128 mod(i128 a, i128 m) {
  const i128 r = a % m;
  return r < 0 ? r + m : r;
}

bool below(const Integer& v, unsigned bits) { return mpz_sizeinbase(v.get_mpz_t(), 2) < bits; }

// The same scan in machine integers. With Q = D w (w the common denominator
// of x) every zeta x has coordinates t_j / Q, t_j = k u_j, and the reduced
// point is (t_j - B Q/E) / Q where beta = B / E. Returns nothing when the
// numbers could overflow.
std::optional<DirichletResult> scan_fast(const AdelicPoint& x, const PlaceSet& places, const PigeonholePartition& part,
                                         unsigned long N) {
  const std::size_t r = places.r();
  Integer w = 1;
  for (const auto& c : x.coords()) mpz_lcm(w.get_mpz_t(), w.get_mpz_t(), c.get_den_mpz_t());
  const Integer D = part.index.denominator;
  const Integer Q = D * w;
  const Integer k_max = Integer(N) * D;
  Integer u_max = 0;
  std::vector<Integer> u;
  for (const auto& c : x.coords()) {
    u.push_back(c.get_num() * (w / c.get_den()));
    u_max = std::max(u_max, Integer(abs(u.back())));
  }
  if (!below(Q, 60) || !below(Integer(k_max * u_max), 60) || !below(part.box_count, 62) || !below(k_max, 62)) {
    return std::nullopt;
  }

  std::vector<i128> pe(r), s_inv_e(r), pn(r), s_inv_n(r), e_over(r);
  Integer E = 1;
  for (std::size_t i = 0; i < r; ++i) {
    const unsigned long p = places.prime(i);
    Integer pe_i = 1;
    while (mpz_divisible_p(Q.get_mpz_t(), Integer(pe_i * p).get_mpz_t())) pe_i *= p;
    const Integer s_i = Q / pe_i;
    const Integer pn_i = ipower(p, part.index.exponents[i]);
    Integer inv_e = 0, inv_n = 0;
    if (pe_i > 1) mpz_invert(inv_e.get_mpz_t(), s_i.get_mpz_t(), pe_i.get_mpz_t());
    if (pn_i > 1) mpz_invert(inv_n.get_mpz_t(), s_i.get_mpz_t(), pn_i.get_mpz_t());
    pe[i] = pe_i.get_si();
    s_inv_e[i] = inv_e.get_si();
    pn[i] = pn_i.get_si();
    s_inv_n[i] = inv_n.get_si();
    E *= pe_i;
  }
  for (std::size_t i = 0; i < r; ++i) e_over[i] = Integer(E / static_cast<long>(pe[i])).get_si();
  const i128 q = Q.get_si(), qe = Integer(Q / E).get_si(), e = E.get_si();
  const i128 cells = part.real_cells.get_si();
  std::vector<i128> uu;
  for (const auto& v : u) uu.push_back(v.get_si());

  std::unordered_map<std::uint64_t, std::pair<std::uint64_t, i128>> seen;  // key -> (k, B)
  seen.reserve(static_cast<std::size_t>(std::min<unsigned long>(part.box_count.get_ui(), 1UL << 22)));
  std::vector<i128> t(r + 1);
  const std::uint64_t top = k_max.get_ui();
  for (std::uint64_t k = 0; k <= top; ++k) {
    for (std::size_t j = 0; j <= r; ++j) t[j] = static_cast<i128>(k) * uu[j];
    i128 S = 0;  // sum of the p-adic principal parts, times E
    for (std::size_t i = 0; i < r; ++i) S += mod(mod(t[i + 1], pe[i]) * s_inv_e[i], pe[i]) * e_over[i];
    const i128 diff = t[0] - S * qe;
    i128 m = diff / q;
    if (diff % q != 0 && diff < 0) --m;
    const i128 B = S + m * e;
    const i128 shift = B * qe;
    const i128 c0 = t[0] - shift;
    bool origin = c0 == 0;
    std::uint64_t key = static_cast<std::uint64_t>(c0 * cells / q);
    for (std::size_t i = 0; i < r; ++i) {
      const i128 c = t[i + 1] - shift;
      origin = origin && c == 0;
      key = key * static_cast<std::uint64_t>(pn[i]) +
            static_cast<std::uint64_t>(mod(mod(c / pe[i], pn[i]) * s_inv_n[i], pn[i]));
    }
    if (k > 0 && origin) {
      return DirichletResult{decompose(make_rational(to_integer(B), E), places), decompose(make_rational(Integer(k), D), places),
                             0, N, static_cast<std::size_t>(k + 1)};
    }
    auto [it, inserted] = seen.try_emplace(key, k, B);
    if (!inserted) {
      const Rational gamma = make_rational(Integer(k - it->second.first), D);
      const Rational beta = make_rational(to_integer(B - it->second.second), E);
      const Rational dist = distance(scale(gamma, x), diagonal(beta, places), places);
      return DirichletResult{decompose(beta, places), decompose(gamma, places), dist, N, static_cast<std::size_t>(k + 1)};
    }
  }
  return std::nullopt;
}

}  // namespace

DirichletResult dirichlet_approximate(const AdelicPoint& x, const PlaceSet& places, unsigned long N) {
  check_point(x, places);
  const auto part = pigeonhole_partition(places, N);
  if (auto fast = scan_fast(x, places, part, N)) return *fast;
  const Integer top = Integer(N) * part.index.denominator;

  std::unordered_map<std::string, std::pair<Rational, Rational>> seen;  // key -> (zeta, beta)
  std::size_t scanned = 0;
  for (Integer k = 0; k <= top; ++k) {
    ++scanned;
    const Rational zeta = make_rational(k, part.index.denominator);
    auto red = reduce_multiple(zeta, x, places);
    if (k > 0 && is_origin(red.point)) {
      return {decompose(red.beta, places), decompose(zeta, places), 0, N, scanned};
    }
    auto key = box_key(red.point, part, places).get_str(16);
    auto [it, inserted] = seen.try_emplace(std::move(key), zeta, red.beta);
    if (!inserted) {
      // Earlier entries have smaller zeta, so gamma = zeta - xi > 0.
      const Rational gamma = zeta - it->second.first;
      const Rational beta = red.beta - it->second.second;
      const Rational dist = distance(scale(gamma, x), diagonal(beta, places), places);
      return {decompose(beta, places), decompose(gamma, places), dist, N, scanned};
    }
  }
  fail(ErrorCode::invalid_argument, "pigeonhole scan finished without a collision");
}

std::vector<Approximant> coprime_approximants(const AdelicPoint& x, const PlaceSet& places,
                                              std::size_t K, unsigned long N_max) {
  check_point(x, places);
  if (std::all_of(x.coords().begin(), x.coords().end(), [&](const Rational& c) { return c == x.real(); })) {
    fail(ErrorCode::diagonal_rational, "all coordinates are equal, so x lies in iota(Q)");
  }
  std::vector<Approximant> found;
  std::vector<unsigned long> last_exponents;
  for (unsigned long n = 1; n <= N_max && found.size() < K; ++n) {
    // The scan, its partition and the first collision depend on n only
    // through the exponents n_i, so repeated exponents repeat the result.
    auto exponents = level_ball_index(places, n).exponents;
    if (exponents == last_exponents) continue;
    last_exponents = std::move(exponents);
    auto res = dirichlet_approximate(x, places, n);
    const Integer g = gcd_pz(res.beta, res.gamma);
    const Rational beta = res.beta.value() / g;
    const Rational gamma = res.gamma.value() / g;
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Approximant& a) {
      return a.beta.value() == beta && a.gamma.value() == gamma;
    });
    if (duplicate) continue;
    auto gamma_pz = decompose(gamma, places);
    const Rational dist = distance(scale(gamma, x), diagonal(beta, places), places);
    found.push_back({decompose(beta, places), std::move(gamma_pz), dist});
  }
  if (found.size() < K) throw ExhaustedError(N_max, std::move(found));
  return found;
}

}  // namespace diagapprox
