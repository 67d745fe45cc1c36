#pragma once

// Brute-force reference computations for the tests. They work straight from
// the definitions on plain GMP rationals and share no code with the library.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <numeric>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Z = mpz_class;
using Primes = std::vector<unsigned long>;

inline Q frac(long a, long b) {
  Q q(a, b);
  q.canonicalize();
  return q;
}

inline Z qfloor(const Q& q) {
  Z out;
  mpz_fdiv_q(out.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return out;
}

inline long val(Z z, unsigned long p) {
  long v = 0;
  while (z % p == 0) {
    z /= p;
    ++v;
  }
  return v;
}

// |q|_p, with |0|_p = 0.
inline Q abs_p(const Q& q, unsigned long p) {
  if (q == 0) return 0;
  const long v = val(abs(q.get_num()), p) - val(q.get_den(), p);
  Q out = 1;
  for (long k = 0; k < std::abs(v); ++k) out *= p;
  return v > 0 ? Q(1 / out) : out;
}

inline Q dist(const std::vector<Q>& x, const std::vector<Q>& y, const Primes& primes) {
  Q d = abs(x[0] - y[0]);
  for (std::size_t i = 0; i < primes.size(); ++i) d = std::max(d, abs_p(x[i + 1] - y[i + 1], primes[i]));
  return d;
}

inline Q level(const Q& q, const Primes& primes) {
  Q l = abs(q);
  for (auto p : primes) l = std::max(l, abs_p(q, p));
  return l;
}

// n: |numerator| with every prime of P removed.
inline Z unit(const Q& q, const Primes& primes) {
  Z n = abs(q.get_num());
  for (auto p : primes) {
    while (n != 0 && n % p == 0) n /= p;
  }
  return n;
}

inline Q big_L(const Q& q, const Primes& primes) {
  const Q n = unit(q, primes);
  Q l = n / abs(q);
  for (auto p : primes) l = std::max(l, Q(n / abs_p(q, p)));
  return l;
}

inline long phi(long n) {
  long count = 0;
  for (long a = 1; a <= n; ++a) count += std::gcd(a, n) == 1;
  return count;
}

// { q >= 0 : level(q) <= N } by scanning every fraction whose denominator is
// a product of powers of P not exceeding N.
inline std::set<Q> level_set(const Primes& primes, long N) {
  std::vector<long> dens{1};
  for (auto p : primes) {
    std::vector<long> next;
    for (long d : dens) {
      for (long pe = 1; pe <= N; pe *= static_cast<long>(p)) next.push_back(d * pe);
    }
    dens = next;
  }
  std::set<Q> out;
  for (long d : dens) {
    for (long a = 0; a <= N * d; ++a) {
      const Q q = frac(a, d);
      if (level(q, primes) <= N) out.insert(q);
    }
  }
  return out;
}

// Lengths of unions of open intervals clipped to [0, 1).
inline Q union_length(std::vector<std::pair<Q, Q>> iv) {
  for (auto& [lo, hi] : iv) {
    lo = std::max(lo, Q(0));
    hi = std::min(hi, Q(1));
  }
  std::sort(iv.begin(), iv.end());
  Q total = 0, cur_lo = 0, cur_hi = 0;
  bool open = false;
  for (const auto& [lo, hi] : iv) {
    if (hi <= lo) continue;
    if (open && lo <= cur_hi) {
      cur_hi = std::max(cur_hi, hi);
      continue;
    }
    if (open) total += cur_hi - cur_lo;
    cur_lo = lo;
    cur_hi = hi;
    open = true;
  }
  if (open) total += cur_hi - cur_lo;
  return total;
}

inline std::vector<std::pair<Q, Q>> intersect(const std::vector<std::pair<Q, Q>>& a,
                                              const std::vector<std::pair<Q, Q>>& b) {
  std::vector<std::pair<Q, Q>> out;
  for (const auto& [l1, h1] : a) {
    for (const auto& [l2, h2] : b) {
      Q lo = std::max(l1, l2), hi = std::min(h1, h2);
      if (hi > lo) out.emplace_back(lo, hi);
    }
  }
  return out;
}

// The set { z in Z_P : d(gamma z, beta) < psi for some beta coprime to gamma }
// sliced by p-adic residue classes. For each class (one residue per prime,
// modulo p^k) it lists the real intervals of the slice.
struct Slices {
  std::vector<unsigned long> digits;  // k per prime
  std::vector<std::vector<Z>> classes;
  std::vector<std::vector<std::pair<Q, Q>>> intervals;
};

// Smallest k with |gamma|_p p^{-k} below every |.|_p threshold under psi, so
// the condition |gamma x - beta|_p < psi is constant on x + p^k Z_p.
inline unsigned long digits_for(const Q& gamma, const Q& psi, unsigned long p, unsigned long at_least) {
  Q below = 1;  // largest power of p strictly below psi
  while (below >= psi) below /= p;
  while (below * p < psi) below *= p;
  unsigned long k = 0;
  Q step = abs_p(gamma, p);
  while (step > below) {
    step /= p;
    ++k;
  }
  return std::max(k, at_least);
}

inline Slices slices(const Q& gamma, const Q& psi, const Primes& primes, const std::vector<unsigned long>& digits) {
  Slices s;
  s.digits = digits;
  const Z n = unit(gamma, primes);
  const Z den = gamma.get_den();
  // Every admissible beta satisfies |beta|_p <= max(|gamma|_p, 1), so
  // beta is in (1/den) Z, and |gamma t - beta| < psi bounds it in the reals.
  const Z j_lo = qfloor(Q(-psi * den)) - 1;
  const Z j_hi = qfloor(Q((gamma + psi) * den)) + 1;
  std::vector<Z> moduli;
  std::size_t total = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    Z m = 1;
    for (unsigned long k = 0; k < digits[i]; ++k) m *= primes[i];
    moduli.push_back(m);
    total *= m.get_ui();
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<Z> cls;
    std::size_t rest = idx;
    for (const auto& m : moduli) {
      cls.push_back(Z(rest % m.get_ui()));
      rest /= m.get_ui();
    }
    std::vector<std::pair<Q, Q>> iv;
    for (Z j = j_lo; j <= j_hi; ++j) {
      const Q beta(j, den);
      Q b = beta;
      b.canonicalize();
      if (gcd(unit(b, primes), n) != 1) continue;
      bool ok = true;
      for (std::size_t i = 0; i < primes.size() && ok; ++i) ok = abs_p(Q(gamma * Q(cls[i]) - b), primes[i]) < psi;
      if (ok) iv.emplace_back((b - psi) / gamma, (b + psi) / gamma);
    }
    s.classes.push_back(std::move(cls));
    s.intervals.push_back(std::move(iv));
  }
  return s;
}

inline Q class_weight(const Slices& s, const Primes& primes) {
  Q w = 1;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    for (unsigned long k = 0; k < s.digits[i]; ++k) w /= primes[i];
  }
  return w;
}

inline Q measure(const Q& gamma, const Q& psi, const Primes& primes) {
  std::vector<unsigned long> digits;
  for (auto p : primes) digits.push_back(digits_for(gamma, psi, p, 1));
  const auto s = slices(gamma, psi, primes, digits);
  Q total = 0;
  for (const auto& iv : s.intervals) total += union_length(iv);
  return total * class_weight(s, primes);
}

inline Q overlap(const Q& beta, const Q& psi_beta, const Q& gamma, const Q& psi_gamma, const Primes& primes) {
  std::vector<unsigned long> digits;
  for (auto p : primes) {
    digits.push_back(std::max(digits_for(beta, psi_beta, p, 1), digits_for(gamma, psi_gamma, p, 1)));
  }
  const auto a = slices(beta, psi_beta, primes, digits);
  const auto b = slices(gamma, psi_gamma, primes, digits);
  Q total = 0;
  for (std::size_t k = 0; k < a.intervals.size(); ++k) total += union_length(intersect(a.intervals[k], b.intervals[k]));
  return total * class_weight(a, primes);
}

// z in Z_P: real coordinate in [0, 1), p-adic coordinates p-integral.
inline bool member(const std::vector<Q>& z, const Q& gamma, const Q& psi, const Primes& primes) {
  const Z n = unit(gamma, primes);
  const Z den = gamma.get_den();
  const Z j_lo = qfloor(Q(-psi * den)) - 1;
  const Z j_hi = qfloor(Q((gamma + psi) * den)) + 1;
  std::vector<Q> gz;
  for (const auto& c : z) gz.push_back(gamma * c);
  for (Z j = j_lo; j <= j_hi; ++j) {
    Q b(j, den);
    b.canonicalize();
    if (gcd(unit(b, primes), n) != 1) continue;
    if (dist(gz, std::vector<Q>(z.size(), b), primes) < psi) return true;
  }
  return false;
}

// Pairs 1 <= a <= m, 1 <= b <= n with a n - b m = x.
inline long linear_solutions(long m, long n, long x) {
  long c = 0;
  for (long a = 1; a <= m; ++a) {
    for (long b = 1; b <= n; ++b) c += a * n - b * m == x;
  }
  return c;
}

}  // namespace oracle
