#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diagapprox/geometry.hpp"
#include "diagapprox/places.hpp"

namespace diagapprox {

/// An approximation function psi on P^{-1}Z that never exceeds 1/(2 L(gamma)).
class PsiFunction {
 public:
  enum class Family { scaled_cap, power, table };

  /// psi(gamma) = c / L(gamma), 0 <= c <= 1/2.
  static PsiFunction scaled_cap(const Rational& c);
  /// psi(gamma) = min(c / L(gamma)^theta, 1 / (2 L(gamma))), integer theta >= 1.
  static PsiFunction power(const Rational& c, unsigned long theta);
  /// Explicit values keyed by gamma; zero elsewhere. Entries above the cap,
  /// negative entries, and keys outside P^{-1}Z are rejected.
  static PsiFunction table(const std::vector<std::pair<Rational, Rational>>& entries,
                           const PlaceSet& places);
  /// Table text: one "gamma value" pair per line, '#' starts a comment.
  static PsiFunction parse_table(std::istream& in, const PlaceSet& places);

  Family family() const noexcept { return family_; }
  const Rational& c() const noexcept { return c_; }
  unsigned long theta() const noexcept { return theta_; }
  std::string describe() const;

  Rational operator()(const PZElement& gamma, const PlaceSet& places) const;

 private:
  Family family_ = Family::scaled_cap;
  Rational c_ = make_rational(1, 2);
  unsigned long theta_ = 1;
  std::map<Rational, Rational> table_;
};

/// 1 / (2 L(gamma)).
Rational psi_cap(const PZElement& gamma, const PlaceSet& places);

inline Rational psi_eval(const PsiFunction& psi, const PZElement& gamma, const PlaceSet& places) {
  return psi(gamma, places);
}

/// The set A_gamma(psi) as phi(n) disjoint boxes centred at a/n, gcd(a, n) = 1.
struct ApproxSetDescriptor {
  PZElement gamma;
  Rational psi_value;
  Rational real_radius;               // psi / |gamma|_inf
  std::vector<Rational> padic_radii;  // p_i^{nu_i} psi
  std::vector<Integer> numerators;    // the a's, ascending
  std::vector<ApproxBox> boxes;       // boxes[k] is centred at numerators[k] / n
  Rational exact_measure;

  bool empty() const noexcept { return boxes.empty(); }
};

/// Requires gamma > 0. psi(gamma) = 0 yields an empty descriptor.
ApproxSetDescriptor build_A_gamma(const PZElement& gamma, const PsiFunction& psi, const PlaceSet& places);
ApproxSetDescriptor build_A_gamma(const PZElement& gamma, const Rational& psi_value, const PlaceSet& places);

struct MeasureBounds {
  Rational lower;  // 2 phi(n) psi^{r+1} / (n p_1 ... p_r)
  Rational upper;  // 2 phi(n) psi^{r+1} / n
  Rational exact;
  bool lower_ok = false;  // lower < exact
  bool upper_ok = false;  // exact <= upper
  bool ok() const noexcept { return lower_ok && upper_ok; }
};

MeasureBounds measure_bounds_check(const ApproxSetDescriptor& desc, const PlaceSet& places);

/// Indices of the boxes of desc that contain z (scans every box).
std::vector<std::size_t> containing_boxes(const AdelicPoint& z, const ApproxSetDescriptor& desc);

/// Box-form membership: only the boxes whose arcs can reach z are examined.
bool membership(const AdelicPoint& z, const ApproxSetDescriptor& desc);
bool membership(const FundamentalDomainPoint& z, const PZElement& gamma, const PsiFunction& psi,
                const PlaceSet& places);

/// Direct route: is there beta coprime to gamma with
/// d(gamma z, iota(beta)) < psi(gamma)? Candidates for beta come from
/// reducing gamma z. beta = 0 counts when n = 1, since gcd(0, gamma) = n.
bool membership_by_search(const FundamentalDomainPoint& z, const PZElement& gamma, const Rational& psi_value,
                          const PlaceSet& places);

Rational overlap_measure(const ApproxSetDescriptor& a, const ApproxSetDescriptor& b);
Rational overlap_measure(const PZElement& beta, const PZElement& gamma, const PsiFunction& psi,
                         const PlaceSet& places);

/// 16 psi(beta)^{r+1} psi(gamma)^{r+1}.
Rational overlap_bound(const Rational& psi_beta, const Rational& psi_gamma, const PlaceSet& places);

struct OverlapGeometry {
  Rational delta_max_real;                 // 2 max of the real radii
  Rational delta_min_real;                 // 2 min of the real radii
  std::vector<Rational> delta_max_padic;   // max of p_i^{mu_i} psi(beta), p_i^{nu_i} psi(gamma)
  std::vector<Rational> delta_min_padic;
  std::vector<long> tau;                   // p_i^{-tau_i} <= delta_max_padic[i] < p_i^{1 - tau_i}
};

OverlapGeometry overlap_geometry(const PZElement& beta, const PZElement& gamma, const PsiFunction& psi,
                                 const PlaceSet& places);

struct OverlapCount {
  Integer count;       // N(beta, gamma) by brute force
  Integer zero_count;  // the pairs counted with a n = b m
  Rational tau_bound;  // 4 m n Delta_inf prod p_i^{-tau_i}
  Rational bound;      // 4 m n Delta_inf prod Delta_{p_i}
  bool within_bound() const { return Rational(count) <= bound; }
};

OverlapCount overlap_count_N(const PZElement& beta, const PZElement& gamma, const OverlapGeometry& geom,
                             const PlaceSet& places);

/// Solutions of a n - b m = x with 1 <= a <= m, 1 <= b <= n.
Integer count_linear_solutions(const Integer& m, const Integer& n, const Integer& x);

/// { gamma > 0 : level(gamma) <= N } ordered by level, ties by value.
std::vector<PZElement> positive_index_set(const PlaceSet& places, unsigned long N);

struct SeriesPoint {
  unsigned long N = 1;
  Rational S;                // sum phi(n) psi^{r+1} / n
  Rational D;                // sum psi^{r+1}
  std::optional<Rational> R; // S / D, absent when D = 0
};

SeriesPoint series_partial(const PsiFunction& psi, const PlaceSet& places, unsigned long N);
/// series_partial for N = 1..N_max, sharing one enumeration.
std::vector<SeriesPoint> series_table(const PsiFunction& psi, const PlaceSet& places, unsigned long N_max);

/// A k x k matrix of exact values, row-major.
struct RationalMatrix {
  std::size_t size = 0;
  std::vector<Rational> entries;
  const Rational& at(std::size_t i, std::size_t j) const { return entries.at(i * size + j); }
  Rational& at(std::size_t i, std::size_t j) { return entries.at(i * size + j); }
};

/// (sum of measures)^2 / (sum of all pairwise intersection measures).
Rational second_moment_bound(std::span<const Rational> measures, const RationalMatrix& pairwise);

/// x -> (q / (p_1...p_r)) x + s p_1...p_r / q, reduced into Z_P.
FundamentalDomainPoint transfer_map(const FundamentalDomainPoint& x, unsigned long q, const Integer& s,
                                    const PlaceSet& places);

}  // namespace diagapprox
