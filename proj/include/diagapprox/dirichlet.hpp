#pragma once

#include <cstddef>
#include <vector>

#include "diagapprox/error.hpp"
#include "diagapprox/geometry.hpp"
#include "diagapprox/places.hpp"

namespace diagapprox {

/// The exponents n_i with p_i^{n_i} <= N < p_i^{n_i + 1}, and the common
/// denominator D = prod p_i^{n_i} of Z_N.
struct LevelBallIndex {
  unsigned long N = 1;
  std::vector<unsigned long> exponents;
  Integer denominator;
};

LevelBallIndex level_ball_index(const PlaceSet& places, unsigned long N);

/// N * prod p_i^{n_i} + 1.
Integer z_n_count(const PlaceSet& places, unsigned long N);

/// { zeta in P^{-1}Z : level(zeta) <= N, zeta >= 0 }, ascending.
std::vector<PZElement> enumerate_z_n(const PlaceSet& places, unsigned long N);

/// The partition of Z_P into boxes [r/M^eta, (r+1)/M^eta) x prod (s_i + p_i^{n_i} Z_{p_i}).
struct PigeonholePartition {
  LevelBallIndex index;
  unsigned long eta = 0;        // n_j for the j with p_j = M
  Integer real_cells;           // M^eta
  Integer box_count;            // M^eta * prod p_i^{n_i}
  Rational diameter;            // max(M^{-eta}, p_i^{-n_i})
};

/// Builds the partition and checks #boxes < #Z_N, N < M p_i^{n_i} for every
/// i, and diameter <= M/N; a failed check throws.
PigeonholePartition pigeonhole_partition(const PlaceSet& places, unsigned long N);

struct DirichletResult {
  PZElement beta;
  PZElement gamma;
  Rational distance;
  unsigned long N = 1;
  std::size_t scanned = 0;  // elements of Z_N visited before stopping
};

/// Runs the pigeonhole argument over Z_N in ascending order and returns the
/// first collision (or the first exact hit). The result always satisfies
/// gamma > 0, level(gamma) <= N and d(gamma x, iota(beta)) <= M/N.
DirichletResult dirichlet_approximate(const AdelicPoint& x, const PlaceSet& places, unsigned long N);

struct Approximant {
  PZElement beta;
  PZElement gamma;
  Rational distance;
};

/// Raised by coprime_approximants when N_max is reached first.
class ExhaustedError : public Error {
 public:
  ExhaustedError(unsigned long n_max, std::vector<Approximant> partial)
      : Error(ErrorCode::exhausted,
              "found " + std::to_string(partial.size()) + " coprime pairs before N_max = " +
                  std::to_string(n_max)),
        n_max_(n_max),
        partial_(std::move(partial)) {}

  unsigned long n_max() const noexcept { return n_max_; }
  const std::vector<Approximant>& partial() const noexcept { return partial_; }

 private:
  unsigned long n_max_;
  std::vector<Approximant> partial_;
};

/// Distinct coprime pairs with d(gamma x, iota(beta)) <= M / level(gamma),
/// obtained from the Dirichlet solver at N = 1, 2, ... by dividing out the
/// gcd. Throws DiagonalRational if every coordinate of x is equal.
std::vector<Approximant> coprime_approximants(const AdelicPoint& x, const PlaceSet& places,
                                              std::size_t K, unsigned long N_max);

}  // namespace diagapprox
