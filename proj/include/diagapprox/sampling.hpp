#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "diagapprox/geometry.hpp"
#include "diagapprox/metric_sets.hpp"

namespace diagapprox {

/// Recorded in every report so a run can be reproduced.
inline constexpr const char* kRngAlgorithm = "mt19937_64;splitmix64-chunk-seeds;chunk=4096";
inline constexpr std::uint64_t kChunkSize = 4096;

std::uint64_t splitmix64(std::uint64_t& state);
/// Seed of the c-th Monte Carlo chunk derived from the run seed.
std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk);

/// Real coordinate uniform on the grid 2^{-53} Z in [0, 1); each p_i
/// coordinate is sum_{j<k} d_j p_i^j with independent uniform digits.
FundamentalDomainPoint sample_fundamental_domain(std::mt19937_64& rng, const PlaceSet& places,
                                                 unsigned long digits);

/// Random point with coordinates a/b, |a| <= max_den, 1 <= b <= max_den.
AdelicPoint random_rational_point(std::mt19937_64& rng, const PlaceSet& places, long max_den);

/// Smallest k with p_i^{-k} <= every p_i-adic ball measure in the sets, so
/// that membership of a k-digit sample is decided exactly.
unsigned long required_digits(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places);

/// Throws PrecisionViolation when digits is below required_digits.
void check_precision(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places, unsigned long digits);

struct MCEstimate {
  double estimate = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  unsigned long digits = 0;
};

/// Fraction of samples of Z_P lying in at least one of the sets. Samples are
/// drawn in fixed chunks with derived seeds, so the result does not depend
/// on the thread count. digits = 0 selects required_digits.
MCEstimate mc_union_measure(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places,
                            std::uint64_t samples, unsigned long digits, std::uint64_t seed,
                            unsigned threads = 0);

MCEstimate mc_union_measure(const std::vector<PZElement>& gammas, const PsiFunction& psi,
                            const PlaceSet& places, std::uint64_t samples, unsigned long digits,
                            std::uint64_t seed, unsigned threads = 0);

}  // namespace diagapprox
