#include "diagapprox/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "diagapprox/error.hpp"

namespace diagapprox {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t chunk_seed(std::uint64_t seed, std::uint64_t chunk) {
  std::uint64_t state = seed ^ (chunk * 0xd1b54a32d192ed03ULL);
  splitmix64(state);
  return splitmix64(state);
}

FundamentalDomainPoint sample_fundamental_domain(std::mt19937_64& rng, const PlaceSet& places,
                                                 unsigned long digits) {
  if (digits < 1) fail(ErrorCode::invalid_argument, "sampling needs at least one digit");
  std::vector<Rational> coords;
  coords.reserve(places.size());
  Integer grid(rng() >> 11);
  Rational real(grid, Integer(1) << 53);
  real.canonicalize();
  coords.push_back(std::move(real));
  for (auto p : places.primes()) {
    std::uniform_int_distribution<unsigned long> digit(0, p - 1);
    Integer value = 0;
    Integer place = 1;
    for (unsigned long j = 0; j < digits; ++j) {
      value += place * digit(rng);
      place *= p;
    }
    coords.emplace_back(value);
  }
  return FundamentalDomainPoint(AdelicPoint(std::move(coords)), places);
}

AdelicPoint random_rational_point(std::mt19937_64& rng, const PlaceSet& places, long max_den) {
  std::uniform_int_distribution<long> num(-max_den, max_den);
  std::uniform_int_distribution<long> den(1, max_den);
  std::vector<Rational> coords;
  for (std::size_t k = 0; k < places.size(); ++k) {
    const long a = num(rng);
    const long b = den(rng);
    coords.push_back(make_rational(a, b));
  }
  return AdelicPoint(std::move(coords));
}

unsigned long required_digits(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& /*places*/) {
  unsigned long k = 1;
  for (const auto& desc : sets) {
    if (desc.boxes.empty()) continue;
    // Every box of one set has the same radii.
    for (const auto& ball : desc.boxes.front().balls) {
      // The measure p^{-e} as a rational number has p-adic valuation -e.
      const long e = -padic_valuation(ball_measure(ball), ball.p);
      if (e > 0) k = std::max(k, static_cast<unsigned long>(e));
    }
  }
  return k;
}

void check_precision(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places, unsigned long digits) {
  const unsigned long needed = required_digits(sets, places);
  if (digits < needed) {
    fail(ErrorCode::precision, "sampling with " + std::to_string(digits) +
                                   " digits cannot resolve balls that need " + std::to_string(needed));
  }
}

MCEstimate mc_union_measure(const std::vector<ApproxSetDescriptor>& sets, const PlaceSet& places,
                            std::uint64_t samples, unsigned long digits, std::uint64_t seed, unsigned threads) {
  if (digits == 0) digits = required_digits(sets, places);
  check_precision(sets, places, digits);
  MCEstimate out;
  out.samples = samples;
  out.seed = seed;
  out.digits = digits;
  if (samples == 0) return out;

  const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<std::uint64_t> hits(chunks, 0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      std::mt19937_64 rng(chunk_seed(seed, c));
      const std::uint64_t count = std::min(kChunkSize, samples - c * kChunkSize);
      std::uint64_t local = 0;
      for (std::uint64_t s = 0; s < count; ++s) {
        const auto z = sample_fundamental_domain(rng, places, digits);
        if (std::any_of(sets.begin(), sets.end(), [&](const auto& d) { return membership(z.point(), d); })) {
          ++local;
        }
      }
      hits[c] = local;
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (auto h : hits) out.hits += h;
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  out.standard_error = std::sqrt(out.estimate * (1 - out.estimate) / static_cast<double>(samples));
  return out;
}

MCEstimate mc_union_measure(const std::vector<PZElement>& gammas, const PsiFunction& psi,
                            const PlaceSet& places, std::uint64_t samples, unsigned long digits,
                            std::uint64_t seed, unsigned threads) {
  std::vector<ApproxSetDescriptor> sets;
  sets.reserve(gammas.size());
  for (const auto& g : gammas) sets.push_back(build_A_gamma(g, psi, places));
  return mc_union_measure(sets, places, samples, digits, seed, threads);
}

}  // namespace diagapprox
