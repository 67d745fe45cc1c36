#include "diagapprox/geometry.hpp"

#include <algorithm>

#include "diagapprox/error.hpp"

namespace diagapprox {

AdelicPoint diagonal(const Rational& q, const PlaceSet& places) {
  return AdelicPoint(std::vector<Rational>(places.size(), q));
}

AdelicPoint scale(const Rational& factor, const AdelicPoint& x) {
  std::vector<Rational> out;
  out.reserve(x.size());
  for (const auto& c : x.coords()) out.emplace_back(factor * c);
  return AdelicPoint(std::move(out));
}

AdelicPoint translate(const AdelicPoint& x, const Rational& shift) {
  std::vector<Rational> out;
  out.reserve(x.size());
  for (const auto& c : x.coords()) out.emplace_back(c + shift);
  return AdelicPoint(std::move(out));
}

AdelicPoint subtract_diagonal(const AdelicPoint& x, const Rational& beta) {
  return translate(x, Rational(-beta));
}

void check_point(const AdelicPoint& x, const PlaceSet& places) {
  if (x.size() != places.size()) {
    fail(ErrorCode::invalid_argument, "point has " + std::to_string(x.size()) +
                                          " coordinates but " + places.to_string() + " has " +
                                          std::to_string(places.size()) + " places");
  }
}

Rational distance(const AdelicPoint& x, const AdelicPoint& y, const PlaceSet& places) {
  check_point(x, places);
  check_point(y, places);
  Rational best = abs(x.real() - y.real());
  for (std::size_t i = 0; i < places.r(); ++i) {
    best = std::max(best, padic_abs(x.finite(i) - y.finite(i), places.prime(i)));
  }
  return best;
}

bool FundamentalDomainPoint::contains(const AdelicPoint& point, const PlaceSet& places) {
  if (point.size() != places.size()) return false;
  if (point.real() < 0 || point.real() >= 1) return false;
  for (std::size_t i = 0; i < places.r(); ++i) {
    if (mpz_divisible_ui_p(point.finite(i).get_den_mpz_t(), places.prime(i))) return false;
  }
  return true;
}

FundamentalDomainPoint::FundamentalDomainPoint(AdelicPoint point, const PlaceSet& places)
    : point_(std::move(point)) {
  check_point(point_, places);
  if (!contains(point_, places)) {
    fail(ErrorCode::invalid_argument, "point is outside the fundamental domain");
  }
}

Integer padic_residue(const Rational& q, unsigned long p, unsigned long digits) {
  Integer modulus = ipower(p, digits);
  Integer inverse;
  if (mpz_invert(inverse.get_mpz_t(), q.get_den_mpz_t(), modulus.get_mpz_t()) == 0) {
    if (digits == 0) return 0;
    fail(ErrorCode::invalid_argument, to_string(q) + " is not " + std::to_string(p) + "-integral");
  }
  Integer out = q.get_num() * inverse;
  mpz_fdiv_r(out.get_mpz_t(), out.get_mpz_t(), modulus.get_mpz_t());
  return out;
}

Rational principal_part(const Rational& q, unsigned long p) {
  if (q == 0) return 0;
  long v = padic_valuation(q.get_den(), p);
  if (v == 0) return 0;
  Integer pk = ipower(p, static_cast<unsigned long>(v));
  Integer w = q.get_den() / pk;
  Integer inverse;
  mpz_invert(inverse.get_mpz_t(), w.get_mpz_t(), pk.get_mpz_t());
  Integer a = q.get_num() * inverse;
  mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), pk.get_mpz_t());
  return make_rational(a, pk);
}

Reduction reduce_to_fundamental_domain(const AdelicPoint& x, const PlaceSet& places) {
  check_point(x, places);
  Rational gamma = 0;
  for (std::size_t i = 0; i < places.r(); ++i) gamma += principal_part(x.finite(i), places.prime(i));
  gamma += Rational(floor(Rational(x.real() - gamma)));
  return Reduction{FundamentalDomainPoint(subtract_diagonal(x, gamma), places),
                   decompose(gamma, places)};
}

Rational ball_measure(const PadicBall& ball) {
  if (ball.radius <= 0) fail(ErrorCode::invalid_argument, "ball radius must be positive");
  // Find e with p^e <= radius < p^{e+1}.
  long e = 0;
  Rational pe = 1;
  const Rational p = ball.p;
  if (ball.radius >= 1) {
    while (pe * p <= ball.radius) {
      pe *= p;
      ++e;
    }
  } else {
    while (pe > ball.radius) {
      pe /= p;
      --e;
    }
  }
  if (ball.openness == Openness::strict && pe == ball.radius) pe /= p;
  return pe;
}

bool ball_contains(const PadicBall& ball, const Rational& x) {
  return padic_abs(x - ball.center, ball.p) <= ball_measure(ball);
}

Rational ball_intersection_measure(const PadicBall& a, const PadicBall& b) {
  if (a.p != b.p) fail(ErrorCode::invalid_argument, "balls live at different places");
  const Rational ma = ball_measure(a);
  const Rational mb = ball_measure(b);
  // Ultrametric: nested or disjoint.
  if (padic_abs(a.center - b.center, a.p) <= std::max(ma, mb)) return std::min(ma, mb);
  return 0;
}

Rational interval_intersection_length(const Rational& c1, const Rational& r1, const Rational& c2,
                                      const Rational& r2) {
  const Rational lo = std::max(Rational(c1 - r1), Rational(c2 - r2));
  const Rational hi = std::min(Rational(c1 + r1), Rational(c2 + r2));
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

ApproxBox make_box(const Rational& center, const Rational& real_radius,
                   const std::vector<Rational>& padic_radii, const PlaceSet& places,
                   Openness openness) {
  if (padic_radii.size() != places.r()) fail(ErrorCode::invalid_argument, "one radius per prime");
  if (real_radius <= 0) fail(ErrorCode::invalid_argument, "real radius must be positive");
  ApproxBox box{center, real_radius, {}, openness};
  box.balls.reserve(places.r());
  for (std::size_t i = 0; i < places.r(); ++i) {
    box.balls.push_back(PadicBall{places.prime(i), center, padic_radii[i], openness});
  }
  return box;
}

Rational box_measure(const ApproxBox& box) {
  Rational m = std::min(Rational(2 * box.real_radius), Rational(1));
  for (const auto& b : box.balls) m *= ball_measure(b);
  return m;
}

namespace {

PadicBall shifted(PadicBall ball, const Integer& k) {
  ball.center += k;
  return ball;
}

}  // namespace

Rational box_intersection_measure(const ApproxBox& a, const ApproxBox& b) {
  if (a.balls.size() != b.balls.size()) fail(ErrorCode::invalid_argument, "boxes over different place sets");
  if (2 * a.real_radius > 1 || 2 * b.real_radius > 1) {
    fail(ErrorCode::invalid_argument, "intersections need real radii of at most 1/2");
  }
  // Each box then meets Z_P injectively, and the two images meet exactly
  // where a meets b + iota(k) for some integer k.
  const Rational reach = a.real_radius + b.real_radius;
  const Integer k_lo = floor(Rational(a.real_center - b.real_center - reach));
  const Integer k_hi = ceil(Rational(a.real_center - b.real_center + reach));
  Rational total = 0;
  for (Integer k = k_lo; k <= k_hi; ++k) {
    Rational m = interval_intersection_length(a.real_center, a.real_radius, b.real_center + k, b.real_radius);
    for (std::size_t i = 0; i < a.balls.size() && m != 0; ++i) {
      m *= ball_intersection_measure(a.balls[i], shifted(b.balls[i], k));
    }
    total += m;
  }
  return total;
}

bool box_contains(const ApproxBox& box, const AdelicPoint& z) {
  if (z.size() != box.balls.size() + 1) fail(ErrorCode::invalid_argument, "point and box dimensions differ");
  const Integer k_lo = floor(Rational(box.real_center - box.real_radius - z.real()));
  const Integer k_hi = ceil(Rational(box.real_center + box.real_radius - z.real()));
  for (Integer k = k_lo; k <= k_hi; ++k) {
    const Rational d = abs(Rational(z.real() + k - box.real_center));
    const bool real_in = box.openness == Openness::strict ? d < box.real_radius : d <= box.real_radius;
    if (!real_in) continue;
    bool all = true;
    for (std::size_t i = 0; i < box.balls.size() && all; ++i) all = ball_contains(box.balls[i], z.finite(i) + k);
    if (all) return true;
  }
  return false;
}

}  // namespace diagapprox
