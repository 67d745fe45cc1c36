#pragma once

#include <cstddef>
#include <vector>

#include "diagapprox/places.hpp"
#include "diagapprox/rational.hpp"

namespace diagapprox {

/// A point of Q_P: coordinate 0 is the real place, coordinate i+1 the
/// p_i-adic place. p-adic coordinates are rational representatives.
class AdelicPoint {
 public:
  AdelicPoint() = default;
  explicit AdelicPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {}

  std::size_t size() const noexcept { return coords_.size(); }
  const Rational& real() const { return coords_.at(0); }
  const Rational& finite(std::size_t i) const { return coords_.at(i + 1); }
  const Rational& operator[](std::size_t k) const { return coords_.at(k); }
  const std::vector<Rational>& coords() const noexcept { return coords_; }

  bool operator==(const AdelicPoint&) const = default;

 private:
  std::vector<Rational> coords_;
};

/// The diagonal embedding iota(q) = (q, q, ..., q).
AdelicPoint diagonal(const Rational& q, const PlaceSet& places);
AdelicPoint scale(const Rational& factor, const AdelicPoint& x);
AdelicPoint translate(const AdelicPoint& x, const Rational& shift);
/// x - iota(beta), place by place.
AdelicPoint subtract_diagonal(const AdelicPoint& x, const Rational& beta);

/// Throws InvalidArgument when the coordinate count does not match P.
void check_point(const AdelicPoint& x, const PlaceSet& places);

/// max over places of |x_p - y_p|_p.
Rational distance(const AdelicPoint& x, const AdelicPoint& y, const PlaceSet& places);

/// A point of Z_P = [0,1) x Z_{p_1} x ... x Z_{p_r}. Construction validates.
class FundamentalDomainPoint {
 public:
  FundamentalDomainPoint(AdelicPoint point, const PlaceSet& places);

  static bool contains(const AdelicPoint& point, const PlaceSet& places);

  const AdelicPoint& point() const noexcept { return point_; }
  const Rational& real() const { return point_.real(); }
  const Rational& finite(std::size_t i) const { return point_.finite(i); }

  bool operator==(const FundamentalDomainPoint&) const = default;

 private:
  AdelicPoint point_;
};

/// The p-principal part of q: the unique a/p^k with 0 <= a < p^k such that
/// q - a/p^k is p-integral (0 when q is already p-integral).
Rational principal_part(const Rational& q, unsigned long p);

/// For a p-integral q = u/w, the residue u * w^{-1} mod p^digits.
Integer padic_residue(const Rational& q, unsigned long p, unsigned long digits);

struct Reduction {
  FundamentalDomainPoint point;
  PZElement shift;
};

/// Writes x = z + iota(gamma) with z in Z_P and gamma in P^{-1}Z.
Reduction reduce_to_fundamental_domain(const AdelicPoint& x, const PlaceSet& places);

enum class Openness { strict, weak };

struct PadicBall {
  unsigned long p = 2;
  Rational center;
  Rational radius;
  Openness openness = Openness::strict;
};

/// Haar measure of a p-adic ball: the largest p^{-k} below the radius
/// (strict) or not exceeding it (weak). It is also the ball's closed radius.
Rational ball_measure(const PadicBall& ball);
bool ball_contains(const PadicBall& ball, const Rational& x);
Rational ball_intersection_measure(const PadicBall& a, const PadicBall& b);

/// Length of (c1 - r1, c1 + r1) intersected with (c2 - r2, c2 + r2).
Rational interval_intersection_length(const Rational& c1, const Rational& r1, const Rational& c2,
                                      const Rational& r2);

/// A real interval times one p-adic ball per finite place, all around the
/// same rational centre. Seen in Z_P, the parts of the box outside [0, 1)
/// come back through a diagonal shift iota(k), which moves the p-adic
/// centres by k as well.
struct ApproxBox {
  Rational real_center;
  Rational real_radius;
  std::vector<PadicBall> balls;
  Openness openness = Openness::strict;
};

ApproxBox make_box(const Rational& center, const Rational& real_radius,
                   const std::vector<Rational>& padic_radii, const PlaceSet& places,
                   Openness openness = Openness::strict);

/// min(2 real_radius, 1) times the ball measures.
Rational box_measure(const ApproxBox& box);
/// Measure of the intersection of the two boxes' images in Z_P. Both real
/// radii must be at most 1/2.
Rational box_intersection_measure(const ApproxBox& a, const ApproxBox& b);
/// z is a point of Z_P; true when some z + iota(k) lies in the box.
bool box_contains(const ApproxBox& box, const AdelicPoint& z);
inline bool box_contains(const ApproxBox& box, const FundamentalDomainPoint& z) {
  return box_contains(box, z.point());
}

}  // namespace diagapprox
