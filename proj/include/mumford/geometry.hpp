#pragma once
// The projective line over Q_p: homogeneous points, Moebius maps, and closed
// balls with exact set-level arithmetic. Balls come in two kinds:
//   standard    {z : v(z - center) >= radius}
//   complement  {z : v(z - center) <= radius} together with the point at
//               infinity
// Both kinds keep a finite center; every membership, disjointness and image
// computation reduces to integer comparisons of valuations, so the results
// are exact, not approximate.

#include "mumford/padic.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mumford {

struct ProjPoint {
  PadicNumber x;
  PadicNumber y;

  static ProjPoint affine(const PadicNumber& z);
  static ProjPoint infinity(const PadicContext& ctx);
  static ProjPoint make(const PadicNumber& x, const PadicNumber& y);

  bool is_infinity() const { return y.is_zero(); }
  // Affine coordinate x/y; throws on the point at infinity.
  PadicNumber affine_coord() const { return x / y; }
};

// x_P y_Q - x_Q y_P; zero exactly when P = Q projectively.
PadicNumber cross_det(const ProjPoint& p, const ProjPoint& q);

// Projective equality up to valuation tol of the normalized determinant.
bool proj_eq(const ProjPoint& p, const ProjPoint& q, long tol);

// 2x2 matrix acting on the projective line, considered up to scalar.
struct MoebiusMap {
  PadicNumber a, b, c, d;

  static MoebiusMap identity(const PadicContext& ctx);
  MoebiusMap compose(const MoebiusMap& rhs) const;  // this after rhs
  MoebiusMap inverse() const;                       // adjugate
  ProjPoint apply(const ProjPoint& p) const;
  PadicNumber det() const;
  bool is_identity(long tol) const;
  // Scale entries by a power of p so the smallest valuation is zero.
  MoebiusMap normalized() const;
};

bool moebius_eq(const MoebiusMap& m, const MoebiusMap& n, long tol);

struct PBall {
  bool complement = false;
  PadicNumber center;
  long radius = 0;

  static PBall standard(const PadicNumber& center, long radius);
  static PBall complement_ball(const PadicNumber& center, long radius);
  std::string to_string() const;
};

bool ball_contains(const PBall& b, const ProjPoint& z);
bool balls_disjoint(const PBall& b1, const PBall& b2);
// Set complement: the complement of a ball is again a ball.
PBall ball_complement(const PBall& b);
bool ball_subset(const PBall& inner, const PBall& outer);
// Exact image of a ball under a Moebius map.
PBall moebius_image(const MoebiusMap& m, const PBall& b);

// Number of integer sphere levels separating nested balls inner within outer.
// Moebius invariant; additive along chains of nested balls. Throws Mismatch
// if inner is not contained in outer.
long ball_modulus(const PBall& inner, const PBall& outer);


}  // namespace mumford
