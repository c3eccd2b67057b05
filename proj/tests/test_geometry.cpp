#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mumford/geometry.hpp"

#include <random>

using namespace mumford;

namespace {

PadicNumber num(const PadicContext& ctx, long long n) {
  return PadicNumber::from_integer(ctx, n);
}

ProjPoint pt(const PadicContext& ctx, long long n) {
  return ProjPoint::affine(num(ctx, n));
}

struct Rng {
  const PadicContext& ctx;
  std::mt19937 gen{987};
  PadicNumber unit() {
    std::uniform_int_distribution<long long> d(1, ctx.prime() - 1);
    std::uniform_int_distribution<long long> d0(0, ctx.prime() - 1);
    BigInt u = d(gen);
    BigInt pk = 1;
    for (int i = 1; i < ctx.digits(); ++i) {
      pk *= ctx.prime();
      u += pk * d0(gen);
    }
    return PadicNumber::make(ctx, 0, u, ctx.digits());
  }
  PadicNumber value(int vmin = -2, int vmax = 2) {
    std::uniform_int_distribution<long> v(vmin, vmax);
    return unit() * PadicNumber::from_integer(ctx, ctx.prime()).pow(v(gen));
  }
  MoebiusMap map() {
    // random invertible matrix
    for (;;) {
      MoebiusMap m{value(), value(), value(), value()};
      if (!m.det().is_zero() && m.det().val() < 3) return m.normalized();
    }
  }
};

}  // namespace

TEST_CASE("membership basics") {
  PadicContext ctx(5, 12);
  PBall b = PBall::standard(num(ctx, 0), 1);
  CHECK(ball_contains(b, pt(ctx, 5)));
  CHECK(!ball_contains(b, pt(ctx, 1)));
  CHECK(!ball_contains(b, ProjPoint::infinity(ctx)));
  PBall c = PBall::complement_ball(num(ctx, 0), 0);
  CHECK(ball_contains(c, pt(ctx, 1)));
  CHECK(ball_contains(c, ProjPoint::infinity(ctx)));
  CHECK(!ball_contains(c, pt(ctx, 5)));
}

TEST_CASE("disjointness of unit-separated balls") {
  PadicContext ctx(5, 12);
  PBall b1 = PBall::standard(num(ctx, 1), 1);
  PBall b2 = PBall::standard(num(ctx, 2), 1);
  CHECK(balls_disjoint(b1, b2));
  PBall b3 = PBall::standard(num(ctx, 1 + 5), 1);
  CHECK(!balls_disjoint(b1, b3));
}

TEST_CASE("inversion maps the unit-scale ball around zero to a ball at infinity") {
  PadicContext ctx(5, 12);
  // z -> 1/z
  MoebiusMap inv{num(ctx, 0), num(ctx, 1), num(ctx, 1), num(ctx, 0)};
  PBall b = PBall::standard(num(ctx, 0), 1);
  PBall img = moebius_image(inv, b);
  CHECK(img.complement);
  CHECK(img.radius == -1);
  CHECK(eq_to_precision(img.center, num(ctx, 0), 10));
}

TEST_CASE("moebius_image respects membership including the boundary") {
  PadicContext ctx(5, 10);
  Rng rng{ctx};
  int rounds = 0;
  for (int i = 0; i < 120; ++i) {
    PadicNumber center = rng.value(-1, 1);
    long radius = static_cast<long>(i % 5) - 2;
    bool complement = (i % 2) == 0;
    PBall b = complement ? PBall::complement_ball(center, radius)
                         : PBall::standard(center, radius);
    MoebiusMap m = rng.map();
    PBall img;
    try {
      img = moebius_image(m, b);
    } catch (const Error&) {
      continue;  // degenerate configuration at working precision
    }
    ++rounds;
    PadicNumber pw = PadicNumber::from_integer(ctx, ctx.prime());
    // points on the boundary sphere, inside, and for complements infinity
    std::vector<ProjPoint> samples;
    samples.push_back(ProjPoint::affine(center + pw.pow(radius)));
    samples.push_back(ProjPoint::affine(center + pw.pow(radius) * num(ctx, 2)));
    if (!complement) {
      samples.push_back(ProjPoint::affine(center + pw.pow(radius + 2)));
      samples.push_back(ProjPoint::affine(center));
    } else {
      samples.push_back(ProjPoint::affine(center + pw.pow(radius - 2)));
      samples.push_back(ProjPoint::infinity(ctx));
    }
    for (const ProjPoint& z : samples) {
      if (!ball_contains(b, z)) continue;
      CHECK(ball_contains(img, m.apply(z)));
    }
  }
  CHECK(rounds > 60);
}

TEST_CASE("ball modulus is moebius invariant") {
  PadicContext ctx(5, 12);
  Rng rng{ctx};
  int done = 0;
  for (int i = 0; i < 150 && done < 60; ++i) {
    PadicNumber c1 = rng.value(-1, 1);
    long r1 = (i % 3) - 1;
    long gap = i % 4;
    PBall outer, inner;
    switch (i % 3) {
      case 0:
        outer = PBall::standard(c1, r1);
        inner = PBall::standard(c1 + PadicNumber::from_integer(ctx, ctx.prime()).pow(r1) * rng.unit(), r1 + gap);
        break;
      case 1:
        outer = PBall::complement_ball(c1, r1);
        inner = PBall::complement_ball(c1, r1 - gap);
        break;
      default:
        outer = PBall::complement_ball(c1, r1);
        inner = PBall::standard(
            c1 + PadicNumber::from_integer(ctx, ctx.prime()).pow(r1 - 1) * rng.unit(), r1 + gap);
        break;
    }
    if (!ball_subset(inner, outer)) continue;
    long m0 = ball_modulus(inner, outer);
    MoebiusMap m = rng.map();
    try {
      PBall io = moebius_image(m, inner);
      PBall oo = moebius_image(m, outer);
      CHECK(ball_subset(io, oo));
      CHECK(ball_modulus(io, oo) == m0);
      ++done;
    } catch (const Error&) {
      continue;
    }
  }
  CHECK(done == 60);
}

TEST_CASE("modulus is additive along nested chains") {
  PadicContext ctx(5, 12);
  PBall a = PBall::standard(num(ctx, 0), 4);
  PBall b = PBall::standard(num(ctx, 25), 2);
  PBall c = PBall::complement_ball(num(ctx, 3), 0);
  CHECK(ball_modulus(a, b) + ball_modulus(b, c) <= ball_modulus(a, c));
}

TEST_CASE("complement is an involution and flips containment") {
  PadicContext ctx(5, 12);
  PBall b = PBall::standard(num(ctx, 7), 2);
  PBall cc = ball_complement(ball_complement(b));
  CHECK(cc.complement == b.complement);
  CHECK(cc.radius == b.radius);
  CHECK(ball_subset(b, ball_complement(PBall::standard(num(ctx, 1), 2))));
}

TEST_CASE("projective point normalization and equality") {
  PadicContext ctx(5, 12);
  ProjPoint a = ProjPoint::make(num(ctx, 10), num(ctx, 2));
  ProjPoint b = pt(ctx, 5);
  CHECK(proj_eq(a, b, 10));
  CHECK(!proj_eq(a, pt(ctx, 6), 1));
  ProjPoint inf = ProjPoint::make(num(ctx, 3), PadicNumber::zero(ctx));
  CHECK(inf.is_infinity());
}

TEST_CASE("moebius composition and inverse") {
  PadicContext ctx(5, 12);
  Rng rng{ctx};
  for (int i = 0; i < 40; ++i) {
    MoebiusMap m = rng.map();
    MoebiusMap n = rng.map();
    ProjPoint z = pt(ctx, 3);
    ProjPoint lhs = m.compose(n).apply(z);
    ProjPoint rhs = m.apply(n.apply(z));
    CHECK(proj_eq(lhs, rhs, 6));
    CHECK(m.compose(m.inverse()).is_identity(6));
  }
}

TEST_CASE("membership below working precision is refused, not guessed") {
  PadicContext ctx(5, 12);
  PBall b = PBall::standard(num(ctx, 0), 5);
  ProjPoint fuzzy{PadicNumber::zero(ctx, 2), num(ctx, 1)};
  CHECK_THROWS_AS(ball_contains(b, fuzzy), Error);
}
