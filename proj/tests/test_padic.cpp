#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "mumford/padic.hpp"

#include <random>

using namespace mumford;

namespace {

PadicNumber num(const PadicContext& ctx, long long n) {
  return PadicNumber::from_integer(ctx, n);
}

PadicNumber rat(const PadicContext& ctx, long long n, long long d) {
  return PadicNumber::from_rational(ctx, n, d);
}

// Deterministic random nonzero values for property checks.
struct Sampler {
  const PadicContext& ctx;
  std::mt19937 rng{12345};
  PadicNumber next() {
    std::uniform_int_distribution<long> val(-3, 3);
    std::uniform_int_distribution<long long> digit(0, ctx.prime() - 1);
    BigInt u = 1 + digit(rng) % (ctx.prime() - 1);
    BigInt pk = 1;
    for (int i = 1; i < ctx.digits(); ++i) {
      pk *= ctx.prime();
      u += pk * digit(rng);
    }
    return PadicNumber::make(ctx, val(rng), u, ctx.digits());
  }
};

}  // namespace

TEST_CASE("integer addition with carry") {
  PadicContext ctx(5, 8);
  PadicNumber s = num(ctx, 2) + num(ctx, 3);
  CHECK(s.val() == 1);
  CHECK(s.unit() == 1);
}

TEST_CASE("cancellation costs exactly the cancelled digits") {
  PadicContext ctx(5, 8);
  PadicNumber a = num(ctx, 1 + 5);
  PadicNumber b = num(ctx, 1);
  PadicNumber d = a - b;
  CHECK(d.val() == 1);
  CHECK(d.unit() == 1);
  CHECK(d.prec() == 7);
}

TEST_CASE("valuations add under multiplication") {
  PadicContext ctx(5, 8);
  PadicNumber x = num(ctx, 2 * 125);
  PadicNumber y = rat(ctx, 3, 5);
  PadicNumber z = x * y;
  CHECK(z.val() == 2);
  CHECK(z.unit() % 25 == 6);
}

TEST_CASE("ultrametric inequality on random samples") {
  PadicContext ctx(7, 10);
  Sampler s{ctx};
  for (int i = 0; i < 200; ++i) {
    PadicNumber x = s.next();
    PadicNumber y = s.next();
    PadicNumber sum = x + y;
    CHECK(sum.val_floor() >= std::min(x.val(), y.val()));
    if (x.val() != y.val()) CHECK(sum.val() == std::min(x.val(), y.val()));
    CHECK((x * y).val() == x.val() + y.val());
  }
}

TEST_CASE("sqrt of a perfect square") {
  PadicContext ctx(5, 8);
  PadicNumber r = sqrt(num(ctx, 4));
  CHECK(r.val() == 0);
  CHECK(r.unit() == 2);
}

TEST_CASE("sqrt of -1 over Q_5 by lifting") {
  PadicContext ctx(5, 8);
  PadicNumber r = sqrt(num(ctx, -1));
  // canonical branch starts with digit 2, then 1, then 2
  CHECK(r.leading_digit() == 2);
  CHECK(r.unit() % 125 == 2 + 5 + 2 * 25);
  CHECK(eq_to_precision(r * r, num(ctx, -1), 8));
}

TEST_CASE("sqrt errors") {
  PadicContext ctx(5, 8);
  CHECK_THROWS_AS(sqrt(num(ctx, 5)), Error);   // odd valuation
  CHECK_THROWS_AS(sqrt(num(ctx, 2)), Error);   // non-residue
  try {
    sqrt(num(ctx, 5));
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSquare);
  }
}

TEST_CASE("square of sqrt matches to reported precision on samples") {
  PadicContext ctx(13, 9);
  Sampler s{ctx};
  int done = 0;
  for (int i = 0; i < 400 && done < 60; ++i) {
    PadicNumber x = s.next();
    PadicNumber sq = x * x;
    PadicNumber r = sqrt(sq);
    CHECK(eq_to_precision(r * r, sq, sq.val() + r.prec()));
    CHECK(r.leading_digit() <= (13 - 1) / 2);
    ++done;
  }
  CHECK(done == 60);
}

TEST_CASE("eq_to_precision") {
  PadicContext ctx(5, 12);
  PadicNumber one = num(ctx, 1);
  PadicNumber y = num(ctx, 1) + num(ctx, 5).pow(10);
  CHECK(eq_to_precision(one, y, 8));
  CHECK(!eq_to_precision(one, num(ctx, 2), 1));
  PadicNumber z8 = PadicNumber::zero(ctx, 8);
  CHECK(eq_to_precision(z8, num(ctx, 5).pow(9), 8));
}

TEST_CASE("division and errors") {
  PadicContext ctx(5, 8);
  PadicNumber q = num(ctx, 6) / num(ctx, 2);
  CHECK(q.val() == 0);
  CHECK(q.unit() == 3);
  CHECK_THROWS_AS(num(ctx, 1) / PadicNumber::zero(ctx, 4), Error);
  // dividing zero-to-precision by a unit stays a sound zero marker
  PadicNumber z = PadicNumber::zero(ctx, 6) / num(ctx, 25);
  CHECK(z.is_zero());
  CHECK(z.val_floor() == 4);
}

TEST_CASE("negative powers") {
  PadicContext ctx(5, 8);
  PadicNumber x = rat(ctx, 25, 3);
  PadicNumber y = x.pow(-2);
  CHECK(y.val() == -4);
  CHECK(eq_to_precision(y * x * x, num(ctx, 1), 4));
}

TEST_CASE("serialization round-trips exactly") {
  PadicContext ctx(5, 10);
  Sampler s{ctx};
  for (int i = 0; i < 50; ++i) {
    PadicNumber x = s.next();
    PadicNumber back = PadicNumber::parse(ctx, x.to_string());
    CHECK(!back.is_zero());
    CHECK(back.val() == x.val());
    CHECK(back.prec() == x.prec());
    CHECK(back.unit() == x.unit());
  }
  PadicNumber z = PadicNumber::zero(ctx, 7);
  PadicNumber zback = PadicNumber::parse(ctx, z.to_string());
  CHECK(zback.is_zero());
  CHECK(zback.val_floor() == 7);
}

TEST_CASE("serialized text form") {
  PadicContext ctx(5, 4);
  PadicNumber x = PadicNumber::make(ctx, -2, 2 + 3 * 5 + 4 * 125, 4);
  CHECK(x.to_string() == "5^-2 * (2 + 3*5 + 0*5^2 + 4*5^3) + O(5^2)");
}

TEST_CASE("rational parsing") {
  Rational r = parse_rational("-3/7");
  CHECK(r.num == -3);
  CHECK(r.den == 7);
  CHECK(parse_rational("inf").infinite());
  CHECK(parse_rational("12").num == 12);
}
