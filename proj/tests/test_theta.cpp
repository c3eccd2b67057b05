#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "mumford/theta.hpp"

#include <random>

using namespace mumford;
using namespace mumford::testing;

namespace {

// Synthetic period matrices for error-path tests.
PeriodMatrix synthetic(const PadicContext& ctx, std::vector<std::vector<long long>> q) {
  PeriodMatrix pm;
  pm.g = static_cast<int>(q.size());
  for (int i = 0; i < pm.g; ++i) {
    pm.q.emplace_back();
    pm.err.emplace_back();
    for (int j = 0; j < pm.g; ++j) {
      pm.q[i].push_back(PadicNumber::from_integer(ctx, q[i][j]));
      pm.err[i].push_back(kZeroCap);
    }
  }
  pm.val.assign(pm.g, std::vector<long>(pm.g));
  for (int i = 0; i < pm.g; ++i)
    for (int j = 0; j < pm.g; ++j) pm.val[i][j] = pm.q[i][j].val();
  return pm;
}

Character random_character(const PadicContext& ctx, int g, std::mt19937& rng) {
  std::uniform_int_distribution<long> val(-1, 1);
  std::uniform_int_distribution<long long> digit(0, ctx.prime() - 1);
  Character c;
  for (int i = 0; i < g; ++i) {
    BigInt u = 1 + digit(rng) % (ctx.prime() - 1);
    BigInt pk = 1;
    for (int d = 1; d < ctx.digits(); ++d) {
      pk *= ctx.prime();
      u += pk * digit(rng);
    }
    PadicNumber x = PadicNumber::make(ctx, val(rng), u, ctx.digits());
    c.values.push_back(x);
    c.err.push_back(x.abs_prec());
  }
  return c;
}

}  // namespace

TEST_CASE("tate polarization diagonal squares to the period") {
  TateSetup s;
  ThetaBundle b(s);
  CHECK(b.pol.p(0, 0).val() == 1);
  CHECK(eq_to_precision(b.pol.p(0, 0) * b.pol.p(0, 0), b.Q.q[0][0], 10));
}

TEST_CASE("diag mismatch raises") {
  TateSetup s;
  ThetaBundle b(s);
  std::vector<PadicNumber> bad{b.pol.p(0, 0) * num(s.ctx, 2)};
  CHECK_THROWS_AS(Polarization(b.Q, bad), Error);
}

TEST_CASE("negated diagonal is a valid polarization that swaps the zero set") {
  TateSetup s;
  ThetaBundle b(s);
  std::vector<PadicNumber> flipped{-b.pol.p(0, 0)};
  Polarization pol2(b.Q, flipped);  // no DiagMismatch: both roots square to Q
  BranchSigns plain{{{1}}};
  CharacteristicTable table2(pol2, plain);
  // the table built over the flipped diagonal calls the true a_1 image "b_1"
  FactoredCharacter b1 = table2.point_character(3);
  Character c = b1.to_character(pol2);
  CHECK(eq_to_precision(c.values[0], b.a_embeds[0].values[0], 8));
  ThetaValue t = theta_value(b1, pol2, 8);
  CHECK(t.exact_zero);
}

TEST_CASE("odd off-diagonal valuation has no square root") {
  PadicContext ctx(5, 12);
  PeriodMatrix pm = synthetic(ctx, {{25, 5}, {5, 25}});
  std::vector<PadicNumber> diag{PadicNumber::from_integer(ctx, 5),
                                PadicNumber::from_integer(ctx, 5)};
  try {
    Polarization pol(pm, diag);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSquare);
  }
}

TEST_CASE("indefinite valuation matrix refuses to sum") {
  PadicContext ctx(5, 12);
  PeriodMatrix pm = synthetic(ctx, {{25, 625}, {625, 25}});
  std::vector<PadicNumber> diag{PadicNumber::from_integer(ctx, 5),
                                PadicNumber::from_integer(ctx, 5)};
  Polarization pol(pm, diag);
  Character id;
  for (int i = 0; i < 2; ++i) {
    id.values.push_back(PadicNumber::from_integer(ctx, 1));
    id.err.push_back(kZeroCap);
  }
  ThetaOptions opts;
  try {
    theta_value(id, pol, opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Divergent);
  }
}

TEST_CASE("lattice character and cocycle basics") {
  TateSetup s;
  ThetaBundle b(s);
  Character l0 = lattice_character({0}, b.Q);
  CHECK(eq_to_precision(l0.values[0], num(s.ctx, 1), 12));
  Character l1 = lattice_character({1}, b.Q);
  CHECK(eq_to_precision(l1.values[0], b.Q.q[0][0], 10));
  Character id;
  id.values.push_back(num(s.ctx, 1));
  id.err.push_back(kZeroCap);
  CHECK(eq_to_precision(cocycle({0}, id, b.pol), num(s.ctx, 1), 12));
  Character c;
  c.values.push_back(num(s.ctx, 7));
  c.err.push_back(kZeroCap);
  PadicNumber x = cocycle({1}, c, b.pol);
  CHECK(eq_to_precision(x, b.pol.p(0, 0) * num(s.ctx, 7), 10));
}

TEST_CASE("cocycle composition identity") {
  Genus2Setup s;
  ThetaBundle b(s);
  std::mt19937 rng(7);
  for (int round = 0; round < 10; ++round) {
    Character c = random_character(s.ctx, 2, rng);
    std::uniform_int_distribution<long> pick(-2, 2);
    LatticePoint n{pick(rng), pick(rng)};
    LatticePoint m{pick(rng), pick(rng)};
    LatticePoint nm{n[0] + m[0], n[1] + m[1]};
    PadicNumber lhs = cocycle(nm, c, b.pol);
    Character shifted = lattice_character(m, b.Q).mul(c);
    PadicNumber rhs = cocycle(n, shifted, b.pol) * cocycle(m, c, b.pol);
    CHECK(eq_to_precision(lhs, rhs, 12));
  }
}

TEST_CASE("theta at the identity character has leading term one") {
  for (int which = 0; which < 2; ++which) {
    PadicContext ctx(5, 24);
    WhittakerGroup grp = which == 0 ? tate_group(ctx) : genus2_group(ctx);
    CertificateReport cert =
        ping_pong_certify(grp, which == 0 ? tate_balls(ctx) : default_balls(grp));
    OrbitEngine eng(grp, cert, trunc(14, 6));
    // full bundle by hand to reuse the generic path
    std::vector<Character> a_embeds;
    for (int i = 1; i <= grp.genus(); ++i)
      a_embeds.push_back(eng.embed_point(grp.branch_point(2 * i), grp.branch_point(0)));
    std::vector<PadicNumber> diag;
    for (int i = 0; i < grp.genus(); ++i) diag.push_back(a_embeds[i].values[i]);
    PeriodMatrix Q = eng.period_matrix();
    Polarization pol(Q, diag);
    Character id;
    for (int i = 0; i < grp.genus(); ++i) {
      id.values.push_back(num(ctx, 1));
      id.err.push_back(kZeroCap);
    }
    ThetaOptions opts;
    ThetaValue t = theta_value(id, pol, opts);
    CHECK(!t.value.is_zero());
    CHECK(t.value.val() == 0);
    PadicNumber dev = t.value - num(ctx, 1);
    CHECK(dev.val_floor() >= 1);
    CHECK(t.err_val >= 15);
  }
}

TEST_CASE("theta vanishes exactly at the degree-one zero character") {
  TateSetup s;
  ThetaBundle b(s);
  FactoredCharacter b1 = b.table.point_character(3);
  ThetaValue t = theta_value(b1, b.pol, 8);
  CHECK(t.exact_zero);
  // numeric route with the pairing shift agrees to its own error bound
  Character c = b1.to_character(b.pol);
  ThetaOptions opts;
  opts.pair_shift = LatticePoint{1};
  ThetaValue tn = theta_value(c, b.pol, opts);
  CHECK(tn.value.val_floor() >= tn.err_val);
}

TEST_CASE("theta is even") {
  Genus2Setup s;
  ThetaBundle b(s);
  std::mt19937 rng(99);
  ThetaOptions opts;
  for (int round = 0; round < 8; ++round) {
    Character c = random_character(s.ctx, 2, rng);
    ThetaValue t1 = theta_value(c, b.pol, opts);
    ThetaValue t2 = theta_value(c.inv(), b.pol, opts);
    long tol = std::min({t1.err_val, t2.err_val,
                         t1.value.abs_prec(), t2.value.abs_prec()});
    CHECK(eq_to_precision(t1.value, t2.value, tol));
  }
}

TEST_CASE("quasi-periodicity under lattice shifts") {
  Genus2Setup s;
  ThetaBundle b(s);
  std::mt19937 rng(5);
  for (int round = 0; round < 6; ++round) {
    Character c = random_character(s.ctx, 2, rng);
    for (long n1 = -2; n1 <= 2; ++n1)
      for (long n2 = -2; n2 <= 2; ++n2) {
        if (n1 == 0 && n2 == 0) continue;
        LatticePoint n{n1, n2};
        ThetaOptions opts;
        opts.radius = 8;
        ThetaValue lhs = theta_value(b.pol.lattice_character(n).mul(c), b.pol, opts);
        ThetaValue rhs = theta_value(c, b.pol, opts);
        PadicNumber expect = rhs.value / cocycle(n, c, b.pol);
        ThetaOptions small;
        small.radius = 8 - static_cast<int>(std::max(std::abs(n1), std::abs(n2)));
        ThetaValue margin = theta_value(c, b.pol, small);
        long tol = std::min({margin.err_val, lhs.value.abs_prec(), expect.abs_prec()});
        CHECK(eq_to_precision(lhs.value, expect, tol));
      }
  }
}

TEST_CASE("truncation error shrinks as the radius grows") {
  Genus2Setup s;
  ThetaBundle b(s);
  std::mt19937 rng(3);
  Character c = random_character(s.ctx, 2, rng);
  ThetaOptions r8;
  r8.radius = 8;
  ThetaOptions r6;
  r6.radius = 6;
  ThetaValue t8 = theta_value(c, b.pol, r8);
  ThetaValue t6 = theta_value(c, b.pol, r6);
  CHECK(t8.err_val >= t6.err_val);
  PadicNumber diff = t8.value - t6.value;
  CHECK(diff.val_floor() >= t6.err_val);
}

TEST_CASE("factored characters expose their lattice square") {
  Genus2Setup s;
  ThetaBundle b(s);
  FactoredCharacter a1 = b.table.point_character(2);
  auto n = a1.square_lattice_point();
  REQUIRE(n.has_value());
  CHECK(*n == LatticePoint{1, 0});
  FactoredCharacter prod = a1.mul(b.table.point_character(5));
  auto n2 = prod.square_lattice_point();
  REQUIRE(n2.has_value());
  CHECK(*n2 == LatticePoint{1, 1});
}
