#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fixtures.hpp"
#include "mumford/lambda.hpp"

using namespace mumford;
using namespace mumford::testing;

TEST_CASE("partition pair validation") {
  CHECK_THROWS_AS(PartitionPair::make({1}, {1}, 1), Error);       // no difference
  CHECK_THROWS_AS(PartitionPair::make({3}, {2}, 1), Error);       // odd set side
  CHECK_THROWS_AS(PartitionPair::make({1, 2}, {1}, 2), Error);    // size mismatch
  PartitionPair pp = PartitionPair::make({1, 5}, {2, 5}, 2);
  CHECK(pp.l == 1);
  CHECK(pp.m == 2);
}

TEST_CASE("theta ratio vanishes at the zero label and rejects the pole label") {
  TateSetup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  PartitionPair pp = PartitionPair::make({1}, {2}, 1);
  ThetaRatio at_l = eval.theta_ratio_at(pp, 1);
  CHECK(at_l.exact_zero);
  try {
    eval.theta_ratio_at(pp, 2);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDenominator);
  }
}

TEST_CASE("theta ratio at a free label is finite, nonzero, and radius-stable") {
  TateSetup s;
  ThetaBundle b(s);
  PartitionPair pp = PartitionPair::make({1}, {2}, 1);
  LambdaEvaluator e8(b.table, 8);
  LambdaEvaluator e10(b.table, 10);
  ThetaRatio v8 = e8.theta_ratio_at(pp, 3);
  ThetaRatio v10 = e10.theta_ratio_at(pp, 3);
  CHECK(!v8.exact_zero);
  CHECK(!v8.value.is_zero());
  CHECK(eq_to_precision(v8.value, v10.value, v8.err_val));
}

TEST_CASE("cross ratio of equal labels is one and swapping poles inverts") {
  Genus2Setup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  PartitionPair pp = PartitionPair::make({1, 5}, {2, 5}, 2);
  ThetaRatio one = eval.cross_ratio(pp, 3, 3);
  CHECK(eq_to_precision(one.value, num(s.ctx, 1), 20));
  PartitionPair swapped = PartitionPair::make({2, 5}, {1, 5}, 2);
  ThetaRatio cr = eval.cross_ratio(pp, 3, 0);
  ThetaRatio rc = eval.cross_ratio(swapped, 3, 0);
  PadicNumber prod = cr.value * rc.value;
  CHECK(eq_to_precision(prod, num(s.ctx, 1), std::min(cr.err_val, rc.err_val) - 1));
}

TEST_CASE("both theta routes give the same cross ratio") {
  Genus2Setup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  for (int filler : {4, 5}) {
    BranchSubset p1{1}, p2{2};
    p1.insert(filler);
    p2.insert(filler);
    PartitionPair pp = PartitionPair::make(p1, p2, 2);
    std::vector<int> aux;
    for (int label = 0; label <= 5; ++label)
      if (!p1.count(label) && !p2.count(label)) aux.push_back(label);
    for (size_t i = 0; i < aux.size(); ++i)
      for (size_t j = 0; j < aux.size(); ++j) {
        if (i == j) continue;
        ThetaRatio a = eval.cross_ratio(pp, aux[i], aux[j]);
        ThetaRatio o = eval.cross_ratio_oddset(pp, aux[i], aux[j]);
        long tol = std::min(a.err_val, o.err_val) - 1;
        CHECK(tol >= 6);
        CHECK(eq_to_precision(a.value, o.value, tol));
      }
  }
}

TEST_CASE("cross ratio cocycle identity over three auxiliary labels") {
  Genus2Setup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  PartitionPair pp = PartitionPair::make({1, 5}, {2, 5}, 2);
  ThetaRatio ab = eval.cross_ratio(pp, 0, 3);
  ThetaRatio bc = eval.cross_ratio(pp, 3, 4);
  ThetaRatio ac = eval.cross_ratio(pp, 0, 4);
  PadicNumber lhs = ab.value * bc.value;
  long tol = std::min({ab.err_val, bc.err_val, ac.err_val}) - 1;
  CHECK(eq_to_precision(lhs, ac.value, tol));
}

TEST_CASE("partition independence of the cross ratio") {
  Genus2Setup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  // fixed differing pair (1, 2); the filler varies over the free labels
  std::vector<PadicNumber> values;
  long tol = kZeroCap;
  for (int filler : {4, 5}) {
    BranchSubset p1{1}, p2{2};
    p1.insert(filler);
    p2.insert(filler);
    PartitionPair pp = PartitionPair::make(p1, p2, 2);
    ThetaRatio cr = eval.cross_ratio(pp, 3, 0);
    values.push_back(cr.value);
    tol = std::min(tol, cr.err_val);
  }
  CHECK(eq_to_precision(values[0], values[1], tol - 2));
}

TEST_CASE("recovered coordinate for the rank-one curve") {
  TateSetup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  LambdaReport rep = recover_lambdas(eval);
  REQUIRE(rep.lambdas.size() == 1);
  const LambdaValue& lv = rep.lambdas[0];
  CHECK(lv.label == 3);
  CHECK(lv.derivations >= 2);
  CHECK(lv.spread >= 6);
  CHECK(rep.consistent);
  // magnitude sanity: the coordinate sits at distance |q|^(1/2) from one of
  // the normalized branch values
  PadicNumber lam = lv.value;
  PadicNumber one = num(s.ctx, 1);
  long v1 = std::abs(lam.val());
  long v2 = std::abs((lam - one).val());
  long sane = std::max(v1, v2);
  CHECK(sane >= 1);
  CHECK(sane <= 2);
}

TEST_CASE("recovered coordinates for the genus-two curve") {
  Genus2Setup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  LambdaReport rep = recover_lambdas(eval);
  REQUIRE(rep.lambdas.size() == 3);
  CHECK(rep.consistent);
  for (const LambdaValue& lv : rep.lambdas) {
    CHECK(lv.derivations >= 4);
    CHECK(lv.spread >= 6);
  }
  for (size_t i = 0; i < rep.lambdas.size(); ++i)
    for (size_t j = i + 1; j < rep.lambdas.size(); ++j) {
      PadicNumber diff = rep.lambdas[i].value - rep.lambdas[j].value;
      CHECK(!diff.is_zero());
    }
}

TEST_CASE("descent probe on both curves") {
  TateSetup t;
  Genus2Setup g;
  {
    ThetaBundle b(t);
    LambdaEvaluator eval(b.table, 8);
    ProbeReport rep = invariance_probe(t.engine, eval,
                                       default_probe_samples(t.engine, 10), 6);
    CHECK(rep.pass);
    int used = 0;
    for (const ProbeSample& ps : rep.samples)
      if (!ps.excluded) ++used;
    CHECK(used >= 10);
  }
  {
    ThetaBundle b(g);
    LambdaEvaluator eval(b.table, 8);
    ProbeReport rep = invariance_probe(g.engine, eval,
                                       default_probe_samples(g.engine, 10), 6);
    CHECK(rep.pass);
  }
}

TEST_CASE("probe at a branch point is excluded, not fatal") {
  TateSetup s;
  ThetaBundle b(s);
  LambdaEvaluator eval(b.table, 8);
  std::vector<ProjPoint> samples{s.group.branch_point(2)};
  ProbeReport rep = invariance_probe(s.engine, eval, samples, 6);
  REQUIRE(rep.samples.size() == 1);
  CHECK(rep.samples[0].excluded);
}

TEST_CASE("coordinates are stable under longer truncation and larger radius") {
  PadicContext ctx(5, 24);
  WhittakerGroup grp = tate_group(ctx);
  CertificateReport cert = ping_pong_certify(grp, tate_balls(ctx));
  PadicNumber lam[2];
  long err[2];
  int idx = 0;
  for (auto [len, radius] : {std::pair{14, 8}, std::pair{18, 10}}) {
    OrbitEngine eng(grp, cert, trunc(len, 6));
    PeriodMatrix q = eng.period_matrix();
    Character a1 = eng.embed_point(grp.branch_point(2), grp.branch_point(0));
    Polarization pol(q, {a1.values[0]}, {}, {a1.err[0]});
    CharacteristicTable table(pol, derive_branch_signs(pol, {a1}));
    LambdaEvaluator eval(table, radius);
    LambdaReport rep = recover_lambdas(eval);
    lam[idx] = rep.lambdas[0].value;
    err[idx] = rep.lambdas[0].err_val;
    ++idx;
  }
  CHECK(eq_to_precision(lam[0], lam[1], std::min(err[0], err[1]) - 2));
}
