#include "mumford/lambda.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace mumford {

namespace {

// Error valuation of a product from the factors' values and error valuations.
long err_mul(const PadicNumber& a, long ea, const PadicNumber& b, long eb) {
  return std::min(ea + b.val(), eb + a.val());
}

long err_div(const PadicNumber& a, long ea, const PadicNumber& b, long eb) {
  return std::min(ea + b.val(), eb + a.val()) - 2 * b.val();
}

long err_sq(const PadicNumber& a, long ea) { return ea + a.val(); }

}  // namespace

PartitionPair PartitionPair::make(BranchSubset p1, BranchSubset p2, int genus) {
  PartitionPair pp;
  pp.p1 = std::move(p1);
  pp.p2 = std::move(p2);
  if (pp.p1.size() != pp.p2.size() ||
      static_cast<int>(pp.p1.size()) != genus)
    fail(ErrorKind::SpecError, "partition sides must both have size g");
  BranchSubset diff = symmetric_difference(pp.p1, pp.p2);
  if (diff.size() != 2)
    fail(ErrorKind::SpecError, "partitions must differ in exactly one element");
  for (int label : diff) {
    if (pp.p1.count(label))
      pp.l = label;
    else
      pp.m = label;
  }
  BranchSubset odd;
  for (int k = 1; k <= genus; ++k) odd.insert(2 * k + 1);
  if (pp.p1 == odd || pp.p2 == odd)
    fail(ErrorKind::SpecError, "partition equal to the excluded odd set");
  return pp;
}

LambdaEvaluator::LambdaEvaluator(const CharacteristicTable& table, int radius)
    : table_(&table), radius_(radius) {}

FactoredCharacter LambdaEvaluator::shifted_argument(const BranchSubset& p) const {
  return table_->riemann_constant().mul(table_->subset_character(p).inv());
}

LatticePoint LambdaEvaluator::monomial_exponent(const PartitionPair& pp) const {
  auto nl = table_->point_character(pp.l).square_lattice_point();
  auto nm = table_->point_character(pp.m).square_lattice_point();
  if (!nl || !nm)
    fail(ErrorKind::SpecError, "partition labels without lattice squares");
  LatticePoint d(genus(), 0);
  for (int i = 0; i < genus(); ++i) d[i] = (*nl)[i] - (*nm)[i];
  return d;
}

ThetaRatio LambdaEvaluator::ratio_from(const FactoredCharacter& c,
                                       const PartitionPair& pp) const {
  const Polarization& pol = table_->polarization();
  FactoredCharacter arg1 = c.mul(shifted_argument(pp.p1));
  FactoredCharacter arg2 = c.mul(shifted_argument(pp.p2));
  ThetaValue t1 = theta_value(arg1, pol, radius_);
  ThetaValue t2 = theta_value(arg2, pol, radius_);
  if (t2.exact_zero || t2.value.is_zero())
    fail(ErrorKind::ZeroDenominator,
         "denominator theta vanishes at this argument");
  LatticePoint d = monomial_exponent(pp);
  ThetaRatio out;
  if (t1.exact_zero) {
    out.value = PadicNumber::zero(pol.p(0, 0).ctx(), kZeroCap);
    out.err_val = kZeroCap;
    out.exact_zero = true;
    return out;
  }
  LatticePoint dneg(genus(), 0);
  for (int i = 0; i < genus(); ++i) dneg[i] = -d[i];
  PadicNumber corr = c.eval_lattice_word(dneg).value(pol);
  PadicNumber num = t1.value * t1.value;
  PadicNumber den = t2.value * t2.value;
  long enum_ = err_sq(t1.value, t1.err_val);
  long eden = err_sq(t2.value, t2.err_val);
  out.value = corr * (num / den);
  out.err_val = err_mul(corr, corr.abs_prec(), num / den, err_div(num, enum_, den, eden));
  out.err_val = std::min(out.err_val, out.value.abs_prec());
  return out;
}

ThetaRatio LambdaEvaluator::theta_ratio_at(const PartitionPair& pp,
                                           int eval_label) const {
  return ratio_from(table_->point_character(eval_label), pp);
}

ThetaRatio LambdaEvaluator::theta_ratio_at_character(const PartitionPair& pp,
                                                     const Character& c) const {
  const Polarization& pol = table_->polarization();
  Character arg1 = c.mul(shifted_argument(pp.p1).to_character(pol));
  Character arg2 = c.mul(shifted_argument(pp.p2).to_character(pol));
  ThetaOptions opts;
  opts.radius = radius_;
  ThetaValue t1 = theta_value(arg1, pol, opts);
  ThetaValue t2 = theta_value(arg2, pol, opts);
  if (t2.value.is_zero())
    fail(ErrorKind::ZeroDenominator,
         "denominator theta vanishes at this argument");
  LatticePoint d = monomial_exponent(pp);
  PadicNumber corr = PadicNumber::from_integer(c.values[0].ctx(), 1);
  long ecorr = kZeroCap;
  for (int i = 0; i < genus(); ++i) {
    if (d[i] == 0) continue;
    corr = corr * c.values[i].pow(-d[i]);
    ecorr = std::min(ecorr, c.err[i] - c.values[i].val());
  }
  ThetaRatio out;
  if (t1.value.is_zero()) {
    out.value = t1.value;
    out.err_val = t1.err_val;
    return out;
  }
  PadicNumber num = t1.value * t1.value;
  PadicNumber den = t2.value * t2.value;
  long enum_ = err_sq(t1.value, t1.err_val);
  long eden = err_sq(t2.value, t2.err_val);
  out.value = corr * (num / den);
  out.err_val = std::min({err_mul(corr, ecorr + corr.val(), num / den,
                                  err_div(num, enum_, den, eden)),
                          out.value.abs_prec()});
  return out;
}

ThetaRatio LambdaEvaluator::cross_ratio(const PartitionPair& pp, int h, int k) const {
  const PadicContext& ctx = table_->polarization().p(0, 0).ctx();
  if (h == k) {
    ThetaRatio one;
    one.value = PadicNumber::from_integer(ctx, 1);
    one.err_val = kZeroCap;
    return one;
  }
  for (int label : {h, k})
    if (pp.p1.count(label) || pp.p2.count(label))
      fail(ErrorKind::SpecError, "auxiliary labels must avoid both partitions");
  ThetaRatio gh = theta_ratio_at(pp, h);
  ThetaRatio gk = theta_ratio_at(pp, k);
  if (gk.exact_zero || gk.value.is_zero())
    fail(ErrorKind::ZeroDenominator, "cross ratio denominator vanished");
  ThetaRatio out;
  if (gh.exact_zero) {
    out = gh;
    return out;
  }
  out.value = gh.value / gk.value;
  out.err_val = std::min(err_div(gh.value, gh.err_val, gk.value, gk.err_val),
                         out.value.abs_prec());
  return out;
}

ThetaRatio LambdaEvaluator::cross_ratio_oddset(const PartitionPair& pp, int h,
                                               int k) const {
  const Polarization& pol = table_->polarization();
  const PadicContext& ctx = pol.p(0, 0).ctx();
  if (h == k) {
    ThetaRatio one;
    one.value = PadicNumber::from_integer(ctx, 1);
    one.err_val = kZeroCap;
    return one;
  }
  for (int label : {h, k})
    if (pp.p1.count(label) || pp.p2.count(label))
      fail(ErrorKind::SpecError, "auxiliary labels must avoid both partitions");
  // For each side i and evaluation label x: the odd-set character equals the
  // direct argument char(x) * K / char(P_i) up to an exact lattice shift, so
  // one cocycle factor converts the theta value there into the one the
  // quotient needs. The four squared thetas then assemble the cross ratio.
  const std::array<const BranchSubset*, 2> parts{&pp.p1, &pp.p2};
  PadicNumber g[2][2];  // [side i][x: 0 = h, 1 = k]
  long ge[2][2];
  for (int i = 0; i < 2; ++i)
    for (int xi = 0; xi < 2; ++xi) {
      int x = xi == 0 ? h : k;
      FactoredCharacter arg =
          table_->point_character(x).mul(shifted_argument(*parts[i]));
      FactoredCharacter odd = table_->odd_set_character(*parts[i], x);
      FactoredCharacter shift = odd.mul(arg.inv());
      auto n = shift.lattice_vector();
      if (!n)
        fail(ErrorKind::Mismatch,
             "odd-set character is not a lattice shift of the direct argument");
      ThetaValue tv = theta_value(odd, pol, radius_);
      if (tv.exact_zero || tv.value.is_zero())
        fail(ErrorKind::ZeroDenominator,
             "odd-set theta vanished; partition choice rejected");
      // theta(arg) = xi_n(arg) * theta(arg * lattice(n)) = xi_n(arg) * theta(odd)
      FactoredUnit pnn;
      for (int a = 0; a < genus(); ++a)
        for (int b = a; b < genus(); ++b) {
          long e = (a == b) ? (*n)[a] * (*n)[a] : 2 * (*n)[a] * (*n)[b];
          if (e != 0) pnn.exp[{a, b}] = e;
        }
      PadicNumber factor = pnn.value(pol) * arg.eval_lattice_word(*n).value(pol);
      g[i][xi] = factor * tv.value;
      ge[i][xi] = std::min(err_mul(factor, factor.abs_prec(), tv.value, tv.err_val),
                           g[i][xi].abs_prec());
    }
  LatticePoint d = monomial_exponent(pp);
  LatticePoint dneg(genus(), 0);
  for (int i = 0; i < genus(); ++i) dneg[i] = -d[i];
  PadicNumber ch = table_->point_character(h).eval_lattice_word(dneg).value(pol);
  PadicNumber ck = table_->point_character(k).eval_lattice_word(dneg).value(pol);
  PadicNumber num = ch * g[0][0] * g[0][0] * g[1][1] * g[1][1];
  PadicNumber den = ck * g[1][0] * g[1][0] * g[0][1] * g[0][1];
  ThetaRatio out;
  out.value = num / den;
  long en = std::min({ge[0][0] + g[0][0].val() + 2 * g[1][1].val() + ch.val(),
                      ge[1][1] + g[1][1].val() + 2 * g[0][0].val() + ch.val()});
  long ed = std::min({ge[1][0] + g[1][0].val() + 2 * g[0][1].val() + ck.val(),
                      ge[0][1] + g[0][1].val() + 2 * g[1][0].val() + ck.val()});
  out.err_val = std::min(err_div(num, en, den, ed), out.value.abs_prec());
  return out;
}

namespace {

// lambda = t / (t - 1) maps the cross ratio with the normalization labels to
// the coordinate; the swapped partition produces 1/t and the same lambda.
PadicNumber lambda_from_ratio(const PadicNumber& t, bool swapped) {
  const PadicContext& ctx = t.ctx();
  PadicNumber one = PadicNumber::from_integer(ctx, 1);
  if (!swapped) return t / (t - one);
  return one / (one - t);
}

}  // namespace

LambdaReport recover_lambdas(const LambdaEvaluator& eval,
                             std::array<int, 3> normalization,
                             long safety_margin) {
  const CharacteristicTable& table = eval.table();
  int g = table.genus();
  const PadicContext& ctx = table.polarization().p(0, 0).ctx();
  int linf = normalization[0], l0 = normalization[1], l1 = normalization[2];
  std::vector<int> free_labels;
  for (int label = 0; label <= 2 * g + 1; ++label)
    if (label != linf && label != l0 && label != l1) free_labels.push_back(label);
  if (static_cast<int>(free_labels.size()) != 2 * g - 1)
    fail(ErrorKind::SpecError, "normalization labels must be three distinct labels");
  LambdaReport report;
  report.normalization = normalization;
  for (int f : free_labels) {
    // fillers: subsets of the other free labels completing the partitions
    std::vector<BranchSubset> fillers;
    std::vector<int> pool;
    for (int other : free_labels)
      if (other != f) pool.push_back(other);
    std::vector<int> comb;
    std::function<void(size_t, int)> rec = [&](size_t start, int need) {
      if (need == 0) {
        fillers.emplace_back(comb.begin(), comb.end());
        return;
      }
      for (size_t i = start; i < pool.size(); ++i) {
        comb.push_back(pool[i]);
        rec(i + 1, need - 1);
        comb.pop_back();
      }
    };
    rec(0, g - 1);
    std::vector<std::pair<PadicNumber, long>> candidates;
    for (const BranchSubset& s : fillers) {
      for (int swap = 0; swap < 2; ++swap) {
        BranchSubset p1 = s, p2 = s;
        p1.insert(swap == 0 ? l0 : l1);
        p2.insert(swap == 0 ? l1 : l0);
        PartitionPair pp;
        try {
          pp = PartitionPair::make(p1, p2, g);
        } catch (const Error&) {
          continue;  // excluded odd set
        }
        for (int route = 0; route < 2; ++route) {
          ThetaRatio t;
          try {
            t = route == 0 ? eval.cross_ratio(pp, f, linf)
                           : eval.cross_ratio_oddset(pp, f, linf);
          } catch (const Error& e) {
            if (e.kind() == ErrorKind::ZeroDenominator) continue;
            throw;
          }
          PadicNumber lam = lambda_from_ratio(t.value, swap == 1);
          long err = std::min(t.err_val - 2 * (t.value - PadicNumber::from_integer(ctx, 1)).val_floor(),
                              lam.abs_prec());
          candidates.emplace_back(lam, err);
        }
      }
    }
    if (candidates.size() < 2)
      fail(ErrorKind::InconsistentDerivations,
           "fewer than two independent derivations available");
    long spread = kZeroCap;
    long combined = kZeroCap;
    for (size_t i = 0; i < candidates.size(); ++i)
      for (size_t j = i + 1; j < candidates.size(); ++j) {
        PadicNumber diff = candidates[i].first - candidates[j].first;
        spread = std::min(spread, diff.val_floor());
        combined = std::min(combined,
                            std::min(candidates[i].second, candidates[j].second));
      }
    if (spread < combined - safety_margin) {
      std::ostringstream msg;
      msg << "derivations of the coordinate for label " << f
          << " agree only to valuation " << spread << " (bound " << combined << ")";
      fail(ErrorKind::InconsistentDerivations, msg.str());
    }
    LambdaValue lv;
    lv.label = f;
    lv.value = candidates[0].first;
    lv.err_val = combined;
    lv.derivations = static_cast<int>(candidates.size());
    lv.spread = spread;
    report.lambdas.push_back(lv);
  }
  // coordinates must avoid 0 and 1 and be pairwise distinct
  PadicNumber one = PadicNumber::from_integer(ctx, 1);
  for (const LambdaValue& lv : report.lambdas) {
    if (lv.value.is_zero() || (lv.value - one).is_zero()) report.consistent = false;
  }
  for (size_t i = 0; i < report.lambdas.size(); ++i)
    for (size_t j = i + 1; j < report.lambdas.size(); ++j) {
      PadicNumber diff = report.lambdas[i].value - report.lambdas[j].value;
      if (diff.is_zero()) report.consistent = false;
    }
  return report;
}

std::vector<ProjPoint> default_probe_samples(const OrbitEngine& engine, int count) {
  std::vector<ProjPoint> out;
  int skip = 3;  // past the probes and the period base point
  while (static_cast<int>(out.size()) < count)
    out.push_back(engine.pick_probe(skip++));
  return out;
}

ProbeReport invariance_probe(const OrbitEngine& engine, const LambdaEvaluator& eval,
                             const std::vector<ProjPoint>& samples, long tolerance) {
  const WhittakerGroup& grp = engine.group();
  int g = grp.genus();
  const PadicContext& ctx = grp.ctx();
  // first admissible partition pair: fill with the highest labels, differing
  // in the normalization pair 1 / 2
  BranchSubset filler;
  for (int label = 2 * g + 1; static_cast<int>(filler.size()) < g - 1; --label)
    if (label > 2) filler.insert(label);
  BranchSubset p1 = filler, p2 = filler;
  p1.insert(1);
  p2.insert(2);
  PartitionPair pp = PartitionPair::make(p1, p2, g);
  ProjPoint base = grp.branch_point(0);
  ProbeReport report;
  report.tolerance = tolerance;
  report.pass = true;
  for (const ProjPoint& z : samples) {
    ProbeSample ps;
    ps.z = z;
    try {
      Character tz = engine.embed_point(z, base);
      ThetaRatio gz = eval.theta_ratio_at_character(pp, tz);
      for (int i = 1; i <= g; ++i) {
        ProjPoint zi = grp.element_of(grp.free_generator(i)).apply(z);
        Character tzi = engine.embed_point(zi, base, 2);
        ThetaRatio gzi = eval.theta_ratio_at_character(pp, tzi);
        PadicNumber ratio = gzi.value / gz.value;
        long agree = (ratio - PadicNumber::from_integer(ctx, 1)).val_floor();
        ps.generator_agreement.push_back(agree);
        if (agree < tolerance) report.pass = false;
      }
      ProjPoint zs = grp.involution(0).apply(z);
      Character tzs = engine.embed_point(zs, base, 1);
      ThetaRatio gzs = eval.theta_ratio_at_character(pp, tzs);
      PadicNumber ratio = gzs.value / gz.value;
      ps.involution_agreement = (ratio - PadicNumber::from_integer(ctx, 1)).val_floor();
      if (ps.involution_agreement < tolerance) report.pass = false;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::PoleHit || e.kind() == ErrorKind::ZeroDenominator) {
        ps.excluded = true;
      } else {
        throw;
      }
    }
    report.samples.push_back(ps);
  }
  return report;
}

}  // namespace mumford
