#pragma once
// The theta-quotient cross ratios of branch points and the recovery of the
// normalized branch coordinates, plus the descent probe that checks the
// quotient really is a function of the degree-two coordinate.
//
// For a partition pair (P1, P2) of size g differing in the labels l, m the
// quotient
//   G(c) = c^{-d} * theta(c * K / char(P1))^2 / theta(c * K / char(P2))^2
// with d the difference of the lattice squares of char(l) and char(m) is
// invariant under the period lattice (the monomial factor cancels the
// cocycles), so it descends to the curve and is proportional to
// (x - lambda_l)/(x - lambda_m). Ratios of G at two further branch points
// eliminate the constant and give the cross ratio.

#include "mumford/characteristics.hpp"

#include <array>
#include <optional>
#include <vector>

namespace mumford {

struct PartitionPair {
  BranchSubset p1;
  BranchSubset p2;
  int l = -1;  // the label in p1 and not p2
  int m = -1;  // the label in p2 and not p1

  // Validates: equal size g, symmetric difference exactly {l, m}, and
  // neither side equals the odd set 3, 5, .., 2g+1.
  static PartitionPair make(BranchSubset p1, BranchSubset p2, int genus);
};

struct ThetaRatio {
  PadicNumber value;
  long err_val = 0;
  bool exact_zero = false;
};

class LambdaEvaluator {
 public:
  LambdaEvaluator(const CharacteristicTable& table, int radius);

  int genus() const { return table_->genus(); }
  const CharacteristicTable& table() const { return *table_; }

  // G at the branch point eval_label, entirely from closed-form characters.
  // Throws ZeroDenominator when the denominator theta vanishes.
  ThetaRatio theta_ratio_at(const PartitionPair& pp, int eval_label) const;
  // G at an embedded character (truncated data), for the descent probe.
  ThetaRatio theta_ratio_at_character(const PartitionPair& pp,
                                      const Character& c) const;

  // Cross ratio (lambda_h - lambda_l)(lambda_k - lambda_m) /
  //             ((lambda_h - lambda_m)(lambda_k - lambda_l))
  // as G(h)/G(k); h = k gives exactly one.
  ThetaRatio cross_ratio(const PartitionPair& pp, int h, int k) const;
  // The same cross ratio from four squared theta values at the odd-set
  // characters, normalized by their exact lattice cocycles.
  ThetaRatio cross_ratio_oddset(const PartitionPair& pp, int h, int k) const;

 private:
  FactoredCharacter shifted_argument(const BranchSubset& p) const;  // K / char(P)
  LatticePoint monomial_exponent(const PartitionPair& pp) const;    // d
  ThetaRatio ratio_from(const FactoredCharacter& c, const PartitionPair& pp) const;

  const CharacteristicTable* table_;
  int radius_;
};

struct LambdaValue {
  int label = 0;
  PadicNumber value;
  long err_val = 0;
  int derivations = 0;
  long spread = 0;  // worst pairwise agreement valuation across derivations
};

struct LambdaReport {
  std::vector<LambdaValue> lambdas;
  // labels sent to infinity, zero, one
  std::array<int, 3> normalization{0, 1, 2};
  bool consistent = true;
};

// Recovers the coordinate of every branch label outside the normalization
// triple from at least two independent partition choices and both theta
// routes. Throws InconsistentDerivations when the spread is worse than the
// combined error bounds less the safety margin.
LambdaReport recover_lambdas(const LambdaEvaluator& eval,
                             std::array<int, 3> normalization = {0, 1, 2},
                             long safety_margin = 2);

struct ProbeSample {
  ProjPoint z;
  std::vector<long> generator_agreement;  // v(G(gamma_i z)/G(z) - 1)
  long involution_agreement = 0;          // v(G(s_0 z)/G(z) - 1)
  bool excluded = false;                  // pole hit at this sample
};

struct ProbeReport {
  std::vector<ProbeSample> samples;
  long tolerance = 0;
  bool pass = false;
};

// Evaluates G at embedded characters of the samples, their generator
// translates, and their involution images; all agreement valuations must
// reach the tolerance.
ProbeReport invariance_probe(const OrbitEngine& engine, const LambdaEvaluator& eval,
                             const std::vector<ProjPoint>& samples, long tolerance);

// Deterministic sample points for the probe: outside the contracted image
// balls and away from the fixed points and the engine probes.
std::vector<ProjPoint> default_probe_samples(const OrbitEngine& engine, int count);

}  // namespace mumford
