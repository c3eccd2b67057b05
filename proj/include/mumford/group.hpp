#pragma once
// Whittaker groups: g+1 order-two Moebius maps s_0..s_g given by their fixed
// point pairs, the free generators gamma_i = s_i s_0, reduced words over the
// involutions, and an exact ping-pong certificate of discontinuity.

#include "mumford/geometry.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mumford {

// Reduced word over the involutions: letter indices in 0..g, no two adjacent
// letters equal. Even length words lie in the free subgroup.
struct Word {
  std::vector<uint8_t> letters;

  size_t size() const { return letters.size(); }
  bool even() const { return letters.size() % 2 == 0; }
  bool reduced() const;
  std::string to_string() const;
};

enum class WordParity { All, Even };

// All reduced words of length <= max_len in deterministic order: by length,
// then lexicographically by letters.
std::vector<Word> enumerate_words(int num_letters, int max_len, WordParity parity);

// Order-two map fixing a and b; throws CoincidentFixedPoints.
MoebiusMap involution_from_fixed_points(const ProjPoint& a, const ProjPoint& b);

struct FixedPointPair {
  ProjPoint a;
  ProjPoint b;
};

class WhittakerGroup {
 public:
  WhittakerGroup(const PadicContext& ctx, std::vector<FixedPointPair> pairs);

  const PadicContext& ctx() const { return *ctx_; }
  int genus() const { return static_cast<int>(pairs_.size()) - 1; }
  const std::vector<FixedPointPair>& pairs() const { return pairs_; }
  const MoebiusMap& involution(int i) const { return involutions_[i]; }
  // gamma_i = s_i s_0 as a word, i in 1..g.
  Word free_generator(int i) const;
  MoebiusMap element_of(const Word& w) const;
  // Fixed point for a branch label: even labels 2k are a_k, odd 2k+1 are b_k.
  const ProjPoint& branch_point(int label) const;

 private:
  const PadicContext* ctx_;
  std::vector<FixedPointPair> pairs_;
  std::vector<MoebiusMap> involutions_;
};

// Fixed points and multiplier of a loxodromic map, via the quadratic formula.
// Throws NonSplit when the fixed points do not live in Q_p.
struct Loxodromy {
  ProjPoint fix1;
  ProjPoint fix2;
  PadicNumber multiplier;  // eigenvalue ratio with positive valuation
};
Loxodromy fixed_points(const MoebiusMap& m);

// Default ball system: the ball of inversion of each involution, centered at
// the midpoint of its fixed pair. Requires all fixed points finite.
std::vector<PBall> default_balls(const WhittakerGroup& group);

struct CertificateReport {
  bool pass = false;
  std::string violation;
  std::vector<PBall> balls;
  // s_i applied to the complement of its ball; contained in the ball on pass.
  std::vector<PBall> images;
  // Minimal valuation separation between distinct balls.
  long min_separation = 0;
  // Guaranteed growth of the nesting modulus per extra letter; the tail
  // bounds of the product evaluation rest on this.
  long contraction_rate = 0;
};

// Klein combination test: balls pairwise disjoint, fixed points inside their
// ball, and each involution maps the exterior of its ball strictly inside.
// Throws BallCountMismatch if the ball count differs from g+1.
CertificateReport ping_pong_certify(const WhittakerGroup& group,
                                    const std::vector<PBall>& balls);

}  // namespace mumford
