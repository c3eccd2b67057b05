#pragma once
// Multiplicative automorphy factors evaluated as truncated grouped products
// over the free subgroup, with tail bounds derived from the ping-pong
// certificate, plus the period matrix and the Jacobian embedding.
//
// Conventions used project-wide:
//   cross_factor(a,b;z,w) = ((z-a)(w-b)) / ((z-b)(w-a))
//   c_{a,b}(gamma)        = prod over even words h of cross_factor(ha,hb; gamma z0, z0)
//   t(x)                  = the character c_{x,base} on the free generators
//   Q_ij                  = c_{gamma_i x, x}(gamma_j)
// The (gamma_i x, x) slot order in Q is the one under which the square
// identities for branch characters hold and the valuation matrix of Q is
// positive definite, which the theta series needs. With the slots reversed
// the same product telescopes to the reciprocal of the multiplier.

#include "mumford/group.hpp"

#include <optional>
#include <vector>

namespace mumford {

struct TruncationParams {
  int max_len = 14;           // even; words up to this length enter products
  long tail_tolerance = 10;   // refuse results with a weaker tail bound
  std::optional<ProjPoint> probe0;  // convergence cross-check base points;
  std::optional<ProjPoint> probe1;  // picked automatically when absent
};

// Multiplicative character on the free generators gamma_1..gamma_g, with the
// error valuation its entries were computed to.
struct Character {
  std::vector<PadicNumber> values;
  std::vector<long> err;

  int genus() const { return static_cast<int>(values.size()); }
  Character mul(const Character& o) const;
  Character inv() const;
  Character pow(long e) const;
};

bool characters_agree(const Character& a, const Character& b, long tol);

struct PeriodMatrix {
  int g = 0;
  std::vector<std::vector<PadicNumber>> q;
  std::vector<std::vector<long>> err;
  std::vector<std::vector<long>> val;  // valuation matrix v(Q_ij)

  // All leading principal minors of the valuation matrix positive.
  bool valuation_positive_definite() const;
};

// Classical cross ratio of (a,b; z,w), computed projectively so any argument
// may be infinity. Throws PoleHit when z or w meets a or b to precision.
PadicNumber cross_factor(const ProjPoint& a, const ProjPoint& b,
                         const ProjPoint& z, const ProjPoint& w);

class OrbitEngine {
 public:
  OrbitEngine(const WhittakerGroup& group, const CertificateReport& cert,
              TruncationParams params);

  const WhittakerGroup& group() const { return *group_; }
  const TruncationParams& params() const { return params_; }
  const ProjPoint& probe(int i) const { return i == 0 ? z0_ : z1_; }

  // Valuation below which the product truncated at `word_len` letters may
  // differ from the full one. gamma_letters is the letter length of the
  // group element argument; extra_letters accounts for orbit translates
  // hidden in the points a, b.
  long tail_bound(int word_len, int gamma_letters, int extra_letters = 0) const;
  // Smallest even truncation length whose tail bound reaches the tolerance.
  int sufficient_length(long tolerance, int gamma_letters, int extra_letters = 0) const;

  // c_{a,b}(gamma): checked against both probes, tail bound enforced.
  PadicNumber c_factor(const ProjPoint& a, const ProjPoint& b, const Word& gamma,
                       int extra_letters = 0) const;
  // Entries c_{a,b}(gamma_1..gamma_g) in one orbit pass.
  Character c_character(const ProjPoint& a, const ProjPoint& b,
                        int extra_letters = 0) const;
  // Jacobian embedding t(x) = c_{x,base}. extra_letters covers group
  // translates hidden in x when the tail bound is assessed.
  Character embed_point(const ProjPoint& x, const ProjPoint& base,
                        int extra_letters = 0) const;
  PeriodMatrix period_matrix() const;

  // Deterministic scan for points outside every contracted image ball and
  // distinct from all fixed points; `skip` earlier picks are passed over.
  ProjPoint pick_probe(int skip) const;

  // Reduced even words and their maps, in length-lex order.
  struct OrbitElement {
    Word word;
    MoebiusMap map;
  };
  const std::vector<OrbitElement>& elements() const { return elements_; }

 private:
  const WhittakerGroup* group_;
  CertificateReport cert_;
  TruncationParams params_;
  ProjPoint z0_;
  ProjPoint z1_;
  std::vector<OrbitElement> elements_;
};

}  // namespace mumford
