#pragma once
// Closed-form half-period characters of the branch points, the Riemann
// constant, subset characters with the odd-set symmetric difference, and the
// specialty-index combinatorics of branch-supported divisors.
//
// Branch labels: 2k is the first fixed point of s_k, 2k+1 the second; label
// 0 is the base point of every embedding. The character of a_i on gamma_j is
// sign(i,j) times the canonical square root of Q_ij; the sign matrix is read
// off the truncated embeddings once and carried as data (it need not be
// symmetric, while the theta series only consumes the squares).

#include "mumford/theta.hpp"

#include <set>
#include <vector>

namespace mumford {

using BranchSubset = std::set<int>;

struct BranchSigns {
  // sign[i][j] = embed(a_{i+1})(gamma_{j+1}) / p_{ij}, entries +-1.
  std::vector<std::vector<int>> sign;
};

// Read the signs from the embeddings of the points a_1..a_g; validates that
// each embedding entry matches the polarization entry up to sign (throws
// Mismatch otherwise).
BranchSigns derive_branch_signs(const Polarization& pol,
                                const std::vector<Character>& a_embeddings);

class CharacteristicTable {
 public:
  CharacteristicTable(const Polarization& pol, BranchSigns signs);

  int genus() const { return pol_->genus(); }
  const Polarization& polarization() const { return *pol_; }
  const BranchSigns& signs() const { return signs_; }

  // Half-period character of one branch point.
  FactoredCharacter point_character(int label) const;
  // Componentwise product over the labels of a subset; empty -> identity.
  FactoredCharacter subset_character(const BranchSubset& labels) const;
  // K = product over the odd labels 3, 5, .., 2g+1.
  FactoredCharacter riemann_constant() const;
  // Character of (P union {s}) symmetric-difference the odd set; throws
  // LabelCollision if s already lies in P.
  FactoredCharacter odd_set_character(const BranchSubset& p, int s) const;

 private:
  const Polarization* pol_;
  BranchSigns signs_;
};

BranchSubset symmetric_difference(const BranchSubset& a, const BranchSubset& b);

// Index of specialty of 2*(r points) + (s points) on distinct branch points,
// in the projective convention where a non-special divisor has index 0 and
// the empty divisor on a genus-1 curve has index 0. Requires 2s + r = g - 1;
// throws ConstraintViolated otherwise.
long specialty_index(long r, long s, long g);

// Membership in the certified non-special family: exactly g distinct branch
// labels, none of them 0 or 1.
bool is_nonspecial(const BranchSubset& d, int genus);

}  // namespace mumford
