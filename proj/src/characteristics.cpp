#include "mumford/characteristics.hpp"

#include <algorithm>
#include <sstream>

namespace mumford {

BranchSigns derive_branch_signs(const Polarization& pol,
                                const std::vector<Character>& a_embeddings) {
  int g = pol.genus();
  if (static_cast<int>(a_embeddings.size()) != g)
    fail(ErrorKind::SpecError, "need one embedding per point a_1..a_g");
  BranchSigns out;
  out.sign.assign(g, std::vector<int>(g, 1));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      const PadicNumber& e = a_embeddings[i].values[j];
      const PadicNumber& p = pol.p(i, j);
      PadicNumber ratio = e / p;
      long tol = std::min({a_embeddings[i].err[j] - p.val(), ratio.abs_prec(), 4L});
      const PadicContext& ctx = p.ctx();
      if (eq_to_precision(ratio, PadicNumber::from_integer(ctx, 1), tol))
        out.sign[i][j] = 1;
      else if (eq_to_precision(ratio, PadicNumber::from_integer(ctx, -1), tol))
        out.sign[i][j] = -1;
      else
        fail(ErrorKind::Mismatch,
             "embedding entry is not a square root of the period entry");
      if (i == j && out.sign[i][j] != 1)
        fail(ErrorKind::Mismatch,
             "diagonal sign must be fixed by the polarization pinning");
    }
  return out;
}

CharacteristicTable::CharacteristicTable(const Polarization& pol, BranchSigns signs)
    : pol_(&pol), signs_(std::move(signs)) {}

FactoredCharacter CharacteristicTable::point_character(int label) const {
  int g = genus();
  if (label < 0 || label > 2 * g + 1)
    fail(ErrorKind::SpecError, "branch label out of range");
  FactoredCharacter c;
  c.entries.assign(g, FactoredUnit{});
  if (label == 0) return c;  // base point: identity character
  if (label == 1) {
    for (int j = 0; j < g; ++j) c.entries[j].sign = -1;
    return c;
  }
  int k = label / 2 - 1;  // 0-based generator index
  bool is_b = label % 2 == 1;
  for (int j = 0; j < g; ++j) {
    FactoredUnit u;
    u.sign = signs_.sign[k][j];
    u.exp[{std::min(k, j), std::max(k, j)}] = 1;
    if (is_b && j == k) u.sign = -u.sign;
    c.entries[j] = u;
  }
  return c;
}

FactoredCharacter CharacteristicTable::subset_character(
    const BranchSubset& labels) const {
  FactoredCharacter c;
  c.entries.assign(genus(), FactoredUnit{});
  for (int label : labels) c = c.mul(point_character(label));
  return c;
}

FactoredCharacter CharacteristicTable::riemann_constant() const {
  BranchSubset odd;
  for (int k = 1; k <= genus(); ++k) odd.insert(2 * k + 1);
  return subset_character(odd);
}

FactoredCharacter CharacteristicTable::odd_set_character(const BranchSubset& p,
                                                         int s) const {
  if (p.count(s))
    fail(ErrorKind::LabelCollision, "label already present in the partition");
  BranchSubset ps = p;
  ps.insert(s);
  BranchSubset odd;
  for (int k = 1; k <= genus(); ++k) odd.insert(2 * k + 1);
  return subset_character(symmetric_difference(ps, odd));
}

BranchSubset symmetric_difference(const BranchSubset& a, const BranchSubset& b) {
  BranchSubset out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.begin()));
  return out;
}

long specialty_index(long r, long s, long g) {
  if (r < 0 || s < 0 || g < 1)
    fail(ErrorKind::ConstraintViolated, "negative multiplicities");
  if (2 * s + r != g - 1) {
    std::ostringstream msg;
    msg << "2s + r must equal g - 1 (got 2*" << s << " + " << r << " != " << g - 1
        << ")";
    fail(ErrorKind::ConstraintViolated, msg.str());
  }
  return s;
}

bool is_nonspecial(const BranchSubset& d, int genus) {
  if (static_cast<int>(d.size()) != genus) return false;
  for (int label : d)
    if (label == 0 || label == 1 || label > 2 * genus + 1) return false;
  return true;
}

}  // namespace mumford
