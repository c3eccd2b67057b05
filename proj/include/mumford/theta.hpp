#pragma once
// The polarization (a symmetric multiplicative square root of the period
// matrix with pinned diagonal) and the theta series over the character
// lattice, with sound truncation bounds and exact vanishing detection for
// half-period arguments kept in factored form.

#include "mumford/automorphy.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace mumford {

using LatticePoint = std::vector<long>;

class Polarization {
 public:
  // diag[i] must square to Q_ii; off-diagonal entries take the canonical
  // square root branch, flipped where branch_flips says so. diag_errs are
  // the absolute error valuations of the diagonal data (defaulting to their
  // representable precision).
  Polarization(const PeriodMatrix& Q, const std::vector<PadicNumber>& diag,
               const std::vector<std::vector<int>>& branch_flips = {},
               const std::vector<long>& diag_errs = {});

  int genus() const { return g_; }
  const PeriodMatrix& periods() const { return Q_; }
  const PadicNumber& p(int i, int j) const { return p_[i][j]; }
  bool flipped(int i, int j) const { return flips_[i][j] != 0; }
  // P(n,m) = prod p_ij^{n_i m_j}.
  PadicNumber bilinear(const LatticePoint& n, const LatticePoint& m) const;
  // Worst relative error valuation of the entries: the entries approximate
  // the limits of the defining products only to their tail bounds, and every
  // value assembled from them inherits this as a relative error.
  long relative_error() const { return rel_err_; }
  // The lattice character of n generated by the squares of the entries; the
  // quasi-periodicity of theta holds against this lattice exactly, while the
  // independently computed period matrix agrees with it to its tail bound.
  Character lattice_character(const LatticePoint& n) const;

 private:
  int g_;
  PeriodMatrix Q_;
  std::vector<std::vector<PadicNumber>> p_;
  std::vector<std::vector<int>> flips_;
  long rel_err_ = kZeroCap;
};

// Character of the lattice point n: entries prod_k Q_jk^{n_k}.
Character lattice_character(const LatticePoint& n, const PeriodMatrix& Q);

// The automorphy cocycle xi_n(c) = P(n,n) * prod c_i^{n_i}.
PadicNumber cocycle(const LatticePoint& n, const Character& c,
                    const Polarization& pol);

// A unit written multiplicatively over the polarization entries: sign *
// prod p_{ij}^{e_ij}. Characters of branch subsets stay in this form, so
// lattice relations between them hold exactly rather than to precision.
struct FactoredUnit {
  int sign = 1;                       // +1 or -1
  std::map<std::pair<int, int>, long> exp;  // key (i<=j) -> exponent

  FactoredUnit mul(const FactoredUnit& o) const;
  FactoredUnit inv() const;
  FactoredUnit pow(long e) const;
  bool identical(const FactoredUnit& o) const;
  PadicNumber value(const Polarization& pol) const;
};

// Half-period style character in factored form.
struct FactoredCharacter {
  std::vector<FactoredUnit> entries;

  int genus() const { return static_cast<int>(entries.size()); }
  FactoredCharacter mul(const FactoredCharacter& o) const;
  FactoredCharacter inv() const;
  Character to_character(const Polarization& pol) const;
  FactoredUnit eval_lattice_word(const LatticePoint& n) const;
  // n with c^2 = lattice_character(n), read off the exponents; nullopt when
  // the square is not a lattice character.
  std::optional<LatticePoint> square_lattice_point() const;
  // n with c = lattice_character(n) exactly (even exponents, positive signs).
  std::optional<LatticePoint> lattice_vector() const;
};

struct ThetaValue {
  PadicNumber value;
  long err_val = 0;     // omitted terms all have valuation >= err_val
  bool exact_zero = false;
};

struct ThetaOptions {
  int radius = 8;  // summation box |n|_inf <= radius
  // Pair n with -n-shift instead of -n before accumulating.
  std::optional<LatticePoint> pair_shift;
};

// Theta series sum_n P(n,n) c^n. Throws Divergent if the valuation matrix of
// the periods is not positive definite.
ThetaValue theta_value(const Character& c, const Polarization& pol,
                       const ThetaOptions& opts);

// Factored arguments detect the exact cancellation c(gamma_n) = -P(n,n) with
// c^2 = lattice(n) and then return an exact zero; otherwise the series is
// summed with the pairing shift n.
ThetaValue theta_value(const FactoredCharacter& c, const Polarization& pol,
                       int radius);

}  // namespace mumford
