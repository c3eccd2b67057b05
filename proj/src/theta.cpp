#include "mumford/theta.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <sstream>

namespace mumford {

namespace {

using BigRat = boost::multiprecision::cpp_rational;

PadicNumber pone(const PadicContext& ctx) {
  return PadicNumber::from_integer(ctx, 1);
}

BigInt int_det(const std::vector<std::vector<BigInt>>& m, int n) {
  if (n == 1) return m[0][0];
  BigInt det = 0;
  std::vector<std::vector<BigInt>> sub(n - 1, std::vector<BigInt>(n - 1));
  for (int col = 0; col < n; ++col) {
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == col) continue;
        sub[r - 1][cc++] = m[r][c];
      }
    }
    BigInt term = m[0][col] * int_det(sub, n - 1);
    det += (col % 2 == 0) ? term : -term;
  }
  return det;
}

// Positive definiteness of den*D - num*I via leading principal minors.
bool shifted_posdef(const std::vector<std::vector<long>>& d, const BigInt& num,
                    const BigInt& den) {
  int g = static_cast<int>(d.size());
  for (int k = 1; k <= g; ++k) {
    std::vector<std::vector<BigInt>> m(k, std::vector<BigInt>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) {
        m[i][j] = den * d[i][j];
        if (i == j) m[i][j] -= num;
      }
    if (int_det(m, k) <= 0) return false;
  }
  return true;
}

// Rational lower bound for the smallest eigenvalue of the doubled valuation
// matrix; positive when the matrix is positive definite.
BigRat eigen_lower_bound(const std::vector<std::vector<long>>& d) {
  if (!shifted_posdef(d, 0, 1)) return 0;
  BigRat lo = 0;
  long hi_l = d[0][0];
  for (size_t i = 1; i < d.size(); ++i) hi_l = std::min(hi_l, d[i][i]);
  BigRat hi = hi_l + 1;
  for (int it = 0; it < 40; ++it) {
    BigRat mid = (lo + hi) / 2;
    if (shifted_posdef(d, numerator(mid), denominator(mid)))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

long floor_div2(long x) { return x >= 0 ? x / 2 : -((-x + 1) / 2); }

}  // namespace

Polarization::Polarization(const PeriodMatrix& Q,
                           const std::vector<PadicNumber>& diag,
                           const std::vector<std::vector<int>>& branch_flips,
                           const std::vector<long>& diag_errs)
    : g_(Q.g), Q_(Q) {
  if (static_cast<int>(diag.size()) != g_)
    fail(ErrorKind::SpecError, "polarization diagonal has wrong size");
  p_.assign(g_, std::vector<PadicNumber>(g_));
  flips_.assign(g_, std::vector<int>(g_, 0));
  for (int i = 0; i < g_; ++i) {
    PadicNumber sq = diag[i] * diag[i];
    long tol = std::min({Q.err[i][i], sq.abs_prec(), Q.q[i][i].abs_prec()});
    if (!eq_to_precision(sq, Q.q[i][i], tol))
      fail(ErrorKind::DiagMismatch,
           "diagonal entry does not square to the period");
    p_[i][i] = diag[i];
    long derr = diag_errs.empty() ? diag[i].abs_prec() : diag_errs[i];
    rel_err_ = std::min(rel_err_, derr - diag[i].val());
  }
  for (int i = 0; i < g_; ++i)
    for (int j = i + 1; j < g_; ++j) {
      PadicNumber root = sqrt(Q.q[i][j]);  // NonSquare propagates
      bool flip = !branch_flips.empty() && branch_flips[i][j] != 0;
      if (flip) root = -root;
      flips_[i][j] = flips_[j][i] = flip ? 1 : 0;
      p_[i][j] = p_[j][i] = root;
      // the root inherits the relative accuracy of the period entry
      rel_err_ = std::min(rel_err_, Q.err[i][j] - Q.val[i][j]);
    }
}

PadicNumber Polarization::bilinear(const LatticePoint& n,
                                   const LatticePoint& m) const {
  const PadicContext& ctx = p_[0][0].ctx();
  PadicNumber out = pone(ctx);
  for (int i = 0; i < g_; ++i)
    for (int j = 0; j < g_; ++j) {
      long e = n[i] * m[j];
      if (e != 0) out = out * p_[i][j].pow(e);
    }
  return out;
}

Character Polarization::lattice_character(const LatticePoint& n) const {
  Character out;
  for (int j = 0; j < g_; ++j) {
    PadicNumber v = PadicNumber::from_integer(p_[0][0].ctx(), 1);
    for (int k = 0; k < g_; ++k)
      if (n[k] != 0) v = v * p_[j][k].pow(2 * n[k]);
    out.values.push_back(v);
    out.err.push_back(v.abs_prec());
  }
  return out;
}

Character lattice_character(const LatticePoint& n, const PeriodMatrix& Q) {
  Character out;
  for (int j = 0; j < Q.g; ++j) {
    PadicNumber v = PadicNumber::from_integer(Q.q[0][0].ctx(), 1);
    long err = kZeroCap;
    for (int k = 0; k < Q.g; ++k) {
      if (n[k] == 0) continue;
      v = v * Q.q[j][k].pow(n[k]);
      err = std::min(err, Q.err[j][k]);
    }
    out.values.push_back(v);
    out.err.push_back(std::min(err, v.abs_prec()));
  }
  return out;
}

PadicNumber cocycle(const LatticePoint& n, const Character& c,
                    const Polarization& pol) {
  PadicNumber out = pol.bilinear(n, n);
  for (int i = 0; i < pol.genus(); ++i)
    if (n[i] != 0) out = out * c.values[i].pow(n[i]);
  return out;
}

FactoredUnit FactoredUnit::mul(const FactoredUnit& o) const {
  FactoredUnit r;
  r.sign = sign * o.sign;
  r.exp = exp;
  for (const auto& [k, e] : o.exp) {
    r.exp[k] += e;
    if (r.exp[k] == 0) r.exp.erase(k);
  }
  return r;
}

FactoredUnit FactoredUnit::inv() const { return pow(-1); }

FactoredUnit FactoredUnit::pow(long e) const {
  FactoredUnit r;
  r.sign = (e % 2 == 0) ? 1 : sign;
  if (e != 0)
    for (const auto& [k, v] : exp) r.exp[k] = v * e;
  return r;
}

bool FactoredUnit::identical(const FactoredUnit& o) const {
  return sign == o.sign && exp == o.exp;
}

PadicNumber FactoredUnit::value(const Polarization& pol) const {
  const PadicContext& ctx = pol.p(0, 0).ctx();
  PadicNumber out = PadicNumber::from_integer(ctx, sign);
  for (const auto& [k, e] : exp) out = out * pol.p(k.first, k.second).pow(e);
  return out;
}

FactoredCharacter FactoredCharacter::mul(const FactoredCharacter& o) const {
  FactoredCharacter r;
  for (int i = 0; i < genus(); ++i) r.entries.push_back(entries[i].mul(o.entries[i]));
  return r;
}

FactoredCharacter FactoredCharacter::inv() const {
  FactoredCharacter r;
  for (const FactoredUnit& u : entries) r.entries.push_back(u.inv());
  return r;
}

Character FactoredCharacter::to_character(const Polarization& pol) const {
  Character c;
  for (const FactoredUnit& u : entries) {
    PadicNumber v = u.value(pol);
    c.values.push_back(v);
    c.err.push_back(std::min(v.abs_prec(), v.val() + pol.relative_error()));
  }
  return c;
}

FactoredUnit FactoredCharacter::eval_lattice_word(const LatticePoint& n) const {
  FactoredUnit out;
  for (int i = 0; i < genus(); ++i)
    if (n[i] != 0) out = out.mul(entries[i].pow(n[i]));
  return out;
}

std::optional<LatticePoint> FactoredCharacter::lattice_vector() const {
  int g = genus();
  LatticePoint n(g, 0);
  bool have = false;
  for (int j = 0; j < g; ++j) {
    if (entries[j].sign != 1) return std::nullopt;
    LatticePoint nj(g, 0);
    for (const auto& [k, e] : entries[j].exp) {
      if (k.first != j && k.second != j) return std::nullopt;
      if (e % 2 != 0) return std::nullopt;
      int other = (k.first == j) ? k.second : k.first;
      nj[other] = e / 2;
    }
    if (!have) {
      n = nj;
      have = true;
    } else if (n != nj) {
      return std::nullopt;
    }
  }
  return n;
}

std::optional<LatticePoint> FactoredCharacter::square_lattice_point() const {
  int g = genus();
  LatticePoint n(g, 0);
  bool have = false;
  for (int j = 0; j < g; ++j) {
    LatticePoint nj(g, 0);
    for (const auto& [k, e] : entries[j].exp) {
      if (k.first != j && k.second != j) return std::nullopt;
      int other = (k.first == j) ? k.second : k.first;
      nj[other] = e;
    }
    if (!have) {
      n = nj;
      have = true;
    } else if (n != nj) {
      return std::nullopt;
    }
  }
  return n;
}

namespace {

struct TermGeometry {
  // Doubled valuations so half-integer contributions stay integral.
  std::vector<std::vector<long>> d;  // v(Q_ij)
  std::vector<long> w2;              // 2*v(c_i)
  long term_val2(const LatticePoint& n) const {
    long t = 0;
    int g = static_cast<int>(w2.size());
    for (int i = 0; i < g; ++i) {
      for (int j = 0; j < g; ++j) t += n[i] * n[j] * d[i][j];
      t += n[i] * w2[i];
    }
    return t;
  }
};

// Minimal doubled term valuation over the complement of the box, exact over
// the first shells and bounded by the quadratic form beyond.
long omitted_min2(const TermGeometry& geom, int radius) {
  int g = static_cast<int>(geom.w2.size());
  BigRat mu = eigen_lower_bound(geom.d);
  if (mu <= 0) fail(ErrorKind::Divergent, "period valuations not positive definite");
  long w1 = 0;
  for (long w : geom.w2) w1 += std::abs(w);
  // Beyond rho*, mu*rho^2 - w1*rho grows monotonically.
  long rho_star = radius + 1;
  BigRat wr = w1;
  while (BigRat(rho_star) * mu <= wr) ++rho_star;
  long best = kZeroCap;
  LatticePoint n(g, 0);
  for (long rho = radius + 1; rho <= rho_star; ++rho) {
    // enumerate the shell |n|_inf = rho
    std::vector<long> idx(g, -rho);
    for (;;) {
      bool on_shell = false;
      for (int i = 0; i < g; ++i)
        if (std::abs(idx[i]) == rho) { on_shell = true; break; }
      if (on_shell) {
        for (int i = 0; i < g; ++i) n[i] = idx[i];
        best = std::min(best, geom.term_val2(n));
      }
      int i = 0;
      while (i < g && ++idx[i] > rho) idx[i++] = -rho;
      if (i == g) break;
    }
  }
  BigRat beyond = mu * BigRat(rho_star + 1) * BigRat(rho_star + 1) -
                  BigRat(w1) * BigRat(rho_star + 1);
  BigInt floor_b = numerator(beyond) / denominator(beyond);
  long beyond_l = static_cast<long>(floor_b);
  return std::min(best, beyond_l);
}

PadicNumber term_value(const Character& c, const Polarization& pol,
                       const LatticePoint& n) {
  PadicNumber t = pol.bilinear(n, n);
  for (int i = 0; i < pol.genus(); ++i)
    if (n[i] != 0) t = t * c.values[i].pow(n[i]);
  return t;
}

}  // namespace

ThetaValue theta_value(const Character& c, const Polarization& pol,
                       const ThetaOptions& opts) {
  const PadicContext& ctx = pol.p(0, 0).ctx();
  int g = pol.genus();
  if (c.genus() != g) fail(ErrorKind::SpecError, "character has wrong genus");
  if (opts.radius < 1) fail(ErrorKind::SpecError, "theta radius must be >= 1");
  if (!pol.periods().valuation_positive_definite())
    fail(ErrorKind::Divergent, "period valuations not positive definite");
  TermGeometry geom;
  geom.d = pol.periods().val;
  for (int i = 0; i < g; ++i) {
    if (c.values[i].is_zero())
      fail(ErrorKind::SpecError, "character entry lost to precision");
    geom.w2.push_back(2 * c.values[i].val());
  }
  LatticePoint shift(g, 0);
  if (opts.pair_shift) shift = *opts.pair_shift;
  int radius = opts.radius;
  long c_rel = kZeroCap;
  for (int i = 0; i < g; ++i)
    c_rel = std::min(c_rel, c.err[i] - c.values[i].val());
  long data_rel = std::min(pol.relative_error(), c_rel);
  long min_term = kZeroCap;  // valuation of the argument-dependent terms
  PadicNumber sum = PadicNumber::zero(ctx, kZeroCap);
  std::vector<long> idx(g, -radius);
  LatticePoint n(g), m(g);
  for (;;) {
    for (int i = 0; i < g; ++i) n[i] = idx[i];
    // pairing partner
    for (int i = 0; i < g; ++i) m[i] = -n[i] - shift[i];
    bool nonzero_n = false;
    for (int i = 0; i < g; ++i) nonzero_n = nonzero_n || n[i] != 0;
    if (nonzero_n) min_term = std::min(min_term, floor_div2(geom.term_val2(n)));
    bool canonical = n <= m;
    if (canonical) {
      PadicNumber t = term_value(c, pol, n);
      if (n != m) t = t + term_value(c, pol, m);
      sum = sum + t;
    } else {
      // the partner adds the pair when visited, unless it lies outside the
      // box, in which case this point is unpaired inside it
      bool partner_in_box = true;
      for (int i = 0; i < g; ++i)
        if (std::abs(m[i]) > radius) { partner_in_box = false; break; }
      if (!partner_in_box) {
        PadicNumber t = term_value(c, pol, n);
        t = t + term_value(c, pol, m);
        sum = sum + t;
      }
    }
    int i = 0;
    while (i < g && ++idx[i] > radius) idx[i++] = -radius;
    if (i == g) break;
  }
  ThetaValue out;
  out.value = sum;
  out.err_val = std::min({floor_div2(omitted_min2(geom, radius)), sum.abs_prec(),
                          min_term + data_rel});
  return out;
}

ThetaValue theta_value(const FactoredCharacter& c, const Polarization& pol,
                       int radius) {
  const PadicContext& ctx = pol.p(0, 0).ctx();
  std::optional<LatticePoint> n0 = c.square_lattice_point();
  ThetaOptions opts;
  opts.radius = radius;
  if (n0) {
    bool nonzero = false, odd = false;
    for (long v : *n0) {
      if (v != 0) nonzero = true;
      if (v % 2 != 0) odd = true;
    }
    if (nonzero && odd) {
      // Pairing n <-> -n-n0 flips the sign of every term exactly when
      // c(gamma_{n0}) = -P(n0, n0); both sides live in factored form, so the
      // comparison is exact and the whole series cancels.
      FactoredUnit lhs = c.eval_lattice_word(*n0);
      FactoredUnit pnn;
      int g = c.genus();
      for (int i = 0; i < g; ++i)
        for (int j = i; j < g; ++j) {
          long e = (i == j) ? (*n0)[i] * (*n0)[i] : 2 * (*n0)[i] * (*n0)[j];
          if (e != 0) pnn.exp[{i, j}] = e;
        }
      pnn.sign = -1;
      if (lhs.identical(pnn)) {
        ThetaValue out;
        out.value = PadicNumber::zero(ctx, kZeroCap);
        out.err_val = kZeroCap;
        out.exact_zero = true;
        return out;
      }
    }
    opts.pair_shift = *n0;
  }
  return theta_value(c.to_character(pol), pol, opts);
}

}  // namespace mumford
