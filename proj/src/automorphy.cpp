#include "mumford/automorphy.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace mumford {

namespace {

PadicNumber pone(const PadicContext& ctx) {
  return PadicNumber::from_integer(ctx, 1);
}

// Exact determinant of an integer matrix by minor expansion (g stays small).
BigInt int_det(const std::vector<std::vector<long>>& m, int n) {
  if (n == 1) return m[0][0];
  BigInt det = 0;
  std::vector<std::vector<long>> sub(n - 1, std::vector<long>(n - 1));
  for (int col = 0; col < n; ++col) {
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == col) continue;
        sub[r - 1][cc++] = m[r][c];
      }
    }
    BigInt term = BigInt(m[0][col]) * int_det(sub, n - 1);
    det += (col % 2 == 0) ? term : -term;
  }
  return det;
}

}  // namespace

Character Character::mul(const Character& o) const {
  Character r;
  for (int i = 0; i < genus(); ++i) {
    r.values.push_back(values[i] * o.values[i]);
    r.err.push_back(std::min(err[i], o.err[i]));
  }
  return r;
}

Character Character::inv() const {
  Character r;
  for (int i = 0; i < genus(); ++i) {
    r.values.push_back(values[i].inverse());
    r.err.push_back(err[i]);
  }
  return r;
}

Character Character::pow(long e) const {
  Character r;
  for (int i = 0; i < genus(); ++i) {
    r.values.push_back(values[i].pow(e));
    r.err.push_back(err[i]);
  }
  return r;
}

bool characters_agree(const Character& a, const Character& b, long tol) {
  if (a.genus() != b.genus()) return false;
  for (int i = 0; i < a.genus(); ++i)
    if (!eq_to_precision(a.values[i], b.values[i], tol)) return false;
  return true;
}

bool PeriodMatrix::valuation_positive_definite() const {
  for (int k = 1; k <= g; ++k) {
    std::vector<std::vector<long>> m(k, std::vector<long>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) m[i][j] = val[i][j];
    if (int_det(m, k) <= 0) return false;
  }
  return true;
}

PadicNumber cross_factor(const ProjPoint& a, const ProjPoint& b,
                         const ProjPoint& z, const ProjPoint& w) {
  PadicNumber za = cross_det(z, a);
  PadicNumber wb = cross_det(w, b);
  PadicNumber zb = cross_det(z, b);
  PadicNumber wa = cross_det(w, a);
  if (zb.is_zero() || wa.is_zero() || za.is_zero() || wb.is_zero())
    fail(ErrorKind::PoleHit, "cross_factor: evaluation point met an orbit point");
  return (za * wb) / (zb * wa);
}

OrbitEngine::OrbitEngine(const WhittakerGroup& group,
                         const CertificateReport& cert, TruncationParams params)
    : group_(&group), cert_(cert), params_(params),
      z0_(ProjPoint::infinity(group.ctx())),
      z1_(ProjPoint::infinity(group.ctx())) {
  if (!cert_.pass)
    fail(ErrorKind::SpecError, "orbit engine requires a passing certificate");
  if (params_.max_len < 2 || params_.max_len % 2 != 0)
    fail(ErrorKind::SpecError, "truncation length must be even and >= 2");
  z0_ = params_.probe0 ? *params_.probe0 : pick_probe(0);
  z1_ = params_.probe1 ? *params_.probe1 : pick_probe(1);
  for (int i = 0; i <= group.genus(); ++i) {
    for (const ProjPoint* z : {&z0_, &z1_})
      if (ball_contains(cert_.images[i], *z))
        fail(ErrorKind::SpecError,
             "probe point lies inside a contracted image ball");
  }
  // Breadth-first enumeration; matrices extend by one involution on the
  // right. Only even words enter products.
  int n = group.genus() + 1;
  std::vector<OrbitElement> level{{Word{}, MoebiusMap::identity(group.ctx())}};
  elements_.push_back(level[0]);
  for (int len = 1; len <= params_.max_len; ++len) {
    std::vector<OrbitElement> next;
    next.reserve(level.size() * n);
    for (const OrbitElement& el : level)
      for (uint8_t a = 0; a < n; ++a) {
        if (!el.word.letters.empty() && el.word.letters.back() == a) continue;
        OrbitElement e;
        e.word = el.word;
        e.word.letters.push_back(a);
        e.map = el.map.compose(group.involution(a));
        next.push_back(std::move(e));
      }
    if (len % 2 == 0)
      for (const OrbitElement& e : next) elements_.push_back(e);
    level = std::move(next);
  }
}

ProjPoint OrbitEngine::pick_probe(int skip) const {
  const PadicContext& ctx = group_->ctx();
  long tol = ctx.digits();
  int found = 0;
  for (long cand = 0; cand < 64 * ctx.prime(); ++cand) {
    ProjPoint z = ProjPoint::affine(PadicNumber::from_integer(ctx, cand));
    bool ok = true;
    for (const PBall& e : cert_.images)
      if (ball_contains(e, z)) { ok = false; break; }
    if (!ok) continue;
    for (const auto& pr : group_->pairs()) {
      if (proj_eq(z, pr.a, tol) || proj_eq(z, pr.b, tol)) { ok = false; break; }
    }
    if (!ok) continue;
    if (found++ == skip) return z;
  }
  fail(ErrorKind::SpecError, "no probe point found outside the image balls");
}

long OrbitEngine::tail_bound(int word_len, int gamma_letters,
                             int extra_letters) const {
  // A word of length l beyond the truncation contributes a factor whose
  // distance from 1 is controlled by the nesting modulus of its image ball;
  // the modulus grows by at least contraction_rate per letter, and the group
  // element argument plus orbit translates in the points eat a fixed number
  // of letters at the junction.
  long slack = 2L * gamma_letters + extra_letters + 1;
  long effective = static_cast<long>(word_len) + 1 - slack - 1;
  if (word_len <= 0 || effective < 0) return 0;
  return effective * cert_.contraction_rate + 1;
}

int OrbitEngine::sufficient_length(long tolerance, int gamma_letters,
                                   int extra_letters) const {
  for (int len = 2; len < 1 << 20; len += 2)
    if (tail_bound(len, gamma_letters, extra_letters) >= tolerance) return len;
  fail(ErrorKind::TailBoundNotMet, "no finite truncation reaches the tolerance");
}

namespace {

struct ProductAccumulator {
  PadicNumber num;
  PadicNumber den;
  void mul_num(const PadicNumber& x) { num = num * x; }
  void mul_den(const PadicNumber& x) { den = den * x; }
  PadicNumber value() const { return num / den; }
};

PadicNumber checked_det(const ProjPoint& p, const ProjPoint& q) {
  PadicNumber d = cross_det(p, q);
  if (d.is_zero())
    fail(ErrorKind::PoleHit, "orbit product hit a pole at working precision");
  return d;
}

}  // namespace

Character OrbitEngine::c_character(const ProjPoint& a, const ProjPoint& b,
                                   int extra_letters) const {
  int g = group_->genus();
  long tail = tail_bound(params_.max_len, 2, extra_letters);
  if (tail < params_.tail_tolerance) {
    std::ostringstream msg;
    msg << "tail bound " << tail << " below tolerance " << params_.tail_tolerance
        << "; smallest sufficient truncation length is "
        << sufficient_length(params_.tail_tolerance, 2, extra_letters);
    fail(ErrorKind::TailBoundNotMet, msg.str());
  }
  std::array<const ProjPoint*, 2> probes{&z0_, &z1_};
  std::vector<std::vector<ProjPoint>> gz(2);
  for (int pi = 0; pi < 2; ++pi)
    for (int j = 1; j <= g; ++j)
      gz[pi].push_back(group_->element_of(group_->free_generator(j)).apply(*probes[pi]));
  std::vector<std::vector<ProductAccumulator>> acc(
      2, std::vector<ProductAccumulator>(
             g, ProductAccumulator{pone(group_->ctx()), pone(group_->ctx())}));
  for (const OrbitElement& el : elements_) {
    ProjPoint ha = el.map.apply(a);
    ProjPoint hb = el.map.apply(b);
    for (int pi = 0; pi < 2; ++pi) {
      PadicNumber dza = checked_det(*probes[pi], ha);
      PadicNumber dzb = checked_det(*probes[pi], hb);
      for (int j = 0; j < g; ++j) {
        PadicNumber dga = checked_det(gz[pi][j], ha);
        PadicNumber dgb = checked_det(gz[pi][j], hb);
        acc[pi][j].mul_num(dga * dzb);
        acc[pi][j].mul_den(dgb * dza);
      }
    }
  }
  Character out;
  for (int j = 0; j < g; ++j) {
    PadicNumber v0 = acc[0][j].value();
    PadicNumber v1 = acc[1][j].value();
    long err = std::min(tail, std::min(v0.abs_prec(), v1.abs_prec()));
    if (!eq_to_precision(v0, v1, err)) {
      std::ostringstream msg;
      msg << "probe points disagree beyond the tail bound for gamma_" << (j + 1);
      fail(ErrorKind::Mismatch, msg.str());
    }
    out.values.push_back(v0);
    out.err.push_back(err);
  }
  return out;
}

PadicNumber OrbitEngine::c_factor(const ProjPoint& a, const ProjPoint& b,
                                  const Word& gamma, int extra_letters) const {
  if (!gamma.reduced() || !gamma.even())
    fail(ErrorKind::SpecError, "c_factor needs a reduced even word");
  int glen = static_cast<int>(gamma.size());
  if (glen == 0) return pone(group_->ctx());
  long tail = tail_bound(params_.max_len, glen, extra_letters);
  if (tail < params_.tail_tolerance) {
    std::ostringstream msg;
    msg << "tail bound " << tail << " below tolerance " << params_.tail_tolerance
        << "; smallest sufficient truncation length is "
        << sufficient_length(params_.tail_tolerance, glen, extra_letters);
    fail(ErrorKind::TailBoundNotMet, msg.str());
  }
  MoebiusMap gm = group_->element_of(gamma);
  std::array<const ProjPoint*, 2> probes{&z0_, &z1_};
  std::array<PadicNumber, 2> vals{pone(group_->ctx()), pone(group_->ctx())};
  for (int pi = 0; pi < 2; ++pi) {
    ProjPoint gzp = gm.apply(*probes[pi]);
    ProductAccumulator acc{pone(group_->ctx()), pone(group_->ctx())};
    for (const OrbitElement& el : elements_) {
      ProjPoint ha = el.map.apply(a);
      ProjPoint hb = el.map.apply(b);
      acc.mul_num(checked_det(gzp, ha) * checked_det(*probes[pi], hb));
      acc.mul_den(checked_det(gzp, hb) * checked_det(*probes[pi], ha));
    }
    vals[pi] = acc.value();
  }
  long err = std::min(tail, std::min(vals[0].abs_prec(), vals[1].abs_prec()));
  if (!eq_to_precision(vals[0], vals[1], err))
    fail(ErrorKind::Mismatch, "probe points disagree beyond the tail bound");
  return vals[0];
}

Character OrbitEngine::embed_point(const ProjPoint& x, const ProjPoint& base,
                                   int extra_letters) const {
  const PadicContext& ctx = group_->ctx();
  if (proj_eq(x, base, ctx.digits())) {
    Character id;
    for (int j = 0; j < group_->genus(); ++j) {
      id.values.push_back(pone(ctx));
      id.err.push_back(kZeroCap);
    }
    return id;
  }
  return c_character(x, base, extra_letters);
}

PeriodMatrix OrbitEngine::period_matrix() const {
  int g = group_->genus();
  ProjPoint x = pick_probe(2);
  PeriodMatrix pm;
  pm.g = g;
  for (int i = 1; i <= g; ++i) {
    ProjPoint gx = group_->element_of(group_->free_generator(i)).apply(x);
    Character row = c_character(gx, x, 2);
    pm.q.push_back(row.values);
    pm.err.push_back(row.err);
  }
  long symtol = kZeroCap;
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) symtol = std::min(symtol, pm.err[i][j]);
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j)
      if (!eq_to_precision(pm.q[i][j], pm.q[j][i], symtol))
        fail(ErrorKind::Mismatch, "period matrix is not symmetric to tolerance");
  pm.val.assign(g, std::vector<long>(g, 0));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) pm.val[i][j] = pm.q[i][j].val();
  if (!pm.valuation_positive_definite())
    fail(ErrorKind::NotPositiveDefinite,
         "valuation matrix of the periods is not positive definite");
  return pm;
}

}  // namespace mumford
