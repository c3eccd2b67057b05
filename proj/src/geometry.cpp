#include "mumford/geometry.hpp"

#include <algorithm>
#include <array>
#include <sstream>

namespace mumford {

namespace {

PadicNumber one(const PadicContext& ctx) {
  return PadicNumber::from_integer(ctx, 1);
}

// Sound three-way comparison of v(d) against a threshold. A zero marker only
// carries a lower bound for the valuation; when that bound cannot decide the
// comparison the ball operation is not exact and we refuse.
bool val_at_least(const PadicNumber& d, long threshold) {
  if (!d.is_zero()) return d.val() >= threshold;
  if (d.val_floor() >= threshold) return true;
  fail(ErrorKind::DegenerateBall,
       "ball arithmetic undecidable at working precision");
}

long exact_val(const PadicNumber& d, long ambient_bound) {
  // Exact valuation needed below ambient_bound; markers at or above the
  // bound behave like 'large'.
  if (!d.is_zero()) return d.val();
  if (d.val_floor() >= ambient_bound) return d.val_floor();
  fail(ErrorKind::DegenerateBall,
       "ball arithmetic undecidable at working precision");
}

}  // namespace

ProjPoint ProjPoint::affine(const PadicNumber& z) {
  return make(z, one(z.ctx()));
}

ProjPoint ProjPoint::infinity(const PadicContext& ctx) {
  return {one(ctx), PadicNumber::zero(ctx)};
}

ProjPoint ProjPoint::make(const PadicNumber& x, const PadicNumber& y) {
  if (x.is_zero() && y.is_zero())
    fail(ErrorKind::PrecisionExhausted, "projective point lost all precision");
  // Canonical chart: (z : 1) for v(z) >= 0, (1 : 1/z) otherwise.
  if (y.is_zero()) return {one(x.ctx()), y / x};
  if (x.is_zero()) return {x / y, one(x.ctx())};
  if (x.val() >= y.val()) return {x / y, one(x.ctx())};
  return {one(x.ctx()), y / x};
}

PadicNumber cross_det(const ProjPoint& p, const ProjPoint& q) {
  return p.x * q.y - q.x * p.y;
}

bool proj_eq(const ProjPoint& p, const ProjPoint& q, long tol) {
  return cross_det(p, q).val_floor() >= tol;
}

MoebiusMap MoebiusMap::identity(const PadicContext& ctx) {
  PadicNumber z = PadicNumber::zero(ctx);
  return {one(ctx), z, z, one(ctx)};
}

MoebiusMap MoebiusMap::compose(const MoebiusMap& rhs) const {
  return MoebiusMap{a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
                    c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d}
      .normalized();
}

MoebiusMap MoebiusMap::inverse() const {
  return MoebiusMap{d, -b, -c, a}.normalized();
}

ProjPoint MoebiusMap::apply(const ProjPoint& p) const {
  return ProjPoint::make(a * p.x + b * p.y, c * p.x + d * p.y);
}

PadicNumber MoebiusMap::det() const { return a * d - b * c; }

MoebiusMap MoebiusMap::normalized() const {
  long m = kZeroCap;
  for (const PadicNumber* e : {&a, &b, &c, &d}) m = std::min(m, e->val_floor());
  if (m == kZeroCap)
    fail(ErrorKind::PrecisionExhausted, "moebius map lost all precision");
  if (m == 0) return *this;
  const PadicContext& ctx = a.ctx();
  PadicNumber scale = PadicNumber::from_integer(ctx, ctx.prime()).pow(-m);
  return {a * scale, b * scale, c * scale, d * scale};
}

bool moebius_eq(const MoebiusMap& m, const MoebiusMap& n, long tol) {
  MoebiusMap u = m.normalized();
  MoebiusMap v = n.normalized();
  std::array<const PadicNumber*, 4> me{&u.a, &u.b, &u.c, &u.d};
  std::array<const PadicNumber*, 4> ne{&v.a, &v.b, &v.c, &v.d};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      PadicNumber d = *me[i] * *ne[j] - *me[j] * *ne[i];
      if (d.val_floor() < tol) return false;
    }
  return true;
}

bool MoebiusMap::is_identity(long tol) const {
  return moebius_eq(*this, identity(a.ctx()), tol);
}

PBall PBall::standard(const PadicNumber& center, long radius) {
  return {false, center, radius};
}

PBall PBall::complement_ball(const PadicNumber& center, long radius) {
  return {true, center, radius};
}

std::string PBall::to_string() const {
  std::ostringstream out;
  out << (complement ? "complement" : "standard") << " center="
      << center.to_string() << " radius_val=" << radius;
  return out.str();
}

bool ball_contains(const PBall& b, const ProjPoint& z) {
  if (z.is_infinity()) return b.complement;
  PadicNumber d = z.affine_coord() - b.center;
  if (!b.complement) return val_at_least(d, b.radius);
  // v(d) <= radius, i.e. not in the excluded hole.
  if (!d.is_zero()) return d.val() <= b.radius;
  if (d.val_floor() > b.radius) return false;
  fail(ErrorKind::DegenerateBall,
       "ball membership undecidable at working precision");
}

PBall ball_complement(const PBall& b) {
  return b.complement ? PBall::standard(b.center, b.radius + 1)
                      : PBall::complement_ball(b.center, b.radius - 1);
}

bool balls_disjoint(const PBall& b1, const PBall& b2) {
  if (b1.complement && b2.complement) return false;  // both contain infinity
  if (!b1.complement && !b2.complement) {
    // Standard balls intersect iff one contains the other's center.
    PadicNumber d = b1.center - b2.center;
    return !val_at_least(d, std::min(b1.radius, b2.radius));
  }
  const PBall& s = b1.complement ? b2 : b1;
  const PBall& c = b1.complement ? b1 : b2;
  // Disjoint iff the standard ball sits inside the excluded hole.
  return ball_subset(s, ball_complement(c));
}

bool ball_subset(const PBall& inner, const PBall& outer) {
  if (inner.complement && !outer.complement) return false;
  PadicNumber d = inner.center - outer.center;
  if (!inner.complement && !outer.complement)
    return inner.radius >= outer.radius && val_at_least(d, outer.radius);
  if (inner.complement && outer.complement)
    return outer.radius >= inner.radius && val_at_least(d, inner.radius + 1);
  // standard inside complement: disjoint from the hole
  long hole = outer.radius + 1;
  if (!d.is_zero()) return d.val() < std::min(inner.radius, hole);
  if (d.val_floor() >= std::min(inner.radius, hole)) return false;
  fail(ErrorKind::DegenerateBall,
       "ball containment undecidable at working precision");
}

long ball_modulus(const PBall& inner, const PBall& outer) {
  if (!ball_subset(inner, outer))
    fail(ErrorKind::Mismatch, "ball_modulus: inner not contained in outer");
  if (!inner.complement && !outer.complement)
    return inner.radius - outer.radius;
  if (inner.complement && outer.complement)
    return outer.radius - inner.radius;
  // standard inside complement
  long s = exact_val(inner.center - outer.center,
                     std::min(inner.radius, outer.radius + 1));
  return inner.radius + outer.radius - 2 * s;
}

PBall moebius_image(const MoebiusMap& m, const PBall& b) {
  if (b.complement)
    return ball_complement(moebius_image(m, ball_complement(b)));
  const PadicNumber& cen = b.center;
  PadicNumber det = m.det();
  if (det.is_zero())
    fail(ErrorKind::DegenerateBall, "moebius_image: determinant lost to precision");
  if (m.c.is_zero()) {
    // Affine map (az + b)/d.
    if (m.a.is_zero() || m.d.is_zero())
      fail(ErrorKind::DegenerateBall, "moebius_image: affine map lost to precision");
    PadicNumber img = (m.a * cen + m.b) / m.d;
    return PBall::standard(img, b.radius + m.a.val() - m.d.val());
  }
  PadicNumber pole = -(m.d / m.c);
  long beta_val = det.val() - 2 * m.c.val();
  PadicNumber diff = cen - pole;
  if (val_at_least(diff, b.radius)) {
    // Pole inside: the image wraps around infinity.
    PadicNumber alpha = m.a / m.c;
    return PBall::complement_ball(alpha, beta_val - b.radius);
  }
  long t = diff.val();
  PadicNumber img = m.apply(ProjPoint::affine(cen)).affine_coord();
  return PBall::standard(img, b.radius - 2 * t + beta_val);
}

}  // namespace mumford
