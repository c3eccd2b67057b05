#include "mumford/group.hpp"

#include <algorithm>
#include <sstream>

namespace mumford {

bool Word::reduced() const {
  for (size_t i = 1; i < letters.size(); ++i)
    if (letters[i] == letters[i - 1]) return false;
  return true;
}

std::string Word::to_string() const {
  std::ostringstream out;
  out << "(";
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) out << " ";
    out << static_cast<int>(letters[i]);
  }
  out << ")";
  return out.str();
}

std::vector<Word> enumerate_words(int num_letters, int max_len, WordParity parity) {
  std::vector<Word> out{Word{}};
  std::vector<Word> level{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    next.reserve(level.size() * num_letters);
    for (const Word& w : level)
      for (uint8_t a = 0; a < num_letters; ++a) {
        if (!w.letters.empty() && w.letters.back() == a) continue;
        Word v = w;
        v.letters.push_back(a);
        next.push_back(std::move(v));
      }
    for (const Word& w : next)
      if (parity == WordParity::All || w.even()) out.push_back(w);
    level = std::move(next);
  }
  return out;
}

MoebiusMap involution_from_fixed_points(const ProjPoint& a, const ProjPoint& b) {
  const PadicContext& ctx = a.x.ctx();
  PadicNumber two = PadicNumber::from_integer(ctx, 2);
  PadicNumber tr = a.x * b.y + a.y * b.x;
  MoebiusMap m{tr, -(two * a.x * b.x), two * a.y * b.y, -tr};
  if (m.det().is_zero())
    fail(ErrorKind::CoincidentFixedPoints,
         "involution needs two distinct fixed points");
  return m.normalized();
}

WhittakerGroup::WhittakerGroup(const PadicContext& ctx,
                               std::vector<FixedPointPair> pairs)
    : ctx_(&ctx), pairs_(std::move(pairs)) {
  if (pairs_.size() < 2)
    fail(ErrorKind::SpecError, "a Whittaker group needs at least two involutions");
  long tol = ctx.digits();
  std::vector<const ProjPoint*> pts;
  for (const auto& pr : pairs_) {
    pts.push_back(&pr.a);
    pts.push_back(&pr.b);
  }
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      if (proj_eq(*pts[i], *pts[j], tol))
        fail(ErrorKind::SpecError, "fixed points must be pairwise distinct");
  for (const auto& pr : pairs_)
    involutions_.push_back(involution_from_fixed_points(pr.a, pr.b));
}

Word WhittakerGroup::free_generator(int i) const {
  if (i < 1 || i > genus())
    fail(ErrorKind::SpecError, "free generator index out of range");
  return Word{{static_cast<uint8_t>(i), 0}};
}

MoebiusMap WhittakerGroup::element_of(const Word& w) const {
  if (!w.reduced()) fail(ErrorKind::SpecError, "word is not reduced");
  MoebiusMap m = MoebiusMap::identity(*ctx_);
  for (uint8_t letter : w.letters) {
    if (letter >= involutions_.size())
      fail(ErrorKind::SpecError, "word letter out of range");
    m = m.compose(involutions_[letter]);
  }
  return m;
}

const ProjPoint& WhittakerGroup::branch_point(int label) const {
  int k = label / 2;
  if (label < 0 || k >= static_cast<int>(pairs_.size()))
    fail(ErrorKind::SpecError, "branch label out of range");
  return label % 2 == 0 ? pairs_[k].a : pairs_[k].b;
}

Loxodromy fixed_points(const MoebiusMap& m) {
  const PadicContext& ctx = m.a.ctx();
  PadicNumber two = PadicNumber::from_integer(ctx, 2);
  if (m.c.is_zero()) {
    // Affine: fixes infinity and b/(d-a).
    PadicNumber da = m.d - m.a;
    if (da.is_zero())
      fail(ErrorKind::NonSplit, "map is parabolic or the identity");
    PadicNumber z = m.b / da;
    PadicNumber mult = m.a / m.d;
    if (!mult.is_zero() && mult.val() < 0) mult = mult.inverse();
    return {ProjPoint::affine(z), ProjPoint::infinity(ctx), mult};
  }
  PadicNumber tr = m.a + m.d;
  PadicNumber disc = tr * tr - PadicNumber::from_integer(ctx, 4) * m.det();
  if (disc.is_zero())
    fail(ErrorKind::NonSplit, "discriminant vanishes to precision");
  PadicNumber root;
  try {
    root = sqrt(disc);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NonSquare)
      fail(ErrorKind::NonSplit, "fixed points live in a quadratic extension");
    throw;
  }
  PadicNumber ad = m.a - m.d;
  PadicNumber z1 = (ad + root) / (two * m.c);
  PadicNumber z2 = (ad - root) / (two * m.c);
  PadicNumber l1 = (tr + root) / two;
  PadicNumber l2 = (tr - root) / two;
  PadicNumber mult = l1 / l2;
  if (!mult.is_zero() && mult.val() < 0) mult = mult.inverse();
  return {ProjPoint::affine(z1), ProjPoint::affine(z2), mult};
}

std::vector<PBall> default_balls(const WhittakerGroup& group) {
  const PadicContext& ctx = group.ctx();
  PadicNumber two = PadicNumber::from_integer(ctx, 2);
  std::vector<PBall> balls;
  for (const auto& pr : group.pairs()) {
    if (pr.a.is_infinity() || pr.b.is_infinity())
      fail(ErrorKind::SpecError,
           "default balls need finite fixed points; supply explicit balls");
    PadicNumber a = pr.a.affine_coord();
    PadicNumber b = pr.b.affine_coord();
    PadicNumber mid = (a + b) / two;
    PadicNumber half = (a - b) / two;
    balls.push_back(PBall::standard(mid, half.val()));
  }
  return balls;
}

CertificateReport ping_pong_certify(const WhittakerGroup& group,
                                    const std::vector<PBall>& balls) {
  int n = group.genus() + 1;
  if (static_cast<int>(balls.size()) != n)
    fail(ErrorKind::BallCountMismatch, "expected one ball per involution");
  CertificateReport rep;
  rep.balls = balls;
  auto reject = [&](const std::string& why) {
    rep.pass = false;
    rep.violation = why;
    return rep;
  };
  for (int i = 0; i < n; ++i) {
    const auto& pr = group.pairs()[i];
    if (!ball_contains(balls[i], pr.a) || !ball_contains(balls[i], pr.b)) {
      std::ostringstream msg;
      msg << "ball " << i << " does not contain its fixed points";
      return reject(msg.str());
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!balls_disjoint(balls[i], balls[j])) {
        std::ostringstream msg;
        msg << "balls " << i << " and " << j << " are not disjoint";
        return reject(msg.str());
      }
  for (int i = 0; i < n; ++i) {
    PBall image = moebius_image(group.involution(i), ball_complement(balls[i]));
    rep.images.push_back(image);
    if (!ball_subset(image, balls[i]) || ball_modulus(image, balls[i]) < 1) {
      std::ostringstream msg;
      msg << "involution " << i << " does not contract the exterior of its ball";
      return reject(msg.str());
    }
  }
  long sep_min = kZeroCap, rate = kZeroCap;
  for (int i = 0; i < n; ++i) {
    long e_i = ball_modulus(rep.images[i], balls[i]);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      long sep = ball_modulus(balls[j], ball_complement(balls[i]));
      sep_min = std::min(sep_min, sep);
      rate = std::min(rate, sep + e_i);
    }
  }
  rep.pass = true;
  rep.min_separation = sep_min;
  // Worst-case growth per prepended letter of the modulus separating the
  // nested image balls from the contracted image they sit in.
  rep.contraction_rate = rate;
  return rep;
}

}  // namespace mumford
