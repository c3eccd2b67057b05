#pragma once
// Shared example configurations for the test suites: the genus-1 Tate-style
// group with multiplier 25 over Q_5 and a genus-2 group with three unit-
// separated inversion balls.

#include "mumford/automorphy.hpp"
#include "mumford/group.hpp"

namespace mumford::testing {

inline PadicNumber num(const PadicContext& ctx, long long n) {
  return PadicNumber::from_integer(ctx, n);
}

inline PadicNumber rat(const PadicContext& ctx, long long n, long long d) {
  return PadicNumber::from_rational(ctx, n, d);
}

inline ProjPoint pt(const PadicContext& ctx, long long n) {
  return ProjPoint::affine(num(ctx, n));
}

inline WhittakerGroup tate_group(const PadicContext& ctx) {
  return WhittakerGroup(ctx, {{pt(ctx, 1), pt(ctx, -1)}, {pt(ctx, 5), pt(ctx, -5)}});
}

inline std::vector<PBall> tate_balls(const PadicContext& ctx) {
  return {PBall::complement_ball(num(ctx, 0), 0), PBall::standard(num(ctx, 0), 1)};
}

inline WhittakerGroup genus2_group(const PadicContext& ctx) {
  return WhittakerGroup(ctx, {{pt(ctx, 0), pt(ctx, 10)},
                              {pt(ctx, 1), pt(ctx, 6)},
                              {pt(ctx, 2), pt(ctx, 7)}});
}

inline TruncationParams trunc(int max_len, long tol) {
  TruncationParams tp;
  tp.max_len = max_len;
  tp.tail_tolerance = tol;
  return tp;
}

// Members reference each other, so the whole bundle is built in place and
// must not be copied or moved.
struct TateSetup {
  PadicContext ctx;
  WhittakerGroup group;
  CertificateReport cert;
  OrbitEngine engine;

  explicit TateSetup(int digits = 24, int max_len = 14, long tol = 6)
      : ctx(5, digits),
        group(tate_group(ctx)),
        cert(ping_pong_certify(group, tate_balls(ctx))),
        engine(group, cert, trunc(max_len, tol)) {}
  TateSetup(const TateSetup&) = delete;
  TateSetup& operator=(const TateSetup&) = delete;
};

struct Genus2Setup {
  PadicContext ctx;
  WhittakerGroup group;
  CertificateReport cert;
  OrbitEngine engine;

  explicit Genus2Setup(int digits = 24, int max_len = 14, long tol = 6)
      : ctx(5, digits),
        group(genus2_group(ctx)),
        cert(ping_pong_certify(group, default_balls(group))),
        engine(group, cert, trunc(max_len, tol)) {}
  Genus2Setup(const Genus2Setup&) = delete;
  Genus2Setup& operator=(const Genus2Setup&) = delete;
};

}  // namespace mumford::testing

// Appended: full stack up to the characteristic table.
#include "mumford/characteristics.hpp"

namespace mumford::testing {

struct ThetaBundle {
  PeriodMatrix Q;
  std::vector<Character> a_embeds;  // embeddings of a_1..a_g against a_0
  std::vector<Character> b_embeds;  // embeddings of b_0..b_g (index by k)
  Polarization pol;
  CharacteristicTable table;

  template <typename Setup>
  explicit ThetaBundle(const Setup& s)
      : Q(s.engine.period_matrix()),
        a_embeds(make_a_embeds(s)),
        b_embeds(make_b_embeds(s)),
        pol(Q, diag_of(a_embeds), {}, diag_errs_of(a_embeds)),
        table(pol, derive_branch_signs(pol, a_embeds)) {}
  ThetaBundle(const ThetaBundle&) = delete;
  ThetaBundle& operator=(const ThetaBundle&) = delete;

 private:
  template <typename Setup>
  static std::vector<Character> make_a_embeds(const Setup& s) {
    std::vector<Character> out;
    for (int i = 1; i <= s.group.genus(); ++i)
      out.push_back(s.engine.embed_point(s.group.branch_point(2 * i),
                                         s.group.branch_point(0)));
    return out;
  }
  template <typename Setup>
  static std::vector<Character> make_b_embeds(const Setup& s) {
    std::vector<Character> out;
    for (int i = 0; i <= s.group.genus(); ++i)
      out.push_back(s.engine.embed_point(s.group.branch_point(2 * i + 1),
                                         s.group.branch_point(0)));
    return out;
  }
  static std::vector<PadicNumber> diag_of(const std::vector<Character>& emb) {
    std::vector<PadicNumber> d;
    for (size_t i = 0; i < emb.size(); ++i) d.push_back(emb[i].values[i]);
    return d;
  }
  static std::vector<long> diag_errs_of(const std::vector<Character>& emb) {
    std::vector<long> e;
    for (size_t i = 0; i < emb.size(); ++i) e.push_back(emb[i].err[i]);
    return e;
  }
};

}  // namespace mumford::testing
