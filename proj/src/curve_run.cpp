#include "mumford/curve_run.hpp"

#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace mumford {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string rational_text(const Rational& r) {
  if (r.infinite()) return "inf";
  std::ostringstream out;
  out << r.num;
  if (r.den != 1) out << "/" << r.den;
  return out.str();
}

class StageClock {
 public:
  explicit StageClock(RunReport& rep, const std::string& name)
      : rep_(rep), name_(name), start_(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start_)
                  .count();
    rep_.timings.push_back("# timing " + name_ + "_ms: " + std::to_string(ms));
  }

 private:
  RunReport& rep_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

// Guard digits carried on top of the reported precision: the grouped
// products lose digits where orbit points approach the evaluation points,
// at a rate bounded by the ball geometry at small word length.
constexpr int kGuardDigits = 12;

}  // namespace

std::string CurveSpec::canonical_text() const {
  std::ostringstream out;
  out << "prime=" << prime << ";digits=" << digits << ";pairs=";
  for (const auto& [a, b] : pairs)
    out << rational_text(a) << "," << rational_text(b) << ";";
  out << "balls=";
  if (balls)
    for (const BallSpec& b : *balls)
      out << (b.complement ? "c" : "s") << rational_text(b.center) << "@"
          << b.radius << ";";
  out << "trunc=" << trunc_len << ";radius=" << theta_radius
      << ";tol=" << tolerance << ";probe_tol=" << probe_tolerance
      << ";margin=" << safety_margin << ";norm=" << normalization[0] << ","
      << normalization[1] << "," << normalization[2] << ";flips=";
  for (const auto& f : branch_flips) out << f[0] << "," << f[1] << "," << f[2] << ";";
  return out.str();
}

std::string CurveSpec::config_hash() const {
  size_t h = std::hash<std::string>{}(canonical_text());
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

CurveSpec parse_curve_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    fail(ErrorKind::SpecError, std::string("bad curve specification: ") + e.what());
  }
  CurveSpec spec;
  try {
    spec.prime = j.at("prime").get<long long>();
    spec.digits = j.value("digits", 12);
    for (const auto& pr : j.at("pairs")) {
      if (!pr.is_array() || pr.size() != 2)
        fail(ErrorKind::SpecError, "each fixed-point pair needs two entries");
      spec.pairs.emplace_back(parse_rational(pr[0].get<std::string>()),
                              parse_rational(pr[1].get<std::string>()));
    }
    if (j.contains("balls")) {
      std::vector<BallSpec> balls;
      for (const auto& bj : j.at("balls")) {
        BallSpec b;
        std::string kind = bj.at("kind").get<std::string>();
        if (kind == "complement")
          b.complement = true;
        else if (kind != "standard")
          fail(ErrorKind::SpecError, "ball kind must be standard or complement");
        b.center = parse_rational(bj.at("center").get<std::string>());
        b.radius = bj.at("radius_val").get<long>();
        balls.push_back(b);
      }
      spec.balls = std::move(balls);
    }
    spec.trunc_len = j.value("trunc_len", 14);
    spec.theta_radius = j.value("theta_radius", 8);
    spec.tolerance = j.value("tolerance", 10L);
    spec.probe_tolerance = j.value("probe_tolerance", 6L);
    spec.safety_margin = j.value("safety_margin", 2L);
    if (j.contains("normalization")) {
      auto n = j.at("normalization");
      if (!n.is_array() || n.size() != 3)
        fail(ErrorKind::SpecError, "normalization needs three labels");
      for (int i = 0; i < 3; ++i) spec.normalization[i] = n[i].get<int>();
    }
    if (j.contains("branch_flips"))
      for (const auto& f : j.at("branch_flips"))
        spec.branch_flips.push_back({f[0].get<int>(), f[1].get<int>(), f[2].get<int>()});
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::SpecError, std::string("bad curve specification: ") + e.what());
  }
  if (spec.genus() < 1)
    fail(ErrorKind::SpecError, "at least two fixed-point pairs required");
  if (spec.prime < 3 || spec.prime % 2 == 0)
    fail(ErrorKind::SpecError, "the prime must be odd");
  for (long long d = 3; d * d <= spec.prime; d += 2)
    if (spec.prime % d == 0)
      fail(ErrorKind::SpecError, "the prime must be prime");
  if (spec.digits < 1 || spec.trunc_len < 2 || spec.theta_radius < 1)
    fail(ErrorKind::SpecError, "precision parameters out of range");
  std::set<int> norm(spec.normalization.begin(), spec.normalization.end());
  if (norm.size() != 3)
    fail(ErrorKind::SpecError, "normalization labels must be distinct");
  for (int label : spec.normalization)
    if (label < 0 || label > 2 * spec.genus() + 1)
      fail(ErrorKind::SpecError, "normalization label out of range");
  return spec;
}

CurveSpec load_curve_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::SpecError, "cannot open curve specification " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_curve_spec(buf.str());
}

std::string RunReport::text() const {
  std::ostringstream out;
  for (const std::string& line : body) out << line << "\n";
  for (const std::string& line : timings) out << line << "\n";
  return out.str();
}

CurveRun::CurveRun(const CurveSpec& spec, std::string cache_dir)
    : spec_(spec), cache_dir_(std::move(cache_dir)) {
  ctx_ = std::make_unique<PadicContext>(spec.prime, spec.digits + kGuardDigits);
  std::vector<FixedPointPair> pairs;
  for (const auto& [a, b] : spec.pairs) {
    auto mk = [&](const Rational& r) {
      if (r.infinite()) return ProjPoint::infinity(*ctx_);
      return ProjPoint::affine(PadicNumber::from_rational(*ctx_, r.num, r.den));
    };
    pairs.push_back({mk(a), mk(b)});
  }
  group_ = std::make_unique<WhittakerGroup>(*ctx_, std::move(pairs));
}

const CertificateReport& CurveRun::certificate() {
  if (!cert_) {
    std::vector<PBall> balls;
    if (spec_.balls) {
      for (const BallSpec& b : *spec_.balls) {
        if (b.center.infinite())
          fail(ErrorKind::SpecError, "ball centers must be finite");
        PadicNumber c = PadicNumber::from_rational(*ctx_, b.center.num, b.center.den);
        balls.push_back(b.complement ? PBall::complement_ball(c, b.radius)
                                     : PBall::standard(c, b.radius));
      }
    } else {
      balls = default_balls(*group_);
    }
    cert_ = ping_pong_certify(*group_, balls);
  }
  return *cert_;
}

const OrbitEngine& CurveRun::engine() {
  if (!engine_) {
    const CertificateReport& cert = certificate();
    if (!cert.pass)
      fail(ErrorKind::SpecError, "certificate failed: " + cert.violation);
    TruncationParams tp;
    tp.max_len = spec_.trunc_len;
    // Products over translated points carry two extra junction letters, so
    // the engine floor sits two below the identity tolerance; the identity
    // checks still require their full reported bounds.
    tp.tail_tolerance = std::max(1L, spec_.tolerance - 2);
    engine_ = std::make_unique<OrbitEngine>(*group_, cert, tp);
  }
  return *engine_;
}

namespace {

std::string cache_file(const std::string& dir, const CurveSpec& spec) {
  return dir + "/" + spec.config_hash() + "-L" + std::to_string(spec.trunc_len) +
         ".periods";
}

std::optional<PeriodMatrix> load_periods(const std::string& path,
                                         const PadicContext& ctx, int g) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  PeriodMatrix pm;
  pm.g = g;
  pm.q.assign(g, {});
  pm.err.assign(g, std::vector<long>(g, 0));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    auto colon = line.find(": ");
    if (colon == std::string::npos) continue;
    std::string key = line.substr(0, colon);
    std::string value = line.substr(colon + 2);
    if (key.rfind("Q", 0) == 0) {
      pm.q[rows / g].push_back(PadicNumber::parse(ctx, value));
      ++rows;
    } else if (key.rfind("err", 0) == 0) {
      int idx = rows - 1;
      pm.err[idx / g][idx % g] = std::stol(value);
    }
  }
  if (rows != g * g) return std::nullopt;
  pm.val.assign(g, std::vector<long>(g, 0));
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) pm.val[i][j] = pm.q[i][j].val();
  return pm;
}

void store_periods(const std::string& path, const PeriodMatrix& pm) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path, std::ios::trunc);
  for (int i = 0; i < pm.g; ++i)
    for (int j = 0; j < pm.g; ++j) {
      out << "Q[" << i + 1 << "][" << j + 1 << "]: " << pm.q[i][j].to_string()
          << "\n";
      out << "err[" << i + 1 << "][" << j + 1 << "]: " << pm.err[i][j] << "\n";
    }
}

}  // namespace

const PeriodMatrix& CurveRun::periods() {
  if (!periods_) {
    if (!cache_dir_.empty()) {
      auto cached = load_periods(cache_file(cache_dir_, spec_), *ctx_,
                                 spec_.genus());
      if (cached) {
        periods_ = std::move(*cached);
        periods_cached_ = true;
        return *periods_;
      }
    }
    periods_ = engine().period_matrix();
    if (!cache_dir_.empty()) store_periods(cache_file(cache_dir_, spec_), *periods_);
  }
  return *periods_;
}

bool CurveRun::periods_from_cache() { return periods_cached_; }

const std::vector<Character>& CurveRun::embeddings() {
  if (embeddings_.empty()) {
    const OrbitEngine& eng = engine();
    const ProjPoint& base = group_->branch_point(0);
    for (int label = 0; label <= 2 * group_->genus() + 1; ++label)
      embeddings_.push_back(eng.embed_point(group_->branch_point(label), base));
  }
  return embeddings_;
}

const Polarization& CurveRun::polarization() {
  if (!pol_) {
    const PeriodMatrix& q = periods();
    const std::vector<Character>& emb = embeddings();
    std::vector<PadicNumber> diag;
    std::vector<long> diag_errs;
    for (int i = 1; i <= spec_.genus(); ++i) {
      diag.push_back(emb[2 * i].values[i - 1]);
      diag_errs.push_back(emb[2 * i].err[i - 1]);
    }
    std::vector<std::vector<int>> flips;
    if (!spec_.branch_flips.empty()) {
      flips.assign(spec_.genus(), std::vector<int>(spec_.genus(), 0));
      for (const auto& f : spec_.branch_flips) {
        int i = f[0] - 1, j = f[1] - 1;
        if (i < 0 || j < 0 || i >= spec_.genus() || j >= spec_.genus() || i == j)
          fail(ErrorKind::SpecError, "branch flip indices out of range");
        flips[i][j] = flips[j][i] = f[2] != 0;
      }
    }
    pol_ = std::make_unique<Polarization>(q, diag, flips, diag_errs);
  }
  return *pol_;
}

const CharacteristicTable& CurveRun::table() {
  if (!table_) {
    const Polarization& pol = polarization();
    std::vector<Character> a_embeds;
    for (int i = 1; i <= spec_.genus(); ++i) a_embeds.push_back(embeddings()[2 * i]);
    table_ = std::make_unique<CharacteristicTable>(
        pol, derive_branch_signs(pol, a_embeds));
  }
  return *table_;
}

void CurveRun::header_lines(RunReport& rep, const std::string& command) {
  rep.body.push_back("# mumford report v1");
  rep.body.push_back("command: " + command);
  rep.body.push_back("config_hash: " + spec_.config_hash());
  rep.body.push_back("prime: " + std::to_string(spec_.prime));
  rep.body.push_back("digits: " + std::to_string(spec_.digits));
  rep.body.push_back("genus: " + std::to_string(spec_.genus()));
  rep.body.push_back("trunc_len: " + std::to_string(spec_.trunc_len));
  rep.body.push_back("theta_radius: " + std::to_string(spec_.theta_radius));
}

namespace {

std::string padic_text(const PadicNumber& x, int digits) {
  return x.truncated(digits).to_string();
}

std::string theta_text(const ThetaValue& t, int digits) {
  if (t.exact_zero) return "0 (exact)";
  return padic_text(t.value, digits) + "  [err_val " +
         std::to_string(std::min(t.err_val, static_cast<long>(digits) +
                                                (t.value.is_zero()
                                                     ? 0
                                                     : t.value.val()))) +
         "]";
}

}  // namespace

RunReport CurveRun::report_certify() {
  RunReport rep;
  header_lines(rep, "certify");
  StageClock clock(rep, "certify");
  const CertificateReport& cert = certificate();
  rep.body.push_back("[certificate]");
  rep.body.push_back(std::string("status: ") + (cert.pass ? "pass" : "fail"));
  if (!cert.pass) {
    rep.body.push_back("violation: " + cert.violation);
    rep.ok = false;
    return rep;
  }
  rep.body.push_back("min_separation: " + std::to_string(cert.min_separation));
  rep.body.push_back("contraction_rate: " + std::to_string(cert.contraction_rate));
  for (size_t i = 0; i < cert.balls.size(); ++i)
    rep.body.push_back("ball[" + std::to_string(i) + "]: " +
                       cert.balls[i].to_string());
  for (size_t i = 0; i < cert.images.size(); ++i)
    rep.body.push_back("image[" + std::to_string(i) + "]: " +
                       cert.images[i].to_string());
  return rep;
}

RunReport CurveRun::report_periods() {
  RunReport rep;
  header_lines(rep, "periods");
  StageClock clock(rep, "periods");
  const PeriodMatrix& q = periods();
  rep.body.push_back("[periods]");
  rep.body.push_back(std::string("cache: ") + (periods_cached_ ? "hit" : "cold"));
  for (int i = 0; i < q.g; ++i)
    for (int j = 0; j < q.g; ++j) {
      std::string tag = "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]";
      rep.body.push_back("Q" + tag + ": " + padic_text(q.q[i][j], spec_.digits));
      rep.body.push_back("err" + tag + ": " +
                         std::to_string(std::min(q.err[i][j],
                                                 q.q[i][j].val() + spec_.digits)));
    }
  return rep;
}

RunReport CurveRun::report_theta_table() {
  RunReport rep;
  header_lines(rep, "theta-table");
  StageClock clock(rep, "theta-table");
  const CharacteristicTable& tab = table();
  const Polarization& pol = polarization();
  FactoredCharacter K = tab.riemann_constant();
  rep.body.push_back("[theta-table]");
  for (int label = 0; label <= 2 * spec_.genus() + 1; ++label) {
    FactoredCharacter c = tab.point_character(label);
    Character cv = c.to_character(pol);
    std::ostringstream line;
    line << "label " << label << ":";
    for (const PadicNumber& v : cv.values)
      line << "  " << padic_text(v, spec_.digits);
    rep.body.push_back(line.str());
    ThetaValue t = theta_value(c, pol, spec_.theta_radius);
    rep.body.push_back("  theta: " + theta_text(t, spec_.digits));
    ThetaValue tk = theta_value(c.mul(K), pol, spec_.theta_radius);
    rep.body.push_back("  theta_K_shift: " + theta_text(tk, spec_.digits));
  }
  return rep;
}

RunReport CurveRun::report_lambdas() {
  RunReport rep;
  header_lines(rep, "lambdas");
  StageClock clock(rep, "lambdas");
  LambdaEvaluator eval(table(), spec_.theta_radius);
  LambdaReport lam = recover_lambdas(eval, spec_.normalization, spec_.safety_margin);
  rep.body.push_back("[lambdas]");
  rep.body.push_back("normalization: " + std::to_string(lam.normalization[0]) +
                     "->inf " + std::to_string(lam.normalization[1]) + "->0 " +
                     std::to_string(lam.normalization[2]) + "->1");
  std::ostringstream eq;
  eq << "curve: y^2 = x (x - 1)";
  for (const LambdaValue& lv : lam.lambdas) eq << " (x - lambda_" << lv.label << ")";
  rep.body.push_back(eq.str());
  for (const LambdaValue& lv : lam.lambdas) {
    rep.body.push_back("lambda_" + std::to_string(lv.label) + ": " +
                       padic_text(lv.value, spec_.digits));
    rep.body.push_back("  err_val: " +
                       std::to_string(std::min(lv.err_val,
                                               lv.value.val_floor() + spec_.digits)));
    rep.body.push_back("  derivations: " + std::to_string(lv.derivations));
    rep.body.push_back("  spread: >= " + std::to_string(std::min(lv.spread, lv.err_val)));
  }
  rep.body.push_back(std::string("consistent: ") + (lam.consistent ? "yes" : "no"));
  rep.ok = lam.consistent;
  return rep;
}

RunReport CurveRun::report_verify() {
  RunReport rep;
  header_lines(rep, "verify");
  StageClock clock(rep, "verify");
  rep.body.push_back("[verify]");
  int passed = 0, failed = 0;
  auto check = [&](const std::string& name, bool ok, const std::string& detail = "") {
    std::string line = (ok ? "ok   " : "FAIL ") + name;
    if (!detail.empty()) line += "  (" + detail + ")";
    rep.body.push_back(line);
    (ok ? passed : failed) += 1;
    if (!ok) rep.ok = false;
  };
  const PadicContext& ctx = *ctx_;
  int g = spec_.genus();
  long tol = spec_.tolerance;
  PadicNumber one = PadicNumber::from_integer(ctx, 1);
  PadicNumber neg = PadicNumber::from_integer(ctx, -1);

  const CertificateReport& cert = certificate();
  check("certificate", cert.pass, cert.pass ? "" : cert.violation);
  if (!cert.pass) return rep;

  const OrbitEngine& eng = engine();
  const PeriodMatrix& q = periods();
  {
    bool sym = true;
    long symtol = kZeroCap;
    for (int i = 0; i < g; ++i)
      for (int j = 0; j < g; ++j) symtol = std::min(symtol, q.err[i][j]);
    for (int i = 0; i < g; ++i)
      for (int j = i + 1; j < g; ++j)
        sym = sym && eq_to_precision(q.q[i][j], q.q[j][i], symtol);
    check("period_symmetry", sym);
    check("period_valuations_positive_definite", q.valuation_positive_definite());
  }
  {
    bool ok = true;
    Character c = eng.c_character(group_->branch_point(0), group_->branch_point(1));
    for (int j = 0; j < g; ++j)
      ok = ok && c.err[j] >= tol && eq_to_precision(c.values[j], neg, tol);
    check("c_a0_b0_equals_minus_one", ok);
  }
  {
    bool ok = true;
    for (int i = 1; i <= g; ++i) {
      Character c = eng.c_character(group_->branch_point(2 * i + 1),
                                    group_->branch_point(2 * i));
      for (int j = 1; j <= g; ++j)
        ok = ok && eq_to_precision(c.values[j - 1], i == j ? neg : one, tol);
    }
    check("c_bi_ai_kronecker_signs", ok);
  }
  const std::vector<Character>& emb = embeddings();
  {
    bool ok = true;
    for (int i = 1; i <= g; ++i)
      for (int label : {2 * i, 2 * i + 1})
        for (int j = 0; j < g; ++j)
          ok = ok && eq_to_precision(emb[label].values[j] * emb[label].values[j],
                                     q.q[i - 1][j], tol - 1);
    check("embedding_squares_are_periods", ok);
  }
  {
    bool ok = true;
    for (int i = 1; i <= g; ++i) {
      Character m1 = eng.c_character(group_->branch_point(2 * i + 1),
                                     group_->branch_point(2 * i));
      Character prod = m1.mul(emb[2 * i]);
      ok = ok && characters_agree(emb[2 * i + 1], prod, tol - 1);
    }
    check("b_embedding_factors_through_a", ok);
  }
  const Polarization& pol = polarization();
  const CharacteristicTable& tab = table();
  {
    bool ok = true;
    for (int label = 0; label <= 2 * g + 1; ++label) {
      Character closed = tab.point_character(label).to_character(pol);
      ok = ok && characters_agree(closed, emb[label], tol - 1);
    }
    check("closed_forms_match_embeddings", ok);
  }
  {
    // theta functional equation and evenness on seeded random characters
    std::mt19937 rng(static_cast<unsigned>(
        std::hash<std::string>{}(spec_.config_hash())));
    std::uniform_int_distribution<long> val(-1, 1);
    std::uniform_int_distribution<long long> digit(0, ctx.prime() - 1);
    auto random_character = [&]() {
      Character c;
      for (int i = 0; i < g; ++i) {
        BigInt u = 1 + digit(rng) % (ctx.prime() - 1);
        BigInt pk = 1;
        for (int d = 1; d < ctx.digits(); ++d) {
          pk *= ctx.prime();
          u += pk * digit(rng);
        }
        PadicNumber x = PadicNumber::make(ctx, val(rng), u, ctx.digits());
        c.values.push_back(x);
        c.err.push_back(x.abs_prec());
      }
      return c;
    };
    bool feq = true, even = true;
    ThetaOptions opts;
    opts.radius = spec_.theta_radius;
    ThetaOptions margin_opts;
    margin_opts.radius = spec_.theta_radius - 2;
    for (int round = 0; round < 20; ++round) {
      Character c = random_character();
      ThetaValue base = theta_value(c, pol, opts);
      ThetaValue margin = theta_value(c, pol, margin_opts);
      ThetaValue inv = theta_value(c.inv(), pol, opts);
      long etol = std::min({base.err_val, inv.err_val, base.value.abs_prec()});
      even = even && eq_to_precision(base.value, inv.value, etol);
      std::vector<LatticePoint> shifts;
      if (g == 1) {
        for (long n = -2; n <= 2; ++n)
          if (n != 0) shifts.push_back({n});
      } else {
        for (long n1 = -2; n1 <= 2; ++n1)
          for (long n2 = -2; n2 <= 2; ++n2)
            if (n1 || n2) shifts.push_back(LatticePoint{n1, n2});
      }
      for (const LatticePoint& n : shifts) {
        ThetaValue lhs = theta_value(pol.lattice_character(n).mul(c), pol, opts);
        PadicNumber expect = base.value / cocycle(n, c, pol);
        long etol2 = std::min({margin.err_val, lhs.value.abs_prec(), expect.abs_prec()});
        feq = feq && eq_to_precision(lhs.value, expect, etol2);
      }
    }
    check("theta_functional_equation", feq);
    check("theta_even", even);
  }
  {
    bool zeros = true;
    for (int i = 1; i <= g; ++i)
      zeros = zeros && theta_value(tab.point_character(2 * i + 1), pol,
                                   spec_.theta_radius)
                           .exact_zero;
    check("theta_vanishes_at_b_points", zeros);
    check("theta_vanishes_at_riemann_constant",
          theta_value(tab.riemann_constant(), pol, spec_.theta_radius).exact_zero);
    bool nonzero = true;
    for (int i = 1; i <= g; ++i) {
      ThetaValue t = theta_value(tab.point_character(2 * i), pol, spec_.theta_radius);
      ThetaValue t2 =
          theta_value(tab.point_character(2 * i), pol, spec_.theta_radius + 2);
      nonzero = nonzero && !t.exact_zero && !t.value.is_zero() &&
                t.value.val() < t.err_val &&
                eq_to_precision(t.value, t2.value, t.err_val);
    }
    check("theta_nonzero_at_a_points", nonzero);
    // exhaustive non-special subsets for small genus, sampled otherwise
    bool nonspecial_ok = true;
    int tested = 0;
    std::vector<BranchSubset> subsets;
    std::function<void(int, BranchSubset&)> rec = [&](int next, BranchSubset& cur) {
      if (static_cast<int>(cur.size()) == g) {
        subsets.push_back(cur);
        return;
      }
      for (int l = next; l <= 2 * g + 1; ++l) {
        cur.insert(l);
        rec(l + 1, cur);
        cur.erase(l);
      }
    };
    BranchSubset cur;
    rec(2, cur);
    FactoredCharacter kinv = tab.riemann_constant().inv();
    for (const BranchSubset& d : subsets) {
      if (!is_nonspecial(d, g)) continue;
      if (g > 2 && tested >= 12) break;
      ThetaValue t = theta_value(tab.subset_character(d).mul(kinv), pol,
                                 spec_.theta_radius);
      nonspecial_ok = nonspecial_ok && !t.exact_zero && !t.value.is_zero() &&
                      t.value.val() < t.err_val;
      ++tested;
    }
    check("theta_nonzero_at_nonspecial_subsets", nonspecial_ok,
          std::to_string(tested) + " subsets");
  }
  {
    LambdaEvaluator eval(tab, spec_.theta_radius);
    bool ok = true;
    std::string detail;
    try {
      LambdaReport lam = recover_lambdas(eval, spec_.normalization, spec_.safety_margin);
      ok = lam.consistent;
      for (const LambdaValue& lv : lam.lambdas)
        ok = ok && lv.derivations >= 2 && lv.spread >= spec_.probe_tolerance;
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    check("coordinate_recovery_consistent", ok, detail);
    ProbeReport probe = invariance_probe(eng, eval,
                                         default_probe_samples(eng, 10),
                                         spec_.probe_tolerance);
    int used = 0;
    for (const ProbeSample& ps : probe.samples)
      if (!ps.excluded) ++used;
    check("descent_probe", probe.pass && used >= 10,
          std::to_string(used) + " samples");
  }
  rep.body.push_back("summary: " + std::to_string(passed) + " passed, " +
                     std::to_string(failed) + " failed");
  return rep;
}

RunReport CurveRun::run(const std::string& command) {
  if (command == "certify") return report_certify();
  if (command == "periods") return report_periods();
  if (command == "theta-table") return report_theta_table();
  if (command == "lambdas") return report_lambdas();
  if (command == "verify") return report_verify();
  fail(ErrorKind::SpecError, "unknown command " + command);
}

RunReport run_command(const std::string& command, const CurveSpec& spec,
                      const std::string& out_dir) {
  std::string cache = out_dir.empty() ? "" : out_dir + "/cache";
  CurveRun run(spec, cache);
  RunReport rep = run.run(command);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/" + spec.config_hash() + "-" + command + ".txt",
                      std::ios::trunc);
    out << rep.text();
  }
  return rep;
}

}  // namespace mumford
