#include "mumford/padic.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace mumford {

void fail(ErrorKind k, const std::string& msg) { throw Error(k, msg); }

namespace {

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

BigInt mod_pos(const BigInt& a, const BigInt& m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return r;
}

BigInt mod_inverse(const BigInt& u, long long p, int k, const PadicContext& ctx) {
  // u is a unit mod p^k; invert via Euler: u^(phi-1) with phi = p^(k-1)(p-1).
  BigInt m = ctx.pow(k);
  BigInt phi = ctx.pow(k - 1) * (p - 1);
  return boost::multiprecision::powm(mod_pos(u, m), phi - 1, m);
}

// Square root mod an odd prime by Tonelli-Shanks. `a` must be a nonzero
// residue mod p.
BigInt sqrt_mod_p(const BigInt& a, long long p) {
  BigInt P = p;
  BigInt n = mod_pos(a, P);
  if (p % 4 == 3) return boost::multiprecision::powm(n, (P + 1) / 4, P);
  // Write p-1 = q * 2^s with q odd.
  BigInt q = P - 1;
  unsigned s = 0;
  while (q % 2 == 0) { q /= 2; ++s; }
  // Find a non-residue z.
  BigInt z = 2;
  while (boost::multiprecision::powm(z, (P - 1) / 2, P) == 1) ++z;
  BigInt m = s;
  BigInt c = boost::multiprecision::powm(z, q, P);
  BigInt t = boost::multiprecision::powm(n, q, P);
  BigInt r = boost::multiprecision::powm(n, (q + 1) / 2, P);
  while (t != 1) {
    BigInt t2 = t;
    unsigned i = 0;
    while (t2 != 1) { t2 = t2 * t2 % P; ++i; }
    BigInt b = c;
    for (BigInt j = 0; j < m - i - 1; ++j) b = b * b % P;
    m = i;
    c = b * b % P;
    t = t * c % P;
    r = r * b % P;
  }
  return r;
}

}  // namespace

PadicContext::PadicContext(long long prime, int digits)
    : prime_(prime), digits_(digits) {
  if (prime < 3 || prime % 2 == 0 || !is_prime(prime))
    fail(ErrorKind::SpecError, "context prime must be an odd prime");
  if (digits < 1) fail(ErrorKind::SpecError, "context digits must be >= 1");
  cache_.reserve(2 * digits + 66);
  BigInt v = 1;
  for (int k = 0; k < 2 * digits + 66; ++k) {
    cache_.push_back(v);
    v *= prime;
  }
}

BigInt PadicContext::pow(long k) const {
  if (k < 0) fail(ErrorKind::SpecError, "negative prime power requested");
  if (k < static_cast<long>(cache_.size())) return cache_[k];
  return boost::multiprecision::pow(BigInt(prime_), static_cast<unsigned>(k));
}

long padic_valuation(long long p, BigInt n) {
  if (n == 0) fail(ErrorKind::SpecError, "valuation of integer zero");
  long v = 0;
  while (n % p == 0) { n /= p; ++v; }
  return v;
}

PadicNumber PadicNumber::zero(const PadicContext& ctx, long val_floor) {
  PadicNumber z;
  z.ctx_ = &ctx;
  z.zero_ = true;
  z.val_ = std::min(val_floor, kZeroCap);
  return z;
}

PadicNumber PadicNumber::make(const PadicContext& ctx, long val,
                              const BigInt& unit, int prec) {
  prec = std::min(prec, ctx.digits());
  if (prec <= 0) return zero(ctx, val);
  PadicNumber x;
  x.ctx_ = &ctx;
  BigInt u = mod_pos(unit, ctx.pow(prec));
  if (u == 0) return zero(ctx, val + prec);
  long shift = padic_valuation(ctx.prime(), u);
  if (shift > 0) {
    // The leading digit(s) vanished; fold them into the valuation.
    u /= ctx.pow(shift);
    val += shift;
    prec -= shift;
    if (prec <= 0) return zero(ctx, val);
  }
  x.zero_ = false;
  x.val_ = val;
  x.unit_ = u;
  x.prec_ = prec;
  return x;
}

PadicNumber PadicNumber::from_integer(const PadicContext& ctx, const BigInt& n) {
  if (n == 0) return zero(ctx);
  long v = padic_valuation(ctx.prime(), n);
  return make(ctx, v, n / ctx.pow(v), ctx.digits());
}

PadicNumber PadicNumber::from_rational(const PadicContext& ctx, const BigInt& num,
                                       const BigInt& den) {
  if (den == 0) fail(ErrorKind::DivisionByZero, "rational with zero denominator");
  if (num == 0) return zero(ctx);
  long vn = padic_valuation(ctx.prime(), num);
  long vd = padic_valuation(ctx.prime(), den);
  BigInt un = num / ctx.pow(vn);
  BigInt ud = den / ctx.pow(vd);
  int k = ctx.digits();
  BigInt u = mod_pos(un, ctx.pow(k)) * mod_inverse(ud, ctx.prime(), k, ctx);
  return make(ctx, vn - vd, u, k);
}

long PadicNumber::val() const {
  if (zero_) fail(ErrorKind::PrecisionExhausted, "valuation of a zero-to-precision value");
  return val_;
}

int PadicNumber::prec() const {
  if (zero_) fail(ErrorKind::PrecisionExhausted, "unit digits of a zero-to-precision value");
  return prec_;
}

const BigInt& PadicNumber::unit() const {
  if (zero_) fail(ErrorKind::PrecisionExhausted, "unit of a zero-to-precision value");
  return unit_;
}

long long PadicNumber::leading_digit() const {
  return static_cast<long long>(unit() % ctx_->prime());
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  return make(*ctx_, val_, ctx_->pow(prec_) - unit_, prec_);
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) fail(ErrorKind::DivisionByZero, "inverse of a zero-to-precision value");
  return make(*ctx_, -val_, mod_inverse(unit_, ctx_->prime(), prec_, *ctx_), prec_);
}

PadicNumber PadicNumber::pow(long e) const {
  if (e == 0) return from_integer(*ctx_, 1);
  if (e < 0) return inverse().pow(-e);
  if (zero_) {
    long f = val_ >= kZeroCap / e ? kZeroCap : val_ * e;
    return zero(*ctx_, f);
  }
  BigInt u = boost::multiprecision::powm(unit_, BigInt(e), ctx_->pow(prec_));
  return make(*ctx_, val_ * e, u, prec_);
}

PadicNumber PadicNumber::truncated(int digits) const {
  if (zero_ || digits >= prec_) return *this;
  return make(*ctx_, val_, unit_ % ctx_->pow(digits), digits);
}

PadicNumber add_impl(const PadicNumber& a, const PadicNumber& b, bool sub) {
  const PadicContext& ctx = *a.ctx_;
  if (a.ctx_ != b.ctx_) fail(ErrorKind::SpecError, "mixed p-adic contexts");
  // Everything is known only below min of the absolute precisions.
  long cap = std::min(a.abs_prec(), b.abs_prec());
  if (a.zero_ && b.zero_) return PadicNumber::zero(ctx, cap);
  if (a.zero_ || b.zero_) {
    const PadicNumber& x = a.zero_ ? b : a;
    if (x.val_ >= cap) return PadicNumber::zero(ctx, cap);
    PadicNumber r = x.truncated(static_cast<int>(cap - x.val_));
    if (sub && a.zero_) r = -r;
    return r;
  }
  long m = std::min(a.val_, b.val_);
  long know = cap - m;  // digits of the sum known above p^m
  if (know <= 0) return PadicNumber::zero(ctx, cap);
  BigInt mod = ctx.pow(know);
  BigInt s = a.unit_ * ctx.pow(a.val_ - m) % mod;
  BigInt t = b.unit_ * ctx.pow(b.val_ - m) % mod;
  BigInt u;
  if (sub) u = s - t; else u = s + t;
  return PadicNumber::make(ctx, m, u, static_cast<int>(know));
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  return add_impl(a, b, false);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) {
  return add_impl(a, b, true);
}

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  const PadicContext& ctx = *a.ctx_;
  if (a.ctx_ != b.ctx_) fail(ErrorKind::SpecError, "mixed p-adic contexts");
  if (a.zero_ || b.zero_) {
    long fa = a.zero_ ? a.val_ : a.val_;
    long fb = b.zero_ ? b.val_ : b.val_;
    long f = (fa >= kZeroCap || fb >= kZeroCap) ? kZeroCap
                                                : std::min(fa + fb, kZeroCap);
    return PadicNumber::zero(ctx, f);
  }
  int prec = std::min(a.prec_, b.prec_);
  BigInt u = a.unit_ * b.unit_ % ctx.pow(prec);
  return PadicNumber::make(ctx, a.val_ + b.val_, u, prec);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) {
  if (b.is_zero()) fail(ErrorKind::DivisionByZero, "division by zero-to-precision");
  return a * b.inverse();
}

PadicNumber sqrt(const PadicNumber& x) {
  if (x.is_zero()) fail(ErrorKind::PrecisionExhausted, "sqrt of a zero-to-precision value");
  const PadicContext& ctx = x.ctx();
  long long p = ctx.prime();
  if (x.val() % 2 != 0)
    fail(ErrorKind::NonSquare, "odd valuation has no square root in Q_p");
  BigInt u = x.unit();
  if (boost::multiprecision::powm(u % p, BigInt((p - 1) / 2), BigInt(p)) != 1)
    fail(ErrorKind::NonSquare, "unit is not a quadratic residue mod p");
  int prec = x.prec();
  // Hensel: lift the mod-p root, doubling the known digits each step.
  BigInt r = sqrt_mod_p(u, p);
  int have = 1;
  while (have < prec) {
    have = std::min(2 * have, prec);
    BigInt mod = ctx.pow(have);
    BigInt inv2r = mod_inverse(2 * r % mod, p, have, ctx);
    r = mod_pos(r - (r * r - u) * inv2r, mod);
  }
  // Canonical branch: first digit in 1..(p-1)/2.
  if (r % p > (p - 1) / 2) r = ctx.pow(prec) - r;
  long half_val = x.val() / 2;
  PadicNumber root = PadicNumber::make(ctx, half_val, r, prec);
  return root;
}

bool eq_to_precision(const PadicNumber& x, const PadicNumber& y, long tol) {
  PadicNumber d = x - y;
  return d.val_floor() >= tol;
}

std::string PadicNumber::to_string() const {
  std::ostringstream out;
  if (zero_) {
    if (val_ >= kZeroCap) return "0";
    out << "O(" << ctx_->prime() << "^" << val_ << ")";
    return out.str();
  }
  long long p = ctx_->prime();
  out << p << "^" << val_ << " * (";
  BigInt u = unit_;
  for (int i = 0; i < prec_; ++i) {
    long long d = static_cast<long long>(u % p);
    u /= p;
    if (i > 0) out << " + ";
    if (i == 0)
      out << d;
    else if (i == 1)
      out << d << "*" << p;
    else
      out << d << "*" << p << "^" << i;
  }
  out << ") + O(" << p << "^" << (val_ + prec_) << ")";
  return out.str();
}

PadicNumber PadicNumber::parse(const PadicContext& ctx, const std::string& text) {
  auto bad = [&]() { fail(ErrorKind::SpecError, "unparsable p-adic literal: " + text); };
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) bad();
  if (s == "0") return zero(ctx);
  if (s[0] == 'O') {
    // O(p^k)
    auto caret = s.find('^');
    auto close = s.rfind(')');
    if (caret == std::string::npos || close == std::string::npos) bad();
    long k = std::stol(s.substr(caret + 1, close - caret - 1));
    return zero(ctx, k);
  }
  auto caret = s.find('^');
  auto star = s.find('*');
  if (caret == std::string::npos || star == std::string::npos) bad();
  long val = std::stol(s.substr(caret + 1, star - caret - 1));
  auto open = s.find('(', star);
  auto close = s.find(')', open);
  if (open == std::string::npos || close == std::string::npos) bad();
  std::string body = s.substr(open + 1, close - open - 1);
  // body: d0+d1*p+d2*p^2+...
  BigInt unit = 0;
  int prec = 0;
  size_t pos = 0;
  while (pos < body.size()) {
    size_t next = body.find('+', pos);
    std::string term = body.substr(pos, next == std::string::npos ? next : next - pos);
    pos = next == std::string::npos ? body.size() : next + 1;
    long long digit = 0;
    long power = 0;
    auto mul = term.find('*');
    if (mul == std::string::npos) {
      digit = std::stoll(term);
      power = 0;
    } else {
      digit = std::stoll(term.substr(0, mul));
      auto c2 = term.find('^', mul);
      power = c2 == std::string::npos ? 1 : std::stol(term.substr(c2 + 1));
    }
    unit += BigInt(digit) * ctx.pow(power);
    prec = std::max<int>(prec, static_cast<int>(power) + 1);
  }
  return make(ctx, val, unit, prec);
}

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s == "inf" || s == "Inf" || s == "oo" || s == "infinity") return {1, 0};
  auto slash = s.find('/');
  Rational r;
  if (slash == std::string::npos) {
    r.num = BigInt(s);
    r.den = 1;
  } else {
    r.num = BigInt(s.substr(0, slash));
    r.den = BigInt(s.substr(slash + 1));
    if (r.den == 0) fail(ErrorKind::SpecError, "zero denominator in rational: " + text);
  }
  return r;
}

}  // namespace mumford
