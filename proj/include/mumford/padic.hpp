#pragma once
// Exact arithmetic in Q_p with explicit precision tracking.
//
// A nonzero value is stored as p^val * unit, where the unit is known to
// `prec` base-p digits (1 <= prec <= context digits) and its first digit is
// nonzero. A value indistinguishable from zero is a "zero to precision"
// marker: all that is known is valuation >= val. Arithmetic never reports
// more digits than its inputs justify; subtracting nearly equal values loses
// exactly the cancelled digits.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace mumford {

using BigInt = boost::multiprecision::cpp_int;

enum class ErrorKind {
  DivisionByZero,
  PrecisionExhausted,
  NonSquare,
  NonSplit,
  CoincidentFixedPoints,
  DegenerateBall,
  BallCountMismatch,
  PoleHit,
  TailBoundNotMet,
  NotPositiveDefinite,
  DiagMismatch,
  Mismatch,
  Divergent,
  LabelCollision,
  ConstraintViolated,
  ZeroDenominator,
  InconsistentDerivations,
  SpecError,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind k, const std::string& msg);

// Valuation floor used for structural zeros (e.g. the second coordinate of
// the point at infinity). Large enough that it dominates every tolerance,
// small enough that sums of floors never overflow a long.
inline constexpr long kZeroCap = 1L << 40;

// One odd prime p and a fixed working precision: units are tracked modulo
// p^digits. Contexts are immutable and must outlive the values they spawn.
class PadicContext {
 public:
  PadicContext(long long prime, int digits);

  long long prime() const { return prime_; }
  int digits() const { return digits_; }

  // p^k for k >= 0; cached for the small exponents arithmetic needs.
  BigInt pow(long k) const;

 private:
  long long prime_;
  int digits_;
  std::vector<BigInt> cache_;
};

class PadicNumber {
 public:
  // Zero to precision: only v(x) >= val_floor is known.
  static PadicNumber zero(const PadicContext& ctx, long val_floor = kZeroCap);
  static PadicNumber from_integer(const PadicContext& ctx, const BigInt& n);
  static PadicNumber from_rational(const PadicContext& ctx, const BigInt& num,
                                   const BigInt& den);
  // Explicit representation p^val * unit with `prec` known digits.
  static PadicNumber make(const PadicContext& ctx, long val, const BigInt& unit,
                          int prec);

  const PadicContext& ctx() const { return *ctx_; }
  bool is_zero() const { return zero_; }
  // Valuation of a nonzero value; throws PrecisionExhausted on a zero marker.
  long val() const;
  // Lower bound for the valuation, defined for every value.
  long val_floor() const { return val_; }
  int prec() const;
  const BigInt& unit() const;
  // First base-p digit of the unit.
  long long leading_digit() const;
  // Position below which nothing is known: val + prec for nonzero values,
  // the valuation floor for zero markers.
  long abs_prec() const { return zero_ ? val_ : val_ + prec_; }

  PadicNumber operator-() const;
  PadicNumber inverse() const;
  PadicNumber pow(long e) const;
  // Reduce the number of known digits to at most `digits`.
  PadicNumber truncated(int digits) const;

  std::string to_string() const;
  static PadicNumber parse(const PadicContext& ctx, const std::string& text);

  // Empty state: a context-less zero marker. Any arithmetic on it throws.
  PadicNumber() = default;

 private:
  const PadicContext* ctx_ = nullptr;
  bool zero_ = true;
  long val_ = kZeroCap;
  BigInt unit_ = 0;
  int prec_ = 0;

  friend PadicNumber add_impl(const PadicNumber& a, const PadicNumber& b, bool sub);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
};

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);

// Canonical square root: even valuation and quadratic-residue unit required,
// branch chosen so the first digit lies in 1..(p-1)/2. Throws NonSquare.
PadicNumber sqrt(const PadicNumber& x);

// True iff v(x - y) >= tol, with zero-marker conventions.
bool eq_to_precision(const PadicNumber& x, const PadicNumber& y, long tol);

// v_p of a nonzero integer.
long padic_valuation(long long p, BigInt n);

// Parse "a/b", "a" or "inf" into a rational; used by curve input files.
struct Rational {
  BigInt num;
  BigInt den;  // den == 0 encodes infinity
  bool infinite() const { return den == 0; }
};
Rational parse_rational(const std::string& text);

}  // namespace mumford
