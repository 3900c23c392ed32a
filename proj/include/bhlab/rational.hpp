#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace bhlab {

// Exact rational arithmetic.  All quantities that carry correctness weight
// (torus norms, eta thresholds, certificate bounds, Bohr widths) are held as
// mpq and only rendered to double at the reporting boundary.
using Rational = mpq_class;

// Parses "p/q", a plain integer, or a finite decimal ("0.25") into an exact
// rational.  Throws input_error on malformed input or zero denominator.
Rational parse_rational(std::string_view text);

// Canonical "p/q" rendering (integers render as "p/1" stays "p"?  No: always
// lowest terms with denominator, integers as plain "p").
std::string rational_string(const Rational& r);

// Shortest round-trip double rendering used for all real-valued report
// fields: printf "%.17g".
std::string real_string(double x);

// A point on the circle R/Z, stored as an exact rational canonicalised to
// [0, 1).  Supports the group operations and the distance-to-integers norm
//   ||x|| = min(frac(x), 1 - frac(x)),
// which is computed exactly and only converted to double on demand.
class TorusValue {
 public:
  TorusValue() : v_(0) {}
  explicit TorusValue(const Rational& v) : v_(reduce(v)) {}
  TorusValue(long num, long den);  // num/den mod 1

  const Rational& fraction() const { return v_; }

  Rational norm_exact() const;
  double norm() const { return norm_exact().get_d(); }

  bool is_zero() const { return v_ == 0; }

  TorusValue operator+(const TorusValue& o) const { return TorusValue(v_ + o.v_); }
  TorusValue operator-(const TorusValue& o) const { return TorusValue(v_ - o.v_); }
  TorusValue operator-() const { return TorusValue(-v_); }
  TorusValue times(const mpz_class& k) const { return TorusValue(Rational(k) * v_); }
  TorusValue times(long k) const { return times(mpz_class(k)); }

  bool operator==(const TorusValue& o) const { return v_ == o.v_; }
  bool operator!=(const TorusValue& o) const { return v_ != o.v_; }
  bool operator<(const TorusValue& o) const { return v_ < o.v_; }

  std::string str() const { return rational_string(v_); }

 private:
  static Rational reduce(Rational v);
  Rational v_;  // canonical representative in [0, 1)
};

// min(frac, 1 - frac) rendered to double; the exact value is
// TorusValue::norm_exact().
inline double torus_norm(const TorusValue& x) { return x.norm(); }

}  // namespace bhlab
