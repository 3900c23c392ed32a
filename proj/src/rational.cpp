#include "bhlab/rational.hpp"

#include <cctype>
#include <cstdio>

#include "bhlab/errors.hpp"

namespace bhlab {

namespace {

bool is_integer_token(std::string_view s) {
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  // Trim surrounding whitespace.
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty()) throw input_error("empty rational literal");

  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = text.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den))
      throw input_error("malformed rational literal '" + std::string(text) + "'");
    const mpz_class p{std::string(num)};
    const mpz_class q{std::string(den)};
    if (q == 0) throw input_error("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
  }

  const auto dot = text.find('.');
  if (dot != std::string_view::npos) {
    std::string_view ip = text.substr(0, dot);
    std::string_view fp = text.substr(dot + 1);
    bool neg = false;
    if (!ip.empty() && (ip[0] == '+' || ip[0] == '-')) {
      neg = ip[0] == '-';
      ip.remove_prefix(1);
    }
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !is_integer_token(ip)) ||
        (!fp.empty() && !is_integer_token(fp)))
      throw input_error("malformed decimal literal '" + std::string(text) + "'");
    mpz_class whole = ip.empty() ? mpz_class(0) : mpz_class(std::string(ip));
    mpz_class frac = fp.empty() ? mpz_class(0) : mpz_class(std::string(fp));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, fp.size());
    Rational r(whole * scale + frac, scale);
    r.canonicalize();
    if (neg) r = -r;
    return r;
  }

  if (!is_integer_token(text))
    throw input_error("malformed rational literal '" + std::string(text) + "'");
  return Rational(mpz_class(std::string(text)));
}

std::string rational_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string real_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

TorusValue::TorusValue(long num, long den) {
  if (den == 0) throw input_error("zero denominator in torus value");
  Rational r(num, den);
  r.canonicalize();
  v_ = reduce(r);
}

Rational TorusValue::reduce(Rational v) {
  // v - floor(v), computed exactly: floor = num fdiv den.
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), v.get_num().get_mpz_t(), v.get_den().get_mpz_t());
  Rational out = v - Rational(fl);
  out.canonicalize();
  return out;
}

Rational TorusValue::norm_exact() const {
  Rational other = 1 - v_;
  return v_ < other ? v_ : other;
}

}  // namespace bhlab
