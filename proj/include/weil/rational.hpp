#pragma once
// Exact rational scalar. All structural computation in the library runs on
// this type; floating point only ever appears in the numeric evaluation mode.

#include <gmpxx.h>

#include <string>
#include <utility>

#include "weil/errors.hpp"

namespace weil {

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator. Wraps GMP's mpq_class so arithmetic never yields
/// expression-template intermediates in generic code.
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(int n) : q_(n) {}
  Rat(long n) : q_(n) {}
  Rat(long num, long den) : q_(num, den) {
    if (den == 0) fail(Err::InvalidRational, "zero denominator");
    q_.canonicalize();
  }

  /// Parses "p", "p/q" or a plain decimal like "-1.25". Rejects q = 0.
  static Rat parse(const std::string& text);

  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  double to_double() const { return q_.get_d(); }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  Rat operator-() const { return Rat(-q_); }
  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) fail(Err::NotInvertible, "division by zero rational");
    q_ /= o.q_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { a += b; return a; }
  friend Rat operator-(Rat a, const Rat& b) { a -= b; return a; }
  friend Rat operator*(Rat a, const Rat& b) { a *= b; return a; }
  friend Rat operator/(Rat a, const Rat& b) { a /= b; return a; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
  friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
  friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
  friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }

  Rat inverse() const {
    if (is_zero()) fail(Err::NotInvertible, "0 has no inverse");
    return Rat(1) / *this;
  }

  Rat abs() const { return sign() < 0 ? -*this : *this; }

 private:
  explicit Rat(mpq_class q) : q_(std::move(q)) {}
  mpq_class q_;
};

inline Rat Rat::parse(const std::string& text) {
  auto bad = [&](const char* why) -> Rat {
    fail(Err::InvalidRational, "'" + text + "': " + why);
  };
  if (text.empty()) return bad("empty");
  std::size_t i = 0;
  if (text[i] == '-' || text[i] == '+') ++i;
  if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
    return bad("expected digits");
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size()) return Rat(mpq_class(text));
  if (text[i] == '/') {
    std::size_t j = i + 1;
    if (j == text.size()) return bad("missing denominator");
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j != text.size()) return bad("trailing characters");
    mpq_class q(text);
    if (q.get_den() == 0) return bad("zero denominator");
    q.canonicalize();
    return Rat(std::move(q));
  }
  if (text[i] == '.') {
    std::size_t j = i + 1;
    while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
    if (j != text.size() || j == i + 1) return bad("malformed decimal");
    // a.bbb = abbb / 10^len(bbb)
    std::string digits = text.substr(0, i) + text.substr(i + 1);
    mpz_class num(digits);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(text.size() - i - 1));
    mpq_class q(num, den);
    q.canonicalize();
    return Rat(std::move(q));
  }
  return bad("trailing characters");
}

inline std::string to_string(const Rat& r) { return r.str(); }

}  // namespace weil
