#pragma once

#include "qaut/polynomial.hpp"

#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qaut {

// Which value the deformation parameter takes: a primitive N-th root of unity, or a formal unit.
class ZetaMode {
 public:
  static ZetaMode generic() { return ZetaMode(0); }
  static ZetaMode root_of_unity(int order) {
    if (order < 1) throw std::invalid_argument("root of unity order must be positive");
    return ZetaMode(order);
  }

  bool is_generic() const { return order_ == 0; }
  int order() const { return order_; }

  std::string to_string() const { return is_generic() ? "generic" : "root " + std::to_string(order_); }

  friend bool operator==(ZetaMode, ZetaMode) = default;

 private:
  explicit ZetaMode(int order) : order_(order) {}
  int order_;
};

class ScalarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exact element of Q(zeta_N) or of Q(zeta). Rational values are mode-free and
// combine with scalars of any mode.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long value) : num_{poly::Coeff(value)} { poly::trim(num_); }  // NOLINT
  Scalar(int value) : Scalar(static_cast<long>(value)) {}               // NOLINT
  explicit Scalar(const mpq_class& value) : num_{value} { poly::trim(num_); }

  static Scalar rational(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(q);
  }

  static Scalar phase(long long exponent, ZetaMode mode) {
    if (mode.is_generic()) {
      Scalar s;
      s.order_ = 0;
      s.shift_ = exponent;
      s.num_ = {poly::Coeff(1)};
      s.canonicalize();
      return s;
    }
    const auto cyc = poly::cyclotomic(mode.order());
    const long long n = mode.order();
    Scalar s;
    s.order_ = mode.order();
    s.cyc_ = cyc;
    s.num_ = cyc->powers[static_cast<std::size_t>(((exponent % n) + n) % n)];
    s.canonicalize();
    return s;
  }

  // Element of mode from a Laurent polynomial sum_i coeffs[i] zeta^{shift+i}.
  static Scalar from_laurent(const poly::Poly& coeffs, long long shift, ZetaMode mode) {
    Scalar s;
    if (mode.is_generic()) {
      s.order_ = 0;
      s.shift_ = shift;
      s.num_ = coeffs;
    } else {
      s.order_ = mode.order();
      s.cyc_ = poly::cyclotomic(mode.order());
      s.num_ = poly::reduce_cyclotomic(coeffs, shift, *s.cyc_);
    }
    s.canonicalize();
    return s;
  }

  bool is_zero() const { return num_.empty(); }
  bool is_one() const { return is_rational() && num_.size() == 1 && num_[0] == 1; }
  bool is_rational() const { return order_ == kAnyMode; }
  // Single-term value c*zeta^k; invertible inside the Laurent ring in generic mode.
  bool is_monomial() const {
    if (is_zero() || !den_.empty()) return false;
    int nz = 0;
    for (const auto& c : num_) nz += sgn(c) != 0 ? 1 : 0;
    return nz == 1;
  }
  bool has_denominator() const { return !den_.empty(); }
  std::optional<ZetaMode> mode() const {
    if (order_ == kAnyMode) return std::nullopt;
    return order_ == 0 ? ZetaMode::generic() : ZetaMode::root_of_unity(order_);
  }
  const mpq_class& rational_value() const {
    static const mpq_class zero(0);
    if (!is_rational()) throw ScalarError("scalar is not rational");
    return num_.empty() ? zero : num_[0];
  }

  // Lowest exponent and coefficient list of the numerator (generic) or cyclotomic basis coefficients.
  long long shift() const { return shift_; }
  const poly::Poly& numerator() const { return num_; }
  const poly::Poly& denominator() const { return den_; }

  Scalar operator-() const {
    Scalar r(*this);
    for (auto& c : r.num_) c = -c;
    return r;
  }

  friend Scalar operator+(const Scalar& a, const Scalar& b) { return combine(a, b, false); }
  friend Scalar operator-(const Scalar& a, const Scalar& b) { return combine(a, b, true); }
  friend Scalar operator*(const Scalar& a, const Scalar& b);
  friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
  Scalar& operator+=(const Scalar& b) { return *this = *this + b; }
  Scalar& operator-=(const Scalar& b) { return *this = *this - b; }
  Scalar& operator*=(const Scalar& b) { return *this = *this * b; }
  Scalar& operator/=(const Scalar& b) { return *this = *this / b; }

  friend bool operator==(const Scalar& a, const Scalar& b) {
    return a.order_ == b.order_ && a.shift_ == b.shift_ && a.num_ == b.num_ && a.den_ == b.den_;
  }

  Scalar inverse() const;
  // Complex conjugation: zeta -> zeta^{-1}, rationals fixed.
  Scalar star() const;
  // Evaluate a generic scalar at a primitive N-th root of unity.
  Scalar specialize(ZetaMode target) const;

  std::string to_string() const;
  static Scalar parse(std::string_view text, ZetaMode mode);

  friend std::ostream& operator<<(std::ostream& os, const Scalar& s) { return os << s.to_string(); }

 private:
  static constexpr int kAnyMode = -1;

  static int joint_order(const Scalar& a, const Scalar& b) {
    if (a.order_ == kAnyMode) return b.order_;
    if (b.order_ == kAnyMode || a.order_ == b.order_) return a.order_;
    throw ScalarError("scalars from different zeta modes combined");
  }

  static Scalar combine(const Scalar& a, const Scalar& b, bool subtract);
  void canonicalize();

  int order_ = kAnyMode;
  std::shared_ptr<const poly::Cyclotomic> cyc_;
  long long shift_ = 0;
  poly::Poly num_;
  poly::Poly den_;  // generic mode only; empty means 1
};

inline void Scalar::canonicalize() {
  poly::trim(num_);
  if (num_.empty()) {
    *this = Scalar();
    return;
  }
  if (order_ > 0) {
    shift_ = 0;
    den_.clear();
    if (num_.size() == 1) {
      order_ = kAnyMode;
      cyc_.reset();
    }
    return;
  }
  if (order_ == kAnyMode) {
    if (num_.size() != 1 || shift_ != 0 || !den_.empty()) throw ScalarError("malformed rational scalar");
    return;
  }
  // Generic: move factors of zeta out of numerator and denominator into the shift.
  std::size_t lead = 0;
  while (sgn(num_[lead]) == 0) ++lead;
  if (lead > 0) {
    num_.erase(num_.begin(), num_.begin() + static_cast<std::ptrdiff_t>(lead));
    shift_ += static_cast<long long>(lead);
  }
  if (!den_.empty()) {
    poly::trim(den_);
    if (den_.empty()) throw ScalarError("division by zero");
    std::size_t dl = 0;
    while (sgn(den_[dl]) == 0) ++dl;
    if (dl > 0) {
      den_.erase(den_.begin(), den_.begin() + static_cast<std::ptrdiff_t>(dl));
      shift_ -= static_cast<long long>(dl);
    }
    if (den_.size() > 1) {
      poly::Poly g = poly::gcd(num_, den_);
      if (g.size() > 1) {
        num_ = poly::divmod(num_, g).first;
        den_ = poly::divmod(den_, g).first;
      }
    }
    const poly::Coeff lc = den_.back();
    if (lc != 1) {
      num_ = poly::scale(num_, 1 / lc);
      den_ = poly::scale(den_, 1 / lc);
    }
    if (den_.size() == 1) den_.clear();
  }
  if (den_.empty() && shift_ == 0 && num_.size() == 1) order_ = kAnyMode;
}

inline Scalar Scalar::combine(const Scalar& a, const Scalar& b, bool subtract) {
  const int order = joint_order(a, b);
  if (b.is_zero()) return a;
  if (a.is_zero()) return subtract ? -b : b;
  Scalar r;
  r.order_ = order;
  if (order > 0) {
    r.cyc_ = a.cyc_ ? a.cyc_ : b.cyc_;
    r.num_ = subtract ? poly::sub(a.num_, b.num_) : poly::add(a.num_, b.num_);
    r.canonicalize();
    return r;
  }
  if (order == kAnyMode) {
    r.num_ = {subtract ? mpq_class(a.num_[0] - b.num_[0]) : mpq_class(a.num_[0] + b.num_[0])};
    r.canonicalize();
    return r;
  }
  // Generic: a = x^sa pa/qa, b = x^sb pb/qb.
  const long long s = std::min(a.shift_, b.shift_);
  auto lift = [&](const Scalar& v) {
    poly::Poly p(static_cast<std::size_t>(v.shift_ - s), poly::Coeff(0));
    p.insert(p.end(), v.num_.begin(), v.num_.end());
    return p;
  };
  poly::Poly pa = lift(a), pb = lift(b);
  if (!a.den_.empty()) pb = poly::mul(pb, a.den_);
  if (!b.den_.empty()) pa = poly::mul(pa, b.den_);
  r.shift_ = s;
  r.num_ = subtract ? poly::sub(pa, pb) : poly::add(pa, pb);
  if (!a.den_.empty() && !b.den_.empty()) {
    r.den_ = poly::mul(a.den_, b.den_);
  } else if (!a.den_.empty()) {
    r.den_ = a.den_;
  } else if (!b.den_.empty()) {
    r.den_ = b.den_;
  }
  r.canonicalize();
  return r;
}

inline Scalar operator*(const Scalar& a, const Scalar& b) {
  const int order = Scalar::joint_order(a, b);
  if (a.is_zero() || b.is_zero()) return Scalar();
  if (a.is_rational() && b.is_rational()) return Scalar(a.num_[0] * b.num_[0]);
  if (a.is_rational() || b.is_rational()) {
    const Scalar& c = a.is_rational() ? a : b;
    const Scalar& v = a.is_rational() ? b : a;
    Scalar r(v);
    for (auto& x : r.num_) x *= c.num_[0];
    return r;
  }
  Scalar r;
  r.order_ = order;
  if (order > 0) {
    r.cyc_ = a.cyc_;
    r.num_ = poly::reduce_cyclotomic(poly::mul(a.num_, b.num_), 0, *a.cyc_);
    r.canonicalize();
    return r;
  }
  r.shift_ = a.shift_ + b.shift_;
  r.num_ = poly::mul(a.num_, b.num_);
  if (!a.den_.empty() && !b.den_.empty()) {
    r.den_ = poly::mul(a.den_, b.den_);
  } else if (!a.den_.empty()) {
    r.den_ = a.den_;
  } else if (!b.den_.empty()) {
    r.den_ = b.den_;
  }
  r.canonicalize();
  return r;
}

inline Scalar Scalar::inverse() const {
  if (is_zero()) throw ScalarError("division by zero");
  if (is_rational()) return Scalar(1 / num_[0]);
  Scalar r;
  r.order_ = order_;
  if (order_ > 0) {
    r.cyc_ = cyc_;
    r.num_ = poly::inverse_mod(num_, cyc_->phi);
    r.canonicalize();
    return r;
  }
  r.shift_ = -shift_;
  r.num_ = den_.empty() ? poly::Poly{poly::Coeff(1)} : den_;
  r.den_ = num_;
  if (r.den_.size() == 1) {
    r.num_ = poly::scale(r.num_, 1 / r.den_[0]);
    r.den_.clear();
  }
  r.canonicalize();
  return r;
}

inline Scalar Scalar::star() const {
  if (is_zero() || is_rational()) return *this;
  Scalar r;
  r.order_ = order_;
  if (order_ > 0) {
    r.cyc_ = cyc_;
    poly::Poly acc;
    for (std::size_t j = 0; j < num_.size(); ++j) {
      if (sgn(num_[j]) != 0) acc = poly::add(acc, poly::scale(cyc_->neg_powers[j], num_[j]));
    }
    r.num_ = std::move(acc);
    r.canonicalize();
    return r;
  }
  // x^s p(x)/q(x) -> x^{-s-deg p+deg q} rev(p)/rev(q)
  r.num_.assign(num_.rbegin(), num_.rend());
  r.shift_ = -shift_ - poly::degree(num_);
  if (!den_.empty()) {
    r.den_.assign(den_.rbegin(), den_.rend());
    r.shift_ += poly::degree(den_);
  }
  r.canonicalize();
  return r;
}

inline Scalar Scalar::specialize(ZetaMode target) const {
  if (is_rational() || is_zero()) return *this;
  if (order_ != 0) {
    if (target.order() == order_) return *this;
    throw ScalarError("only generic scalars can be specialised");
  }
  if (target.is_generic()) return *this;
  Scalar n = from_laurent(num_, shift_, target);
  if (den_.empty()) return n;
  Scalar d = from_laurent(den_, 0, target);
  if (d.is_zero()) throw ScalarError("denominator vanishes at the requested root of unity");
  return n / d;
}

namespace detail {

inline std::string format_coeff(const mpq_class& c) { return c.get_str(); }

inline std::string format_poly(const poly::Poly& p, long long shift) {
  std::string out;
  bool first = true;
  for (std::size_t k = p.size(); k-- > 0;) {
    const mpq_class& c = p[k];
    if (sgn(c) == 0) continue;
    const long long e = static_cast<long long>(k) + shift;
    mpq_class mag = abs(c);
    if (first) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    first = false;
    if (e == 0) {
      out += format_coeff(mag);
      continue;
    }
    if (mag != 1) out += format_coeff(mag) + "*";
    out += "zeta";
    if (e != 1) out += "^" + std::to_string(e);
  }
  return first ? "0" : out;
}

}  // namespace detail

inline std::string Scalar::to_string() const {
  if (is_zero()) return "0";
  if (is_rational()) return detail::format_coeff(num_[0]);
  if (den_.empty()) return detail::format_poly(num_, shift_);
  return "(" + detail::format_poly(num_, shift_) + ")/(" + detail::format_poly(den_, 0) + ")";
}

namespace detail {

class ScalarParser {
 public:
  ScalarParser(std::string_view text, ZetaMode mode) : text_(text), mode_(mode) {}

  Scalar parse() {
    Scalar v = expression();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing characters");
    return v;
  }

 private:
  // expression := ['-'] term (('+'|'-') term)* ; a parenthesised pair may be divided.
  Scalar expression() {
    Scalar acc;
    skip_ws();
    bool negate = false;
    if (peek() == '-') {
      ++pos_;
      negate = true;
    }
    Scalar t = factor();
    acc = negate ? -t : t;
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Scalar next = factor();
      acc = c == '+' ? acc + next : acc - next;
    }
    return acc;
  }

  Scalar factor() {
    Scalar v = atom();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c == '*') {
        ++pos_;
        v = v * atom();
      } else if (c == '/') {
        ++pos_;
        v = v / atom();
      } else {
        break;
      }
    }
    return v;
  }

  Scalar atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Scalar v = expression();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Scalar(mpq_class(std::string(text_.substr(start, pos_ - start))));
    }
    if (text_.substr(pos_, 4) == "zeta") {
      pos_ += 4;
      long long e = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
          neg = true;
          ++pos_;
        }
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected exponent");
        e = std::stoll(std::string(text_.substr(start, pos_ - start)));
        if (neg) e = -e;
      }
      return Scalar::phase(e, mode_);
    }
    fail("expected number, 'zeta' or '('");
    return {};
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ScalarError("cannot parse scalar '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  ZetaMode mode_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Scalar Scalar::parse(std::string_view text, ZetaMode mode) { return detail::ScalarParser(text, mode).parse(); }

inline Scalar phase(long long exponent, ZetaMode mode) { return Scalar::phase(exponent, mode); }

// Braiding bicharacter on Z x Z.
inline Scalar r_matrix(long long l, long long m, ZetaMode mode) { return Scalar::phase(-l * m, mode); }

}  // namespace qaut
