#ifndef SPECREG_SCALARS_HPP
#define SPECREG_SCALARS_HPP

// Scalar rings used throughout: exact rationals (GMP), an exact Laurent ring
// in tau = 2*pi over the rationals, and complex numbers over either.  The
// Laurent ring is what keeps trigonometric potentials exact: derivatives and
// antiderivatives of cos/sin harmonics pull in powers of tau that must not be
// rounded.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace specreg {

using Rational = mpq_class;

inline constexpr double kTau = 6.283185307179586476925286766559;

// Parses "p/q" or "p"; throws std::invalid_argument on malformed input.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s) {
    if (!(c == '-' || c == '+' || c == '/' || (c >= '0' && c <= '9')))
      throw std::invalid_argument("bad rational literal: " + s);
  }
  mpq_class v;
  if (v.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (v.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
  v.canonicalize();
  return v;
}

inline std::string rational_to_string(const Rational& r) { return r.get_str(); }

// Sparse Laurent polynomial in tau with rational coefficients, ordered by
// ascending exponent with no zero terms.
class TauRat {
 public:
  TauRat() = default;
  TauRat(const Rational& r) {  // NOLINT: implicit by design
    Rational c = r;
    c.canonicalize();  // GMP comparisons require canonical form
    if (c != 0) terms_.emplace_back(0, c);
  }
  TauRat(long n) : TauRat(Rational(n)) {}  // NOLINT

  static TauRat monomial(int exp, const Rational& coeff) {
    TauRat t;
    Rational c = coeff;
    c.canonicalize();
    if (c != 0) t.terms_.emplace_back(exp, c);
    return t;
  }

  bool is_zero() const { return terms_.empty(); }

  // True when the value lies in Q (only the tau^0 term present).
  bool is_pure_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0);
  }

  Rational rational_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_pure_rational()) throw std::domain_error("value has nonzero tau powers");
    return terms_[0].second;
  }

  const std::vector<std::pair<int, Rational>>& terms() const { return terms_; }

  friend TauRat operator+(const TauRat& a, const TauRat& b) {
    TauRat out;
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        out.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        out.terms_.push_back(b.terms_[j++]);
      } else {
        Rational c = a.terms_[i].second + b.terms_[j].second;
        if (c != 0) out.terms_.emplace_back(a.terms_[i].first, c);
        ++i;
        ++j;
      }
    }
    return out;
  }

  friend TauRat operator-(const TauRat& a) {
    TauRat out = a;
    for (auto& t : out.terms_) t.second = -t.second;
    return out;
  }

  friend TauRat operator-(const TauRat& a, const TauRat& b) { return a + (-b); }

  friend TauRat operator*(const TauRat& a, const TauRat& b) {
    TauRat out;
    for (const auto& ta : a.terms_)
      for (const auto& tb : b.terms_)
        out = out + monomial(ta.first + tb.first, ta.second * tb.second);
    return out;
  }

  TauRat& operator+=(const TauRat& o) { return *this = *this + o; }
  TauRat& operator-=(const TauRat& o) { return *this = *this - o; }
  TauRat& operator*=(const TauRat& o) { return *this = *this * o; }

  friend bool operator==(const TauRat& a, const TauRat& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const TauRat& a, const TauRat& b) { return !(a == b); }

  TauRat scaled(const Rational& coeff) const {
    TauRat out;
    Rational c = coeff;
    c.canonicalize();
    if (c == 0) return out;
    out.terms_ = terms_;
    for (auto& t : out.terms_) t.second *= c;
    return out;
  }

  TauRat shifted(int dexp) const {
    TauRat out = *this;
    for (auto& t : out.terms_) t.first += dexp;
    return out;
  }

  // Division by c*tau^exp; exact in this ring for any nonzero c.
  TauRat divided_by_monomial(int exp, const Rational& coeff) const {
    Rational c = coeff;
    c.canonicalize();
    if (c == 0) throw std::domain_error("division by zero");
    return scaled(Rational(1) / c).shifted(-exp);
  }

  // Exact division; the divisor must be a single monomial.
  TauRat divided_by(const TauRat& d) const {
    if (d.is_zero()) throw std::domain_error("division by zero");
    if (d.terms_.size() != 1)
      throw std::domain_error("division by multi-term tau value not supported");
    return divided_by_monomial(d.terms_[0].first, d.terms_[0].second);
  }

  double to_double() const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.second.get_d() * std::pow(kTau, t.first);
    return acc;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (i) out += " + ";
      out += terms_[i].second.get_str();
      if (terms_[i].first != 0) out += "*tau^" + std::to_string(terms_[i].first);
    }
    return out;
  }

 private:
  std::vector<std::pair<int, Rational>> terms_;
};

// Complex number over a scalar ring T (TauRat or double).
template <class T>
struct Complex {
  T re{};
  T im{};

  Complex() = default;
  Complex(T r) : re(std::move(r)) {}  // NOLINT
  Complex(T r, T i) : re(std::move(r)), im(std::move(i)) {}

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Complex& operator+=(const Complex& o) { return *this = *this + o; }
  Complex& operator-=(const Complex& o) { return *this = *this - o; }
  Complex& operator*=(const Complex& o) { return *this = *this * o; }
  friend bool operator==(const Complex& a, const Complex& b) {
    return a.re == b.re && a.im == b.im;
  }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }

  Complex conj() const { return {re, -im}; }
};

// Backend selecting the coefficient ring: exact (Laurent-tau over Q) or double.
struct ExactBackend {
  static constexpr bool exact = true;
  using Real = TauRat;
  using Coord = Rational;  // abscissa type for exact evaluation

  static Real from_rational(const Rational& r) { return TauRat(r); }
  static Real from_int(long n) { return TauRat(Rational(n)); }
  static Real tau_power(int e) { return TauRat::monomial(e, Rational(1)); }
  static Real scale(const Real& v, const Rational& c) { return v.scaled(c); }
  static Real div(const Real& a, const Real& b) { return a.divided_by(b); }
  static bool is_zero(const Real& v) { return v.is_zero(); }
  static double to_double(const Real& v) { return v.to_double(); }
};

struct FloatBackend {
  static constexpr bool exact = false;
  using Real = double;
  using Coord = double;

  static Real from_rational(const Rational& r) { return r.get_d(); }
  static Real from_int(long n) { return static_cast<double>(n); }
  static Real tau_power(int e) { return std::pow(kTau, e); }
  static Real scale(const Real& v, const Rational& c) { return v * c.get_d(); }
  static Real div(const Real& a, const Real& b) { return a / b; }
  static bool is_zero(const Real& v) { return v == 0.0; }
  static double to_double(const Real& v) { return v; }
};

template <class B>
bool is_zero(const Complex<typename B::Real>& z) {
  return B::is_zero(z.re) && B::is_zero(z.im);
}

template <class B>
double magnitude_estimate(const Complex<typename B::Real>& z) {
  return std::abs(B::to_double(z.re)) + std::abs(B::to_double(z.im));
}

// Complex division; for the exact backend the squared modulus of the divisor
// must be a monomial (always true for pure-rational boundary data).
template <class B>
Complex<typename B::Real> cdiv(const Complex<typename B::Real>& a,
                               const Complex<typename B::Real>& b) {
  using R = typename B::Real;
  R den = b.re * b.re + b.im * b.im;
  if (B::is_zero(den)) throw std::domain_error("complex division by zero");
  Complex<R> num = a * b.conj();
  return {B::div(num.re, den), B::div(num.im, den)};
}

}  // namespace specreg

#endif  // SPECREG_SCALARS_HPP
