#ifndef SPECREG_SMOOTH_FUNCTION_HPP
#define SPECREG_SMOOTH_FUNCTION_HPP

// Closed function algebra on [0,1]: finite sums
//
//   f(x) = P_0(x) + sum_k [ P_k(x) cos(tau k x) + Q_k(x) sin(tau k x) ],
//
// with polynomial amplitudes over the backend's complex scalar ring and
// tau = 2*pi.  Pure polynomials are the k=0 case.  The family is closed under
// addition, multiplication, differentiation and antidifferentiation, which is
// what the series recursions downstream require; antiderivatives of harmonics
// introduce tau^{-1} factors, hence the Laurent scalar ring in the exact
// backend.

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "specreg/scalars.hpp"

namespace specreg {

inline constexpr int kMaxPolyDegree = 64;
inline constexpr int kMaxHarmonic = 64;

template <class B>
class SmoothFunction {
 public:
  using Real = typename B::Real;
  using C = Complex<Real>;
  using Poly = std::vector<C>;  // ascending powers, no trailing zeros

  struct Harmonic {
    int k = 0;     // k >= 1
    Poly cos_amp;  // coefficient of cos(tau k x)
    Poly sin_amp;  // coefficient of sin(tau k x)
    bool operator==(const Harmonic&) const = default;
  };

  SmoothFunction() = default;

  static SmoothFunction zero() { return SmoothFunction(); }

  static SmoothFunction constant(const C& c) {
    SmoothFunction f;
    f.base_ = {c};
    f.normalize();
    return f;
  }

  static SmoothFunction polynomial(Poly coeffs) {
    SmoothFunction f;
    f.base_ = std::move(coeffs);
    f.normalize();
    return f;
  }

  // c * x^n
  static SmoothFunction monomial(int n, const C& c) {
    SmoothFunction f;
    f.base_.assign(static_cast<std::size_t>(n) + 1, C{});
    f.base_.back() = c;
    f.normalize();
    return f;
  }

  static SmoothFunction harmonic_cos(int k, Poly amp) {
    SmoothFunction f;
    if (k == 0) return polynomial(std::move(amp));
    Harmonic h;
    h.k = k;
    h.cos_amp = std::move(amp);
    f.harmonics_[k] = std::move(h);
    f.normalize();
    return f;
  }

  static SmoothFunction harmonic_sin(int k, Poly amp) {
    SmoothFunction f;
    if (k == 0) return SmoothFunction();
    Harmonic h;
    h.k = k;
    h.sin_amp = std::move(amp);
    f.harmonics_[k] = std::move(h);
    f.normalize();
    return f;
  }

  bool is_zero() const { return base_.empty() && harmonics_.empty(); }

  bool is_polynomial() const { return harmonics_.empty(); }

  int poly_degree() const {
    int d = base_.empty() ? -1 : static_cast<int>(base_.size()) - 1;
    for (const auto& [k, h] : harmonics_) {
      if (!h.cos_amp.empty()) d = std::max(d, static_cast<int>(h.cos_amp.size()) - 1);
      if (!h.sin_amp.empty()) d = std::max(d, static_cast<int>(h.sin_amp.size()) - 1);
    }
    return d;
  }

  int max_harmonic() const {
    return harmonics_.empty() ? 0 : harmonics_.rbegin()->first;
  }

  const Poly& base() const { return base_; }
  const std::map<int, Harmonic>& harmonics() const { return harmonics_; }

  friend SmoothFunction operator+(const SmoothFunction& a, const SmoothFunction& b) {
    SmoothFunction out = a;
    out.base_ = poly_add(out.base_, b.base_);
    for (const auto& [k, h] : b.harmonics_) {
      Harmonic& dst = out.harmonics_[k];
      dst.k = k;
      dst.cos_amp = poly_add(dst.cos_amp, h.cos_amp);
      dst.sin_amp = poly_add(dst.sin_amp, h.sin_amp);
    }
    out.normalize();
    return out;
  }

  friend SmoothFunction operator-(const SmoothFunction& a) {
    SmoothFunction out = a;
    for (auto& c : out.base_) c = -c;
    for (auto& [k, h] : out.harmonics_) {
      for (auto& c : h.cos_amp) c = -c;
      for (auto& c : h.sin_amp) c = -c;
    }
    return out;
  }

  friend SmoothFunction operator-(const SmoothFunction& a, const SmoothFunction& b) {
    return a + (-b);
  }

  SmoothFunction scaled(const C& c) const {
    SmoothFunction out = *this;
    for (auto& v : out.base_) v = v * c;
    for (auto& [k, h] : out.harmonics_) {
      for (auto& v : h.cos_amp) v = v * c;
      for (auto& v : h.sin_amp) v = v * c;
    }
    out.normalize();
    return out;
  }

  SmoothFunction scaled(const Rational& r) const { return scaled(C{B::from_rational(r)}); }

  friend SmoothFunction operator*(const SmoothFunction& a, const SmoothFunction& b) {
    SmoothFunction out;
    // base*base
    out.base_ = poly_mul(a.base_, b.base_);
    // base*harmonic, both ways
    for (const auto& [k, h] : b.harmonics_) {
      out.add_cos(k, poly_mul(a.base_, h.cos_amp));
      out.add_sin(k, poly_mul(a.base_, h.sin_amp));
    }
    for (const auto& [k, h] : a.harmonics_) {
      out.add_cos(k, poly_mul(h.cos_amp, b.base_));
      out.add_sin(k, poly_mul(h.sin_amp, b.base_));
    }
    // harmonic*harmonic via product-to-sum
    const C half{B::from_rational(Rational(1, 2))};
    for (const auto& [k1, h1] : a.harmonics_) {
      for (const auto& [k2, h2] : b.harmonics_) {
        Poly pp = poly_mul(h1.cos_amp, h2.cos_amp);
        Poly qq = poly_mul(h1.sin_amp, h2.sin_amp);
        Poly qp = poly_mul(h1.sin_amp, h2.cos_amp);
        Poly pq = poly_mul(h1.cos_amp, h2.sin_amp);
        int ks = k1 + k2;
        int kd = k1 - k2;
        out.add_cos(ks, poly_scale(poly_sub(pp, qq), half));
        out.add_sin(ks, poly_scale(poly_add(qp, pq), half));
        Poly cd = poly_scale(poly_add(pp, qq), half);
        Poly sd = poly_scale(poly_sub(qp, pq), half);
        if (kd >= 0) {
          out.add_cos(kd, cd);
          out.add_sin(kd, sd);
        } else {
          out.add_cos(-kd, cd);
          out.add_sin(-kd, poly_scale(sd, C{B::from_int(-1)}));
        }
      }
    }
    out.normalize();
    return out;
  }

  SmoothFunction derivative() const {
    SmoothFunction out;
    out.base_ = poly_deriv(base_);
    for (const auto& [k, h] : harmonics_) {
      // (P cos + Q sin)' = (P' + a Q) cos + (Q' - a P) sin,  a = tau*k
      C a{B::scale(B::tau_power(1), Rational(k))};
      out.add_cos(k, poly_add(poly_deriv(h.cos_amp), poly_scale(h.sin_amp, a)));
      out.add_sin(k, poly_sub(poly_deriv(h.sin_amp), poly_scale(h.cos_amp, a)));
    }
    out.normalize();
    return out;
  }

  SmoothFunction derivative(int n) const {
    SmoothFunction out = *this;
    for (int i = 0; i < n; ++i) out = out.derivative();
    return out;
  }

  // The antiderivative F with F(0) = 0.
  SmoothFunction antiderivative0() const {
    SmoothFunction out;
    out.base_ = poly_antideriv(base_);
    C drift{};  // accumulated value of the harmonic antiderivatives at 0
    for (const auto& [k, h] : harmonics_) {
      // Particular antiderivative R cos + S sin of P cos + Q sin:
      //   R' + a S = P,  S' - a R = Q,  a = tau*k.
      // Solved by the degree-descending fixed point
      //   R <- P'/a^2 - Q/a - R''/a^2,  then  S = (P - R')/a.
      C a{B::scale(B::tau_power(1), Rational(k))};
      C inv_a{B::div(B::from_int(1), a.re)};
      C inv_a2 = inv_a * inv_a;
      Poly rhs = poly_sub(poly_scale(poly_deriv(h.cos_amp), inv_a2),
                          poly_scale(h.sin_amp, inv_a));
      Poly r = rhs;
      int guard = static_cast<int>(std::max(h.cos_amp.size(), h.sin_amp.size())) + 2;
      for (int it = 0; it < guard; ++it) {
        Poly next = poly_sub(rhs, poly_scale(poly_deriv(poly_deriv(r)), inv_a2));
        if (next == r) break;
        r = std::move(next);
      }
      Poly s = poly_scale(poly_sub(h.cos_amp, poly_deriv(r)), inv_a);
      if (!r.empty()) drift += r.front();  // R(0) contributes at x=0
      out.add_cos(k, std::move(r));
      out.add_sin(k, std::move(s));
    }
    // subtract the value at 0 so the result vanishes there
    if (out.base_.empty()) out.base_.resize(1);
    out.base_[0] -= drift;
    out.normalize();
    return out;
  }

  C eval(const typename B::Coord& x) const {
    require_in_unit_interval(x);
    C acc = poly_eval(base_, x);
    for (const auto& [k, h] : harmonics_) {
      auto [c, s] = circle_point(k, x);
      acc += poly_eval(h.cos_amp, x) * c;
      acc += poly_eval(h.sin_amp, x) * s;
    }
    return acc;
  }

  C eval0() const {
    C acc = base_.empty() ? C{} : base_.front();
    for (const auto& [k, h] : harmonics_)
      if (!h.cos_amp.empty()) acc += h.cos_amp.front();
    return acc;
  }

  C eval1() const { return eval_at_one(); }

  C definite_integral01() const { return antiderivative0().eval_at_one(); }

  friend bool operator==(const SmoothFunction& a, const SmoothFunction& b) {
    return a.base_ == b.base_ && a.harmonics_ == b.harmonics_;
  }
  friend bool operator!=(const SmoothFunction& a, const SmoothFunction& b) {
    return !(a == b);
  }

  // Upper estimate of sup |f| on [0,1] from a coarse sample (double precision).
  double sup_norm_estimate() const {
    double m = 0.0;
    for (int j = 0; j <= 64; ++j) {
      double x = static_cast<double>(j) / 64.0;
      double re = 0.0, im = 0.0;
      eval_double(x, re, im);
      m = std::max(m, std::abs(re) + std::abs(im));
    }
    return m;
  }

  void eval_double(double x, double& re_out, double& im_out) const {
    double re = 0.0, im = 0.0;
    poly_eval_double(base_, x, re, im);
    for (const auto& [k, h] : harmonics_) {
      double c = std::cos(kTau * k * x), s = std::sin(kTau * k * x);
      double pr = 0.0, pi = 0.0, qr = 0.0, qi = 0.0;
      poly_eval_double(h.cos_amp, x, pr, pi);
      poly_eval_double(h.sin_amp, x, qr, qi);
      re += pr * c + qr * s;
      im += pi * c + qi * s;
    }
    re_out = re;
    im_out = im;
  }

 private:
  Poly base_;
  std::map<int, Harmonic> harmonics_;

  void add_cos(int k, Poly p) {
    if (k == 0) {
      base_ = poly_add(base_, p);
      return;
    }
    Harmonic& h = harmonics_[k];
    h.k = k;
    h.cos_amp = poly_add(h.cos_amp, p);
  }

  void add_sin(int k, Poly p) {
    if (k == 0) return;  // sin(0) == 0
    Harmonic& h = harmonics_[k];
    h.k = k;
    h.sin_amp = poly_add(h.sin_amp, p);
  }

  void normalize() {
    poly_trim(base_);
    for (auto it = harmonics_.begin(); it != harmonics_.end();) {
      poly_trim(it->second.cos_amp);
      poly_trim(it->second.sin_amp);
      if (it->second.cos_amp.empty() && it->second.sin_amp.empty())
        it = harmonics_.erase(it);
      else
        ++it;
    }
  }

  static void require_in_unit_interval(const Rational& x) {
    if (x < 0 || x > 1) throw std::domain_error("evaluation point outside [0,1]");
  }
  static void require_in_unit_interval(double x) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("evaluation point outside [0,1]");
  }

  C eval_at_one() const {
    C acc{};
    for (auto it = base_.rbegin(); it != base_.rend(); ++it) acc += *it;
    for (const auto& [k, h] : harmonics_) {
      C pc{};
      for (auto it = h.cos_amp.rbegin(); it != h.cos_amp.rend(); ++it) pc += *it;
      acc += pc;  // cos(tau k) = 1, sin(tau k) = 0 at x = 1
    }
    return acc;
  }

  // cos/sin of tau*k*x for exact coordinates restricted to quarter turns.
  static std::pair<C, C> circle_point(int k, const Rational& x) {
    Rational t = Rational(k) * x;
    mpz_class fl = t.get_num() / t.get_den();  // floor for t >= 0 (x in [0,1])
    Rational frac = t - Rational(fl);
    frac.canonicalize();
    mpz_class den = frac.get_den();
    C one{B::from_int(1)}, zero{};
    if (den == 1) return {one, zero};
    if (den == 2) return {-one, zero};
    if (den == 4) {
      if (frac.get_num() == 1) return {zero, one};
      return {zero, -one};
    }
    throw std::domain_error("exact trig evaluation only at quarter-turn points");
  }
  static std::pair<C, C> circle_point(int k, double x) {
    return {C{std::cos(kTau * k * x)}, C{std::sin(kTau * k * x)}};
  }

  static void poly_trim(Poly& p) {
    while (!p.empty() && specreg::is_zero<B>(p.back())) p.pop_back();
  }

  static Poly poly_add(const Poly& a, const Poly& b) {
    Poly out(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i < a.size()) out[i] += a[i];
      if (i < b.size()) out[i] += b[i];
    }
    poly_trim(out);
    return out;
  }

  static Poly poly_sub(const Poly& a, const Poly& b) {
    Poly nb = b;
    for (auto& c : nb) c = -c;
    return poly_add(a, nb);
  }

  static Poly poly_scale(const Poly& a, const C& c) {
    Poly out = a;
    for (auto& v : out) v = v * c;
    poly_trim(out);
    return out;
  }

  static Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    poly_trim(out);
    return out;
  }

  static Poly poly_deriv(const Poly& a) {
    if (a.size() <= 1) return {};
    Poly out(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i)
      out[i - 1] = a[i] * C{B::from_int(static_cast<long>(i))};
    poly_trim(out);
    return out;
  }

  static Poly poly_antideriv(const Poly& a) {
    if (a.empty()) return {};
    Poly out(a.size() + 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
      C inv{B::from_rational(Rational(1, static_cast<long>(i) + 1))};
      out[i + 1] = a[i] * inv;
    }
    poly_trim(out);
    return out;
  }

  static C poly_eval(const Poly& a, const typename B::Coord& x) {
    C acc{};
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      acc = C{scale_coord(acc.re, x), scale_coord(acc.im, x)};
      acc += *it;
    }
    return acc;
  }

  static Real scale_coord(const Real& v, const Rational& x) { return B::scale(v, x); }
  static Real scale_coord(const Real& v, double x) { return v * x; }

  static void poly_eval_double(const Poly& a, double x, double& re, double& im) {
    double r = 0.0, i = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) {
      r = r * x + B::to_double(it->re);
      i = i * x + B::to_double(it->im);
    }
    re += r;
    im += i;
  }
};

// Structure-preserving conversion to the double backend.
inline SmoothFunction<FloatBackend> to_float(const SmoothFunction<ExactBackend>& f) {
  using FF = SmoothFunction<FloatBackend>;
  typename FF::Poly base;
  for (const auto& c : f.base())
    base.push_back({c.re.to_double(), c.im.to_double()});
  FF out = FF::polynomial(std::move(base));
  for (const auto& [k, h] : f.harmonics()) {
    typename FF::Poly ca, sa;
    for (const auto& c : h.cos_amp) ca.push_back({c.re.to_double(), c.im.to_double()});
    for (const auto& c : h.sin_amp) sa.push_back({c.re.to_double(), c.im.to_double()});
    out = out + FF::harmonic_cos(k, std::move(ca)) + FF::harmonic_sin(k, std::move(sa));
  }
  return out;
}

}  // namespace specreg

#endif  // SPECREG_SMOOTH_FUNCTION_HPP
