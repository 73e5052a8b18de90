#ifndef SPECREG_DELTA_HPP
#define SPECREG_DELTA_HPP

// Large-parameter expansion of the characteristic determinant
//
//   Delta(lambda) = delta_{-1}(lambda) e^{-lambda} + delta_0(lambda)
//                 + delta_1(lambda) e^{lambda},
//
// obtained by substituting the asymptotic fundamental solutions into the
// boundary forms.  Each weight expands as
// delta_k(lambda) = sum_{i>=0} lambda^{1-i} delta_k^{(1-i)}; the table below
// holds those coefficients up to a chosen depth.  The order of the first
// nonvanishing delta_{-1}^{(1-i)} is what the classifier reads off.

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "specreg/boundary.hpp"
#include "specreg/expansion.hpp"
#include "specreg/smooth_function.hpp"

namespace specreg {

template <class B>
class DeltaTable {
 public:
  using C = Complex<typename B::Real>;

  DeltaTable() = default;
  DeltaTable(int m, std::array<std::vector<C>, 3> coeffs,
             std::array<std::vector<double>, 3> scales)
      : m_(m), coeffs_(std::move(coeffs)), scales_(std::move(scales)) {}

  int order() const { return m_; }

  // k in {-1, 0, 1}; i in 0..order(): coefficient of lambda^{1-i} in delta_k.
  const C& delta(int k, int i) const {
    check(k, i);
    return coeffs_[k + 1][i];
  }

  // Running magnitude of the terms summed into delta(k, i); the float
  // backend's zero tests are taken relative to this.
  double scale(int k, int i) const {
    check(k, i);
    return scales_[k + 1][i];
  }

 private:
  int m_ = -1;
  std::array<std::vector<C>, 3> coeffs_;
  std::array<std::vector<double>, 3> scales_;

  void check(int k, int i) const {
    if (k < -1 || k > 1 || i < 0 || i > m_)
      throw std::out_of_range("delta table index");
  }
};

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Builds the coefficient table from endpoint values of the expansion table.
template <class B>
DeltaTable<B> delta_table(const BoundaryData<B>& bc, const ExpansionTable<B>& t) {
  using C = Complex<typename B::Real>;
  if (bc.has_derivative_in_second())
    throw PreconditionError("second boundary form must be reduced to order zero");
  if (!bc.reduced_gate())
    throw PreconditionError("boundary forms violate the reduced-shape gate");

  const int m = t.order();
  // endpoint series: ep[i-1][nu][e][s] = g_{i,nu}^{(s)}(e)
  std::array<std::array<std::array<std::vector<C>, 2>, 2>, 2> ep;
  for (int i = 1; i <= 2; ++i)
    for (int nu = 0; nu <= 1; ++nu) {
      for (int s = 0; s <= m; ++s) {
        ep[i - 1][nu][0].push_back(t.g(i, nu, s).eval0());
        ep[i - 1][nu][1].push_back(t.g(i, nu, s).eval1());
      }
    }
  auto P = [&](int i, int nu, int e) -> const std::vector<C>& {
    return ep[i - 1][nu][e];
  };

  std::array<std::vector<C>, 3> coeffs;
  std::array<std::vector<double>, 3> scales;
  for (auto& v : coeffs) v.assign(m + 1, C{});
  for (auto& v : scales) v.assign(m + 1, 0.0);

  // accumulate c * [PQ]_i or c * [PQ]_{i-1} into slot (k, i)
  auto add_product = [&](int k, const C& c, const std::vector<C>& p,
                         const std::vector<C>& q, int shift) {
    if (is_zero<B>(c)) return;
    double cmag = magnitude_estimate<B>(c);
    for (int i = 0; i <= m; ++i) {
      int n = i - shift;
      if (n < 0) continue;
      C acc{};
      double smag = 0.0;
      for (int j = 0; j <= n; ++j) {
        C term = p[j] * q[n - j];
        smag += cmag * magnitude_estimate<B>(term);
        acc += term;
      }
      coeffs[k + 1][i] += c * acc;
      scales[k + 1][i] += smag;
    }
  };

  const C neg_one{B::from_int(-1)};

  // delta_{-1} = lambda [a20 b11 P20(0) P11(1) - a11 b20 P10(1) P21(0)]
  //              + [(a20 b10 - a10 b20) P20(0) P10(1)]
  add_product(-1, bc.a20 * bc.b11, P(2, 0, 0), P(1, 1, 1), 0);
  add_product(-1, neg_one * bc.a11 * bc.b20, P(1, 0, 1), P(2, 1, 0), 0);
  add_product(-1, bc.a20 * bc.b10 - bc.a10 * bc.b20, P(2, 0, 0), P(1, 0, 1), 1);

  // delta_1 = lambda [a11 b20 P11(0) P20(1) - a20 b11 P21(1) P10(0)]
  //           + [(a10 b20 - a20 b10) P10(0) P20(1)]
  add_product(1, bc.a11 * bc.b20, P(1, 1, 0), P(2, 0, 1), 0);
  add_product(1, neg_one * bc.a20 * bc.b11, P(2, 1, 1), P(1, 0, 0), 0);
  add_product(1, bc.a10 * bc.b20 - bc.a20 * bc.b10, P(1, 0, 0), P(2, 0, 1), 1);

  // delta_0 = lambda [a11 a20 (P11(0) P20(0) - P21(0) P10(0))
  //                   + b11 b20 (P11(1) P20(1) - P21(1) P10(1))]
  add_product(0, bc.a11 * bc.a20, P(1, 1, 0), P(2, 0, 0), 0);
  add_product(0, neg_one * bc.a11 * bc.a20, P(2, 1, 0), P(1, 0, 0), 0);
  add_product(0, bc.b11 * bc.b20, P(1, 1, 1), P(2, 0, 1), 0);
  add_product(0, neg_one * bc.b11 * bc.b20, P(2, 1, 1), P(1, 0, 1), 0);

  return DeltaTable<B>(m, std::move(coeffs), std::move(scales));
}

// Low-order coefficients of delta_{-1} straight from the boundary data and
// endpoint data of q, without building the expansion table.  The depth-2..4
// entries require s1 = s2 = 0; validity is reported, not assumed.
template <class B>
struct DeltaClosedForms {
  using C = Complex<typename B::Real>;
  C depth0;  // delta_{-1}^{(1)}  = -(a20 b11 + b20 a11)
  C depth1;  // delta_{-1}^{(0)}  = -(1/2)(a20 b11 + b20 a11) Int q - (a10 b20 - b10 a20)
  bool tail_valid = false;  // depth 2..4 forms require s1 = s2 = 0
  std::string tail_reason;
  C depth2;  // (1/2)  a20 b11 [q(1) - q(0)]
  C depth3;  // (1/4)  a20 b11 [(q'(1) + q'(0)) + (q(1) - q(0)) Int q]
  C depth4;  // (1/8)  a20 b11 [(q''(1) - q''(0)) + (q'(1) + q'(0)) Int q
             //                 + (q(1)^2 - q(0)^2) + (q(1) - q(0))^2
             //                 + 2 (q(1) - q(0)) Int q g_{1,0}^{(1)}]
};

template <class B>
DeltaClosedForms<B> delta_closed_forms(const BoundaryData<B>& bc,
                                       const SmoothFunction<B>& q) {
  using Fn = SmoothFunction<B>;
  using C = Complex<typename B::Real>;
  DeltaClosedForms<B> out;

  const C s1 = bc.s1();
  const C s2 = bc.s2();
  const C qint = q.definite_integral01();
  out.depth0 = -s1;
  out.depth1 = (-s1) * C{B::from_rational(Rational(1, 2))} * qint - s2;

  if (!is_zero<B>(s1) || !is_zero<B>(s2)) {
    out.tail_valid = false;
    out.tail_reason = is_zero<B>(s1) ? "s2 = a10 b20 - b10 a20 is nonzero"
                                     : "s1 = a11 b20 + b11 a20 is nonzero";
    return out;
  }
  out.tail_valid = true;

  const C cp = bc.corner_product();
  Fn dq = q.derivative();
  Fn ddq = dq.derivative();
  const C q0 = q.eval0(), q1 = q.eval1();
  const C dq0 = dq.eval0(), dq1 = dq.eval1();
  const C ddq0 = ddq.eval0(), ddq1 = ddq.eval1();
  const C dq_jump = q1 - q0;

  out.depth2 = cp * C{B::from_rational(Rational(1, 2))} * dq_jump;
  out.depth3 = cp * C{B::from_rational(Rational(1, 4))} * ((dq1 + dq0) + dq_jump * qint);

  Fn g1 = q.antiderivative0().scaled(Rational(1, 2));
  const C qg1_int = (q * g1).definite_integral01();
  C bracket = (ddq1 - ddq0) + (dq1 + dq0) * qint + (q1 * q1 - q0 * q0) +
              dq_jump * dq_jump + C{B::from_int(2)} * dq_jump * qg1_int;
  out.depth4 = cp * C{B::from_rational(Rational(1, 8))} * bracket;
  return out;
}

// Single-branch form of delta_{-1}^{(1-i)}, valid when s1 = s2 = 0 and
// a20 b11 != 0:
//
//   delta_{-1}^{(1-i)} = a20 b11 sum_{j=0}^{i} (-1)^j
//       [ g_{1,0}^{(j)}(0) g_{1,1}^{(i-j)}(1) - g_{1,1}^{(j)}(0) g_{1,0}^{(i-j)}(1) ].
template <class B>
Complex<typename B::Real> reduced_delta(const BoundaryData<B>& bc,
                                        const ExpansionTable<B>& t, int i) {
  using C = Complex<typename B::Real>;
  if (i < 0 || i > t.order()) throw std::out_of_range("depth outside table range");
  if (!is_zero<B>(bc.s1()))
    throw PreconditionError("reduced form requires s1 = a11 b20 + b11 a20 = 0");
  if (!is_zero<B>(bc.s2()))
    throw PreconditionError("reduced form requires s2 = a10 b20 - b10 a20 = 0");
  if (is_zero<B>(bc.corner_product()))
    throw PreconditionError("reduced form requires a20 b11 != 0");

  C acc{};
  for (int j = 0; j <= i; ++j) {
    C term = t.g(1, 0, j).eval0() * t.g(1, 1, i - j).eval1() -
             t.g(1, 1, j).eval0() * t.g(1, 0, i - j).eval1();
    if (j % 2 == 1) term = -term;
    acc += term;
  }
  return bc.corner_product() * acc;
}

inline DeltaTable<FloatBackend> to_float(const DeltaTable<ExactBackend>& t) {
  std::array<std::vector<Complex<double>>, 3> coeffs;
  std::array<std::vector<double>, 3> scales;
  for (int k = -1; k <= 1; ++k)
    for (int i = 0; i <= t.order(); ++i) {
      const auto& z = t.delta(k, i);
      coeffs[k + 1].push_back({z.re.to_double(), z.im.to_double()});
      scales[k + 1].push_back(t.scale(k, i));
    }
  return DeltaTable<FloatBackend>(t.order(), std::move(coeffs), std::move(scales));
}

// delta_k(lambda) truncated at the table depth.
inline std::complex<double> delta_weight_poly(const DeltaTable<FloatBackend>& t, int k,
                                              std::complex<double> lambda) {
  std::complex<double> acc = 0.0;
  std::complex<double> pw = lambda;  // lambda^{1-i} starting at i = 0
  for (int i = 0; i <= t.order(); ++i) {
    const auto& c = t.delta(k, i);
    acc += std::complex<double>(c.re, c.im) * pw;
    pw /= lambda;
  }
  return acc;
}

// Truncated Delta(lambda) = sum_k delta_k(lambda) e^{k lambda}.
inline std::complex<double> asymptotic_Delta(const DeltaTable<FloatBackend>& t,
                                             std::complex<double> lambda) {
  std::complex<double> acc = 0.0;
  for (int k = -1; k <= 1; ++k)
    acc += delta_weight_poly(t, k, lambda) * std::exp(double(k) * lambda);
  return acc;
}

}  // namespace specreg

#endif  // SPECREG_DELTA_HPP
