#ifndef SPECREG_EXPANSION_HPP
#define SPECREG_EXPANSION_HPP

// Coefficient functions of the large-parameter expansions
//
//   d^nu/dx^nu y_i(x, lambda)
//     = lambda^nu exp((-1)^i lambda x) [ sum_{s=0}^m lambda^{-s} g_{i,nu}^{(s)}(x) + eta ],
//
// for the two fundamental solutions (i = 1, 2) of y'' + q y = lambda^2 y on
// [0,1].  Writing w = (-1)^i and G_s = g_{i,0}^{(s)}, substituting the series
// into the equation forces, order by order in lambda,
//
//   G_0 = 1,   G_{s+1}(x) = -(w/2) * int_0^x (G_s'' + q G_s),
//   g_{i,1}^{(s)} = w G_s + G_{s-1}',
//
// which is the recursion implemented here.  A published variant of the same
// recursion with branch-dependent sign prefactors is kept behind an option
// for diagnostics; its two disagreeing sign branches fail the residual check
// below, which is why the derived form is the default.

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "specreg/smooth_function.hpp"

namespace specreg {

template <class B>
class ExpansionTable {
 public:
  using Fn = SmoothFunction<B>;

  ExpansionTable() = default;
  ExpansionTable(int m, std::array<std::array<std::vector<Fn>, 2>, 2> entries)
      : m_(m), entries_(std::move(entries)) {}

  int order() const { return m_; }

  // i in {1,2}, nu in {0,1}, 0 <= s <= order()
  const Fn& g(int i, int nu, int s) const {
    if (i < 1 || i > 2 || nu < 0 || nu > 1 || s < 0 || s > m_)
      throw std::out_of_range("expansion table index");
    return entries_[i - 1][nu][s];
  }

 private:
  int m_ = -1;
  std::array<std::array<std::vector<Fn>, 2>, 2> entries_;
};

struct ExpansionOptions {
  // Use the published sign-prefactor variant of the recursion (diagnostics
  // only; two of its four (i, nu) branches are internally inconsistent).
  bool published_prefactors = false;
};

inline Rational pow_rational(const Rational& base, int e) {
  Rational out(1);
  for (int k = 0; k < e; ++k) out *= base;
  return out;
}

template <class B>
ExpansionTable<B> build_expansion_table(const SmoothFunction<B>& q, int m,
                                        const ExpansionOptions& opts = {}) {
  using Fn = SmoothFunction<B>;
  if (m < 0) throw std::invalid_argument("expansion order must be >= 0");
  std::array<std::array<std::vector<Fn>, 2>, 2> entries;
  for (int i = 1; i <= 2; ++i) {
    const int w = (i == 1) ? -1 : 1;
    std::vector<Fn>& g0 = entries[i - 1][0];
    std::vector<Fn>& g1 = entries[i - 1][1];
    g0.resize(m + 1);
    g1.resize(m + 1);
    if (!opts.published_prefactors) {
      g0[0] = Fn::constant({B::from_int(1)});
      for (int s = 0; s < m; ++s) {
        Fn integrand = g0[s].derivative(2) + q * g0[s];
        g0[s + 1] = integrand.antiderivative0().scaled(Rational(-w, 2));
      }
      g1[0] = Fn::constant({B::from_int(w)});
      for (int s = 1; s <= m; ++s)
        g1[s] = g0[s].scaled(Rational(w)) + g0[s - 1].derivative();
    } else {
      for (int nu = 0; nu <= 1; ++nu) {
        std::vector<Fn>& g = entries[i - 1][nu];
        g[0] = Fn::constant({B::from_int(nu % 2 == 0 ? 1 : -1)});
        if (m >= 1) {
          Rational pre = pow_rational(Rational(-1, 2), i * (nu + 1) - 1);
          g[1] = q.antiderivative0().scaled(pre);
        }
        for (int s = 2; s <= m; ++s) {
          Rational pre = pow_rational(Rational(-1, 2), i * (nu + 1) - 1);
          Fn acc = (q * g0[s - 1]).antiderivative0().scaled(pre);
          for (int j = 0; j <= s - 2; ++j) {
            Rational pre2 = pow_rational(Rational(-1, 2), (i - 1) * (nu + s - j));
            acc = acc + (q * g0[j]).derivative(s - j - 2).scaled(pre2);
          }
          g[s] = acc;
        }
      }
    }
  }
  return ExpansionTable<B>(m, std::move(entries));
}

// Symbolic residual of the truncated series: substituting
// y_m = exp(w lambda x) sum_{s<=m} lambda^{-s} G_s into y'' + q y - lambda^2 y
// and collecting powers gives, for u = 0..m+1, the coefficient of
// lambda^{2-u} as
//
//   C_u = 2 w G_{u-1}' + G_{u-2}'' + q G_{u-2}.
//
// The recursion is correct iff every C_u vanishes identically; the leftover
// order u = m+2 is what the remainder bound absorbs.
template <class B>
std::vector<SmoothFunction<B>> residual_coefficients(const SmoothFunction<B>& q,
                                                     const ExpansionTable<B>& t, int i) {
  using Fn = SmoothFunction<B>;
  const int w = (i == 1) ? -1 : 1;
  const int m = t.order();
  std::vector<Fn> out;
  for (int u = 0; u <= m + 1; ++u) {
    Fn c;
    if (u >= 1) c = c + t.g(i, 0, u - 1).derivative().scaled(Rational(2 * w));
    if (u >= 2) c = c + t.g(i, 0, u - 2).derivative(2) + q * t.g(i, 0, u - 2);
    out.push_back(c);
  }
  return out;
}

// Iterated antiderivative chain q_j built from the branch-1 coefficients:
//   q_0(x) = int_0^x q,   q_j(x) = 2^j int_0^x q * g_{1,0}^{(j)},
// used by the composition reconstruction and the low-order determinant
// coefficient formulas.
template <class B>
std::vector<SmoothFunction<B>> q_family(const SmoothFunction<B>& q,
                                        const ExpansionTable<B>& t) {
  using Fn = SmoothFunction<B>;
  std::vector<Fn> out;
  mpz_class two_j = 1;
  for (int j = 0; j <= t.order(); ++j) {
    Fn f = (q * t.g(1, 0, j)).antiderivative0().scaled(Rational(two_j));
    out.push_back(f);
    two_j *= 2;
  }
  return out;
}

// Numeric evaluation of the truncated series for d^nu y_i / dx^nu.
inline std::complex<double> eval_asymptotic_solution(const ExpansionTable<FloatBackend>& t,
                                                     int i, int nu, double x,
                                                     std::complex<double> lambda) {
  if (i < 1 || i > 2 || nu < 0 || nu > 1)
    throw std::out_of_range("branch index");
  const double w = (i == 1) ? -1.0 : 1.0;
  std::complex<double> sum = 0.0;
  std::complex<double> lam_pow = 1.0;
  for (int s = 0; s <= t.order(); ++s) {
    double re = 0.0, im = 0.0;
    t.g(i, nu, s).eval_double(x, re, im);
    sum += std::complex<double>(re, im) / lam_pow;
    lam_pow *= lambda;
  }
  std::complex<double> pref = (nu == 1) ? lambda : std::complex<double>(1.0);
  return pref * std::exp(w * lambda * x) * sum;
}

inline ExpansionTable<FloatBackend> to_float(const ExpansionTable<ExactBackend>& t) {
  std::array<std::array<std::vector<SmoothFunction<FloatBackend>>, 2>, 2> entries;
  for (int i = 1; i <= 2; ++i)
    for (int nu = 0; nu <= 1; ++nu)
      for (int s = 0; s <= t.order(); ++s)
        entries[i - 1][nu].push_back(to_float(t.g(i, nu, s)));
  return ExpansionTable<FloatBackend>(t.order(), std::move(entries));
}

}  // namespace specreg

#endif  // SPECREG_EXPANSION_HPP
