#ifndef SPECREG_BOUNDARY_HPP
#define SPECREG_BOUNDARY_HPP

// Two-point boundary forms for y'' + q y = lambda^2 y on [0,1]:
//
//   U_1(y) = a11 y'(0) + a10 y(0) + b11 y'(1) + b10 y(1)
//   U_2(y) = a21 y'(0) + a20 y(0) + b21 y'(1) + b20 y(1)
//
// The classifier works on the reduced shape with a21 = b21 = 0, i.e. U_2 of
// order zero, normalized so that (a11, b11) != (0, 0) and (a20, b20) != (0, 0).

#include <string>

#include "specreg/scalars.hpp"

namespace specreg {

template <class B>
struct BoundaryData {
  using C = Complex<typename B::Real>;

  C a11, a10, b11, b10;  // first form
  C a20, b20;            // second form, zero order
  C a21, b21;            // second form derivative part (general shape only)

  bool has_derivative_in_second() const {
    return !is_zero<B>(a21) || !is_zero<B>(b21);
  }

  // Gate for the reduced shape: each form must be nontrivial at its order.
  bool reduced_gate() const {
    return (!is_zero<B>(a11) || !is_zero<B>(b11)) &&
           (!is_zero<B>(a20) || !is_zero<B>(b20));
  }

  // s1 = a11 b20 + b11 a20: nonzero iff the problem is Birkhoff regular.
  C s1() const { return a11 * b20 + b11 * a20; }
  // s2 = a10 b20 - b10 a20: the next coefficient down when s1 = 0.
  C s2() const { return a10 * b20 - b10 * a20; }
  // product controlling whether the exponential-weight coefficients survive
  // once s1 = s2 = 0
  C corner_product() const { return a20 * b11; }
};

inline BoundaryData<FloatBackend> to_float(const BoundaryData<ExactBackend>& b) {
  auto cv = [](const Complex<TauRat>& z) {
    return Complex<double>{z.re.to_double(), z.im.to_double()};
  };
  BoundaryData<FloatBackend> out;
  out.a11 = cv(b.a11);
  out.a10 = cv(b.a10);
  out.b11 = cv(b.b11);
  out.b10 = cv(b.b10);
  out.a20 = cv(b.a20);
  out.b20 = cv(b.b20);
  out.a21 = cv(b.a21);
  out.b21 = cv(b.b21);
  return out;
}

}  // namespace specreg

#endif  // SPECREG_BOUNDARY_HPP
