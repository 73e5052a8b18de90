#ifndef SPECREG_CLASSIFIER_HPP
#define SPECREG_CLASSIFIER_HPP

// Regularity classification for y'' + q y = lambda^2 y with the boundary
// forms of boundary.hpp.  Taxonomy:
//
//   BirkhoffRegular        s1 = a11 b20 + b11 a20 != 0 (order 0)
//   AlmostRegular(m)       the first m coefficients of the e^{-lambda} weight
//                          vanish and the next one does not (m >= 1)
//   NotNormal              s1 = s2 = 0 and a20 b11 = 0: every coefficient of
//                          the exponential weights vanishes identically
//   UndeterminedBeyondCap  the coefficient chain vanishes through the cap
//
// Two independent routes are provided: one reads the order off endpoint data
// of q (order k condition: q^{(k)}(0) = (-1)^k q^{(k)}(1)), the other scans
// the computed determinant coefficients.  cross_validate requires them to
// agree and reports both trails.

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "specreg/boundary.hpp"
#include "specreg/delta.hpp"
#include "specreg/expansion.hpp"
#include "specreg/smooth_function.hpp"

namespace specreg {

template <class B>
struct ProblemSpec {
  BoundaryData<B> bc;
  SmoothFunction<B> q;
  int order_cap = 10;
  double tolerance = 1e-10;  // relative zero threshold (float backend only)
};

enum class RegClass { BirkhoffRegular, AlmostRegular, NotNormal, UndeterminedBeyondCap };

inline std::string to_string(RegClass c) {
  switch (c) {
    case RegClass::BirkhoffRegular: return "BirkhoffRegular";
    case RegClass::AlmostRegular: return "AlmostRegular";
    case RegClass::NotNormal: return "NotNormal";
    case RegClass::UndeterminedBeyondCap: return "UndeterminedBeyondCap";
  }
  return "?";
}

struct Evidence {
  std::string label;
  std::string value;
  bool satisfied = false;
};

struct RegularityVerdict {
  RegClass cls = RegClass::UndeterminedBeyondCap;
  int order = -1;  // defined for BirkhoffRegular (0) and AlmostRegular (>= 1)
  std::string route;
  std::vector<Evidence> evidence;
};

class ClassificationMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateProblem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

template <class B>
bool near_zero(const Complex<typename B::Real>& v, double scale, double eps) {
  if constexpr (B::exact)
    return is_zero<B>(v);
  else
    return magnitude_estimate<B>(v) <= eps * (1.0 + scale);
}

template <class B>
std::string show(const Complex<typename B::Real>& v) {
  if constexpr (B::exact) {
    if (v.im.is_zero()) return v.re.to_string();
    return "(" + v.re.to_string() + ", " + v.im.to_string() + ")";
  } else {
    char buf[64];
    if (v.im == 0.0) {
      std::snprintf(buf, sizeof buf, "%.6g", v.re);
      return buf;
    }
    std::snprintf(buf, sizeof buf, "(%.6g, %.6g)", v.re, v.im);
    return buf;
  }
}

}  // namespace detail

// Pre-classification of general two-forms: detect problems that are Birkhoff
// regular outright, reduce the rest to the zero-order second form, and reject
// rank-deficient data.
template <class B>
struct PrecheckResult {
  enum class Kind { Regular, Reduced, Degenerate } kind;
  BoundaryData<B> reduced;    // valid when has_reduced
  bool has_reduced = false;   // false when regularity was decided before the
                              // zero-order shape was reached
  std::string reason;
  std::vector<Evidence> evidence;
};

template <class B>
PrecheckResult<B> birkhoff_precheck(const BoundaryData<B>& bc, double eps = 1e-10) {
  using C = Complex<typename B::Real>;
  PrecheckResult<B> out;
  BoundaryData<B> w = bc;

  // order the forms so the derivative coefficients sit in the first one
  if (is_zero<B>(w.a11) && is_zero<B>(w.b11) && w.has_derivative_in_second()) {
    std::swap(w.a11, w.a21);
    std::swap(w.b11, w.b21);
    std::swap(w.a10, w.a20);
    std::swap(w.b10, w.b20);
    out.evidence.push_back({"form order", "forms swapped so U1 carries y'", true});
  }

  if (w.has_derivative_in_second()) {
    C minor = w.a11 * w.b21 - w.b11 * w.a21;
    double sc = magnitude_estimate<B>(w.a11 * w.b21) + magnitude_estimate<B>(w.b11 * w.a21);
    out.evidence.push_back({"derivative minor a11 b21 - b11 a21", detail::show<B>(minor),
                            !detail::near_zero<B>(minor, sc, eps)});
    if (!detail::near_zero<B>(minor, sc, eps)) {
      out.kind = PrecheckResult<B>::Kind::Regular;
      out.reason = "derivative-part minor is nonzero";
      return out;
    }
    // rows of the derivative part are dependent: eliminate y' from U2
    C c = !is_zero<B>(w.a11) ? cdiv<B>(w.a21, w.a11) : cdiv<B>(w.b21, w.b11);
    w.a20 -= c * w.a10;
    w.b20 -= c * w.b10;
    w.a21 = C{};
    w.b21 = C{};
    out.evidence.push_back({"elimination", "y' removed from U2 (factor " +
                                               detail::show<B>(c) + ")", true});
  }

  const bool u1_has_deriv = !is_zero<B>(w.a11) || !is_zero<B>(w.b11);
  const bool u2_nontrivial = !is_zero<B>(w.a20) || !is_zero<B>(w.b20);

  if (!u1_has_deriv) {
    // both forms of order zero: regular iff they are independent
    C det = w.a10 * w.b20 - w.b10 * w.a20;
    double sc = magnitude_estimate<B>(w.a10 * w.b20) + magnitude_estimate<B>(w.b10 * w.a20);
    out.evidence.push_back({"zero-order determinant a10 b20 - b10 a20",
                            detail::show<B>(det), !detail::near_zero<B>(det, sc, eps)});
    if (!detail::near_zero<B>(det, sc, eps)) {
      out.kind = PrecheckResult<B>::Kind::Regular;
      out.reason = "two independent zero-order forms";
    } else {
      out.kind = PrecheckResult<B>::Kind::Degenerate;
      out.reason = "boundary forms have rank below two";
    }
    return out;
  }

  if (!u2_nontrivial) {
    out.kind = PrecheckResult<B>::Kind::Degenerate;
    out.reason = "second form vanished during reduction (rank below two)";
    out.evidence.push_back({"reduced U2", "0", false});
    return out;
  }

  C s1 = w.s1();
  double sc1 = magnitude_estimate<B>(w.a11 * w.b20) + magnitude_estimate<B>(w.b11 * w.a20);
  out.evidence.push_back({"s1 = a11 b20 + b11 a20", detail::show<B>(s1),
                          !detail::near_zero<B>(s1, sc1, eps)});
  if (!detail::near_zero<B>(s1, sc1, eps)) {
    out.kind = PrecheckResult<B>::Kind::Regular;
    out.reason = "s1 nonzero";
    out.reduced = w;
    out.has_reduced = true;
    return out;
  }

  out.kind = PrecheckResult<B>::Kind::Reduced;
  out.reason = "reduced form with s1 = 0; deeper classification required";
  out.reduced = w;
  out.has_reduced = true;
  return out;
}

// Route 1: endpoint conditions on q.
template <class B>
RegularityVerdict classify_by_theorem(const ProblemSpec<B>& p) {
  using C = Complex<typename B::Real>;
  const auto& bc = p.bc;
  if (bc.has_derivative_in_second())
    throw PreconditionError("classification requires the reduced boundary shape");
  if (!bc.reduced_gate())
    throw PreconditionError("boundary forms violate the reduced-shape gate");

  RegularityVerdict v;
  v.route = "theorem";
  const double eps = p.tolerance;

  C s1 = bc.s1();
  double sc1 = magnitude_estimate<B>(bc.a11 * bc.b20) + magnitude_estimate<B>(bc.b11 * bc.a20);
  bool s1z = detail::near_zero<B>(s1, sc1, eps);
  v.evidence.push_back({"s1 = a11 b20 + b11 a20", detail::show<B>(s1), !s1z});
  if (!s1z) {
    v.cls = RegClass::BirkhoffRegular;
    v.order = 0;
    return v;
  }

  C s2 = bc.s2();
  double sc2 = magnitude_estimate<B>(bc.a10 * bc.b20) + magnitude_estimate<B>(bc.b10 * bc.a20);
  bool s2z = detail::near_zero<B>(s2, sc2, eps);
  v.evidence.push_back({"s2 = a10 b20 - b10 a20", detail::show<B>(s2), !s2z});
  if (!s2z) {
    v.cls = RegClass::AlmostRegular;
    v.order = 1;
    return v;
  }

  C cp = bc.corner_product();
  double scp = magnitude_estimate<B>(bc.a20) * magnitude_estimate<B>(bc.b11);
  bool cpz = detail::near_zero<B>(cp, scp, eps);
  v.evidence.push_back({"a20 b11", detail::show<B>(cp), !cpz});
  if (cpz) {
    v.cls = RegClass::NotNormal;
    v.evidence.push_back(
        {"conclusion", "s1 = s2 = 0 and a20 b11 = 0: both exponential weights vanish", true});
    return v;
  }

  SmoothFunction<B> dq = p.q;
  for (int k = 0; k + 2 <= p.order_cap; ++k) {
    C e0 = dq.eval0();
    C e1 = dq.eval1();
    C cond = (k % 2 == 0) ? e0 - e1 : e0 + e1;
    double sc = magnitude_estimate<B>(e0) + magnitude_estimate<B>(e1);
    bool z = detail::near_zero<B>(cond, sc, eps);
    v.evidence.push_back({"q^(" + std::to_string(k) + ")(0) - (-1)^" + std::to_string(k) +
                              " q^(" + std::to_string(k) + ")(1)",
                          detail::show<B>(cond), !z});
    if (!z) {
      v.cls = RegClass::AlmostRegular;
      v.order = k + 2;
      return v;
    }
    dq = dq.derivative();
  }

  v.cls = RegClass::UndeterminedBeyondCap;
  v.evidence.push_back({"conclusion",
                        "endpoint conditions hold through derivative order " +
                            std::to_string(p.order_cap - 2),
                        true});
  return v;
}

// Route 2: scan the computed determinant coefficients.
template <class B>
RegularityVerdict classify_by_delta(const ProblemSpec<B>& p) {
  const auto& bc = p.bc;
  RegularityVerdict v;
  v.route = "delta";
  const double eps = p.tolerance;

  ExpansionTable<B> table = build_expansion_table(p.q, p.order_cap);
  DeltaTable<B> dt = delta_table(bc, table);

  for (int i = 0; i <= p.order_cap; ++i) {
    const auto& d = dt.delta(-1, i);
    bool z = detail::near_zero<B>(d, dt.scale(-1, i), eps);
    v.evidence.push_back({"delta_{-1}^(" + std::to_string(1 - i) + ")",
                          detail::show<B>(d), !z});
    if (!z) {
      v.cls = (i == 0) ? RegClass::BirkhoffRegular : RegClass::AlmostRegular;
      v.order = i;
      return v;
    }
  }

  bool s1z = detail::near_zero<B>(
      bc.s1(),
      magnitude_estimate<B>(bc.a11 * bc.b20) + magnitude_estimate<B>(bc.b11 * bc.a20), eps);
  bool s2z = detail::near_zero<B>(
      bc.s2(),
      magnitude_estimate<B>(bc.a10 * bc.b20) + magnitude_estimate<B>(bc.b10 * bc.a20), eps);
  bool cpz = detail::near_zero<B>(
      bc.corner_product(),
      magnitude_estimate<B>(bc.a20) * magnitude_estimate<B>(bc.b11), eps);
  if (s1z && s2z && cpz) {
    v.cls = RegClass::NotNormal;
    v.evidence.push_back(
        {"conclusion", "coefficient chain vanishes identically (a20 b11 = 0)", true});
  } else {
    v.cls = RegClass::UndeterminedBeyondCap;
    v.evidence.push_back({"conclusion",
                          "delta_{-1} chain vanishes through depth " +
                              std::to_string(p.order_cap),
                          true});
  }
  return v;
}

// Runs both routes and insists they agree.
template <class B>
RegularityVerdict cross_validate(const ProblemSpec<B>& p) {
  RegularityVerdict a = classify_by_theorem(p);
  RegularityVerdict b = classify_by_delta(p);
  if (a.cls != b.cls || (a.cls == RegClass::AlmostRegular && a.order != b.order)) {
    throw ClassificationMismatch("route disagreement: theorem says " + to_string(a.cls) +
                                 (a.order >= 0 ? " order " + std::to_string(a.order) : "") +
                                 ", delta scan says " + to_string(b.cls) +
                                 (b.order >= 0 ? " order " + std::to_string(b.order) : ""));
  }
  RegularityVerdict v = a;
  v.route = "both";
  for (const auto& e : b.evidence) v.evidence.push_back(e);
  return v;
}

}  // namespace specreg

#endif  // SPECREG_CLASSIFIER_HPP
