#include "specreg/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace specreg {

namespace {

std::complex<double> cplx(const Complex<double>& z) { return {z.re, z.im}; }

std::complex<double> eval_c(const FloatFn& f, double x) {
  double re = 0.0, im = 0.0;
  f.eval_double(x, re, im);
  return {re, im};
}

// Truncated series sum_{s<=m} lambda^{-s} g_{i,nu}^{(s)}(x).
std::complex<double> series_value(const ExpansionTable<FloatBackend>& t, int i, int nu,
                                  double x, std::complex<double> lambda) {
  std::complex<double> inv = 1.0 / lambda;
  std::complex<double> acc = 0.0;
  for (int s = t.order(); s >= 1; --s) {
    acc = (acc + eval_c(t.g(i, nu, s), x)) * inv;
  }
  return acc + eval_c(t.g(i, nu, 0), x);
}

struct WeightedEndpoints {
  std::complex<double> u0, v0, u1, v1;
};

// Integrates the exponentially weighted equation u'' + 2 w lambda u' + q u = 0
// for branch i with series-matched data at x = 0, optionally recording the
// state at the given grid nodes.
WeightedEndpoints integrate_weighted(const FloatFn& q,
                                     const ExpansionTable<FloatBackend>& t, int i,
                                     std::complex<double> lambda,
                                     const std::vector<double>* nodes,
                                     std::vector<CState>* trace,
                                     const IvpOptions& opt) {
  const double w = (i == 1) ? -1.0 : 1.0;
  auto rhs = [&](double x, const CState& y) -> CState {
    std::complex<double> qx = eval_c(q, x);
    return {y[1], -2.0 * w * lambda * y[1] - qx * y[0]};
  };
  CState y;
  y[0] = series_value(t, i, 0, 0.0, lambda);
  y[1] = lambda * (series_value(t, i, 1, 0.0, lambda) - w * y[0]);

  if (nodes != nullptr) {
    trace->clear();
    trace->push_back(y);
    for (std::size_t j = 1; j < nodes->size(); ++j) {
      dopri5(rhs, (*nodes)[j - 1], (*nodes)[j], y, opt);
      trace->push_back(y);
    }
  } else {
    dopri5(rhs, 0.0, 1.0, y, opt);
  }
  return {series_value(t, i, 0, 0.0, lambda),
          lambda * (series_value(t, i, 1, 0.0, lambda) -
                    w * series_value(t, i, 0, 0.0, lambda)),
          y[0], y[1]};
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sx += xs[k];
    sy += ys[k];
    sxx += xs[k] * xs[k];
    sxy += xs[k] * ys[k];
  }
  LinearFit f;
  double den = n * sxx - sx * sx;
  if (den != 0.0) {
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
  }
  return f;
}

}  // namespace

int resolve_threads(int requested) {
  int cap = 1;
#ifdef _OPENMP
  cap = omp_get_max_threads();
#endif
  if (const char* env = std::getenv("SPECREG_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) cap = std::min(cap, v);
  }
  if (requested > 0) return std::min(requested, cap);
  return cap;
}

std::pair<std::complex<double>, std::complex<double>> solve_ivp(
    const FloatFn& q, std::complex<double> lambda, std::complex<double> y0,
    std::complex<double> dy0, double x_from, double x_to, const IvpOptions& opt) {
  auto rhs = [&](double x, const CState& y) -> CState {
    std::complex<double> qx = eval_c(q, x);
    return {y[1], (lambda * lambda - qx) * y[0]};
  };
  CState y{y0, dy0};
  dopri5(rhs, x_from, x_to, y, opt);
  return {y[0], y[1]};
}

double suggested_radius_gate(const FloatFn& q) {
  return 10.0 * (1.0 + q.sup_norm_estimate());
}

ValidationReport remainder_probe(const FloatFn& q, const ExpansionTable<FloatBackend>& t,
                                 const std::vector<std::complex<double>>& lambdas,
                                 const ProbeOptions& opt) {
  if (opt.grid_points < 2) throw SolverError("probe grid needs at least 2 points");
  ValidationReport rep;
  rep.m = t.order();
  rep.radius_gate = suggested_radius_gate(q);

  std::vector<double> nodes(opt.grid_points);
  for (int j = 0; j < opt.grid_points; ++j)
    nodes[j] = static_cast<double>(j) / (opt.grid_points - 1);

  const int n = static_cast<int>(lambdas.size());
  rep.rows.assign(2 * n, ProbeRow{});

  const int threads = resolve_threads(opt.threads);
  auto work = [&](int idx) {
    const std::complex<double> lam = lambdas[idx];
    const int i = (lam.real() >= 0.0) ? 2 : 1;
    const double w = (i == 1) ? -1.0 : 1.0;
    std::vector<CState> trace;
    integrate_weighted(q, t, i, lam, &nodes, &trace, opt.ivp);
    double eta0 = 0.0, eta1 = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      std::complex<double> u = trace[j][0], v = trace[j][1];
      std::complex<double> a0 = series_value(t, i, 0, nodes[j], lam);
      std::complex<double> a1 = series_value(t, i, 1, nodes[j], lam);
      eta0 = std::max(eta0, std::abs(u - a0));
      eta1 = std::max(eta1, std::abs(w * u + v / lam - a1));
    }
    rep.rows[2 * idx] = {lam, i, 0, eta0, 0.0};
    rep.rows[2 * idx + 1] = {lam, i, 1, eta1, 0.0};
  };

  if (threads > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int idx = 0; idx < n; ++idx) work(idx);
#else
    for (int idx = 0; idx < n; ++idx) work(idx);
#endif
  } else {
    for (int idx = 0; idx < n; ++idx) work(idx);
  }

  // per-(i, nu) log-log fits and remainder constants
  for (int i = 1; i <= 2; ++i) {
    for (int nu = 0; nu <= 1; ++nu) {
      std::vector<double> xs, ys;
      bool noisy = true;
      int group_rows = 0;
      for (const auto& r : rep.rows) {
        if (r.i != i || r.nu != nu) continue;
        ++group_rows;
        if (r.max_eta > opt.noise_floor) noisy = false;
        if (r.max_eta > 0.0) {
          xs.push_back(std::log(std::abs(r.lambda)));
          ys.push_back(std::log(r.max_eta));
        }
      }
      if (group_rows == 0) continue;
      if (xs.empty()) {
        // remainders identically zero: report the group as noise-limited
        rep.fits.push_back({i, nu, 0, true, 0.0, 0.0, 0.0});
        continue;
      }
      SlopeFit fit;
      fit.i = i;
      fit.nu = nu;
      fit.points = static_cast<int>(xs.size());
      fit.below_noise = noisy;
      LinearFit lf = least_squares(xs, ys);
      fit.slope = lf.slope;
      fit.intercept = lf.intercept;
      double logM = -1e300;
      for (std::size_t k = 0; k < xs.size(); ++k)
        logM = std::max(logM, ys[k] + (rep.m + 1) * xs[k]);
      fit.m_estimate = std::exp(logM);
      rep.fits.push_back(fit);
    }
  }
  for (auto& r : rep.rows) {
    for (const auto& f : rep.fits)
      if (f.i == r.i && f.nu == r.nu)
        r.bound_pred = f.m_estimate * std::pow(std::abs(r.lambda), -(rep.m + 1));
  }
  return rep;
}

std::complex<double> NumericDelta::assemble(std::complex<double> lambda) const {
  return d_minus * std::exp(-lambda) + d_zero + d_plus * std::exp(lambda);
}

NumericDelta numeric_Delta(const FloatFn& q, const BoundaryData<FloatBackend>& bc,
                           const ExpansionTable<FloatBackend>& t,
                           std::complex<double> lambda, const IvpOptions& opt) {
  // branch 1: y = e^{-lambda x} u1, branch 2: y = e^{+lambda x} u2
  WeightedEndpoints w1 = integrate_weighted(q, t, 1, lambda, nullptr, nullptr, opt);
  WeightedEndpoints w2 = integrate_weighted(q, t, 2, lambda, nullptr, nullptr, opt);

  const std::complex<double> a11 = cplx(bc.a11), a10 = cplx(bc.a10);
  const std::complex<double> b11 = cplx(bc.b11), b10 = cplx(bc.b10);
  const std::complex<double> a21 = cplx(bc.a21), a20 = cplx(bc.a20);
  const std::complex<double> b21 = cplx(bc.b21), b20 = cplx(bc.b20);

  // y and y' at the endpoints, with the exponential weight factored out:
  //   branch 1: y(0) = u0, y'(0) = v0 - lambda u0;   y(1) = e^{-lambda}(u1),
  //             y'(1) = e^{-lambda}(v1 - lambda u1)
  //   branch 2: same with +lambda
  auto A1 = a11 * (w1.v0 - lambda * w1.u0) + a10 * w1.u0;
  auto B1 = b11 * (w1.v1 - lambda * w1.u1) + b10 * w1.u1;
  auto A2 = a21 * (w1.v0 - lambda * w1.u0) + a20 * w1.u0;
  auto B2 = b21 * (w1.v1 - lambda * w1.u1) + b20 * w1.u1;
  auto C1 = a11 * (w2.v0 + lambda * w2.u0) + a10 * w2.u0;
  auto D1 = b11 * (w2.v1 + lambda * w2.u1) + b10 * w2.u1;
  auto C2 = a21 * (w2.v0 + lambda * w2.u0) + a20 * w2.u0;
  auto D2 = b21 * (w2.v1 + lambda * w2.u1) + b20 * w2.u1;

  NumericDelta nd;
  nd.d_minus = B1 * C2 - C1 * B2;
  nd.d_zero = A1 * C2 + B1 * D2 - C1 * A2 - D1 * B2;
  nd.d_plus = A1 * D2 - D1 * A2;
  return nd;
}

std::complex<double> char_determinant(const FloatFn& q,
                                      const BoundaryData<FloatBackend>& bc,
                                      std::complex<double> lambda,
                                      const IvpOptions& opt) {
  auto [y1_1, dy1_1] = solve_ivp(q, lambda, 1.0, 0.0, 0.0, 1.0, opt);
  auto [y2_1, dy2_1] = solve_ivp(q, lambda, 0.0, 1.0, 0.0, 1.0, opt);

  const std::complex<double> a11 = cplx(bc.a11), a10 = cplx(bc.a10);
  const std::complex<double> b11 = cplx(bc.b11), b10 = cplx(bc.b10);
  const std::complex<double> a21 = cplx(bc.a21), a20 = cplx(bc.a20);
  const std::complex<double> b21 = cplx(bc.b21), b20 = cplx(bc.b20);

  // y1: y(0)=1, y'(0)=0;  y2: y(0)=0, y'(0)=1
  auto u11 = a10 + b11 * dy1_1 + b10 * y1_1;
  auto u12 = a11 + b11 * dy2_1 + b10 * y2_1;
  auto u21 = a20 + b21 * dy1_1 + b20 * y1_1;
  auto u22 = a21 + b21 * dy2_1 + b20 * y2_1;
  return u11 * u22 - u12 * u21;
}

SpectrumResult find_eigenvalues(const FloatFn& q, const BoundaryData<FloatBackend>& bc,
                                const SpectrumWindow& win, int threads,
                                const IvpOptions& opt) {
  if (win.grid < 4) throw SolverError("spectrum grid must be at least 4 per axis");
  if (!(win.re_max >= win.re_min && win.im_max >= win.im_min))
    throw SolverError("empty spectrum window");

  const int n = win.grid;
  const double dre = (win.re_max - win.re_min) / (n - 1);
  const double dim = (win.im_max - win.im_min) / (n - 1);
  std::vector<double> mag(static_cast<std::size_t>(n) * n, 0.0);

  auto node = [&](int a, int b) -> std::complex<double> {
    return {win.re_min + a * dre, win.im_min + b * dim};
  };

  const int T = resolve_threads(threads);
  auto eval_cell = [&](int idx) {
    int a = idx % n, b = idx / n;
    mag[idx] = std::abs(char_determinant(q, bc, node(a, b), opt));
  };
  if (T > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(T)
    for (int idx = 0; idx < n * n; ++idx) eval_cell(idx);
#else
    for (int idx = 0; idx < n * n; ++idx) eval_cell(idx);
#endif
  } else {
    for (int idx = 0; idx < n * n; ++idx) eval_cell(idx);
  }

  // seeds: strict-or-equal local minima of |F| over the 8-neighborhood
  std::vector<std::complex<double>> seeds;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      double v = mag[b * n + a];
      bool minimal = true;
      for (int db = -1; db <= 1 && minimal; ++db)
        for (int da = -1; da <= 1 && minimal; ++da) {
          if (da == 0 && db == 0) continue;
          int aa = a + da, bb = b + db;
          if (aa < 0 || bb < 0 || aa >= n || bb >= n) continue;
          if (mag[bb * n + aa] < v) minimal = false;
        }
      if (minimal) seeds.push_back(node(a, b));
    }
  }

  SpectrumResult res;
  res.seeds = static_cast<int>(seeds.size());

  // Roots must land inside the requested window (up to root-finding slack);
  // seeds near the boundary may wander a little before settling back in.
  const double slack = 1e-9 * (1.0 + std::hypot(dre, dim));
  std::vector<std::complex<double>> roots(seeds.size(),
                                          std::complex<double>(1e308, 1e308));
  std::vector<char> converged(seeds.size(), 0);
  std::vector<char> in_window(seeds.size(), 0);

  auto polish = [&](int sidx) {
    std::complex<double> z = seeds[sidx];
    for (int it = 0; it < 50; ++it) {
      double h = 1e-7 * (1.0 + std::abs(z));
      std::complex<double> f = char_determinant(q, bc, z, opt);
      std::complex<double> fp = char_determinant(q, bc, z + h, opt);
      std::complex<double> fm = char_determinant(q, bc, z - h, opt);
      std::complex<double> df = (fp - fm) / (2.0 * h);
      if (df == 0.0) return;
      std::complex<double> step = f / df;
      z -= step;
      if (std::abs(step) < 1e-12 * (1.0 + std::abs(z))) {
        converged[sidx] = 1;
        roots[sidx] = z;
        if (z.real() >= win.re_min - slack && z.real() <= win.re_max + slack &&
            z.imag() >= win.im_min - slack && z.imag() <= win.im_max + slack)
          in_window[sidx] = 1;
        return;
      }
      if (std::abs(z) > 1e6) return;
    }
  };

  const int S = static_cast<int>(seeds.size());
  if (T > 1) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(T)
    for (int sidx = 0; sidx < S; ++sidx) polish(sidx);
#else
    for (int sidx = 0; sidx < S; ++sidx) polish(sidx);
#endif
  } else {
    for (int sidx = 0; sidx < S; ++sidx) polish(sidx);
  }

  std::vector<std::complex<double>> found;
  for (int sidx = 0; sidx < S; ++sidx) {
    if (converged[sidx]) ++res.converged;
    if (!in_window[sidx]) continue;
    bool dup = false;
    for (const auto& r : found)
      if (std::abs(r - roots[sidx]) < 1e-8) dup = true;
    if (!dup) found.push_back(roots[sidx]);
  }
  // Order by real part snapped to the dedupe tolerance, then by imaginary
  // part, so roots sitting on a common vertical line list in a stable order.
  std::sort(found.begin(), found.end(), [](auto a, auto b) {
    double ka = std::round(a.real() * 1e8), kb = std::round(b.real() * 1e8);
    if (ka != kb) return ka < kb;
    return a.imag() < b.imag();
  });
  res.eigenvalues = std::move(found);
  return res;
}

}  // namespace specreg
