#ifndef SPECREG_NUMERICS_HPP
#define SPECREG_NUMERICS_HPP

// Floating-point validation layer: direct integration of the differential
// equation, remainder measurement for the asymptotic series, numerically
// assembled characteristic determinants, and eigenvalue search.  Everything
// here works on the double backend.  The lambda sweeps and the seed grid are
// embarrassingly parallel; each entry point takes a thread count (0 = honor
// SPECREG_THREADS, 1 = serial reference path) and the parallel kernels are
// required to reproduce the serial results exactly.

#include <complex>
#include <utility>
#include <vector>

#include "specreg/boundary.hpp"
#include "specreg/delta.hpp"
#include "specreg/expansion.hpp"
#include "specreg/ivp.hpp"
#include "specreg/smooth_function.hpp"

namespace specreg {

using FloatFn = SmoothFunction<FloatBackend>;

int resolve_threads(int requested);

// Solution of y'' + q y = lambda^2 y with data (y, y') given at x_from,
// integrated to x_to; returns (y, y') there.
std::pair<std::complex<double>, std::complex<double>> solve_ivp(
    const FloatFn& q, std::complex<double> lambda, std::complex<double> y0,
    std::complex<double> dy0, double x_from = 0.0, double x_to = 1.0,
    const IvpOptions& opt = {});

// ---- remainder measurement ----------------------------------------------

struct ProbeRow {
  std::complex<double> lambda;
  int i = 0;             // branch used (2 for Re lambda >= 0, else 1)
  int nu = 0;            // 0: solution, 1: scaled first derivative
  double max_eta = 0.0;  // max over the x grid of the measured remainder
  double bound_pred = 0.0;  // M * |lambda|^{-(m+1)} with fitted M
};

struct SlopeFit {
  int i = 0;
  int nu = 0;
  int points = 0;
  bool below_noise = false;  // remainders at solver noise; slope meaningless
  double slope = 0.0;        // d log|eta| / d log|lambda|
  double intercept = 0.0;
  double m_estimate = 0.0;   // smallest M covering all samples at decay m+1
};

struct ValidationReport {
  int m = 0;                 // series truncation order used
  double radius_gate = 0.0;  // |lambda| below this is outside the regime
  std::vector<ProbeRow> rows;
  std::vector<SlopeFit> fits;
};

struct ProbeOptions {
  int grid_points = 101;  // x-grid resolution (>= 2)
  int threads = 0;
  double noise_floor = 1e-11;
  IvpOptions ivp;
};

// |lambda| >= 10 * (1 + sup|q|) keeps the asymptotic regime honest.
double suggested_radius_gate(const FloatFn& q);

ValidationReport remainder_probe(const FloatFn& q, const ExpansionTable<FloatBackend>& t,
                                 const std::vector<std::complex<double>>& lambdas,
                                 const ProbeOptions& opt = {});

// ---- characteristic determinants -----------------------------------------

// Exponential-weight split of the determinant built from the two
// asymptotically normalized solutions:
//   Delta(lambda) = d_minus e^{-lambda} + d_zero + d_plus e^{lambda}.
struct NumericDelta {
  std::complex<double> d_minus, d_zero, d_plus;
  std::complex<double> assemble(std::complex<double> lambda) const;
};

NumericDelta numeric_Delta(const FloatFn& q, const BoundaryData<FloatBackend>& bc,
                           const ExpansionTable<FloatBackend>& t,
                           std::complex<double> lambda, const IvpOptions& opt = {});

// Determinant in the standard basis y(0)=1,y'(0)=0 / y(0)=0,y'(0)=1; same
// zero set as NumericDelta, different normalization.
std::complex<double> char_determinant(const FloatFn& q,
                                      const BoundaryData<FloatBackend>& bc,
                                      std::complex<double> lambda,
                                      const IvpOptions& opt = {});

// ---- eigenvalue search ----------------------------------------------------

struct SpectrumWindow {
  double re_min = -1.0, re_max = 1.0;
  double im_min = 0.0, im_max = 20.0;
  int grid = 32;  // nodes per axis, >= 4
};

struct SpectrumResult {
  std::vector<std::complex<double>> eigenvalues;
  int seeds = 0;      // grid local minima tried
  int converged = 0;  // Newton runs that converged
};

SpectrumResult find_eigenvalues(const FloatFn& q, const BoundaryData<FloatBackend>& bc,
                                const SpectrumWindow& win, int threads = 0,
                                const IvpOptions& opt = {});

}  // namespace specreg

#endif  // SPECREG_NUMERICS_HPP
