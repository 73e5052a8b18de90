// Timing harness for the parallelised numeric kernels.  Runs the remainder
// probe sweep and the spectrum grid scan once serially and once with the
// OpenMP worker pool, then prints a small comparison table.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "specreg/numerics.hpp"
#include "specreg/scalars.hpp"
#include "specreg/smooth_function.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Row {
  std::string name;
  double serial = 0.0;
  double parallel = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  int repeats = 1;
  if (argc > 1) repeats = std::max(1, std::atoi(argv[1]));

  using B = specreg::FloatBackend;
  // q(x) = x(1 - x): smooth, asymmetric enough to exercise every term.
  auto q = specreg::SmoothFunction<B>::polynomial({{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}});

  const int m = 3;
  auto table = specreg::build_expansion_table(q, m);

  specreg::ProbeOptions popt;
  popt.grid_points = 81;
  std::vector<std::complex<double>> lambdas;
  for (int j = 0; j < 8; ++j) {
    double r = 24.0 * (1 << j % 4);
    lambdas.push_back({r, 0.0});
    lambdas.push_back({-r, 0.0});
  }

  specreg::SpectrumWindow win;
  win.re_min = -1.0;
  win.re_max = 1.0;
  win.im_min = 0.5;
  win.im_max = 16.0;
  win.grid = 24;
  specreg::BoundaryData<B> bc;  // Dirichlet: y(0) = y(1) = 0 in reduced form
  bc.a11 = {1.0, 0.0};
  bc.b11 = {0.0, 0.0};
  bc.a10 = {0.0, 0.0};
  bc.b10 = {0.0, 0.0};
  bc.a20 = {1.0, 0.0};
  bc.b20 = {0.0, 0.0};

  std::vector<Row> rows;

  {
    Row row{"remainder probe (16 lambdas)"};
    for (int r = 0; r < repeats; ++r) {
      popt.threads = 1;
      auto t0 = Clock::now();
      auto serial = specreg::remainder_probe(q, table, lambdas, popt);
      row.serial += seconds_since(t0);

      popt.threads = 0;  // auto: all available workers
      t0 = Clock::now();
      auto parallel = specreg::remainder_probe(q, table, lambdas, popt);
      row.parallel += seconds_since(t0);

      // The parallel sweep must agree with the serial one bit-for-bit.
      if (serial.rows.size() != parallel.rows.size()) {
        std::fprintf(stderr, "probe row count diverged\n");
        return 1;
      }
      for (std::size_t k = 0; k < serial.rows.size(); ++k) {
        if (serial.rows[k].max_eta != parallel.rows[k].max_eta) {
          std::fprintf(stderr, "probe row %zu diverged\n", k);
          return 1;
        }
      }
    }
    rows.push_back(row);
  }

  {
    Row row{"spectrum grid scan (24x24)"};
    specreg::IvpOptions iopt;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = Clock::now();
      auto serial = specreg::find_eigenvalues(q, bc, win, 1, iopt);
      row.serial += seconds_since(t0);

      t0 = Clock::now();
      auto parallel = specreg::find_eigenvalues(q, bc, win, 0, iopt);
      row.parallel += seconds_since(t0);

      if (serial.eigenvalues.size() != parallel.eigenvalues.size()) {
        std::fprintf(stderr, "spectrum result diverged\n");
        return 1;
      }
    }
    rows.push_back(row);
  }

  std::printf("%-32s %10s %10s %8s\n", "kernel", "serial[s]", "parallel[s]",
              "speedup");
  for (const auto& row : rows) {
    double speedup = row.parallel > 0 ? row.serial / row.parallel : 0.0;
    std::printf("%-32s %10.3f %10.3f %8.2fx\n", row.name.c_str(), row.serial,
                row.parallel, speedup);
  }
  return 0;
}
