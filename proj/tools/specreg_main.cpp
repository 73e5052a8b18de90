// Command-line front end: classify | expand | validate | spectrum | gen.
// Results go to stdout (or -o), diagnostics to stderr.  Exit codes: 0 result
// produced, 2 bad input, 1 solver or internal failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "specreg/cli.hpp"

namespace {

int emit(const specreg::RunReport& rep, const std::string& out_path) {
  if (!rep.err.empty()) std::cerr << rep.err;
  if (!rep.out.empty()) {
    if (out_path.empty() || out_path == "-") {
      std::cout << rep.out;
    } else {
      std::ofstream os(out_path, std::ios::binary);
      if (!os) {
        std::cerr << "cannot open output file: " << out_path << "\n";
        return 1;
      }
      os << rep.out;
    }
  }
  return rep.exit_code;
}

bool parse_range(const std::string& s, double& lo, double& hi) {
  auto pos = s.find("..");
  if (pos == std::string::npos) return false;
  try {
    lo = std::stod(s.substr(0, pos));
    hi = std::stod(s.substr(pos + 2));
  } catch (...) {
    return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral regularity toolkit for y'' + q y = lambda^2 y on [0,1]"};
  app.require_subcommand(1);
  std::string out_path;

  specreg::ClassifyOptions copt;
  auto* classify = app.add_subcommand(
      "classify", "classify the boundary problem's regularity");
  classify->add_option("input", copt.input_path, "problem JSON file ('-' for stdin)")
      ->required();
  classify->add_option("--route", copt.route,
                       "classification route: theorem, delta or both");
  classify->add_flag("--evidence", copt.evidence, "include the evidence trail");
  classify->add_option("-o,--output", out_path, "write the verdict here");

  specreg::ExpandOptions eopt;
  auto* expand = app.add_subcommand(
      "expand", "print series and determinant coefficient tables");
  expand->add_option("input", eopt.input_path, "problem JSON file ('-' for stdin)")
      ->required();
  expand->add_option("--order", eopt.order, "series truncation order");
  expand->add_option("-o,--output", out_path, "write the tables here");

  specreg::ValidateOptions vopt;
  auto* validate = app.add_subcommand(
      "validate", "measure series remainders against direct integration");
  validate->add_option("input", vopt.input_path, "problem JSON file ('-' for stdin)")
      ->required();
  validate->add_option("--order", vopt.order, "series truncation order");
  validate->add_option("--lambda-min", vopt.lambda_min, "smallest |lambda| probed");
  validate->add_option("--lambda-max", vopt.lambda_max, "largest |lambda| probed");
  validate->add_option("--points", vopt.points, "lambda samples per half-plane (>= 4)");
  validate->add_option("--x-grid", vopt.grid_points, "x grid resolution");
  validate->add_option("--threads", vopt.threads, "worker threads (0 = auto)");
  validate->add_option("-o,--output", out_path, "write the CSV here");

  specreg::SpectrumOptions sopt;
  std::string re_range, im_range;
  auto* spectrum = app.add_subcommand(
      "spectrum", "locate eigenvalues in a rectangular lambda window");
  spectrum->add_option("input", sopt.input_path, "problem JSON file ('-' for stdin)")
      ->required();
  spectrum->add_option("--re", re_range, "real-part range a..b");
  spectrum->add_option("--im", im_range, "imaginary-part range a..b");
  spectrum->add_option("--grid", sopt.grid, "seed grid nodes per axis");
  spectrum->add_option("--threads", sopt.threads, "worker threads (0 = auto)");
  spectrum->add_option("-o,--output", out_path, "write the result here");

  specreg::GenOptions gopt;
  auto* gen = app.add_subcommand("gen", "generate a sample problem file");
  gen->add_option("--seed", gopt.seed, "random seed");
  gen->add_option("--class", gopt.target_class,
                  "target class (BirkhoffRegular, AlmostRegular, NotNormal, "
                  "UndeterminedBeyondCap)");
  gen->add_option("--order", gopt.order, "target order for AlmostRegular");
  gen->add_option("--backend", gopt.backend, "rational or float");
  gen->add_option("-o,--output", out_path, "write the problem here");

  CLI11_PARSE(app, argc, argv);

  if (classify->parsed()) return emit(specreg::cmd_classify(copt), out_path);
  if (expand->parsed()) return emit(specreg::cmd_expand(eopt), out_path);
  if (validate->parsed()) return emit(specreg::cmd_validate(vopt), out_path);
  if (spectrum->parsed()) {
    if (!re_range.empty() && !parse_range(re_range, sopt.re_min, sopt.re_max)) {
      std::cerr << "--re expects a range like -1..1\n";
      return 2;
    }
    if (!im_range.empty() && !parse_range(im_range, sopt.im_min, sopt.im_max)) {
      std::cerr << "--im expects a range like 0..20\n";
      return 2;
    }
    return emit(specreg::cmd_spectrum(sopt), out_path);
  }
  if (gen->parsed()) return emit(specreg::cmd_gen(gopt), out_path);
  return 2;
}
