#ifndef SPECREG_CLI_HPP
#define SPECREG_CLI_HPP

// Subcommand implementations behind the command-line front end.  Each takes
// an options struct and returns the final output plus the process exit code:
// 0 verdict/result produced, 2 bad input (parse, usage, degenerate problem),
// 1 solver or internal failure.  Keeping these as plain functions lets the
// test suite exercise the full pipeline in process.

#include <optional>
#include <string>
#include <vector>

namespace specreg {

struct RunReport {
  int exit_code = 0;
  std::string out;  // primary payload (JSON or CSV)
  std::string err;  // human-readable diagnostics
};

struct ClassifyOptions {
  std::string input_path;
  std::string route = "both";  // "theorem" | "delta" | "both"
  bool evidence = false;
};

struct ExpandOptions {
  std::string input_path;
  int order = -1;  // -1: use the problem's order_cap
};

struct ValidateOptions {
  std::string input_path;
  int order = -1;          // series order m; -1: min(order_cap, 6)
  double lambda_min = 0.0;  // 0: use the radius gate
  double lambda_max = 0.0;  // 0: 8 * lambda_min
  int points = 5;           // per half-plane, >= 4
  int grid_points = 101;
  int threads = 0;
};

struct SpectrumOptions {
  std::string input_path;
  double re_min = -1.0, re_max = 1.0;
  double im_min = 0.0, im_max = 20.0;
  int grid = 32;
  int threads = 0;
};

struct GenOptions {
  unsigned long seed = 1;
  std::string target_class = "AlmostRegular";  // class name from the taxonomy
  int order = 2;                               // for AlmostRegular
  std::string backend = "rational";
};

RunReport cmd_classify(const ClassifyOptions& opt);
RunReport cmd_expand(const ExpandOptions& opt);
RunReport cmd_validate(const ValidateOptions& opt);
RunReport cmd_spectrum(const SpectrumOptions& opt);
RunReport cmd_gen(const GenOptions& opt);

}  // namespace specreg

#endif  // SPECREG_CLI_HPP
