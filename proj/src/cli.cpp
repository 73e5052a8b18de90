#include "specreg/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "specreg/json_io.hpp"

namespace specreg {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open input file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Normalizes the boundary shape via the precheck.  On a Regular short-cut a
// verdict is produced directly; Degenerate raises.
template <class B>
std::optional<RegularityVerdict> normalize_shape(ProblemSpec<B>& p) {
  PrecheckResult<B> pre = birkhoff_precheck(p.bc, p.tolerance);
  switch (pre.kind) {
    case PrecheckResult<B>::Kind::Degenerate:
      throw DegenerateProblem(pre.reason);
    case PrecheckResult<B>::Kind::Regular:
      if (!pre.has_reduced) {
        RegularityVerdict v;
        v.cls = RegClass::BirkhoffRegular;
        v.order = 0;
        v.route = "precheck";
        v.evidence = pre.evidence;
        return v;
      }
      p.bc = pre.reduced;
      return std::nullopt;
    case PrecheckResult<B>::Kind::Reduced:
      p.bc = pre.reduced;
      return std::nullopt;
  }
  return std::nullopt;
}

template <class B>
RegularityVerdict classify_spec(ProblemSpec<B> p, const std::string& route) {
  if (auto early = normalize_shape(p)) return *early;
  if (route == "theorem") return classify_by_theorem(p);
  if (route == "delta") return classify_by_delta(p);
  return cross_validate(p);
}

RunReport failure(int code, const std::string& msg) {
  RunReport r;
  r.exit_code = code;
  r.err = msg + "\n";
  return r;
}

std::vector<std::complex<double>> validate_lambdas(double lo, double hi, int points) {
  std::vector<std::complex<double>> ls;
  for (int k = 0; k < points; ++k) {
    double t = points == 1 ? 0.0 : static_cast<double>(k) / (points - 1);
    double mag = lo * std::pow(hi / lo, t);
    ls.emplace_back(mag, 0.0);
    ls.emplace_back(-mag, 0.0);
  }
  return ls;
}

}  // namespace

RunReport cmd_classify(const ClassifyOptions& opt) {
  RunReport rep;
  try {
    if (opt.route != "theorem" && opt.route != "delta" && opt.route != "both")
      throw ParseError("route must be theorem, delta or both");
    ParsedProblem p = parse_problem_text(read_file(opt.input_path));
    RegularityVerdict v = (p.backend == Backend::Rational)
                              ? classify_spec(p.exact, opt.route)
                              : classify_spec(p.floating, opt.route);
    if (!opt.evidence) v.evidence.clear();
    rep.out = canonical_dump(verdict_to_json(v));
    return rep;
  } catch (const ParseError& e) {
    return failure(2, e.what());
  } catch (const DegenerateProblem& e) {
    return failure(2, std::string("degenerate problem: ") + e.what());
  } catch (const PreconditionError& e) {
    return failure(2, e.what());
  } catch (const std::exception& e) {
    return failure(1, e.what());
  }
}

RunReport cmd_expand(const ExpandOptions& opt) {
  RunReport rep;
  try {
    ParsedProblem p = parse_problem_text(read_file(opt.input_path));
    if (p.backend == Backend::Rational) {
      ProblemSpec<ExactBackend>& spec = p.exact;
      if (auto early = normalize_shape(spec))
        throw ParseError("problem is Birkhoff regular before reduction; "
                         "no reduced expansion to print");
      int m = opt.order >= 0 ? opt.order : spec.order_cap;
      rep.out = canonical_dump(expand_doc(spec, m));
    } else {
      ProblemSpec<FloatBackend>& spec = p.floating;
      if (auto early = normalize_shape(spec))
        throw ParseError("problem is Birkhoff regular before reduction; "
                         "no reduced expansion to print");
      int m = opt.order >= 0 ? opt.order : spec.order_cap;
      rep.out = canonical_dump(expand_doc(spec, m));
    }
    return rep;
  } catch (const ParseError& e) {
    return failure(2, e.what());
  } catch (const DegenerateProblem& e) {
    return failure(2, std::string("degenerate problem: ") + e.what());
  } catch (const PreconditionError& e) {
    return failure(2, e.what());
  } catch (const std::exception& e) {
    return failure(1, e.what());
  }
}

RunReport cmd_validate(const ValidateOptions& opt) {
  RunReport rep;
  try {
    if (opt.points < 4)
      throw ParseError("validate needs at least 4 lambda samples per half-plane");
    if (opt.grid_points < 2) throw ParseError("x grid needs at least 2 points");
    ParsedProblem p = parse_problem_text(read_file(opt.input_path));

    SmoothFunction<FloatBackend> q;
    int cap;
    if (p.backend == Backend::Rational) {
      ProblemSpec<ExactBackend>& spec = p.exact;
      q = to_float(spec.q);
      cap = spec.order_cap;
    } else {
      q = p.floating.q;
      cap = p.floating.order_cap;
    }
    const int m = opt.order >= 0 ? opt.order : std::min(cap, 6);
    ExpansionTable<FloatBackend> table = build_expansion_table(q, m);

    double lo = opt.lambda_min > 0.0 ? opt.lambda_min : suggested_radius_gate(q);
    double hi = opt.lambda_max > 0.0 ? opt.lambda_max : 8.0 * lo;
    if (!(hi > lo)) throw ParseError("lambda range is empty");

    ProbeOptions po;
    po.grid_points = opt.grid_points;
    po.threads = opt.threads;
    ValidationReport vr =
        remainder_probe(q, table, validate_lambdas(lo, hi, opt.points), po);

    std::ostringstream csv;
    write_validation_csv(csv, vr);
    rep.out = csv.str();
    rep.err = validation_summary(vr);
    return rep;
  } catch (const ParseError& e) {
    return failure(2, e.what());
  } catch (const SolverError& e) {
    return failure(1, std::string("solver failure: ") + e.what());
  } catch (const std::exception& e) {
    return failure(1, e.what());
  }
}

RunReport cmd_spectrum(const SpectrumOptions& opt) {
  RunReport rep;
  try {
    ParsedProblem p = parse_problem_text(read_file(opt.input_path));
    SmoothFunction<FloatBackend> q;
    BoundaryData<FloatBackend> bc;
    if (p.backend == Backend::Rational) {
      q = to_float(p.exact.q);
      bc = to_float(p.exact.bc);
    } else {
      q = p.floating.q;
      bc = p.floating.bc;
    }
    SpectrumWindow win;
    win.re_min = opt.re_min;
    win.re_max = opt.re_max;
    win.im_min = opt.im_min;
    win.im_max = opt.im_max;
    win.grid = opt.grid;
    if (win.grid < 4) throw ParseError("grid must be at least 4");
    SpectrumResult res = find_eigenvalues(q, bc, win, opt.threads);
    if (res.seeds > 0 && res.converged == 0)
      return failure(1, "no seed converged; refine the window or grid");
    rep.out = canonical_dump(spectrum_to_json(res, win));
    return rep;
  } catch (const ParseError& e) {
    return failure(2, e.what());
  } catch (const SolverError& e) {
    return failure(1, std::string("solver failure: ") + e.what());
  } catch (const std::exception& e) {
    return failure(1, e.what());
  }
}

RunReport cmd_gen(const GenOptions& opt) {
  RunReport rep;
  try {
    std::mt19937_64 rng(opt.seed);
    auto small = [&](bool nonzero) {
      std::uniform_int_distribution<int> num(-6, 6);
      std::uniform_int_distribution<int> den(1, 4);
      int n = num(rng);
      while (nonzero && n == 0) n = num(rng);
      Rational r(n, den(rng));
      r.canonicalize();
      return r;
    };
    auto jrat = [](const Rational& r) { return json(r.get_str()); };
    auto jc = [&](const Rational& re) { return json::array({jrat(re), "0"}); };

    // boundary with s1 = s2 = 0 and a20 b11 != 0 unless the target says
    // otherwise
    Rational a11 = small(true), b11 = small(true), a20 = small(true);
    Rational b20 = -b11 * a20 / a11;
    Rational a10 = small(false);
    Rational b10 = (a20 == 0) ? Rational(0) : a10 * b20 / a20;

    json boundary;
    json q;
    const std::string& cls = opt.target_class;
    if (cls == "BirkhoffRegular") {
      // independent derivative parts: s1 != 0
      boundary = json{{"a11", jc(Rational(1))}, {"a10", jc(small(false))},
                      {"b11", jc(small(false))}, {"b10", jc(small(false))},
                      {"a20", jc(Rational(0))},  {"b20", jc(Rational(1))}};
      q = json{{"kind", "poly"}, {"coeffs", json::array({jc(small(false))})}};
    } else if (cls == "NotNormal") {
      // s1 = s2 = 0 with a20 b11 = 0: both forms anchored at x = 1
      boundary = json{{"a11", jc(Rational(0))}, {"a10", jc(Rational(0))},
                      {"b11", jc(Rational(1))}, {"b10", jc(small(false))},
                      {"a20", jc(Rational(0))}, {"b20", jc(Rational(1))}};
      q = json{{"kind", "poly"},
               {"coeffs", json::array({jc(small(false)), jc(small(false))})}};
    } else if (cls == "UndeterminedBeyondCap") {
      boundary = json{{"a11", jc(a11)}, {"a10", jc(a10)}, {"b11", jc(b11)},
                      {"b10", jc(b10)}, {"a20", jc(a20)}, {"b20", jc(b20)}};
      // symmetric around 1/2: q = c0 + c1 x(1-x)
      Rational c0 = small(false), c1 = small(true);
      q = json{{"kind", "poly"},
               {"coeffs", json::array({jc(c0), jc(c1), jc(-c1)})}};
    } else if (cls == "AlmostRegular") {
      if (opt.order == 1) {
        Rational a10n = small(true);
        boundary = json{{"a11", jc(a11)}, {"a10", jc(a10n)}, {"b11", jc(b11)},
                        {"b10", jc(a10n * b20 / a20 + Rational(1))},  // s2 != 0
                        {"a20", jc(a20)}, {"b20", jc(b20)}};
        q = json{{"kind", "poly"}, {"coeffs", json::array({jc(small(false))})}};
      } else if (opt.order >= 2) {
        boundary = json{{"a11", jc(a11)}, {"a10", jc(a10)}, {"b11", jc(b11)},
                        {"b10", jc(b10)}, {"a20", jc(a20)}, {"b20", jc(b20)}};
        // q = symmetric part + (x(1-x))^{order-2} (2x - 1): the endpoint
        // conditions hold below order-2 and break exactly there
        const int d = opt.order - 2;
        std::vector<Rational> poly(2 * d + 2, Rational(0));
        // expand (x - x^2)^d * (2x - 1)
        std::vector<Rational> base(1, Rational(1));
        for (int t = 0; t < d; ++t) {
          std::vector<Rational> nxt(base.size() + 2, Rational(0));
          for (std::size_t j = 0; j < base.size(); ++j) {
            nxt[j + 1] += base[j];
            nxt[j + 2] -= base[j];
          }
          base = std::move(nxt);
        }
        for (std::size_t j = 0; j < base.size(); ++j) {
          poly[j] -= base[j];
          poly[j + 1] += Rational(2) * base[j];
        }
        Rational c0 = small(false);
        json coeffs = json::array();
        coeffs.push_back(jc(c0 + poly[0]));
        for (std::size_t j = 1; j < poly.size(); ++j) coeffs.push_back(jc(poly[j]));
        q = json{{"kind", "poly"}, {"coeffs", coeffs}};
      } else {
        throw ParseError("order must be >= 1 for AlmostRegular");
      }
    } else {
      throw ParseError("unknown target class: " + cls);
    }

    json doc{{"backend", opt.backend},
             {"boundary", boundary},
             {"q", q},
             {"order_cap", std::max(8, opt.order + 2)},
             {"tolerance", 1e-10}};
    rep.out = canonical_dump(doc);
    return rep;
  } catch (const ParseError& e) {
    return failure(2, e.what());
  } catch (const std::exception& e) {
    return failure(1, e.what());
  }
}

}  // namespace specreg
