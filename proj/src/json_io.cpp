#include "specreg/json_io.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace specreg {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

// ---- scalar parsing --------------------------------------------------------

TauRat parse_exact_scalar(const json& v, const std::string& path) {
  if (v.is_number_integer()) return TauRat(Rational(v.get<long>()));
  if (v.is_string()) {
    try {
      return TauRat(parse_rational(v.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  if (v.is_object()) {
    if (!v.contains("tau") || v.size() != 1)
      fail(path, "scalar object must have the single key \"tau\"");
    TauRat acc;
    for (const auto& [key, val] : v.at("tau").items()) {
      int exp = 0;
      try {
        exp = std::stoi(key);
      } catch (...) {
        fail(path + ".tau", "exponent key is not an integer: " + key);
      }
      if (!val.is_string() && !val.is_number_integer())
        fail(path + ".tau." + key, "coefficient must be an integer or \"p/q\" string");
      Rational c = val.is_string() ? parse_rational(val.get<std::string>())
                                   : Rational(val.get<long>());
      acc += TauRat::monomial(exp, c);
    }
    return acc;
  }
  if (v.is_number_float())
    fail(path, "rational backend accepts integers or \"p/q\" strings, not floats");
  fail(path, "expected a rational scalar");
}

double parse_float_scalar(const json& v, const std::string& path) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>()).get_d();
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
  }
  if (v.is_object()) return parse_exact_scalar(v, path).to_double();
  fail(path, "expected a numeric scalar");
}

template <class B>
typename B::Real parse_scalar(const json& v, const std::string& path) {
  if constexpr (B::exact)
    return parse_exact_scalar(v, path);
  else
    return parse_float_scalar(v, path);
}

template <class B>
Complex<typename B::Real> parse_complex(const json& v, const std::string& path) {
  if (v.is_array()) {
    if (v.size() != 2) fail(path, "complex value must be a [re, im] pair");
    return {parse_scalar<B>(v[0], path + "[0]"), parse_scalar<B>(v[1], path + "[1]")};
  }
  return {parse_scalar<B>(v, path)};
}

// ---- potential parsing -----------------------------------------------------

template <class B>
SmoothFunction<B> parse_potential(const json& v, const std::string& path) {
  using Fn = SmoothFunction<B>;
  if (!v.is_object()) fail(path, "potential must be an object");
  if (!v.contains("kind")) fail(path, "potential needs a \"kind\"");
  const std::string kind = v.at("kind").get<std::string>();

  if (kind == "poly") {
    if (!v.contains("coeffs") || !v.at("coeffs").is_array())
      fail(path, "poly potential needs a \"coeffs\" array");
    for (const auto& [key, _] : v.items())
      if (key != "kind" && key != "coeffs") fail(path, "unknown key: " + key);
    const auto& arr = v.at("coeffs");
    if (arr.size() > static_cast<std::size_t>(kMaxPolyDegree) + 1)
      fail(path + ".coeffs", "degree exceeds cap " + std::to_string(kMaxPolyDegree));
    typename Fn::Poly coeffs;
    for (std::size_t k = 0; k < arr.size(); ++k)
      coeffs.push_back(
          parse_complex<B>(arr[k], path + ".coeffs[" + std::to_string(k) + "]"));
    return Fn::polynomial(std::move(coeffs));
  }

  if (kind == "trig") {
    for (const auto& [key, _] : v.items())
      if (key != "kind" && key != "const" && key != "cos" && key != "sin")
        fail(path, "unknown key: " + key);
    Fn out;
    if (v.contains("const"))
      out = Fn::constant(parse_complex<B>(v.at("const"), path + ".const"));
    for (const char* part : {"cos", "sin"}) {
      if (!v.contains(part)) continue;
      const auto& arr = v.at(part);
      if (!arr.is_array()) fail(path + "." + part, "expected an array");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string ep = path + "." + part + "[" + std::to_string(k) + "]";
        const auto& ent = arr[k];
        if (!ent.is_array() || ent.size() != 3)
          fail(ep, "expected [k, re, im] with integer k >= 1");
        if (!ent[0].is_number_integer()) fail(ep, "harmonic index must be an integer");
        int kk = ent[0].get<int>();
        if (kk < 1 || kk > kMaxHarmonic)
          fail(ep, "harmonic index out of range 1.." + std::to_string(kMaxHarmonic));
        Complex<typename B::Real> amp{parse_scalar<B>(ent[1], ep + "[1]"),
                                      parse_scalar<B>(ent[2], ep + "[2]")};
        typename Fn::Poly p{amp};
        out = out + (part[0] == 'c' ? Fn::harmonic_cos(kk, p) : Fn::harmonic_sin(kk, p));
      }
    }
    return out;
  }

  fail(path, "unknown potential kind: " + kind);
}

template <class B>
ProblemSpec<B> parse_spec(const json& doc) {
  ProblemSpec<B> p;
  const json& b = doc.at("boundary");
  if (!b.is_object()) fail("boundary", "expected an object");
  for (const auto& [key, _] : b.items()) {
    static const char* known[] = {"a11", "a10", "b11", "b10", "a20", "b20", "a21", "b21"};
    bool hit = false;
    for (const char* k : known) hit = hit || key == k;
    if (!hit) fail("boundary", "unknown coefficient: " + key);
  }
  auto get = [&](const char* key) -> Complex<typename B::Real> {
    if (!b.contains(key)) return {};
    return parse_complex<B>(b.at(key), std::string("boundary.") + key);
  };
  p.bc.a11 = get("a11");
  p.bc.a10 = get("a10");
  p.bc.b11 = get("b11");
  p.bc.b10 = get("b10");
  p.bc.a20 = get("a20");
  p.bc.b20 = get("b20");
  p.bc.a21 = get("a21");
  p.bc.b21 = get("b21");

  p.q = parse_potential<B>(doc.at("q"), "q");

  if (doc.contains("order_cap")) {
    if (!doc.at("order_cap").is_number_integer())
      fail("order_cap", "expected an integer");
    p.order_cap = doc.at("order_cap").get<int>();
    if (p.order_cap < 0 || p.order_cap > 64) fail("order_cap", "must be in 0..64");
  }
  if (doc.contains("tolerance")) {
    if (!doc.at("tolerance").is_number()) fail("tolerance", "expected a number");
    p.tolerance = doc.at("tolerance").get<double>();
    if (!(p.tolerance > 0.0)) fail("tolerance", "must be positive");
  }
  return p;
}

// ---- scalar/complex writers ------------------------------------------------

json scalar_to_json(const TauRat& v) {
  if (v.is_pure_rational()) return v.rational_value().get_str();
  json tau = json::object();
  for (const auto& [exp, c] : v.terms()) tau[std::to_string(exp)] = c.get_str();
  return json{{"tau", tau}};
}

json scalar_to_json(double v) { return v; }

template <class B>
json complex_to_json(const Complex<typename B::Real>& z) {
  return json::array({scalar_to_json(z.re), scalar_to_json(z.im)});
}

template <class B>
json function_to_json_impl(const SmoothFunction<B>& f) {
  auto poly_json = [&](const typename SmoothFunction<B>::Poly& p) {
    json arr = json::array();
    for (const auto& c : p) arr.push_back(complex_to_json<B>(c));
    return arr;
  };
  if (f.is_polynomial())
    return json{{"kind", "poly"}, {"coeffs", poly_json(f.base())}};
  json harmonics = json::array();
  if (!f.base().empty())
    harmonics.push_back(
        json{{"k", 0}, {"cos", poly_json(f.base())}, {"sin", json::array()}});
  for (const auto& [k, h] : f.harmonics())
    harmonics.push_back(
        json{{"k", k}, {"cos", poly_json(h.cos_amp)}, {"sin", poly_json(h.sin_amp)}});
  return json{{"kind", "trig"}, {"harmonics", harmonics}};
}

template <class B>
json expand_doc_impl(const ProblemSpec<B>& p, int m, const char* backend_name) {
  ExpansionTable<B> t = build_expansion_table(p.q, m);
  DeltaTable<B> dt = delta_table(p.bc, t);

  json g = json::object();
  const char* names[2][2] = {{"g10", "g11"}, {"g20", "g21"}};
  for (int i = 1; i <= 2; ++i)
    for (int nu = 0; nu <= 1; ++nu) {
      json arr = json::array();
      for (int s = 0; s <= m; ++s) arr.push_back(function_to_json_impl(t.g(i, nu, s)));
      g[names[i - 1][nu]] = arr;
    }

  json d = json::object();
  const char* dnames[3] = {"minus", "zero", "plus"};
  for (int k = -1; k <= 1; ++k) {
    json arr = json::array();
    for (int i = 0; i <= m; ++i) arr.push_back(complex_to_json<B>(dt.delta(k, i)));
    d[dnames[k + 1]] = arr;
  }

  return json{{"backend", backend_name}, {"m", m}, {"g", g}, {"delta", d}};
}

}  // namespace

ParsedProblem parse_problem(const json& doc) {
  if (!doc.is_object()) throw ParseError("problem file must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    static const char* known[] = {"boundary", "q", "order_cap", "tolerance", "backend"};
    bool hit = false;
    for (const char* k : known) hit = hit || key == k;
    if (!hit) fail("problem", "unknown key: " + key);
  }
  if (!doc.contains("boundary")) fail("problem", "missing \"boundary\"");
  if (!doc.contains("q")) fail("problem", "missing \"q\"");

  ParsedProblem out;
  std::string backend = "rational";
  if (doc.contains("backend")) {
    if (!doc.at("backend").is_string()) fail("backend", "expected a string");
    backend = doc.at("backend").get<std::string>();
  }
  if (backend == "rational") {
    out.backend = Backend::Rational;
    out.exact = parse_spec<ExactBackend>(doc);
  } else if (backend == "float") {
    out.backend = Backend::Float;
    out.floating = parse_spec<FloatBackend>(doc);
  } else {
    fail("backend", "must be \"rational\" or \"float\"");
  }
  return out;
}

ParsedProblem parse_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return parse_problem(doc);
}

json verdict_to_json(const RegularityVerdict& v) {
  json ev = json::array();
  for (const auto& e : v.evidence)
    ev.push_back(json{{"label", e.label}, {"value", e.value}, {"satisfied", e.satisfied}});
  json order;
  if (v.cls == RegClass::BirkhoffRegular || v.cls == RegClass::AlmostRegular)
    order = v.order;
  return json{{"class", to_string(v.cls)},
              {"order", order},
              {"route", v.route},
              {"evidence", ev}};
}

template <class B>
json function_to_json(const SmoothFunction<B>& f) {
  return function_to_json_impl(f);
}
template json function_to_json<ExactBackend>(const SmoothFunction<ExactBackend>&);
template json function_to_json<FloatBackend>(const SmoothFunction<FloatBackend>&);

json expand_doc(const ProblemSpec<ExactBackend>& p, int m) {
  return expand_doc_impl(p, m, "rational");
}
json expand_doc(const ProblemSpec<FloatBackend>& p, int m) {
  return expand_doc_impl(p, m, "float");
}

json reserialize_expand_doc(const json& doc) {
  // Parse and rebuild every node through the same writers; used to check the
  // serialization is a fixed point.
  if (!doc.is_object()) throw ParseError("expand document must be an object");
  const std::string backend = doc.at("backend").get<std::string>();
  const bool exact = backend == "rational";
  const int m = doc.at("m").get<int>();

  auto rebuild_poly = [&](const json& arr, const std::string& path) {
    json out = json::array();
    for (std::size_t k = 0; k < arr.size(); ++k) {
      const std::string p = path + "[" + std::to_string(k) + "]";
      if (exact) {
        auto z = parse_complex<ExactBackend>(arr[k], p);
        out.push_back(complex_to_json<ExactBackend>(z));
      } else {
        auto z = parse_complex<FloatBackend>(arr[k], p);
        out.push_back(complex_to_json<FloatBackend>(z));
      }
    }
    return out;
  };

  json g = json::object();
  for (const auto& [name, arr] : doc.at("g").items()) {
    json fns = json::array();
    for (std::size_t s = 0; s < arr.size(); ++s) {
      const json& fn = arr[s];
      const std::string kind = fn.at("kind").get<std::string>();
      if (kind == "poly") {
        fns.push_back(json{{"kind", "poly"},
                           {"coeffs", rebuild_poly(fn.at("coeffs"), name + ".coeffs")}});
      } else {
        json hs = json::array();
        for (const auto& h : fn.at("harmonics"))
          hs.push_back(json{{"k", h.at("k").get<int>()},
                            {"cos", rebuild_poly(h.at("cos"), name + ".cos")},
                            {"sin", rebuild_poly(h.at("sin"), name + ".sin")}});
        fns.push_back(json{{"kind", "trig"}, {"harmonics", hs}});
      }
    }
    g[name] = fns;
  }

  json d = json::object();
  for (const auto& [name, arr] : doc.at("delta").items())
    d[name] = rebuild_poly(arr, "delta." + name);

  return json{{"backend", backend}, {"m", m}, {"g", g}, {"delta", d}};
}

json spectrum_to_json(const SpectrumResult& res, const SpectrumWindow& win) {
  json eig = json::array();
  for (const auto& z : res.eigenvalues) eig.push_back(json::array({z.real(), z.imag()}));
  return json{{"eigenvalues", eig},
              {"seeds", res.seeds},
              {"converged", res.converged},
              {"window", json{{"re_min", win.re_min},
                              {"re_max", win.re_max},
                              {"im_min", win.im_min},
                              {"im_max", win.im_max},
                              {"grid", win.grid}}}};
}

void write_validation_csv(std::ostream& os, const ValidationReport& rep) {
  os << "re_lambda,im_lambda,i,nu,max_eta,bound_pred\n";
  char buf[256];
  for (const auto& r : rep.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%.17g,%.17g\n", r.lambda.real(),
                  r.lambda.imag(), r.i, r.nu, r.max_eta, r.bound_pred);
    os << buf;
  }
}

std::string validation_summary(const ValidationReport& rep) {
  std::ostringstream os;
  os << "series order m = " << rep.m << ", radius gate |lambda| >= " << rep.radius_gate
     << "\n";
  for (const auto& f : rep.fits) {
    os << "branch i=" << f.i << " nu=" << f.nu << ": ";
    if (f.below_noise) {
      os << "remainders below solver noise";
      if (f.points > 0) os << " (" << f.points << " samples)";
    } else {
      char buf[160];
      std::snprintf(buf, sizeof buf, "slope %.3f over %d samples (expected ~ %d), M ~ %.3g",
                    f.slope, f.points, -(rep.m + 1), f.m_estimate);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

std::string canonical_dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace specreg
