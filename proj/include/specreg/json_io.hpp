#ifndef SPECREG_JSON_IO_HPP
#define SPECREG_JSON_IO_HPP

// Problem-file parsing and canonical serialization.  Canonical means: object
// keys alphabetical, exact scalars as "p/q" strings (plus a {"tau": ...}
// object for Laurent values), complex numbers as [re, im] pairs, and a single
// trailing newline; serializing a parsed document reproduces it byte for
// byte.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "specreg/classifier.hpp"
#include "specreg/delta.hpp"
#include "specreg/expansion.hpp"
#include "specreg/numerics.hpp"
#include "specreg/smooth_function.hpp"

namespace specreg {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Backend { Rational, Float };

// A parsed problem file; exactly one of the two specs is populated.
struct ParsedProblem {
  Backend backend = Backend::Rational;
  ProblemSpec<ExactBackend> exact;
  ProblemSpec<FloatBackend> floating;
};

ParsedProblem parse_problem(const nlohmann::json& doc);
ParsedProblem parse_problem_text(const std::string& text);

// ---- canonical writers ----

nlohmann::json verdict_to_json(const RegularityVerdict& v);

template <class B>
nlohmann::json function_to_json(const SmoothFunction<B>& f);

nlohmann::json expand_doc(const ProblemSpec<ExactBackend>& p, int m);
nlohmann::json expand_doc(const ProblemSpec<FloatBackend>& p, int m);

// Parses a document produced by expand_doc and re-serializes it (round-trip
// identity check support).
nlohmann::json reserialize_expand_doc(const nlohmann::json& doc);

nlohmann::json spectrum_to_json(const SpectrumResult& res, const SpectrumWindow& win);

void write_validation_csv(std::ostream& os, const ValidationReport& rep);
std::string validation_summary(const ValidationReport& rep);

// One canonical byte representation: two-space indent, sorted keys, newline.
std::string canonical_dump(const nlohmann::json& doc);

}  // namespace specreg

#endif  // SPECREG_JSON_IO_HPP
