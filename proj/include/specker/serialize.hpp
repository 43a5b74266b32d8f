#pragma once

// JSON forms.  Every big integer is a decimal string; small counts and
// configuration values are plain numbers.

#include "json.hpp"
#include "specker/boundcheck.hpp"

namespace specker {

using json = nlohmann::ordered_json;

json to_json(const BigInt& x);
json to_json(const IntVector& v);
json to_json(const IntMatrix& a);
json to_json(const Scale& s);
json to_json(const Poly& p);
json to_json(const StepFunction& f);
json to_json(const IntervalSet& s);
json to_json(const FuncExpr& e);
json to_json(const BuildConfig& c);
json to_json(const StageResult& st);
json to_json(const GeneratorFamily& fam);
json to_json(const Cond4Report& r);
json to_json(const Cond23Report& r);
json to_json(const ViolationCertificate& c);
json to_json(const PreservationTrace& t);
json to_json(const PowerReport& r);
json to_json(const std::vector<Term>& terms);

BigInt bigint_from_json(const json& j);
IntVector vector_from_json(const json& j);
IntMatrix matrix_from_json(const json& j);
Scale scale_from_json(const json& j);
BuildConfig config_from_json(const json& j);
// Rebuilds the family; closure fragments are regenerated from the data.
GeneratorFamily family_from_json(const json& j);

// Matrix literal "[[2,3],[1,-1]]".
IntMatrix parse_matrix(const std::string& text);

}  // namespace specker
