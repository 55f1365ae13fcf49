#pragma once

#include <string>

#include <json.hpp>

#include "hoff/exact_fraction.hpp"
#include "hoff/ffpoly.hpp"
#include "hoff/multiaffine_form.hpp"
#include "hoff/multilinear_form.hpp"
#include "hoff/phaseapprox.hpp"
#include "hoff/pipeline.hpp"
#include "hoff/polynomial_fn.hpp"
#include "hoff/variety.hpp"

namespace hoff::io {

using Json = nlohmann::ordered_json;

/// Parses text, throwing ParseError with the byte offset, line and column.
Json parse(const std::string& text);

// Each decoder reports schema problems with the JSON pointer of the
// offending value.
Json to_json(const ffpoly::PolyFp& f);
ffpoly::PolyFp poly_fp_from_json(const Json& j);

Json to_json(const MultilinearForm& alpha);
MultilinearForm multilinear_form_from_json(const Json& j);

Json to_json(const MultiaffineForm& lambda);
MultiaffineForm multiaffine_form_from_json(const Json& j);

Json to_json(const PolynomialFn& Q);
PolynomialFn polynomial_fn_from_json(const Json& j);

Json to_json(const MultilinearVariety& W);
MultilinearVariety variety_from_json(const Json& j);

Json to_json(const PhaseCombination& c);
PhaseCombination phase_combination_from_json(const Json& j);

Json to_json(const ExactFraction& x);
ExactFraction exact_fraction_from_json(const Json& j);
Json to_json(const Rational& x);

// Reports (encode only).
Json to_json(const CorrelationReport& r);
Json to_json(const FiberReport& r);
Json to_json(const ExternalApproximation& r);
Json to_json(const DichotomyReport& r);
Json to_json(const ChevalleyWarningReport& r);
Json to_json(const SequencePlan& r);
Json to_json(const CascadeReport& r);
Json to_json(const DegreeLoweringReport& r);
Json to_json(const MlApproxResult& r, bool include_terms);
Json to_json(const PolyApproxResult& r, bool include_terms);
Json to_json(const GowersInverseResult& r);
Json to_json(const DecayTable& t);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

}  // namespace hoff::io
