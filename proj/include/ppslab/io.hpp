#ifndef PPSLAB_IO_HPP
#define PPSLAB_IO_HPP

#include <string>

// Single-header nlohmann/json from vendor/.
#include "json.hpp"

#include "ppslab/algebra.hpp"
#include "ppslab/ontmodel.hpp"
#include "ppslab/pps.hpp"

namespace ppslab {

/// Evaluates a numeric expression string: rationals ("1/3"), surds
/// ("1/sqrt(2)", "-sqrt(3)/2"), parentheses, and the four arithmetic
/// operators. Throws ParseError.
double parse_real_expression(const std::string& text);

/// A complex entry is a number, an expression string, or a [re, im] pair of
/// either.
Complex parse_complex_entry(const nlohmann::json& value, const std::string& where);

/// Parses a scenario document: either {"fixture": name} or dim/pre/post/
/// generators with matrices as nested [re, im] arrays or "basis_projector"
/// shorthands. Throws ParseError with field diagnostics.
Scenario parse_scenario(const nlohmann::json& doc,
                        const Tolerances& tol = Tolerances::defaults());

/// Reads and parses a scenario from a path, or from a built-in fixture when
/// the path has the form "fixture:<name>".
Scenario load_scenario(const std::string& path,
                       const Tolerances& tol = Tolerances::defaults());

nlohmann::json scenario_to_json(const Scenario& s);

/// Parses a finite ontological model document. Throws ParseError.
FiniteOntModel parse_model(const nlohmann::json& doc,
                           const Tolerances& tol = Tolerances::defaults());

/// Reads a model from a path, or "builtin:toy_bit".
FiniteOntModel load_model(const std::string& path,
                          const Tolerances& tol = Tolerances::defaults());

nlohmann::json model_to_json(const FiniteOntModel& model);

/// Algebra serialisation: elements as matrices, structure maps as index
/// tables.
nlohmann::json algebra_to_json(const ProjectorAlgebra& alg);

/// Parses a measurement document {"dim": d, "projectors": [...]} for the
/// decompose command.
std::vector<Projector> parse_measurement(const nlohmann::json& doc,
                                         const Tolerances& tol = Tolerances::defaults());

nlohmann::json read_json_file(const std::string& path);

} // namespace ppslab

#endif // PPSLAB_IO_HPP
