#include "ppslab/io.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ppslab/fixtures.hpp"

namespace ppslab {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Numeric expression parsing
// ---------------------------------------------------------------------------

namespace {

struct ExprParser {
    const std::string& text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        std::ostringstream os;
        os << "cannot parse '" << text << "' at position " << pos << ": " << message;
        throw ParseError(os.str());
    }

    double parse_expression() {
        double value = parse_term();
        while (true) {
            if (consume('+'))
                value += parse_term();
            else if (consume('-'))
                value -= parse_term();
            else
                return value;
        }
    }

    double parse_term() {
        double value = parse_factor();
        while (true) {
            if (consume('*')) {
                value *= parse_factor();
            } else if (consume('/')) {
                const double d = parse_factor();
                if (d == 0.0) fail("division by zero");
                value /= d;
            } else {
                return value;
            }
        }
    }

    double parse_factor() {
        if (consume('-')) return -parse_factor();
        if (consume('+')) return parse_factor();
        return parse_primary();
    }

    double parse_primary() {
        skip_space();
        if (pos >= text.size()) fail("unexpected end of input");
        if (text.compare(pos, 5, "sqrt(") == 0) {
            pos += 5;
            const double inner = parse_expression();
            if (!consume(')')) fail("missing ')' after sqrt");
            if (inner < 0.0) fail("sqrt of a negative value");
            return std::sqrt(inner);
        }
        if (consume('(')) {
            const double inner = parse_expression();
            if (!consume(')')) fail("missing ')'");
            return inner;
        }
        const std::size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.' ||
                text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E'))))
            ++pos;
        if (pos == start) fail("expected a number");
        try {
            return std::stod(text.substr(start, pos - start));
        } catch (const std::exception&) {
            fail("malformed number");
        }
    }
};

} // namespace

double parse_real_expression(const std::string& text) {
    ExprParser parser{text};
    const double value = parser.parse_expression();
    parser.skip_space();
    if (parser.pos != text.size()) parser.fail("trailing characters");
    return value;
}

Complex parse_complex_entry(const json& value, const std::string& where) {
    try {
        if (value.is_number()) return Complex(value.get<double>(), 0.0);
        if (value.is_string()) return Complex(parse_real_expression(value.get<std::string>()), 0.0);
        if (value.is_array() && value.size() == 2) {
            const Complex re = parse_complex_entry(value[0], where);
            const Complex im = parse_complex_entry(value[1], where);
            return Complex(re.real(), im.real());
        }
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a number, expression string, or [re, im] pair");
}

// ---------------------------------------------------------------------------
// Scenario documents
// ---------------------------------------------------------------------------

namespace {

ComplexVector parse_vector(const json& value, Index dim, const std::string& where) {
    if (!value.is_array() || static_cast<Index>(value.size()) != dim)
        throw ParseError(where + ": expected an array of " + std::to_string(dim) + " entries");
    ComplexVector v(dim);
    for (Index i = 0; i < dim; ++i)
        v(i) = parse_complex_entry(value[static_cast<std::size_t>(i)],
                                   where + "[" + std::to_string(i) + "]");
    return v;
}

ComplexMatrix parse_matrix(const json& value, Index dim, const std::string& where) {
    if (!value.is_array() || static_cast<Index>(value.size()) != dim)
        throw ParseError(where + ": expected " + std::to_string(dim) + " rows");
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i) {
        const json& row = value[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != dim)
            throw ParseError(where + "[" + std::to_string(i) + "]: expected " +
                             std::to_string(dim) + " entries");
        for (Index j = 0; j < dim; ++j)
            m(i, j) = parse_complex_entry(
                row[static_cast<std::size_t>(j)],
                where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
    return m;
}

Projector parse_projector_spec(const json& value, Index dim, const Tolerances& tol,
                               const std::string& where) {
    try {
        if (value.is_object() && value.contains("basis_projector")) {
            std::vector<Index> indices;
            for (const auto& entry : value.at("basis_projector"))
                indices.push_back(entry.get<Index>());
            return basis_projector(dim, indices, tol);
        }
        if (value.is_object() && value.contains("matrix"))
            return validate_projector(parse_matrix(value.at("matrix"), dim, where + ".matrix"), tol);
        if (value.is_array())
            return validate_projector(parse_matrix(value, dim, where), tol);
    } catch (const Error& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ": expected a matrix or a basis_projector shorthand");
}

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

json vector_to_json(const ComplexVector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

json matrix_to_json(const ComplexMatrix& m) {
    json out = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
        out.push_back(std::move(row));
    }
    return out;
}

RealVector parse_real_vector(const json& value, Index size, const std::string& where) {
    if (!value.is_array() || static_cast<Index>(value.size()) != size)
        throw ParseError(where + ": expected " + std::to_string(size) + " entries");
    RealVector v(size);
    for (Index i = 0; i < size; ++i) {
        const Complex c = parse_complex_entry(value[static_cast<std::size_t>(i)],
                                              where + "[" + std::to_string(i) + "]");
        v(i) = c.real();
    }
    return v;
}

} // namespace

Scenario parse_scenario(const json& doc, const Tolerances& tol) {
    if (!doc.is_object()) throw ParseError("scenario document must be a JSON object");
    if (doc.contains("fixture")) {
        const std::string name = doc.at("fixture").get<std::string>();
        const auto fixture = fixture_by_name(name);
        if (!fixture) throw ParseError("unknown fixture '" + name + "'");
        return *fixture;
    }
    if (!doc.contains("dim")) throw ParseError("scenario document lacks 'dim'");
    const Index dim = doc.at("dim").get<Index>();

    Scenario scenario;
    scenario.dim = dim;
    try {
        scenario.pre = PureState::validated(parse_vector(doc.at("pre"), dim, "pre"), tol);
        scenario.post = PureState::validated(parse_vector(doc.at("post"), dim, "post"), tol);
    } catch (const Error& e) {
        throw ParseError(std::string("pre/post: ") + e.what());
    }

    if (!doc.contains("generators") || !doc.at("generators").is_array())
        throw ParseError("scenario document lacks a 'generators' array");
    std::size_t index = 0;
    for (const auto& entry : doc.at("generators")) {
        const std::string where = "generators[" + std::to_string(index) + "]";
        GeneratorBinding binding;
        binding.projector = parse_projector_spec(entry, dim, tol, where);
        binding.label = entry.is_object() && entry.contains("label")
                            ? entry.at("label").get<std::string>()
                            : "G" + std::to_string(index);
        if (entry.is_object() && entry.contains("context")) {
            const json& ctx = entry.at("context");
            MeasurementContext context;
            if (!ctx.contains("measurement") || !ctx.at("measurement").is_array())
                throw ParseError(where + ".context: expected a 'measurement' array");
            std::size_t k = 0;
            for (const auto& outcome : ctx.at("measurement")) {
                context.outcomes.push_back(parse_projector_spec(
                    outcome, dim, tol,
                    where + ".context.measurement[" + std::to_string(k) + "]"));
                ++k;
            }
            if (ctx.contains("event")) {
                for (const auto& e : ctx.at("event")) context.event.push_back(e.get<int>());
            } else {
                context.event = {0};
            }
            binding.context = std::move(context);
        }
        scenario.generators.push_back(std::move(binding));
        ++index;
    }
    return scenario;
}

Scenario load_scenario(const std::string& path, const Tolerances& tol) {
    if (path.rfind("fixture:", 0) == 0) {
        const std::string name = path.substr(8);
        const auto fixture = fixture_by_name(name);
        if (!fixture) throw ParseError("unknown fixture '" + name + "'");
        return *fixture;
    }
    return parse_scenario(read_json_file(path), tol);
}

json scenario_to_json(const Scenario& s) {
    json doc;
    doc["format_version"] = "1";
    doc["dim"] = s.dim;
    doc["pre"] = vector_to_json(s.pre.amplitudes);
    doc["post"] = vector_to_json(s.post.amplitudes);
    json generators = json::array();
    for (const auto& g : s.generators) {
        json entry;
        entry["label"] = g.label;
        entry["matrix"] = matrix_to_json(g.projector.matrix);
        if (g.context) {
            json ctx;
            json measurement = json::array();
            for (const auto& o : g.context->outcomes)
                measurement.push_back(json{{"matrix", matrix_to_json(o.matrix)}});
            ctx["measurement"] = std::move(measurement);
            ctx["event"] = g.context->event;
            entry["context"] = std::move(ctx);
        }
        generators.push_back(std::move(entry));
    }
    doc["generators"] = std::move(generators);
    return doc;
}

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

FiniteOntModel parse_model(const json& doc, const Tolerances& tol) {
    if (!doc.is_object()) throw ParseError("model document must be a JSON object");
    FiniteOntModel model;
    if (!doc.contains("ontic_states") || !doc.at("ontic_states").is_array())
        throw ParseError("model document lacks an 'ontic_states' array");
    for (const auto& s : doc.at("ontic_states")) model.ontic_states.push_back(s.get<std::string>());
    const Index m = model.lambda_count();

    Index dim = -1;
    if (doc.contains("states")) {
        for (const auto& [label, spec] : doc.at("states").items()) {
            const std::string where = "states." + label;
            const ComplexVector v = [&] {
                if (!spec.contains("vector")) throw ParseError(where + ": missing 'vector'");
                const json& vec = spec.at("vector");
                if (!vec.is_array()) throw ParseError(where + ".vector: expected an array");
                return parse_vector(vec, static_cast<Index>(vec.size()), where + ".vector");
            }();
            if (dim < 0) dim = v.size();
            try {
                model.state_registry.emplace(label, PureState::validated(v, tol));
            } catch (const Error& e) {
                throw ParseError(where + ": " + e.what());
            }
            model.preparations[label] =
                parse_real_vector(spec.at("distribution"), m, where + ".distribution");
        }
    }
    if (doc.contains("effects")) {
        for (const auto& [label, spec] : doc.at("effects").items()) {
            const std::string where = "effects." + label;
            if (!spec.contains("matrix")) throw ParseError(where + ": missing 'matrix'");
            const json& mat = spec.at("matrix");
            if (!mat.is_array()) throw ParseError(where + ".matrix: expected rows");
            const Index d = static_cast<Index>(mat.size());
            model.effect_registry[label] = parse_matrix(mat, d, where + ".matrix");
            model.responses[label] =
                parse_real_vector(spec.at("response"), m, where + ".response");
        }
    }
    if (doc.contains("povms")) {
        for (const auto& [name, labels] : doc.at("povms").items()) {
            std::vector<std::string> list;
            for (const auto& l : labels) list.push_back(l.get<std::string>());
            model.povms[name] = std::move(list);
        }
    }
    if (doc.contains("instruments")) {
        for (const auto& [name, branches] : doc.at("instruments").items()) {
            std::vector<FiniteOntModel::Branch> parsed;
            std::size_t b = 0;
            for (const auto& spec : branches) {
                const std::string where =
                    "instruments." + name + "[" + std::to_string(b) + "]";
                FiniteOntModel::Branch branch;
                branch.label = spec.at("label").get<std::string>();
                branch.effect_label = spec.at("effect").get<std::string>();
                const json& kernel = spec.at("kernel");
                if (!kernel.is_array() || static_cast<Index>(kernel.size()) != m)
                    throw ParseError(where + ".kernel: expected " + std::to_string(m) + " rows");
                branch.kernel = RealMatrix::Zero(m, m);
                for (Index r = 0; r < m; ++r) {
                    branch.kernel.row(r) =
                        parse_real_vector(kernel[static_cast<std::size_t>(r)], m,
                                          where + ".kernel[" + std::to_string(r) + "]")
                            .transpose();
                }
                if (spec.contains("kraus")) {
                    for (const auto& k : spec.at("kraus")) {
                        const Index d = static_cast<Index>(k.size());
                        branch.kraus_ops.push_back(parse_matrix(k, d, where + ".kraus"));
                    }
                }
                parsed.push_back(std::move(branch));
                ++b;
            }
            model.instruments[name] = std::move(parsed);
        }
    }
    if (doc.contains("coarse_grainings")) {
        for (const auto& spec : doc.at("coarse_grainings")) {
            FiniteOntModel::CoarseGraining decl;
            decl.fine = spec.at("fine").get<std::string>();
            decl.coarse = spec.at("coarse").get<std::string>();
            for (const auto& group : spec.at("grouping")) {
                std::vector<int> indices;
                for (const auto& i : group) indices.push_back(i.get<int>());
                decl.grouping.push_back(std::move(indices));
            }
            model.coarse_grainings.push_back(std::move(decl));
        }
    }
    if (doc.contains("mixtures")) {
        for (const auto& spec : doc.at("mixtures")) {
            FiniteOntModel::MixtureDeclaration decl;
            decl.left = spec.at("left").get<std::string>();
            decl.right = spec.at("right").get<std::string>();
            decl.mixed = spec.at("mixed").get<std::string>();
            if (spec.contains("weight")) {
                decl.weight =
                    parse_complex_entry(spec.at("weight"), "mixtures.weight").real();
            }
            model.mixtures.push_back(std::move(decl));
        }
    }
    validate_model(model, tol);
    return model;
}

FiniteOntModel load_model(const std::string& path, const Tolerances& tol) {
    if (path == "builtin:toy_bit") return build_toy_bit_model();
    if (path.rfind("builtin:", 0) == 0)
        throw ParseError("unknown builtin model '" + path.substr(8) + "'");
    return parse_model(read_json_file(path), tol);
}

json model_to_json(const FiniteOntModel& model) {
    json doc;
    doc["format_version"] = "1";
    doc["ontic_states"] = model.ontic_states;
    json states;
    for (const auto& [label, state] : model.state_registry) {
        json spec;
        spec["vector"] = vector_to_json(state.amplitudes);
        const RealVector& mu = model.preparations.at(label);
        spec["distribution"] = std::vector<double>(mu.data(), mu.data() + mu.size());
        states[label] = std::move(spec);
    }
    doc["states"] = std::move(states);
    json effects;
    for (const auto& [label, op] : model.effect_registry) {
        json spec;
        spec["matrix"] = matrix_to_json(op);
        const RealVector& resp = model.responses.at(label);
        spec["response"] = std::vector<double>(resp.data(), resp.data() + resp.size());
        effects[label] = std::move(spec);
    }
    doc["effects"] = std::move(effects);
    json povms;
    for (const auto& [name, labels] : model.povms) povms[name] = labels;
    doc["povms"] = std::move(povms);
    json instruments;
    for (const auto& [name, branches] : model.instruments) {
        json list = json::array();
        for (const auto& branch : branches) {
            json spec;
            spec["label"] = branch.label;
            spec["effect"] = branch.effect_label;
            json kernel = json::array();
            for (Index r = 0; r < branch.kernel.rows(); ++r) {
                json row = json::array();
                for (Index c = 0; c < branch.kernel.cols(); ++c)
                    row.push_back(branch.kernel(r, c));
                kernel.push_back(std::move(row));
            }
            spec["kernel"] = std::move(kernel);
            json kraus = json::array();
            for (const auto& k : branch.kraus_ops) kraus.push_back(matrix_to_json(k));
            spec["kraus"] = std::move(kraus);
            list.push_back(std::move(spec));
        }
        instruments[name] = std::move(list);
    }
    doc["instruments"] = std::move(instruments);
    json coarse = json::array();
    for (const auto& decl : model.coarse_grainings) {
        coarse.push_back(json{{"fine", decl.fine},
                              {"coarse", decl.coarse},
                              {"grouping", decl.grouping}});
    }
    doc["coarse_grainings"] = std::move(coarse);
    json mixtures = json::array();
    for (const auto& decl : model.mixtures) {
        mixtures.push_back(json{{"left", decl.left},
                                {"right", decl.right},
                                {"mixed", decl.mixed},
                                {"weight", decl.weight}});
    }
    doc["mixtures"] = std::move(mixtures);
    return doc;
}

json algebra_to_json(const ProjectorAlgebra& alg) {
    json doc;
    doc["dim"] = alg.dim;
    doc["size"] = alg.size();
    doc["names"] = alg.names;
    json elements = json::array();
    for (const auto& p : alg.elements) {
        elements.push_back(json{{"matrix", matrix_to_json(p.matrix)}, {"rank", p.rank}});
    }
    doc["elements"] = std::move(elements);
    doc["zero_index"] = alg.zero_index;
    doc["identity_index"] = alg.identity_index;
    doc["complement_of"] = alg.complement_of;
    json pairs = json::array();
    for (const auto& [i, j] : alg.commuting_pairs) pairs.push_back(json::array({i, j}));
    doc["commuting_pairs"] = std::move(pairs);
    json products = json::array();
    for (const auto& [key, value] : alg.product_of)
        products.push_back(json::array({key.first, key.second, value}));
    doc["product_of"] = std::move(products);
    doc["generator_indices"] = alg.generator_indices;
    return doc;
}

std::vector<Projector> parse_measurement(const json& doc, const Tolerances& tol) {
    if (!doc.is_object() || !doc.contains("dim") || !doc.contains("projectors"))
        throw ParseError("measurement document needs 'dim' and 'projectors'");
    const Index dim = doc.at("dim").get<Index>();
    std::vector<Projector> out;
    std::size_t index = 0;
    for (const auto& entry : doc.at("projectors")) {
        out.push_back(
            parse_projector_spec(entry, dim, tol, "projectors[" + std::to_string(index) + "]"));
        ++index;
    }
    return out;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace ppslab
