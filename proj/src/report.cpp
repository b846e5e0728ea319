#include "ppslab/report.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "ppslab/io.hpp"

namespace ppslab {

using nlohmann::json;

std::string format_probability(double value) {
    if (value == 0.0 || value == 1.0) {
        return value == 0.0 ? "0" : "1";
    }
    std::ostringstream os;
    os << std::setprecision(12) << value;
    return os.str();
}

AblTable abl_table(const Scenario& s, const Tolerances& tol) {
    AblTable table;
    for (const auto& g : s.generators) {
        AblRow row;
        row.label = g.label;
        try {
            double value;
            if (g.context) {
                value = abl_in_context(s.pre, g.context->outcomes, g.context->event, s.post, tol);
            } else {
                value = abl(s.pre, g.projector, s.post, tol);
            }
            row.defined = true;
            row.raw = value;
            row.rounded = value;
            if (std::abs(value) <= tol.tol_prob) row.rounded = 0.0;
            if (std::abs(value - 1.0) <= tol.tol_prob) row.rounded = 1.0;
            row.binary = row.rounded == 0.0 || row.rounded == 1.0;
            if (!row.binary) table.all_binary = false;
        } catch (const PostselectionImpossible& e) {
            row.defined = false;
            row.error = e.what();
            table.all_defined = false;
            table.all_binary = false;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

VerdictReport run_verdict(const Scenario& s, int max_closure, const Tolerances& tol) {
    const auto start = std::chrono::steady_clock::now();
    VerdictReport report;
    report.validation = validate_scenario(s, tol);
    report.verdict = paradox_verdict(s, max_closure, tol);
    if (!report.validation.orthogonal) {
        report.weak_values_defined = true;
        for (const auto& g : s.generators)
            report.weak_values.emplace_back(g.label, weak_value(s.pre, g.projector.matrix, s.post, tol));
    }
    report.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return report;
}

int exit_code(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::LogicalParadox: return 10;
        case VerdictKind::AlgebraicViolationOnly: return 11;
        case VerdictKind::Consistent:
        case VerdictKind::NotBinaryConsistent: return 0;
    }
    return 2;
}

DecomposeReport decompose_report(const std::vector<Projector>& measurement,
                                 const Tolerances& tol) {
    const MixtureDecomposition mix = mixture_decomposition(measurement, tol);
    DecomposeReport report;
    report.outcome_count = static_cast<int>(measurement.size());
    report.q = mix.q;
    report.identity_weight = mix.identity_weight_check;
    report.reconstruction_residual = mix.reconstruction_residual;
    report.sign_strings = mix.sign_strings;
    return report;
}

namespace {

json witness_to_json(const InfeasibilityWitness& w) {
    json out;
    json steps = json::array();
    for (const auto& step : w.steps) {
        steps.push_back(json{{"text", step.text},
                             {"provenance", step.provenance},
                             {"equality_index", step.equality_index},
                             {"derived_var", step.derived_var},
                             {"value", step.value}});
    }
    out["steps"] = std::move(steps);
    json terms = json::array();
    for (const auto& term : w.farkas) {
        terms.push_back(json{{"multiplier", term.multiplier},
                             {"constraint", term.constraint},
                             {"equality_index", term.equality_index}});
    }
    out["farkas"] = std::move(terms);
    out["contradiction"] = w.contradiction;
    return out;
}

} // namespace

json to_json(const AblTable& table) {
    json out;
    json rows = json::array();
    for (const auto& row : table.rows) {
        json r;
        r["label"] = row.label;
        r["defined"] = row.defined;
        if (row.defined) {
            r["raw"] = row.raw;
            r["rounded"] = row.rounded;
            r["binary"] = row.binary;
        } else {
            r["error"] = row.error;
        }
        rows.push_back(std::move(r));
    }
    out["abl"] = std::move(rows);
    out["all_defined"] = table.all_defined;
    out["all_binary"] = table.all_binary;
    return out;
}

json to_json(const VerdictReport& report) {
    json out;
    out["verdict"] = to_string(report.verdict.kind);
    out["exit_code"] = exit_code(report.verdict.kind);
    json abl = json::array();
    for (const auto& e : report.verdict.abl.entries) {
        abl.push_back(json{{"label", e.label},
                           {"raw", e.raw},
                           {"rounded", e.rounded},
                           {"binary", e.binary}});
    }
    out["abl"] = std::move(abl);
    out["all_binary"] = report.verdict.abl.all_binary;
    out["closure_size"] = report.verdict.closure_size;
    out["constraint_count"] = report.verdict.constraint_count;
    out["overlap"] = report.validation.overlap;
    out["orthogonal"] = report.validation.orthogonal;
    if (report.verdict.witness) out["witness"] = witness_to_json(*report.verdict.witness);
    if (report.verdict.assignment) {
        json assignment = json::array();
        const auto& names = report.verdict.algebra.names;
        for (std::size_t i = 0; i < report.verdict.assignment->size(); ++i) {
            assignment.push_back(
                json{{"element", names[i]}, {"value", (*report.verdict.assignment)[i]}});
        }
        out["assignment"] = std::move(assignment);
    }
    if (report.weak_values_defined) {
        json weak = json::array();
        for (const auto& [label, value] : report.weak_values)
            weak.push_back(json{{"label", label}, {"value", value}});
        out["weak_values"] = std::move(weak);
    }
    out["algebra"] = algebra_to_json(report.verdict.algebra);
    out["timing_ms"] = report.elapsed_ms;
    return out;
}

json to_json(const DecomposeReport& report) {
    json out;
    out["outcome_count"] = report.outcome_count;
    out["q"] = report.q;
    out["identity_weight"] = report.identity_weight;
    out["reconstruction_residual"] = report.reconstruction_residual;
    out["sign_strings"] = report.sign_strings;
    return out;
}

json to_json(const ModelCheckReport& report) {
    json out;
    json checks = json::array();
    for (const auto& e : report.entries)
        checks.push_back(json{{"name", e.name}, {"pass", e.pass}, {"notes", e.notes}});
    out["checks"] = std::move(checks);
    if (report.classified) out["violated_assumptions"] = report.classification;
    out["all_pass"] = report.all_pass();
    return out;
}

std::string render_text(const AblTable& table) {
    std::ostringstream os;
    os << "generator            raw             rounded  binary\n";
    for (const auto& row : table.rows) {
        os << std::left << std::setw(20) << row.label << " ";
        if (row.defined) {
            os << std::left << std::setw(15) << format_probability(row.raw) << " "
               << std::setw(8) << format_probability(row.rounded) << " "
               << (row.binary ? "yes" : "no") << "\n";
        } else {
            os << "undefined: " << row.error << "\n";
        }
    }
    os << (table.all_binary ? "all values binary\n" : "not all values binary\n");
    return os.str();
}

std::string render_text(const VerdictReport& report) {
    std::ostringstream os;
    os << "verdict: " << to_string(report.verdict.kind) << "\n";
    os << "pre/post overlap |<phi|psi>|^2 = " << format_probability(report.validation.overlap)
       << (report.validation.orthogonal ? " (orthogonal)" : "") << "\n";
    os << "closure size: " << report.verdict.closure_size
       << ", constraints: " << report.verdict.constraint_count << "\n";
    os << "conditional probabilities:\n";
    for (const auto& e : report.verdict.abl.entries) {
        os << "  f(" << e.label << ") = " << format_probability(e.rounded);
        if (!e.binary) os << " (raw " << format_probability(e.raw) << ")";
        os << "\n";
    }
    if (report.verdict.witness) {
        os << "infeasibility witness:\n";
        for (const auto& step : report.verdict.witness->steps) os << "  " << step.text << "\n";
        for (const auto& term : report.verdict.witness->farkas) {
            os << "  multiplier " << format_probability(std::abs(term.multiplier)) << " x ["
               << term.constraint << "]\n";
        }
        os << "  contradiction: " << report.verdict.witness->contradiction << "\n";
    }
    if (report.verdict.assignment) {
        os << "satisfying extension:\n";
        const auto& names = report.verdict.algebra.names;
        for (std::size_t i = 0; i < report.verdict.assignment->size(); ++i) {
            os << "  f(" << names[i]
               << ") = " << format_probability((*report.verdict.assignment)[i]) << "\n";
        }
    }
    if (report.weak_values_defined) {
        os << "weak values:\n";
        for (const auto& [label, value] : report.weak_values)
            os << "  w(" << label << ") = " << format_probability(value) << "\n";
    }
    os << "elapsed: " << std::setprecision(3) << report.elapsed_ms << " ms\n";
    return os.str();
}

std::string render_text(const std::vector<WeakValueRow>& rows) {
    std::ostringstream os;
    for (const auto& row : rows)
        os << "w(" << row.label << ") = " << format_probability(row.value) << "\n";
    return os.str();
}

std::string render_text(const DecomposeReport& report) {
    std::ostringstream os;
    os << "outcomes: " << report.outcome_count << "\n";
    os << "q = " << format_probability(report.q) << "\n";
    os << "identity weight check = " << format_probability(report.identity_weight) << "\n";
    os << "non-identity sign strings: " << report.sign_strings.size() << "\n";
    for (const auto& signs : report.sign_strings) {
        os << "  (";
        for (std::size_t j = 0; j < signs.size(); ++j)
            os << (signs[j] > 0 ? "+1" : "-1") << (j + 1 < signs.size() ? "," : "");
        os << ")\n";
    }
    os << "reconstruction residual = " << std::setprecision(3)
       << report.reconstruction_residual << "\n";
    return os.str();
}

std::string render_text(const ModelCheckReport& report) {
    std::ostringstream os;
    for (const auto& e : report.entries) {
        os << (e.pass ? "[pass] " : "[FAIL] ") << e.name << "\n";
        for (const auto& note : e.notes) os << "        " << note << "\n";
    }
    if (report.classified) {
        if (report.classification.empty()) {
            os << "violated assumptions: none\n";
        } else {
            os << "violated assumptions:";
            for (const auto& a : report.classification) os << " " << a;
            os << "\n";
        }
    }
    return os.str();
}

} // namespace ppslab
