#ifndef PPSLAB_REPORT_HPP
#define PPSLAB_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ppslab/feasibility.hpp"
#include "ppslab/ontmodel.hpp"

namespace ppslab {

/// Formats a value with 12 significant digits; exact binary values print as
/// integers.
std::string format_probability(double value);

struct AblRow {
    std::string label;
    bool defined = false;
    double raw = 0.0;
    double rounded = 0.0;
    bool binary = false;
    std::string error; ///< set when undefined
};

struct AblTable {
    std::vector<AblRow> rows;
    bool all_defined = true;
    bool all_binary = true;
};

/// Per-generator conditional probabilities with undefined rows surfaced as
/// diagnostics instead of aborting the table.
AblTable abl_table(const Scenario& s, const Tolerances& tol = Tolerances::defaults());

struct VerdictReport {
    Verdict verdict;
    ScenarioValidation validation;
    std::vector<std::pair<std::string, double>> weak_values; ///< per generator
    bool weak_values_defined = false;
    double elapsed_ms = 0.0;
};

VerdictReport run_verdict(const Scenario& s, int max_closure = Limits{}.max_closure,
                          const Tolerances& tol = Tolerances::defaults());

/// Exit code contract: 0 consistent, 10 logical paradox, 11 algebraic
/// violation only.
int exit_code(VerdictKind kind);

struct WeakValueRow {
    std::string label;
    double value = 0.0;
};

struct DecomposeReport {
    int outcome_count = 0;
    double q = 1.0;
    double identity_weight = 1.0;
    double reconstruction_residual = 0.0;
    std::vector<std::vector<int>> sign_strings;
};

DecomposeReport decompose_report(const std::vector<Projector>& measurement,
                                 const Tolerances& tol = Tolerances::defaults());

struct ModelCheckReport {
    struct Entry {
        std::string name;
        bool pass = true;
        std::vector<std::string> notes;
    };
    std::vector<Entry> entries;
    std::vector<std::string> classification; ///< violated assumptions
    bool classified = false;
    bool all_pass() const {
        for (const auto& e : entries)
            if (!e.pass) return false;
        return true;
    }
};

nlohmann::json to_json(const AblTable& table);
nlohmann::json to_json(const VerdictReport& report);
nlohmann::json to_json(const DecomposeReport& report);
nlohmann::json to_json(const ModelCheckReport& report);

std::string render_text(const AblTable& table);
std::string render_text(const VerdictReport& report);
std::string render_text(const std::vector<WeakValueRow>& rows);
std::string render_text(const DecomposeReport& report);
std::string render_text(const ModelCheckReport& report);

} // namespace ppslab

#endif // PPSLAB_REPORT_HPP
