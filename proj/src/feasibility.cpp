#include "ppslab/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace ppslab {

namespace {

std::string fmt(double v) {
    // Exact small integers print bare; everything else with full precision.
    const double r = std::round(v);
    if (std::abs(v - r) < 1e-12 && std::abs(r) < 1e6) {
        std::ostringstream os;
        os << static_cast<long long>(r);
        return os.str();
    }
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

/// Cancelled form of an equality: var -> coefficient, zero entries dropped.
std::map<int, double> cancelled(const LinearEquality& eq) {
    std::map<int, double> terms;
    for (std::size_t k = 0; k < eq.vars.size(); ++k) terms[eq.vars[k]] += eq.coeffs[k];
    for (auto it = terms.begin(); it != terms.end();) {
        it = std::abs(it->second) < 1e-12 ? terms.erase(it) : std::next(it);
    }
    return terms;
}

std::string signature(const std::map<int, double>& terms, double rhs) {
    std::ostringstream os;
    for (const auto& [v, c] : terms) os << v << ":" << fmt(c) << ";";
    os << "=" << fmt(rhs);
    return os.str();
}

/// Display name of P + Q - PQ used in derivations; collapses to "P+Q" when
/// the product is the zero element.
std::string join_name(const ConstraintSystem& cs, const LinearEquality& eq,
                      int zero_index) {
    const std::string& a = cs.names[eq.pair_i];
    const std::string& b = cs.names[eq.pair_j];
    if (eq.product_index == zero_index) return a + "+" + b;
    return a + "+" + b + "-" + a + "*" + b;
}

} // namespace

std::string LinearEquality::provenance(const std::vector<std::string>& names) const {
    std::ostringstream os;
    switch (kind) {
        case ConstraintKind::Anchor:
            os << "condition (ii): f(" << names[vars.front()] << ") = " << fmt(rhs);
            break;
        case ConstraintKind::Fixed:
            os << "fixed conditional probability f(" << names[vars.front()]
               << ") = " << fmt(rhs);
            break;
        case ConstraintKind::Additivity:
            os << "condition (iii) on (" << names[pair_i] << ", " << names[pair_j] << ")";
            break;
        case ConstraintKind::Bound:
            os << "condition (i) bound";
            break;
    }
    return os.str();
}

ConstraintSystem build_constraints(const ProjectorAlgebra& alg,
                                   const std::map<int, double>& fixed) {
    ConstraintSystem cs;
    cs.variable_count = alg.size();
    cs.names = alg.names;
    cs.bounds.assign(alg.size(), {0.0, 1.0});

    // condition (ii)
    for (const auto& [index, value] :
         {std::pair<int, double>{alg.zero_index, 0.0}, {alg.identity_index, 1.0}}) {
        LinearEquality eq;
        eq.kind = ConstraintKind::Anchor;
        eq.vars = {index};
        eq.coeffs = {1.0};
        eq.rhs = value;
        cs.equalities.push_back(std::move(eq));
    }

    // fixed generator values
    for (const auto& [index, value] : fixed) {
        if (std::find(alg.generator_indices.begin(), alg.generator_indices.end(), index) ==
            alg.generator_indices.end())
            throw InvalidScenario("fixed values may only sit on generator indices");
        if (value < 0.0 || value > 1.0)
            throw InvalidScenario("fixed values must lie in [0, 1]");
        LinearEquality eq;
        eq.kind = ConstraintKind::Fixed;
        eq.vars = {index};
        eq.coeffs = {1.0};
        eq.rhs = value;
        cs.equalities.push_back(std::move(eq));
        cs.fixed[index] = value;
    }

    // condition (iii): f(P + Q - PQ) - f(P) - f(Q) + f(PQ) = 0 per commuting pair
    std::set<std::string> seen;
    for (const auto& [i, j] : alg.commuting_pairs) {
        LinearEquality eq;
        eq.kind = ConstraintKind::Additivity;
        eq.pair_i = i;
        eq.pair_j = j;
        eq.product_index = alg.product_index(i, j);
        eq.join_index = alg.join_index(i, j);
        eq.vars = {eq.join_index, i, j, eq.product_index};
        eq.coeffs = {1.0, -1.0, -1.0, 1.0};
        eq.rhs = 0.0;
        const auto terms = cancelled(eq);
        eq.trivial = terms.empty();
        if (!eq.trivial) {
            const std::string sig = signature(terms, eq.rhs);
            if (!seen.insert(sig).second) continue; // duplicate relation
        }
        cs.equalities.push_back(std::move(eq));
    }
    return cs;
}

// ---------------------------------------------------------------------------
// Propagation with derivation chains
// ---------------------------------------------------------------------------

namespace {

struct PropStep {
    int eq_index;
    int derived_var;
    double value;
    std::vector<int> input_vars;
};

struct Propagation {
    enum class Outcome { Exhausted, Contradiction, Indeterminate };
    Outcome outcome = Outcome::Exhausted;
    std::map<int, double> known;
    std::map<int, int> origin; // var -> index in trail
    std::vector<PropStep> trail;
    // contradiction data
    std::string contradiction_text;
    std::vector<int> contradiction_inputs;
    int violated_equality = -1;
    int violated_bound_var = -1;
};

std::string describe_step(const ConstraintSystem& cs, const Propagation& prop,
                          const PropStep& step, int zero_index) {
    const LinearEquality& eq = cs.equalities[step.eq_index];
    std::ostringstream os;
    if (eq.kind == ConstraintKind::Anchor || eq.kind == ConstraintKind::Fixed) {
        os << "f(" << cs.names[step.derived_var] << ") = " << fmt(step.value) << " ["
           << eq.provenance(cs.names) << "]";
        return os.str();
    }
    const std::string derived_name = step.derived_var == eq.join_index
                                         ? join_name(cs, eq, zero_index)
                                         : cs.names[step.derived_var];
    os << "f(" << derived_name << ") = " << fmt(step.value) << " [" << eq.provenance(cs.names);
    if (!step.input_vars.empty()) {
        os << ", using";
        bool first = true;
        for (int v : step.input_vars) {
            os << (first ? " " : ", ") << "f(" << cs.names[v] << ") = "
               << fmt(prop.known.at(v));
            first = false;
        }
    }
    os << "]";
    return os.str();
}

Propagation propagate(const ConstraintSystem& cs, const Tolerances& tol) {
    Propagation prop;
    const double ok_margin = tol.tol_prob;
    const double bad_margin = 10.0 * tol.tol_prob;

    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < cs.equalities.size(); ++e) {
            const LinearEquality& eq = cs.equalities[e];
            if (eq.trivial) continue;
            const auto terms = cancelled(eq);

            double known_sum = 0.0;
            std::vector<int> inputs;
            int unknown_var = -1;
            double unknown_coeff = 0.0;
            int unknowns = 0;
            for (const auto& [v, c] : terms) {
                const auto it = prop.known.find(v);
                if (it == prop.known.end()) {
                    ++unknowns;
                    unknown_var = v;
                    unknown_coeff = c;
                } else {
                    known_sum += c * it->second;
                    inputs.push_back(v);
                }
            }

            if (unknowns == 0) {
                const double residual = std::abs(known_sum - eq.rhs);
                if (residual <= ok_margin) continue;
                prop.contradiction_inputs = inputs;
                if (residual < bad_margin) {
                    prop.outcome = Propagation::Outcome::Indeterminate;
                    std::ostringstream os;
                    os << "residual " << residual << " of " << eq.provenance(cs.names)
                       << " falls between tolerance and 10x tolerance";
                    prop.contradiction_text = os.str();
                    return prop;
                }
                prop.outcome = Propagation::Outcome::Contradiction;
                prop.violated_equality = static_cast<int>(e);
                std::ostringstream os;
                os << eq.provenance(cs.names) << " is violated: ";
                bool first = true;
                for (int v : inputs) {
                    os << (first ? "" : " + ") << fmt(terms.at(v)) << "*"
                       << fmt(prop.known.at(v));
                    first = false;
                }
                os << " = " << fmt(known_sum) << " but the constraint requires " << fmt(eq.rhs);
                prop.contradiction_text = os.str();
                return prop;
            }

            if (unknowns == 1) {
                const double value = (eq.rhs - known_sum) / unknown_coeff;
                PropStep step{static_cast<int>(e), unknown_var, value, inputs};
                prop.trail.push_back(step);
                prop.known[unknown_var] = value;
                prop.origin[unknown_var] = static_cast<int>(prop.trail.size()) - 1;
                changed = true;

                const auto [lo, hi] = cs.bounds[unknown_var];
                const double low_violation = lo - value;
                const double high_violation = value - hi;
                const double violation = std::max(low_violation, high_violation);
                if (violation > ok_margin) {
                    prop.contradiction_inputs = {unknown_var};
                    if (violation < bad_margin) {
                        prop.outcome = Propagation::Outcome::Indeterminate;
                        std::ostringstream os;
                        os << "bound violation " << violation << " on f("
                           << cs.names[unknown_var]
                           << ") falls between tolerance and 10x tolerance";
                        prop.contradiction_text = os.str();
                        return prop;
                    }
                    prop.outcome = Propagation::Outcome::Contradiction;
                    prop.violated_bound_var = unknown_var;
                    const LinearEquality& src = cs.equalities[step.eq_index];
                    const std::string name =
                        src.kind == ConstraintKind::Additivity && unknown_var == src.join_index
                            ? join_name(cs, src, /*zero_index=*/0)
                            : cs.names[unknown_var];
                    std::ostringstream os;
                    os << "f(" << name << ") = " << fmt(value)
                       << " violates condition (i): 0 <= f <= 1";
                    prop.contradiction_text = os.str();
                    return prop;
                }
            }
        }
    }
    return prop;
}

InfeasibilityWitness chain_witness(const ConstraintSystem& cs, const Propagation& prop) {
    // Collect the steps feeding the contradiction, in derivation order.
    std::set<int> needed;
    std::vector<int> stack = prop.contradiction_inputs;
    while (!stack.empty()) {
        const int var = stack.back();
        stack.pop_back();
        const auto it = prop.origin.find(var);
        if (it == prop.origin.end()) continue;
        if (!needed.insert(it->second).second) continue;
        for (int input : prop.trail[it->second].input_vars) stack.push_back(input);
    }
    InfeasibilityWitness w;
    for (int index : std::vector<int>(needed.begin(), needed.end())) {
        const PropStep& step = prop.trail[index];
        WitnessStep ws;
        ws.text = describe_step(cs, prop, step, /*zero_index=*/0);
        ws.provenance = cs.equalities[step.eq_index].provenance(cs.names);
        ws.equality_index = step.eq_index;
        ws.derived_var = step.derived_var;
        ws.value = step.value;
        w.steps.push_back(std::move(ws));
    }
    w.contradiction = prop.contradiction_text;
    w.violated_equality = prop.violated_equality;
    w.violated_bound_var = prop.violated_bound_var;
    return w;
}

// ---------------------------------------------------------------------------
// Phase-1 simplex on the full system (variables f_i plus upper-bound slacks)
// ---------------------------------------------------------------------------

struct LpRow {
    std::map<int, double> coeffs; // column -> coefficient
    double rhs;
    int equality_index; // -1 for an upper-bound row
    int bound_var;      // variable of the bound row, else -1
};

std::vector<LpRow> lp_rows(const ConstraintSystem& cs) {
    std::vector<LpRow> rows;
    const int n = cs.variable_count;
    for (std::size_t e = 0; e < cs.equalities.size(); ++e) {
        const LinearEquality& eq = cs.equalities[e];
        if (eq.trivial) continue;
        LpRow row;
        for (const auto& [v, c] : cancelled(eq)) row.coeffs[v] = c;
        if (row.coeffs.empty()) continue;
        row.rhs = eq.rhs;
        row.equality_index = static_cast<int>(e);
        row.bound_var = -1;
        rows.push_back(std::move(row));
    }
    for (int i = 0; i < n; ++i) {
        LpRow row;
        row.coeffs[i] = 1.0;
        row.coeffs[n + i] = 1.0; // slack column
        row.rhs = cs.bounds[i].second;
        row.equality_index = -1;
        row.bound_var = i;
        rows.push_back(std::move(row));
    }
    return rows;
}

struct Phase1Result {
    double objective = 0.0;
    std::vector<double> x; // size = structural columns
    std::vector<double> y; // multiplier per row, original orientation
};

Phase1Result phase1_simplex(const std::vector<LpRow>& rows, int columns) {
    const int m = static_cast<int>(rows.size());
    const int total = columns + m; // structural + artificial
    const double eps = 1e-9;

    std::vector<std::vector<double>> t(m + 1, std::vector<double>(total + 1, 0.0));
    std::vector<double> sign(m, 1.0);
    for (int r = 0; r < m; ++r) {
        sign[r] = rows[r].rhs < 0.0 ? -1.0 : 1.0;
        for (const auto& [c, v] : rows[r].coeffs) t[r][c] = sign[r] * v;
        t[r][columns + r] = 1.0;
        t[r][total] = sign[r] * rows[r].rhs;
    }
    // Reduced-cost row for min(sum of artificials) with artificial basis.
    for (int c = 0; c <= total; ++c) {
        double s = 0.0;
        for (int r = 0; r < m; ++r) s += t[r][c];
        t[m][c] = (c >= columns && c < total ? 1.0 : 0.0) - s;
    }

    std::vector<int> basis(m);
    for (int r = 0; r < m; ++r) basis[r] = columns + r;

    while (true) {
        int enter = -1;
        for (int c = 0; c < total; ++c) {
            if (t[m][c] < -eps) { enter = c; break; } // Bland's rule
        }
        if (enter < 0) break;
        int leave = -1;
        double best = 0.0;
        for (int r = 0; r < m; ++r) {
            if (t[r][enter] <= eps) continue;
            const double ratio = t[r][total] / t[r][enter];
            if (leave < 0 || ratio < best - eps ||
                (ratio < best + eps && basis[r] < basis[leave])) {
                leave = r;
                best = ratio;
            }
        }
        if (leave < 0) break; // unbounded cannot happen in phase 1
        const double pivot = t[leave][enter];
        for (int c = 0; c <= total; ++c) t[leave][c] /= pivot;
        for (int r = 0; r <= m; ++r) {
            if (r == leave) continue;
            const double factor = t[r][enter];
            if (std::abs(factor) < 1e-14) continue;
            for (int c = 0; c <= total; ++c) t[r][c] -= factor * t[leave][c];
        }
        basis[leave] = enter;
    }

    Phase1Result res;
    res.objective = -t[m][total];
    res.x.assign(columns, 0.0);
    for (int r = 0; r < m; ++r) {
        if (basis[r] < columns) res.x[basis[r]] = t[r][total];
    }
    res.y.assign(m, 0.0);
    for (int r = 0; r < m; ++r) {
        const double y_flipped = 1.0 - t[m][columns + r];
        res.y[r] = sign[r] * y_flipped;
    }
    return res;
}

InfeasibilityWitness farkas_witness(const ConstraintSystem& cs,
                                    const std::vector<LpRow>& rows,
                                    const std::vector<double>& y) {
    InfeasibilityWitness w;
    double combined_rhs = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (std::abs(y[r]) < 1e-9) continue;
        FarkasTerm term;
        term.multiplier = y[r];
        term.equality_index = rows[r].equality_index;
        if (rows[r].equality_index >= 0) {
            term.constraint = cs.equalities[rows[r].equality_index].provenance(cs.names);
        } else {
            term.constraint = "condition (i): f(" + cs.names[rows[r].bound_var] + ") <= " +
                              fmt(cs.bounds[rows[r].bound_var].second);
        }
        combined_rhs += y[r] * rows[r].rhs;
        w.farkas.push_back(std::move(term));
    }
    std::ostringstream os;
    os << "the weighted combination of the listed constraints has nonpositive coefficients "
          "on every nonnegative variable yet right-hand side "
       << fmt(combined_rhs) << " > 0";
    w.contradiction = os.str();
    return w;
}

} // namespace

FeasibilityResult check_extension(const ConstraintSystem& cs, const Tolerances& tol) {
    validate_tolerances(tol);
    Propagation prop = propagate(cs, tol);
    if (prop.outcome == Propagation::Outcome::Indeterminate)
        throw NumericallyIndeterminate(prop.contradiction_text);
    if (prop.outcome == Propagation::Outcome::Contradiction) {
        FeasibilityResult res;
        res.feasible = false;
        res.witness = chain_witness(cs, prop);
        return res;
    }

    if (static_cast<int>(prop.known.size()) == cs.variable_count) {
        // Everything determined and every equality verified by propagation.
        FeasibilityResult res;
        res.feasible = true;
        std::vector<double> assignment(cs.variable_count, 0.0);
        for (const auto& [v, value] : prop.known)
            assignment[v] = std::clamp(value, 0.0, 1.0);
        res.assignment = std::move(assignment);
        return res;
    }

    const auto rows = lp_rows(cs);
    const int columns = 2 * cs.variable_count; // f_i plus upper-bound slacks
    const Phase1Result lp = phase1_simplex(rows, columns);

    if (lp.objective <= tol.tol_prob) {
        FeasibilityResult res;
        res.feasible = true;
        std::vector<double> assignment(cs.variable_count, 0.0);
        for (int i = 0; i < cs.variable_count; ++i)
            assignment[i] = std::clamp(lp.x[i], 0.0, 1.0);
        res.assignment = std::move(assignment);
        return res;
    }
    if (lp.objective < 10.0 * tol.tol_prob) {
        std::ostringstream os;
        os << "phase-1 objective " << lp.objective
           << " falls between tolerance and 10x tolerance";
        throw NumericallyIndeterminate(os.str());
    }
    FeasibilityResult res;
    res.feasible = false;
    res.witness = farkas_witness(cs, rows, lp.y);
    return res;
}

bool brute_force_feasibility(const ConstraintSystem& cs, int grid, const Tolerances& tol) {
    const int n = cs.variable_count;
    if (n > 12) throw TooLarge("brute force supports at most 12 variables");
    if (grid < 1) throw InvalidScenario("grid must be positive");

    bool binary_fixes = true;
    for (const auto& [v, value] : cs.fixed) {
        if (std::abs(value) > tol.tol_prob && std::abs(value - 1.0) > tol.tol_prob)
            binary_fixes = false;
    }

    std::vector<std::vector<double>> domain(n);
    for (int i = 0; i < n; ++i) {
        const auto it = cs.fixed.find(i);
        if (it != cs.fixed.end()) {
            domain[i] = {it->second};
        } else if (binary_fixes) {
            domain[i] = {0.0, 1.0};
        } else {
            for (int k = 0; k <= grid; ++k)
                domain[i].push_back(static_cast<double>(k) / grid);
        }
    }

    // Bucket equalities by their highest variable so partial assignments prune.
    struct Form {
        std::map<int, double> terms;
        double rhs;
    };
    std::vector<std::vector<Form>> bucket(n);
    for (const auto& eq : cs.equalities) {
        if (eq.trivial) continue;
        auto terms = cancelled(eq);
        if (terms.empty()) continue;
        const int top = terms.rbegin()->first;
        bucket[top].push_back(Form{std::move(terms), eq.rhs});
    }

    std::vector<double> assignment(n, 0.0);
    const double slack = 10.0 * tol.tol_prob;

    std::function<bool(int)> dfs = [&](int depth) -> bool {
        if (depth == n) return true;
        for (double candidate : domain[depth]) {
            assignment[depth] = candidate;
            bool ok = true;
            for (const Form& form : bucket[depth]) {
                double sum = 0.0;
                for (const auto& [v, c] : form.terms) sum += c * assignment[v];
                if (std::abs(sum - form.rhs) > slack) {
                    ok = false;
                    break;
                }
            }
            if (ok && dfs(depth + 1)) return true;
        }
        return false;
    };
    return dfs(0);
}

bool replay_witness(const ConstraintSystem& cs, const InfeasibilityWitness& witness,
                    const Tolerances& tol) {
    if (!witness.farkas.empty()) {
        // Rebuild the row list and verify y^T A <= 0 on every column while
        // y^T b > 0.
        const auto rows = lp_rows(cs);
        std::map<int, double> y_by_equality;
        std::map<std::string, double> y_by_bound;
        for (const auto& term : witness.farkas) {
            if (term.equality_index >= 0)
                y_by_equality[term.equality_index] += term.multiplier;
            else
                y_by_bound[term.constraint] += term.multiplier;
        }
        std::vector<double> column_sum(2 * cs.variable_count, 0.0);
        double rhs = 0.0;
        for (const auto& row : rows) {
            double y = 0.0;
            if (row.equality_index >= 0) {
                const auto it = y_by_equality.find(row.equality_index);
                if (it != y_by_equality.end()) y = it->second;
            } else {
                const std::string key = "condition (i): f(" + cs.names[row.bound_var] +
                                        ") <= " + fmt(cs.bounds[row.bound_var].second);
                const auto it = y_by_bound.find(key);
                if (it != y_by_bound.end()) y = it->second;
            }
            if (y == 0.0) continue;
            for (const auto& [c, v] : row.coeffs) column_sum[c] += y * v;
            rhs += y * row.rhs;
        }
        for (double u : column_sum) {
            if (u > 1e-6) return false;
        }
        return rhs > tol.tol_prob;
    }

    // Derivation chain: re-derive every step from its named equality and the
    // previously derived values, then confirm the recorded contradiction.
    std::map<int, double> values;
    for (const auto& step : witness.steps) {
        if (step.equality_index < 0 ||
            step.equality_index >= static_cast<int>(cs.equalities.size()))
            return false;
        const LinearEquality& eq = cs.equalities[static_cast<std::size_t>(step.equality_index)];
        const auto terms = cancelled(eq);
        const auto target = terms.find(step.derived_var);
        if (target == terms.end()) return false;
        double known = 0.0;
        for (const auto& [v, c] : terms) {
            if (v == step.derived_var) continue;
            const auto it = values.find(v);
            if (it == values.end()) return false;
            known += c * it->second;
        }
        const double derived = (eq.rhs - known) / target->second;
        if (std::abs(derived - step.value) > tol.tol_prob) return false;
        values[step.derived_var] = derived;
    }
    if (witness.violated_bound_var >= 0) {
        const auto it = values.find(witness.violated_bound_var);
        if (it == values.end()) return false;
        const auto [lo, hi] = cs.bounds[static_cast<std::size_t>(witness.violated_bound_var)];
        return it->second < lo - tol.tol_prob || it->second > hi + tol.tol_prob;
    }
    if (witness.violated_equality >= 0 &&
        witness.violated_equality < static_cast<int>(cs.equalities.size())) {
        const LinearEquality& eq =
            cs.equalities[static_cast<std::size_t>(witness.violated_equality)];
        double sum = 0.0;
        for (const auto& [v, c] : cancelled(eq)) {
            const auto it = values.find(v);
            if (it == values.end()) return false;
            sum += c * it->second;
        }
        return std::abs(sum - eq.rhs) > tol.tol_prob;
    }
    return false;
}

std::string to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::LogicalParadox: return "LogicalParadox";
        case VerdictKind::AlgebraicViolationOnly: return "AlgebraicViolationOnly";
        case VerdictKind::Consistent: return "Consistent";
        case VerdictKind::NotBinaryConsistent: return "NotBinaryConsistent";
    }
    return "?";
}

Verdict paradox_verdict(const Scenario& s, int max_closure, const Tolerances& tol) {
    const ScenarioValidation validation = validate_scenario(s, tol);
    if (!validation.ok()) {
        std::string detail = "scenario is not well-formed:";
        for (const auto& m : validation.missing_complements)
            detail += " missing complement of '" + m + "';";
        for (const auto& c : validation.context_issues) detail += " " + c + ";";
        if (!validation.dims_consistent) detail += " inconsistent dimensions;";
        throw InvalidScenario(detail);
    }

    Verdict verdict;
    verdict.abl = abl_assignment(s, tol);

    std::vector<Projector> generators;
    std::vector<std::string> labels;
    for (const auto& g : s.generators) {
        generators.push_back(g.projector);
        labels.push_back(g.label);
    }
    ProjectorAlgebra alg = close(generators, max_closure, tol, labels);
    verdict.closure_size = alg.size();

    std::map<int, double> fixed;
    for (std::size_t g = 0; g < s.generators.size(); ++g) {
        const int index = alg.generator_indices[g];
        const AblEntry& entry = verdict.abl.entries[g];
        const double value = entry.binary ? entry.rounded : entry.raw;
        const auto it = fixed.find(index);
        if (it != fixed.end() && std::abs(it->second - value) > tol.tol_prob)
            throw InvalidScenario("generators '" + s.generators[g].label +
                                  "' duplicate an element with a conflicting value");
        fixed[index] = value;
    }

    const ConstraintSystem cs = build_constraints(alg, fixed);
    verdict.constraint_count = static_cast<int>(cs.equalities.size());

    const FeasibilityResult feas = check_extension(cs, tol);
    if (feas.feasible) {
        verdict.kind = verdict.abl.all_binary ? VerdictKind::Consistent
                                              : VerdictKind::NotBinaryConsistent;
        verdict.assignment = feas.assignment;
    } else {
        verdict.kind = verdict.abl.all_binary ? VerdictKind::LogicalParadox
                                              : VerdictKind::AlgebraicViolationOnly;
        verdict.witness = feas.witness;
    }
    verdict.algebra = std::move(alg);
    return verdict;
}

} // namespace ppslab
