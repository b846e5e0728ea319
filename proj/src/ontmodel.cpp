#include "ppslab/ontmodel.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace ppslab {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

template <typename Map>
const typename Map::mapped_type& lookup(const Map& map, const std::string& label,
                                        const char* what) {
    const auto it = map.find(label);
    if (it == map.end()) throw UnknownLabel(std::string(what) + " '" + label + "' is not registered");
    return it->second;
}

} // namespace

Index FiniteOntModel::dim() const {
    if (!state_registry.empty()) return state_registry.begin()->second.dim();
    if (!effect_registry.empty()) return effect_registry.begin()->second.rows();
    return 0;
}

const RealVector& FiniteOntModel::preparation(const std::string& label) const {
    return lookup(preparations, label, "preparation");
}

const RealVector& FiniteOntModel::response(const std::string& label) const {
    return lookup(responses, label, "effect");
}

const ComplexMatrix& FiniteOntModel::effect_operator(const std::string& label) const {
    return lookup(effect_registry, label, "effect");
}

std::optional<std::string> FiniteOntModel::find_effect_label(const ComplexMatrix& op,
                                                             const Tolerances& tol) const {
    for (const auto& [label, bound] : effect_registry) {
        if (bound.rows() == op.rows() && bound.cols() == op.cols() &&
            max_abs((bound - op).eval()) <= tol.tol_op)
            return label;
    }
    return std::nullopt;
}

void validate_model(const FiniteOntModel& model, const Tolerances& tol) {
    const Index m = model.lambda_count();
    if (m == 0) throw InvalidScenario("model has no ontic states");

    for (const auto& [label, mu] : model.preparations) {
        if (mu.size() != m) throw DimensionMismatch("distribution size for '" + label + "'");
        if (mu.minCoeff() < -tol.tol_prob)
            throw InvalidScenario("distribution for '" + label + "' has negative weight");
        if (std::abs(mu.sum() - 1.0) > tol.tol_prob)
            throw InvalidScenario("distribution for '" + label + "' does not sum to 1");
        if (model.state_registry.count(label) == 0)
            throw UnknownLabel("preparation '" + label + "' lacks a state binding");
    }
    for (const auto& [label, resp] : model.responses) {
        if (resp.size() != m) throw DimensionMismatch("response size for '" + label + "'");
        if (resp.minCoeff() < -tol.tol_prob || resp.maxCoeff() > 1.0 + tol.tol_prob)
            throw InvalidScenario("response for '" + label + "' leaves [0, 1]");
        if (model.effect_registry.count(label) == 0)
            throw UnknownLabel("response '" + label + "' lacks an operator binding");
    }
    for (const auto& [name, labels] : model.povms) {
        RealVector total = RealVector::Zero(m);
        ComplexMatrix op_total;
        for (const auto& label : labels) {
            total += model.response(label);
            const ComplexMatrix& op = model.effect_operator(label);
            if (op_total.size() == 0)
                op_total = op;
            else
                op_total += op;
        }
        for (Index l = 0; l < m; ++l) {
            if (std::abs(total(l) - 1.0) > tol.tol_prob)
                throw InvalidScenario("POVM '" + name + "' responses do not sum to 1 at ontic state " +
                                      model.ontic_states[l]);
        }
        if (op_total.size() != 0 &&
            max_abs((op_total - identity(op_total.rows())).eval()) > tol.tol_op)
            throw OperatorMismatch("POVM '" + name + "' operators do not sum to the identity");
    }
    for (const auto& [name, branches] : model.instruments) {
        RealVector total = RealVector::Zero(m);
        for (const auto& branch : branches) {
            if (branch.kernel.rows() != m || branch.kernel.cols() != m)
                throw DimensionMismatch("kernel size in instrument '" + name + "'");
            if (branch.kernel.minCoeff() < -tol.tol_prob)
                throw InvalidScenario("negative kernel entry in instrument '" + name + "'");
            const RealVector marginal = branch.kernel.colwise().sum().transpose();
            total += marginal;
            const RealVector& resp = model.response(branch.effect_label);
            for (Index l = 0; l < m; ++l) {
                if (std::abs(marginal(l) - resp(l)) > tol.tol_prob)
                    throw InvalidScenario("kernel marginal of branch '" + branch.label +
                                          "' in instrument '" + name +
                                          "' differs from the response of '" +
                                          branch.effect_label + "'");
            }
        }
        for (Index l = 0; l < m; ++l) {
            if (std::abs(total(l) - 1.0) > tol.tol_prob)
                throw NotTracePreservingTotal("instrument '" + name +
                                              "' kernels do not sum to 1 at ontic state " +
                                              model.ontic_states[l]);
        }
    }
}

CheckReport reproduces_born(const FiniteOntModel& model,
                            const std::vector<std::pair<std::string, std::string>>& pairs,
                            const Tolerances& tol) {
    CheckReport report;
    for (const auto& [state_label, effect_label] : pairs) {
        const RealVector& mu = model.preparation(state_label);
        const RealVector& resp = model.response(effect_label);
        const PureState& psi = lookup(model.state_registry, state_label, "state");
        const ComplexMatrix& op = model.effect_operator(effect_label);
        const double model_value = resp.dot(mu);
        const double quantum_value = born(psi, op, tol);
        if (std::abs(model_value - quantum_value) > tol.tol_prob) {
            report.fail("(" + state_label + ", " + effect_label + "): model " +
                        fmt(model_value) + " vs quantum " + fmt(quantum_value));
        }
    }
    return report;
}

CheckReport check_coarse_graining(const FiniteOntModel& model,
                                  const FiniteOntModel::CoarseGraining& decl,
                                  const Tolerances& tol) {
    const auto& fine = lookup(model.povms, decl.fine, "POVM");
    const auto& coarse = lookup(model.povms, decl.coarse, "POVM");
    if (decl.grouping.size() != coarse.size())
        throw OperatorMismatch("grouping size differs from the coarse POVM");

    std::vector<int> used(fine.size(), 0);
    for (std::size_t j = 0; j < decl.grouping.size(); ++j) {
        ComplexMatrix op_sum;
        for (int k : decl.grouping[j]) {
            if (k < 0 || k >= static_cast<int>(fine.size()))
                throw OperatorMismatch("grouping index out of range");
            ++used[static_cast<std::size_t>(k)];
            const ComplexMatrix& op = model.effect_operator(fine[static_cast<std::size_t>(k)]);
            if (op_sum.size() == 0)
                op_sum = op;
            else
                op_sum += op;
        }
        const ComplexMatrix& coarse_op = model.effect_operator(coarse[j]);
        if (op_sum.size() == 0 || max_abs((op_sum - coarse_op).eval()) > tol.tol_op)
            throw OperatorMismatch("grouped fine effects do not sum to coarse effect '" +
                                   coarse[j] + "'");
    }
    for (std::size_t k = 0; k < used.size(); ++k) {
        if (used[k] != 1) throw OperatorMismatch("grouping is not a partition of the fine POVM");
    }

    CheckReport report;
    const Index m = model.lambda_count();
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        RealVector sum = RealVector::Zero(m);
        for (int k : decl.grouping[j]) sum += model.response(fine[static_cast<std::size_t>(k)]);
        const RealVector& coarse_resp = model.response(coarse[j]);
        for (Index l = 0; l < m; ++l) {
            if (std::abs(sum(l) - coarse_resp(l)) > tol.tol_prob) {
                report.fail("coarse outcome '" + coarse[j] + "' at ontic state " +
                            model.ontic_states[l] + ": " + fmt(sum(l)) + " vs " +
                            fmt(coarse_resp(l)));
            }
        }
    }
    return report;
}

CheckReport check_mixing(const FiniteOntModel& model,
                         const FiniteOntModel::MixtureDeclaration& decl,
                         const Tolerances& tol) {
    const auto& left = lookup(model.povms, decl.left, "POVM");
    const auto& right = lookup(model.povms, decl.right, "POVM");
    const auto& mixed = lookup(model.povms, decl.mixed, "POVM");
    if (left.size() != right.size() || left.size() != mixed.size())
        throw OperatorMismatch("mixture POVMs have different outcome counts");
    if (decl.weight < 0.0 || decl.weight > 1.0)
        throw InvalidScenario("mixture weight must lie in [0, 1]");

    for (std::size_t j = 0; j < mixed.size(); ++j) {
        const ComplexMatrix expected = decl.weight * model.effect_operator(left[j]) +
                                       (1.0 - decl.weight) * model.effect_operator(right[j]);
        if (max_abs((expected - model.effect_operator(mixed[j])).eval()) > tol.tol_op)
            throw OperatorMismatch("mixed effect '" + mixed[j] +
                                   "' is not the declared operator mixture");
    }

    CheckReport report;
    const Index m = model.lambda_count();
    for (std::size_t j = 0; j < mixed.size(); ++j) {
        const RealVector expected = decl.weight * model.response(left[j]) +
                                    (1.0 - decl.weight) * model.response(right[j]);
        const RealVector& actual = model.response(mixed[j]);
        for (Index l = 0; l < m; ++l) {
            if (std::abs(expected(l) - actual(l)) > tol.tol_prob) {
                report.fail("mixed outcome '" + mixed[j] + "' at ontic state " +
                            model.ontic_states[l] + ": " + fmt(actual(l)) + " vs " +
                            fmt(expected(l)));
            }
        }
    }
    return report;
}

CheckReport check_outcome_determinism(const FiniteOntModel& model,
                                      const std::vector<std::string>& effect_labels,
                                      const Tolerances& tol) {
    CheckReport report;
    for (const auto& label : effect_labels) {
        const ComplexMatrix& op = model.effect_operator(label);
        bool projective = true;
        try {
            validate_projector(op, tol);
        } catch (const Error&) {
            projective = false;
        }
        if (!projective) {
            report.failures.push_back("skipped '" + label + "': not bound to a projector");
            continue;
        }
        const RealVector& resp = model.response(label);
        for (Index l = 0; l < model.lambda_count(); ++l) {
            const double v = resp(l);
            if (std::abs(v) > tol.tol_prob && std::abs(v - 1.0) > tol.tol_prob) {
                report.fail("'" + label + "' responds " + fmt(v) + " at ontic state " +
                            model.ontic_states[l]);
            }
        }
    }
    return report;
}

CheckReport check_possibilistic_disturbance(const FiniteOntModel& model,
                                            const std::string& instrument_label,
                                            const std::string& effect_label,
                                            const Tolerances& tol) {
    const auto& branches = lookup(model.instruments, instrument_label, "instrument");
    const RealVector& resp = model.response(effect_label);
    const Index m = model.lambda_count();

    CheckReport report;
    for (Index l = 0; l < m; ++l) {
        if (resp(l) <= tol.tol_prob) continue;
        double after = 0.0;
        for (const auto& branch : branches) after += resp.dot(branch.kernel.col(l));
        if (after <= tol.tol_prob) {
            report.fail("ontic state " + model.ontic_states[l] + " makes '" + effect_label +
                        "' possible, but after '" + instrument_label + "' it never is");
        }
    }
    return report;
}

std::map<std::string, double> replay_instrument_conditional(const FiniteOntModel& model,
                                                            const std::string& preparation_label,
                                                            const std::string& instrument_label,
                                                            const std::string& post_effect_label,
                                                            const Tolerances& tol) {
    const RealVector& mu = model.preparation(preparation_label);
    const auto& branches = lookup(model.instruments, instrument_label, "instrument");
    const RealVector& post = model.response(post_effect_label);

    std::map<std::string, double> joint;
    double total = 0.0;
    for (const auto& branch : branches) {
        const double p = post.dot(branch.kernel * mu);
        joint[branch.label] = std::max(p, 0.0);
        total += std::max(p, 0.0);
    }
    if (total <= tol.tol_prob)
        throw PostselectionImpossible("post-selection never succeeds in the model");
    for (auto& [label, p] : joint) p /= total;
    return joint;
}

// ---------------------------------------------------------------------------
// The four-ontic-state qubit model
// ---------------------------------------------------------------------------

FiniteOntModel build_toy_bit_model() {
    FiniteOntModel model;
    model.ontic_states = {"1", "2", "3", "4"};

    const Complex inv_sqrt2 = Complex(1.0 / std::sqrt(2.0), 0.0);
    ComplexVector zero(2), one(2), plus(2), minus(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    plus << inv_sqrt2, inv_sqrt2;
    minus << inv_sqrt2, -inv_sqrt2;

    model.state_registry = {
        {"0", PureState::validated(zero)},
        {"1", PureState::validated(one)},
        {"+", PureState::validated(plus)},
        {"-", PureState::validated(minus)},
    };
    auto dist = [](double a, double b, double c, double d) {
        RealVector v(4);
        v << a, b, c, d;
        return v;
    };
    model.preparations = {
        {"0", dist(0.5, 0.5, 0.0, 0.0)},
        {"1", dist(0.0, 0.0, 0.5, 0.5)},
        {"+", dist(0.5, 0.0, 0.5, 0.0)},
        {"-", dist(0.0, 0.5, 0.0, 0.5)},
    };

    const ComplexMatrix p0 = zero * zero.adjoint();
    const ComplexMatrix p1 = one * one.adjoint();
    const ComplexMatrix pp = plus * plus.adjoint();
    const ComplexMatrix pm = minus * minus.adjoint();
    const ComplexMatrix eye = identity(2);

    model.effect_registry = {
        {"E0", p0},         {"E1", p1},          {"E+", pp},
        {"E-", pm},         {"post", p1},        {"Eseq[+,post]", 0.5 * pp},
        {"Eseq[+,fail]", 0.5 * pp}, {"Eseq[-,post]", 0.5 * pm},
        {"Eseq[-,fail]", 0.5 * pm}, {"Ehalf", 0.5 * eye}, {"Eone", eye},
    };
    model.responses = {
        {"E0", dist(1, 1, 0, 0)},
        {"E1", dist(0, 0, 1, 1)},
        {"E+", dist(1, 0, 1, 0)},
        {"E-", dist(0, 1, 0, 1)},
        {"post", dist(0, 0, 1, 1)},
        {"Eseq[+,post]", dist(0.5, 0, 0.5, 0)},
        {"Eseq[+,fail]", dist(0.5, 0, 0.5, 0)},
        {"Eseq[-,post]", dist(0, 0.5, 0, 0.5)},
        {"Eseq[-,fail]", dist(0, 0.5, 0, 0.5)},
        {"Ehalf", dist(0.5, 0.5, 0.5, 0.5)},
        {"Eone", dist(1, 1, 1, 1)},
    };
    model.povms = {
        {"z", {"E0", "E1"}},
        {"zflip", {"E1", "E0"}},
        {"x", {"E+", "E-"}},
        {"xflip", {"E-", "E+"}},
        {"seq_x_post", {"Eseq[+,post]", "Eseq[+,fail]", "Eseq[-,post]", "Eseq[-,fail]"}},
        {"avg", {"Ehalf", "Ehalf"}},
        {"one", {"Eone"}},
    };

    // Kernels are column-indexed by the source ontic state. A sharp toy-bit
    // measurement resamples uniformly within the outcome's support; the reset
    // branches land on the |0> support {1,2} from anywhere they fire.
    auto kernel = [](std::initializer_list<std::pair<int, std::array<double, 4>>> cols) {
        RealMatrix k = RealMatrix::Zero(4, 4);
        for (const auto& [from, col] : cols) {
            for (int to = 0; to < 4; ++to) k(to, from) = col[static_cast<std::size_t>(to)];
        }
        return k;
    };
    using A4 = std::array<double, 4>;
    const RealMatrix k_plus = kernel({{0, A4{0.5, 0, 0.5, 0}}, {2, A4{0.5, 0, 0.5, 0}}});
    const RealMatrix k_minus = kernel({{1, A4{0, 0.5, 0, 0.5}}, {3, A4{0, 0.5, 0, 0.5}}});
    const RealMatrix k_z0 = kernel({{0, A4{0.5, 0.5, 0, 0}}, {1, A4{0.5, 0.5, 0, 0}}});
    const RealMatrix k_z1 = kernel({{2, A4{0, 0, 0.5, 0.5}}, {3, A4{0, 0, 0.5, 0.5}}});
    const RealMatrix k_reset_minus = kernel({{1, A4{0.5, 0.5, 0, 0}}, {3, A4{0.5, 0.5, 0, 0}}});
    const RealMatrix k_reset_plus = kernel({{0, A4{0.5, 0.5, 0, 0}}, {2, A4{0.5, 0.5, 0, 0}}});

    const ComplexMatrix reset_minus_kraus = zero * minus.adjoint(); // |0><-|
    const ComplexMatrix reset_plus_kraus = zero * plus.adjoint();   // |0><+|

    model.instruments = {
        {"luders_x",
         {{"+", k_plus, "E+", {pp}}, {"-", k_minus, "E-", {pm}}}},
        {"luders_z",
         {{"0", k_z0, "E0", {p0}}, {"1", k_z1, "E1", {p1}}}},
        {"reset_on_minus",
         {{"+", k_plus, "E+", {pp}}, {"-", k_reset_minus, "E-", {reset_minus_kraus}}}},
        {"reset_on_plus",
         {{"+", k_reset_plus, "E+", {reset_plus_kraus}}, {"-", k_minus, "E-", {pm}}}},
    };

    model.coarse_grainings = {
        {"seq_x_post", "x", {{0, 1}, {2, 3}}},
        {"seq_x_post", "avg", {{0, 2}, {1, 3}}},
        {"z", "one", {{0, 1}}},
    };
    model.mixtures = {
        {"zflip", "z", "avg", 0.5},
        {"x", "xflip", "avg", 0.5},
    };

    validate_model(model);
    return model;
}

// ---------------------------------------------------------------------------
// Violation classification
// ---------------------------------------------------------------------------

std::string to_string(Assumption a) {
    switch (a) {
        case Assumption::AlgebraicConditions: return "algebraic-conditions";
        case Assumption::OutcomeDeterminism: return "outcome-determinism";
        case Assumption::MeasurementNoncontextuality: return "measurement-noncontextuality";
    }
    return "?";
}

namespace {

std::string find_state_label(const FiniteOntModel& model, const PureState& state,
                             const Tolerances& tol) {
    for (const auto& [label, bound] : model.state_registry) {
        if (bound.dim() != state.dim()) continue;
        const double overlap = std::abs((bound.amplitudes.adjoint() * state.amplitudes)(0));
        if (std::abs(overlap - 1.0) <= tol.tol_norm * 10.0) return label;
    }
    throw ModelDoesNotReproduce("the scenario's pre-selection is not a registered preparation");
}

/// Instrument whose branch effects realise the given measurement, matched
/// outcome-by-outcome. Returns branch indices aligned with `outcomes`.
struct MatchedInstrument {
    std::string name;
    std::vector<int> branch_of_outcome;
    bool luders = true;
};

std::optional<MatchedInstrument> match_instrument(const FiniteOntModel& model,
                                                  const std::vector<Projector>& outcomes,
                                                  const Tolerances& tol) {
    for (const auto& [name, branches] : model.instruments) {
        if (branches.size() != outcomes.size()) continue;
        MatchedInstrument match;
        match.name = name;
        match.branch_of_outcome.assign(outcomes.size(), -1);
        std::vector<bool> taken(branches.size(), false);
        bool all = true;
        for (std::size_t j = 0; j < outcomes.size() && all; ++j) {
            all = false;
            for (std::size_t b = 0; b < branches.size(); ++b) {
                if (taken[b]) continue;
                const ComplexMatrix& op = model.effect_operator(branches[b].effect_label);
                if (op.rows() == outcomes[j].dim() &&
                    max_abs((op - outcomes[j].matrix).eval()) <= tol.tol_op) {
                    match.branch_of_outcome[j] = static_cast<int>(b);
                    taken[b] = true;
                    all = true;
                    break;
                }
            }
        }
        if (!all) continue;
        for (std::size_t j = 0; j < outcomes.size(); ++j) {
            const auto& branch = branches[static_cast<std::size_t>(match.branch_of_outcome[j])];
            if (branch.kraus_ops.size() != 1 ||
                max_abs((branch.kraus_ops.front() - outcomes[j].matrix).eval()) > tol.tol_op)
                match.luders = false;
        }
        return match;
    }
    return std::nullopt;
}

std::vector<Projector> context_outcomes(const Scenario& s, const GeneratorBinding& g,
                                        const Tolerances& tol) {
    if (g.context) return g.context->outcomes;
    return {g.projector, validate_projector(identity(s.dim) - g.projector.matrix, tol)};
}

} // namespace

ViolationClassification classify_violation(const FiniteOntModel& model, const Scenario& s,
                                           const Tolerances& tol) {
    validate_model(model, tol);
    if (model.dim() != s.dim)
        throw ModelDoesNotReproduce("model dimension " + std::to_string(model.dim()) +
                                    " differs from scenario dimension " + std::to_string(s.dim));

    const std::string pre_label = find_state_label(model, s.pre, tol);
    const ComplexMatrix post_op = s.post.amplitudes * s.post.amplitudes.adjoint();
    const auto post_label = model.find_effect_label(post_op, tol);
    if (!post_label)
        throw ModelDoesNotReproduce("the post-selection projector is not a registered effect");

    // Born statistics for the scenario's effects.
    std::vector<std::pair<std::string, std::string>> born_pairs{{pre_label, *post_label}};
    std::vector<std::string> generator_labels;
    for (const auto& g : s.generators) {
        const auto label = model.find_effect_label(g.projector.matrix, tol);
        if (!label)
            throw ModelDoesNotReproduce("generator '" + g.label +
                                        "' is not a registered effect");
        generator_labels.push_back(*label);
        born_pairs.emplace_back(pre_label, *label);
    }
    const CheckReport born = reproduces_born(model, born_pairs, tol);
    if (!born.pass) {
        std::string detail = "Born statistics fail:";
        for (const auto& f : born.failures) detail += " " + f + ";";
        throw ModelDoesNotReproduce(detail);
    }

    // Sequential statistics: each generator's measurement, performed through
    // its registered instrument, must reproduce the quantum joint
    // probabilities with the post-selection.
    const RealVector& mu = model.preparation(pre_label);
    const RealVector& post_resp = model.response(*post_label);
    const ComplexMatrix rho = s.pre.amplitudes * s.pre.amplitudes.adjoint();
    std::vector<std::pair<std::string, MatchedInstrument>> scenario_instruments;
    for (const auto& g : s.generators) {
        const auto outcomes = context_outcomes(s, g, tol);
        const auto match = match_instrument(model, outcomes, tol);
        if (!match)
            throw ModelDoesNotReproduce("no registered instrument measures the context of '" +
                                        g.label + "'");
        const auto& branches = model.instruments.at(match->name);
        for (std::size_t j = 0; j < outcomes.size(); ++j) {
            const auto& branch = branches[static_cast<std::size_t>(match->branch_of_outcome[j])];
            const double model_joint = post_resp.dot(branch.kernel * mu);
            ComplexMatrix mapped = ComplexMatrix::Zero(s.dim, s.dim);
            if (!branch.kraus_ops.empty()) {
                for (const auto& k : branch.kraus_ops) mapped += k * rho * k.adjoint();
            } else {
                mapped = outcomes[j].matrix * rho * outcomes[j].matrix;
            }
            const double quantum_joint =
                (s.post.amplitudes.adjoint() * mapped * s.post.amplitudes)(0).real();
            if (std::abs(model_joint - quantum_joint) > 10.0 * tol.tol_prob)
                throw ModelDoesNotReproduce(
                    "sequential statistics of '" + g.label + "' via instrument '" + match->name +
                    "' give " + fmt(model_joint) + " instead of " + fmt(quantum_joint));
        }
        scenario_instruments.emplace_back(g.label, *match);
    }

    ViolationClassification result;

    // (a) algebraic conditions on the response functions, pointwise over the
    // preparation's support intersected with the post-certain states.
    std::vector<Projector> generators;
    std::vector<std::string> labels;
    for (const auto& g : s.generators) {
        generators.push_back(g.projector);
        labels.push_back(g.label);
    }
    const ProjectorAlgebra alg = close(generators, Limits{}.max_closure, tol, labels);
    for (Index l = 0; l < model.lambda_count(); ++l) {
        if (mu(l) <= tol.tol_prob) continue;
        if (post_resp(l) < 1.0 - tol.tol_prob) continue;
        std::map<int, double> fixed;
        for (std::size_t g = 0; g < s.generators.size(); ++g) {
            const double v = model.response(generator_labels[g])(l);
            fixed[alg.generator_indices[g]] = std::clamp(v, 0.0, 1.0);
        }
        const ConstraintSystem cs = build_constraints(alg, fixed);
        const FeasibilityResult feas = check_extension(cs, tol);
        if (!feas.feasible) {
            result.violated.insert(Assumption::AlgebraicConditions);
            result.details.push_back("responses at ontic state " + model.ontic_states[l] +
                                     " admit no extension satisfying the algebraic conditions");
        }
    }

    // (b) outcome determinism for every projector-bound effect.
    std::vector<std::string> projective;
    for (const auto& [label, op] : model.effect_registry) {
        try {
            validate_projector(op, tol);
            projective.push_back(label);
        } catch (const Error&) {
        }
    }
    const CheckReport determinism = check_outcome_determinism(model, projective, tol);
    if (!determinism.pass) {
        result.violated.insert(Assumption::OutcomeDeterminism);
        for (const auto& f : determinism.failures) result.details.push_back(f);
    }

    // (c) measurement noncontextuality: registered coarse-grainings and
    // mixtures, plus possibility preservation for the scenario's
    // projection-postulate instruments.
    for (const auto& decl : model.coarse_grainings) {
        const CheckReport r = check_coarse_graining(model, decl, tol);
        if (!r.pass) {
            result.violated.insert(Assumption::MeasurementNoncontextuality);
            for (const auto& f : r.failures) result.details.push_back(f);
        }
    }
    for (const auto& decl : model.mixtures) {
        const CheckReport r = check_mixing(model, decl, tol);
        if (!r.pass) {
            result.violated.insert(Assumption::MeasurementNoncontextuality);
            for (const auto& f : r.failures) result.details.push_back(f);
        }
    }
    for (const auto& [generator_label, match] : scenario_instruments) {
        if (!match.luders) continue;
        const CheckReport r = check_possibilistic_disturbance(model, match.name, *post_label, tol);
        if (!r.pass) {
            result.violated.insert(Assumption::MeasurementNoncontextuality);
            for (const auto& f : r.failures)
                result.details.push_back("measurement of '" + generator_label + "': " + f);
        }
    }
    return result;
}

} // namespace ppslab
