#ifndef PPSLAB_ONTMODEL_HPP
#define PPSLAB_ONTMODEL_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ppslab/channels.hpp"
#include "ppslab/feasibility.hpp"
#include "ppslab/pps.hpp"

namespace ppslab {

/// A finite ontological model: ontic states, preparation distributions,
/// effect response functions, and instrument transition kernels.
///
/// Labels name measurement *procedures*; operator bindings say which quantum
/// object each procedure realises. Two labels may share an operator with
/// different responses - that is exactly the freedom the noncontextuality
/// checks interrogate.
struct FiniteOntModel {
    std::vector<std::string> ontic_states;

    std::map<std::string, PureState> state_registry;
    std::map<std::string, RealVector> preparations; ///< label -> mu over ontic states

    std::map<std::string, ComplexMatrix> effect_registry;
    std::map<std::string, RealVector> responses; ///< label -> Pr(E | lambda)

    std::map<std::string, std::vector<std::string>> povms; ///< name -> effect labels

    struct Branch {
        std::string label;
        RealMatrix kernel; ///< kernel(to, from): Pr(outcome and lambda -> lambda')
        std::string effect_label;
        std::vector<ComplexMatrix> kraus_ops; ///< quantum-side binding
    };
    std::map<std::string, std::vector<Branch>> instruments;

    struct CoarseGraining {
        std::string fine;
        std::string coarse;
        std::vector<std::vector<int>> grouping; ///< per coarse outcome: fine indices
    };
    std::vector<CoarseGraining> coarse_grainings;

    struct MixtureDeclaration {
        std::string left;
        std::string right;
        std::string mixed;
        double weight = 0.5; ///< probability of the left POVM
    };
    std::vector<MixtureDeclaration> mixtures;

    Index lambda_count() const { return static_cast<Index>(ontic_states.size()); }
    Index dim() const;

    const RealVector& preparation(const std::string& label) const;
    const RealVector& response(const std::string& label) const;
    const ComplexMatrix& effect_operator(const std::string& label) const;

    /// Effect label bound to an operator equal to `op`, if any.
    std::optional<std::string> find_effect_label(const ComplexMatrix& op,
                                                 const Tolerances& tol = Tolerances::defaults()) const;
};

/// Structural validation: distributions normalised, responses in [0, 1],
/// every registered POVM complete per ontic state, kernels summing to one per
/// source state with branch marginals matching the induced-effect responses.
void validate_model(const FiniteOntModel& model,
                    const Tolerances& tol = Tolerances::defaults());

struct CheckReport {
    bool pass = true;
    std::vector<std::string> failures;

    void fail(std::string message) {
        pass = false;
        failures.push_back(std::move(message));
    }
};

/// Checks sum_lambda Pr(E|lambda) mu(lambda) = <psi|E|psi> for each pair of
/// registered labels. Throws UnknownLabel.
CheckReport reproduces_born(const FiniteOntModel& model,
                            const std::vector<std::pair<std::string, std::string>>& pairs,
                            const Tolerances& tol = Tolerances::defaults());

/// Verifies that the coarse POVM's responses are the sums of the grouped fine
/// responses; the operator-level sums must match first (OperatorMismatch).
CheckReport check_coarse_graining(const FiniteOntModel& model,
                                  const FiniteOntModel::CoarseGraining& decl,
                                  const Tolerances& tol = Tolerances::defaults());

/// Verifies Pr(E|lambda) = q Pr(E'|lambda) + (1-q) Pr(E''|lambda) outcome-wise
/// for a declared mixture of POVMs.
CheckReport check_mixing(const FiniteOntModel& model,
                         const FiniteOntModel::MixtureDeclaration& decl,
                         const Tolerances& tol = Tolerances::defaults());

/// Every listed label bound to a projector must respond deterministically
/// (Pr in {0, 1} per ontic state). Labels bound to non-projectors are skipped
/// and noted.
CheckReport check_outcome_determinism(const FiniteOntModel& model,
                                      const std::vector<std::string>& effect_labels,
                                      const Tolerances& tol = Tolerances::defaults());

/// For every lambda that makes `effect_label` possible, performing the
/// instrument (over all branches) must keep it possible:
///   sum_branches sum_lambda' kernel(lambda'|lambda) Pr(E|lambda') > 0.
/// Reports the violating ontic states.
CheckReport check_possibilistic_disturbance(const FiniteOntModel& model,
                                            const std::string& instrument_label,
                                            const std::string& effect_label,
                                            const Tolerances& tol = Tolerances::defaults());

/// Model-side replay of an instrument between a preparation and a
/// post-selection effect: branch label -> conditional probability.
std::map<std::string, double> replay_instrument_conditional(
    const FiniteOntModel& model, const std::string& preparation_label,
    const std::string& instrument_label, const std::string& post_effect_label,
    const Tolerances& tol = Tolerances::defaults());

/// The four-ontic-state qubit model with epistemic states uniform over pairs,
/// sharp basis measurements, the measure-and-forget x instrument, and the two
/// reset instruments; all decompositions used by the noncontextuality checks
/// come registered.
FiniteOntModel build_toy_bit_model();

enum class Assumption {
    AlgebraicConditions,
    OutcomeDeterminism,
    MeasurementNoncontextuality,
};

std::string to_string(Assumption a);

struct ViolationClassification {
    std::set<Assumption> violated;
    std::vector<std::string> details;
};

/// Runs, in order: (a) per-ontic-state algebraic-condition feasibility on the
/// scenario's closed algebra over supp(mu) intersected with the
/// post-certain states; (b) outcome determinism on projector-bound effects;
/// (c) the registered coarse-graining/mixing checks plus possibilistic
/// disturbance of the scenario's instruments against the post-selection
/// effect. Throws ModelDoesNotReproduce if the model fails the scenario's
/// Born or sequential statistics.
ViolationClassification classify_violation(const FiniteOntModel& model, const Scenario& s,
                                           const Tolerances& tol = Tolerances::defaults());

} // namespace ppslab

#endif // PPSLAB_ONTMODEL_HPP
