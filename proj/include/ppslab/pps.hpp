#ifndef PPSLAB_PPS_HPP
#define PPSLAB_PPS_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppslab/channels.hpp"
#include "ppslab/types.hpp"

namespace ppslab {

/// The projective measurement a generator's conditional probability refers
/// to: `outcomes` are orthogonal projectors summing to the identity, and the
/// generator equals the sum of `outcomes[k]` for k in `event`. The default
/// context of a projector P is the two-outcome measurement {P, I-P}.
struct MeasurementContext {
    std::vector<Projector> outcomes;
    std::vector<int> event;
};

struct GeneratorBinding {
    Projector projector;
    std::string label;
    std::optional<MeasurementContext> context; // absent: {P, I-P}
};

/// One pre/post-selection experiment: dimension, pre- and post-selected
/// states, and a complement-closed set of generator projectors.
struct Scenario {
    Index dim = 0;
    PureState pre;
    PureState post;
    std::vector<GeneratorBinding> generators;
};

/// Joint probability |<phi|P|psi>|^2 of obtaining P and passing the
/// post-selection, clamped to [0, 1].
double joint_probability(const PureState& psi, const Projector& p, const PureState& phi,
                         const Tolerances& tol = Tolerances::defaults());

/// Marginal probability of passing the post-selection when the two-outcome
/// measurement {P, I-P} is performed.
double postselection_probability(const PureState& psi, const Projector& p,
                                 const PureState& phi,
                                 const Tolerances& tol = Tolerances::defaults());

/// Conditional probability of outcome P given pre- and post-selection, for
/// the two-outcome measurement {P, I-P}. Throws PostselectionImpossible when
/// the marginal is below tol_prob (the conditional is undefined).
double abl(const PureState& psi, const Projector& p, const PureState& phi,
           const Tolerances& tol = Tolerances::defaults());

/// General form: conditional probability of the event (a subset of outcome
/// indices) within the projective measurement `outcomes`.
double abl_in_context(const PureState& psi, const std::vector<Projector>& outcomes,
                      const std::vector<int>& event, const PureState& phi,
                      const Tolerances& tol = Tolerances::defaults());

struct AblEntry {
    std::string label;
    double raw = 0.0;     ///< conditional probability as computed
    double rounded = 0.0; ///< snapped to 0/1 when within tol_prob of binary
    bool binary = false;
};

struct AblAssignment {
    std::vector<AblEntry> entries;
    bool all_binary = false;
};

/// Conditional probabilities for every generator, each evaluated in its own
/// measurement context. Propagates PostselectionImpossible naming the
/// offending generator.
AblAssignment abl_assignment(const Scenario& s,
                             const Tolerances& tol = Tolerances::defaults());

/// Weak value Re(<phi|A|psi> / <phi|psi>). Throws OrthogonalPrePost when
/// |<phi|psi>| <= tol_prob.
double weak_value(const PureState& psi, const ComplexMatrix& a, const PureState& phi,
                  const Tolerances& tol = Tolerances::defaults());

/// Outcome probabilities of an instrument conditioned on pre- and
/// post-selection: label -> <phi|E_j(psi psi^dag)|phi> normalised over
/// branches. Throws PostselectionImpossible when the total vanishes.
std::map<std::string, double> instrument_conditional(
    const PureState& psi, const Instrument& inst, const PureState& phi,
    const Tolerances& tol = Tolerances::defaults());

struct ScenarioValidation {
    double overlap = 0.0; ///< |<phi|psi>|^2
    bool orthogonal = false;
    bool dims_consistent = true;
    std::vector<std::string> missing_complements; ///< generator labels lacking I-P
    std::vector<std::string> context_issues;
    bool ok() const {
        return dims_consistent && missing_complements.empty() && context_issues.empty();
    }
};

/// Report-style validation: records the pre/post overlap (a scenario with
/// orthogonal states can never be a logical paradox), complement-closure
/// failures of the generator set, and malformed contexts. Never throws.
ScenarioValidation validate_scenario(const Scenario& s,
                                     const Tolerances& tol = Tolerances::defaults());

} // namespace ppslab

#endif // PPSLAB_PPS_HPP
