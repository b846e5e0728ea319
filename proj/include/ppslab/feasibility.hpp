#ifndef PPSLAB_FEASIBILITY_HPP
#define PPSLAB_FEASIBILITY_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ppslab/algebra.hpp"
#include "ppslab/pps.hpp"

namespace ppslab {

enum class ConstraintKind {
    Bound,      ///< condition (i): 0 <= f <= 1
    Anchor,     ///< condition (ii): f(0) = 0, f(I) = 1
    Additivity, ///< condition (iii) on a commuting pair
    Fixed,      ///< a conditional probability fixed on a generator
};

/// One linear equality sum_k coeff_k * f(var_k) = rhs, with provenance.
struct LinearEquality {
    std::vector<int> vars;
    std::vector<double> coeffs;
    double rhs = 0.0;
    ConstraintKind kind = ConstraintKind::Additivity;
    int pair_i = -1;      ///< Additivity: the commuting pair
    int pair_j = -1;
    int product_index = -1;
    int join_index = -1;  ///< index of P + Q - PQ
    bool trivial = false; ///< coefficients cancel to nothing (e.g. P <= Q)

    std::string provenance(const std::vector<std::string>& names) const;
};

/// Linear description of the extension problem: one variable f_i per algebra
/// element, [0, 1] bounds, the condition (ii)/(iii) equalities, and the fixed
/// generator values.
struct ConstraintSystem {
    int variable_count = 0;
    std::vector<LinearEquality> equalities;
    std::vector<std::pair<double, double>> bounds;
    std::map<int, double> fixed;
    std::vector<std::string> names; ///< display names per variable
};

/// Builds the constraint system for an algebra. Fixed values must sit on
/// generator indices and lie in [0, 1]. Throws MissingElement if a required
/// product or join is absent (impossible on a valid closed algebra).
ConstraintSystem build_constraints(const ProjectorAlgebra& alg,
                                   const std::map<int, double>& fixed);

/// One step of a derivation chain: which constraint determined which value.
struct WitnessStep {
    std::string text;
    std::string provenance;
    int equality_index = -1; ///< index into ConstraintSystem::equalities
    int derived_var = -1;
    double value = 0.0;
};

/// Farkas-style term: a nonnegative multiplier on a named constraint.
struct FarkasTerm {
    double multiplier = 0.0;
    std::string constraint;
    int equality_index = -1; ///< -1 for bound rows
};

struct InfeasibilityWitness {
    std::vector<WitnessStep> steps;   ///< derivation chain (may be empty)
    std::vector<FarkasTerm> farkas;   ///< multiplier certificate (may be empty)
    std::string contradiction;        ///< the impossible relation reached
    int violated_equality = -1;       ///< equality the chain contradicts, or
    int violated_bound_var = -1;      ///< variable whose [0,1] bound fails
};

struct FeasibilityResult {
    bool feasible = false;
    std::optional<std::vector<double>> assignment;
    std::optional<InfeasibilityWitness> witness;
};

/// Decides real-valued feasibility of the system. A propagation pass first
/// chases forced values through the additivity equalities and yields a
/// readable derivation chain on contradiction; otherwise a phase-1 simplex
/// decides and, when infeasible, returns a Farkas certificate. Throws
/// NumericallyIndeterminate when the margin falls between tol_prob and
/// 10 * tol_prob.
FeasibilityResult check_extension(const ConstraintSystem& cs,
                                  const Tolerances& tol = Tolerances::defaults());

/// Independent oracle: exhaustive search over binary assignments of the free
/// variables (and over the grid {0, 1/grid, ..., 1} when fixed values are
/// fractional). Throws TooLarge above 12 variables.
bool brute_force_feasibility(const ConstraintSystem& cs, int grid = 4,
                             const Tolerances& tol = Tolerances::defaults());

/// Re-derives the witness against the constraint system and confirms the
/// contradiction arithmetic. Used by tests.
bool replay_witness(const ConstraintSystem& cs, const InfeasibilityWitness& witness,
                    const Tolerances& tol = Tolerances::defaults());

enum class VerdictKind {
    LogicalParadox,         ///< all-binary conditional probabilities, no extension
    AlgebraicViolationOnly, ///< no extension but non-binary values: not a contextuality proof
    Consistent,
    NotBinaryConsistent,
};

std::string to_string(VerdictKind kind);

struct Verdict {
    VerdictKind kind = VerdictKind::Consistent;
    AblAssignment abl;
    int closure_size = 0;
    int constraint_count = 0;
    std::optional<std::vector<double>> assignment;
    std::optional<InfeasibilityWitness> witness;
    ProjectorAlgebra algebra;
};

/// Full pipeline: conditional probabilities -> binary check -> closure ->
/// constraints (binary values snapped to exact 0/1) -> feasibility decision.
Verdict paradox_verdict(const Scenario& s, int max_closure = Limits{}.max_closure,
                        const Tolerances& tol = Tolerances::defaults());

} // namespace ppslab

#endif // PPSLAB_FEASIBILITY_HPP
