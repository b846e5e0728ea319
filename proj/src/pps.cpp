#include "ppslab/pps.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ppslab {

namespace {

Complex transition_amplitude(const PureState& psi, const ComplexMatrix& op,
                             const PureState& phi) {
    if (op.rows() != psi.dim() || op.cols() != psi.dim() || phi.dim() != psi.dim())
        throw DimensionMismatch("state/operator dimensions differ");
    return (phi.amplitudes.adjoint() * op * psi.amplitudes)(0);
}

double snap_binary(double v, double tol_prob) {
    if (std::abs(v) <= tol_prob) return 0.0;
    if (std::abs(v - 1.0) <= tol_prob) return 1.0;
    return v;
}

} // namespace

double joint_probability(const PureState& psi, const Projector& p, const PureState& phi,
                         const Tolerances& tol) {
    (void)tol;
    const double value = std::norm(transition_amplitude(psi, p.matrix, phi));
    return std::clamp(value, 0.0, 1.0);
}

double postselection_probability(const PureState& psi, const Projector& p,
                                 const PureState& phi, const Tolerances& tol) {
    const Projector complement =
        validate_projector(identity(p.dim()) - p.matrix, tol);
    return std::clamp(joint_probability(psi, p, phi, tol) +
                          joint_probability(psi, complement, phi, tol),
                      0.0, 1.0);
}

double abl(const PureState& psi, const Projector& p, const PureState& phi,
           const Tolerances& tol) {
    const double joint = joint_probability(psi, p, phi, tol);
    const double marginal = postselection_probability(psi, p, phi, tol);
    if (marginal <= tol.tol_prob) {
        std::ostringstream os;
        os << "post-selection probability " << marginal
           << " vanishes; the conditional is undefined";
        throw PostselectionImpossible(os.str());
    }
    return std::clamp(joint / marginal, 0.0, 1.0);
}

double abl_in_context(const PureState& psi, const std::vector<Projector>& outcomes,
                      const std::vector<int>& event, const PureState& phi,
                      const Tolerances& tol) {
    if (outcomes.empty()) throw NotAMeasurement("empty measurement context");
    double joint = 0.0;
    double marginal = 0.0;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        const double term = joint_probability(psi, outcomes[k], phi, tol);
        marginal += term;
        for (int e : event) {
            if (e == static_cast<int>(k)) joint += term;
        }
    }
    if (marginal <= tol.tol_prob) {
        std::ostringstream os;
        os << "post-selection probability " << marginal
           << " vanishes; the conditional is undefined";
        throw PostselectionImpossible(os.str());
    }
    return std::clamp(joint / marginal, 0.0, 1.0);
}

AblAssignment abl_assignment(const Scenario& s, const Tolerances& tol) {
    AblAssignment out;
    out.all_binary = true;
    for (const auto& g : s.generators) {
        double value = 0.0;
        try {
            if (g.context) {
                value = abl_in_context(s.pre, g.context->outcomes, g.context->event,
                                       s.post, tol);
            } else {
                value = abl(s.pre, g.projector, s.post, tol);
            }
        } catch (const PostselectionImpossible& e) {
            throw PostselectionImpossible("generator '" + g.label + "': " + e.what());
        }
        AblEntry entry;
        entry.label = g.label;
        entry.raw = value;
        entry.rounded = snap_binary(value, tol.tol_prob);
        entry.binary = entry.rounded == 0.0 || entry.rounded == 1.0;
        if (!entry.binary) out.all_binary = false;
        out.entries.push_back(std::move(entry));
    }
    return out;
}

double weak_value(const PureState& psi, const ComplexMatrix& a, const PureState& phi,
                  const Tolerances& tol) {
    const double herm = max_abs((a - a.adjoint().eval()).eval());
    if (herm > tol.tol_op)
        throw NotHermitian("weak values are defined for Hermitian operators");
    const Complex overlap = (phi.amplitudes.adjoint() * psi.amplitudes)(0);
    if (std::abs(overlap) <= tol.tol_prob)
        throw OrthogonalPrePost("pre- and post-selection are orthogonal");
    return (transition_amplitude(psi, a, phi) / overlap).real();
}

std::map<std::string, double> instrument_conditional(const PureState& psi,
                                                     const Instrument& inst,
                                                     const PureState& phi,
                                                     const Tolerances& tol) {
    if (inst.dim != psi.dim() || inst.dim != phi.dim())
        throw DimensionMismatch("instrument and state dimensions differ");
    const ComplexMatrix rho = psi.amplitudes * psi.amplitudes.adjoint();
    std::map<std::string, double> joint;
    double total = 0.0;
    for (const auto& branch : inst.branches) {
        ComplexMatrix mapped = ComplexMatrix::Zero(inst.dim, inst.dim);
        for (const auto& k : branch.kraus_ops) mapped += k * rho * k.adjoint();
        const double p = (phi.amplitudes.adjoint() * mapped * phi.amplitudes)(0).real();
        joint[branch.label] = std::max(p, 0.0);
        total += std::max(p, 0.0);
    }
    if (total <= tol.tol_prob)
        throw PostselectionImpossible("post-selection never succeeds for this instrument");
    for (auto& [label, p] : joint) p /= total;
    return joint;
}

ScenarioValidation validate_scenario(const Scenario& s, const Tolerances& tol) {
    ScenarioValidation v;
    const Complex overlap = (s.post.amplitudes.adjoint() * s.pre.amplitudes)(0);
    v.overlap = std::norm(overlap);
    v.orthogonal = std::abs(overlap) <= tol.tol_prob;

    for (const auto& g : s.generators) {
        if (g.projector.dim() != s.dim || s.pre.dim() != s.dim || s.post.dim() != s.dim) {
            v.dims_consistent = false;
            continue;
        }
        const Projector complement =
            validate_projector(identity(s.dim) - g.projector.matrix, tol);
        bool found = false;
        for (const auto& h : s.generators) {
            if (h.projector.dim() == s.dim && projector_equal(h.projector, complement, tol)) {
                found = true;
                break;
            }
        }
        if (!found) v.missing_complements.push_back(g.label);

        if (g.context) {
            try {
                ComplexMatrix event_sum = ComplexMatrix::Zero(s.dim, s.dim);
                ComplexMatrix total = ComplexMatrix::Zero(s.dim, s.dim);
                for (const auto& o : g.context->outcomes) total += o.matrix;
                for (int e : g.context->event) {
                    if (e < 0 || e >= static_cast<int>(g.context->outcomes.size()))
                        throw OperatorMismatch("context event index out of range");
                    event_sum += g.context->outcomes[static_cast<std::size_t>(e)].matrix;
                }
                if (max_abs((total - identity(s.dim)).eval()) > tol.tol_op)
                    throw NotAMeasurement("context outcomes do not sum to the identity");
                if (max_abs((event_sum - g.projector.matrix).eval()) > tol.tol_op)
                    throw OperatorMismatch("context event does not compose the generator");
            } catch (const Error& e) {
                v.context_issues.push_back(g.label + ": " + e.what());
            }
        }
    }
    return v;
}

} // namespace ppslab
