#ifndef PPSLAB_CHANNELS_HPP
#define PPSLAB_CHANNELS_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "ppslab/types.hpp"

namespace ppslab {

/// A completely positive map in Kraus form. `trace_preserving` is true when
/// sum K^dag K = I within tol_op; otherwise the map must be sub-normalised
/// (sum K^dag K <= I).
struct Channel {
    Index dim = 0;
    std::vector<ComplexMatrix> kraus_ops;
    bool trace_preserving = false;

    static Channel validated(std::vector<ComplexMatrix> kraus_ops,
                             const Tolerances& tol = Tolerances::defaults());
};

/// Schroedinger-picture action: sum_k K rho K^dag.
ComplexMatrix apply_channel(const Channel& c, const ComplexMatrix& rho);

/// Heisenberg-picture action: sum_k K^dag E K.
ComplexMatrix apply_channel_adjoint(const Channel& c, const ComplexMatrix& effect);

/// Channel whose Kraus operators are the conjugate transposes, so that
/// tr(E c(rho)) = tr(adjoint(c)(E) rho).
Channel adjoint_channel(const Channel& c, const Tolerances& tol = Tolerances::defaults());

/// Extensional equality on the basis of matrix units.
bool channels_equal(const Channel& a, const Channel& b,
                    const Tolerances& tol = Tolerances::defaults());

/// The unrecorded-outcome channel rho -> sum_j P_j rho P_j of a projective
/// measurement. Throws NotAMeasurement unless the projectors are mutually
/// orthogonal and sum to the identity.
Channel luders_channel(const std::vector<Projector>& measurement,
                       const Tolerances& tol = Tolerances::defaults());

/// Decomposition of the unrecorded-measurement channel into "do nothing with
/// probability q" plus a complementary channel built from sign-string
/// unitaries U_x = sum_j x_j P_j:
///
///   sum_j P_j rho P_j = q rho + (1-q) C(rho),   q = 2^(1-n).
///
/// `sign_strings` and `unitaries` list the 2^n - 2 strings other than
/// +/-(1,...,1); the complement channel carries Kraus operators
/// U_x / sqrt(2^n - 2) so that it is trace-preserving on its own.
struct MixtureDecomposition {
    double q = 1.0;
    /// Total weight of sign strings whose unitary is +/- identity; must equal q.
    double identity_weight_check = 1.0;
    Channel complement_channel;
    std::vector<ComplexMatrix> unitaries;
    std::vector<std::vector<int>> sign_strings;
    /// Max residual of the reconstruction identity over the matrix-unit basis.
    double reconstruction_residual = 0.0;
};

MixtureDecomposition mixture_decomposition(const std::vector<Projector>& measurement,
                                           const Tolerances& tol = Tolerances::defaults());

/// A quantum instrument: ordered CP branches summing to a trace-preserving map.
struct Instrument {
    Index dim = 0;
    struct Branch {
        std::string label;
        std::vector<ComplexMatrix> kraus_ops;
    };
    std::vector<Branch> branches;

    /// Induced POVM element E_j = sum_k K_k^dag K_k of branch j.
    ComplexMatrix induced_effect(std::size_t branch) const;
};

/// Validates dimensions and total trace preservation; each branch's induced
/// effect must be a valid PovmEffect. Throws NotTracePreservingTotal.
Instrument make_instrument(std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> branches,
                           const Tolerances& tol = Tolerances::defaults());

/// Lueders instrument of a projective measurement: branch j has the single
/// Kraus operator P_j.
Instrument luders_instrument(const std::vector<Projector>& measurement,
                             const std::vector<std::string>& labels = {},
                             const Tolerances& tol = Tolerances::defaults());

/// The four effects of "measure {P, I-P} with the projection-postulate update,
/// then test the post-selection projector":
///   E[0] = P F P,          E[1] = P (I-F) P,
///   E[2] = (I-P) F (I-P),  E[3] = (I-P) (I-F) (I-P),
/// where F = |phi><phi|. They always sum to the identity.
std::array<PovmEffect, 4> sequential_effect(const Projector& p, const PureState& post,
                                            const Tolerances& tol = Tolerances::defaults());

} // namespace ppslab

#endif // PPSLAB_CHANNELS_HPP
