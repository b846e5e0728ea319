#ifndef PPSLAB_TYPES_HPP
#define PPSLAB_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ppslab/errors.hpp"

namespace ppslab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Validation tolerances. All strictly positive and capped at 1e-4; the
/// defaults leave roughly six orders of magnitude of headroom over double
/// round-off at the dimensions this library targets.
struct Tolerances {
    double tol_norm = 1e-9; ///< state normalisation
    double tol_op = 1e-9;   ///< operator identities (Hermiticity, idempotence, ...)
    double tol_prob = 1e-9; ///< probabilities and probability arithmetic

    static Tolerances defaults() { return {}; }
};

/// Resource caps that keep the combinatorial stages bounded.
struct Limits {
    Index max_dim = 16;
    int max_closure = 4096;
};

/// Throws InvalidTolerance unless every field is in (0, 1e-4].
void validate_tolerances(const Tolerances& tol);

/// Entrywise max-modulus norm of a matrix expression.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

/// A unit vector in a finite-dimensional complex Hilbert space.
struct PureState {
    ComplexVector amplitudes;

    Index dim() const { return amplitudes.size(); }

    /// Validates finiteness and unit norm; throws NotNormalized / NonFiniteEntry.
    static PureState validated(ComplexVector amplitudes,
                               const Tolerances& tol = Tolerances::defaults(),
                               const Limits& limits = Limits{});

    /// Normalises the given amplitudes (convenience for surd-valued inputs).
    static PureState normalized(ComplexVector amplitudes,
                                const Tolerances& tol = Tolerances::defaults(),
                                const Limits& limits = Limits{});
};

/// A Hermitian idempotent with its rank cached from the trace.
struct Projector {
    ComplexMatrix matrix;
    Index rank = 0;

    Index dim() const { return matrix.rows(); }
};

/// Checks Hermiticity, idempotence and integral trace; throws NotHermitian,
/// NotIdempotent or NonIntegralTrace naming the violated invariant and the
/// max residual.
Projector validate_projector(const ComplexMatrix& matrix,
                             const Tolerances& tol = Tolerances::defaults(),
                             const Limits& limits = Limits{});

/// A POVM element: Hermitian with spectrum inside [0, 1].
struct PovmEffect {
    ComplexMatrix matrix;

    Index dim() const { return matrix.rows(); }

    static PovmEffect validated(ComplexMatrix matrix,
                                const Tolerances& tol = Tolerances::defaults(),
                                const Limits& limits = Limits{});
};

/// True iff ||PQ - QP||_max <= tol_op. Throws DimensionMismatch.
bool commutes(const Projector& p, const Projector& q,
              const Tolerances& tol = Tolerances::defaults());

/// True iff ||P - Q||_max <= tol_op. Throws DimensionMismatch.
bool projector_equal(const Projector& p, const Projector& q,
                     const Tolerances& tol = Tolerances::defaults());

/// Born probability <psi|E|psi>, clamped to [0, 1] on output.
double born(const PureState& psi, const ComplexMatrix& effect,
            const Tolerances& tol = Tolerances::defaults());

/// Projector onto the given basis indices (diagonal 0/1 matrix).
Projector basis_projector(Index dim, const std::vector<Index>& indices,
                          const Tolerances& tol = Tolerances::defaults());

inline ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

} // namespace ppslab

#endif // PPSLAB_TYPES_HPP
