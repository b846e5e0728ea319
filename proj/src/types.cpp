#include "ppslab/types.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

namespace ppslab {

namespace {

std::string residual_message(const std::string& what, double residual, double tol) {
    std::ostringstream os;
    os << what << " (max residual " << residual << ", tolerance " << tol << ")";
    return os.str();
}

void check_dim_cap(Index dim, const Limits& limits) {
    if (dim < 1) throw DimensionMismatch("dimension must be positive");
    if (dim > limits.max_dim) {
        std::ostringstream os;
        os << "dimension " << dim << " exceeds cap " << limits.max_dim;
        throw DimensionCapExceeded(os.str());
    }
}

} // namespace

void validate_tolerances(const Tolerances& tol) {
    for (double t : {tol.tol_norm, tol.tol_op, tol.tol_prob}) {
        if (!(t > 0.0) || t > 1e-4)
            throw InvalidTolerance("tolerances must lie in (0, 1e-4]");
    }
}

PureState PureState::validated(ComplexVector amplitudes, const Tolerances& tol,
                               const Limits& limits) {
    check_dim_cap(amplitudes.size(), limits);
    if (!all_finite(amplitudes)) throw NonFiniteEntry("state amplitudes contain NaN/Inf");
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > tol.tol_norm)
        throw NotNormalized(residual_message("state norm differs from 1",
                                             std::abs(norm - 1.0), tol.tol_norm));
    return PureState{std::move(amplitudes)};
}

PureState PureState::normalized(ComplexVector amplitudes, const Tolerances& tol,
                                const Limits& limits) {
    const double norm = amplitudes.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw NotNormalized("cannot normalise a zero or non-finite vector");
    return validated(amplitudes / norm, tol, limits);
}

Projector validate_projector(const ComplexMatrix& matrix, const Tolerances& tol,
                             const Limits& limits) {
    if (matrix.rows() != matrix.cols())
        throw DimensionMismatch("projector matrix must be square");
    check_dim_cap(matrix.rows(), limits);
    if (!all_finite(matrix)) throw NonFiniteEntry("projector entries contain NaN/Inf");

    const double herm = max_abs(matrix - matrix.adjoint().eval());
    if (herm > tol.tol_op)
        throw NotHermitian(residual_message("matrix is not Hermitian", herm, tol.tol_op));

    const double idem = max_abs((matrix * matrix - matrix).eval());
    if (idem > tol.tol_op)
        throw NotIdempotent(residual_message("matrix is not idempotent", idem, tol.tol_op));

    const Complex trace = matrix.trace();
    const double rank_real = trace.real();
    const double rounded = std::round(rank_real);
    if (std::abs(rank_real - rounded) > tol.tol_op || std::abs(trace.imag()) > tol.tol_op)
        throw NonIntegralTrace(residual_message("projector trace is not an integer",
                                                std::abs(rank_real - rounded), tol.tol_op));

    return Projector{matrix, static_cast<Index>(rounded)};
}

PovmEffect PovmEffect::validated(ComplexMatrix matrix, const Tolerances& tol,
                                 const Limits& limits) {
    if (matrix.rows() != matrix.cols())
        throw DimensionMismatch("effect matrix must be square");
    check_dim_cap(matrix.rows(), limits);
    if (!all_finite(matrix)) throw NonFiniteEntry("effect entries contain NaN/Inf");

    const double herm = max_abs(matrix - matrix.adjoint().eval());
    if (herm > tol.tol_op)
        throw NotHermitian(residual_message("effect is not Hermitian", herm, tol.tol_op));

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix, Eigen::EigenvaluesOnly);
    const double lo = solver.eigenvalues().minCoeff();
    const double hi = solver.eigenvalues().maxCoeff();
    if (lo < -tol.tol_op || hi > 1.0 + tol.tol_op) {
        std::ostringstream os;
        os << "effect spectrum [" << lo << ", " << hi << "] leaves [0, 1]";
        throw NotAnEffect(os.str());
    }
    return PovmEffect{std::move(matrix)};
}

bool commutes(const Projector& p, const Projector& q, const Tolerances& tol) {
    if (p.dim() != q.dim())
        throw DimensionMismatch("commutator of projectors with different dimensions");
    return max_abs((p.matrix * q.matrix - q.matrix * p.matrix).eval()) <= tol.tol_op;
}

bool projector_equal(const Projector& p, const Projector& q, const Tolerances& tol) {
    if (p.dim() != q.dim())
        throw DimensionMismatch("comparing projectors with different dimensions");
    return max_abs((p.matrix - q.matrix).eval()) <= tol.tol_op;
}

double born(const PureState& psi, const ComplexMatrix& effect, const Tolerances& tol) {
    if (effect.rows() != psi.dim() || effect.cols() != psi.dim())
        throw DimensionMismatch("effect and state dimensions differ");
    const double value = (psi.amplitudes.adjoint() * effect * psi.amplitudes)(0).real();
    if (value < -tol.tol_prob || value > 1.0 + tol.tol_prob) {
        std::ostringstream os;
        os << "Born value " << value << " outside [0, 1] beyond tolerance";
        throw NotAnEffect(os.str());
    }
    return std::clamp(value, 0.0, 1.0);
}

Projector basis_projector(Index dim, const std::vector<Index>& indices,
                          const Tolerances& tol) {
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    for (Index i : indices) {
        if (i < 0 || i >= dim)
            throw DimensionMismatch("basis index out of range");
        m(i, i) = 1.0;
    }
    return validate_projector(m, tol);
}

} // namespace ppslab
