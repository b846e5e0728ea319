#include "ppslab/channels.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace ppslab {

namespace {

void check_measurement(const std::vector<Projector>& measurement, const Tolerances& tol) {
    if (measurement.empty()) throw NotAMeasurement("empty projector list");
    const Index dim = measurement.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& p : measurement) {
        if (p.dim() != dim) throw DimensionMismatch("measurement projectors differ in dimension");
        sum += p.matrix;
    }
    for (std::size_t i = 0; i < measurement.size(); ++i) {
        for (std::size_t j = i + 1; j < measurement.size(); ++j) {
            const double cross = max_abs((measurement[i].matrix * measurement[j].matrix).eval());
            if (cross > tol.tol_op) {
                std::ostringstream os;
                os << "projectors " << i << " and " << j << " are not orthogonal (||P_i P_j||_max = "
                   << cross << ")";
                throw NotAMeasurement(os.str());
            }
        }
    }
    const double completeness = max_abs((sum - identity(dim)).eval());
    if (completeness > tol.tol_op) {
        std::ostringstream os;
        os << "projectors do not sum to the identity (residual " << completeness << ")";
        throw NotAMeasurement(os.str());
    }
}

} // namespace

Channel Channel::validated(std::vector<ComplexMatrix> kraus_ops, const Tolerances& tol) {
    if (kraus_ops.empty()) return Channel{0, {}, false};
    const Index dim = kraus_ops.front().rows();
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : kraus_ops) {
        if (k.rows() != dim || k.cols() != dim)
            throw DimensionMismatch("Kraus operators must be square and of equal dimension");
        if (!all_finite(k)) throw NonFiniteEntry("Kraus operator contains NaN/Inf");
        total += k.adjoint() * k;
    }
    Channel c{dim, std::move(kraus_ops), false};
    if (max_abs((total - identity(dim)).eval()) <= tol.tol_op) {
        c.trace_preserving = true;
        return c;
    }
    // Sub-normalised CP maps are allowed: total <= I.
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(identity(dim) - total,
                                                        Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol.tol_op) {
        std::ostringstream os;
        os << "sum of K^dag K exceeds the identity (min eigenvalue of I - S is "
           << solver.eigenvalues().minCoeff() << ")";
        throw NotAChannel(os.str());
    }
    return c;
}

ComplexMatrix apply_channel(const Channel& c, const ComplexMatrix& rho) {
    if (rho.rows() != c.dim || rho.cols() != c.dim)
        throw DimensionMismatch("channel input dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(c.dim, c.dim);
    for (const auto& k : c.kraus_ops) out += k * rho * k.adjoint();
    return out;
}

ComplexMatrix apply_channel_adjoint(const Channel& c, const ComplexMatrix& effect) {
    if (effect.rows() != c.dim || effect.cols() != c.dim)
        throw DimensionMismatch("channel effect dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(c.dim, c.dim);
    for (const auto& k : c.kraus_ops) out += k.adjoint() * effect * k;
    return out;
}

Channel adjoint_channel(const Channel& c, const Tolerances& tol) {
    std::vector<ComplexMatrix> adj;
    adj.reserve(c.kraus_ops.size());
    for (const auto& k : c.kraus_ops) adj.push_back(k.adjoint());
    return Channel::validated(std::move(adj), tol);
}

bool channels_equal(const Channel& a, const Channel& b, const Tolerances& tol) {
    if (a.dim != b.dim) return false;
    ComplexMatrix unit = ComplexMatrix::Zero(a.dim, a.dim);
    for (Index r = 0; r < a.dim; ++r) {
        for (Index s = 0; s < a.dim; ++s) {
            unit(r, s) = 1.0;
            if (max_abs((apply_channel(a, unit) - apply_channel(b, unit)).eval()) > tol.tol_op)
                return false;
            unit(r, s) = 0.0;
        }
    }
    return true;
}

Channel luders_channel(const std::vector<Projector>& measurement, const Tolerances& tol) {
    check_measurement(measurement, tol);
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(measurement.size());
    for (const auto& p : measurement) kraus.push_back(p.matrix);
    return Channel::validated(std::move(kraus), tol);
}

MixtureDecomposition mixture_decomposition(const std::vector<Projector>& measurement,
                                           const Tolerances& tol) {
    check_measurement(measurement, tol);
    const int n = static_cast<int>(measurement.size());
    const Index dim = measurement.front().dim();

    MixtureDecomposition out;
    out.q = std::ldexp(1.0, 1 - n); // 2^(1-n), exact in double

    const long total = 1L << n;
    double identity_weight = 0.0;
    std::vector<ComplexMatrix> complement_kraus;
    const double norm = (total > 2) ? std::sqrt(static_cast<double>(total - 2)) : 1.0;

    for (long bits = 0; bits < total; ++bits) {
        std::vector<int> signs(n);
        ComplexMatrix u = ComplexMatrix::Zero(dim, dim);
        for (int j = 0; j < n; ++j) {
            signs[j] = (bits >> j) & 1 ? -1 : 1;
            u += static_cast<double>(signs[j]) * measurement[j].matrix;
        }
        const double unitarity = max_abs((u.adjoint() * u - identity(dim)).eval());
        if (unitarity > tol.tol_op) {
            std::ostringstream os;
            os << "sign-string operator is not unitary (residual " << unitarity << ")";
            throw NotAMeasurement(os.str());
        }
        const bool is_identity = max_abs((u - identity(dim)).eval()) <= tol.tol_op ||
                                 max_abs((u + identity(dim)).eval()) <= tol.tol_op;
        if (is_identity) {
            identity_weight += 1.0 / static_cast<double>(total);
        } else {
            out.sign_strings.push_back(std::move(signs));
            out.unitaries.push_back(u);
            complement_kraus.push_back(u / norm);
        }
    }
    out.identity_weight_check = identity_weight;
    out.complement_channel = Channel::validated(std::move(complement_kraus), tol);

    // Reconstruction check over the full matrix-unit basis.
    ComplexMatrix unit = ComplexMatrix::Zero(dim, dim);
    double residual = 0.0;
    for (Index r = 0; r < dim; ++r) {
        for (Index s = 0; s < dim; ++s) {
            unit(r, s) = 1.0;
            ComplexMatrix lhs = ComplexMatrix::Zero(dim, dim);
            for (const auto& p : measurement) lhs += p.matrix * unit * p.matrix;
            ComplexMatrix rhs = out.q * unit;
            if (!out.complement_channel.kraus_ops.empty())
                rhs += (1.0 - out.q) * apply_channel(out.complement_channel, unit);
            residual = std::max(residual, max_abs((lhs - rhs).eval()));
            unit(r, s) = 0.0;
        }
    }
    out.reconstruction_residual = residual;
    if (residual > tol.tol_op) {
        std::ostringstream os;
        os << "mixture reconstruction identity fails (residual " << residual << ")";
        throw NotAMeasurement(os.str());
    }
    return out;
}

ComplexMatrix Instrument::induced_effect(std::size_t branch) const {
    ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
    for (const auto& k : branches.at(branch).kraus_ops) e += k.adjoint() * k;
    return e;
}

Instrument make_instrument(std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> branches,
                           const Tolerances& tol) {
    if (branches.empty()) throw NotTracePreservingTotal("instrument has no branches");
    Index dim = -1;
    for (const auto& [label, kraus] : branches) {
        for (const auto& k : kraus) {
            if (k.rows() != k.cols()) throw DimensionMismatch("Kraus operators must be square");
            if (dim < 0) dim = k.rows();
            if (k.rows() != dim) throw DimensionMismatch("instrument branches differ in dimension");
        }
    }
    if (dim < 0) throw NotTracePreservingTotal("instrument has no Kraus operators");

    Instrument inst;
    inst.dim = dim;
    ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
    for (auto& [label, kraus] : branches) {
        Instrument::Branch b{label, std::move(kraus)};
        inst.branches.push_back(std::move(b));
        const ComplexMatrix e = inst.induced_effect(inst.branches.size() - 1);
        PovmEffect::validated(e, tol);
        total += e;
    }
    const double residual = max_abs((total - identity(dim)).eval());
    if (residual > tol.tol_op) {
        std::ostringstream os;
        os << "branch effects do not sum to the identity (residual " << residual << ")";
        throw NotTracePreservingTotal(os.str());
    }
    return inst;
}

Instrument luders_instrument(const std::vector<Projector>& measurement,
                             const std::vector<std::string>& labels, const Tolerances& tol) {
    check_measurement(measurement, tol);
    std::vector<std::pair<std::string, std::vector<ComplexMatrix>>> branches;
    for (std::size_t j = 0; j < measurement.size(); ++j) {
        std::string label = j < labels.size() ? labels[j] : "P" + std::to_string(j);
        branches.emplace_back(std::move(label),
                              std::vector<ComplexMatrix>{measurement[j].matrix});
    }
    return make_instrument(std::move(branches), tol);
}

std::array<PovmEffect, 4> sequential_effect(const Projector& p, const PureState& post,
                                            const Tolerances& tol) {
    if (p.dim() != post.dim())
        throw DimensionMismatch("projector and post-selection dimensions differ");
    const Index dim = p.dim();
    const ComplexMatrix f = post.amplitudes * post.amplitudes.adjoint();
    const ComplexMatrix pc = identity(dim) - p.matrix;
    const ComplexMatrix fc = identity(dim) - f;

    std::array<PovmEffect, 4> effects = {
        PovmEffect::validated(p.matrix * f * p.matrix, tol),
        PovmEffect::validated(p.matrix * fc * p.matrix, tol),
        PovmEffect::validated(pc * f * pc, tol),
        PovmEffect::validated(pc * fc * pc, tol),
    };
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& e : effects) sum += e.matrix;
    const double residual = max_abs((sum - identity(dim)).eval());
    if (residual > tol.tol_op) {
        std::ostringstream os;
        os << "sequential effects do not sum to the identity (residual " << residual << ")";
        throw NotIdempotent(os.str());
    }
    return effects;
}

} // namespace ppslab
