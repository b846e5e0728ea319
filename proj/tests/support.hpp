#ifndef PPSLAB_TESTS_SUPPORT_HPP
#define PPSLAB_TESTS_SUPPORT_HPP

#include <numeric>
#include <random>
#include <vector>

#include "ppslab/channels.hpp"
#include "ppslab/types.hpp"

namespace ppslab::testing {

using Rng = std::mt19937_64;

inline ComplexMatrix random_gaussian(Index dim, Rng& rng) {
    std::normal_distribution<double> normal;
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

inline ComplexMatrix random_unitary(Index dim, Rng& rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian(dim, rng));
    return qr.householderQ() * ComplexMatrix::Identity(dim, dim);
}

inline PureState random_state(Index dim, Rng& rng) {
    std::normal_distribution<double> normal;
    ComplexVector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
    return PureState::normalized(v);
}

inline PureState random_orthogonal_state(const PureState& psi, Rng& rng) {
    while (true) {
        ComplexVector v = random_state(psi.dim(), rng).amplitudes;
        v -= psi.amplitudes * (psi.amplitudes.adjoint() * v)(0);
        if (v.norm() > 1e-3) return PureState::normalized(v);
    }
}

/// Random rank-r projector from the first r columns of a random unitary.
inline Projector random_projector(Index dim, Index rank, Rng& rng) {
    const ComplexMatrix u = random_unitary(dim, rng);
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (Index k = 0; k < rank; ++k) p += u.col(k) * u.col(k).adjoint();
    return validate_projector(p);
}

/// Random projective measurement: a random orthonormal basis partitioned into
/// `outcomes` nonempty groups. Requires outcomes <= dim.
inline std::vector<Projector> random_measurement(Index dim, int outcomes, Rng& rng) {
    if (outcomes < 1 || outcomes > dim)
        throw DimensionMismatch("outcome count must lie in [1, dim]");
    const ComplexMatrix u = random_unitary(dim, rng);
    std::vector<int> group(static_cast<std::size_t>(dim));
    std::uniform_int_distribution<int> pick(0, outcomes - 1);
    while (true) {
        std::vector<bool> hit(static_cast<std::size_t>(outcomes), false);
        for (auto& g : group) {
            g = pick(rng);
            hit[static_cast<std::size_t>(g)] = true;
        }
        if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) break;
    }
    std::vector<Projector> measurement;
    for (int j = 0; j < outcomes; ++j) {
        ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
        for (Index k = 0; k < dim; ++k) {
            if (group[static_cast<std::size_t>(k)] == j) p += u.col(k) * u.col(k).adjoint();
        }
        measurement.push_back(validate_projector(p));
    }
    return measurement;
}

inline ComplexMatrix random_density(Index dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian(dim, rng);
    ComplexMatrix rho = g * g.adjoint();
    rho /= rho.trace();
    return rho;
}

inline PovmEffect random_effect(Index dim, Rng& rng) {
    const ComplexMatrix g = random_gaussian(dim, rng);
    ComplexMatrix h = g * g.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
    h /= solver.eigenvalues().maxCoeff() + 1e-9;
    return PovmEffect::validated(h);
}

/// Random mixed-unitary channel; its adjoint is again a valid channel.
inline Channel random_mixed_unitary_channel(Index dim, int count, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.1, 1.0);
    std::vector<double> weights(static_cast<std::size_t>(count));
    for (auto& w : weights) w = unit(rng);
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<ComplexMatrix> kraus;
    for (int k = 0; k < count; ++k)
        kraus.push_back(std::sqrt(weights[static_cast<std::size_t>(k)] / total) *
                        random_unitary(dim, rng));
    return Channel::validated(std::move(kraus));
}

} // namespace ppslab::testing

#endif // PPSLAB_TESTS_SUPPORT_HPP
