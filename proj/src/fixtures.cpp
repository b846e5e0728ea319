#include "ppslab/fixtures.hpp"

#include <cmath>

namespace ppslab {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Scenario three_box_scenario() {
    const double s = 1.0 / std::sqrt(3.0);
    ComplexVector pre(3), post(3);
    pre << s, s, s;
    post << s, s, -s;

    const Projector p1 = basis_projector(3, {0});
    const Projector p2 = basis_projector(3, {1});
    const Projector p1c = basis_projector(3, {1, 2});
    const Projector p2c = basis_projector(3, {0, 2});

    Scenario scenario;
    scenario.dim = 3;
    scenario.pre = PureState::validated(pre);
    scenario.post = PureState::validated(post);
    scenario.generators = {
        {p1, "P1", std::nullopt},
        {p1c, "I-P1", std::nullopt},
        {p2, "P2", std::nullopt},
        {p2c, "I-P2", std::nullopt},
    };
    return scenario;
}

Scenario cheshire_cat_scenario() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexVector zero(2), one(2), plus(2), minus(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    plus << s, s;
    minus << s, -s;

    ComplexVector pre(4), post(4);
    pre << s, 0.0, s, 0.0;  // |+> x |0>
    post << s, 0.0, 0.0, s; // (|00> + |11>)/sqrt(2)

    const ComplexMatrix p0 = zero * zero.adjoint();
    const ComplexMatrix p1 = one * one.adjoint();
    const ComplexMatrix pp = plus * plus.adjoint();
    const ComplexMatrix pm = minus * minus.adjoint();
    const ComplexMatrix eye2 = identity(2);

    const Tolerances tol;
    const Projector p1xI = validate_projector(kron(p1, eye2), tol);
    const Projector p0xI = validate_projector(kron(p0, eye2), tol);
    const Projector p1xPp = validate_projector(kron(p1, pp), tol);
    const Projector p1xPm = validate_projector(kron(p1, pm), tol);
    const Projector p1xPp_c = validate_projector(identity(4) - p1xPp.matrix, tol);
    const Projector p1xPm_c = validate_projector(identity(4) - p1xPm.matrix, tol);

    // The polarisation outcomes are resolved jointly with the path: the
    // natural measurement has three outcomes {P1 x P+, P1 x P-, P0 x I}.
    const MeasurementContext joint_context{{p1xPp, p1xPm, p0xI}, {}};
    auto with_event = [&](std::vector<int> event) {
        MeasurementContext c = joint_context;
        c.event = std::move(event);
        return c;
    };

    Scenario scenario;
    scenario.dim = 4;
    scenario.pre = PureState::validated(pre);
    scenario.post = PureState::validated(post);
    scenario.generators = {
        {p1xI, "P1xI", std::nullopt},
        {p0xI, "P0xI", std::nullopt},
        {p1xPp, "P1xP+", with_event({0})},
        {p1xPp_c, "I-(P1xP+)", with_event({1, 2})},
        {p1xPm, "P1xP-", with_event({1})},
        {p1xPm_c, "I-(P1xP-)", with_event({0, 2})},
    };
    return scenario;
}

namespace {

Scenario orthogonal_qubit_base() {
    ComplexVector zero(2), one(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    Scenario scenario;
    scenario.dim = 2;
    scenario.pre = PureState::validated(zero);
    scenario.post = PureState::validated(one);
    return scenario;
}

} // namespace

Scenario qubit_orthogonal_scenario() {
    Scenario scenario = orthogonal_qubit_base();
    scenario.generators = {
        {basis_projector(2, {0}), "Z0", std::nullopt},
        {basis_projector(2, {1}), "Z1", std::nullopt},
    };
    return scenario;
}

Scenario qubit_xmeasure_scenario() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexVector plus(2), minus(2);
    plus << s, s;
    minus << s, -s;
    const Tolerances tol;

    Scenario scenario = orthogonal_qubit_base();
    scenario.generators = {
        {validate_projector(plus * plus.adjoint(), tol), "P+", std::nullopt},
        {validate_projector(minus * minus.adjoint(), tol), "P-", std::nullopt},
    };
    return scenario;
}

std::optional<Scenario> fixture_by_name(const std::string& name) {
    if (name == "three_box") return three_box_scenario();
    if (name == "cheshire_cat") return cheshire_cat_scenario();
    if (name == "qubit_orthogonal") return qubit_orthogonal_scenario();
    if (name == "qubit_xmeasure") return qubit_xmeasure_scenario();
    return std::nullopt;
}

std::vector<std::string> fixture_names() {
    return {"three_box", "cheshire_cat", "qubit_orthogonal", "qubit_xmeasure"};
}

} // namespace ppslab
