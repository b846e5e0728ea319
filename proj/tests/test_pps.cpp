#include "doctest.h"

#include "ppslab/fixtures.hpp"
#include "ppslab/pps.hpp"
#include "support.hpp"

using namespace ppslab;

namespace {

const Scenario& boxes() {
    static const Scenario s = three_box_scenario();
    return s;
}

} // namespace

TEST_CASE("joint probability") {
    const Scenario& s = boxes();
    CHECK(joint_probability(s.pre, validate_projector(identity(3)), s.pre) ==
          doctest::Approx(1.0));
    CHECK(joint_probability(s.pre, basis_projector(3, {0}), s.post) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    // post orthogonal to P psi
    CHECK(joint_probability(s.pre, basis_projector(3, {1, 2}), s.post) ==
          doctest::Approx(0.0));
    CHECK_THROWS_AS(joint_probability(s.pre, basis_projector(2, {0}), s.post),
                    DimensionMismatch);
}

TEST_CASE("post-selection marginal") {
    const Scenario& s = boxes();
    CHECK(postselection_probability(s.pre, validate_projector(identity(3)), s.post) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));
    CHECK(postselection_probability(s.pre, basis_projector(3, {0}), s.post) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));

    // Orthogonal pre/post with the measurement commuting with the
    // post-selection: both terms vanish.
    const Scenario q = qubit_orthogonal_scenario();
    CHECK(postselection_probability(q.pre, basis_projector(2, {0}), q.post) ==
          doctest::Approx(0.0));
}

TEST_CASE("two-outcome conditional probabilities in the three-box scenario") {
    const Scenario& s = boxes();
    CHECK(abl(s.pre, basis_projector(3, {0}), s.post) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(abl(s.pre, basis_projector(3, {1}), s.post) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(abl(s.pre, basis_projector(3, {2}), s.post) == doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("conditional probabilities in the entangled-pair scenario") {
    const Scenario s = cheshire_cat_scenario();
    // Path alone: defined via its own two-outcome measurement.
    CHECK(abl(s.pre, s.generators[0].projector, s.post) == doctest::Approx(0.0));
    // Path-and-polarisation outcomes: defined via the joint three-outcome
    // measurement carried by the fixture's contexts.
    const auto& ctx = *s.generators[2].context;
    CHECK(abl_in_context(s.pre, ctx.outcomes, {0}, s.post) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(abl_in_context(s.pre, ctx.outcomes, {1}, s.post) ==
          doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(abl_in_context(s.pre, ctx.outcomes, {2}, s.post) ==
          doctest::Approx(4.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("undefined conditionals raise PostselectionImpossible") {
    const Scenario q = qubit_orthogonal_scenario();
    CHECK_THROWS_AS(abl(q.pre, basis_projector(2, {0}), q.post), PostselectionImpossible);
    CHECK_THROWS_AS(abl_assignment(q), PostselectionImpossible);
}

TEST_CASE("assignments over the generator set") {
    SUBCASE("three-box probabilities are all binary") {
        const AblAssignment a = abl_assignment(boxes());
        REQUIRE(a.entries.size() == 4);
        CHECK(a.entries[0].rounded == 1.0);
        CHECK(a.entries[1].rounded == 0.0);
        CHECK(a.entries[2].rounded == 1.0);
        CHECK(a.entries[3].rounded == 0.0);
        CHECK(a.all_binary);
    }
    SUBCASE("the entangled-pair scenario is not binary") {
        const AblAssignment a = abl_assignment(cheshire_cat_scenario());
        CHECK_FALSE(a.all_binary);
        bool has_sixth = false;
        for (const auto& e : a.entries) {
            if (std::abs(e.raw - 1.0 / 6.0) < 1e-12) has_sixth = true;
        }
        CHECK(has_sixth);
    }
    SUBCASE("the trivial generator set {I, 0}") {
        Scenario s = boxes();
        s.generators = {{validate_projector(identity(3)), "I", std::nullopt},
                        {validate_projector(ComplexMatrix::Zero(3, 3)), "0", std::nullopt}};
        const AblAssignment a = abl_assignment(s);
        CHECK(a.entries[0].rounded == 1.0);
        CHECK(a.entries[1].rounded == 0.0);
        CHECK(a.all_binary);
    }
}

TEST_CASE("weak values") {
    const Scenario& s = boxes();
    const ComplexMatrix p1 = basis_projector(3, {0}).matrix;
    const ComplexMatrix p2 = basis_projector(3, {1}).matrix;
    const ComplexMatrix p3 = basis_projector(3, {2}).matrix;
    CHECK(weak_value(s.pre, p1 + p2, s.post) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(weak_value(s.pre, p3, s.post) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(weak_value(s.pre, identity(3), s.post) == doctest::Approx(1.0));

    const Scenario cat = cheshire_cat_scenario();
    CHECK(weak_value(cat.pre, cat.generators[0].projector.matrix, cat.post) ==
          doctest::Approx(0.0));
    CHECK(weak_value(cat.pre, cat.generators[2].projector.matrix, cat.post) ==
          doctest::Approx(0.5).epsilon(1e-12));
    CHECK(weak_value(cat.pre, cat.generators[4].projector.matrix, cat.post) ==
          doctest::Approx(-0.5).epsilon(1e-12));

    const Scenario q = qubit_orthogonal_scenario();
    CHECK_THROWS_AS(weak_value(q.pre, identity(2), q.post), OrthogonalPrePost);
}

TEST_CASE("instrument conditionals reproduce the reset behaviour") {
    ComplexVector zero(2), one(2), plus(2), minus(2);
    const double s2 = 1.0 / std::sqrt(2.0);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    plus << s2, s2;
    minus << s2, -s2;
    const ComplexMatrix pp = plus * plus.adjoint();
    const ComplexMatrix pm = minus * minus.adjoint();
    const PureState psi = PureState::validated(zero);
    const PureState phi = PureState::validated(one);

    const Instrument reset_minus =
        make_instrument({{"+", {pp}}, {"-", {zero * minus.adjoint()}}});
    const auto cond = instrument_conditional(psi, reset_minus, phi);
    CHECK(cond.at("+") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cond.at("-") == doctest::Approx(0.0));

    const Instrument reset_plus =
        make_instrument({{"+", {zero * plus.adjoint()}}, {"-", {pm}}});
    const auto cond2 = instrument_conditional(psi, reset_plus, phi);
    CHECK(cond2.at("+") == doctest::Approx(0.0));
    CHECK(cond2.at("-") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("projection-postulate instruments agree with the conditional formula") {
    testing::Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const Index dim = 2 + trial % 3;
        const PureState psi = testing::random_state(dim, rng);
        const PureState phi = testing::random_state(dim, rng);
        const Projector p = testing::random_projector(dim, 1 + trial % dim, rng);
        const Projector pc = validate_projector(identity(dim) - p.matrix);
        const Instrument inst = luders_instrument({p, pc}, {"P", "I-P"});
        double expected;
        try {
            expected = abl(psi, p, phi);
        } catch (const PostselectionImpossible&) {
            CHECK_THROWS_AS(instrument_conditional(psi, inst, phi), PostselectionImpossible);
            continue;
        }
        const auto cond = instrument_conditional(psi, inst, phi);
        CHECK(cond.at("P") == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("scenario validation reports") {
    SUBCASE("three-box overlap") {
        const ScenarioValidation v = validate_scenario(boxes());
        CHECK(v.overlap == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
        CHECK_FALSE(v.orthogonal);
        CHECK(v.ok());
    }
    SUBCASE("orthogonal pre/post is flagged") {
        const ScenarioValidation v = validate_scenario(qubit_orthogonal_scenario());
        CHECK(v.orthogonal);
        CHECK(v.overlap == doctest::Approx(0.0));
    }
    SUBCASE("a missing complement is flagged") {
        Scenario s = boxes();
        s.generators.pop_back(); // drop I-P2
        const ScenarioValidation v = validate_scenario(s);
        REQUIRE(v.missing_complements.size() == 1);
        CHECK(v.missing_complements[0] == "P2");
    }
    SUBCASE("a malformed context is flagged") {
        Scenario s = boxes();
        MeasurementContext ctx;
        ctx.outcomes = {basis_projector(3, {0})}; // does not sum to I
        ctx.event = {0};
        s.generators[0].context = ctx;
        const ScenarioValidation v = validate_scenario(s);
        CHECK_FALSE(v.context_issues.empty());
    }
}

TEST_CASE("two-outcome conditionals of P and I-P sum to one") {
    testing::Rng rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const Index dim = 2 + trial % 3;
        const PureState psi = testing::random_state(dim, rng);
        const PureState phi = testing::random_state(dim, rng);
        const Projector p = testing::random_projector(dim, 1 + trial % dim, rng);
        const Projector pc = validate_projector(identity(dim) - p.matrix);
        try {
            const double a = abl(psi, p, phi);
            const double b = abl(psi, pc, phi);
            CHECK(a + b == doctest::Approx(1.0).epsilon(1e-10));
        } catch (const PostselectionImpossible&) {
            // both sides undefined together
            CHECK_THROWS_AS(abl(psi, pc, phi), PostselectionImpossible);
        }
    }
}

TEST_CASE("binary conditionals pin the weak value") {
    testing::Rng rng(47);
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const Index dim = 3 + trial % 2;
        const PureState psi = testing::random_state(dim, rng);
        PureState phi = testing::random_state(dim, rng);
        // Build P with psi inside its range (conditional 1) or orthogonal to
        // psi (conditional 0).
        ComplexMatrix other = testing::random_state(dim, rng).amplitudes;
        other -= psi.amplitudes * (psi.amplitudes.adjoint() * other)(0);
        if (other.norm() < 1e-3) continue;
        other /= other.norm();
        ComplexMatrix p;
        if (trial % 2 == 0) {
            p = psi.amplitudes * psi.amplitudes.adjoint();
        } else {
            p = other * other.adjoint();
        }
        const Projector proj = validate_projector(p);
        try {
            const double a = abl(psi, proj, phi);
            if (std::abs(a) > 1e-12 && std::abs(a - 1.0) > 1e-12) continue;
            const double w = weak_value(psi, proj.matrix, phi);
            CHECK(w == doctest::Approx(a).epsilon(1e-9));
            ++checked;
        } catch (const Error&) {
        }
    }
    CHECK(checked > 50);
}

TEST_CASE("weak values add over disjoint commuting projectors") {
    testing::Rng rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        const auto measurement = testing::random_measurement(4, 3, rng);
        const PureState psi = testing::random_state(4, rng);
        const PureState phi = testing::random_state(4, rng);
        try {
            const double wp = weak_value(psi, measurement[0].matrix, phi);
            const double wq = weak_value(psi, measurement[1].matrix, phi);
            const double wsum =
                weak_value(psi, measurement[0].matrix + measurement[1].matrix, phi);
            CHECK(wsum == doctest::Approx(wp + wq).epsilon(1e-9));
        } catch (const OrthogonalPrePost&) {
        }
    }
}

TEST_CASE("orthogonal pre/post never yields a defined all-binary assignment") {
    testing::Rng rng(59);
    for (int trial = 0; trial < 50; ++trial) {
        const Index dim = 2 + trial % 3;
        const PureState psi = testing::random_state(dim, rng);
        const PureState phi = testing::random_orthogonal_state(psi, rng);
        const Projector p = testing::random_projector(dim, 1 + trial % dim, rng);
        const Projector pc = validate_projector(identity(dim) - p.matrix);
        Scenario s;
        s.dim = dim;
        s.pre = psi;
        s.post = phi;
        s.generators = {{p, "P", std::nullopt}, {pc, "I-P", std::nullopt}};
        try {
            const AblAssignment a = abl_assignment(s);
            CHECK_FALSE(a.all_binary);
        } catch (const PostselectionImpossible&) {
            // undefined counts as no assignment
        }
    }
}
