#include "doctest.h"

#include "ppslab/fixtures.hpp"
#include "ppslab/ontmodel.hpp"

using namespace ppslab;

namespace {

std::vector<std::pair<std::string, std::string>> basis_pairs() {
    std::vector<std::pair<std::string, std::string>> pairs;
    for (const std::string state : {"0", "1", "+", "-"}) {
        for (const std::string effect : {"E0", "E1", "E+", "E-"})
            pairs.emplace_back(state, effect);
    }
    return pairs;
}

/// A deterministic-box model of the three-box scenario that reproduces its
/// statistics; the classification must blame at least one assumption.
FiniteOntModel three_box_candidate_model() {
    FiniteOntModel model;
    model.ontic_states = {"a", "b", "c"};

    const double s = 1.0 / std::sqrt(3.0);
    ComplexVector psi(3), phi(3);
    psi << s, s, s;
    phi << s, s, -s;
    model.state_registry = {{"psi", PureState::validated(psi)}};
    RealVector mu(3);
    mu << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
    model.preparations = {{"psi", mu}};

    auto resp = [](double a, double b, double c) {
        RealVector v(3);
        v << a, b, c;
        return v;
    };
    const ComplexMatrix p1 = basis_projector(3, {0}).matrix;
    const ComplexMatrix p2 = basis_projector(3, {1}).matrix;
    const ComplexMatrix p1c = basis_projector(3, {1, 2}).matrix;
    const ComplexMatrix p2c = basis_projector(3, {0, 2}).matrix;
    model.effect_registry = {
        {"P1", p1},   {"I-P1", p1c}, {"P2", p2},
        {"I-P2", p2c}, {"post", phi * phi.adjoint()},
    };
    model.responses = {
        {"P1", resp(1, 0, 0)},   {"I-P1", resp(0, 1, 1)}, {"P2", resp(0, 1, 0)},
        {"I-P2", resp(1, 0, 1)}, {"post", resp(1.0 / 3.0, 0, 0)},
    };
    model.povms = {{"m1", {"P1", "I-P1"}}, {"m2", {"P2", "I-P2"}}};

    auto kernel = [](std::initializer_list<std::pair<int, int>> moves) {
        RealMatrix k = RealMatrix::Zero(3, 3);
        for (const auto& [from, to] : moves) k(to, from) = 1.0;
        return k;
    };
    // Looking in box 1 leaves everything alone; looking in box 2 shuffles the
    // ball so the post-selection statistics come out right.
    model.instruments = {
        {"m1",
         {{"P1", kernel({{0, 0}}), "P1", {p1}},
          {"I-P1", kernel({{1, 1}, {2, 2}}), "I-P1", {p1c}}}},
        {"m2",
         {{"P2", kernel({{1, 0}}), "P2", {p2}},
          {"I-P2", kernel({{0, 2}, {2, 2}}), "I-P2", {p2c}}}},
    };
    validate_model(model);
    return model;
}

} // namespace

TEST_CASE("the toy bit reproduces the quantum table exactly") {
    const FiniteOntModel model = build_toy_bit_model();
    const CheckReport report = reproduces_born(model, basis_pairs());
    CHECK(report.pass);

    SUBCASE("a corrupted response is caught") {
        FiniteOntModel broken = model;
        broken.responses["E+"](0) = 0.0;
        const CheckReport bad = reproduces_born(broken, {{"0", "E+"}});
        CHECK_FALSE(bad.pass);
        REQUIRE(bad.failures.size() == 1);
    }
    SUBCASE("unknown labels are rejected") {
        CHECK_THROWS_AS(reproduces_born(model, {{"0", "nope"}}), UnknownLabel);
    }
}

TEST_CASE("toy-bit coarse-graining additivity") {
    const FiniteOntModel model = build_toy_bit_model();
    for (const auto& decl : model.coarse_grainings) CHECK(check_coarse_graining(model, decl).pass);

    SUBCASE("operator mismatch throws") {
        FiniteOntModel::CoarseGraining bad{"seq_x_post", "x", {{0, 2}, {1, 3}}};
        CHECK_THROWS_AS(check_coarse_graining(model, bad), OperatorMismatch);
    }
    SUBCASE("an additivity violation names the ontic state") {
        FiniteOntModel broken = model;
        broken.responses["Eseq[+,post]"](0) = 0.25;
        broken.responses["Eseq[+,fail]"](0) = 0.25; // operator sums still fine
        const CheckReport r =
            check_coarse_graining(broken, FiniteOntModel::CoarseGraining{"seq_x_post", "x", {{0, 1}, {2, 3}}});
        CHECK_FALSE(r.pass);
        REQUIRE_FALSE(r.failures.empty());
        CHECK(r.failures[0].find("ontic state 1") != std::string::npos);
    }
}

TEST_CASE("toy-bit mixing convexity") {
    const FiniteOntModel model = build_toy_bit_model();
    for (const auto& decl : model.mixtures) CHECK(check_mixing(model, decl).pass);

    SUBCASE("weight one reduces to the left POVM") {
        const CheckReport r = check_mixing(model, {"x", "xflip", "x", 1.0});
        CHECK(r.pass);
    }
    SUBCASE("a violating response fails") {
        FiniteOntModel broken = build_toy_bit_model();
        broken.responses["Ehalf"](2) = 0.75;
        bool found_failure = false;
        for (const auto& decl : broken.mixtures) {
            if (!check_mixing(broken, decl).pass) found_failure = true;
        }
        CHECK(found_failure);
    }
}

TEST_CASE("outcome determinism for sharp toy-bit measurements") {
    const FiniteOntModel model = build_toy_bit_model();
    const CheckReport r = check_outcome_determinism(model, {"E0", "E1", "E+", "E-", "post"});
    CHECK(r.pass);

    SUBCASE("a stochastic projector response fails") {
        FiniteOntModel broken = model;
        broken.responses["E0"] = RealVector::Constant(4, 0.5);
        const CheckReport bad = check_outcome_determinism(broken, {"E0"});
        CHECK_FALSE(bad.pass);
    }
    SUBCASE("non-projector effects are skipped with a note") {
        const CheckReport skipped = check_outcome_determinism(model, {"Ehalf"});
        CHECK(skipped.pass);
        REQUIRE(skipped.failures.size() == 1);
        CHECK(skipped.failures[0].find("skipped") != std::string::npos);
    }
}

TEST_CASE("possibility preservation under the measure-and-forget instrument") {
    const FiniteOntModel model = build_toy_bit_model();
    CHECK(check_possibilistic_disturbance(model, "luders_x", "post").pass);
    CHECK(check_possibilistic_disturbance(model, "luders_z", "post").pass);

    SUBCASE("the reset instruments destroy possibility where they reset") {
        const CheckReport minus = check_possibilistic_disturbance(model, "reset_on_minus", "post");
        CHECK_FALSE(minus.pass);
        REQUIRE(minus.failures.size() == 1);
        CHECK(minus.failures[0].find("ontic state 4") != std::string::npos);

        const CheckReport plus = check_possibilistic_disturbance(model, "reset_on_plus", "post");
        CHECK_FALSE(plus.pass);
        REQUIRE(plus.failures.size() == 1);
        CHECK(plus.failures[0].find("ontic state 3") != std::string::npos);
    }
    SUBCASE("an identity instrument trivially preserves possibility") {
        FiniteOntModel extended = model;
        extended.effect_registry["Eall"] = identity(2);
        extended.responses["Eall"] = RealVector::Constant(4, 1.0);
        extended.instruments["noop"] = {
            {"only", RealMatrix::Identity(4, 4), "Eall", {identity(2)}}};
        validate_model(extended);
        CHECK(check_possibilistic_disturbance(extended, "noop", "post").pass);
    }
}

TEST_CASE("model-side instrument conditionals") {
    const FiniteOntModel model = build_toy_bit_model();
    const auto reset_minus = replay_instrument_conditional(model, "0", "reset_on_minus", "post");
    CHECK(reset_minus.at("+") == doctest::Approx(1.0));
    CHECK(reset_minus.at("-") == doctest::Approx(0.0));

    const auto reset_plus = replay_instrument_conditional(model, "0", "reset_on_plus", "post");
    CHECK(reset_plus.at("+") == doctest::Approx(0.0));
    CHECK(reset_plus.at("-") == doctest::Approx(1.0));

    // The projection-postulate instrument splits evenly, matching the
    // quantum conditional of the x measurement between |0> and |1>.
    const auto luders = replay_instrument_conditional(model, "0", "luders_x", "post");
    CHECK(luders.at("+") == doctest::Approx(0.5));
    CHECK(luders.at("-") == doctest::Approx(0.5));
}

TEST_CASE("post-certain states and their measure") {
    const FiniteOntModel model = build_toy_bit_model();
    const RealVector& post = model.response("post");
    std::vector<std::string> certain;
    for (Index l = 0; l < model.lambda_count(); ++l) {
        if (post(l) >= 1.0 - 1e-9) certain.push_back(model.ontic_states[l]);
    }
    CHECK(certain == std::vector<std::string>{"3", "4"});

    // Nonzero overlap forces nonzero measure on the post-certain set.
    for (const std::string prep : {"+", "-", "1"}) {
        const RealVector& mu = model.preparation(prep);
        double measure = 0.0;
        for (Index l = 0; l < model.lambda_count(); ++l) {
            if (post(l) >= 1.0 - 1e-9) measure += mu(l);
        }
        const PureState& state = model.state_registry.at(prep);
        const double overlap = born(state, model.effect_operator("post"));
        CHECK(measure == doctest::Approx(overlap));
        if (overlap > 0.0) CHECK(measure > 0.0);
    }
}

TEST_CASE("model validation catches structural breakage") {
    FiniteOntModel model = build_toy_bit_model();
    SUBCASE("kernel marginal must match the branch effect response") {
        model.instruments["luders_x"][0].kernel(0, 0) = 0.75;
        CHECK_THROWS_AS(validate_model(model), Error);
    }
    SUBCASE("POVM completeness per ontic state") {
        model.povms["broken"] = {"E0", "E+"};
        CHECK_THROWS_AS(validate_model(model), InvalidScenario);
    }
    SUBCASE("distributions must normalise") {
        model.preparations["0"](0) = 0.75;
        CHECK_THROWS_AS(validate_model(model), InvalidScenario);
    }
}

TEST_CASE("classification of the orthogonal x-measurement scenario is empty") {
    const FiniteOntModel model = build_toy_bit_model();
    const ViolationClassification c = classify_violation(model, qubit_xmeasure_scenario());
    CHECK(c.violated.empty());
}

TEST_CASE("classification rejects a scenario the model cannot express") {
    const FiniteOntModel model = build_toy_bit_model();
    CHECK_THROWS_AS(classify_violation(model, three_box_scenario()), ModelDoesNotReproduce);
}

TEST_CASE("a model reproducing the three-box statistics violates an assumption") {
    const FiniteOntModel model = three_box_candidate_model();
    const ViolationClassification c = classify_violation(model, three_box_scenario());
    CHECK_FALSE(c.violated.empty());
    // The stochastic post response breaks outcome determinism, and looking in
    // box 2 kills the post-selection's possibility from ontic state a.
    CHECK(c.violated.count(Assumption::OutcomeDeterminism) == 1);
    CHECK(c.violated.count(Assumption::MeasurementNoncontextuality) == 1);
}
