#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "ppslab/fixtures.hpp"
#include "ppslab/io.hpp"

namespace {

struct RunResult {
    int code = -1;
    std::string output;
};

std::string binary_path() {
    if (const char* env = std::getenv("PPS_LAB_BIN"); env != nullptr && *env != '\0') return env;
    return "./pps-lab";
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string command = env_prefix + binary_path() + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buffer[4096];
    while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) result.output.append(buffer, n);
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

} // namespace

TEST_CASE("verdict exit codes and structured reports") {
    const RunResult boxes = run("verdict fixture:three_box --format structured");
    CHECK(boxes.code == 10);
    const auto doc = nlohmann::json::parse(boxes.output);
    CHECK(doc.at("verdict") == "LogicalParadox");
    CHECK(doc.at("closure_size") == 8);
    bool found = false;
    for (const auto& step : doc.at("witness").at("steps")) {
        const std::string text = step.at("text").get<std::string>();
        if (text.find("f(P1+P2)") != std::string::npos &&
            std::abs(step.at("value").get<double>() - 2.0) < 1e-12)
            found = true;
        CHECK_FALSE(step.at("provenance").get<std::string>().empty());
    }
    CHECK(found);

    const RunResult cat = run("verdict fixture:cheshire_cat");
    CHECK(cat.code == 11);
    CHECK(cat.output.find("AlgebraicViolationOnly") != std::string::npos);

    const RunResult xmeasure = run("verdict fixture:qubit_xmeasure");
    CHECK(xmeasure.code == 0);

    const RunResult orthogonal = run("verdict fixture:qubit_orthogonal");
    CHECK(orthogonal.code == 2);
    CHECK(orthogonal.output.find("PostselectionImpossible") != std::string::npos);
}

TEST_CASE("verdict output is deterministic across runs") {
    const RunResult a = run("verdict fixture:three_box --format structured");
    const RunResult b = run("verdict fixture:three_box --format structured");
    auto da = nlohmann::json::parse(a.output);
    auto db = nlohmann::json::parse(b.output);
    da.erase("timing_ms");
    db.erase("timing_ms");
    CHECK(da == db);
    CHECK(a.code == b.code);
}

TEST_CASE("conditional probability tables") {
    const RunResult boxes = run("abl fixture:three_box");
    CHECK(boxes.code == 0);
    CHECK(boxes.output.find("P1") != std::string::npos);
    CHECK(boxes.output.find("all values binary") != std::string::npos);

    const RunResult cat = run("abl fixture:cheshire_cat --format structured");
    CHECK(cat.code == 0);
    const auto doc = nlohmann::json::parse(cat.output);
    bool has_sixth = false;
    for (const auto& row : doc.at("abl")) {
        if (row.at("defined").get<bool>() &&
            std::abs(row.at("raw").get<double>() - 1.0 / 6.0) < 1e-12)
            has_sixth = true;
    }
    CHECK(has_sixth);

    const RunResult orthogonal = run("abl fixture:qubit_orthogonal");
    CHECK(orthogonal.code == 0);
    CHECK(orthogonal.output.find("undefined") != std::string::npos);
}

TEST_CASE("weak value tables and operator specs") {
    const RunResult boxes = run("weak fixture:three_box --op P1+P2 --op I-P1-P2");
    CHECK(boxes.code == 0);
    CHECK(boxes.output.find("w(P1+P2) = 2") != std::string::npos);
    CHECK(boxes.output.find("w(I-P1-P2) = -1") != std::string::npos);

    const RunResult identity_op = run("weak fixture:three_box --op I");
    CHECK(identity_op.output.find("w(I) = 1") != std::string::npos);

    // Labels containing '+' are matched verbatim before the spec is split.
    const RunResult cat = run("weak fixture:cheshire_cat --op P1xP+");
    CHECK(cat.code == 0);
    CHECK(cat.output.find("w(P1xP+) = 0.5") != std::string::npos);

    const RunResult orthogonal = run("weak fixture:qubit_orthogonal");
    CHECK(orthogonal.code == 2);
    CHECK(orthogonal.output.find("OrthogonalPrePost") != std::string::npos);
}

TEST_CASE("decompose subcommand") {
    const RunResult qubit = run("decompose --basis-dim 2");
    CHECK(qubit.code == 0);
    CHECK(qubit.output.find("q = 0.5") != std::string::npos);

    const RunResult boxes = run("decompose --basis-dim 3 --format structured");
    const auto doc = nlohmann::json::parse(boxes.output);
    CHECK(doc.at("q").get<double>() == 0.25);
    CHECK(doc.at("sign_strings").size() == 6);
    CHECK(doc.at("reconstruction_residual").get<double>() < 1e-10);

    const RunResult trivial = run("decompose --identity-dim 3");
    CHECK(trivial.output.find("q = 1") != std::string::npos);
}

TEST_CASE("model subcommand") {
    const RunResult all = run("model builtin:toy_bit fixture:qubit_xmeasure --check all");
    CHECK(all.code == 0);
    CHECK(all.output.find("violated assumptions: none") != std::string::npos);
    CHECK(all.output.find("[FAIL]") == std::string::npos);

    const RunResult mismatch = run("model builtin:toy_bit fixture:three_box --check classify");
    CHECK(mismatch.code == 2);
    CHECK(mismatch.output.find("ModelDoesNotReproduce") != std::string::npos);

    // The reset instruments legitimately destroy possibility; the dedicated
    // check reports where.
    const RunResult disturbance =
        run("model builtin:toy_bit fixture:qubit_xmeasure --check disturbance");
    CHECK(disturbance.code == 1);
    CHECK(disturbance.output.find("reset_on_minus") != std::string::npos);
    CHECK(disturbance.output.find("ontic state 4") != std::string::npos);
}

TEST_CASE("scenario and model files load from disk") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ppslab_cli_test";
    fs::create_directories(dir);

    const fs::path scenario_path = dir / "boxes.json";
    {
        std::ofstream out(scenario_path);
        out << ppslab::scenario_to_json(*ppslab::fixture_by_name("three_box")).dump(2);
    }
    const RunResult verdict = run("verdict " + scenario_path.string());
    CHECK(verdict.code == 10);

    const fs::path model_path = dir / "toy.json";
    {
        std::ofstream out(model_path);
        out << ppslab::model_to_json(ppslab::build_toy_bit_model()).dump(2);
    }
    const RunResult model =
        run("model " + model_path.string() + " fixture:qubit_xmeasure --check born");
    CHECK(model.code == 0);

    const fs::path broken_path = dir / "broken.json";
    {
        std::ofstream out(broken_path);
        out << "{ not json";
    }
    const RunResult broken = run("abl " + broken_path.string());
    CHECK(broken.code == 2);
    CHECK(broken.output.find("ParseError") != std::string::npos);

    fs::remove_all(dir);
}

TEST_CASE("batch verdicts aggregate the strongest exit code") {
    const RunResult batch =
        run("verdict fixture:qubit_xmeasure fixture:three_box --jobs 2");
    CHECK(batch.code == 10);
    CHECK(batch.output.find("== fixture:qubit_xmeasure") != std::string::npos);
    CHECK(batch.output.find("== fixture:three_box") != std::string::npos);
}

TEST_CASE("tolerance overrides") {
    const RunResult bad_env = run("abl fixture:three_box", "PPS_LAB_TOL=2e-4 ");
    CHECK(bad_env.code == 2);
    CHECK(bad_env.output.find("InvalidTolerance") != std::string::npos);

    const RunResult loose = run("abl fixture:three_box --tol 1e-6", "PPS_LAB_TOL=2e-4 ");
    CHECK(loose.code == 0); // the flag overrides the environment

    const RunResult flag_bad = run("abl fixture:three_box --tol 1e-3");
    CHECK(flag_bad.code == 2);
}
