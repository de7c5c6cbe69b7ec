#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "besovq/combinatorics.hpp"
#include "besovq/harness.hpp"
#include "besovq/initial_data.hpp"
#include "besovq/io.hpp"
#include "besovq/meyer.hpp"
#include "besovq/operators.hpp"

using namespace besovq;
using nlohmann::json;

TEST_CASE("taylor-green data is divergence-free and deterministic") {
    const BasisSpec spec = BasisSpec::for_grid(Grid{2, 32, 2});
    InitialDataSpec init;
    init.amplitude = 0.3;
    const SpectralField tg = generate_initial_data(spec, init);
    CHECK(divergence(tg).max_coefficient() <= 1e-14);
    CHECK(tg.sup_norm() == doctest::Approx(0.3).epsilon(1e-12));

    init.perturbation = 0.5;
    init.seed = 9;
    const SpectralField a = generate_initial_data(spec, init), b = generate_initial_data(spec, init);
    CHECK((a - b).max_coefficient() == 0.0);
    CHECK(divergence(a).sup_norm() <= 1e-12);
    init.seed = 10;
    CHECK((generate_initial_data(spec, init) - a).max_coefficient() > 0.0);
}

TEST_CASE("random-besov data is calibrated to its amplitude") {
    const BasisSpec spec = BasisSpec::for_grid(Grid{2, 32, 2});
    InitialDataSpec init;
    init.kind = "random-besov";
    init.params.gamma2 = 0.5;
    init.params.beta = 1.0;
    init.params.make_critical();
    init.seed = 4;
    const SpectralField a = generate_initial_data(spec, init);
    const double norm = besovq_norm(meyer::analyze(a, spec), init.params).value;
    CHECK(norm >= 0.5);
    CHECK(norm <= 2.0);
    CHECK(divergence(a).sup_norm() <= 1e-10 * a.sup_norm());
    init.amplitude = 0.0;
    CHECK(generate_initial_data(spec, init).max_coefficient() == 0.0);
    init.kind = "vortex-sheet";
    CHECK_THROWS_AS(generate_initial_data(spec, init), Error);
}

TEST_CASE("index inequalities hold on the default window") {
    CombinatoricsOptions opt;
    opt.k_bound = 8;
    opt.trials = 2;
    const auto checks = run_combinatorics(opt);
    REQUIRE(checks.size() == 5);
    for (const auto& c : checks) {
        INFO(c.name);
        CHECK(c.holds);
        CHECK(c.cases > 0);
        CHECK(std::isfinite(c.constant));
        if (c.bound > 0.0) CHECK(c.constant <= c.bound * (1.0 + 1e-12));
    }
    const auto sep = check_cube_separation(opt);
    CHECK(sep.constant == doctest::Approx(std::pow(2.0 / (1.0 + 0.125), opt.N)).epsilon(1e-12));
}

TEST_CASE("plans resolve with defaults and overrides") {
    harness::Overrides ov;
    ov.beta = 0.75;
    ov.grid = 32;
    const json p = harness::resolve_plan("solve", json::object(), ov);
    CHECK(p["beta"] == 0.75);
    CHECK(p["grid"]["size"] == 32);
    CHECK(p["space"]["gamma1"].get<double>() == doctest::Approx(0.5 - 1.5 + 1.0));
    CHECK(p["solver"]["max_iter"] == 20);

    CHECK_THROWS_AS(harness::resolve_plan("dance", json::object(), {}), Error);
    CHECK_THROWS_AS(harness::resolve_plan("solve", json{{"scenario", "scan"}}, {}), Error);
    CHECK_THROWS_AS(harness::resolve_plan("solve", json{{"assertions", {{{"metric", "x"}}}}}, {}), Error);
}

TEST_CASE("assertions compare with every operator") {
    using harness::Assertion;
    CHECK(harness::evaluate(Assertion{"m", "<", 1.0}, 0.5));
    CHECK_FALSE(harness::evaluate(Assertion{"m", "<", 1.0}, 1.0));
    CHECK(harness::evaluate(Assertion{"m", "<=", 1.0}, 1.0));
    CHECK(harness::evaluate(Assertion{"m", ">", 1.0}, 2.0));
    CHECK(harness::evaluate(Assertion{"m", ">=", 1.0}, 1.0));
    CHECK(harness::evaluate(Assertion{"m", "==", 1.0}, 1.0));
    CHECK(harness::evaluate(Assertion{"m", "!=", 1.0}, 2.0));
    CHECK_THROWS_AS(harness::evaluate(Assertion{"m", "~", 1.0}, 1.0), Error);
}

TEST_CASE("a norms plan writes its artifacts and checks assertions") {
    const auto out = std::filesystem::temp_directory_path() / "besovq_test_plan";
    std::filesystem::remove_all(out);
    json plan = {{"grid", {{"dim", 1}, {"size", 32}, {"box_exponent", 2}}},
                 {"space", {{"gamma1", 0.5}, {"gamma2", 0.5}}},
                 {"solver", {{"t_final", 4.0}}},
                 {"initial", {{"kind", "single-wavelet"}, {"amplitude", 1.0}, {"components", 1}, {"wavelet", {{"eps", 1}, {"j", 0}, {"k", {0}}}}}},
                 {"assertions", {{{"metric", "besov"}, {"op", "<="}, {"value", 1.0000001}}, {{"metric", "nope"}, {"op", "<"}, {"value", 1}}}}};
    harness::Overrides ov;
    ov.out = out.string();
    const auto res = harness::run_plan(harness::resolve_plan("norms", plan, ov));
    CHECK(res.status == 1);
    REQUIRE(res.failures.size() == 1);
    CHECK(res.failures[0].find("nope") != std::string::npos);
    CHECK(res.metrics.at("besov") == doctest::Approx(1.0).epsilon(1e-9));
    for (const char* f : {"manifest.json", "summary.json", "norms.json", "coefficients.bqcs", "coefficients.json"})
        CHECK(std::filesystem::exists(out / f));
    CHECK(io::read_json((out / "manifest.json").string())["status"] == 1);
}

TEST_CASE("traceability rows cover the gate and read results") {
    const auto& rows = harness::traceability_rows();
    REQUIRE(rows.size() == 17);
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].id == static_cast<int>(i + 1));
    const json none = harness::traceability_report(std::nullopt);
    for (const auto& r : none["rows"]) CHECK(r["status"] == "not yet run");
    const json results = {{"criteria", {{{"id", 3}, {"passed", true}, {"constant", "1e-15"}}, {{"id", 4}, {"passed", false}, {"constant", "x"}}}}};
    const json rep = harness::traceability_report(results);
    CHECK(rep["rows"][2]["status"] == "PASS");
    CHECK(rep["rows"][3]["status"] == "FAIL");
    CHECK(rep["rows"][0]["status"] == "not yet run");
    const std::string md = harness::traceability_markdown(rep);
    CHECK(md.find(rows[16].name) != std::string::npos);
}
