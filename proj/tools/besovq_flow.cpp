#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "besovq/grid.hpp"
#include "besovq/harness.hpp"
#include "besovq/io.hpp"

namespace {

template <typename T>
void add_override(CLI::App& app, const std::string& flag, std::optional<T>& slot, const std::string& help) {
    app.add_option_function<T>(flag, [&slot](const T& v) { slot = v; }, help);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace besovq;
    CLI::App app{"besovq-flow: fractional Navier-Stokes mild solutions and Besov-Q diagnostics"};
    app.require_subcommand(1);

    std::string plan_path;
    harness::Overrides ov;
    std::vector<CLI::App*> runs;
    for (const char* name : {"solve", "norms", "lemma-check", "scan"}) {
        CLI::App* sub = app.add_subcommand(name, std::string("run a ") + name + " plan");
        sub->add_option("--plan", plan_path, "plan JSON file")->required()->check(CLI::ExistingFile);
        add_override(*sub, "--seed", ov.seed, "random seed");
        add_override(*sub, "--out", ov.out, "output directory");
        add_override(*sub, "--grid", ov.grid, "grid points per axis");
        add_override(*sub, "--beta", ov.beta, "dissipation exponent");
        add_override(*sub, "--p", ov.p, "integrability index p");
        add_override(*sub, "--q", ov.q, "summability index q");
        add_override(*sub, "--gamma1", ov.gamma1, "smoothness index gamma1");
        add_override(*sub, "--gamma2", ov.gamma2, "Morrey index gamma2");
        add_override(*sub, "--m", ov.m, "tent exponent m");
        add_override(*sub, "--mprime", ov.m_prime, "tent exponent m'");
        add_override(*sub, "--tfinal", ov.t_final, "final time");
        add_override(*sub, "--iters", ov.iters, "maximum Picard iterations");
        runs.push_back(sub);
    }
    CLI::App* trace = app.add_subcommand("traceability", "print the verification matrix");
    std::string results_path = "acceptance_results.json";
    std::optional<std::string> trace_out;
    trace->add_option("--results", results_path, "acceptance results JSON");
    add_override(*trace, "--out", trace_out, "directory for traceability.json and traceability.md");

    CLI11_PARSE(app, argc, argv);

    try {
        if (trace->parsed()) {
            std::optional<nlohmann::json> results;
            if (std::filesystem::exists(results_path)) results = io::read_json(results_path);
            const auto report = harness::traceability_report(results);
            const std::string md = harness::traceability_markdown(report);
            std::cout << md;
            if (trace_out) {
                io::write_json((std::filesystem::path(*trace_out) / "traceability.json").string(), report);
                io::write_text((std::filesystem::path(*trace_out) / "traceability.md").string(), md);
            }
            return 0;
        }
        for (CLI::App* sub : runs) {
            if (!sub->parsed()) continue;
            const auto plan = harness::resolve_plan(sub->get_name(), io::read_json(plan_path), ov);
            const auto outcome = harness::run_plan(plan);
            for (const auto& [k, v] : outcome.metrics) std::cout << k << " = " << v << "\n";
            for (const auto& f : outcome.failures) std::cerr << "assertion failed: " << f << "\n";
            std::cout << "wrote " << outcome.files.size() << " files to " << plan["out"].get<std::string>() << "\n";
            return outcome.status;
        }
    } catch (const std::exception& ex) {
        std::cerr << "besovq-flow: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
