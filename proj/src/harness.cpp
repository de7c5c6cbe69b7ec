#include "besovq/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "besovq/combinatorics.hpp"
#include "besovq/initial_data.hpp"
#include "besovq/io.hpp"
#include "besovq/meyer.hpp"
#include "besovq/mild_solver.hpp"
#include "besovq/operators.hpp"
#include "besovq/random.hpp"
#include "besovq/semigroup.hpp"

namespace besovq::harness {

using nlohmann::json;

const std::vector<TraceRow>& traceability_rows() {
    static const std::vector<TraceRow> rows = {
        {1, "profile_partition_of_unity", "Omega^2(xi) + Omega^2(2 xi) = 1 on the transition band", "acceptance: partition of unity"},
        {2, "wavelet_orthonormality", "Gram matrix of the periodized Meyer system is the identity (n = 1 and n = 2 windows)",
         "acceptance: orthonormality"},
        {3, "analysis_synthesis_round_trip", "synthesize(analyze(f)) = f for band-limited fields on 128^2", "acceptance: round trip"},
        {4, "semigroup_mode_exactness", "e^{-t(-Delta)^beta} multiplies each mode by e^{-t |xi|^{2 beta}}", "acceptance: semigroup exactness"},
        {5, "semigroup_coefficient_decay", "semigroup coefficients obey the weighted two-regime decay bound with a fitted rate",
         "acceptance: coefficient decay"},
        {6, "semigroup_scale_locality", "the semigroup couples only neighbouring wavelet scales", "acceptance: scale locality"},
        {7, "besovq_lq_monotonicity", "Besov-Q norms decrease as q grows", "acceptance: l^q monotonicity"},
        {8, "critical_dyadic_scaling", "critical Besov-Q norms are invariant under dyadic dilation", "acceptance: dyadic scaling"},
        {9, "riesz_leray_identities", "sum of squared Riesz transforms is -Id; the Leray projector is idempotent and divergence-free",
         "acceptance: Riesz and Leray identities"},
        {10, "czo_matrix_decay", "wavelet matrix of a Riesz transform decays off the diagonal in scale and position", "acceptance: CZO decay"},
        {11, "semigroup_into_tent_space", "tent norm of the semigroup orbit is bounded by the Besov-Q norm of the data",
         "acceptance: semigroup tent bound"},
        {12, "riesz_on_tent_space", "Riesz transforms are bounded on tent-space trajectories", "acceptance: Riesz tent bound"},
        {13, "paraproduct_completeness", "five paraproduct sums plus the mean term rebuild the product", "acceptance: paraproduct"},
        {14, "picard_convergence", "Picard iteration contracts for small Taylor-Green data and matches an ETDRK2 march",
         "acceptance: Picard convergence"},
        {15, "linear_limit", "with the nonlinearity off the solver reproduces the semigroup mode by mode", "acceptance: linear limit"},
        {16, "bilinear_boundedness", "the Duhamel bilinear form is bounded on unit tent-norm pairs", "acceptance: bilinear bound"},
        {17, "index_combinatorics", "cube separation and cube-localized sum inequalities hold with concrete constants",
         "acceptance: index combinatorics"},
    };
    return rows;
}

json traceability_report(const std::optional<json>& results) {
    std::map<int, json> by_id;
    if (results && results->contains("criteria"))
        for (const auto& c : (*results)["criteria"]) by_id[c.value("id", 0)] = c;
    json rows = json::array();
    for (const auto& r : traceability_rows()) {
        json row = {{"id", r.id}, {"name", r.name}, {"statement", r.statement}, {"suite", r.suite}};
        if (auto it = by_id.find(r.id); it != by_id.end()) {
            row["status"] = it->second.value("passed", false) ? "PASS" : "FAIL";
            row["constant"] = it->second.value("constant", std::string{});
        } else {
            row["status"] = "not yet run";
            row["constant"] = "";
        }
        rows.push_back(row);
    }
    return {{"rows", rows}};
}

std::string traceability_markdown(const json& report) {
    std::ostringstream os;
    os << "| # | check | statement | status | constant |\n|---|---|---|---|---|\n";
    for (const auto& r : report.at("rows"))
        os << "| " << r["id"].get<int>() << " | " << r["name"].get<std::string>() << " | " << r["statement"].get<std::string>() << " | "
           << r["status"].get<std::string>() << " | " << r["constant"].get<std::string>() << " |\n";
    return os.str();
}

namespace {

const std::vector<std::string> kScenarios{"solve", "norms", "lemma-check", "scan"};

void merge_defaults(json& dst, const json& defaults) {
    for (auto it = defaults.begin(); it != defaults.end(); ++it) {
        if (!dst.contains(it.key()))
            dst[it.key()] = it.value();
        else if (it.value().is_object() && dst[it.key()].is_object())
            merge_defaults(dst[it.key()], it.value());
    }
}

}  // namespace

json resolve_plan(const std::string& scenario, const json& plan, const Overrides& ov) {
    if (std::find(kScenarios.begin(), kScenarios.end(), scenario) == kScenarios.end())
        throw Error("unknown scenario '" + scenario + "'");
    if (!plan.is_object()) throw Error("plan must be a JSON object");
    json p = plan;
    if (p.contains("scenario") && p["scenario"] != scenario)
        throw Error("plan is for scenario '" + p["scenario"].get<std::string>() + "', not '" + scenario + "'");
    p["scenario"] = scenario;
    merge_defaults(p, {{"seed", 0},
                       {"out", "besovq-out"},
                       {"grid", {{"dim", 2}, {"size", 64}, {"box_exponent", 2}}},
                       {"beta", 1.0},
                       {"space", {{"gamma2", 0.5}, {"p", 2.0}, {"q", 2.0}, {"m", 3.0}, {"m_prime", 0.5}}},
                       {"solver",
                        {{"t_final", 0.1},
                         {"quad_points", 8},
                         {"max_iter", 20},
                         {"contraction_tol", 1e-10},
                         {"smallness_threshold", 1e300},
                         {"samples_per_octave", 4},
                         {"nonlinear", true},
                         {"etd_steps", 200}}},
                       {"initial", {{"kind", "taylor-green"}, {"amplitude", 1e-2}, {"perturbation", 0.0}, {"components", 0}}},
                       {"assertions", json::array()}});
    if (ov.seed) p["seed"] = *ov.seed;
    if (ov.out) p["out"] = *ov.out;
    if (ov.grid) p["grid"]["size"] = *ov.grid;
    if (ov.beta) p["beta"] = *ov.beta;
    if (ov.p) p["space"]["p"] = *ov.p;
    if (ov.q) p["space"]["q"] = *ov.q;
    if (ov.gamma1) p["space"]["gamma1"] = *ov.gamma1;
    if (ov.gamma2) p["space"]["gamma2"] = *ov.gamma2;
    if (ov.m) p["space"]["m"] = *ov.m;
    if (ov.m_prime) p["space"]["m_prime"] = *ov.m_prime;
    if (ov.t_final) p["solver"]["t_final"] = *ov.t_final;
    if (ov.iters) p["solver"]["max_iter"] = *ov.iters;
    // gamma1 on the critical line unless given
    if (!p["space"].contains("gamma1"))
        p["space"]["gamma1"] = p["space"]["gamma2"].get<double>() - 2.0 * p["beta"].get<double>() + 1.0;
    for (const auto& a : p["assertions"])
        if (!a.contains("metric") || !a.contains("op") || !a.contains("value")) throw Error("assertion needs metric, op and value");
    return p;
}

bool evaluate(const Assertion& a, double v) {
    if (a.op == "<") return v < a.value;
    if (a.op == "<=") return v <= a.value;
    if (a.op == ">") return v > a.value;
    if (a.op == ">=") return v >= a.value;
    if (a.op == "==") return v == a.value;
    if (a.op == "!=") return v != a.value;
    throw Error("unknown assertion operator '" + a.op + "'");
}

namespace {

struct Context {
    json plan;
    std::filesystem::path out;
    BasisSpec spec;
    SpaceParams space;
    SolverConfig cfg;
    PlanOutcome result;

    std::string file(const std::string& name) {
        result.files.push_back(name);
        return (out / name).string();
    }
    void metric(const std::string& name, double v) { result.metrics[name] = v; }
};

Context make_context(const json& plan) {
    Context ctx;
    ctx.plan = plan;
    ctx.out = plan.at("out").get<std::string>();
    try {
        Grid g;
        g.dim = plan.at("grid").at("dim").get<int>();
        g.size = plan.at("grid").at("size").get<int>();
        g.box_exponent = plan.at("grid").at("box_exponent").get<int>();
        ctx.spec = BasisSpec::for_grid(g);
        const json& s = plan.at("space");
        ctx.space.gamma1 = s.at("gamma1").get<double>();
        ctx.space.gamma2 = s.at("gamma2").get<double>();
        ctx.space.p = s.at("p").get<double>();
        ctx.space.q = s.at("q").get<double>();
        ctx.space.m = s.at("m").get<double>();
        ctx.space.m_prime = s.at("m_prime").get<double>();
        ctx.space.beta = plan.at("beta").get<double>();
        ctx.space.validate();
        const json& sv = plan.at("solver");
        ctx.cfg.beta = ctx.space.beta;
        ctx.cfg.space = ctx.space;
        ctx.cfg.spec = ctx.spec;
        ctx.cfg.t_final = sv.at("t_final").get<double>();
        ctx.cfg.quad_points = sv.at("quad_points").get<int>();
        ctx.cfg.max_iter = sv.at("max_iter").get<int>();
        ctx.cfg.contraction_tol = sv.at("contraction_tol").get<double>();
        ctx.cfg.smallness_threshold = sv.at("smallness_threshold").get<double>();
        ctx.cfg.samples_per_octave = sv.at("samples_per_octave").get<int>();
        ctx.cfg.nonlinear = sv.at("nonlinear").get<bool>();
    } catch (const json::exception& ex) {
        throw Error(std::string("malformed plan: ") + ex.what());
    }
    return ctx;
}

InitialDataSpec initial_spec(const Context& ctx) {
    const json& in = ctx.plan.at("initial");
    InitialDataSpec init;
    init.kind = in.at("kind").get<std::string>();
    init.amplitude = in.at("amplitude").get<double>();
    init.perturbation = in.at("perturbation").get<double>();
    init.components = in.at("components").get<int>();
    init.seed = ctx.plan.at("seed").get<std::uint64_t>();
    init.params = ctx.space;
    if (in.contains("wavelet")) {
        const json& w = in["wavelet"];
        init.wavelet.eps = w.value("eps", 1u);
        init.wavelet.j = w.value("j", 0);
        const auto k = w.value("k", std::vector<int>{});
        for (std::size_t a = 0; a < k.size() && a < 3; ++a) init.wavelet.k[a] = k[a];
    }
    return init;
}

void run_solve(Context& ctx) {
    const SpectralField a = generate_initial_data(ctx.spec, initial_spec(ctx));
    const SolveResult r = picard_solve(a, ctx.cfg);
    const auto& d = r.diagnostics;
    ctx.metric("contraction_factor", d.contraction_factor);
    ctx.metric("residual", d.residual);
    ctx.metric("iterations", d.iterations);
    ctx.metric("converged", d.converged ? 1.0 : 0.0);
    ctx.metric("initial_besovq", d.initial_besovq);
    ctx.metric("initial_tent_size", d.initial_norm);
    json diag = d.to_json();
    const int steps = ctx.plan["solver"]["etd_steps"].get<int>();
    if (steps > 0 && !d.aborted) {
        const SpectralField etd = etd_march(a, ctx.cfg, steps).back();
        const double err = relative_l2_error(r.trajectory.back(), etd);
        ctx.metric("etd_relative_error", err);
        diag["etd_steps"] = steps;
        diag["etd_relative_error"] = err;
    }
    io::write_json(ctx.file("diagnostics.json"), diag);
    io::write_checkpoint(ctx.file("final.bqck"), io::Checkpoint{r.trajectory.back(), ctx.cfg.beta, r.trajectory.times.back()});
    const CoefficientTrajectory tc = r.trajectory.coefficients(ctx.spec);
    io::write_trajectory_csv(ctx.file("trajectory.csv"), tc, 1e-12 * std::max(1e-300, tc.sets.front().max_abs()));
}

void run_norms(Context& ctx) {
    const SpectralField a = generate_initial_data(ctx.spec, initial_spec(ctx));
    const CoefficientSet c = meyer::analyze(a, ctx.spec);
    const int n = ctx.spec.dim();
    const NormReport besov = besov_norm(c, ctx.space.gamma1, ctx.space.p, ctx.space.q);
    const NormReport bq = besovq_norm(c, ctx.space);
    const CoefficientTrajectory tc = semigroup_orbit(a, ctx.cfg.beta, ctx.cfg.sample_times()).coefficients(ctx.spec);
    const NormReport tent = tent_norm(tc, ctx.space);
    ctx.metric("besov", besov.value);
    ctx.metric("besovq", bq.value);
    ctx.metric("tent", tent.value);
    for (const auto& [k, v] : tent.parts) ctx.metric(k.rfind("tent_", 0) == 0 ? k : "tent_" + k, v);
    const double binf = besov_infinity_norm(tc, ctx.space.gamma1, 1.0, ctx.cfg.beta);
    ctx.metric("besov_infinity", binf);
    io::write_coefficients(ctx.file("coefficients.bqcs"), c);
    io::write_json(ctx.file("coefficients.json"), io::coefficients_to_json(c));
    io::write_json(ctx.file("norms.json"),
                   {{"besov", besov.to_json(n)}, {"besovq", bq.to_json(n)}, {"tent", tent.to_json(n)}, {"besov_infinity", binf}});
}

void run_lemma(Context& ctx) {
    const std::string lemma = ctx.plan.value("lemma", std::string("decay"));
    const std::uint64_t seed = ctx.plan.at("seed").get<std::uint64_t>();
    if (lemma == "decay") {
        InitialDataSpec init = initial_spec(ctx);
        const SpectralField a = generate_initial_data(ctx.spec, init);
        const CoefficientSet c = meyer::analyze(a, ctx.spec);
        const int power = ctx.plan.value("weight_power", 2 * ctx.spec.dim() + 1);
        const auto times = log_time_grid(ctx.cfg.t_min(), ctx.cfg.t_final, ctx.cfg.samples_per_octave, false);
        const DecayReport rep = decay_bound_check(c, ctx.cfg.beta, times, power);
        ctx.metric("c_tilde", rep.c_tilde);
        ctx.metric("c_upper", rep.c_upper);
        ctx.metric("c_lower", rep.c_lower);
        io::write_json(ctx.file("decay.json"), {{"weight_power", rep.weight_power},
                                                {"c_tilde", rep.c_tilde},
                                                {"c_upper", rep.c_upper},
                                                {"c_lower", rep.c_lower},
                                                {"upper_samples", rep.upper_samples},
                                                {"lower_samples", rep.lower_samples},
                                                {"fit_points", rep.fit_points},
                                                {"partial", rep.partial}});
        io::write_trajectory_csv(ctx.file("decay_trajectory.csv"), semigroup_trajectory(c, ctx.cfg.beta, times),
                                 1e-12 * c.max_abs());
    } else if (lemma == "czo") {
        const int j_lo = ctx.plan.value("j_lo", 0), j_hi = ctx.plan.value("j_hi", std::min(ctx.spec.j_max, 1));
        const double N0 = ctx.plan.value("N0", 3.0);
        const CzoOperator op{CzoOperator::Kind::riesz, ctx.plan.value("axis", 0)};
        const auto entries = czo_matrix(op, ctx.spec, window_indices(ctx.spec, j_lo, j_hi));
        const CzoDecayReport rep = czo_decay_check(entries, ctx.spec, N0);
        const double power = czo_decay_power(entries, ctx.spec);
        ctx.metric("constant", rep.constant);
        ctx.metric("decay_power", power);
        io::write_czo_csv(ctx.file("czo.csv"), entries, ctx.spec.dim());
        io::write_json(ctx.file("czo.json"), {{"operator", op.name()},
                                              {"N0", N0},
                                              {"constant", rep.constant},
                                              {"entries_used", rep.entries_used},
                                              {"argmax_row", rep.argmax.row.str(ctx.spec.dim())},
                                              {"argmax_col", rep.argmax.col.str(ctx.spec.dim())},
                                              {"decay_power", power}});
    } else if (lemma == "combinatorics") {
        CombinatoricsOptions opt;
        opt.seed = seed;
        json arr = json::array();
        bool all = true;
        for (const auto& c : run_combinatorics(opt)) {
            ctx.metric(c.name + "_constant", c.constant);
            all = all && c.holds;
            arr.push_back(c.to_json());
        }
        ctx.metric("all_hold", all ? 1.0 : 0.0);
        io::write_json(ctx.file("combinatorics.json"), arr);
    } else if (lemma == "bilinear") {
        const int trials = ctx.plan.value("trials", 10);
        const BilinearStats st = bilinear_constant_estimate(ctx.cfg, trials, seed);
        ctx.metric("sup", st.sup);
        ctx.metric("median", st.median);
        ctx.metric("q90", st.q90);
        ctx.metric("swapped_sup", st.swapped_sup);
        std::ostringstream csv;
        csv.precision(17);
        csv << "trial,b_uv,b_vu\n";
        for (std::size_t i = 0; i < st.samples.size(); ++i) csv << i << ',' << st.samples[i] << ',' << st.swapped[i] << '\n';
        io::write_text(ctx.file("bilinear.csv"), csv.str());
        io::write_json(ctx.file("bilinear.json"),
                       {{"trials", trials}, {"sup", st.sup}, {"median", st.median}, {"q90", st.q90}, {"swapped_sup", st.swapped_sup}});
    } else if (lemma == "paraproduct") {
        Rng rng(seed);
        const Grid& g = ctx.spec.grid;
        const SpectralField u = random_band_limited(g, 1, g.size / 4 - 1, rng);
        const SpectralField v = random_band_limited(g, 1, g.size / 4 - 1, rng);
        const ParaproductSplit split = paraproduct_split(u, v, ctx.spec);
        SpectralField uw(split.grid, 1), vw(split.grid, 1);
        for (std::size_t lin = 0; lin < g.points(); ++lin) {
            const IVec idx = g.unravel(lin);
            IVec t{0, 0, 0};
            for (int a = 0; a < g.dim; ++a) t[a] = split.grid.slot(g.mode(idx[a]));
            uw.at(0, split.grid.ravel(t)) = u.at(0, lin);
            vw.at(0, split.grid.ravel(t)) = v.at(0, lin);
        }
        const SpectralField direct = pointwise_product(uw, 0, vw, 0);
        const double err = (split.total() - direct).sup_norm() / direct.sup_norm();
        ctx.metric("reconstruction_error", err);
        ctx.metric("aliasing_fraction", split.aliasing_fraction);
        json parts = json::array();
        for (const auto& p : split.parts) parts.push_back(p.l2_norm());
        io::write_json(ctx.file("paraproduct.json"), {{"reconstruction_error", err},
                                                      {"work_grid", split.grid.size},
                                                      {"part_l2_norms", parts},
                                                      {"aliasing_fraction", split.aliasing_fraction},
                                                      {"warnings", split.warnings}});
    } else {
        throw Error("unknown lemma-check '" + lemma + "' (decay, czo, combinatorics, bilinear, paraproduct)");
    }
}

void run_scan(Context& ctx) {
    SpectralField dir = generate_initial_data(ctx.spec, initial_spec(ctx));
    const double norm = besovq_norm(meyer::analyze(dir, ctx.spec), ctx.space).value;
    if (!(norm > 0.0)) throw Error("scan direction has zero Besov-Q norm");
    dir *= 1.0 / norm;
    const auto amps = ctx.plan.value("amplitudes", std::vector<double>{0.0, 0.01, 0.1, 1.0, 10.0, 100.0});
    const ScanResult scan = iteration_smallness_scan(dir, ctx.cfg, amps);
    ctx.metric("boundary", scan.boundary);
    std::ostringstream csv;
    csv.precision(17);
    csv << "amplitude,converged,contractive,contraction_factor,iterations\n";
    json rows = json::array();
    for (const auto& r : scan.rows) {
        csv << r.amplitude << ',' << (r.converged ? 1 : 0) << ',' << (r.contractive ? 1 : 0) << ',' << r.contraction_factor << ',' << r.iterations << '\n';
        rows.push_back({{"amplitude", r.amplitude}, {"converged", r.converged}, {"contractive", r.contractive}, {"contraction_factor", r.contraction_factor}, {"iterations", r.iterations}});
    }
    io::write_text(ctx.file("scan.csv"), csv.str());
    io::write_json(ctx.file("scan.json"), {{"beta", ctx.cfg.beta}, {"boundary", scan.boundary}, {"rows", rows}});
}

}  // namespace

PlanOutcome run_plan(const json& plan) {
    Context ctx = make_context(plan);
    const std::string scenario = plan.at("scenario").get<std::string>();
    std::filesystem::create_directories(ctx.out);
    if (scenario == "solve")
        run_solve(ctx);
    else if (scenario == "norms")
        run_norms(ctx);
    else if (scenario == "lemma-check")
        run_lemma(ctx);
    else if (scenario == "scan")
        run_scan(ctx);
    else
        throw Error("unknown scenario '" + scenario + "'");

    PlanOutcome& res = ctx.result;
    json checks = json::array();
    for (const auto& a : plan.at("assertions")) {
        const Assertion as{a.at("metric").get<std::string>(), a.at("op").get<std::string>(), a.at("value").get<double>()};
        json row = {{"metric", as.metric}, {"op", as.op}, {"value", as.value}};
        auto it = res.metrics.find(as.metric);
        bool ok = false;
        if (it == res.metrics.end()) {
            res.failures.push_back("metric '" + as.metric + "' was not produced");
        } else {
            ok = evaluate(as, it->second);
            row["observed"] = it->second;
            if (!ok) {
                std::ostringstream os;
                os.precision(17);
                os << as.metric << " = " << it->second << " violates " << as.op << " " << as.value;
                res.failures.push_back(os.str());
            }
        }
        row["passed"] = ok;
        checks.push_back(row);
    }
    res.status = res.failures.empty() ? 0 : 1;
    json metrics = json::object();
    for (const auto& [k, v] : res.metrics) metrics[k] = v;
    io::write_json(ctx.file("summary.json"), {{"scenario", scenario}, {"metrics", metrics}, {"assertions", checks}});
    res.files.push_back("manifest.json");
    res.manifest = {{"scenario", scenario}, {"seed", plan.at("seed")}, {"plan", plan},     {"files", res.files},
                    {"status", res.status}, {"failures", res.failures}};
    io::write_json((ctx.out / "manifest.json").string(), res.manifest);
    return res;
}

}  // namespace besovq::harness
