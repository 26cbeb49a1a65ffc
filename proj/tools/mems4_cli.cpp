// mems4 command-line driver.
//
// Subcommands: steady, branch, parabolic, hyperbolic, pullin, sweep, rate,
// ls-exponent, figures.  Each reads an optional key=value config file, applies
// flag overrides, writes CSVs plus a JSON report under the output directory,
// and prints a one-line summary.  Exit codes: 0 success, 1 usage or
// validation error, 2 numerical failure where success was required.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mems4/mems4.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace mems4;

namespace {

struct Overrides {
    std::optional<double> lambda, dt, t_end, probe;
    std::optional<int> N;
    std::optional<std::string> out;
};

void add_common_options(CLI::App* cmd, std::string& config_path,
                        Overrides& ov) {
    cmd->add_option("--config", config_path, "key=value run configuration file")
        ->check(CLI::ExistingFile);
    cmd->add_option("--lambda", ov.lambda, "override lambda");
    cmd->add_option("--N", ov.N, "override cell count");
    cmd->add_option("--dt", ov.dt, "override time step");
    cmd->add_option("--t-end", ov.t_end, "override final time");
    cmd->add_option("--out", ov.out, "override output directory");
    cmd->add_option("--probe", ov.probe, "override probe coordinate");
}

RunConfigFile load_config(const std::string& config_path, const Overrides& ov) {
    RunConfigFile cfg =
        config_path.empty() ? RunConfigFile{} : parse_config(config_path);
    if (ov.lambda) cfg.lambda = *ov.lambda;
    if (ov.N) cfg.N = *ov.N;
    if (ov.dt) cfg.dt = *ov.dt;
    if (ov.t_end) cfg.t_end = *ov.t_end;
    if (ov.out) cfg.output_dir = *ov.out;
    if (ov.probe) cfg.probes = {*ov.probe};
    cfg.validate();
    return cfg;
}

std::string init_kind_name(InitKind k) {
    switch (k) {
        case InitKind::Zero: return "zero";
        case InitKind::ScaledBump: return "scaled_bump";
        case InitKind::File: return "file";
    }
    return "zero";
}

json config_echo(const RunConfigFile& cfg) {
    json j;
    j["model"] = cfg.model;
    j["B"] = cfg.B;
    j["T"] = cfg.T;
    j["lambda"] = cfg.lambda;
    j["kappa"] = cfg.kappa;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["N"] = cfg.N;
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["u0_kind"] = init_kind_name(cfg.u0_kind);
    j["u0_amplitude"] = cfg.u0_amplitude;
    j["u0_path"] = cfg.u0_path;
    j["u1_kind"] = init_kind_name(cfg.u1_kind);
    j["u1_amplitude"] = cfg.u1_amplitude;
    j["u1_path"] = cfg.u1_path;
    j["probes"] = cfg.probes;
    j["snapshot_times"] = cfg.snapshot_times;
    j["output_dir"] = cfg.output_dir;
    return j;
}

void write_report(const RunConfigFile& cfg, const std::string& command,
                  const json& results) {
    json report;
    report["command"] = command;
    report["config_echo"] = config_echo(cfg);
    report["results"] = results;
    report["version"] = MEMS4_VERSION;
    fs::create_directories(cfg.output_dir);
    std::ofstream os(cfg.output_dir + "/report.json");
    os << report.dump(2) << "\n";
}

Grid make_grid(const RunConfigFile& cfg) {
    return build_grid(cfg.a, cfg.b, cfg.N);
}

Params make_params(const RunConfigFile& cfg) {
    return Params{cfg.B, cfg.T, cfg.lambda, cfg.kappa};
}

ParabolicRunConfig make_parabolic(const RunConfigFile& cfg, const Grid& g) {
    ParabolicRunConfig rc;
    rc.grid = g;
    rc.params = make_params(cfg);
    rc.u0 = make_initial_field(cfg, g, cfg.u0_kind, cfg.u0_amplitude,
                               cfg.u0_path);
    rc.dt = cfg.dt;
    rc.t_end = cfg.t_end;
    rc.probe_x = cfg.probes.empty() ? 0.0 : cfg.probes.front();
    rc.snapshot_times = cfg.snapshot_times;
    return rc;
}

HyperbolicRunConfig make_hyperbolic(const RunConfigFile& cfg, const Grid& g) {
    HyperbolicRunConfig rc;
    rc.grid = g;
    rc.params = make_params(cfg);
    rc.u0 = make_initial_field(cfg, g, cfg.u0_kind, cfg.u0_amplitude,
                               cfg.u0_path);
    rc.u1 = make_initial_field(cfg, g, cfg.u1_kind, cfg.u1_amplitude,
                               cfg.u1_path);
    rc.dt = cfg.dt;
    rc.t_end = cfg.t_end;
    rc.probe_x = cfg.probes.empty() ? 0.0 : cfg.probes.front();
    rc.snapshot_times = cfg.snapshot_times;
    return rc;
}

json outcome_json(const RunOutcome& out) {
    json j;
    j["kind"] = to_string(out.kind);
    j["t_event"] = out.t_event;
    return j;
}

// Emit recorded snapshots; a Stabilized run is stationary afterwards, so
// snapshot times beyond the stopping time reuse the final profile.  For
// quenched or timed-out runs the unreached times are skipped.
void emit_snapshots(const RunConfigFile& cfg, const Grid& g,
                    const Trajectory& traj, const RunOutcome& out,
                    const std::string& dir) {
    fs::create_directories(dir);
    for (const auto& [t, u] : traj.snapshots)
        write_profile_csv(dir + "/" + snapshot_filename(t), g, u);
    if (out.kind != OutcomeKind::Stabilized || traj.samples.empty()) return;
    for (double t : cfg.snapshot_times) {
        bool have = false;
        for (const auto& [ts, u] : traj.snapshots)
            if (ts == t) have = true;
        if (!have && t > out.t_event)
            write_profile_csv(dir + "/" + snapshot_filename(t), g,
                              traj.final_state);
    }
}

int cmd_steady(const RunConfigFile& cfg) {
    Grid g = make_grid(cfg);
    OperatorMatrix K = assemble_operator(g, cfg.B, cfg.T);
    SteadyOptions opt;
    opt.compute_stability = true;
    SteadySolution sol = solve_steady(make_params(cfg), g, K,
                                      Field(g.interior_count(), 0.0), opt);
    json res;
    res["converged"] = sol.newton.converged;
    res["iterations"] = sol.newton.iterations;
    res["residual_norm"] = sol.residual_norm;
    if (!sol.newton.converged) {
        write_report(cfg, "steady", res);
        std::printf("steady lambda=%s FAILED residual=%s\n",
                    format_double(cfg.lambda).c_str(),
                    format_double(sol.residual_norm).c_str());
        return 2;
    }
    res["lambda"] = sol.lambda;
    res["min_psi"] = sol.min_value;
    if (sol.smallest_eig) res["smallest_eig"] = *sol.smallest_eig;
    fs::create_directories(cfg.output_dir);
    write_profile_csv(cfg.output_dir + "/psi.csv", g, sol.psi);
    write_report(cfg, "steady", res);
    std::printf("steady lambda=%s min_psi=%s smallest_eig=%s\n",
                format_double(sol.lambda).c_str(),
                format_double(sol.min_value).c_str(),
                sol.smallest_eig ? format_double(*sol.smallest_eig).c_str()
                                 : "n/a");
    return 0;
}

int cmd_branch(const RunConfigFile& cfg, double lambda_max, double dlambda) {
    Grid g = make_grid(cfg);
    OperatorMatrix K = assemble_operator(g, cfg.B, cfg.T);
    ContinuationOptions opt;
    opt.lambda_max = lambda_max;
    opt.dlambda = dlambda;
    opt.compute_stability = true;
    Params p = make_params(cfg);
    p.lambda = 0.0;
    Branch br = continuation_sweep(p, g, K, opt);
    fs::create_directories(cfg.output_dir);
    write_branch_csv(cfg.output_dir + "/branch.csv", br);
    json res;
    res["points"] = br.points.size();
    if (br.fold_estimate) res["fold_estimate"] = *br.fold_estimate;
    write_report(cfg, "branch", res);
    std::printf("branch points=%zu fold=%s\n", br.points.size(),
                br.fold_estimate ? format_double(*br.fold_estimate).c_str()
                                 : "none below lambda_max");
    return 0;
}

int cmd_parabolic(const RunConfigFile& cfg) {
    Grid g = make_grid(cfg);
    auto [traj, out] = parabolic_run(make_parabolic(cfg, g));
    fs::create_directories(cfg.output_dir);
    write_trajectory_csv(cfg.output_dir + "/trajectory.csv", traj);
    write_profile_csv(cfg.output_dir + "/u_final.csv", g, traj.final_state);
    emit_snapshots(cfg, g, traj, out, cfg.output_dir);
    json res;
    res["outcome"] = outcome_json(out);
    res["min_u_final"] = traj.samples.empty() ? 0.0 : traj.samples.back().min_u;
    res["steps"] = traj.step_dt.size();
    write_report(cfg, "parabolic", res);
    std::printf("parabolic lambda=%s outcome=%s t=%s min_u=%s\n",
                format_double(cfg.lambda).c_str(), to_string(out.kind),
                format_double(out.t_event).c_str(),
                format_double(res["min_u_final"].get<double>()).c_str());
    return 0;
}

int cmd_hyperbolic(const RunConfigFile& cfg) {
    Grid g = make_grid(cfg);
    auto [traj, out] = hyperbolic_run(make_hyperbolic(cfg, g));
    fs::create_directories(cfg.output_dir);
    write_trajectory_csv(cfg.output_dir + "/trajectory.csv", traj,
                         /*hyperbolic=*/true);
    write_profile_csv(cfg.output_dir + "/u_final.csv", g, traj.final_state);
    emit_snapshots(cfg, g, traj, out, cfg.output_dir);
    json res;
    res["outcome"] = outcome_json(out);
    res["min_u_final"] = traj.samples.empty() ? 0.0 : traj.samples.back().min_u;
    res["steps"] = traj.step_dt.size();
    write_report(cfg, "hyperbolic", res);
    std::printf("hyperbolic lambda=%s outcome=%s t=%s min_u=%s\n",
                format_double(cfg.lambda).c_str(), to_string(out.kind),
                format_double(out.t_event).c_str(),
                format_double(res["min_u_final"].get<double>()).c_str());
    return 0;
}

int cmd_pullin(RunConfigFile cfg, const std::string& kase,
               std::optional<double> lo_flag, std::optional<double> hi_flag,
               bool have_config) {
    // Case presets follow the fixed-parameter studies; an explicit config
    // or flags override them.
    double lo, hi;
    ThresholdResult r;
    if (kase == "parabolic") {
        if (!have_config) {
            cfg.B = 0.01; cfg.T = 1.0; cfg.t_end = 200.0;
        }
        lo = lo_flag.value_or(0.35);
        hi = hi_flag.value_or(0.60);
        Grid g = make_grid(cfg);
        ParabolicRunConfig base = make_parabolic(cfg, g);
        r = pullin_bisect(
            ModelKind::Parabolic,
            [&](double lam) { return classify_parabolic(base, lam); }, lo, hi);
    } else {
        if (!have_config) {
            cfg.B = 1.0; cfg.T = 1.0; cfg.t_end = 50.0; cfg.dt = 5e-4;
        }
        cfg.model = "hyperbolic";
        lo = lo_flag.value_or(3.8);
        hi = hi_flag.value_or(4.8);
        Grid g = make_grid(cfg);
        HyperbolicRunConfig base = make_hyperbolic(cfg, g);
        r = pullin_bisect(
            ModelKind::Hyperbolic,
            [&](double lam) { return classify_hyperbolic(base, lam); }, lo, hi);
    }
    json res;
    res["model"] = to_string(r.model_kind);
    res["lambda_star"] = r.lambda_star;
    res["lo"] = r.lo;
    res["hi"] = r.hi;
    res["timeout_flagged"] = r.timeout_flagged;
    json runs = json::array();
    for (const auto& [lam, out] : r.runs) {
        json e;
        e["lambda"] = lam;
        e["outcome"] = outcome_json(out);
        runs.push_back(e);
    }
    res["runs"] = runs;
    write_report(cfg, "pullin", res);
    std::printf("pullin case=%s lambda_star=%s bracket=[%s,%s]%s\n",
                kase.c_str(), format_double(r.lambda_star).c_str(),
                format_double(r.lo).c_str(), format_double(r.hi).c_str(),
                r.timeout_flagged ? " (timeouts classed stabilized)" : "");
    return 0;
}

int cmd_sweep(const RunConfigFile& cfg, const std::vector<double>& lambdas,
              const std::vector<double>& times) {
    Grid g = make_grid(cfg);
    SweepTable table;
    if (cfg.model == "hyperbolic")
        table = lambda_sweep_hyperbolic(make_hyperbolic(cfg, g), lambdas, times);
    else
        table = lambda_sweep_parabolic(make_parabolic(cfg, g), lambdas, times);
    MonotonicityReport rep = monotonicity_report(table);

    fs::create_directories(cfg.output_dir);
    std::ofstream os(cfg.output_dir + "/sweep.csv");
    os << "lambda,outcome,t_event";
    for (double t : times) os << ",u_probe_t" << format_double(t);
    os << "\n";
    for (const auto& e : table.entries) {
        os << format_double(e.lambda) << ',' << to_string(e.outcome.kind)
           << ',' << format_double(e.outcome.t_event);
        for (double v : e.probe_at_times) os << ',' << format_double(v);
        os << "\n";
    }
    os.close();

    json res;
    res["times"] = times;
    json entries = json::array();
    for (const auto& e : table.entries) {
        json je;
        je["lambda"] = e.lambda;
        je["outcome"] = outcome_json(e.outcome);
        je["u_probe_at_times"] = e.probe_at_times;
        entries.push_back(je);
    }
    res["entries"] = entries;
    json mono;
    mono["checks"] = rep.checks;
    json viols = json::array();
    for (const auto& v : rep.violations) {
        json jv;
        jv["lambda_lo"] = v.lambda_lo;
        jv["lambda_hi"] = v.lambda_hi;
        jv["t"] = v.t;
        jv["delta"] = v.delta;
        viols.push_back(jv);
    }
    mono["violations"] = viols;
    res["monotonicity"] = mono;
    write_report(cfg, "sweep", res);
    std::printf("sweep model=%s lambdas=%zu monotonicity_violations=%zu/%d\n",
                cfg.model.c_str(), lambdas.size(), rep.violations.size(),
                rep.checks);
    return 0;
}

int cmd_rate(const RunConfigFile& cfg) {
    Grid g = make_grid(cfg);
    OperatorMatrix K = assemble_operator(g, cfg.B, cfg.T);
    SteadySolution psi = solve_steady(make_params(cfg), g, K,
                                      Field(g.interior_count(), 0.0));
    if (!psi.newton.converged) {
        std::printf("rate lambda=%s FAILED: no steady state (above the fold?)\n",
                    format_double(cfg.lambda).c_str());
        return 2;
    }
    ParabolicRunConfig rc = make_parabolic(cfg, g);
    rc.steady_ref = &psi.psi;
    auto [traj, out] = parabolic_run(rc);
    RateFit f = fit_rate(traj);
    fs::create_directories(cfg.output_dir);
    write_trajectory_csv(cfg.output_dir + "/trajectory.csv", traj);
    json res;
    res["outcome"] = outcome_json(out);
    res["gamma_hat"] = f.gamma_hat;
    res["power_r_squared"] = f.r_squared;
    res["exponential_rate"] = f.alt_exponential_rate;
    res["exp_r_squared"] = f.exp_r_squared;
    res["t_window"] = {f.t_lo, f.t_hi};
    res["sample_count"] = f.sample_count;
    res["final_dist_to_steady"] =
        traj.samples.empty() ? 0.0 : traj.samples.back().dist_to_steady;
    write_report(cfg, "rate", res);
    std::printf("rate lambda=%s exp_rate=%s (r2=%s) gamma_hat=%s (r2=%s)\n",
                format_double(cfg.lambda).c_str(),
                format_double(f.alt_exponential_rate).c_str(),
                format_double(f.exp_r_squared).c_str(),
                format_double(f.gamma_hat).c_str(),
                format_double(f.r_squared).c_str());
    return 0;
}

int cmd_ls_exponent(const RunConfigFile& cfg) {
    Grid g = make_grid(cfg);
    OperatorMatrix K = assemble_operator(g, cfg.B, cfg.T);
    Params p = make_params(cfg);
    SteadySolution psi =
        solve_steady(p, g, K, Field(g.interior_count(), 0.0));
    if (!psi.newton.converged) {
        std::printf("ls-exponent lambda=%s FAILED: no steady state\n",
                    format_double(cfg.lambda).c_str());
        return 2;
    }
    RunConfigFile run_cfg = cfg;
    if (run_cfg.snapshot_times.empty())
        for (int k = 0; k < 60; ++k)
            run_cfg.snapshot_times.push_back(0.25 + 0.1 * k);
    LSFit f;
    if (cfg.model == "hyperbolic") {
        auto [traj, out] = hyperbolic_run(make_hyperbolic(run_cfg, g));
        f = estimate_ls_exponent_hyperbolic(traj, psi, p, g, K);
    } else {
        auto [traj, out] = parabolic_run(make_parabolic(run_cfg, g));
        f = estimate_ls_exponent_parabolic(traj, psi, p, g, K);
    }
    json res;
    res["slope"] = f.slope;
    res["theta_hat"] = f.theta_hat;
    res["sample_count"] = f.sample_count;
    res["r_squared"] = f.r_squared;
    res["abs_de_range"] = {f.min_abs_de, f.max_abs_de};
    write_report(cfg, "ls-exponent", res);
    std::printf("ls-exponent model=%s lambda=%s slope=%s theta=%s (n=%d)\n",
                cfg.model.c_str(), format_double(cfg.lambda).c_str(),
                format_double(f.slope).c_str(),
                format_double(f.theta_hat).c_str(), f.sample_count);
    return 0;
}

// Figure presets: the fixed-parameter studies on Omega = (-1,1), u0 = 0.
// Parabolic: (B,T) = (0.01,1), lambda = 0.04539 k, profiles at
// t in {0.5, 78.39, 10000}.  Hyperbolic: (B,T) = (1,1), u1 = 0,
// lambda = 0.42864 k, profiles at t in {0.4, 2.5, 10000}.  Runs that
// stabilize early emit the (stationary) final profile for later times;
// quenched runs only emit the times they reach.
int cmd_figures(const std::string& kase, const Overrides& ov) {
    RunConfigFile cfg;
    cfg.output_dir = ov.out.value_or("out");
    cfg.N = ov.N.value_or(256);
    std::vector<double> lambdas;
    if (kase == "parabolic") {
        cfg.model = "parabolic";
        cfg.B = 0.01;
        cfg.T = 1.0;
        cfg.dt = ov.dt.value_or(1e-3);
        cfg.t_end = ov.t_end.value_or(500.0);
        cfg.snapshot_times = {0.5, 78.39, 10000.0};
        for (int k = 1; k <= 10; ++k) lambdas.push_back(0.04539 * k);
    } else {
        cfg.model = "hyperbolic";
        cfg.B = 1.0;
        cfg.T = 1.0;
        cfg.dt = ov.dt.value_or(1e-3);
        cfg.t_end = ov.t_end.value_or(200.0);
        cfg.snapshot_times = {0.4, 2.5, 10000.0};
        for (int k = 1; k <= 10; ++k) lambdas.push_back(0.42864 * k);
    }
    cfg.validate();
    Grid g = make_grid(cfg);

    json cases = json::array();
    for (double lam : lambdas) {
        RunConfigFile run_cfg = cfg;
        run_cfg.lambda = lam;
        std::string dir =
            cfg.output_dir + "/" + kase + "_lambda" + format_double(lam);
        Trajectory traj;
        RunOutcome out;
        if (cfg.model == "hyperbolic")
            std::tie(traj, out) = hyperbolic_run(make_hyperbolic(run_cfg, g));
        else
            std::tie(traj, out) = parabolic_run(make_parabolic(run_cfg, g));
        emit_snapshots(run_cfg, g, traj, out, dir);
        write_trajectory_csv(dir + "/trajectory.csv", traj,
                             cfg.model == "hyperbolic");
        json jc;
        jc["lambda"] = lam;
        jc["outcome"] = outcome_json(out);
        jc["dir"] = dir;
        cases.push_back(jc);
        std::printf("figures case=%s lambda=%s outcome=%s t=%s\n",
                    kase.c_str(), format_double(lam).c_str(),
                    to_string(out.kind), format_double(out.t_event).c_str());
    }
    json res;
    res["case"] = kase;
    res["snapshot_times"] = cfg.snapshot_times;
    res["cases"] = cases;
    write_report(cfg, "figures", res);
    std::printf("figures case=%s done: %zu lambda values under %s\n",
                kase.c_str(), lambdas.size(), cfg.output_dir.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mems4: fourth-order MEMS equation laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides ov;
    std::string kase = "parabolic";
    std::optional<double> lo_flag, hi_flag;
    double lambda_max = 1.0, dlambda = 0.01;
    std::vector<double> lambdas{0.1, 0.2, 0.3, 0.4};
    std::vector<double> times{1.0, 5.0, 20.0};

    auto* c_steady = app.add_subcommand("steady", "solve the stationary state");
    add_common_options(c_steady, config_path, ov);

    auto* c_branch =
        app.add_subcommand("branch", "continuation along the minimal branch");
    add_common_options(c_branch, config_path, ov);
    c_branch->add_option("--lambda-max", lambda_max, "continuation upper bound");
    c_branch->add_option("--dlambda", dlambda, "continuation step");

    auto* c_para = app.add_subcommand("parabolic", "parabolic evolution run");
    add_common_options(c_para, config_path, ov);

    auto* c_hyper = app.add_subcommand("hyperbolic", "hyperbolic evolution run");
    add_common_options(c_hyper, config_path, ov);

    auto* c_pullin =
        app.add_subcommand("pullin", "bisect the dynamic pull-in threshold");
    add_common_options(c_pullin, config_path, ov);
    c_pullin->add_option("--case", kase, "parabolic | hyperbolic")
        ->check(CLI::IsMember({"parabolic", "hyperbolic"}));
    c_pullin->add_option("--lo", lo_flag, "bracket lower bound");
    c_pullin->add_option("--hi", hi_flag, "bracket upper bound");

    auto* c_sweep = app.add_subcommand("sweep", "lambda sweep with probes");
    add_common_options(c_sweep, config_path, ov);
    c_sweep->add_option("--lambdas", lambdas, "lambda values")->delimiter(',');
    c_sweep->add_option("--times", times, "probe times")->delimiter(',');

    auto* c_rate =
        app.add_subcommand("rate", "fit the convergence rate to steady state");
    add_common_options(c_rate, config_path, ov);

    auto* c_ls = app.add_subcommand("ls-exponent",
                                    "estimate the Lojasiewicz exponent");
    add_common_options(c_ls, config_path, ov);

    auto* c_fig = app.add_subcommand("figures", "fixed-parameter study presets");
    c_fig->add_option("--case", kase, "parabolic | hyperbolic")
        ->required()
        ->check(CLI::IsMember({"parabolic", "hyperbolic"}));
    c_fig->add_option("--N", ov.N, "override cell count");
    c_fig->add_option("--dt", ov.dt, "override time step");
    c_fig->add_option("--t-end", ov.t_end, "override final time");
    c_fig->add_option("--out", ov.out, "override output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (c_fig->parsed()) return cmd_figures(kase, ov);
        RunConfigFile cfg = load_config(config_path, ov);
        if (c_steady->parsed()) return cmd_steady(cfg);
        if (c_branch->parsed()) return cmd_branch(cfg, lambda_max, dlambda);
        if (c_para->parsed()) return cmd_parabolic(cfg);
        if (c_hyper->parsed()) {
            cfg.model = "hyperbolic";
            return cmd_hyperbolic(cfg);
        }
        if (c_pullin->parsed())
            return cmd_pullin(cfg, kase, lo_flag, hi_flag,
                              !config_path.empty());
        if (c_sweep->parsed()) return cmd_sweep(cfg, lambdas, times);
        if (c_rate->parsed()) return cmd_rate(cfg);
        if (c_ls->parsed()) return cmd_ls_exponent(cfg);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 2;
    }
    return 1;
}
