#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "mems4/hyperbolic.hpp"
#include "mems4/parabolic.hpp"
#include "mems4/steady.hpp"

namespace mems4 {

enum class ModelKind { Parabolic, Hyperbolic };

inline const char* to_string(ModelKind k) {
    return k == ModelKind::Parabolic ? "parabolic" : "hyperbolic";
}

// Sweep/bisection members are independent jobs; MEMS4_THREADS caps the
// fan-out (default: hardware concurrency).
inline int sweep_thread_cap() {
    if (const char* env = std::getenv("MEMS4_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

template <class F>
void parallel_for(int count, F&& body) {
    int threads = std::min(sweep_thread_cap(), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    for (int tid = 0; tid < threads; ++tid)
        pool.emplace_back([&, tid] {
            for (int i = tid; i < count; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

struct ThresholdResult {
    double lambda_star = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::pair<double, RunOutcome>> runs;
    ModelKind model_kind = ModelKind::Parabolic;
    bool timeout_flagged = false;  // a Timeout was classed as Stabilized
};

// Bisect the dynamic pull-in threshold given a classifier lambda -> outcome.
// Timeout counts as Stabilized for bracketing purposes and is flagged.
inline ThresholdResult pullin_bisect(
    ModelKind kind, const std::function<RunOutcome(double)>& classify,
    double lo, double hi, double rel_tol = 1e-3) {
    ThresholdResult res;
    res.model_kind = kind;

    auto stabilized = [&](const RunOutcome& o) {
        if (o.kind == OutcomeKind::Timeout) res.timeout_flagged = true;
        return o.kind != OutcomeKind::Quenched;
    };

    RunOutcome olo = classify(lo);
    res.runs.emplace_back(lo, olo);
    RunOutcome ohi = classify(hi);
    res.runs.emplace_back(hi, ohi);
    if (!stabilized(olo))
        throw BracketInvalid("pullin_bisect: outcome(lo) = " +
                             std::string(to_string(olo.kind)));
    if (stabilized(ohi) && ohi.kind != OutcomeKind::Timeout)
        throw BracketInvalid("pullin_bisect: outcome(hi) = " +
                             std::string(to_string(ohi.kind)));
    if (ohi.kind != OutcomeKind::Quenched)
        throw BracketInvalid("pullin_bisect: outcome(hi) not Quenched");

    while ((hi - lo) / lo > rel_tol) {
        double mid = 0.5 * (lo + hi);
        RunOutcome om = classify(mid);
        res.runs.emplace_back(mid, om);
        if (stabilized(om))
            lo = mid;
        else
            hi = mid;
    }
    res.lo = lo;
    res.hi = hi;
    res.lambda_star = 0.5 * (lo + hi);
    std::sort(res.runs.begin(), res.runs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return res;
}

inline RunOutcome classify_parabolic(const ParabolicRunConfig& base,
                                     double lambda) {
    ParabolicRunConfig cfg = base;
    cfg.params.lambda = lambda;
    return parabolic_run(cfg).second;
}

inline RunOutcome classify_hyperbolic(const HyperbolicRunConfig& base,
                                      double lambda) {
    HyperbolicRunConfig cfg = base;
    cfg.params.lambda = lambda;
    return hyperbolic_run(cfg).second;
}

struct SweepEntry {
    double lambda = 0.0;
    RunOutcome outcome;
    std::vector<double> probe_at_times;  // aligned with SweepTable::times
    Trajectory trajectory;
};

struct SweepTable {
    std::vector<double> times;
    std::vector<SweepEntry> entries;  // sorted by lambda
};

// Linear interpolation of the probe trace at a requested time; clamps to
// the final recorded sample once the run has ended (steady value).
inline double probe_at(const Trajectory& traj, double t) {
    const auto& s = traj.samples;
    if (s.empty()) return 0.0;
    if (t <= s.front().t) return s.front().u_probe;
    if (t >= s.back().t) return s.back().u_probe;
    auto it = std::lower_bound(
        s.begin(), s.end(), t,
        [](const TrajectorySample& a, double tv) { return a.t < tv; });
    const auto& b = *it;
    const auto& a = *(it - 1);
    double w = (t - a.t) / (b.t - a.t);
    return a.u_probe + w * (b.u_probe - a.u_probe);
}

template <class Config, class RunFn>
SweepTable lambda_sweep(const Config& base, const std::vector<double>& lambdas,
                        const std::vector<double>& times, RunFn&& run_one) {
    SweepTable table;
    table.times = times;
    table.entries.resize(lambdas.size());
    parallel_for(static_cast<int>(lambdas.size()), [&](int i) {
        Config cfg = base;
        cfg.params.lambda = lambdas[i];
        auto [traj, out] = run_one(cfg);
        SweepEntry& e = table.entries[i];
        e.lambda = lambdas[i];
        e.outcome = out;
        for (double t : times) e.probe_at_times.push_back(probe_at(traj, t));
        e.trajectory = std::move(traj);
    });
    std::sort(table.entries.begin(), table.entries.end(),
              [](const SweepEntry& a, const SweepEntry& b) {
                  return a.lambda < b.lambda;
              });
    return table;
}

inline SweepTable lambda_sweep_parabolic(const ParabolicRunConfig& base,
                                         const std::vector<double>& lambdas,
                                         const std::vector<double>& times) {
    return lambda_sweep(base, lambdas, times,
                        [](const ParabolicRunConfig& c) { return parabolic_run(c); });
}

inline SweepTable lambda_sweep_hyperbolic(const HyperbolicRunConfig& base,
                                          const std::vector<double>& lambdas,
                                          const std::vector<double>& times) {
    return lambda_sweep(base, lambdas, times,
                        [](const HyperbolicRunConfig& c) { return hyperbolic_run(c); });
}

struct MonotonicityViolation {
    double lambda_lo = 0.0;
    double lambda_hi = 0.0;
    double t = 0.0;
    double delta = 0.0;  // u(lambda_hi) - u(lambda_lo), positive = violation
};

struct MonotonicityReport {
    int checks = 0;
    std::vector<MonotonicityViolation> violations;
};

// Checks u(t, probe; lambda_i) >= u(t, probe; lambda_{i+1}) - tol across
// the sweep.  Violations are data, not errors.
inline MonotonicityReport monotonicity_report(const SweepTable& sweep,
                                              double tol = 1e-10) {
    MonotonicityReport rep;
    for (std::size_t i = 0; i + 1 < sweep.entries.size(); ++i) {
        const SweepEntry& a = sweep.entries[i];
        const SweepEntry& b = sweep.entries[i + 1];
        for (std::size_t k = 0; k < sweep.times.size(); ++k) {
            ++rep.checks;
            double d = b.probe_at_times[k] - a.probe_at_times[k];
            if (d > tol)
                rep.violations.push_back(
                    {a.lambda, b.lambda, sweep.times[k], d});
        }
    }
    return rep;
}

struct RateFit {
    double gamma_hat = 0.0;  // d(t) ~ C (1+t)^-gamma
    double c_hat = 0.0;
    double t_lo = 0.0;
    double t_hi = 0.0;
    double r_squared = 0.0;
    double alt_exponential_rate = 0.0;  // slope of log d vs t (negative)
    double exp_r_squared = 0.0;
    int sample_count = 0;
};

namespace detail {

struct LineFit {
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

inline LineFit least_squares(const std::vector<double>& x,
                             const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i]; sy += y[i];
        sxx += x[i] * x[i]; sxy += x[i] * y[i]; syy += y[i] * y[i];
    }
    double dn = static_cast<double>(n);
    double vx = sxx - sx * sx / dn;
    double vy = syy - sy * sy / dn;
    double cv = sxy - sx * sy / dn;
    LineFit f;
    f.slope = cv / vx;
    f.intercept = (sy - f.slope * sx) / dn;
    f.r2 = vy > 0.0 ? cv * cv / (vx * vy) : 1.0;
    return f;
}

}  // namespace detail

// Fit |u - psi|(t) against both C (1+t)^-gamma and C e^{rt} over the last
// decade of t before the distance floor; both fits are always reported.
inline RateFit fit_rate(const std::vector<double>& t,
                        const std::vector<double>& dist,
                        double floor = 1e-12) {
    std::vector<double> tt, dd;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (dist[i] > floor) {
            tt.push_back(t[i]);
            dd.push_back(dist[i]);
        }
    if (tt.empty()) throw InsufficientSamples("fit_rate: no samples above floor");
    double t_hi = tt.back();
    double t_lo = t_hi / 10.0;
    std::vector<double> lx, ly, ex;
    for (std::size_t i = 0; i < tt.size(); ++i) {
        if (tt[i] < t_lo) continue;
        lx.push_back(std::log1p(tt[i]));
        ex.push_back(tt[i]);
        ly.push_back(std::log(dd[i]));
    }
    if (lx.size() < 20)
        throw InsufficientSamples("fit_rate: fewer than 20 samples in window");
    detail::LineFit pw = detail::least_squares(lx, ly);
    detail::LineFit eg = detail::least_squares(ex, ly);
    RateFit f;
    f.gamma_hat = -pw.slope;
    f.c_hat = std::exp(pw.intercept);
    f.r_squared = pw.r2;
    f.alt_exponential_rate = eg.slope;
    f.exp_r_squared = eg.r2;
    f.t_lo = t_lo;
    f.t_hi = t_hi;
    f.sample_count = static_cast<int>(lx.size());
    return f;
}

inline RateFit fit_rate(const Trajectory& traj) {
    std::vector<double> t, d;
    for (const auto& s : traj.samples)
        if (std::isfinite(s.dist_to_steady)) {
            t.push_back(s.t);
            d.push_back(s.dist_to_steady);
        }
    return fit_rate(t, d);
}

struct LSFit {
    double theta_hat = 0.0;
    double slope = 0.0;  // = 1 - theta_hat
    int sample_count = 0;
    double min_abs_de = 0.0, max_abs_de = 0.0;
    double r_squared = 0.0;
};

// Regress log ||gradient|| against log |E - E(psi)|; the slope estimates
// 1 - theta in the Lojasiewicz inequality.  The decade nearest the
// machine floor is excluded as rounding-dominated.
inline LSFit estimate_ls_exponent(const std::vector<double>& grad_norm,
                                  const std::vector<double>& delta_e,
                                  double floor = 1e-13) {
    std::vector<double> lx, ly;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < grad_norm.size(); ++i) {
        double de = std::abs(delta_e[i]);
        if (de <= 10.0 * floor || grad_norm[i] <= 0.0) continue;
        lx.push_back(std::log(de));
        ly.push_back(std::log(grad_norm[i]));
        lo = lo == 0.0 ? de : std::min(lo, de);
        hi = std::max(hi, de);
    }
    if (lx.size() < 20)
        throw InsufficientSamples("estimate_ls_exponent: fewer than 20 samples");
    detail::LineFit f = detail::least_squares(lx, ly);
    LSFit out;
    out.slope = f.slope;
    out.theta_hat = 1.0 - f.slope;
    out.sample_count = static_cast<int>(lx.size());
    out.min_abs_de = lo;
    out.max_abs_de = hi;
    out.r_squared = f.r2;
    return out;
}

// Gradient/energy pairs for the parabolic LS estimate, from trajectory
// snapshots against a converged steady state.
inline LSFit estimate_ls_exponent_parabolic(const Trajectory& traj,
                                            const SteadySolution& psi,
                                            const Params& p, const Grid& g,
                                            const OperatorMatrix& K) {
    std::vector<double> gn, de;
    for (const auto& [t, u] : traj.snapshots) {
        gn.push_back(l2_norm(steady_residual(u, p, K), g));
        de.push_back(energy_difference_parabolic(u, psi.psi, p, g, K));
    }
    return estimate_ls_exponent(gn, de);
}

// Hyperbolic variant: the gradient is measured in the V' dual norm.
inline LSFit estimate_ls_exponent_hyperbolic(const Trajectory& traj,
                                             const SteadySolution& psi,
                                             const Params& p, const Grid& g,
                                             const OperatorMatrix& K) {
    std::vector<double> gn, de;
    for (const auto& [t, u] : traj.snapshots) {
        gn.push_back(dual_norm(steady_residual(u, p, K), g, K));
        de.push_back(energy_difference_parabolic(u, psi.psi, p, g, K));
    }
    return estimate_ls_exponent(gn, de);
}

struct QuenchPoint {
    double lambda = 0.0;
    std::optional<double> t_quench;
};

struct QuenchMonotonicityReport {
    std::vector<QuenchPoint> points;  // sorted by lambda
    bool strictly_decreasing = true;  // over the present quench times
};

inline QuenchMonotonicityReport quench_monotonicity(
    const std::function<std::optional<double>(double)>& quench_of,
    std::vector<double> lambdas) {
    std::sort(lambdas.begin(), lambdas.end());
    QuenchMonotonicityReport rep;
    rep.points.resize(lambdas.size());
    parallel_for(static_cast<int>(lambdas.size()), [&](int i) {
        rep.points[i] = {lambdas[i], quench_of(lambdas[i])};
    });
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& pt : rep.points) {
        if (!pt.t_quench) continue;  // below threshold: excluded
        if (*pt.t_quench >= prev) rep.strictly_decreasing = false;
        prev = *pt.t_quench;
    }
    return rep;
}

}  // namespace mems4
