#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "mems4/grid.hpp"

namespace mems4 {

struct TrajectorySample {
    double t = 0.0;
    double min_u = 0.0;
    double u_probe = 0.0;
    double l2_ut = 0.0;   // difference quotient (parabolic) / ||v|| (hyperbolic)
    double energy = 0.0;
    double dist_to_steady = std::numeric_limits<double>::quiet_NaN();
    double l2_v = std::numeric_limits<double>::quiet_NaN();  // hyperbolic only
};

// Time series of scalar diagnostics plus optional field snapshots.  The
// step_* arrays hold one entry per accepted step and feed the energy
// identity checks, which need every step rather than the sampled rows.
struct Trajectory {
    std::vector<TrajectorySample> samples;
    std::vector<std::pair<double, Field>> snapshots;

    std::vector<double> step_t;        // time after the step
    std::vector<double> step_dt;
    std::vector<double> step_energy;   // E after the step (E at t=0 in energy0)
    std::vector<double> step_denergy;  // E_{n+1} - E_n via the pairwise form
    std::vector<double> step_rate_l2;  // ||(u_{n+1}-u_n)/dt||_{L2}
    std::vector<double> step_scheme_energy;  // hyperbolic staggered energy
    std::vector<double> step_identity_residual;  // |dE/dt + ||u_t||^2| per step
    double energy0 = 0.0;
    Field final_state;  // the field at the run's last accepted step
};

enum class OutcomeKind { Stabilized, Quenched, Timeout };

struct RunOutcome {
    OutcomeKind kind = OutcomeKind::Timeout;
    double t_event = 0.0;
    // ||u_t|| at stabilization, min u at quench, NaN for timeout.
    double certificate = std::numeric_limits<double>::quiet_NaN();
    bool dt_exhausted = false;  // quench declared after dt-halving ran out
};

inline const char* to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Stabilized: return "Stabilized";
        case OutcomeKind::Quenched: return "Quenched";
        default: return "Timeout";
    }
}

}  // namespace mems4
