#pragma once

#include <iosfwd>

#include "lpvembed/model.hpp"
#include "lpvembed/system.hpp"
#include "lpvembed/types.hpp"

namespace lpv {

/// One fixed-step integration run. For a completed run, states holds
/// horizon+1 rows and outputs/inputs (and theta, for self-scheduled runs)
/// hold horizon rows; a diverged run is truncated at the offending step and
/// flagged.
struct SimulationRun {
    double step = 0.0;
    int horizon = 0;
    Matrix states;   // (horizon+1) x n_x
    Matrix outputs;  // horizon x n_y, evaluated at step starts
    Matrix inputs;   // horizon x n_u, held constant within each step
    Matrix theta;    // horizon x n_theta for LPV runs, otherwise empty
    long out_of_region = 0;
    bool diverged = false;
    int diverged_at = -1;
};

/// Optional linear state feedback closing the loop as u_k = r_k - G x_k at
/// every step start (zero-order hold within the step); r is the supplied
/// input signal. With vertex_gains set (one gain per region corner, corner
/// mask bit i selecting the upper bound of axis i), G is blended
/// multilinearly from the corner gains at the current scheduling point. No
/// controller is synthesized here; the gains are user supplied.
struct StateFeedback {
    Matrix gain;                       // n_u x n_x, used when vertex_gains is empty
    std::vector<Matrix> vertex_gains;  // 2^n_theta gains in corner-mask order
};

/// Classical 4th-order fixed-step integration of the source system with the
/// evaluation point rebuilt from (x, u) at every stage. Inputs may have
/// fewer rows than steps; the last row is held. Scheduled (per-vertex)
/// feedback gains need a model to compute theta from; pass it as gain_model
/// (theta is evaluated at the reference input, which breaks the algebraic
/// loop when the coefficient map depends on u).
SimulationRun simulate_nl(const SystemDescription& sys, const Vector& x0, const Matrix& input,
                          double step, int steps, double divergence_cap = 1e9,
                          const StateFeedback* feedback = nullptr,
                          const AffineLpvModel* gain_model = nullptr);

/// Same integrator for the self-scheduled model: at every stage theta is
/// recomputed from the current (x, u) through the stored scheduling map
/// (composed with the source system's coefficient map when it lives on
/// gamma). Scheduling samples outside the model region are counted, not
/// rejected.
SimulationRun simulate_lpv(const AffineLpvModel& model, const SystemDescription& sys,
                           const Vector& x0, const Matrix& input, double step, int steps,
                           double divergence_cap = 1e9,
                           const StateFeedback* feedback = nullptr);

/// Root-mean-square differences per state and output channel.
struct RunComparison {
    Vector state_rmse;
    Vector output_rmse;
};
RunComparison compare_runs(const SimulationRun& a, const SimulationRun& b);

/// CSV export: t, states, then outputs/inputs/theta where defined.
void save_run(const SimulationRun& run, std::ostream& out);

}  // namespace lpv
