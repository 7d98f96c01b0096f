#pragma once

#include "lpvembed/model.hpp"
#include "lpvembed/reduction.hpp"

namespace lpv {

/// Comparison method: PCA on the raw variable trajectories themselves
/// (instead of the coefficient trajectories), followed by a least-squares
/// affine fit of every coefficient entry against the reduced variables.
struct BaselineResult {
    AffineLpvModel model;  // map lives on alpha (MapDomain::Alpha)
    AccuracyReport report;
    bool rank_deficient_fit = false;
};

/// The report uses the same accuracy definitions as the main path:
/// eta_frobenius/eta_sqsum = weighted Frobenius norm of the residual,
/// eta_sum = its nuclear norm (these reduce to the discarded-singular-value
/// formulas when the residual comes from an SVD truncation). The model's
/// region is the axis-aligned bound of the reduced variable cloud.
BaselineResult baseline_scheduling_pca(const TrajectoryDataset& data, const SystemDescription& sys,
                                       int order, double eps_sigma = 1e-12,
                                       StdMode mode = StdMode::Sample);

}  // namespace lpv
