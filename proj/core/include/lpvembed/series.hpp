#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lpvembed/system.hpp"
#include "lpvembed/trajectory.hpp"
#include "lpvembed/types.hpp"

namespace lpv {

/// The coefficient data matrix: column k is the row-wise vectorization of
/// L(alpha(kT)). Rows map to matrix entries through the row-major index map.
struct CoefficientSeries {
    Matrix data;  // n_gamma x N
    int n_x = 0;
    int n_u = 0;
    int n_y = 0;

    int rows() const { return static_cast<int>(data.rows()); }
    int count() const { return static_cast<int>(data.cols()); }
    int grid_cols() const { return n_x + n_u; }

    std::pair<int, int> entry_of_row(int r) const {
        return {r / grid_cols(), r % grid_cols()};
    }
    int row_of_entry(int i, int j) const { return i * grid_cols() + j; }
};

/// Evaluates L along the dataset and vectorizes each sample. Evaluation
/// failures are rethrown with the offending entry and sample identified.
CoefficientSeries build_series(const SystemDescription& sys, const TrajectoryDataset& data,
                               EvalDiagnostics* diag = nullptr);

/// Standard-deviation convention for the normalization.
enum class StdMode : std::uint8_t {
    Sample,      // divide by N-1
    Population,  // divide by N
};

/// Per-row affine normalization to zero mean / unit deviation over the
/// dataset, with rows of (near-)constant value masked out as inactive.
/// Inactive rows are excluded from the reduction and folded verbatim into the
/// constant part of any model assembled from this normalizer.
struct Normalizer {
    Vector means;
    Vector stds;
    std::vector<std::uint8_t> active;
    StdMode mode = StdMode::Sample;
    int n_x = 0;
    int n_u = 0;
    int n_y = 0;

    int size() const { return static_cast<int>(means.size()); }
    int active_count() const;
    std::vector<int> active_rows() const;
    /// Diagonal of the weighting W restricted to active rows (1/std).
    Vector active_weights() const;
    /// Normalizes a single coefficient vector, active rows only.
    Vector project(const Vector& gamma) const;
};

/// Fits per-row mean and standard deviation; rows with std below
/// eps_sigma * max(1, |mean|) become inactive.
Normalizer fit_normalizer(const CoefficientSeries& series, double eps_sigma = 1e-12,
                          StdMode mode = StdMode::Sample);

/// Applies the normalization; output has one row per active row.
Matrix normalize(const Normalizer& nrm, const CoefficientSeries& series);

/// Inverse of normalize: rescales active rows and restores inactive rows at
/// their constant means.
CoefficientSeries denormalize(const Normalizer& nrm, const Matrix& normalized);

}  // namespace lpv
