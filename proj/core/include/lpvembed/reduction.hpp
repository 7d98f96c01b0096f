#pragma once

#include <string>

#include "lpvembed/series.hpp"
#include "lpvembed/types.hpp"

namespace lpv {

/// Thin SVD of the normalized data matrix, values sorted non-increasing.
struct Decomposition {
    Matrix left_vectors;     // orthonormal columns
    Vector singular_values;  // same count as columns
};

/// Deterministic thin SVD; reconstruction matches the input to 1e-9
/// relative Frobenius.
Decomposition decompose(const Matrix& normalized);

/// The leading left singular vectors, sign-fixed so the largest-magnitude
/// entry of each column is positive (the SVD is otherwise unique only up to
/// per-column sign).
struct ReducedBasis {
    Matrix basis;            // active_rows x n_rho
    Vector singular_values;  // full spectrum kept for reporting

    int order() const { return static_cast<int>(basis.cols()); }
};

ReducedBasis truncate(const Decomposition& dec, int order);

/// Reduced coordinates of the dataset: column k = basis^T N(Gamma(alpha(kT))).
Matrix reduced_coordinates(const ReducedBasis& basis, const Normalizer& nrm,
                           const CoefficientSeries& series);

/// Reduced coordinates of a single coefficient vector.
Vector reduce_coefficients(const ReducedBasis& basis, const Normalizer& nrm, const Vector& gamma);

/// Rank-order accuracy summary. eta_frobenius is the weighted Frobenius norm
/// of the reconstruction residual, computed directly from the data.
/// eta_sqsum = sqrt(sum of squared discarded singular values) and
/// eta_sum = their plain sum; the first equals eta_frobenius by the
/// Eckart-Young identity, the second is reported alongside because both
/// conventions circulate.
struct AccuracyReport {
    Vector singular_values;
    double eta_frobenius = 0.0;
    double eta_sum = 0.0;
    double eta_sqsum = 0.0;
    double captured_energy_ratio = 0.0;
    Vector per_entry_rmse;  // physical units, one entry per coefficient row

    /// Flat `key value` text block.
    std::string to_text() const;
};

AccuracyReport accuracy(const ReducedBasis& basis, const Normalizer& nrm,
                        const CoefficientSeries& series);

/// Smallest order whose captured energy ratio reaches the threshold.
int suggest_order(const Vector& singular_values, double energy_threshold);

}  // namespace lpv
