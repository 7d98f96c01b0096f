#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lpvembed/geometry.hpp"
#include "lpvembed/reduction.hpp"
#include "lpvembed/series.hpp"
#include "lpvembed/system.hpp"
#include "lpvembed/trajectory.hpp"
#include "lpvembed/types.hpp"

namespace lpv {

/// Domain of the stored scheduling map: the vectorized coefficient vector
/// (the standard pipeline) or the raw variable vector (the trajectory-PCA
/// baseline).
enum class MapDomain : std::uint8_t { Gamma, Alpha };

/// Affine LPV model L(theta) = M0 + sum_i theta_i * M[i], together with the
/// affine scheduling map theta = K * gamma + k0 and the admissible region.
/// Immutable; evaluation and scheduling are pure.
struct AffineLpvModel {
    int n_x = 0;
    int n_u = 0;
    int n_y = 0;
    Matrix M0;
    std::vector<Matrix> M;
    Matrix K;
    Vector k0;
    MapDomain map_domain = MapDomain::Gamma;
    SchedulingRegion region;

    // provenance
    Vector singular_values;
    double eta_frobenius = 0.0;
    double eta_sum = 0.0;
    std::string source_digest;

    int n_theta() const { return static_cast<int>(M.size()); }
    int rows() const { return n_x + n_y; }
    int cols() const { return n_x + n_u; }
};

/// Pushes the affine reconstruction theta -> N^{-1}(U_rho R^{-1}(theta))
/// through the reverse vectorization. Constant (inactive) coefficient rows
/// land in M0 only; the scheduling map composes the normalization, the basis
/// projection, and the region alignment into a single (K, k0).
AffineLpvModel assemble(const ReducedBasis& basis, const Normalizer& nrm,
                        const SchedulingRegion& region, std::string source_digest = {});

/// L(theta) as an exact affine combination. Out-of-region theta is allowed;
/// pass out_of_region to learn when that happened.
Matrix evaluate(const AffineLpvModel& model, const Vector& theta,
                bool* out_of_region = nullptr);

/// True when theta lies in the model's scheduling region (1e-9 relative
/// inflation).
bool in_region(const AffineLpvModel& model, const Vector& theta);

/// theta = K * input + k0; the input is a coefficient vector for
/// MapDomain::Gamma models and a variable vector for MapDomain::Alpha.
Vector schedule(const AffineLpvModel& model, const Vector& input);

/// Schedules from the current variable vector, evaluating the coefficient
/// map of the source system when the model's map lives on gamma.
Vector schedule_from_alpha(const AffineLpvModel& model, const SystemDescription& sys,
                           const Vector& alpha);

/// Per-component bounds of d/dt theta over the dataset, by central finite
/// differences (one-sided at the ends).
struct RateBounds {
    Vector lower;
    Vector upper;
};
RateBounds rate_bounds(const AffineLpvModel& model, const SystemDescription& sys,
                       const TrajectoryDataset& data);

/// Frozen-parameter frequency response magnitudes |C (jwI - A)^{-1} B + D|
/// with (A, B, C, D) read from the block partition of L(theta). Frequencies
/// hitting an imaginary-axis eigenvalue of A within 1e-9 are flagged
/// singular and carry NaN magnitudes.
struct FrequencyResponse {
    Vector omegas;
    std::vector<Matrix> magnitudes;       // one n_y x n_u block per frequency
    std::vector<std::uint8_t> singular;   // per-frequency flag
};
FrequencyResponse frozen_frequency_response(const AffineLpvModel& model, const Vector& theta,
                                            const Vector& omegas);
/// Logarithmic default grid, 1e-2 .. 1e3 rad/s, 400 points.
Vector default_frequency_grid();

/// Lossless JSON round trip at full precision; save(load(save(m))) is
/// byte-identical to save(m).
std::string save_model(const AffineLpvModel& model);
AffineLpvModel load_model(const std::string& json_text);
AffineLpvModel load_model_file(const std::string& path);

/// FNV-1a digest of a system description document, recorded in provenance.
std::string source_digest_of(const std::string& canonical_text);

}  // namespace lpv
