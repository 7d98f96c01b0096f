#include "lpvembed/series.hpp"

#include <cmath>
#include <string>

namespace lpv {

CoefficientSeries build_series(const SystemDescription& sys, const TrajectoryDataset& data,
                               EvalDiagnostics* diag) {
    if (data.dim() != sys.n_alpha())
        throw DimensionError("build_series: dataset has " + std::to_string(data.dim()) +
                             " columns, system declares " + std::to_string(sys.n_alpha()) +
                             " variables");
    CoefficientSeries series;
    series.n_x = sys.n_x;
    series.n_u = sys.n_u;
    series.n_y = sys.n_y;
    series.data.resize(sys.rows() * sys.cols(), data.count());
    Vector alpha(sys.n_alpha());
    for (int k = 0; k < data.count(); ++k) {
        alpha = data.samples.row(k).transpose();
        if (diag && sys.alpha_box && !sys.alpha_box->contains(alpha)) ++diag->out_of_box;
        const std::span<const double> view(alpha.data(), static_cast<std::size_t>(alpha.size()));
        for (int i = 0; i < sys.rows(); ++i)
            for (int j = 0; j < sys.cols(); ++j) {
                try {
                    series.data(series.row_of_entry(i, j), k) = sys.entry(i, j).eval(view);
                } catch (const EvalError& e) {
                    throw EvalError("entry L[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                                    "] at sample " + std::to_string(k) + ": " + e.what());
                }
            }
    }
    return series;
}

int Normalizer::active_count() const {
    int n = 0;
    for (const auto a : active) n += a != 0;
    return n;
}

std::vector<int> Normalizer::active_rows() const {
    std::vector<int> rows;
    rows.reserve(active.size());
    for (int i = 0; i < size(); ++i)
        if (active[static_cast<std::size_t>(i)]) rows.push_back(i);
    return rows;
}

Vector Normalizer::active_weights() const {
    const auto rows = active_rows();
    Vector w(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) w(static_cast<Eigen::Index>(r)) = 1.0 / stds(rows[r]);
    return w;
}

Vector Normalizer::project(const Vector& gamma) const {
    if (gamma.size() != means.size())
        throw DimensionError("Normalizer::project: vector length does not match");
    const auto rows = active_rows();
    Vector out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        out(static_cast<Eigen::Index>(r)) = (gamma(i) - means(i)) / stds(i);
    }
    return out;
}

Normalizer fit_normalizer(const CoefficientSeries& series, double eps_sigma, StdMode mode) {
    const int n = series.rows();
    const int N = series.count();
    if (N < 2) throw DimensionError("fit_normalizer: need at least two samples");

    Normalizer nrm;
    nrm.mode = mode;
    nrm.n_x = series.n_x;
    nrm.n_u = series.n_u;
    nrm.n_y = series.n_y;
    nrm.means.resize(n);
    nrm.stds.resize(n);
    nrm.active.assign(static_cast<std::size_t>(n), 0);

    const double denom = mode == StdMode::Sample ? N - 1.0 : N;
    for (int i = 0; i < n; ++i) {
        // Fixed left-to-right summation keeps results bitwise reproducible.
        double sum = 0.0;
        for (int k = 0; k < N; ++k) sum += series.data(i, k);
        const double mean = sum / N;
        double sq = 0.0;
        for (int k = 0; k < N; ++k) {
            const double d = series.data(i, k) - mean;
            sq += d * d;
        }
        const double std = std::sqrt(sq / denom);
        nrm.means(i) = mean;
        nrm.stds(i) = std;
        nrm.active[static_cast<std::size_t>(i)] = std >= eps_sigma * std::max(1.0, std::abs(mean));
    }
    return nrm;
}

Matrix normalize(const Normalizer& nrm, const CoefficientSeries& series) {
    if (series.rows() != nrm.size())
        throw DimensionError("normalize: series has " + std::to_string(series.rows()) +
                             " rows, normalizer expects " + std::to_string(nrm.size()));
    const auto rows = nrm.active_rows();
    Matrix out(static_cast<Eigen::Index>(rows.size()), series.count());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        out.row(static_cast<Eigen::Index>(r)) =
            (series.data.row(i).array() - nrm.means(i)) / nrm.stds(i);
    }
    return out;
}

CoefficientSeries denormalize(const Normalizer& nrm, const Matrix& normalized) {
    const auto rows = nrm.active_rows();
    if (normalized.rows() != static_cast<Eigen::Index>(rows.size()))
        throw DimensionError("denormalize: matrix has " + std::to_string(normalized.rows()) +
                             " rows, normalizer has " + std::to_string(rows.size()) +
                             " active rows");
    CoefficientSeries series;
    series.n_x = nrm.n_x;
    series.n_u = nrm.n_u;
    series.n_y = nrm.n_y;
    series.data.resize(nrm.size(), normalized.cols());
    for (int i = 0; i < nrm.size(); ++i) series.data.row(i).setConstant(nrm.means(i));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        series.data.row(i) =
            (normalized.row(static_cast<Eigen::Index>(r)).array() * nrm.stds(i) + nrm.means(i));
    }
    return series;
}

}  // namespace lpv
