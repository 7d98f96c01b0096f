#include "lpvembed/baseline.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace lpv {

BaselineResult baseline_scheduling_pca(const TrajectoryDataset& data, const SystemDescription& sys,
                                       int order, double eps_sigma, StdMode mode) {
    const int N = data.count();
    const int n_alpha = data.dim();
    if (n_alpha != sys.n_alpha())
        throw DimensionError("baseline_scheduling_pca: dataset width does not match the system");
    if (N < 2) throw DimensionError("baseline_scheduling_pca: need at least two samples");

    // Normalize the variable trajectories; constant variables are excluded
    // from the PCA exactly like constant coefficient rows on the main path.
    const Matrix alpha = data.samples.transpose();  // n_alpha x N
    Vector means(n_alpha), stds(n_alpha);
    std::vector<int> active;
    const double denom = mode == StdMode::Sample ? N - 1.0 : N;
    for (int i = 0; i < n_alpha; ++i) {
        double sum = 0.0;
        for (int k = 0; k < N; ++k) sum += alpha(i, k);
        means(i) = sum / N;
        double sq = 0.0;
        for (int k = 0; k < N; ++k) {
            const double d = alpha(i, k) - means(i);
            sq += d * d;
        }
        stds(i) = std::sqrt(sq / denom);
        if (stds(i) >= eps_sigma * std::max(1.0, std::abs(means(i)))) active.push_back(i);
    }
    if (active.empty())
        throw DegenerateDataError("baseline_scheduling_pca: every variable trajectory is constant");
    if (order < 1 || order > static_cast<int>(active.size()))
        throw std::invalid_argument("baseline_scheduling_pca: order " + std::to_string(order) +
                                    " outside [1, " + std::to_string(active.size()) + "]");

    Matrix normalized(static_cast<Eigen::Index>(active.size()), N);
    for (std::size_t r = 0; r < active.size(); ++r)
        normalized.row(static_cast<Eigen::Index>(r)) =
            (alpha.row(active[r]).array() - means(active[r])) / stds(active[r]);

    Eigen::JacobiSVD<Matrix> svd(normalized, Eigen::ComputeThinU);
    Matrix basis = svd.matrixU().leftCols(order);
    for (int j = 0; j < order; ++j) {
        int arg = 0;
        basis.col(j).cwiseAbs().maxCoeff(&arg);
        if (basis(arg, j) < 0.0) basis.col(j) = -basis.col(j);
    }
    const Matrix reduced = basis.transpose() * normalized;  // order x N

    // Least-squares affine fit of every coefficient entry against the
    // reduced variables; the SVD solve returns the minimum-norm solution
    // when the regression is rank deficient.
    const CoefficientSeries series = build_series(sys, data);
    Matrix regressors(N, order + 1);
    regressors.col(0).setOnes();
    regressors.rightCols(order) = reduced.transpose();
    Eigen::JacobiSVD<Matrix> reg_svd(regressors, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Matrix coef = reg_svd.solve(series.data.transpose());  // (order+1) x n_gamma
    const Matrix predicted = (regressors * coef).transpose();    // n_gamma x N

    BaselineResult result;
    result.rank_deficient_fit = reg_svd.rank() < order + 1;

    AffineLpvModel& model = result.model;
    model.n_x = sys.n_x;
    model.n_u = sys.n_u;
    model.n_y = sys.n_y;
    model.map_domain = MapDomain::Alpha;
    model.M0 = row_major_unvec(coef.row(0).transpose(), sys.rows(), sys.cols());
    for (int i = 0; i < order; ++i)
        model.M.push_back(row_major_unvec(coef.row(i + 1).transpose(), sys.rows(), sys.cols()));
    model.K = Matrix::Zero(order, n_alpha);
    Vector proj_mean = Vector::Zero(order);
    for (std::size_t r = 0; r < active.size(); ++r) {
        const int i = active[r];
        model.K.col(i) = basis.row(static_cast<Eigen::Index>(r)).transpose() / stds(i);
        proj_mean += basis.row(static_cast<Eigen::Index>(r)).transpose() * (means(i) / stds(i));
    }
    model.k0 = -proj_mean;
    model.region = axis_aligned_bounds(reduced);
    model.singular_values = svd.singularValues();

    // Accuracy with the main path's weighting (per-coefficient inverse std,
    // active coefficient rows only).
    const Normalizer nrm = fit_normalizer(series, eps_sigma, mode);
    const auto gamma_rows = nrm.active_rows();
    Matrix weighted(static_cast<Eigen::Index>(gamma_rows.size()), N);
    for (std::size_t r = 0; r < gamma_rows.size(); ++r) {
        const int i = gamma_rows[r];
        weighted.row(static_cast<Eigen::Index>(r)) =
            (series.data.row(i) - predicted.row(i)) / nrm.stds(i);
    }

    AccuracyReport& report = result.report;
    report.singular_values = svd.singularValues();
    report.eta_frobenius = weighted.norm();
    report.eta_sqsum = report.eta_frobenius;
    report.eta_sum = Eigen::JacobiSVD<Matrix>(weighted).singularValues().sum();
    double head = 0.0;
    const double total = svd.singularValues().squaredNorm();
    for (int i = 0; i < order; ++i) head += svd.singularValues()(i) * svd.singularValues()(i);
    report.captured_energy_ratio = total > 0.0 ? head / total : 1.0;
    report.per_entry_rmse = Vector::Zero(series.rows());
    for (int i = 0; i < series.rows(); ++i)
        report.per_entry_rmse(i) =
            (series.data.row(i) - predicted.row(i)).norm() / std::sqrt(double(N));

    model.eta_frobenius = report.eta_frobenius;
    model.eta_sum = report.eta_sum;
    return result;
}

}  // namespace lpv
