#include "lpvembed/reduction.hpp"

#include <Eigen/SVD>
#include <cassert>
#include <charconv>
#include <cmath>

namespace lpv {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc());
    return std::string(buf, end);
}

}  // namespace

Decomposition decompose(const Matrix& normalized) {
    if (normalized.rows() == 0 || normalized.cols() == 0)
        throw DegenerateDataError("decompose: empty matrix (no active rows or no samples)");
    if (!normalized.allFinite()) throw NumericalError("decompose: non-finite input");
    // JacobiSVD is deterministic for a fixed input and plenty fast at the
    // row counts n_Gamma produces.
    Eigen::JacobiSVD<Matrix> svd(normalized, Eigen::ComputeThinU);
    Decomposition dec;
    dec.left_vectors = svd.matrixU();
    dec.singular_values = svd.singularValues();
    return dec;
}

ReducedBasis truncate(const Decomposition& dec, int order) {
    const int available = static_cast<int>(dec.left_vectors.cols());
    if (order < 1 || order > available)
        throw std::invalid_argument("truncate: order " + std::to_string(order) +
                                    " outside [1, " + std::to_string(available) + "]");
    ReducedBasis basis;
    basis.singular_values = dec.singular_values;
    basis.basis = dec.left_vectors.leftCols(order);
    for (int j = 0; j < order; ++j) {
        int arg = 0;
        basis.basis.col(j).cwiseAbs().maxCoeff(&arg);
        if (basis.basis(arg, j) < 0.0) basis.basis.col(j) = -basis.basis.col(j);
    }
    return basis;
}

Matrix reduced_coordinates(const ReducedBasis& basis, const Normalizer& nrm,
                           const CoefficientSeries& series) {
    const Matrix normalized = normalize(nrm, series);
    if (normalized.rows() != basis.basis.rows())
        throw DimensionError("reduced_coordinates: basis rows do not match active rows");
    // Column-by-column products keep batch results bitwise identical to the
    // streaming path in reduce_coefficients.
    Matrix rho(basis.order(), normalized.cols());
    for (Eigen::Index k = 0; k < normalized.cols(); ++k)
        rho.col(k) = basis.basis.transpose() * normalized.col(k);
    return rho;
}

Vector reduce_coefficients(const ReducedBasis& basis, const Normalizer& nrm, const Vector& gamma) {
    const Vector projected = nrm.project(gamma);
    if (projected.size() != basis.basis.rows())
        throw DimensionError("reduce_coefficients: basis rows do not match active rows");
    return basis.basis.transpose() * projected;
}

AccuracyReport accuracy(const ReducedBasis& basis, const Normalizer& nrm,
                        const CoefficientSeries& series) {
    const Matrix normalized = normalize(nrm, series);
    if (normalized.rows() != basis.basis.rows())
        throw DimensionError("accuracy: basis rows do not match active rows");

    AccuracyReport report;
    report.singular_values = basis.singular_values;

    const Matrix residual = normalized - basis.basis * (basis.basis.transpose() * normalized);
    report.eta_frobenius = residual.norm();

    const int order = basis.order();
    double sum = 0.0, sqsum = 0.0, head = 0.0, total = 0.0;
    for (int i = 0; i < basis.singular_values.size(); ++i) {
        const double s = basis.singular_values(i);
        total += s * s;
        if (i < order) {
            head += s * s;
        } else {
            sum += s;
            sqsum += s * s;
        }
    }
    report.eta_sum = sum;
    report.eta_sqsum = std::sqrt(sqsum);
    report.captured_energy_ratio = total > 0.0 ? head / total : 1.0;

    // Physical-units residual per coefficient row; inactive rows reconstruct
    // exactly at their means.
    report.per_entry_rmse = Vector::Zero(nrm.size());
    const auto rows = nrm.active_rows();
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const double rms =
            residual.row(static_cast<Eigen::Index>(r)).norm() / std::sqrt(double(series.count()));
        report.per_entry_rmse(rows[r]) = rms * nrm.stds(rows[r]);
    }
    return report;
}

std::string AccuracyReport::to_text() const {
    std::string out;
    out += "singular_values";
    for (int i = 0; i < singular_values.size(); ++i) out += " " + format_double(singular_values(i));
    out += "\n";
    out += "eta_frobenius " + format_double(eta_frobenius) + "\n";
    out += "eta_sum " + format_double(eta_sum) + "\n";
    out += "eta_sqsum " + format_double(eta_sqsum) + "\n";
    out += "captured_energy_ratio " + format_double(captured_energy_ratio) + "\n";
    out += "per_entry_rmse";
    for (int i = 0; i < per_entry_rmse.size(); ++i) out += " " + format_double(per_entry_rmse(i));
    out += "\n";
    return out;
}

int suggest_order(const Vector& singular_values, double energy_threshold) {
    if (singular_values.size() == 0)
        throw std::invalid_argument("suggest_order: empty singular value list");
    if (!(energy_threshold > 0.0) || energy_threshold > 1.0)
        throw std::invalid_argument("suggest_order: threshold must lie in (0, 1]");
    const double total = singular_values.squaredNorm();
    if (total == 0.0) return 1;
    double head = 0.0;
    for (int i = 0; i < singular_values.size(); ++i) {
        head += singular_values(i) * singular_values(i);
        if (head / total >= energy_threshold) return i + 1;
    }
    return static_cast<int>(singular_values.size());
}

}  // namespace lpv
