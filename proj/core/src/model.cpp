#include "lpvembed/model.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace lpv {

using json = nlohmann::json;

AffineLpvModel assemble(const ReducedBasis& basis, const Normalizer& nrm,
                        const SchedulingRegion& region, std::string source_digest) {
    const int n_theta = basis.order();
    if (region.dim() != n_theta)
        throw DimensionError("assemble: region dimension " + std::to_string(region.dim()) +
                             " does not match the basis order " + std::to_string(n_theta));
    const auto active = nrm.active_rows();
    if (basis.basis.rows() != static_cast<Eigen::Index>(active.size()))
        throw DimensionError("assemble: basis rows do not match the normalizer's active rows");
    if (std::abs(std::abs(region.rotation.determinant()) - 1.0) > 1e-9)
        throw NumericalError("assemble: region rotation is not orthonormal");

    AffineLpvModel model;
    model.n_x = nrm.n_x;
    model.n_u = nrm.n_u;
    model.n_y = nrm.n_y;
    model.region = region;
    model.singular_values = basis.singular_values;
    model.source_digest = std::move(source_digest);
    {
        double sum = 0.0, sq = 0.0;
        for (int i = n_theta; i < basis.singular_values.size(); ++i) {
            sum += basis.singular_values(i);
            sq += basis.singular_values(i) * basis.singular_values(i);
        }
        model.eta_sum = sum;
        model.eta_frobenius = std::sqrt(sq);
    }

    const int m = model.rows();
    const int n = model.cols();
    const int n_gamma = nrm.size();

    // Gamma_hat(theta) = means + S * U_rho * (R^T (theta - c) + c) on active
    // rows, means elsewhere. Split into the constant part and the per-theta
    // coefficient columns.
    const Matrix rot_t = region.rotation.transpose();
    const Vector offset = region.center - rot_t * region.center;  // R^{-1}(theta) = R^T theta + offset

    Vector gamma0 = nrm.means;
    Matrix gamma_coef = Matrix::Zero(n_gamma, n_theta);
    for (std::size_t r = 0; r < active.size(); ++r) {
        const int row = active[r];
        const double s = nrm.stds(row);
        gamma0(row) += s * basis.basis.row(static_cast<Eigen::Index>(r)).dot(offset);
        gamma_coef.row(row) =
            s * (basis.basis.row(static_cast<Eigen::Index>(r)) * rot_t);
    }
    model.M0 = row_major_unvec(gamma0, m, n);
    model.M.reserve(static_cast<std::size_t>(n_theta));
    for (int i = 0; i < n_theta; ++i) model.M.push_back(row_major_unvec(gamma_coef.col(i), m, n));

    // theta = R (U_rho^T S^{-1} (gamma_act - means_act) - c) + c
    model.K = Matrix::Zero(n_theta, n_gamma);
    Vector proj_mean = Vector::Zero(n_theta);
    for (std::size_t r = 0; r < active.size(); ++r) {
        const int row = active[r];
        model.K.col(row) =
            region.rotation * basis.basis.row(static_cast<Eigen::Index>(r)).transpose() / nrm.stds(row);
        proj_mean += basis.basis.row(static_cast<Eigen::Index>(r)).transpose() *
                     (nrm.means(row) / nrm.stds(row));
    }
    model.k0 = region.rotation * (-proj_mean - region.center) + region.center;
    return model;
}

Matrix evaluate(const AffineLpvModel& model, const Vector& theta, bool* out_of_region) {
    if (theta.size() != model.n_theta())
        throw DimensionError("evaluate: theta has length " + std::to_string(theta.size()) +
                             ", model expects " + std::to_string(model.n_theta()));
    if (out_of_region) *out_of_region = !in_region(model, theta);
    Matrix out = model.M0;
    for (int i = 0; i < model.n_theta(); ++i) out += theta(i) * model.M[static_cast<std::size_t>(i)];
    return out;
}

bool in_region(const AffineLpvModel& model, const Vector& theta) {
    return model.region.contains(theta, 1e-9);
}

Vector schedule(const AffineLpvModel& model, const Vector& input) {
    if (input.size() != model.K.cols())
        throw DimensionError("schedule: input has length " + std::to_string(input.size()) +
                             ", map expects " + std::to_string(model.K.cols()));
    return model.K * input + model.k0;
}

Vector schedule_from_alpha(const AffineLpvModel& model, const SystemDescription& sys,
                           const Vector& alpha) {
    if (model.map_domain == MapDomain::Alpha) return schedule(model, alpha);
    return schedule(model, row_major_vec(eval_matrix(sys, alpha)));
}

RateBounds rate_bounds(const AffineLpvModel& model, const SystemDescription& sys,
                       const TrajectoryDataset& data) {
    const int N = data.count();
    if (N < 2) throw DimensionError("rate_bounds: need at least two samples");
    const double T = data.sample_period;

    Matrix theta(model.n_theta(), N);
    for (int k = 0; k < N; ++k)
        theta.col(k) = schedule_from_alpha(model, sys, data.samples.row(k).transpose());

    RateBounds bounds;
    bounds.lower = Vector::Constant(model.n_theta(), std::numeric_limits<double>::infinity());
    bounds.upper = -bounds.lower;
    for (int k = 0; k < N; ++k) {
        Vector rate;
        if (k == 0)
            rate = (theta.col(1) - theta.col(0)) / T;
        else if (k == N - 1)
            rate = (theta.col(N - 1) - theta.col(N - 2)) / T;
        else
            rate = (theta.col(k + 1) - theta.col(k - 1)) / (2.0 * T);
        bounds.lower = bounds.lower.cwiseMin(rate);
        bounds.upper = bounds.upper.cwiseMax(rate);
    }
    return bounds;
}

Vector default_frequency_grid() {
    const int count = 400;
    Vector omegas(count);
    for (int i = 0; i < count; ++i)
        omegas(i) = std::pow(10.0, -2.0 + 5.0 * i / (count - 1.0));
    return omegas;
}

FrequencyResponse frozen_frequency_response(const AffineLpvModel& model, const Vector& theta,
                                            const Vector& omegas) {
    const Matrix L = evaluate(model, theta);
    const int nx = model.n_x, nu = model.n_u, ny = model.n_y;
    const Matrix A = L.topLeftCorner(nx, nx);
    const Matrix B = L.topRightCorner(nx, nu);
    const Matrix C = L.bottomLeftCorner(ny, nx);
    const Matrix D = L.bottomRightCorner(ny, nu);

    Eigen::VectorXcd eigenvalues;
    if (nx > 0) eigenvalues = A.eigenvalues();

    FrequencyResponse resp;
    resp.omegas = omegas;
    resp.magnitudes.reserve(static_cast<std::size_t>(omegas.size()));
    resp.singular.assign(static_cast<std::size_t>(omegas.size()), 0);

    for (int w = 0; w < omegas.size(); ++w) {
        const std::complex<double> jw(0.0, omegas(w));
        if (nx == 0) {
            resp.magnitudes.push_back(D.cwiseAbs());
            continue;
        }
        bool singular = false;
        for (int e = 0; e < eigenvalues.size(); ++e)
            if (std::abs(jw - eigenvalues(e)) < 1e-9) singular = true;
        if (singular) {
            resp.singular[static_cast<std::size_t>(w)] = 1;
            resp.magnitudes.push_back(
                Matrix::Constant(ny, nu, std::numeric_limits<double>::quiet_NaN()));
            continue;
        }
        const Eigen::MatrixXcd resolvent =
            (jw * Eigen::MatrixXcd::Identity(nx, nx) - A.cast<std::complex<double>>())
                .partialPivLu()
                .solve(B.cast<std::complex<double>>());
        const Eigen::MatrixXcd G = C.cast<std::complex<double>>() * resolvent +
                                   D.cast<std::complex<double>>();
        resp.magnitudes.push_back(G.cwiseAbs());
    }
    return resp;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

json matrix_to_json(const Matrix& m) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
    return arr;
}

json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Matrix matrix_from_json(const json& arr, int rows, int cols, const char* what) {
    if (!arr.is_array() || static_cast<Eigen::Index>(arr.size()) != static_cast<Eigen::Index>(rows) * cols)
        throw ParseError(std::string("model JSON: field '") + what + "' must hold " +
                             std::to_string(static_cast<long>(rows) * cols) + " numbers",
                         1, 1);
    Matrix m(rows, cols);
    Eigen::Index k = 0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = arr[static_cast<std::size_t>(k++)].get<double>();
    return m;
}

Vector vector_from_json(const json& arr, const char* what) {
    if (!arr.is_array())
        throw ParseError(std::string("model JSON: field '") + what + "' must be an array", 1, 1);
    Vector v(static_cast<Eigen::Index>(arr.size()));
    for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
    return v;
}

const json& require(const json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(std::string("model JSON: missing required field '") + key + "'", 1, 1);
    return *it;
}

}  // namespace

std::string save_model(const AffineLpvModel& model) {
    json doc;
    doc["version"] = 1;
    doc["dims"] = {{"nx", model.n_x}, {"nu", model.n_u}, {"ny", model.n_y}, {"ntheta", model.n_theta()}};
    doc["M0"] = matrix_to_json(model.M0);
    json mi = json::array();
    for (const auto& m : model.M) mi.push_back(matrix_to_json(m));
    doc["Mi"] = mi;
    doc["map"] = {{"K", matrix_to_json(model.K)},
                  {"k0", vector_to_json(model.k0)},
                  {"domain", model.map_domain == MapDomain::Gamma ? "gamma" : "alpha"}};
    doc["region"] = {{"method", model.region.method},
                     {"lower", vector_to_json(model.region.lower)},
                     {"upper", vector_to_json(model.region.upper)},
                     {"rotation", matrix_to_json(model.region.rotation)},
                     {"center", vector_to_json(model.region.center)},
                     {"volume", model.region.volume}};
    doc["provenance"] = {{"singular_values", vector_to_json(model.singular_values)},
                         {"eta_frobenius", model.eta_frobenius},
                         {"eta_sum", model.eta_sum},
                         {"source_digest", model.source_digest}};
    return doc.dump();
}

AffineLpvModel load_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model JSON: ") + e.what(), 1, 1);
    }
    if (!doc.is_object()) throw ParseError("model JSON: document must be an object", 1, 1);
    const int version = require(doc, "version").get<int>();
    if (version != 1)
        throw ParseError("model JSON: unsupported schema version " + std::to_string(version), 1, 1);

    AffineLpvModel model;
    const json& dims = require(doc, "dims");
    model.n_x = require(dims, "nx").get<int>();
    model.n_u = require(dims, "nu").get<int>();
    model.n_y = require(dims, "ny").get<int>();
    const int n_theta = require(dims, "ntheta").get<int>();
    if (model.n_x < 0 || model.n_u < 0 || model.n_y < 0 || n_theta < 0 ||
        model.rows() <= 0 || model.cols() <= 0)
        throw DimensionError("model JSON: invalid dimensions");

    model.M0 = matrix_from_json(require(doc, "M0"), model.rows(), model.cols(), "M0");
    const json& mi = require(doc, "Mi");
    if (!mi.is_array() || static_cast<int>(mi.size()) != n_theta)
        throw DimensionError("model JSON: expected " + std::to_string(n_theta) +
                             " coefficient matrices, found " + std::to_string(mi.size()));
    for (const auto& m : mi)
        model.M.push_back(matrix_from_json(m, model.rows(), model.cols(), "Mi"));

    const json& map = require(doc, "map");
    const Vector k0 = vector_from_json(require(map, "k0"), "map.k0");
    if (k0.size() != n_theta) throw DimensionError("model JSON: map.k0 length mismatch");
    model.k0 = k0;
    const json& kjson = require(map, "K");
    if (!kjson.is_array() || kjson.size() % static_cast<std::size_t>(std::max(n_theta, 1)) != 0)
        throw DimensionError("model JSON: map.K size is not a multiple of ntheta");
    const int map_cols = n_theta > 0 ? static_cast<int>(kjson.size()) / n_theta : 0;
    model.K = matrix_from_json(kjson, n_theta, map_cols, "map.K");
    if (map.contains("domain")) {
        const std::string domain = map["domain"].get<std::string>();
        if (domain == "gamma") model.map_domain = MapDomain::Gamma;
        else if (domain == "alpha") model.map_domain = MapDomain::Alpha;
        else throw ParseError("model JSON: map.domain must be 'gamma' or 'alpha'", 1, 1);
    }
    if (model.map_domain == MapDomain::Gamma && map_cols != model.rows() * model.cols())
        throw DimensionError("model JSON: map.K width does not match the coefficient count");

    const json& region = require(doc, "region");
    model.region.method = require(region, "method").get<std::string>();
    model.region.lower = vector_from_json(require(region, "lower"), "region.lower");
    model.region.upper = vector_from_json(require(region, "upper"), "region.upper");
    model.region.rotation =
        matrix_from_json(require(region, "rotation"), n_theta, n_theta, "region.rotation");
    model.region.center = vector_from_json(require(region, "center"), "region.center");
    model.region.volume = require(region, "volume").get<double>();
    if (model.region.lower.size() != n_theta || model.region.upper.size() != n_theta ||
        model.region.center.size() != n_theta)
        throw DimensionError("model JSON: region bounds do not match ntheta");

    const json& prov = require(doc, "provenance");
    model.singular_values = vector_from_json(require(prov, "singular_values"), "singular_values");
    model.eta_frobenius = require(prov, "eta_frobenius").get<double>();
    model.eta_sum = require(prov, "eta_sum").get<double>();
    model.source_digest = require(prov, "source_digest").get<std::string>();
    return model;
}

AffineLpvModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open model file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_model(buf.str());
}

std::string source_digest_of(const std::string& canonical_text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : canonical_text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

}  // namespace lpv
