#include <doctest.h>

#include <cmath>
#include <random>

#include "lpvembed/fixtures.hpp"
#include "lpvembed/model.hpp"

using namespace lpv;

namespace {

struct Pipeline {
    SystemDescription sys;
    TrajectoryDataset data;
    CoefficientSeries series;
    Normalizer nrm;
    ReducedBasis basis;
    Matrix rho;
    SchedulingRegion region;
    AffineLpvModel model;
};

Pipeline run_pipeline(const std::string& fixture_name, int order, RegionStrategy strategy) {
    const Fixture fx = fixture(fixture_name);
    Pipeline p;
    p.sys = fx.system;
    p.data = fx.default_dataset();
    p.series = build_series(p.sys, p.data);
    p.nrm = fit_normalizer(p.series);
    p.basis = truncate(decompose(normalize(p.nrm, p.series)), order);
    p.rho = reduced_coordinates(p.basis, p.nrm, p.series);
    p.region = region_from_points(p.rho, strategy);
    p.model = assemble(p.basis, p.nrm, p.region, source_digest_of(print_system(p.sys)));
    return p;
}

Vector random_theta(int n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = dist(rng);
    return v;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("evaluation at zero returns the constant part") {
    const Pipeline p = run_pipeline("example2", 2, RegionStrategy::AxisAligned);
    CHECK((evaluate(p.model, Vector::Zero(2)) - p.model.M0).cwiseAbs().maxCoeff() == 0.0);
    bool outside = false;
    evaluate(p.model, Vector::Zero(2), &outside);
    CHECK_FALSE(outside);
    evaluate(p.model, Vector::Constant(2, 50.0), &outside);
    CHECK(outside);
    for (int i = 0; i < 2; ++i) {
        Vector e = Vector::Zero(2);
        e(i) = 1.0;
        const Matrix expected = p.model.M0 + p.model.M[static_cast<std::size_t>(i)];
        CHECK((evaluate(p.model, e) - expected).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK_THROWS_AS(evaluate(p.model, Vector::Zero(3)), DimensionError);
}

TEST_CASE("evaluation is affine") {
    const Pipeline p = run_pipeline("example2", 2, RegionStrategy::Box);
    for (unsigned seed = 0; seed < 10; ++seed) {
        const Vector a = random_theta(2, 2 * seed);
        const Vector b = random_theta(2, 2 * seed + 1);
        const Matrix mid = evaluate(p.model, 0.5 * a + 0.5 * b);
        const Matrix avg = 0.5 * evaluate(p.model, a) + 0.5 * evaluate(p.model, b);
        const double scale = std::max(1.0, avg.cwiseAbs().maxCoeff());
        CHECK((mid - avg).cwiseAbs().maxCoeff() <= 1e-12 * scale);
    }
}

TEST_CASE("constant entries live only in the constant part") {
    const Pipeline p = run_pipeline("example2", 2, RegionStrategy::Box);
    // entries (1,3), (2,2), (2,3), (3,3) are constant in the source system
    const std::pair<int, int> constant_entries[] = {{0, 2}, {1, 1}, {1, 2}, {2, 2}};
    for (const auto& [i, j] : constant_entries) {
        for (const auto& coefficient : p.model.M) CHECK(coefficient(i, j) == 0.0);
    }
    CHECK(p.model.M0(1, 2) == 1.0);
    CHECK(p.model.M0(0, 2) == 0.0);
}

TEST_CASE("exact embedding at full numerical rank") {
    for (const auto strategy : {RegionStrategy::AxisAligned, RegionStrategy::Box}) {
        const Pipeline p = run_pipeline("example2", 2, strategy);
        double max_err = 0.0, max_val = 0.0;
        for (int k = 0; k < p.data.count(); ++k) {
            const Vector alpha = p.data.samples.row(k).transpose();
            const Matrix truth = eval_matrix(p.sys, alpha);
            const Matrix approx = evaluate(p.model, schedule_from_alpha(p.model, p.sys, alpha));
            max_err = std::max(max_err, (truth - approx).cwiseAbs().maxCoeff());
            max_val = std::max(max_val, truth.cwiseAbs().maxCoeff());
        }
        CHECK(max_err <= 1e-9 * max_val);
    }
}

TEST_CASE("stored map composes normalization, basis, and alignment") {
    const Pipeline p = run_pipeline("example1", 2, RegionStrategy::Box);
    for (int k = 0; k < p.data.count(); k += 211) {
        const Vector gamma = p.series.data.col(k);
        const Vector theta = schedule(p.model, gamma);
        // reference: theta = R(U^T N(gamma) - c) + c
        const Vector rho = p.basis.basis.transpose() * p.nrm.project(gamma);
        const Vector expected = p.region.transform(rho);
        CHECK((theta - expected).cwiseAbs().maxCoeff() <= 1e-10);
        // evaluating the model at theta reproduces the rank-limited reconstruction
        const Vector rebuilt_gamma = row_major_vec(evaluate(p.model, theta));
        const Matrix recon_norm =
            p.basis.basis * (p.basis.basis.transpose() * Matrix(p.nrm.project(gamma)));
        const Vector reference = denormalize(p.nrm, recon_norm).data.col(0);
        CHECK((rebuilt_gamma - reference).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("schedule is affine and keeps the dataset inside the region") {
    const Pipeline p = run_pipeline("example1", 2, RegionStrategy::Box);
    long outside = 0;
    for (int k = 0; k < p.data.count(); ++k) {
        const Vector theta = schedule_from_alpha(
            p.model, p.sys, p.data.samples.row(k).transpose());
        if (!in_region(p.model, theta)) ++outside;
    }
    CHECK(outside == 0);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> dist;
    for (int rep = 0; rep < 10; ++rep) {
        Vector g1(9), g2(9);
        for (int i = 0; i < 9; ++i) { g1(i) = dist(rng); g2(i) = dist(rng); }
        const Vector second_difference = schedule(p.model, g1) + schedule(p.model, g2) -
                                         2.0 * schedule(p.model, 0.5 * (g1 + g2));
        CHECK(second_difference.cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("assembled accuracy matches the reduction report") {
    const Pipeline p = run_pipeline("example1", 2, RegionStrategy::Box);
    const AccuracyReport report = accuracy(p.basis, p.nrm, p.series);
    double weighted_sq = 0.0;
    const auto active = p.nrm.active_rows();
    for (int k = 0; k < p.data.count(); ++k) {
        const Vector gamma = p.series.data.col(k);
        const Vector rebuilt =
            row_major_vec(evaluate(p.model, schedule(p.model, gamma)));
        for (const int row : active) {
            const double r = (gamma(row) - rebuilt(row)) / p.nrm.stds(row);
            weighted_sq += r * r;
        }
    }
    CHECK(std::sqrt(weighted_sq) == doctest::Approx(report.eta_frobenius).epsilon(1e-8));
    CHECK(p.model.eta_frobenius == doctest::Approx(report.eta_frobenius).epsilon(1e-8));
}

TEST_CASE("rate bounds of a constant trajectory vanish") {
    const Pipeline p = run_pipeline("example2", 2, RegionStrategy::AxisAligned);
    TrajectoryDataset constant;
    constant.sample_period = 0.1;
    constant.samples = Matrix::Constant(20, 1, 0.4);
    const RateBounds bounds = rate_bounds(p.model, p.sys, constant);
    CHECK(bounds.lower.cwiseAbs().maxCoeff() == 0.0);
    CHECK(bounds.upper.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rate bounds track an analytic derivative") {
    // Scalar model whose scheduling map is the identity on the variable.
    AffineLpvModel model;
    model.n_x = 1;
    model.n_u = 0;
    model.n_y = 0;
    model.M0 = Matrix::Zero(1, 1);
    model.M.push_back(Matrix::Zero(1, 1));
    model.K = Matrix::Identity(1, 1);
    model.k0 = Vector::Zero(1);
    model.map_domain = MapDomain::Alpha;
    model.region.lower = Vector::Constant(1, -2.0);
    model.region.upper = Vector::Constant(1, 2.0);
    model.region.rotation = Matrix::Identity(1, 1);
    model.region.center = Vector::Zero(1);
    model.region.method = "axis-aligned";
    model.region.volume = 4.0;

    SystemDescription sys = parse_system("dims: 1 0 0\nvars: x1\nL[1,1] = 0\n");
    const double T = 1e-3;
    const int N = static_cast<int>(2.0 * M_PI / T);
    TrajectoryDataset data;
    data.sample_period = T;
    data.samples.resize(N, 1);
    for (int k = 0; k < N; ++k) data.samples(k, 0) = std::sin(k * T);
    const RateBounds bounds = rate_bounds(model, sys, data);
    CHECK(bounds.upper(0) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(bounds.lower(0) == doctest::Approx(-1.0).epsilon(1e-4));

    TrajectoryDataset too_short;
    too_short.sample_period = T;
    too_short.samples = Matrix::Zero(1, 1);
    CHECK_THROWS_AS(rate_bounds(model, sys, too_short), DimensionError);
}

TEST_CASE("frequency response of a first-order lag") {
    AffineLpvModel model;
    model.n_x = 1;
    model.n_u = 1;
    model.n_y = 1;
    model.M0 = Matrix(2, 2);
    model.M0 << -1, 1, 1, 0;  // A=-1, B=1, C=1, D=0
    model.K = Matrix::Zero(0, 4);
    model.k0 = Vector::Zero(0);
    model.region.lower = Vector::Zero(0);
    model.region.upper = Vector::Zero(0);
    model.region.rotation = Matrix::Identity(0, 0);
    model.region.center = Vector::Zero(0);
    model.region.method = "axis-aligned";

    Vector omegas(3);
    omegas << 1e-3, 1.0, 1e3;
    const FrequencyResponse resp = frozen_frequency_response(model, Vector::Zero(0), omegas);
    REQUIRE(resp.magnitudes.size() == 3);
    for (int w = 0; w < 3; ++w) {
        const double expected = 1.0 / std::sqrt(1.0 + omegas(w) * omegas(w));
        CHECK(resp.magnitudes[static_cast<std::size_t>(w)](0, 0) ==
              doctest::Approx(expected).epsilon(1e-12));
        CHECK(resp.singular[static_cast<std::size_t>(w)] == 0);
    }
    // omega -> 0 limit equals the static gain |-C A^{-1} B + D|
    Vector tiny(1);
    tiny << 1e-9;
    const FrequencyResponse dc = frozen_frequency_response(model, Vector::Zero(0), tiny);
    CHECK(dc.magnitudes[0](0, 0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("static model has a flat response") {
    AffineLpvModel model;
    model.n_x = 0;
    model.n_u = 1;
    model.n_y = 1;
    model.M0 = Matrix::Constant(1, 1, -2.0);
    model.K = Matrix::Zero(0, 1);
    model.k0 = Vector::Zero(0);
    model.region.rotation = Matrix::Identity(0, 0);
    model.region.method = "axis-aligned";
    const FrequencyResponse resp =
        frozen_frequency_response(model, Vector::Zero(0), default_frequency_grid());
    CHECK(resp.omegas.size() == 400);
    for (const auto& mag : resp.magnitudes) CHECK(mag(0, 0) == 2.0);
}

TEST_CASE("imaginary-axis poles are flagged per frequency") {
    // A = [[0,1],[-1,0]] has eigenvalues +-j; the response at omega=1 is
    // singular, every other frequency stays usable.
    AffineLpvModel model;
    model.n_x = 2;
    model.n_u = 1;
    model.n_y = 1;
    model.M0 = Matrix::Zero(3, 3);
    model.M0(0, 1) = 1.0;
    model.M0(1, 0) = -1.0;
    model.M0(1, 2) = 1.0;  // B
    model.M0(2, 0) = 1.0;  // C
    model.K = Matrix::Zero(0, 9);
    model.k0 = Vector::Zero(0);
    model.region.rotation = Matrix::Identity(0, 0);
    model.region.method = "axis-aligned";

    Vector omegas(3);
    omegas << 0.5, 1.0, 2.0;
    const FrequencyResponse resp = frozen_frequency_response(model, Vector::Zero(0), omegas);
    CHECK(resp.singular[0] == 0);
    CHECK(resp.singular[1] == 1);
    CHECK(std::isnan(resp.magnitudes[1](0, 0)));
    CHECK(resp.singular[2] == 0);
}

TEST_CASE("save/load round trip is byte-identical") {
    const Pipeline p = run_pipeline("example1", 2, RegionStrategy::Box);
    const std::string first = save_model(p.model);
    const AffineLpvModel reloaded = load_model(first);
    const std::string second = save_model(reloaded);
    CHECK(first == second);
    CHECK(reloaded.n_theta() == 2);
    CHECK(reloaded.source_digest == p.model.source_digest);
    CHECK((reloaded.K - p.model.K).cwiseAbs().maxCoeff() == 0.0);
    CHECK(reloaded.region.method == p.model.region.method);

    const Vector theta = random_theta(2, 3);
    CHECK((evaluate(reloaded, theta) - evaluate(p.model, theta)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("schema violations are rejected") {
    const Pipeline p = run_pipeline("example2", 2, RegionStrategy::AxisAligned);
    const std::string good = save_model(p.model);

    std::string no_dims = good;
    const auto dims_pos = no_dims.find("\"dims\"");
    REQUIRE(dims_pos != std::string::npos);
    no_dims.replace(dims_pos, 6, "\"dimz\"");
    CHECK_THROWS_AS(load_model(no_dims), ParseError);

    // declared scheduling count disagreeing with the matrix list
    std::string mismatched = good;
    const auto ntheta_pos = mismatched.find("\"ntheta\":2");
    REQUIRE(ntheta_pos != std::string::npos);
    mismatched.replace(ntheta_pos, 10, "\"ntheta\":3");
    CHECK_THROWS_AS(load_model(mismatched), DimensionError);

    CHECK_THROWS_AS(load_model("not json at all"), ParseError);
    CHECK_THROWS_AS(load_model("{\"version\": 7}"), ParseError);
}

}  // TEST_SUITE
