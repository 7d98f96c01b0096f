#include <doctest.h>

#include <cmath>
#include <random>

#include "lpvembed/fixtures.hpp"
#include "lpvembed/series.hpp"

using namespace lpv;

namespace {

CoefficientSeries series_from_matrix(const Matrix& data, int n_x = 0, int n_u = 0, int n_y = 0) {
    CoefficientSeries s;
    s.data = data;
    // Shape metadata only matters for model assembly; give the rows a
    // 1-column grid so entry_of_row stays consistent.
    s.n_x = n_x > 0 ? n_x : static_cast<int>(data.rows());
    s.n_u = n_u;
    s.n_y = n_y;
    return s;
}

Matrix random_matrix(int rows, int cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("build_series vectorizes row-major") {
    const Fixture fx = fixture("example2");
    TrajectoryDataset data;
    data.sample_period = 0.01;
    data.samples = Matrix::Zero(2, 1);  // two samples, both x1 = 0
    const CoefficientSeries series = build_series(fx.system, data);
    REQUIRE(series.rows() == 9);
    Vector expected(9);
    expected << 1, 5, 0, 0, 0, 1, 0, 0, 0;
    CHECK((series.data.col(0) - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(series.entry_of_row(1) == std::pair<int, int>{0, 1});
    CHECK(series.row_of_entry(2, 0) == 6);
}

TEST_CASE("constant system gives identical columns") {
    const SystemDescription sys = parse_system("dims: 1 1 0\nvars: x1\nL[1,1] = 4\nL[1,2] = -2\n");
    TrajectoryDataset data;
    data.sample_period = 0.1;
    data.samples = random_matrix(10, 1, 7);
    const CoefficientSeries series = build_series(sys, data);
    for (int k = 1; k < 10; ++k)
        CHECK((series.data.col(k) - series.data.col(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("benchmark coefficient rows match a per-sample oracle") {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    const CoefficientSeries series = build_series(fx.system, data);
    REQUIRE(series.rows() == 9);
    REQUIRE(series.count() == 3000);
    for (int k = 0; k < series.count(); k += 97) {
        const double a1 = data.samples(k, 0);
        CHECK(series.data(0, k) == 1.0 + 2.0 * a1);  // entry (1,1)
    }
}

TEST_CASE("evaluation failures name the entry and sample") {
    const SystemDescription sys = parse_system("dims: 1 1 0\nvars: x1\nL[1,2] = 1/x1\n");
    TrajectoryDataset data;
    data.sample_period = 1.0;
    data.samples = Matrix::Zero(3, 1);
    data.samples(0, 0) = 1.0;
    data.samples(1, 0) = 0.0;
    try {
        build_series(sys, data);
        FAIL("expected EvalError");
    } catch (const EvalError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("L[1,2]") != std::string::npos);
        CHECK(msg.find("sample 1") != std::string::npos);
    }
}

TEST_CASE("fit_normalizer marks constant rows inactive") {
    Matrix data(2, 4);
    data << 7, 7, 7, 7, -1, 1, -1, 1;
    const Normalizer nrm = fit_normalizer(series_from_matrix(data), 1e-12, StdMode::Population);
    CHECK(nrm.means(0) == 7.0);
    CHECK(nrm.stds(0) == 0.0);
    CHECK_FALSE(nrm.active[0]);
    CHECK(nrm.means(1) == 0.0);
    CHECK(nrm.stds(1) == 1.0);  // population convention
    CHECK(bool(nrm.active[1]));
    CHECK(nrm.active_count() == 1);
}

TEST_CASE("sample vs population conventions") {
    Matrix data(1, 2);
    data << 1, 3;
    const auto pop = fit_normalizer(series_from_matrix(data), 1e-12, StdMode::Population);
    CHECK(pop.stds(0) == 1.0);
    const auto smp = fit_normalizer(series_from_matrix(data), 1e-12, StdMode::Sample);
    CHECK(smp.stds(0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("benchmark row statistics match a brute-force oracle") {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    const CoefficientSeries series = build_series(fx.system, data);
    const Normalizer nrm = fit_normalizer(series, 1e-12, StdMode::Population);

    // Entry (1,1) = 1 + 2*a1, computed directly from the samples.
    long double sum = 0.0;
    for (int k = 0; k < data.count(); ++k) sum += 1.0 + 2.0 * data.samples(k, 0);
    const double mean = static_cast<double>(sum / data.count());
    long double sq = 0.0;
    for (int k = 0; k < data.count(); ++k) {
        const long double d = 1.0 + 2.0 * data.samples(k, 0) - mean;
        sq += d * d;
    }
    const double std_pop = std::sqrt(static_cast<double>(sq / data.count()));
    CHECK(nrm.means(0) == doctest::Approx(mean).epsilon(1e-13));
    CHECK(nrm.stds(0) == doctest::Approx(std_pop).epsilon(1e-12));
}

TEST_CASE("fit_normalizer ignores column order") {
    const Matrix data = random_matrix(4, 50, 21);
    Matrix shuffled = data;
    std::mt19937_64 rng(3);
    std::vector<int> perm(50);
    for (int i = 0; i < 50; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (int j = 0; j < 50; ++j) shuffled.col(j) = data.col(perm[j]);

    const auto a = fit_normalizer(series_from_matrix(data));
    const auto b = fit_normalizer(series_from_matrix(shuffled));
    CHECK((a.means - b.means).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((a.stds - b.stds).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("normalize maps the two-point row to plus/minus one") {
    Matrix data(1, 2);
    data << 1, 3;
    const CoefficientSeries s = series_from_matrix(data);
    const Normalizer nrm = fit_normalizer(s, 1e-12, StdMode::Population);
    const Matrix normalized = normalize(nrm, s);
    REQUIRE(normalized.rows() == 1);
    CHECK(normalized(0, 0) == -1.0);
    CHECK(normalized(0, 1) == 1.0);

    const CoefficientSeries back = denormalize(nrm, normalized);
    CHECK(back.data(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(back.data(0, 1) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("all-constant series has no active rows") {
    const CoefficientSeries s = series_from_matrix(Matrix::Constant(3, 5, 2.5));
    const Normalizer nrm = fit_normalizer(s);
    CHECK(nrm.active_count() == 0);
    const Matrix normalized = normalize(nrm, s);
    CHECK(normalized.rows() == 0);
    const CoefficientSeries back = denormalize(nrm, normalized);
    CHECK((back.data - s.data).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("denormalize of zero restores the means") {
    const Matrix data = random_matrix(5, 30, 11);
    const CoefficientSeries s = series_from_matrix(data);
    const Normalizer nrm = fit_normalizer(s);
    const CoefficientSeries back = denormalize(nrm, Matrix::Zero(nrm.active_count(), 4));
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 4; ++k) CHECK(back.data(i, k) == nrm.means(i));
}

TEST_CASE("roundtrip identity within 1e-12 relative") {
    for (const auto mode : {StdMode::Sample, StdMode::Population}) {
        for (unsigned seed = 0; seed < 20; ++seed) {
            Matrix data = random_matrix(6, 40, 100 + seed);
            data.row(2).setConstant(3.25);  // one inactive row
            const CoefficientSeries s = series_from_matrix(data);
            const Normalizer nrm = fit_normalizer(s, 1e-12, mode);
            const CoefficientSeries back = denormalize(nrm, normalize(nrm, s));
            const double scale = data.cwiseAbs().maxCoeff();
            CHECK((back.data - data).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, scale));
        }
    }
}

TEST_CASE("normalized active rows are centered with unit deviation") {
    const Matrix data = random_matrix(4, 64, 5);
    const CoefficientSeries s = series_from_matrix(data);
    for (const auto mode : {StdMode::Sample, StdMode::Population}) {
        const Normalizer nrm = fit_normalizer(s, 1e-12, mode);
        const Matrix normalized = normalize(nrm, s);
        const double denom = mode == StdMode::Sample ? 63.0 : 64.0;
        for (int r = 0; r < normalized.rows(); ++r) {
            CHECK(std::abs(normalized.row(r).mean()) <= 1e-10);
            CHECK(std::abs(normalized.row(r).squaredNorm() / denom - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("weighting identity: W(P - P') equals N(P) - N(P') on active rows") {
    const Matrix a = random_matrix(5, 32, 41);
    const Matrix b = random_matrix(5, 32, 42);
    const CoefficientSeries sa = series_from_matrix(a);
    const Normalizer nrm = fit_normalizer(sa);
    CoefficientSeries sb = sa;
    sb.data = b;
    const Matrix lhs_rows = normalize(nrm, sa) - normalize(nrm, sb);
    const auto active = nrm.active_rows();
    const Vector w = nrm.active_weights();
    for (std::size_t r = 0; r < active.size(); ++r) {
        const Matrix direct = w(static_cast<Eigen::Index>(r)) * (a.row(active[r]) - b.row(active[r]));
        CHECK((lhs_rows.row(static_cast<Eigen::Index>(r)) - direct).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("dimension mismatches raise") {
    const CoefficientSeries s = series_from_matrix(random_matrix(3, 10, 1));
    const Normalizer nrm = fit_normalizer(s);
    const CoefficientSeries other = series_from_matrix(random_matrix(4, 10, 2));
    CHECK_THROWS_AS(normalize(nrm, other), DimensionError);
    CHECK_THROWS_AS(denormalize(nrm, Matrix::Zero(5, 10)), DimensionError);
    CHECK_THROWS_AS(fit_normalizer(series_from_matrix(random_matrix(3, 1, 3))), DimensionError);
}

}  // TEST_SUITE
