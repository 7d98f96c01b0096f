#include <doctest.h>

#include <cmath>
#include <random>

#include "lpvembed/baseline.hpp"
#include "lpvembed/fixtures.hpp"
#include "lpvembed/reduction.hpp"

using namespace lpv;

namespace {

Matrix random_matrix(int rows, int cols, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
    return m;
}

struct Prepared {
    CoefficientSeries series;
    Normalizer nrm;
    Decomposition dec;
};

Prepared prepare(const Fixture& fx) {
    Prepared p;
    p.series = build_series(fx.system, fx.default_dataset());
    p.nrm = fit_normalizer(p.series);
    p.dec = decompose(normalize(p.nrm, p.series));
    return p;
}

}  // namespace

TEST_SUITE("reduction") {

TEST_CASE("rank-1 matrix decomposes to a single singular value") {
    Vector u(4), v(6);
    u << 0.5, -0.5, 0.5, -0.5;
    v << 1, 0, 0, 0, 0, 0;
    const Matrix m = 5.0 * u * v.transpose();
    const Decomposition dec = decompose(m);
    CHECK(dec.singular_values(0) == doctest::Approx(5.0).epsilon(1e-12));
    for (int i = 1; i < dec.singular_values.size(); ++i)
        CHECK(dec.singular_values(i) <= 1e-12);
}

TEST_CASE("second benchmark has numerical rank two") {
    const Prepared p = prepare(fixture("example2"));
    REQUIRE(p.dec.singular_values.size() == 5);
    int above = 0;
    for (int i = 0; i < 5; ++i)
        if (p.dec.singular_values(i) > 1e-8 * p.dec.singular_values(0)) ++above;
    CHECK(above == 2);
}

TEST_CASE("left vectors are orthonormal") {
    const Matrix m = random_matrix(5, 100, 17);
    const Decomposition dec = decompose(m);
    const Matrix gram =
        dec.left_vectors.transpose() * dec.left_vectors - Matrix::Identity(5, 5);
    CHECK(gram.cwiseAbs().maxCoeff() <= 1e-10);
    // reconstruction sanity: the full projector reproduces the matrix and
    // the spectrum carries its energy
    const Matrix projected = dec.left_vectors * (dec.left_vectors.transpose() * m);
    CHECK((projected - m).norm() <= 1e-9 * m.norm());
    CHECK(dec.singular_values.squaredNorm() ==
          doctest::Approx(m.squaredNorm()).epsilon(1e-12));
    CHECK_THROWS_AS(decompose(Matrix::Constant(2, 2, std::nan(""))), NumericalError);
    CHECK_THROWS_AS(decompose(Matrix(0, 0)), DegenerateDataError);
}

TEST_CASE("singular values are sorted non-increasing") {
    const Decomposition dec = decompose(random_matrix(8, 60, 23));
    for (int i = 1; i < dec.singular_values.size(); ++i)
        CHECK(dec.singular_values(i) <= dec.singular_values(i - 1));
}

TEST_CASE("truncate validates the order and fixes signs") {
    const Decomposition dec = decompose(random_matrix(5, 40, 31));
    CHECK_THROWS_AS(truncate(dec, 0), std::invalid_argument);
    CHECK_THROWS_AS(truncate(dec, 6), std::invalid_argument);
    const ReducedBasis basis = truncate(dec, 3);
    CHECK(basis.order() == 3);
    for (int j = 0; j < 3; ++j) {
        int arg = 0;
        basis.basis.col(j).cwiseAbs().maxCoeff(&arg);
        CHECK(basis.basis(arg, j) > 0.0);
    }
    // determinism
    const ReducedBasis again = truncate(decompose(random_matrix(5, 40, 31)), 3);
    CHECK((basis.basis - again.basis).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full-order truncation spans the row space") {
    const Matrix m = random_matrix(4, 30, 5);
    const ReducedBasis basis = truncate(decompose(m), 4);
    const Matrix projector = basis.basis * basis.basis.transpose();
    CHECK((projector * m - m).cwiseAbs().maxCoeff() <= 1e-10 * m.cwiseAbs().maxCoeff());
}

TEST_CASE("series at the row means reduces to zero") {
    const Prepared p = prepare(fixture("example2"));
    CoefficientSeries at_means = p.series;
    at_means.data.resize(p.series.rows(), 3);
    for (int i = 0; i < p.series.rows(); ++i) at_means.data.row(i).setConstant(p.nrm.means(i));
    const ReducedBasis basis = truncate(p.dec, 2);
    const Matrix rho = reduced_coordinates(basis, p.nrm, at_means);
    CHECK(rho.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("exact-rank reconstruction on the second benchmark") {
    const Prepared p = prepare(fixture("example2"));
    const ReducedBasis basis = truncate(p.dec, 2);
    const Matrix rho = reduced_coordinates(basis, p.nrm, p.series);
    const CoefficientSeries rebuilt = denormalize(p.nrm, basis.basis * rho);
    const double scale = p.series.data.cwiseAbs().maxCoeff();
    CHECK((rebuilt.data - p.series.data).cwiseAbs().maxCoeff() <= 1e-9 * scale);
}

TEST_CASE("column-by-column reduction equals the batch result") {
    const Prepared p = prepare(fixture("example2"));
    const ReducedBasis basis = truncate(p.dec, 2);
    const Matrix batch = reduced_coordinates(basis, p.nrm, p.series);
    for (int k = 0; k < p.series.count(); k += 25) {
        const Vector streamed = reduce_coefficients(basis, p.nrm, p.series.data.col(k));
        CHECK((streamed - batch.col(k)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("accuracy at full rank vanishes") {
    const Prepared p = prepare(fixture("example2"));
    const int rank = 2;
    const AccuracyReport report = accuracy(truncate(p.dec, rank), p.nrm, p.series);
    CHECK(report.eta_frobenius <= 1e-9);
    CHECK(report.eta_sum <= 1e-7);
    CHECK(report.captured_energy_ratio == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.per_entry_rmse.maxCoeff() <= 1e-9);
}

TEST_CASE("Eckart-Young identity on random matrices") {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const Matrix m = random_matrix(6, 50, 200 + seed);
        CoefficientSeries s;
        s.data = m;
        s.n_x = 6;
        const Normalizer nrm = fit_normalizer(s);
        const Decomposition dec = decompose(normalize(nrm, s));
        for (const int order : {1, 2, 4}) {
            const AccuracyReport report = accuracy(truncate(dec, order), nrm, s);
            CHECK(report.eta_frobenius ==
                  doctest::Approx(report.eta_sqsum).epsilon(1e-8));
        }
    }
}

TEST_CASE("eta is non-increasing in the order") {
    const Prepared p = prepare(fixture("example1"));
    double previous_f = std::numeric_limits<double>::infinity();
    double previous_s = previous_f, previous_q = previous_f;
    for (int order = 1; order <= p.dec.singular_values.size(); ++order) {
        const AccuracyReport r = accuracy(truncate(p.dec, order), p.nrm, p.series);
        CHECK(r.eta_frobenius <= previous_f + 1e-9);
        CHECK(r.eta_sum <= previous_s + 1e-9);
        CHECK(r.eta_sqsum <= previous_q + 1e-9);
        previous_f = r.eta_frobenius;
        previous_s = r.eta_sum;
        previous_q = r.eta_sqsum;
    }
}

TEST_CASE("suggest_order picks the smallest sufficient order") {
    Vector sv(5);
    sv << 39.5533, 2.3526, 0, 0, 0;
    CHECK(suggest_order(sv, 0.99) == 1);
    Vector one(1);
    one << 1;
    CHECK(suggest_order(one, 1.0) == 1);
    Vector two(2);
    two << 1, 1;
    CHECK(suggest_order(two, 0.6) == 2);
    CHECK_THROWS_AS(suggest_order(Vector(0), 0.9), std::invalid_argument);
    CHECK_THROWS_AS(suggest_order(one, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(suggest_order(one, 1.5), std::invalid_argument);
}

TEST_CASE("report text block lists every key") {
    const Prepared p = prepare(fixture("example2"));
    const std::string text = accuracy(truncate(p.dec, 1), p.nrm, p.series).to_text();
    for (const char* key : {"singular_values", "eta_frobenius", "eta_sum", "eta_sqsum",
                            "captured_energy_ratio", "per_entry_rmse"})
        CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("baseline is lossless on affine systems at full order") {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    const BaselineResult base = baseline_scheduling_pca(data, fx.system, 3);
    CHECK(base.report.eta_frobenius <= 1e-8);
    CHECK_FALSE(base.rank_deficient_fit);
    CHECK(base.model.map_domain == MapDomain::Alpha);
}

TEST_CASE("baseline matches its reference value on the first benchmark") {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    const BaselineResult base = baseline_scheduling_pca(data, fx.system, 2);
    const double reference = fx.published("eta_baseline");
    CHECK(std::abs(base.report.eta_frobenius - reference) <= 0.02 * reference);
    CHECK(base.report.eta_sqsum == doctest::Approx(base.report.eta_frobenius).epsilon(1e-12));

    // the proposed reduction beats the baseline at the same order
    const Prepared p = prepare(fx);
    const AccuracyReport proposed = accuracy(truncate(p.dec, 2), p.nrm, p.series);
    CHECK(proposed.eta_frobenius < base.report.eta_frobenius);

    CHECK_THROWS_AS(baseline_scheduling_pca(data, fx.system, 0), std::invalid_argument);
    CHECK_THROWS_AS(baseline_scheduling_pca(data, fx.system, 4), std::invalid_argument);
}

}  // TEST_SUITE
