#include <doctest.h>

#include <cmath>

#include "lpvembed/baseline.hpp"
#include "lpvembed/fixtures.hpp"
#include "lpvembed/model.hpp"

using namespace lpv;

TEST_SUITE("fixtures") {

TEST_CASE("known names only") {
    CHECK(fixture_names().size() == 2);
    CHECK_THROWS_AS(fixture("example3"), std::invalid_argument);
}

TEST_CASE("first benchmark evaluates as declared") {
    const Fixture fx = fixture("example1");
    Vector alpha(3);
    alpha << 1.0, 0.0, 0.0;
    CHECK(eval_matrix(fx.system, alpha)(0, 0) == 3.0);
    CHECK(fx.default_count == 3000);
    CHECK(fx.default_sample_period == 1e-3);
    CHECK(fx.published("eta_proposed") == 54.4705);
    CHECK_THROWS_AS(fx.published("nonsense"), std::invalid_argument);
    for (const auto& v : fx.published_values) CHECK_FALSE(v.citation.empty());
}

TEST_CASE("second benchmark evaluates as declared") {
    const Fixture fx = fixture("example2");
    Vector x1(1);
    x1 << M_PI_2;
    CHECK(eval_matrix(fx.system, x1)(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(fx.default_count == 315);
    CHECK(fx.default_sample_period == 0.01);
}

TEST_CASE("default trajectories respect the declared variable boxes") {
    for (const auto& name : fixture_names()) {
        const Fixture fx = fixture(name);
        const TrajectoryDataset data = fx.default_dataset();
        REQUIRE(fx.system.alpha_box.has_value());
        for (int k = 0; k < data.count(); ++k)
            CHECK(fx.system.alpha_box->contains(data.samples.row(k).transpose(), 1e-9));
    }
}

TEST_CASE("both benchmarks drive the whole pipeline end to end") {
    for (const auto& name : fixture_names()) {
        CAPTURE(name);
        const Fixture fx = fixture(name);
        const TrajectoryDataset data = fx.default_dataset();
        const CoefficientSeries series = build_series(fx.system, data);
        const Normalizer nrm = fit_normalizer(series);
        const Decomposition dec = decompose(normalize(nrm, series));
        const ReducedBasis basis = truncate(dec, 2);
        const Matrix rho = reduced_coordinates(basis, nrm, series);
        const SchedulingRegion region = region_from_points(rho, RegionStrategy::Auto);
        const AffineLpvModel model = assemble(basis, nrm, region);
        CHECK(model.n_theta() == 2);
        const AccuracyReport report = accuracy(basis, nrm, series);
        CHECK(std::isfinite(report.eta_frobenius));
        for (int k = 0; k < data.count(); ++k) {
            const Vector theta =
                schedule_from_alpha(model, fx.system, data.samples.row(k).transpose());
            CHECK(in_region(model, theta));
        }
    }
}

}  // TEST_SUITE
