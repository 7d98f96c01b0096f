#include <doctest.h>

#include <cmath>
#include <sstream>

#include "lpvembed/fixtures.hpp"
#include "lpvembed/trajectory.hpp"

using namespace lpv;

TEST_SUITE("trajectory") {

TEST_CASE("load reads the period off the time column") {
    std::istringstream in("t,a1\n0,1\n0.001,2\n0.002,3\n");
    const TrajectoryDataset data = load_trajectories(in);
    CHECK(data.sample_period == doctest::Approx(0.001).epsilon(1e-12));
    CHECK(data.count() == 3);
    CHECK(data.dim() == 1);
    CHECK(data.samples(2, 0) == 3.0);
}

TEST_CASE("non-uniform spacing is rejected") {
    std::istringstream in("t,a1\n0,1\n0.1,2\n0.3,3\n");
    CHECK_THROWS_AS(load_trajectories(in), ParseError);
}

TEST_CASE("malformed rows are rejected") {
    std::istringstream ragged("t,a1\n0,1\n0.1\n");
    CHECK_THROWS_AS(load_trajectories(ragged), ParseError);
    std::istringstream alpha_cell("t,a1\n0,1\n0.1,abc\n");
    CHECK_THROWS_AS(load_trajectories(alpha_cell), ParseError);
    std::istringstream single("t,a1\n0,1\n");
    CHECK_THROWS_AS(load_trajectories(single), ParseError);
    std::istringstream bad_header("time,a1\n0,1\n0.1,2\n");
    CHECK_THROWS_AS(load_trajectories(bad_header), ParseError);
}

TEST_CASE("benchmark trajectories round-trip through save/load bit-exactly") {
    const Fixture fx = fixture("example1");
    const TrajectoryDataset data = fx.default_dataset();
    std::ostringstream out;
    save_trajectories(data, fx.default_trajectories.names, out);
    std::istringstream in(out.str());
    const TrajectoryDataset reloaded = load_trajectories(in);
    REQUIRE(reloaded.count() == data.count());
    CHECK(reloaded.sample_period == data.sample_period);
    CHECK((reloaded.samples - data.samples).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("generator expressions evaluate at t = k*T") {
    const GeneratorSpec spec = parse_generator_spec("a1=2*sin(10*t)^2; a2=5*cos(20*t+pi/5)^2");
    const TrajectoryDataset data = generate_trajectories(spec, 1e-3, 100);
    CHECK(data.samples(0, 0) == 0.0);
    CHECK(data.samples(0, 1) == doctest::Approx(3.2725424859373686).epsilon(1e-14));
    CHECK(data.samples(50, 0) ==
          doctest::Approx(2.0 * std::pow(std::sin(0.5), 2.0)).epsilon(1e-14));
}

TEST_CASE("grid generator sweeps inclusively") {
    const GeneratorSpec spec = parse_generator_spec("x1=grid(-pi/2,pi/2,0.01)");
    const int count = spec.default_count();
    CHECK(count == 315);
    const TrajectoryDataset data = generate_trajectories(spec, 0.01, count);
    CHECK(data.samples(0, 0) == doctest::Approx(-M_PI_2).epsilon(1e-15));
    CHECK(data.samples(count - 1, 0) <= M_PI_2);
    CHECK(data.samples(count - 1, 0) > M_PI_2 - 0.01);
    CHECK_THROWS_AS(generate_trajectories(spec, 0.01, count + 1), std::invalid_argument);
}

TEST_CASE("sine and multisine desugar to expressions") {
    const GeneratorSpec spec =
        parse_generator_spec("a1=sine(2,10,0,1); a2=multisine(1,1,0, 0.5,3,pi/2)");
    const TrajectoryDataset data = generate_trajectories(spec, 0.1, 5);
    CHECK(data.samples(3, 0) == doctest::Approx(2.0 * std::sin(3.0) + 1.0).epsilon(1e-14));
    CHECK(data.samples(3, 1) ==
          doctest::Approx(std::sin(0.3) + 0.5 * std::sin(0.9 + M_PI_2)).epsilon(1e-14));
}

TEST_CASE("generator spec validation") {
    CHECK_THROWS_AS(parse_generator_spec(""), ParseError);
    CHECK_THROWS_AS(parse_generator_spec("a1=grid(1,0,0.1)"), ParseError);
    CHECK_THROWS_AS(parse_generator_spec("a1=grid(0,1,0)"), ParseError);
    CHECK_THROWS_AS(parse_generator_spec("a1=sine(1,2)"), ParseError);
    CHECK_THROWS_AS(parse_generator_spec("a1=1; a1=2"), ParseError);
    CHECK_THROWS_AS(parse_generator_spec("a1=q*t"), ParseError);
    CHECK_THROWS_AS(generate_trajectories(parse_generator_spec("a1=t"), 0.0, 10),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_trajectories(parse_generator_spec("a1=t"), 0.1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_trajectories(parse_generator_spec("a1=1/(t-1)"), 0.5, 5), EvalError);
}

}  // TEST_SUITE
