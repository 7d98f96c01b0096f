#pragma once

#include <string>
#include <vector>

#include "lpvembed/system.hpp"
#include "lpvembed/trajectory.hpp"

namespace lpv {

/// Reference constant attached to a built-in benchmark, with a note on what
/// it measures.
struct PublishedValue {
    std::string name;
    double value = 0.0;
    std::string citation;
};

/// Built-in benchmark: a system plus the trajectory recipe it is normally
/// exercised with and the reference values used by the regression suites.
struct Fixture {
    std::string name;
    SystemDescription system;
    GeneratorSpec default_trajectories;
    double default_sample_period = 0.0;
    int default_count = 0;
    std::vector<PublishedValue> published_values;

    TrajectoryDataset default_dataset() const {
        return generate_trajectories(default_trajectories, default_sample_period, default_count);
    }
    double published(const std::string& key) const;
};

/// Known names: example1 (affine three-variable benchmark), example2
/// (scalar-nonlinearity benchmark). Throws std::invalid_argument otherwise.
Fixture fixture(const std::string& name);
std::vector<std::string> fixture_names();

}  // namespace lpv
