#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lpvembed/expression.hpp"
#include "lpvembed/types.hpp"

namespace lpv {

/// A uniformly sampled bundle of variable trajectories; row k holds the
/// values at t = k * sample_period.
struct TrajectoryDataset {
    double sample_period = 0.0;
    Matrix samples;  // N x n_alpha

    int count() const { return static_cast<int>(samples.rows()); }
    int dim() const { return static_cast<int>(samples.cols()); }
};

/// Reads `t,<var1>,...,<varn>` CSV. The time column must be strictly
/// increasing and uniform; spacing deviations beyond 1e-9 relative to the
/// inferred period are rejected.
TrajectoryDataset load_trajectories(std::istream& in);
TrajectoryDataset load_trajectories_file(const std::string& path);

/// Writes the dataset in the load_trajectories format at full precision, so
/// a save/load pair is bit-exact.
void save_trajectories(const TrajectoryDataset& data, std::span<const std::string> names,
                       std::ostream& out);

/// Index-driven sweep lo, lo+step, ... capped at hi.
struct GridSignal {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
    /// Number of samples the sweep can produce.
    int capacity() const;
};

/// Time-driven signal, an expression in the single variable t.
struct ExprSignal {
    Expr time_function;
};

using SignalGenerator = std::variant<GridSignal, ExprSignal>;

struct GeneratorSpec {
    std::vector<std::string> names;
    std::vector<SignalGenerator> signals;

    /// Sample count implied by grid signals (their smallest capacity), or -1
    /// when every signal is time-driven.
    int default_count() const;
};

/// Parses `name=<generator>; name=<generator>` where a generator is one of
///   grid(lo,hi,step)
///   sine(amplitude,frequency,phase,offset)
///   multisine(a1,w1,p1, a2,w2,p2, ...)
///   <expression of t>
/// sine/multisine desugar into expressions of t; numeric arguments are
/// constant expressions (so `pi/2` is accepted).
GeneratorSpec parse_generator_spec(std::string_view text);

/// Samples every generator: grid signals at index k, expression signals at
/// t = k * sample_period, for k = 0..count-1.
TrajectoryDataset generate_trajectories(const GeneratorSpec& spec, double sample_period, int count);

}  // namespace lpv
