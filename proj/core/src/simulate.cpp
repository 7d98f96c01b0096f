#include "lpvembed/simulate.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <functional>
#include <ostream>

namespace lpv {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc());
    return std::string(buf, end);
}

Vector held_input(const Matrix& input, int n_u, int k) {
    if (input.rows() == 0 || n_u == 0) return Vector::Zero(n_u);
    const Eigen::Index row = std::min<Eigen::Index>(k, input.rows() - 1);
    return input.row(row).transpose();
}

// Blends the corner gains multilinearly at theta's position in the region;
// theta components outside the box saturate at the nearest corner.
Matrix blended_gain(const StateFeedback& fb, const AffineLpvModel& model, const Vector& theta) {
    const int d = model.n_theta();
    if (fb.vertex_gains.size() != (std::size_t{1} << d))
        throw DimensionError("simulate: scheduled feedback needs one gain per region corner (" +
                             std::to_string(std::size_t{1} << d) + ")");
    Matrix g = Matrix::Zero(fb.vertex_gains[0].rows(), fb.vertex_gains[0].cols());
    for (std::size_t mask = 0; mask < fb.vertex_gains.size(); ++mask) {
        double w = 1.0;
        for (int i = 0; i < d; ++i) {
            const double span = model.region.upper(i) - model.region.lower(i);
            double s = span > 0.0 ? (theta(i) - model.region.lower(i)) / span : 0.5;
            s = std::clamp(s, 0.0, 1.0);
            w *= (mask >> i) & 1 ? s : 1.0 - s;
        }
        g += w * fb.vertex_gains[mask];
    }
    return g;
}

void validate_feedback(const StateFeedback& fb, int n_x, int n_u) {
    const Matrix& probe = fb.vertex_gains.empty() ? fb.gain : fb.vertex_gains.front();
    if (probe.rows() != n_u || probe.cols() != n_x)
        throw DimensionError("simulate: feedback gain must be n_u x n_x");
    for (const Matrix& g : fb.vertex_gains)
        if (g.rows() != n_u || g.cols() != n_x)
            throw DimensionError("simulate: every corner gain must be n_u x n_x");
}

// Shared RK4 driver. The reference signal is held constant within each step
// (zero-order hold); `control` turns the stage state and the held reference
// into the applied input, so feedback acts continuously at every stage.
SimulationRun integrate(int n_x, int n_u, int n_y, const Vector& x0, const Matrix& input,
                        double step, int steps, double divergence_cap,
                        const std::function<Vector(const Vector&, const Vector&)>& control,
                        const std::function<Vector(const Vector&, const Vector&)>& deriv,
                        const std::function<Vector(const Vector&, const Vector&)>& output) {
    if (!(step > 0.0)) throw std::invalid_argument("simulate: step must be positive");
    if (steps < 0) throw std::invalid_argument("simulate: negative step count");
    if (x0.size() != n_x) throw DimensionError("simulate: initial state has the wrong length");
    if (input.rows() > 0 && input.cols() != n_u)
        throw DimensionError("simulate: input signal has the wrong width");

    SimulationRun run;
    run.step = step;
    run.states.resize(steps + 1, n_x);
    run.outputs.resize(steps, n_y);
    run.inputs.resize(steps, n_u);
    run.states.row(0) = x0.transpose();

    Vector x = x0;
    int completed = 0;
    for (int k = 0; k < steps; ++k) {
        const Vector r = held_input(input, n_u, k);
        const Vector u0 = control(x, r);
        run.inputs.row(k) = u0.transpose();
        run.outputs.row(k) = output(x, u0).transpose();

        auto field = [&](const Vector& xs) { return deriv(xs, control(xs, r)); };
        const Vector k1 = field(x);
        const Vector k2 = field(x + (step / 2.0) * k1);
        const Vector k3 = field(x + (step / 2.0) * k2);
        const Vector k4 = field(x + step * k3);
        x = x + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        if (!x.allFinite() || x.cwiseAbs().maxCoeff() > divergence_cap) {
            run.diverged = true;
            run.diverged_at = k;
            break;
        }
        run.states.row(k + 1) = x.transpose();
        ++completed;
    }
    run.horizon = completed;
    if (run.diverged) {
        run.states.conservativeResize(completed + 1, n_x);
        run.outputs.conservativeResize(completed, n_y);
        run.inputs.conservativeResize(completed, n_u);
    }
    return run;
}

}  // namespace

SimulationRun simulate_nl(const SystemDescription& sys, const Vector& x0, const Matrix& input,
                          double step, int steps, double divergence_cap,
                          const StateFeedback* feedback, const AffineLpvModel* gain_model) {
    const int n_x = sys.n_x, n_u = sys.n_u, n_y = sys.n_y;
    if (feedback) {
        validate_feedback(*feedback, n_x, n_u);
        if (!feedback->vertex_gains.empty() && !gain_model)
            throw DimensionError("simulate_nl: scheduled feedback gains need a model for theta");
    }
    auto control = [&](const Vector& x, const Vector& reference) -> Vector {
        if (!feedback) return reference;
        if (feedback->vertex_gains.empty()) return reference - feedback->gain * x;
        const Vector theta = schedule_from_alpha(
            *gain_model, sys, alpha_from_state_input(sys, x, reference));
        return reference - blended_gain(*feedback, *gain_model, theta) * x;
    };
    auto blocks = [&](const Vector& x, const Vector& u) {
        return eval_matrix(sys, alpha_from_state_input(sys, x, u));
    };
    auto deriv = [&](const Vector& x, const Vector& u) -> Vector {
        const Matrix L = blocks(x, u);
        return L.topLeftCorner(n_x, n_x) * x + L.topRightCorner(n_x, n_u) * u;
    };
    auto output = [&](const Vector& x, const Vector& u) -> Vector {
        const Matrix L = blocks(x, u);
        return L.bottomLeftCorner(n_y, n_x) * x + L.bottomRightCorner(n_y, n_u) * u;
    };
    return integrate(n_x, n_u, n_y, x0, input, step, steps, divergence_cap, control, deriv,
                     output);
}

SimulationRun simulate_lpv(const AffineLpvModel& model, const SystemDescription& sys,
                           const Vector& x0, const Matrix& input, double step, int steps,
                           double divergence_cap, const StateFeedback* feedback) {
    const int n_x = model.n_x, n_u = model.n_u, n_y = model.n_y;
    if (sys.n_x != n_x || sys.n_u != n_u || sys.n_y != n_y)
        throw DimensionError("simulate_lpv: model and system dimensions disagree");
    if (feedback) validate_feedback(*feedback, n_x, n_u);

    Matrix theta_trace(steps, model.n_theta());
    long out_of_region = 0;
    int recorded = 0;

    auto theta_at = [&](const Vector& x, const Vector& u) {
        return schedule_from_alpha(model, sys, alpha_from_state_input(sys, x, u));
    };
    auto control = [&](const Vector& x, const Vector& reference) -> Vector {
        if (!feedback) return reference;
        if (feedback->vertex_gains.empty()) return reference - feedback->gain * x;
        return reference - blended_gain(*feedback, model, theta_at(x, reference)) * x;
    };
    auto deriv = [&](const Vector& x, const Vector& u) -> Vector {
        const Matrix L = evaluate(model, theta_at(x, u));
        return L.topLeftCorner(n_x, n_x) * x + L.topRightCorner(n_x, n_u) * u;
    };
    auto output = [&](const Vector& x, const Vector& u) -> Vector {
        // Called once per step start; record the scheduling trace here.
        const Vector theta = theta_at(x, u);
        if (recorded < steps) theta_trace.row(recorded++) = theta.transpose();
        if (!in_region(model, theta)) ++out_of_region;
        const Matrix L = evaluate(model, theta);
        return L.bottomLeftCorner(n_y, n_x) * x + L.bottomRightCorner(n_y, n_u) * u;
    };

    SimulationRun run = integrate(n_x, n_u, n_y, x0, input, step, steps, divergence_cap,
                                  control, deriv, output);
    theta_trace.conservativeResize(run.outputs.rows(), model.n_theta());
    run.theta = std::move(theta_trace);
    run.out_of_region = out_of_region;
    return run;
}

RunComparison compare_runs(const SimulationRun& a, const SimulationRun& b) {
    if (a.step != b.step || a.horizon != b.horizon)
        throw DimensionError("compare_runs: runs have different step or horizon");
    if (a.states.cols() != b.states.cols() || a.outputs.cols() != b.outputs.cols())
        throw DimensionError("compare_runs: runs have different channel counts");

    RunComparison cmp;
    cmp.state_rmse.resize(a.states.cols());
    for (Eigen::Index j = 0; j < a.states.cols(); ++j)
        cmp.state_rmse(j) = (a.states.col(j) - b.states.col(j)).norm() /
                            std::sqrt(double(a.states.rows()));
    cmp.output_rmse.resize(a.outputs.cols());
    for (Eigen::Index j = 0; j < a.outputs.cols(); ++j)
        cmp.output_rmse(j) = a.outputs.rows() == 0
                                 ? 0.0
                                 : (a.outputs.col(j) - b.outputs.col(j)).norm() /
                                       std::sqrt(double(a.outputs.rows()));
    return cmp;
}

void save_run(const SimulationRun& run, std::ostream& out) {
    out << "t";
    for (Eigen::Index j = 0; j < run.states.cols(); ++j) out << ",x" << (j + 1);
    for (Eigen::Index j = 0; j < run.outputs.cols(); ++j) out << ",y" << (j + 1);
    for (Eigen::Index j = 0; j < run.inputs.cols(); ++j) out << ",u" << (j + 1);
    for (Eigen::Index j = 0; j < run.theta.cols(); ++j) out << ",theta" << (j + 1);
    out << "\n";
    for (Eigen::Index k = 0; k < run.states.rows(); ++k) {
        out << format_double(k * run.step);
        for (Eigen::Index j = 0; j < run.states.cols(); ++j)
            out << "," << format_double(run.states(k, j));
        const bool has_step_data = k < run.outputs.rows();
        for (Eigen::Index j = 0; j < run.outputs.cols(); ++j)
            out << "," << (has_step_data ? format_double(run.outputs(k, j)) : "");
        for (Eigen::Index j = 0; j < run.inputs.cols(); ++j)
            out << "," << (k < run.inputs.rows() ? format_double(run.inputs(k, j)) : "");
        for (Eigen::Index j = 0; j < run.theta.cols(); ++j)
            out << "," << (k < run.theta.rows() ? format_double(run.theta(k, j)) : "");
        out << "\n";
    }
}

}  // namespace lpv
