// Command-line front end: embeds systems into affine LPV form, sweeps
// accuracy against the scheduling order, compares against the
// trajectory-PCA baseline, simulates, and dumps frequency responses and
// region geometry. Machine-readable tables go to stdout, diagnostics to
// stderr. Exit codes: 0 success, 2 configuration error, 3 degenerate data,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lpvembed/baseline.hpp"
#include "lpvembed/fixtures.hpp"
#include "lpvembed/model.hpp"
#include "lpvembed/simulate.hpp"

namespace {

using namespace lpv;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

// Rethrows a stage failure with the stage named, preserving the error type.
template <typename F>
auto stage(const char* name, F&& body) {
    auto wrap = [&](const auto& e) {
        const std::string what = e.what();
        return what.rfind(name, 0) == 0 ? what : std::string(name) + ": " + what;
    };
    try {
        return body();
    } catch (const ParseError& e) {
        throw ParseError(wrap(e), e.line(), e.column());
    } catch (const DimensionError& e) {
        throw DimensionError(wrap(e));
    } catch (const DegenerateDataError& e) {
        throw DegenerateDataError(wrap(e));
    } catch (const EvalError& e) {
        throw EvalError(wrap(e));
    } catch (const NumericalError& e) {
        throw NumericalError(wrap(e));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(wrap(e));
    }
}

struct PipelineOptions {
    std::string fixture_name;
    std::string system_path;
    std::string data_path;
    std::string generate_spec;
    double sample_period = 0.0;
    int sample_count = 0;
    int order = 0;
    double energy = 0.0;
    std::string region = "auto";
    std::string std_mode = "sample";
    double eps_sigma = 1e-12;
    double tol_mvee = 1e-7;
    double box_eps = 0.05;
    unsigned seed = 0;  // reserved; current searches are deterministic

    void attach(CLI::App* cmd, bool with_order = true) {
        cmd->add_option("--fixture", fixture_name, "built-in benchmark name");
        cmd->add_option("--system", system_path, "system description file");
        cmd->add_option("--data", data_path, "trajectory CSV");
        cmd->add_option("--generate", generate_spec, "inline generator spec");
        cmd->add_option("--period", sample_period, "sample period for --generate");
        cmd->add_option("--count", sample_count, "sample count for --generate");
        if (with_order) {
            cmd->add_option("--order", order, "number of scheduling variables");
            cmd->add_option("--energy", energy, "pick the order by captured energy ratio");
        }
        cmd->add_option("--region", region, "region strategy: auto|axis-aligned|box|ellipsoid")
            ->check(CLI::IsMember({"auto", "axis", "axis-aligned", "box", "ellipsoid"}));
        cmd->add_option("--std", std_mode, "deviation convention: sample|population")
            ->check(CLI::IsMember({"sample", "population"}));
        cmd->add_option("--eps-sigma", eps_sigma, "inactive-row threshold");
        cmd->add_option("--tol-mvee", tol_mvee, "ellipsoid convergence tolerance");
        cmd->add_option("--box-eps", box_eps, "3D box approximation parameter");
        cmd->add_option("--seed", seed, "seed for randomized search ordering");
    }

    StdMode mode() const {
        return std_mode == "population" ? StdMode::Population : StdMode::Sample;
    }

    RegionStrategy strategy() const {
        if (region == "axis" || region == "axis-aligned") return RegionStrategy::AxisAligned;
        if (region == "box") return RegionStrategy::Box;
        if (region == "ellipsoid") return RegionStrategy::Ellipsoid;
        return RegionStrategy::Auto;
    }
};

struct ResolvedInput {
    SystemDescription system;
    TrajectoryDataset data;
    std::string digest;
};

// Resolves the system source; the fixture, when used, is returned so its
// default dataset stays available.
std::optional<Fixture> resolve_system(const PipelineOptions& opt, ResolvedInput& in) {
    std::optional<Fixture> fx;
    if (!opt.fixture_name.empty() && !opt.system_path.empty())
        throw std::invalid_argument("give either --fixture or --system, not both");
    if (opt.fixture_name.empty() && opt.system_path.empty())
        throw std::invalid_argument("a system source is required (--fixture or --system)");
    if (!opt.fixture_name.empty()) {
        fx = stage("fixture", [&] { return fixture(opt.fixture_name); });
        in.system = fx->system;
    } else {
        in.system = stage("parse_system", [&] { return parse_system_file(opt.system_path); });
    }
    in.digest = source_digest_of(print_system(in.system));
    return fx;
}

ResolvedInput resolve_input(const PipelineOptions& opt) {
    ResolvedInput in;
    const std::optional<Fixture> fx = resolve_system(opt, in);

    const int sources = int(!opt.data_path.empty()) + int(!opt.generate_spec.empty());
    if (sources > 1) throw std::invalid_argument("give either --data or --generate, not both");
    if (!opt.data_path.empty()) {
        in.data = stage("load_trajectories", [&] { return load_trajectories_file(opt.data_path); });
    } else if (!opt.generate_spec.empty()) {
        const GeneratorSpec spec =
            stage("parse_generator_spec", [&] { return parse_generator_spec(opt.generate_spec); });
        if (!(opt.sample_period > 0.0))
            throw std::invalid_argument("--generate requires --period");
        int count = opt.sample_count;
        if (count <= 0) count = spec.default_count();
        if (count <= 0) throw std::invalid_argument("--generate requires --count (no grid signal)");
        in.data = stage("generate_trajectories",
                        [&] { return generate_trajectories(spec, opt.sample_period, count); });
    } else if (fx) {
        in.data = stage("generate_trajectories", [&] { return fx->default_dataset(); });
    } else {
        throw std::invalid_argument("a data source is required (--data or --generate)");
    }
    return in;
}

struct PipelineResult {
    ResolvedInput input;
    CoefficientSeries series;
    Normalizer nrm;
    Decomposition dec;
    ReducedBasis basis;
    Matrix rho;
    SchedulingRegion region;
    AffineLpvModel model;
    AccuracyReport report;
};

int resolve_order(const PipelineOptions& opt, const Decomposition& dec) {
    if (opt.order > 0 && opt.energy > 0.0)
        throw std::invalid_argument("give either --order or --energy, not both");
    if (opt.order > 0) return opt.order;
    if (opt.energy > 0.0)
        return stage("suggest_order", [&] { return suggest_order(dec.singular_values, opt.energy); });
    throw std::invalid_argument("an order is required (--order N or --energy fraction)");
}

PipelineResult run_pipeline(const PipelineOptions& opt) {
    PipelineResult r;
    r.input = resolve_input(opt);
    r.series = stage("build_series", [&] { return build_series(r.input.system, r.input.data); });
    r.nrm = stage("fit_normalizer",
                  [&] { return fit_normalizer(r.series, opt.eps_sigma, opt.mode()); });
    r.dec = stage("decompose", [&] { return decompose(normalize(r.nrm, r.series)); });
    const int order = resolve_order(opt, r.dec);
    r.basis = stage("truncate", [&] { return truncate(r.dec, order); });
    r.rho = stage("reduced_coordinates",
                  [&] { return reduced_coordinates(r.basis, r.nrm, r.series); });
    r.region = stage("region_from_points", [&] {
        return region_from_points(r.rho, opt.strategy(), opt.tol_mvee, opt.box_eps);
    });
    r.model = stage("assemble", [&] { return assemble(r.basis, r.nrm, r.region, r.input.digest); });
    r.report = stage("accuracy", [&] { return accuracy(r.basis, r.nrm, r.series); });
    return r;
}

void print_report(std::ostream& out, const AccuracyReport& report) {
    out << "singular_values";
    for (int i = 0; i < report.singular_values.size(); ++i)
        out << "\t" << fmt(report.singular_values(i));
    out << "\n";
    out << "eta_frobenius\t" << fmt(report.eta_frobenius) << "\n";
    out << "eta_sum\t" << fmt(report.eta_sum) << "\n";
    out << "eta_sqsum\t" << fmt(report.eta_sqsum) << "\n";
    out << "captured_energy_ratio\t" << fmt(report.captured_energy_ratio) << "\n";
}

void print_region(std::ostream& out, const SchedulingRegion& region) {
    out << "region_method\t" << region.method << "\n";
    for (int i = 0; i < region.dim(); ++i)
        out << "region_bound\ttheta" << (i + 1) << "\t" << fmt(region.lower(i)) << "\t"
            << fmt(region.upper(i)) << "\n";
    out << "region_center";
    for (int i = 0; i < region.dim(); ++i) out << "\t" << fmt(region.center(i));
    out << "\n";
    out << "region_volume\t" << fmt(region.volume) << "\n";
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        values.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument("malformed number '" + item + "'");
    }
    return values;
}

Matrix input_matrix_from_spec(const std::string& spec_text, int n_u, double h, int steps) {
    Matrix input = Matrix::Zero(steps, n_u);
    if (spec_text.empty() || spec_text == "zero" || n_u == 0) return input;
    const GeneratorSpec spec = parse_generator_spec(spec_text);
    for (std::size_t j = 0; j < spec.names.size(); ++j) {
        const VariableRole role = variable_role(spec.names[j]);
        if (role.kind != VariableRole::Input || role.index >= n_u)
            throw std::invalid_argument("input generator '" + spec.names[j] +
                                        "' does not name an input channel");
        for (int k = 0; k < steps; ++k) {
            if (const auto* grid = std::get_if<GridSignal>(&spec.signals[j]))
                input(k, role.index) = grid->lo + k * grid->step;
            else {
                const double t = k * h;
                input(k, role.index) =
                    std::get<ExprSignal>(spec.signals[j]).time_function.eval({&t, 1});
            }
        }
    }
    return input;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << contents;
}

// ---------------------------------------------------------------------------

int cmd_embed(const PipelineOptions& opt, const std::string& out_path) {
    const PipelineResult r = run_pipeline(opt);
    print_report(std::cout, r.report);
    std::cout << "order\t" << r.basis.order() << "\n";
    print_region(std::cout, r.region);
    if (!out_path.empty()) {
        write_file(out_path, save_model(r.model));
        std::cout << "model_written\t" << out_path << "\n";
    }
    return 0;
}

int cmd_accuracy(const PipelineOptions& opt, const std::string& orders_text) {
    ResolvedInput in = resolve_input(opt);
    const CoefficientSeries series =
        stage("build_series", [&] { return build_series(in.system, in.data); });
    const Normalizer nrm =
        stage("fit_normalizer", [&] { return fit_normalizer(series, opt.eps_sigma, opt.mode()); });
    const Decomposition dec =
        stage("decompose", [&] { return decompose(normalize(nrm, series)); });

    std::vector<int> orders;
    if (orders_text.find(':') != std::string::npos) {
        const auto colon = orders_text.find(':');
        const int lo = std::stoi(orders_text.substr(0, colon));
        const int hi = std::stoi(orders_text.substr(colon + 1));
        for (int k = lo; k <= hi; ++k) orders.push_back(k);
    } else {
        for (const double v : parse_number_list(orders_text)) orders.push_back(int(v));
    }
    if (orders.empty()) throw std::invalid_argument("empty order sweep");

    std::cout << "order\teta_frobenius\teta_sum\teta_sqsum\tcaptured_energy_ratio\n";
    for (const int order : orders) {
        const ReducedBasis basis = stage("truncate", [&] { return truncate(dec, order); });
        const AccuracyReport report =
            stage("accuracy", [&] { return accuracy(basis, nrm, series); });
        std::cout << order << "\t" << fmt(report.eta_frobenius) << "\t" << fmt(report.eta_sum)
                  << "\t" << fmt(report.eta_sqsum) << "\t" << fmt(report.captured_energy_ratio)
                  << "\n";
    }
    return 0;
}

int cmd_compare(const PipelineOptions& opt) {
    const PipelineResult r = run_pipeline(opt);
    const BaselineResult base = stage("baseline_scheduling_pca", [&] {
        return baseline_scheduling_pca(r.input.data, r.input.system, r.basis.order(),
                                       opt.eps_sigma, opt.mode());
    });
    if (base.rank_deficient_fit)
        std::cerr << "note: baseline regression was rank deficient; minimum-norm fit used\n";
    std::cout << "method\teta_frobenius\teta_sum\teta_sqsum\tregion_method\tregion_volume\n";
    std::cout << "proposed\t" << fmt(r.report.eta_frobenius) << "\t" << fmt(r.report.eta_sum)
              << "\t" << fmt(r.report.eta_sqsum) << "\t" << r.region.method << "\t"
              << fmt(r.region.volume) << "\n";
    std::cout << "baseline\t" << fmt(base.report.eta_frobenius) << "\t"
              << fmt(base.report.eta_sum) << "\t" << fmt(base.report.eta_sqsum) << "\t"
              << base.model.region.method << "\t" << fmt(base.model.region.volume) << "\n";
    return 0;
}

int cmd_simulate(const PipelineOptions& opt, const std::string& model_path,
                 const std::string& x0_text, const std::string& input_spec,
                 const std::string& feedback_text, double h, int steps,
                 const std::string& out_prefix) {
    ResolvedInput in;
    resolve_system(opt, in);  // simulation needs the system only, no dataset
    const AffineLpvModel model =
        stage("load_model", [&] { return load_model_file(model_path); });
    const std::vector<double> x0_values = parse_number_list(x0_text);
    if (static_cast<int>(x0_values.size()) != model.n_x)
        throw std::invalid_argument("--x0 must list " + std::to_string(model.n_x) + " values");
    Vector x0(model.n_x);
    for (int i = 0; i < model.n_x; ++i) x0(i) = x0_values[static_cast<std::size_t>(i)];
    const Matrix input = input_matrix_from_spec(input_spec, model.n_u, h, steps);

    StateFeedback feedback;
    const StateFeedback* fb = nullptr;
    if (!feedback_text.empty()) {
        std::vector<std::vector<double>> rows;
        std::stringstream ss(feedback_text);
        std::string row;
        while (std::getline(ss, row, ';'))
            if (!row.empty()) rows.push_back(parse_number_list(row));
        if (static_cast<int>(rows.size()) != model.n_u)
            throw std::invalid_argument("--feedback needs n_u rows of n_x gains");
        feedback.gain.resize(model.n_u, model.n_x);
        for (int i = 0; i < model.n_u; ++i) {
            if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != model.n_x)
                throw std::invalid_argument("--feedback needs n_u rows of n_x gains");
            for (int j = 0; j < model.n_x; ++j)
                feedback.gain(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        fb = &feedback;
    }

    const SimulationRun nl = stage(
        "simulate_nl", [&] { return simulate_nl(in.system, x0, input, h, steps, 1e9, fb); });
    const SimulationRun lpv = stage("simulate_lpv", [&] {
        return simulate_lpv(model, in.system, x0, input, h, steps, 1e9, fb);
    });

    {
        std::ostringstream buf;
        save_run(nl, buf);
        write_file(out_prefix + "_nl.csv", buf.str());
    }
    {
        std::ostringstream buf;
        save_run(lpv, buf);
        write_file(out_prefix + "_lpv.csv", buf.str());
    }

    const RunComparison cmp = stage("compare_runs", [&] { return compare_runs(nl, lpv); });
    std::cout << "channel\trmse\n";
    for (int i = 0; i < cmp.state_rmse.size(); ++i)
        std::cout << "x" << (i + 1) << "\t" << fmt(cmp.state_rmse(i)) << "\n";
    for (int i = 0; i < cmp.output_rmse.size(); ++i)
        std::cout << "y" << (i + 1) << "\t" << fmt(cmp.output_rmse(i)) << "\n";
    if (nl.diverged || lpv.diverged) std::cerr << "warning: a run diverged and was truncated\n";
    if (lpv.out_of_region > 0)
        std::cerr << "warning: " << lpv.out_of_region << " scheduling samples left the region\n";
    return 0;
}

int cmd_freqresp(const std::string& model_path, const std::string& theta_text, double omega_min,
                 double omega_max, int omega_count, const std::string& out_prefix) {
    const AffineLpvModel model = stage("load_model", [&] { return load_model_file(model_path); });

    std::vector<Vector> thetas;
    std::stringstream ss(theta_text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const std::vector<double> values = parse_number_list(item);
        Vector theta(static_cast<Eigen::Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) theta(static_cast<Eigen::Index>(i)) = values[i];
        thetas.push_back(std::move(theta));
    }
    if (thetas.empty()) throw std::invalid_argument("--theta lists no points");
    if (thetas.size() > 1 && out_prefix.empty())
        throw std::invalid_argument("multiple thetas need --out");

    Vector omegas;
    if (omega_count > 0) {
        if (!(omega_min > 0.0) || !(omega_max > omega_min))
            throw std::invalid_argument("omega grid must satisfy 0 < min < max");
        omegas.resize(omega_count);
        for (int i = 0; i < omega_count; ++i)
            omegas(i) = omega_min * std::pow(omega_max / omega_min,
                                             omega_count == 1 ? 0.0 : double(i) / (omega_count - 1));
    } else {
        omegas = default_frequency_grid();
    }

    for (std::size_t t = 0; t < thetas.size(); ++t) {
        const FrequencyResponse resp = stage(
            "frozen_frequency_response",
            [&] { return frozen_frequency_response(model, thetas[t], omegas); });
        const bool outside = !in_region(model, thetas[t]);
        if (outside)
            std::cerr << "warning: theta " << t << " lies outside the scheduling region\n";
        std::ostringstream buf;
        buf << "omega";
        for (int i = 0; i < model.n_y; ++i)
            for (int j = 0; j < model.n_u; ++j) buf << ",mag_y" << (i + 1) << "_u" << (j + 1);
        buf << ",singular,out_of_region\n";
        for (int w = 0; w < omegas.size(); ++w) {
            buf << fmt(omegas(w));
            const Matrix& mag = resp.magnitudes[static_cast<std::size_t>(w)];
            for (int i = 0; i < model.n_y; ++i)
                for (int j = 0; j < model.n_u; ++j) buf << "," << fmt(mag(i, j));
            buf << "," << int(resp.singular[static_cast<std::size_t>(w)]) << "," << int(outside)
                << "\n";
        }
        if (out_prefix.empty()) {
            std::cout << buf.str();
        } else {
            write_file(out_prefix + "_theta" + std::to_string(t) + ".csv", buf.str());
        }
    }
    return 0;
}

int cmd_region_debug(const PipelineOptions& opt, const std::string& out_prefix) {
    const PipelineResult r = run_pipeline(opt);
    print_region(std::cout, r.region);

    std::ostringstream rho_csv;
    rho_csv << "sample";
    for (int i = 0; i < r.rho.rows(); ++i) rho_csv << ",rho" << (i + 1);
    for (int i = 0; i < r.rho.rows(); ++i) rho_csv << ",theta" << (i + 1);
    rho_csv << "\n";
    for (int k = 0; k < r.rho.cols(); ++k) {
        rho_csv << k;
        for (int i = 0; i < r.rho.rows(); ++i) rho_csv << "," << fmt(r.rho(i, k));
        const Vector theta = r.region.transform(r.rho.col(k));
        for (int i = 0; i < theta.size(); ++i) rho_csv << "," << fmt(theta(i));
        rho_csv << "\n";
    }
    write_file(out_prefix + "_rho.csv", rho_csv.str());

    if (r.rho.rows() >= 2 && r.rho.rows() <= 3) {
        const ConvexHull hull = stage("convex_hull", [&] { return convex_hull(r.rho); });
        std::ostringstream hull_csv;
        hull_csv << "vertex";
        for (int i = 0; i < r.rho.rows(); ++i) hull_csv << ",rho" << (i + 1);
        hull_csv << "\n";
        for (int k = 0; k < hull.vertices.cols(); ++k) {
            hull_csv << k;
            for (int i = 0; i < hull.vertices.rows(); ++i)
                hull_csv << "," << fmt(hull.vertices(i, k));
            hull_csv << "\n";
        }
        write_file(out_prefix + "_hull.csv", hull_csv.str());
    }

    // Region corners in both coordinate systems.
    std::ostringstream corners;
    corners << "corner";
    for (int i = 0; i < r.region.dim(); ++i) corners << ",theta" << (i + 1);
    for (int i = 0; i < r.region.dim(); ++i) corners << ",rho" << (i + 1);
    corners << "\n";
    const int d = r.region.dim();
    for (long mask = 0; mask < (1L << d); ++mask) {
        Vector corner(d);
        for (int i = 0; i < d; ++i)
            corner(i) = (mask >> i) & 1 ? r.region.upper(i) : r.region.lower(i);
        corners << mask;
        for (int i = 0; i < d; ++i) corners << "," << fmt(corner(i));
        const Vector back = r.region.inverse_transform(corner);
        for (int i = 0; i < d; ++i) corners << "," << fmt(back(i));
        corners << "\n";
    }
    write_file(out_prefix + "_region.csv", corners.str());
    std::cout << "files_written\t" << out_prefix << "_rho.csv," << out_prefix << "_region.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affine LPV embedding toolkit"};
    app.require_subcommand(1);

    PipelineOptions opt;
    std::string out_path;
    std::string orders_text;
    std::string model_path;
    std::string x0_text = "0";
    std::string input_spec = "zero";
    std::string theta_text;
    std::string feedback_text;
    double h = 1e-3;
    int steps = 100;
    double omega_min = 0.0, omega_max = 0.0;
    int omega_count = 0;

    CLI::App* embed = app.add_subcommand("embed", "run the full embedding pipeline");
    opt.attach(embed);
    embed->add_option("--out", out_path, "write the model JSON here");

    CLI::App* accuracy_cmd = app.add_subcommand("accuracy", "sweep eta against the order");
    opt.attach(accuracy_cmd, /*with_order=*/false);
    accuracy_cmd->add_option("--orders", orders_text, "orders to sweep, '1:5' or '1,2,3'")
        ->required();

    CLI::App* compare = app.add_subcommand("compare", "proposed vs trajectory-PCA baseline");
    opt.attach(compare);

    CLI::App* simulate = app.add_subcommand("simulate", "integrate the source and the model");
    opt.attach(simulate, /*with_order=*/false);
    simulate->add_option("--model", model_path, "model JSON")->required();
    simulate->add_option("--x0", x0_text, "initial state, comma separated");
    simulate->add_option("--input", input_spec, "input generator spec or 'zero'");
    simulate->add_option("--feedback", feedback_text,
                         "constant state-feedback gain, rows 'g11,g12;g21,g22'");
    simulate->add_option("--step", h, "integration step size");
    simulate->add_option("--steps", steps, "step count");
    simulate->add_option("--out", out_path, "output CSV prefix")->required();

    CLI::App* freqresp = app.add_subcommand("freqresp", "frozen frequency responses");
    freqresp->add_option("--model", model_path, "model JSON")->required();
    freqresp->add_option("--theta", theta_text, "theta points 'a,b;c,d'")->required();
    freqresp->add_option("--omega-min", omega_min, "grid start, rad/s");
    freqresp->add_option("--omega-max", omega_max, "grid end, rad/s");
    freqresp->add_option("--omega-count", omega_count, "grid size");
    freqresp->add_option("--out", out_path, "output CSV prefix");

    CLI::App* region_debug = app.add_subcommand("region-debug", "dump region geometry as CSV");
    opt.attach(region_debug);
    region_debug->add_option("--out", out_path, "output CSV prefix")->required();

    // Command-line values override config-file values; the config tokens are
    // spliced in first, so the last occurrence wins.
    std::string config_display;
    for (auto* sub : app.get_subcommands({})) {
        sub->add_option("--config", config_display, "key=value configuration file");
        for (auto* option : sub->get_options()) option->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    }

    std::vector<std::string> args(argv + 1, argv + argc);
    std::string config_path;
    for (std::size_t i = 0; i < args.size();) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
            args.erase(args.begin() + static_cast<long>(i));
        } else {
            ++i;
        }
    }
    if (!config_path.empty()) {
        std::ifstream cfg(config_path);
        if (!cfg) {
            std::cerr << "error: cannot open config file '" << config_path << "'\n";
            return 2;
        }
        if (args.empty()) {
            std::cerr << "error: --config requires a subcommand\n";
            return 2;
        }
        std::vector<std::string> tokens;
        std::string line;
        int line_no = 0;
        while (std::getline(cfg, line)) {
            ++line_no;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos) continue;
            const auto last = line.find_last_not_of(" \t\r");
            line = line.substr(first, last - first + 1);
            const auto eq = line.find('=');
            if (eq == std::string::npos || eq == 0) {
                std::cerr << "error: " << config_path << ":" << line_no
                          << ": expected key=value\n";
                return 2;
            }
            std::string key = line.substr(0, eq);
            while (!key.empty() && (key.back() == ' ' || key.back() == '\t')) key.pop_back();
            std::string value = line.substr(eq + 1);
            while (!value.empty() && (value.front() == ' ' || value.front() == '\t'))
                value.erase(value.begin());
            tokens.push_back("--" + key);
            tokens.push_back(value);
        }
        args.insert(args.begin() + 1, tokens.begin(), tokens.end());
    }

    try {
        std::reverse(args.begin(), args.end());  // CLI11 consumes args as a stack
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (embed->parsed()) return cmd_embed(opt, out_path);
        if (accuracy_cmd->parsed()) return cmd_accuracy(opt, orders_text);
        if (compare->parsed()) return cmd_compare(opt);
        if (simulate->parsed())
            return cmd_simulate(opt, model_path, x0_text, input_spec, feedback_text, h, steps,
                                out_path);
        if (freqresp->parsed())
            return cmd_freqresp(model_path, theta_text, omega_min, omega_max, omega_count, out_path);
        if (region_debug->parsed()) return cmd_region_debug(opt, out_path);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateDataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const EvalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
