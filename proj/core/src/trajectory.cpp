#include "lpvembed/trajectory.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace lpv {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc());
    return std::string(buf, end);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t p = s.find(sep, start);
        if (p == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, p - start));
        start = p + 1;
    }
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_cell(std::string_view cell, int line) {
    cell = strip(cell);
    double v = 0.0;
    auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || end != cell.data() + cell.size())
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line, 1);
    if (!std::isfinite(v)) throw ParseError("non-finite cell", line, 1);
    return v;
}

// Evaluates a constant sub-expression (generator arguments), so `pi/2` works.
double constant_arg(std::string_view text) {
    static const std::vector<std::string> no_vars;
    const Expr e = parse_expression(text, no_vars);
    return e.eval({});
}

}  // namespace

TrajectoryDataset load_trajectories(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty trajectory CSV", 1, 1);
    const auto header = split(strip(line), ',');
    if (header.size() < 2 || strip(header[0]) != "t")
        throw ParseError("header must be 't,<var1>,...'", 1, 1);
    const int n_vars = static_cast<int>(header.size()) - 1;

    std::vector<double> times;
    std::vector<double> values;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view text = strip(line);
        if (text.empty()) continue;
        const auto cells = split(text, ',');
        if (static_cast<int>(cells.size()) != n_vars + 1)
            throw ParseError("expected " + std::to_string(n_vars + 1) + " cells, found " +
                                 std::to_string(cells.size()),
                             line_no, 1);
        times.push_back(parse_cell(cells[0], line_no));
        for (int j = 1; j <= n_vars; ++j) values.push_back(parse_cell(cells[static_cast<std::size_t>(j)], line_no));
    }
    const int n = static_cast<int>(times.size());
    if (n < 2) throw ParseError("need at least two samples", line_no, 1);

    const double period = (times.back() - times.front()) / (n - 1);
    if (!(period > 0.0)) throw ParseError("time column must be strictly increasing", 1, 1);
    for (int k = 0; k + 1 < n; ++k) {
        const double gap = times[static_cast<std::size_t>(k) + 1] - times[static_cast<std::size_t>(k)];
        if (std::abs(gap - period) > 1e-9 * period)
            throw ParseError("non-uniform sample spacing at row " + std::to_string(k + 2) +
                                 " (gap " + format_double(gap) + ", period " + format_double(period) + ")",
                             k + 3, 1);
    }

    TrajectoryDataset data;
    data.sample_period = period;
    data.samples.resize(n, n_vars);
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n_vars; ++j)
            data.samples(k, j) = values[static_cast<std::size_t>(k) * n_vars + j];
    return data;
}

TrajectoryDataset load_trajectories_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open trajectory CSV '" + path + "'");
    return load_trajectories(in);
}

void save_trajectories(const TrajectoryDataset& data, std::span<const std::string> names,
                       std::ostream& out) {
    if (static_cast<int>(names.size()) != data.dim())
        throw DimensionError("save_trajectories: name count does not match dataset width");
    out << "t";
    for (const auto& n : names) out << "," << n;
    out << "\n";
    for (int k = 0; k < data.count(); ++k) {
        out << format_double(k * data.sample_period);
        for (int j = 0; j < data.dim(); ++j) out << "," << format_double(data.samples(k, j));
        out << "\n";
    }
}

int GridSignal::capacity() const {
    if (!(step > 0.0) || hi < lo) return 0;
    // Inclusive sweep; the epsilon keeps an exact hit of `hi` inside.
    return static_cast<int>(std::floor((hi - lo) / step * (1.0 + 1e-12))) + 1;
}

int GeneratorSpec::default_count() const {
    int count = -1;
    for (const auto& s : signals)
        if (const auto* grid = std::get_if<GridSignal>(&s))
            count = count < 0 ? grid->capacity() : std::min(count, grid->capacity());
    return count;
}

GeneratorSpec parse_generator_spec(std::string_view text) {
    static const std::vector<std::string> time_var = {"t"};
    GeneratorSpec spec;
    for (std::string_view item : split(text, ';')) {
        item = strip(item);
        if (item.empty()) continue;
        const std::size_t eq = item.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("generator item must be '<name>=<generator>'", 1, 1);
        const std::string name(strip(item.substr(0, eq)));
        if (name.empty()) throw ParseError("generator item has an empty name", 1, 1);
        for (const auto& existing : spec.names)
            if (existing == name) throw ParseError("duplicate generator for '" + name + "'", 1, 1);
        std::string_view body = strip(item.substr(eq + 1));

        auto call_args = [&](std::string_view keyword) -> std::vector<double> {
            // body is known to start with `keyword(` and must end with `)`.
            if (body.back() != ')')
                throw ParseError("malformed " + std::string(keyword) + "(...) generator", 1, 1);
            const std::string_view inner =
                body.substr(keyword.size() + 1, body.size() - keyword.size() - 2);
            std::vector<double> args;
            for (const auto a : split(inner, ',')) args.push_back(constant_arg(strip(a)));
            return args;
        };

        spec.names.push_back(name);
        if (body.starts_with("grid(")) {
            const auto args = call_args("grid");
            if (args.size() != 3) throw ParseError("grid() expects (lo,hi,step)", 1, 1);
            GridSignal g{args[0], args[1], args[2]};
            if (!(g.step > 0.0)) throw ParseError("grid() step must be positive", 1, 1);
            if (g.hi < g.lo) throw ParseError("grid() upper bound below lower bound", 1, 1);
            spec.signals.emplace_back(g);
        } else if (body.starts_with("sine(")) {
            const auto args = call_args("sine");
            if (args.size() != 4) throw ParseError("sine() expects (amplitude,frequency,phase,offset)", 1, 1);
            Expr phase = Expr::binary(
                BinaryOp::Add,
                Expr::binary(BinaryOp::Mul, Expr::constant(args[1]), Expr::variable(0)),
                Expr::constant(args[2]));
            Expr wave = Expr::binary(BinaryOp::Mul, Expr::constant(args[0]),
                                     Expr::unary(UnaryOp::Sin, std::move(phase)));
            spec.signals.emplace_back(ExprSignal{
                Expr::binary(BinaryOp::Add, std::move(wave), Expr::constant(args[3]))});
        } else if (body.starts_with("multisine(")) {
            const auto args = call_args("multisine");
            if (args.empty() || args.size() % 3 != 0)
                throw ParseError("multisine() expects (a1,w1,p1, a2,w2,p2, ...)", 1, 1);
            Expr sum = Expr::constant(0.0);
            for (std::size_t k = 0; k < args.size(); k += 3) {
                Expr phase = Expr::binary(
                    BinaryOp::Add,
                    Expr::binary(BinaryOp::Mul, Expr::constant(args[k + 1]), Expr::variable(0)),
                    Expr::constant(args[k + 2]));
                Expr wave = Expr::binary(BinaryOp::Mul, Expr::constant(args[k]),
                                         Expr::unary(UnaryOp::Sin, std::move(phase)));
                sum = Expr::binary(BinaryOp::Add, std::move(sum), std::move(wave));
            }
            spec.signals.emplace_back(ExprSignal{std::move(sum)});
        } else {
            spec.signals.emplace_back(ExprSignal{parse_expression(body, time_var)});
        }
    }
    if (spec.names.empty()) throw ParseError("empty generator spec", 1, 1);
    return spec;
}

TrajectoryDataset generate_trajectories(const GeneratorSpec& spec, double sample_period, int count) {
    if (!(sample_period > 0.0)) throw std::invalid_argument("sample period must be positive");
    if (count < 2) throw std::invalid_argument("need at least two samples");
    for (std::size_t j = 0; j < spec.signals.size(); ++j)
        if (const auto* grid = std::get_if<GridSignal>(&spec.signals[j]))
            if (grid->capacity() < count)
                throw std::invalid_argument("grid generator '" + spec.names[j] + "' holds only " +
                                            std::to_string(grid->capacity()) + " samples, " +
                                            std::to_string(count) + " requested");

    TrajectoryDataset data;
    data.sample_period = sample_period;
    data.samples.resize(count, static_cast<int>(spec.signals.size()));
    for (int k = 0; k < count; ++k) {
        const double t = k * sample_period;
        for (std::size_t j = 0; j < spec.signals.size(); ++j) {
            double v = 0.0;
            if (const auto* grid = std::get_if<GridSignal>(&spec.signals[j])) {
                v = grid->lo + k * grid->step;
            } else {
                v = std::get<ExprSignal>(spec.signals[j]).time_function.eval({&t, 1});
            }
            if (!std::isfinite(v))
                throw EvalError("generator '" + spec.names[j] + "' produced a non-finite sample at t=" +
                                format_double(t));
            data.samples(k, static_cast<int>(j)) = v;
        }
    }
    return data;
}

}  // namespace lpv
