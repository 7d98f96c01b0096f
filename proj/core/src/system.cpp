#include "lpvembed/system.hpp"

#include <cassert>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lpv {

namespace {

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    assert(ec == std::errc());
    return std::string(buf, end);
}

std::vector<std::string_view> split_fields(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

int parse_int(std::string_view s, int line, const char* what) {
    int value = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'", line, 1);
    return value;
}

double parse_double(std::string_view s, int line, const char* what) {
    double value = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || end != s.data() + s.size())
        throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'", line, 1);
    return value;
}

}  // namespace

SystemDescription parse_system(std::string_view text) {
    SystemDescription sys;
    bool have_dims = false;
    bool have_vars = false;
    std::vector<std::pair<std::string, std::pair<double, double>>> bounds;
    std::vector<bool> assigned;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        if (line.starts_with("dims:")) {
            const auto fields = split_fields(line.substr(5));
            if (fields.size() != 3) throw ParseError("dims: expects 'nx nu ny'", line_no, 1);
            sys.n_x = parse_int(fields[0], line_no, "dimension");
            sys.n_u = parse_int(fields[1], line_no, "dimension");
            sys.n_y = parse_int(fields[2], line_no, "dimension");
            if (sys.n_x < 0 || sys.n_u < 0 || sys.n_y < 0 || sys.rows() <= 0 || sys.cols() <= 0)
                throw ParseError("dimensions must define a nonempty matrix grid", line_no, 1);
            sys.entries.assign(static_cast<std::size_t>(sys.rows()) * sys.cols(), Expr());
            assigned.assign(sys.entries.size(), false);
            have_dims = true;
            continue;
        }
        if (line.starts_with("vars:")) {
            for (const auto f : split_fields(line.substr(5))) sys.variable_names.emplace_back(f);
            if (sys.variable_names.empty()) throw ParseError("vars: expects at least one name", line_no, 1);
            for (std::size_t i = 0; i < sys.variable_names.size(); ++i)
                for (std::size_t j = i + 1; j < sys.variable_names.size(); ++j)
                    if (sys.variable_names[i] == sys.variable_names[j])
                        throw ParseError("duplicate variable '" + sys.variable_names[i] + "'", line_no, 1);
            have_vars = true;
            continue;
        }
        if (line.starts_with("bounds:")) {
            const auto fields = split_fields(line.substr(7));
            if (fields.size() != 3) throw ParseError("bounds: expects '<name> <lo> <hi>'", line_no, 1);
            const double lo = parse_double(fields[1], line_no, "bound");
            const double hi = parse_double(fields[2], line_no, "bound");
            if (lo > hi) throw ParseError("bounds: lower exceeds upper", line_no, 1);
            bounds.emplace_back(std::string(fields[0]), std::make_pair(lo, hi));
            continue;
        }
        if (line.starts_with("L[")) {
            if (!have_dims) throw ParseError("entry before dims:", line_no, 1);
            if (!have_vars) throw ParseError("entry before vars:", line_no, 1);
            const std::size_t close = line.find(']');
            const std::size_t eq = line.find('=');
            const std::size_t comma = line.find(',');
            if (close == std::string_view::npos || eq == std::string_view::npos ||
                comma == std::string_view::npos || comma > close || eq < close)
                throw ParseError("malformed entry line, expected 'L[i,j] = <expression>'", line_no, 1);
            const int i = parse_int(strip(line.substr(2, comma - 2)), line_no, "row index");
            const int j = parse_int(strip(line.substr(comma + 1, close - comma - 1)), line_no, "column index");
            if (i < 1 || i > sys.rows() || j < 1 || j > sys.cols())
                throw ParseError("entry L[" + std::to_string(i) + "," + std::to_string(j) +
                                     "] outside the " + std::to_string(sys.rows()) + "x" +
                                     std::to_string(sys.cols()) + " grid",
                                 line_no, 1);
            const std::size_t flat = static_cast<std::size_t>(i - 1) * sys.cols() + (j - 1);
            if (assigned[flat])
                throw ParseError("duplicate entry L[" + std::to_string(i) + "," + std::to_string(j) + "]",
                                 line_no, 1);
            std::string_view expr_text = line.substr(eq + 1);
            sys.entries[flat] = parse_expression(expr_text, sys.variable_names, line_no,
                                                 static_cast<int>(eq + 2));
            assigned[flat] = true;
            continue;
        }
        throw ParseError("unrecognized directive", line_no, 1);
    }

    if (!have_dims) throw ParseError("missing dims: line", line_no, 1);
    if (!have_vars) throw ParseError("missing vars: line", line_no, 1);

    if (!bounds.empty()) {
        Bounds box;
        box.lower = Vector::Constant(sys.n_alpha(), -std::numeric_limits<double>::infinity());
        box.upper = Vector::Constant(sys.n_alpha(), std::numeric_limits<double>::infinity());
        std::vector<bool> seen(static_cast<std::size_t>(sys.n_alpha()), false);
        for (const auto& [name, range] : bounds) {
            int idx = -1;
            for (int i = 0; i < sys.n_alpha(); ++i)
                if (sys.variable_names[static_cast<std::size_t>(i)] == name) idx = i;
            if (idx < 0) throw ParseError("bounds for unknown variable '" + name + "'", line_no, 1);
            box.lower(idx) = range.first;
            box.upper(idx) = range.second;
            seen[static_cast<std::size_t>(idx)] = true;
        }
        for (int i = 0; i < sys.n_alpha(); ++i)
            if (!seen[static_cast<std::size_t>(i)])
                throw ParseError("bounds must cover every variable once declared; missing '" +
                                     sys.variable_names[static_cast<std::size_t>(i)] + "'",
                                 line_no, 1);
        sys.alpha_box = std::move(box);
    }
    return sys;
}

SystemDescription parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open system description '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

std::string print_system(const SystemDescription& sys) {
    std::string out;
    out += "dims: " + std::to_string(sys.n_x) + " " + std::to_string(sys.n_u) + " " +
           std::to_string(sys.n_y) + "\n";
    out += "vars:";
    for (const auto& v : sys.variable_names) out += " " + v;
    out += "\n";
    if (sys.alpha_box) {
        for (int i = 0; i < sys.n_alpha(); ++i)
            out += "bounds: " + sys.variable_names[static_cast<std::size_t>(i)] + " " +
                   format_double(sys.alpha_box->lower(i)) + " " +
                   format_double(sys.alpha_box->upper(i)) + "\n";
    }
    for (int i = 0; i < sys.rows(); ++i)
        for (int j = 0; j < sys.cols(); ++j) {
            const Expr& e = sys.entry(i, j);
            if (e.is_constant_zero()) continue;
            out += "L[" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                   "] = " + e.print(sys.variable_names) + "\n";
        }
    return out;
}

double eval_entry(const Expr& expr, std::span<const double> alpha) { return expr.eval(alpha); }

Matrix eval_matrix(const SystemDescription& sys, const Vector& alpha, EvalDiagnostics* diag) {
    if (alpha.size() != sys.n_alpha())
        throw DimensionError("eval_matrix: evaluation point has size " +
                             std::to_string(alpha.size()) + ", system declares " +
                             std::to_string(sys.n_alpha()) + " variables");
    if (diag && sys.alpha_box && !sys.alpha_box->contains(alpha)) ++diag->out_of_box;
    const std::span<const double> view(alpha.data(), static_cast<std::size_t>(alpha.size()));
    Matrix out(sys.rows(), sys.cols());
    for (int i = 0; i < sys.rows(); ++i)
        for (int j = 0; j < sys.cols(); ++j) out(i, j) = sys.entry(i, j).eval(view);
    return out;
}

VariableRole variable_role(std::string_view name) {
    VariableRole role;
    if (name.size() < 2 || (name[0] != 'x' && name[0] != 'u')) return role;
    int index = 0;
    auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), index);
    if (ec != std::errc() || end != name.data() + name.size() || index < 1) return role;
    role.kind = name[0] == 'x' ? VariableRole::State : VariableRole::Input;
    role.index = index - 1;
    return role;
}

Vector alpha_from_state_input(const SystemDescription& sys, const Vector& x, const Vector& u) {
    Vector alpha(sys.n_alpha());
    for (int i = 0; i < sys.n_alpha(); ++i) {
        const auto& name = sys.variable_names[static_cast<std::size_t>(i)];
        const VariableRole role = variable_role(name);
        switch (role.kind) {
            case VariableRole::State:
                if (role.index >= x.size())
                    throw DimensionError("variable '" + name + "' exceeds the state dimension");
                alpha(i) = x(role.index);
                break;
            case VariableRole::Input:
                if (role.index >= u.size())
                    throw DimensionError("variable '" + name + "' exceeds the input dimension");
                alpha(i) = u(role.index);
                break;
            case VariableRole::Free:
                throw DimensionError("variable '" + name +
                                     "' has no state/input role; cannot simulate this system");
        }
    }
    return alpha;
}

}  // namespace lpv
