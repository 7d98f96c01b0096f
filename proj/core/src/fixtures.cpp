#include "lpvembed/fixtures.hpp"

namespace lpv {

namespace {

Fixture make_example1() {
    Fixture f;
    f.name = "example1";
    f.system = parse_system(
        "dims: 2 1 1\n"
        "vars: a1 a2 a3\n"
        "bounds: a1 0 2\n"
        "bounds: a2 0 5\n"
        "bounds: a3 -1 1\n"
        "L[1,1] = 1+2*a1\n"
        "L[1,2] = 3+a2\n"
        "L[1,3] = 3*a3+7*a2\n"
        "L[2,1] = 2+3*a3\n"
        "L[2,2] = 20*a1+5*a2\n"
        "L[2,3] = 1\n"
        "L[3,1] = a1\n");
    f.default_trajectories = parse_generator_spec(
        "a1=2*sin(10*t)^2; a2=5*cos(20*t+pi/5)^2; a3=sin(10*t)*cos(20*t)");
    f.default_sample_period = 1e-3;
    f.default_count = 3000;
    f.published_values = {
        {"eta_proposed", 54.4705, "reference accuracy index, two-variable reduction"},
        {"eta_baseline", 68.2811, "reference accuracy index, trajectory-PCA baseline at the same order"},
        {"omega_rho_area", 31.2870, "reference area of the axis-aligned reduced-coordinate bounds"},
        {"omega_theta_area", 23.2186, "reference area of the minimum enclosing rectangle"},
        {"centroid_1", 0.1688, "reference rectangle centroid, first coordinate"},
        {"centroid_2", 0.0365, "reference rectangle centroid, second coordinate"},
        {"theta1_lower", -2.2798, "reference aligned bound"},
        {"theta1_upper", 2.6174, "reference aligned bound"},
        {"theta2_lower", -2.3341, "reference aligned bound"},
        {"theta2_upper", 2.4071, "reference aligned bound"},
    };
    return f;
}

Fixture make_example2() {
    Fixture f;
    f.name = "example2";
    f.system = parse_system(
        "dims: 2 1 1\n"
        "vars: x1\n"
        "bounds: x1 -1.5707963267948966 1.5707963267948966\n"
        "L[1,1] = 2*sin(x1)+1\n"
        "L[1,2] = 3*x1+5\n"
        "L[2,1] = x1\n"
        "L[2,3] = 1\n"
        "L[3,1] = sin(x1)\n"
        "L[3,2] = 2*x1\n");
    f.default_trajectories = parse_generator_spec("x1=grid(-pi/2,pi/2,0.01)");
    f.default_sample_period = 0.01;
    f.default_count = f.default_trajectories.default_count();
    f.published_values = {
        {"sigma1", 39.5533, "reference leading singular value of the normalized coefficient data"},
        {"sigma2", 2.3526, "reference second singular value"},
        {"lhat_11_1", 0.6337, "reference coefficient of theta1 in entry (1,1)"},
        {"lhat_11_2", 0.7773, "reference coefficient of theta2 in entry (1,1)"},
        {"lhat_12_1", 1.2226, "reference coefficient of theta1 in entry (1,2)"},
        {"lhat_12_2", -0.9968, "reference coefficient of theta2 in entry (1,2)"},
        {"lhat_21_1", 0.4075, "reference coefficient of theta1 in entry (2,1)"},
        {"lhat_21_2", -0.3323, "reference coefficient of theta2 in entry (2,1)"},
        {"lhat_31_1", 0.3169, "reference coefficient of theta1 in entry (3,1)"},
        {"lhat_31_2", 0.3887, "reference coefficient of theta2 in entry (3,1)"},
        {"lhat_32_1", 0.8151, "reference coefficient of theta1 in entry (3,2)"},
        {"lhat_32_2", -0.6645, "reference coefficient of theta2 in entry (3,2)"},
        {"map_sin_1", 1.2601, "reference scheduling-map gain on sin(x1), first variable"},
        {"map_x_1", 1.4740, "reference scheduling-map gain on x1, first variable"},
        {"map_sin_2", 1.5456, "reference scheduling-map gain on sin(x1), second variable"},
        {"map_x_2", -1.2017, "reference scheduling-map gain on x1, second variable"},
    };
    return f;
}

}  // namespace

double Fixture::published(const std::string& key) const {
    for (const auto& v : published_values)
        if (v.name == key) return v.value;
    throw std::invalid_argument("fixture '" + name + "' has no published value '" + key + "'");
}

Fixture fixture(const std::string& name) {
    if (name == "example1") return make_example1();
    if (name == "example2") return make_example2();
    throw std::invalid_argument("unknown fixture '" + name + "' (known: example1, example2)");
}

std::vector<std::string> fixture_names() { return {"example1", "example2"}; }

}  // namespace lpv
