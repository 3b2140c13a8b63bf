#include "srdoa/geometry.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace srdoa {

double ArrayGeometry::max_radius() const {
    double r = 0.0;
    for (const auto& s : sensors) r = std::max(r, s.radius);
    return r;
}

Eigen::VectorXcd steering_response(const ArrayGeometry& g, double theta) {
    if (!std::isfinite(theta)) throw std::invalid_argument("steering_response: theta not finite");
    const int M = g.size();
    Eigen::VectorXcd a(M);
    for (int m = 0; m < M; ++m) {
        const double phase = -2.0 * kPi * g.sensors[m].radius *
                             std::cos(theta - g.sensors[m].azimuth);
        a(m) = std::polar(1.0, phase);
    }
    return a;
}

Eigen::MatrixXcd steering_matrix(const ArrayGeometry& g,
                                 const std::vector<double>& thetas) {
    Eigen::MatrixXcd A(g.size(), static_cast<int>(thetas.size()));
    for (int d = 0; d < static_cast<int>(thetas.size()); ++d)
        A.col(d) = steering_response(g, thetas[d]);
    return A;
}

ArrayGeometry make_uca(int M, double radius) {
    if (M < 1) throw std::invalid_argument("make_uca: M must be >= 1");
    if (radius <= 0.0) throw std::invalid_argument("make_uca: radius must be > 0");
    ArrayGeometry g;
    g.sensors.reserve(M);
    for (int m = 0; m < M; ++m)
        g.sensors.push_back({radius, wrap_angle(2.0 * kPi * m / M)});
    return g;
}

ArrayGeometry make_ula(int M, double spacing) {
    if (M < 1) throw std::invalid_argument("make_ula: M must be >= 1");
    if (spacing <= 0.0) throw std::invalid_argument("make_ula: spacing must be > 0");
    ArrayGeometry g;
    g.sensors.reserve(M);
    for (int m = 0; m < M; ++m) g.sensors.push_back({m * spacing, 0.0});
    return g;
}

ArrayGeometry make_rpa(int M, double min_spacing, double max_radius,
                       std::uint64_t seed) {
    if (M < 1) throw std::invalid_argument("make_rpa: M must be >= 1");
    if (min_spacing < 0.0 || max_radius <= 0.0)
        throw std::invalid_argument("make_rpa: bad spacing/radius");

    std::mt19937_64 eng(seed);
    auto unit = [&eng]() {  // uniform in [0,1), stable across platforms
        return static_cast<double>(eng() >> 11) * 0x1.0p-53;
    };

    const int kMaxAttempts = 20000 * M;
    std::vector<std::pair<double, double>> pts;  // (x, y)
    pts.reserve(M);
    int attempts = 0;
    while (static_cast<int>(pts.size()) < M) {
        if (++attempts > kMaxAttempts)
            throw std::runtime_error(
                "make_rpa: packing failed (min_spacing too large for disk)");
        const double x = (2.0 * unit() - 1.0) * max_radius;
        const double y = (2.0 * unit() - 1.0) * max_radius;
        if (x * x + y * y > max_radius * max_radius) continue;
        bool ok = true;
        for (const auto& [px, py] : pts) {
            const double dx = x - px, dy = y - py;
            if (dx * dx + dy * dy < min_spacing * min_spacing) { ok = false; break; }
        }
        if (ok) pts.emplace_back(x, y);
    }

    ArrayGeometry g;
    g.sensors.reserve(M);
    for (const auto& [x, y] : pts)
        g.sensors.push_back({std::hypot(x, y), wrap_angle(std::atan2(y, x))});
    return g;
}

ArrayGeometry load_geometry_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open geometry file: " + path);
    ArrayGeometry g;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double x, y;
        if (!(ss >> x >> y))
            throw std::runtime_error("bad geometry line " + std::to_string(lineno) +
                                     " in " + path);
        g.sensors.push_back({std::hypot(x, y), wrap_angle(std::atan2(y, x))});
    }
    if (g.sensors.empty()) throw std::runtime_error("empty geometry file: " + path);
    return g;
}

void save_geometry_csv(const ArrayGeometry& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write geometry file: " + path);
    out.precision(17);
    out << "# x,y (wavelengths)\n";
    for (const auto& s : g.sensors)
        out << s.radius * std::cos(s.azimuth) << "," << s.radius * std::sin(s.azimuth)
            << "\n";
}

}  // namespace srdoa
