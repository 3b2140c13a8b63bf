#include "srdoa/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace srdoa {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << std::setprecision(17);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return in;
}

}  // namespace

// ---------------------------------------------------------------- CSV ----

void save_snapshot_csv(const std::string& path, const Eigen::VectorXcd& y) {
    std::ofstream out = open_out(path);
    out << "# re,im\n";
    for (Eigen::Index m = 0; m < y.size(); ++m)
        out << y(m).real() << "," << y(m).imag() << "\n";
}

Eigen::VectorXcd load_snapshot_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::vector<std::complex<double>> vals;
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double re, im;
        if (ss >> re >> im) vals.emplace_back(re, im);
    }
    if (vals.empty()) throw std::runtime_error("no samples in " + path);
    Eigen::VectorXcd y(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i)
        y(static_cast<Eigen::Index>(i)) = vals[i];
    return y;
}

void save_table_csv(const std::string& path, const std::vector<std::string>& headers,
                    const std::vector<std::vector<double>>& columns) {
    if (headers.size() != columns.size())
        throw std::invalid_argument("save_table_csv: header/column count mismatch");
    std::size_t rows = 0;
    for (const auto& c : columns) rows = std::max(rows, c.size());
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < headers.size(); ++i)
        out << (i ? "," : "") << headers[i];
    out << "\n";
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out << ",";
            if (r < columns[i].size()) out << columns[i][r];
        }
        out << "\n";
    }
}

// ----------------------------------------------------------- scenario ----

ArrayGeometry make_geometry(const GeometrySpec& spec) {
    switch (spec.kind) {
        case GeometrySpec::Kind::Uca:
            return make_uca(spec.m, spec.radius);
        case GeometrySpec::Kind::Ula:
            return make_ula(spec.m, spec.spacing);
        case GeometrySpec::Kind::Rpa:
            return make_rpa(spec.m, spec.min_sep, spec.radius, spec.seed);
        case GeometrySpec::Kind::File:
            return load_geometry_csv(spec.path);
    }
    throw std::logic_error("make_geometry: unknown kind");
}

namespace {

GeometrySpec parse_geometry(const json& j) {
    GeometrySpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "uca") {
        spec.kind = GeometrySpec::Kind::Uca;
        spec.m = j.at("m").get<int>();
        spec.radius = j.at("radius").get<double>();
    } else if (kind == "ula") {
        spec.kind = GeometrySpec::Kind::Ula;
        spec.m = j.at("m").get<int>();
        spec.spacing = j.value("spacing", 0.5);
    } else if (kind == "rpa") {
        spec.kind = GeometrySpec::Kind::Rpa;
        spec.m = j.at("m").get<int>();
        spec.radius = j.at("radius").get<double>();
        spec.min_sep = j.value("min_sep", 0.1);
        spec.seed = j.value("seed", std::uint64_t{0});
    } else if (kind == "file") {
        spec.kind = GeometrySpec::Kind::File;
        spec.path = j.at("path").get<std::string>();
    } else {
        throw std::runtime_error("unknown geometry kind: " + kind);
    }
    return spec;
}

json geometry_to_json(const GeometrySpec& spec) {
    json j;
    switch (spec.kind) {
        case GeometrySpec::Kind::Uca:
            j = {{"kind", "uca"}, {"m", spec.m}, {"radius", spec.radius}};
            break;
        case GeometrySpec::Kind::Ula:
            j = {{"kind", "ula"}, {"m", spec.m}, {"spacing", spec.spacing}};
            break;
        case GeometrySpec::Kind::Rpa:
            j = {{"kind", "rpa"},
                 {"m", spec.m},
                 {"radius", spec.radius},
                 {"min_sep", spec.min_sep},
                 {"seed", spec.seed}};
            break;
        case GeometrySpec::Kind::File:
            j = {{"kind", "file"}, {"path", spec.path}};
            break;
    }
    return j;
}

}  // namespace

ScenarioSpec load_scenario_json(const std::string& path) {
    std::ifstream in = open_in(path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }

    ScenarioSpec spec;
    spec.schema = j.value("schema", 1);
    if (spec.schema != 1)
        throw std::runtime_error(path + ": unsupported schema version");
    spec.geometry = parse_geometry(j.at("geometry"));
    for (const json& js : j.at("sources")) {
        Source s;
        s.doa_deg = js.at("doa_deg").get<double>();
        s.magnitude = js.value("magnitude", 1.0);
        s.phase_deg = js.value("phase_deg", 0.0);
        spec.sources.push_back(s);
    }
    if (j.contains("noise")) {
        const json& jn = j.at("noise");
        const std::string kind = jn.value("kind", "white");
        if (kind == "white") {
            spec.noise_kind = NoiseKind::White;
        } else if (kind == "one_over_f") {
            spec.noise_kind = NoiseKind::OneOverF;
        } else {
            throw std::runtime_error("unknown noise kind: " + kind);
        }
        if (jn.contains("snr_db")) {
            spec.has_snr = true;
            spec.snr_db = jn.at("snr_db").get<double>();
        } else if (jn.contains("sigma")) {
            spec.has_snr = false;
            spec.sigma = jn.at("sigma").get<double>();
        } else {
            throw std::runtime_error("noise needs snr_db or sigma");
        }
    } else {
        spec.has_snr = false;
        spec.sigma = 0.0;
    }
    spec.seed = j.value("seed", std::uint64_t{0});
    return spec;
}

void save_scenario_json(const std::string& path, const ScenarioSpec& spec) {
    json j;
    j["schema"] = spec.schema;
    j["geometry"] = geometry_to_json(spec.geometry);
    j["sources"] = json::array();
    for (const Source& s : spec.sources)
        j["sources"].push_back({{"doa_deg", s.doa_deg},
                                {"magnitude", s.magnitude},
                                {"phase_deg", s.phase_deg}});
    json jn;
    jn["kind"] = spec.noise_kind == NoiseKind::White ? "white" : "one_over_f";
    if (spec.has_snr)
        jn["snr_db"] = spec.snr_db;
    else
        jn["sigma"] = spec.sigma;
    j["noise"] = jn;
    j["seed"] = spec.seed;
    open_out(path) << j.dump(2) << "\n";
}

Snapshot run_scenario(const ScenarioSpec& spec, const ArrayGeometry& g) {
    Rng rng(spec.seed);
    if (spec.has_snr)
        return synth_snapshot(g, spec.sources, spec.snr_db, rng, spec.noise_kind);
    return synth_snapshot_sigma(g, spec.sources, spec.sigma, rng, spec.noise_kind);
}

// ------------------------------------------------------------- result ----

void save_result_json(const std::string& path, const SourceEstimate& est,
                      const EstimatorConfig& config) {
    json j;
    j["schema"] = 1;
    j["doas_deg"] = est.doas_deg;
    j["amplitudes"] = json::array();
    for (Eigen::Index k = 0; k < est.amplitudes.size(); ++k) {
        const std::complex<double> a = est.amplitudes(k);
        j["amplitudes"].push_back({{"re", a.real()},
                                   {"im", a.imag()},
                                   {"abs", std::abs(a)},
                                   {"phase_deg", rad2deg(std::arg(a))}});
    }
    j["root_candidates_deg"] = est.root_candidates_deg;

    const PipelineDiagnostics& d = est.diagnostics;
    j["diagnostics"] = {{"P", d.P},
                        {"delta", d.delta},
                        {"beta", d.beta},
                        {"n_roots", d.n_roots},
                        {"n_support", d.n_support},
                        {"n_final", d.n_final},
                        {"degenerate", d.degenerate},
                        {"dual_status", to_string(d.dual_status)},
                        {"lasso_status", to_string(d.lasso_status)},
                        {"dual_seconds", d.dual_seconds},
                        {"lasso_seconds", d.lasso_seconds},
                        {"total_seconds", d.total_seconds},
                        {"dual_iters", est.dual.diag.iters},
                        {"dual_pres", est.dual.diag.pres},
                        {"dual_dres", est.dual.diag.dres},
                        {"dual_relgap", est.dual.diag.relgap},
                        {"min_eig_H", est.dual.diag.min_eig_H},
                        {"trace_resid", est.dual.diag.trace_resid},
                        {"corner_resid", est.dual.diag.corner_resid},
                        {"max_dual_mag", est.dual.diag.max_dual_mag}};

    j["config"] = {{"gamma_db", config.gamma_db},
                   {"delta", config.delta},
                   {"circle_tol", config.circle_tol},
                   {"cluster_tol_deg", config.cluster_tol_deg},
                   {"merge_tol_deg", config.merge_tol_deg},
                   {"beta", config.beta},
                   {"beta_absolute", config.beta_absolute},
                   {"n_fill", config.n_fill},
                   {"support_thresh", config.support_thresh},
                   {"seed", config.seed},
                   {"P_override", config.P_override},
                   {"solver_tol", config.solver_tol}};

    open_out(path) << j.dump(2) << "\n";
}

// ---------------------------------------------------------------- SVG ----

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

// Tick step of the form {1,2,5} * 10^k giving roughly `target` divisions.
double nice_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double nice = 10.0;
    if (frac <= 1.0)
        nice = 1.0;
    else if (frac <= 2.0)
        nice = 2.0;
    else if (frac <= 5.0)
        nice = 5.0;
    return nice * mag;
}

std::string fmt_tick(double v) {
    std::ostringstream ss;
    ss << std::setprecision(6) << v;
    return ss.str();
}

}  // namespace

void save_svg(const std::string& path, const SvgPlot& plot) {
    double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    bool have = false;
    auto grow = [&](double x, double y) {
        if (!std::isfinite(x) || !std::isfinite(y)) return;
        if (!have) {
            x0 = x1 = x;
            y0 = y1 = y;
            have = true;
        } else {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
    };
    for (const SvgSeries& s : plot.series)
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i)
            grow(s.x[i], s.y[i]);
    for (double v : plot.vlines) grow(v, have ? y0 : 0.0);
    if (x1 - x0 < 1e-12) {
        x0 -= 1.0;
        x1 += 1.0;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 1.0;
        y1 += 1.0;
    }
    const double xpad = 0.04 * (x1 - x0);
    const double ypad = 0.06 * (y1 - y0);
    x0 -= xpad;
    x1 += xpad;
    y0 -= ypad;
    y1 += ypad;

    const double ml = 72, mr = 20, mt = 42, mb = 56;
    const double pw = plot.width - ml - mr;
    const double ph = plot.height - mt - mb;
    auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * pw; };
    auto sy = [&](double y) { return mt + (1.0 - (y - y0) / (y1 - y0)) * ph; };

    std::ofstream out = open_out(path);
    out << std::setprecision(8);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width
        << "\" height=\"" << plot.height << "\" viewBox=\"0 0 " << plot.width << " "
        << plot.height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // Grid and ticks.
    const double xstep = nice_step(x1 - x0, 7);
    const double ystep = nice_step(y1 - y0, 6);
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
    for (double v = std::ceil(x0 / xstep) * xstep; v <= x1 + 1e-9 * xstep; v += xstep) {
        const double px = sx(v);
        out << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px << "\" y2=\""
            << mt + ph << "\" stroke=\"#e5e5e5\"/>\n";
        out << "<text x=\"" << px << "\" y=\"" << mt + ph + 18
            << "\" text-anchor=\"middle\">" << fmt_tick(v) << "</text>\n";
    }
    for (double v = std::ceil(y0 / ystep) * ystep; v <= y1 + 1e-9 * ystep; v += ystep) {
        const double py = sy(v);
        out << "<line x1=\"" << ml << "\" y1=\"" << py << "\" x2=\"" << ml + pw
            << "\" y2=\"" << py << "\" stroke=\"#e5e5e5\"/>\n";
        out << "<text x=\"" << ml - 8 << "\" y=\"" << py + 4
            << "\" text-anchor=\"end\">" << fmt_tick(v) << "</text>\n";
    }
    out << "</g>\n";

    // Dashed markers.
    for (double v : plot.vlines) {
        const double px = sx(v);
        out << "<line x1=\"" << px << "\" y1=\"" << mt << "\" x2=\"" << px << "\" y2=\""
            << mt + ph << "\" stroke=\"#999\" stroke-dasharray=\"5,4\"/>\n";
    }

    // Data.
    const double ybase = sy(std::clamp(0.0, y0, y1));
    for (const SvgSeries& s : plot.series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        if (s.kind == SvgSeries::Kind::Line) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color
                << "\" stroke-width=\"1.6\" points=\"";
            for (std::size_t i = 0; i < n; ++i)
                out << sx(s.x[i]) << "," << sy(s.y[i]) << " ";
            out << "\"/>\n";
        } else if (s.kind == SvgSeries::Kind::Scatter) {
            for (std::size_t i = 0; i < n; ++i)
                out << "<circle cx=\"" << sx(s.x[i]) << "\" cy=\"" << sy(s.y[i])
                    << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                const double px = sx(s.x[i]);
                out << "<line x1=\"" << px << "\" y1=\"" << ybase << "\" x2=\"" << px
                    << "\" y2=\"" << sy(s.y[i]) << "\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.6\"/>\n";
                out << "<circle cx=\"" << px << "\" cy=\"" << sy(s.y[i])
                    << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
            }
        }
    }

    // Frame, labels, legend.
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "<g font-family=\"sans-serif\" fill=\"#111\">\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"24\" font-size=\"16\" "
        << "text-anchor=\"middle\">" << xml_escape(plot.title) << "</text>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << plot.height - 14
        << "\" font-size=\"13\" text-anchor=\"middle\">" << xml_escape(plot.xlabel)
        << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2 << "\" font-size=\"13\" "
        << "text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2 << ")\">"
        << xml_escape(plot.ylabel) << "</text>\n";
    double ly = mt + 16;
    for (const SvgSeries& s : plot.series) {
        if (s.label.empty()) continue;
        out << "<rect x=\"" << ml + pw - 150 << "\" y=\"" << ly - 9
            << "\" width=\"12\" height=\"12\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << ml + pw - 132 << "\" y=\"" << ly + 2
            << "\" font-size=\"12\">" << xml_escape(s.label) << "</text>\n";
        ly += 18;
    }
    out << "</g>\n</svg>\n";
}

}  // namespace srdoa
