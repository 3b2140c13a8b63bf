// Command-line front end: geometry analysis, single-snapshot estimation,
// scenario simulation, and Monte-Carlo benchmarking.
//
// Exit codes: 0 success, 2 bad usage or argument values, 3 solver failure,
// 4 input/output failure.
#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "srdoa/geometry.hpp"
#include "srdoa/io.hpp"
#include "srdoa/manifold.hpp"
#include "srdoa/pipeline.hpp"
#include "srdoa/poly.hpp"
#include "srdoa/prune.hpp"
#include "srdoa/simulate.hpp"

namespace fs = std::filesystem;
using namespace srdoa;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

std::vector<double> split_nums(const std::string& s) {
    std::string t = s;
    std::replace(t.begin(), t.end(), ',', ' ');
    std::istringstream ss(t);
    std::vector<double> out;
    double v;
    while (ss >> v) out.push_back(v);
    if (!ss.eof()) throw std::invalid_argument("bad numeric list: " + s);
    return out;
}

struct GeomFlags {
    std::string uca, rpa, ula, file;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--uca", uca, "uniform circular array: M,radius");
        cmd->add_option("--rpa", rpa, "random planar array: M,radius[,min_sep[,seed]]");
        cmd->add_option("--ula", ula, "uniform linear array: M[,spacing]");
        cmd->add_option("--geometry", file, "CSV of x,y element positions");
    }

    bool any() const {
        return !uca.empty() || !rpa.empty() || !ula.empty() || !file.empty();
    }

    GeometrySpec parse() const {
        const int n = static_cast<int>(!uca.empty()) + static_cast<int>(!rpa.empty()) +
                      static_cast<int>(!ula.empty()) + static_cast<int>(!file.empty());
        if (n != 1)
            throw std::invalid_argument(
                "specify exactly one of --uca/--rpa/--ula/--geometry");
        GeometrySpec spec;
        if (!uca.empty()) {
            const auto v = split_nums(uca);
            if (v.size() != 2) throw std::invalid_argument("--uca needs M,radius");
            spec.kind = GeometrySpec::Kind::Uca;
            spec.m = static_cast<int>(v[0]);
            spec.radius = v[1];
        } else if (!rpa.empty()) {
            const auto v = split_nums(rpa);
            if (v.size() < 2 || v.size() > 4)
                throw std::invalid_argument("--rpa needs M,radius[,min_sep[,seed]]");
            spec.kind = GeometrySpec::Kind::Rpa;
            spec.m = static_cast<int>(v[0]);
            spec.radius = v[1];
            spec.min_sep = v.size() > 2 ? v[2] : 0.1;
            spec.seed = v.size() > 3 ? static_cast<std::uint64_t>(v[3]) : 0;
        } else if (!ula.empty()) {
            const auto v = split_nums(ula);
            if (v.empty() || v.size() > 2)
                throw std::invalid_argument("--ula needs M[,spacing]");
            spec.kind = GeometrySpec::Kind::Ula;
            spec.m = static_cast<int>(v[0]);
            spec.spacing = v.size() > 1 ? v[1] : 0.5;
        } else {
            spec.kind = GeometrySpec::Kind::File;
            spec.path = file;
        }
        return spec;
    }
};

struct ConfigFlags {
    EstimatorConfig cfg;
    int P = 0;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--gamma-db", cfg.gamma_db, "bandwidth truncation level (dB)");
        cmd->add_option("--P", P, "dual polynomial length override (odd)");
        cmd->add_option("--beta", cfg.beta, "l1 weight");
        cmd->add_flag("--beta-absolute", cfg.beta_absolute,
                      "use --beta as-is instead of scaling by delta");
        cmd->add_option("--n-fill", cfg.n_fill, "fill atoms in the pruning dictionary");
        cmd->add_option("--circle-tol", cfg.circle_tol, "unit-circle tolerance");
        cmd->add_option("--cluster-tol", cfg.cluster_tol_deg, "root cluster width (deg)");
        cmd->add_option("--merge-tol", cfg.merge_tol_deg, "post-prune merge width (deg)");
        cmd->add_option("--support-thresh", cfg.support_thresh,
                        "relative support cutoff");
        cmd->add_option("--solver-tol", cfg.solver_tol, "interior-point tolerance");
        cmd->add_option("--seed", cfg.seed, "seed for dictionary fill angles");
    }

    EstimatorConfig build() const {
        EstimatorConfig out = cfg;
        out.P_override = P;
        return out;
    }
};

fs::path ensure_out_dir(const std::string& out_dir) {
    fs::path p(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + p.string());
    return p;
}

// ------------------------------------------------------ analyze-geometry --

struct AnalyzeOpts {
    GeomFlags geom;
    ConfigFlags config;
    std::string out_dir = ".";
    bool svg = false;
};

void run_analyze(const AnalyzeOpts& opt) {
    const ArrayGeometry g = make_geometry(opt.geom.parse());
    const fs::path out = ensure_out_dir(opt.out_dir);
    const double gamma = opt.config.cfg.gamma_db;

    std::vector<double> idx, radius, azimuth, bw;
    int n_max = 0;
    for (std::size_t m = 0; m < g.size(); ++m) {
        const int nm = scan_bandwidth(g.sensors[m], gamma);
        n_max = std::max(n_max, nm);
        idx.push_back(static_cast<double>(m));
        radius.push_back(g.sensors[m].radius);
        azimuth.push_back(rad2deg(g.sensors[m].azimuth));
        bw.push_back(static_cast<double>(nm));
    }

    const int p_min = min_dft_length(g.max_radius(), gamma);
    int P = p_min;
    if (opt.config.P > 0) {
        if (opt.config.P % 2 == 0 || opt.config.P < p_min)
            throw std::invalid_argument("--P must be odd and at least " +
                                        std::to_string(p_min));
        P = opt.config.P;
    }

    std::cout << "elements: M = " << g.size() << ", max radius = " << g.max_radius()
              << " wavelengths\n";
    std::cout << "per-sensor bandwidth at gamma = " << gamma << " dB: max N_m = "
              << n_max << "\n";
    std::cout << "P = " << P << " (N = " << (P - 1) / 2 << ")\n";

    save_geometry_csv(g, (out / "geometry.csv").string());
    save_table_csv((out / "bandwidth.csv").string(),
                   {"sensor", "radius_wl", "azimuth_deg", "bandwidth"},
                   {idx, radius, azimuth, bw});
    if (opt.svg) {
        SvgPlot plot;
        plot.title = "array layout";
        plot.xlabel = "x (wavelengths)";
        plot.ylabel = "y (wavelengths)";
        SvgSeries pts;
        pts.kind = SvgSeries::Kind::Scatter;
        for (const SensorPosition& s : g.sensors) {
            pts.x.push_back(s.radius * std::cos(s.azimuth));
            pts.y.push_back(s.radius * std::sin(s.azimuth));
        }
        plot.series.push_back(pts);
        save_svg((out / "array.svg").string(), plot);
    }
    std::cout << "wrote " << (out / "geometry.csv").string() << ", "
              << (out / "bandwidth.csv").string() << (opt.svg ? ", array.svg" : "")
              << "\n";
}

// --------------------------------------------------------------- estimate --

struct EstimateOpts {
    GeomFlags geom;
    ConfigFlags config;
    std::string scenario;
    std::string snapshot;
    double delta = 0.0;
    double delta_mult = 0.0;
    std::string out_dir = ".";
    bool svg = false;
};

void run_estimate(const EstimateOpts& opt) {
    if (opt.scenario.empty() == opt.snapshot.empty())
        throw std::invalid_argument("specify exactly one of --scenario/--snapshot");

    ArrayGeometry g;
    Eigen::VectorXcd y;
    std::vector<double> truth_deg;
    double e_n = 0.0;
    if (!opt.scenario.empty()) {
        const ScenarioSpec spec = load_scenario_json(opt.scenario);
        g = make_geometry(spec.geometry);
        const Snapshot snap = run_scenario(spec, g);
        y = snap.y;
        e_n = snap.expected_noise_norm();
        for (const Source& s : spec.sources) truth_deg.push_back(s.doa_deg);
    } else {
        if (!opt.geom.any())
            throw std::invalid_argument("--snapshot needs a geometry flag");
        g = make_geometry(opt.geom.parse());
        y = load_snapshot_csv(opt.snapshot);
    }

    EstimatorConfig cfg = opt.config.build();
    if (opt.delta > 0.0) {
        cfg.delta = opt.delta;
    } else if (!opt.scenario.empty()) {
        const double mult = opt.delta_mult > 0.0 ? opt.delta_mult : 1.0;
        cfg.delta = mult * e_n;
        if (cfg.delta <= 0.0) cfg.delta = 1e-6;  // noiseless scenario
    } else {
        throw std::invalid_argument("--snapshot input requires --delta");
    }

    const fs::path out = ensure_out_dir(opt.out_dir);
    const SourceEstimate est = estimate(g, y, cfg);

    std::cout << "P = " << est.diagnostics.P
              << ", dual status = " << to_string(est.diagnostics.dual_status) << " ("
              << est.dual.diag.iters << " iters, " << std::fixed
              << std::setprecision(2) << est.diagnostics.dual_seconds << " s)\n";
    std::cout << "candidates " << est.diagnostics.n_roots << " -> support "
              << est.diagnostics.n_support << " -> " << est.diagnostics.n_final
              << " source(s)\n";
    std::cout << std::setprecision(3);
    for (std::size_t k = 0; k < est.doas_deg.size(); ++k) {
        const std::complex<double> a = est.amplitudes(static_cast<Eigen::Index>(k));
        std::cout << "  doa " << std::setw(9) << est.doas_deg[k] << " deg   |amp| "
                  << std::abs(a) << "   phase " << rad2deg(std::arg(a)) << " deg\n";
    }
    std::cout.unsetf(std::ios::fixed);

    save_result_json((out / "result.json").string(), est, cfg);
    save_table_csv((out / "roots.csv").string(), {"angle_deg"},
                   {est.root_candidates_deg});

    std::vector<double> dict_deg, dict_mag;
    for (std::size_t i = 0; i < est.dictionary_angles.size(); ++i) {
        dict_deg.push_back(rad2deg(est.dictionary_angles[i]));
        dict_mag.push_back(std::abs(est.prune.x(static_cast<Eigen::Index>(i))));
    }
    save_table_csv((out / "prune.csv").string(), {"angle_deg", "abs_x"},
                   {dict_deg, dict_mag});

    std::vector<double> grid_deg, grid_rad;
    for (double d = -180.0; d <= 180.0; d += 0.25) {
        grid_deg.push_back(d);
        grid_rad.push_back(deg2rad(d));
    }
    const Eigen::VectorXd cbf = cbf_spectrum(g, y, grid_rad);
    std::vector<double> cbf_v(cbf.data(), cbf.data() + cbf.size());
    save_table_csv((out / "cbf.csv").string(), {"theta_deg", "power"},
                   {grid_deg, cbf_v});

    if (opt.svg) {
        SvgPlot plot;
        plot.title = "beamformer spectrum and estimates";
        plot.xlabel = "azimuth (deg)";
        plot.ylabel = "|a(theta)^H y| / M";
        SvgSeries line;
        line.kind = SvgSeries::Kind::Line;
        line.x = grid_deg;
        line.y = cbf_v;
        line.label = "beamformer";
        plot.series.push_back(line);
        if (!est.doas_deg.empty()) {
            SvgSeries stems;
            stems.kind = SvgSeries::Kind::Stem;
            stems.color = "#d62728";
            stems.label = "estimates";
            const double cbf_max = cbf.maxCoeff();
            const double amp_max = est.amplitudes.cwiseAbs().maxCoeff();
            for (std::size_t k = 0; k < est.doas_deg.size(); ++k) {
                stems.x.push_back(est.doas_deg[k]);
                const double a = std::abs(est.amplitudes(static_cast<Eigen::Index>(k)));
                stems.y.push_back(amp_max > 0 ? a / amp_max * cbf_max : 0.0);
            }
            plot.series.push_back(stems);
        }
        plot.vlines = truth_deg;
        save_svg((out / "estimate.svg").string(), plot);
    }
    std::cout << "wrote result.json, roots.csv, prune.csv, cbf.csv"
              << (opt.svg ? ", estimate.svg" : "") << " in " << out.string() << "\n";
}

// --------------------------------------------------------------- simulate --

struct SimulateOpts {
    std::string scenario;
    std::string out_dir = ".";
};

void run_simulate(const SimulateOpts& opt) {
    const ScenarioSpec spec = load_scenario_json(opt.scenario);
    const ArrayGeometry g = make_geometry(spec.geometry);
    const Snapshot snap = run_scenario(spec, g);
    const fs::path out = ensure_out_dir(opt.out_dir);

    save_snapshot_csv((out / "snapshot.csv").string(), snap.y);
    save_geometry_csv(g, (out / "geometry.csv").string());

    nlohmann::json meta;
    meta["schema"] = 1;
    meta["m"] = g.size();
    meta["sigma"] = snap.sigma;
    meta["expected_noise_norm"] = snap.expected_noise_norm();
    meta["clean_norm"] = snap.clean.norm();
    meta["noise_norm"] = snap.noise.norm();
    meta["seed"] = spec.seed;
    std::ofstream mf((out / "meta.json").string());
    if (!mf) throw std::runtime_error("cannot write meta.json");
    mf << meta.dump(2) << "\n";

    std::cout << "M = " << g.size() << ", sigma = " << snap.sigma
              << ", ||noise|| = " << snap.noise.norm() << " (expected "
              << snap.expected_noise_norm() << ")\n";
    std::cout << "wrote snapshot.csv, geometry.csv, meta.json in " << out.string()
              << "\n";
}

// -------------------------------------------------------------- benchmark --

struct BenchmarkOpts {
    GeomFlags geom;
    ConfigFlags config;
    std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0, 40.0};
    std::vector<double> delta_mults{1.0};
    int trials = 50;
    double sep_deg = 30.0;
    std::uint64_t seed = 2000;
    int jobs = 1;
    std::string out_dir = ".";
};

struct CellResult {
    double rmse = std::numeric_limits<double>::quiet_NaN();
    int misses = 0;
    int failures = 0;
    double avg_seconds = 0.0;
};

CellResult run_cell(const ArrayGeometry& g, const ManifoldModel& model,
                    const EstimatorConfig& base, const BenchmarkOpts& opt, double snr,
                    double dmult) {
    const int M = static_cast<int>(g.size());
    const double sigma = std::pow(10.0, -snr / 20.0);
    const double delta = dmult * sigma * std::sqrt(static_cast<double>(M));

    std::vector<std::vector<double>> errs(static_cast<std::size_t>(opt.trials));
    std::vector<int> miss(static_cast<std::size_t>(opt.trials), 0);
    std::vector<int> fail(static_cast<std::size_t>(opt.trials), 0);
    std::vector<double> secs(static_cast<std::size_t>(opt.trials), 0.0);
    std::atomic<int> next{0};

    auto worker = [&]() {
        for (;;) {
            const int t = next.fetch_add(1);
            if (t >= opt.trials) return;
            Rng rng(opt.seed + static_cast<std::uint64_t>(t));
            const double th1 = wrap_angle(2.0 * kPi * rng.uniform() - kPi);
            const double th2 = wrap_angle(th1 + deg2rad(opt.sep_deg));
            const std::vector<Source> sources{{rad2deg(th1), 1.0, 0.0},
                                              {rad2deg(th2), 1.0, 0.0}};
            const Snapshot snap = synth_snapshot_sigma(g, sources, sigma, rng);
            EstimatorConfig cfg = base;
            cfg.delta = delta;
            cfg.seed = opt.seed + static_cast<std::uint64_t>(t);
            const std::size_t ti = static_cast<std::size_t>(t);
            try {
                const SourceEstimate est = estimate(g, model, snap.y, cfg);
                errs[ti] = match_errors_deg(est.doas_deg,
                                            {rad2deg(th1), rad2deg(th2)});
                miss[ti] = 2 - static_cast<int>(errs[ti].size());
                secs[ti] = est.diagnostics.total_seconds;
            } catch (const std::exception&) {
                fail[ti] = 1;
                miss[ti] = 2;
            }
        }
    };

    const int nthreads = std::max(1, std::min(opt.jobs, opt.trials));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }

    CellResult cell;
    double sq = 0.0;
    int n_err = 0;
    for (int t = 0; t < opt.trials; ++t) {
        const std::size_t ti = static_cast<std::size_t>(t);
        for (double e : errs[ti]) {
            sq += e * e;
            ++n_err;
        }
        cell.misses += miss[ti];
        cell.failures += fail[ti];
        cell.avg_seconds += secs[ti];
    }
    if (n_err > 0) cell.rmse = std::sqrt(sq / n_err);
    cell.avg_seconds /= std::max(1, opt.trials);
    return cell;
}

void run_benchmark(const BenchmarkOpts& opt) {
    const ArrayGeometry g = make_geometry(opt.geom.parse());
    const EstimatorConfig base = opt.config.build();
    const ManifoldModel model = build_manifold(g, base.gamma_db, base.P_override);
    const fs::path out = ensure_out_dir(opt.out_dir);

    std::cout << "M = " << g.size() << ", P = " << model.P << ", trials = "
              << opt.trials << ", separation = " << opt.sep_deg << " deg\n";

    std::vector<double> c_snr, c_dm, c_rmse, c_miss, c_fail, c_sec;
    for (double dm : opt.delta_mults) {
        for (double snr : opt.snr_db) {
            const CellResult cell = run_cell(g, model, base, opt, snr, dm);
            std::cout << "  snr " << std::setw(5) << snr << " dB  delta x" << dm
                      << "  rmse " << std::setw(8) << cell.rmse << " deg  misses "
                      << cell.misses << "  failures " << cell.failures << "  avg "
                      << std::setprecision(2) << std::fixed << cell.avg_seconds
                      << " s\n"
                      << std::defaultfloat << std::setprecision(6);
            c_snr.push_back(snr);
            c_dm.push_back(dm);
            c_rmse.push_back(cell.rmse);
            c_miss.push_back(cell.misses);
            c_fail.push_back(cell.failures);
            c_sec.push_back(cell.avg_seconds);
        }
    }

    save_table_csv(
        (out / "benchmark.csv").string(),
        {"snr_db", "delta_mult", "rmse_deg", "misses", "failures", "avg_seconds"},
        {c_snr, c_dm, c_rmse, c_miss, c_fail, c_sec});

    nlohmann::json echo;
    echo["schema"] = 1;
    echo["trials"] = opt.trials;
    echo["sep_deg"] = opt.sep_deg;
    echo["seed"] = opt.seed;
    echo["jobs"] = opt.jobs;
    echo["snr_db"] = opt.snr_db;
    echo["delta_mults"] = opt.delta_mults;
    echo["config"] = {{"gamma_db", base.gamma_db},
                      {"beta", base.beta},
                      {"beta_absolute", base.beta_absolute},
                      {"n_fill", base.n_fill},
                      {"circle_tol", base.circle_tol},
                      {"cluster_tol_deg", base.cluster_tol_deg},
                      {"merge_tol_deg", base.merge_tol_deg},
                      {"support_thresh", base.support_thresh},
                      {"P", model.P}};
    std::ofstream ef((out / "benchmark_config.json").string());
    if (!ef) throw std::runtime_error("cannot write benchmark_config.json");
    ef << echo.dump(2) << "\n";
    std::cout << "wrote benchmark.csv, benchmark_config.json in " << out.string()
              << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gridless single-snapshot direction-of-arrival estimation"};
    app.require_subcommand(1);

    AnalyzeOpts an;
    CLI::App* c_an = app.add_subcommand("analyze-geometry",
                                        "report array bandwidth and dual dimension");
    an.geom.add_to(c_an);
    an.config.add_to(c_an);
    c_an->add_option("--out-dir", an.out_dir, "output directory");
    c_an->add_flag("--svg", an.svg, "write an array layout plot");

    EstimateOpts es;
    CLI::App* c_es =
        app.add_subcommand("estimate", "estimate directions from one snapshot");
    es.geom.add_to(c_es);
    es.config.add_to(c_es);
    c_es->add_option("--scenario", es.scenario, "scenario JSON to synthesize");
    c_es->add_option("--snapshot", es.snapshot, "snapshot CSV (re,im per line)");
    c_es->add_option("--delta", es.delta, "noise-norm bound");
    c_es->add_option("--delta-mult", es.delta_mult,
                     "bound as a multiple of the expected noise norm");
    c_es->add_option("--out-dir", es.out_dir, "output directory");
    c_es->add_flag("--svg", es.svg, "write a spectrum plot");

    SimulateOpts si;
    CLI::App* c_si = app.add_subcommand("simulate", "synthesize a snapshot");
    c_si->add_option("--scenario", si.scenario, "scenario JSON")->required();
    c_si->add_option("--out-dir", si.out_dir, "output directory");

    BenchmarkOpts be;
    CLI::App* c_be =
        app.add_subcommand("benchmark", "Monte-Carlo accuracy over an SNR grid");
    be.geom.add_to(c_be);
    be.config.add_to(c_be);
    c_be->add_option("--snr", be.snr_db, "SNR grid in dB")->delimiter(',');
    c_be->add_option("--delta-mult", be.delta_mults, "noise-bound multipliers")
        ->delimiter(',');
    c_be->add_option("--trials", be.trials, "trials per grid cell");
    c_be->add_option("--sep-deg", be.sep_deg, "source separation (deg)");
    c_be->add_option("--base-seed", be.seed, "base trial seed");
    c_be->add_option("--jobs", be.jobs, "worker threads");
    c_be->add_option("--out-dir", be.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (c_an->parsed()) run_analyze(an);
        if (c_es->parsed()) run_estimate(es);
        if (c_si->parsed()) run_simulate(si);
        if (c_be->parsed()) run_benchmark(be);
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
