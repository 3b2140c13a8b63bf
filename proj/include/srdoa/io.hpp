// File formats: snapshot/spectrum CSV, scenario descriptions and result
// records in JSON, and a small self-contained SVG plot writer.
#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srdoa/geometry.hpp"
#include "srdoa/pipeline.hpp"
#include "srdoa/simulate.hpp"

namespace srdoa {

// ---------------------------------------------------------------- CSV ----

// One "re,im" pair per line; '#' starts a comment.
void save_snapshot_csv(const std::string& path, const Eigen::VectorXcd& y);
Eigen::VectorXcd load_snapshot_csv(const std::string& path);

// Column-oriented table with a header line.
void save_table_csv(const std::string& path, const std::vector<std::string>& headers,
                    const std::vector<std::vector<double>>& columns);

// ----------------------------------------------------------- scenario ----

struct GeometrySpec {
    enum class Kind { Uca, Rpa, Ula, File };
    Kind kind = Kind::Uca;
    int m = 0;               // element count (uca/rpa/ula)
    double radius = 0.0;     // uca/rpa radius in wavelengths
    double spacing = 0.5;    // ula spacing in wavelengths
    double min_sep = 0.0;    // rpa minimum element separation
    std::uint64_t seed = 0;  // rpa placement seed
    std::string path;        // file kind: CSV of x,y positions
};

ArrayGeometry make_geometry(const GeometrySpec& spec);

struct ScenarioSpec {
    int schema = 1;
    GeometrySpec geometry;
    std::vector<Source> sources;
    NoiseKind noise_kind = NoiseKind::White;
    bool has_snr = true;    // otherwise `sigma` is used directly
    double snr_db = 20.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
};

ScenarioSpec load_scenario_json(const std::string& path);
void save_scenario_json(const std::string& path, const ScenarioSpec& spec);

// Draws the snapshot for a scenario (geometry built via make_geometry).
Snapshot run_scenario(const ScenarioSpec& spec, const ArrayGeometry& g);

// ------------------------------------------------------------- result ----

// Full estimate record: DOAs, amplitudes, root candidates, diagnostics and
// an echo of the configuration that produced them.
void save_result_json(const std::string& path, const SourceEstimate& est,
                      const EstimatorConfig& config);

// ---------------------------------------------------------------- SVG ----

struct SvgSeries {
    enum class Kind { Line, Scatter, Stem };
    Kind kind = Kind::Line;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f77b4";
    std::string label;
};

struct SvgPlot {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    std::vector<SvgSeries> series;
    std::vector<double> vlines;  // dashed vertical markers
    int width = 860;
    int height = 480;
};

void save_svg(const std::string& path, const SvgPlot& plot);

}  // namespace srdoa
