#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "resmatch/detector.hpp"
#include "resmatch/matching.hpp"
#include "resmatch/repeatability.hpp"

namespace resmatch {

/// Fully resolved run configuration; echoed into every output so that a run
/// is reproducible from its own artifacts.
struct RunConfig {
    std::string command; // detect | match | repeat | render
    std::vector<std::string> inputs;
    std::string output_json;
    std::string output_png;
    std::string output_csv;

    MatcherConfig matcher; // matcher.detector also drives detect/repeat
    std::vector<double> scales = {1, 2, 3, 4, 5, 6, 7, 8};

    // repeat
    std::vector<double> factors = {1, 2, 3, 4, 5, 6};
    double epsilon = 1.5;
    std::string scene;         // checkerboard | random-blobs | textured-noise | "" (use input image)
    int scene_size = 256;
    std::uint64_t scene_seed = 1;
};

std::string config_to_json(const RunConfig& config);
RunConfig config_from_json(const std::string& text);

/// Point-set JSON: {config, scales: [{scale, points: [{u, v, cornerness,
/// descriptor?}]}]} with coordinates in pixels of the original image grid.
std::string detect_output_json(const RunConfig& config, std::span<const double> scales,
                               std::span<const DetectResult> detections);

/// Match report JSON: per-scale statistics in the shape of the paper's
/// results table, the best scale, the fitted transform (low -> high; the
/// row-major matrix is authoritative, h/theta_deg/a/b are informative), the
/// inliers and the seed.
std::string match_report_json(const RunConfig& config, const OneToManyResult& result);

/// Sweep CSV: "factor,detector,n_ref,n_test,repeated,rate" preceded by a
/// "# config: ..." echo line.
std::string sweep_csv(const RunConfig& config, std::span<const SweepRow> rows);

/// The parts of a match report needed to re-render its overlay.
struct ParsedReport {
    std::optional<double> best_scale;
    std::optional<TransformModel> transform; // low -> high
    std::vector<InlierPair> inliers;
    std::uint64_t seed = 0;
};

/// Parses a match report; throws SchemaError naming the JSON pointer of the
/// offending field.
ParsedReport parse_match_report(const std::string& text);

} // namespace resmatch
