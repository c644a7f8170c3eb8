#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resmatch/descriptor.hpp"
#include "resmatch/detector.hpp"
#include "resmatch/transform.hpp"

namespace resmatch {

enum class MatchStatus { Candidate, LocallySupported, Inlier, Outlier };

/// A high-resolution point tentatively assigned to a low-resolution point.
/// candidate_matches keeps at most one candidate per high point.
struct Match {
    int index_high = -1;
    int index_low = -1;
    double distance = 0.0;
    MatchStatus status = MatchStatus::Candidate;
};

/// Nearest low-resolution point per high-resolution point under the
/// Mahalanobis distance, kept when the distance is <= d_max; ties broken by
/// the lower low-point index. Points without descriptors are skipped.
std::vector<Match> candidate_matches(std::span<const InterestPoint> high,
                                     std::span<const InterestPoint> low,
                                     const CovarianceModel& cov, double d_max);

struct LocalSupportResult {
    std::vector<Match> matches;
    int vacuous = 0; // matches kept because their neighbourhoods were too sparse to test
};

/// Disambiguation by local collections of points: a match survives when some
/// similarity estimated from it plus one neighbouring match predicts at least
/// min_support further neighbouring matches within `tolerance` pixels (in the
/// low image). The neighbour search is depth first and stops at the first
/// sufficient support set. Matches whose neighbourhoods hold fewer than
/// 1 + min_support other matches cannot be tested and are kept.
LocalSupportResult local_support(std::span<const Match> matches,
                                 std::span<const InterestPoint> high,
                                 std::span<const InterestPoint> low, double radius_high,
                                 double radius_low, int min_support, double tolerance);

/// Mean squared intensity difference over a correlation window: shifts run
/// over the integer lattice of the low image (half_window in each direction)
/// and the corresponding high-image samples are taken at hR-transformed
/// offsets. `t` maps high coordinates to low coordinates. Throws BorderError
/// when either window leaves its image.
double ssd_verify(const GrayImage& high_img, const GrayImage& low_img,
                  const SimilarityTransform& t, const Point& high_point, int half_window);

struct RansacConfig {
    double inlier_tol = 2.0;   // pixels, multiplied by max(1, scale hint of the model)
    double confidence = 0.999; // probability of finding an outlier-free sample
    int max_iterations = 10000;
    std::uint64_t seed = 1;
};

struct RansacResult {
    TransformModel model;
    std::vector<int> inlier_indices; // indices into the input match list, ascending
    int iterations = 0;
};

/// Hypothesize-and-verify estimation of the low -> high mapping from candidate
/// matches. The iteration count adapts to the best inlier ratio at the given
/// confidence; the final model is refit on all inliers. Deterministic for a
/// fixed seed. Throws NoConsensusError when no model reaches
/// minimal_matches + 1 inliers.
RansacResult ransac(std::span<const Match> matches, std::span<const InterestPoint> high,
                    std::span<const InterestPoint> low, ModelKind kind,
                    const RansacConfig& config);

/// Full matcher configuration; detector parameters apply to both images (the
/// low image is always detected at s = 1).
struct MatcherConfig {
    DetectorParams detector;
    double d_max = 3.0;           // candidate Mahalanobis cutoff
    double support_radius = 40.0; // low-image pixels; scaled by s in the high image
    int min_support = 2;
    double support_tolerance = 3.0; // pixels, low image
    ModelKind model = ModelKind::Similarity;
    RansacConfig ransac;
    int ssd_half_window = 7;
    double ssd_cutoff = 0.02;
};

/// Table-style per-scale statistics. estimated_factor is the similitude
/// factor of the fitted low -> high model, i.e. the resolution ratio; it is
/// absent when RANSAC reached no consensus at this scale.
struct ScaleReport {
    double scale = 1.0;
    std::optional<double> estimated_factor;
    int n_points = 0;  // high-resolution points at this scale
    int n_initial = 0; // candidate matches
    int n_inliers = 0; // final matches
    double outlier_fraction = 0.0;
    std::optional<double> mean_ssd;
};

/// One inlier correspondence in original pixel coordinates.
struct InlierPair {
    Point high;
    Point low;
    double scale = 1.0;
};

struct ScaleMatchResult {
    ScaleReport report;
    std::optional<TransformModel> model; // low -> high
    std::vector<InlierPair> inliers;
    std::vector<Match> matches; // all candidates with final statuses
    bool detect_degenerate = false;
};

/// Matches the high image represented at scale s against the low image:
/// detection, descriptors, candidate matching, local support, RANSAC and
/// SSD verification of every inlier (failures are demoted and the model
/// refit). Images are photometrically normalized internally.
ScaleMatchResult match_at_scale(const GrayImage& high, const GrayImage& low, double s,
                                const MatcherConfig& config,
                                const std::optional<CovarianceModel>& cov = std::nullopt);

struct OneToManyResult {
    std::vector<ScaleMatchResult> per_scale;
    std::optional<int> best_index;             // into per_scale
    std::optional<double> best_scale;
    std::optional<TransformModel> transform;   // low -> high at the best scale
    std::optional<double> estimated_factor;    // resolution ratio at the best scale
};

/// One-to-many matching over a scale list. The best scale maximizes the
/// inlier count; ties fall to the lower outlier fraction, then the lower mean
/// SSD, then the lower scale.
OneToManyResult match_one_to_many(const GrayImage& high, const GrayImage& low,
                                  std::span<const double> scales, const MatcherConfig& config);

} // namespace resmatch
