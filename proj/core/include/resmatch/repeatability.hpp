#pragma once

#include <span>

#include "resmatch/detector.hpp"
#include "resmatch/synthetic.hpp"
#include "resmatch/transform.hpp"

namespace resmatch {

struct RepeatabilityResult {
    double scale_factor = 1.0;
    int n_ref = 0;      // reference points whose mapped location lies in the test image
    int n_test = 0;     // test points whose pre-image lies in the reference image
    int n_repeated = 0; // one-to-one greedy assignments within epsilon
    double rate = 0.0;  // n_repeated / min(n_ref, n_test)
    bool undefined = false; // empty common region
};

/// Repeatability of `ref` against `test` under the ground-truth map
/// ref_to_test. A reference point is repeated when a test point lies within
/// epsilon (test-image pixels) of its mapped location; assignment is greedy
/// one-to-one by distance. Only points falling in the common region of both
/// images are counted.
RepeatabilityResult repeatability(std::span<const InterestPoint> ref,
                                  std::span<const InterestPoint> test,
                                  const SimilarityTransform& ref_to_test, double epsilon,
                                  int ref_width, int ref_height, int test_width, int test_height);

enum class DetectorMode { Standard, Adapted };

struct SweepRow {
    double factor = 1.0;
    DetectorMode mode = DetectorMode::Standard;
    int n_ref = 0;
    int n_test = 0;
    int repeated = 0;
    double rate = 0.0;
};

/// Fig.-3-style sweep on an image: for each factor the low member is the
/// anti-aliased downsampling of `img`; the adapted detector runs at s = factor
/// on the full-resolution member, the standard detector at s = 1 on both.
/// Emits one row per (factor, detector), factors in order, standard first.
std::vector<SweepRow> sweep_repeatability(const GrayImage& img, std::span<const double> factors,
                                          const DetectorParams& params, double epsilon = 1.5);

/// Scene-based sweep: the low member is the scene rendered at unit density and
/// size base_size, the high member is rendered at density `factor`. This keeps
/// genuine fine detail in the high member at every factor.
std::vector<SweepRow> sweep_repeatability(const SyntheticScene& scene, int base_size,
                                          std::span<const double> factors,
                                          const DetectorParams& params, double epsilon = 1.5);

} // namespace resmatch
