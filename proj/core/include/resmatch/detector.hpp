#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "resmatch/image.hpp"

namespace resmatch {

/// Detector parameters. sigma is the derivation scale, sigma_tilde the
/// integration scale; at detection scale s both are multiplied by s.
struct DetectorParams {
    double sigma = 1.0;        // derivation scale, > 0
    double sigma_tilde = 2.0;  // integration scale, > 0
    double alpha = 0.04;       // cornerness coefficient, in (0, 0.25)
    double rel_threshold = 0.01; // detection threshold as a fraction of the per-scale maximum
    double nms_radius = 3.0;   // non-max suppression radius at s = 1, scaled by s
    int max_points = 0;        // keep only the strongest N points; 0 = unlimited

    void validate() const;
};

/// Per-pixel autocorrelation matrix [[a, b], [b, c]], including the s^2
/// weighting of the scale-adapted detector.
struct AutoCorrField {
    GrayImage a; // smoothed I_u^2
    GrayImage b; // smoothed I_u I_v
    GrayImage c; // smoothed I_v^2
    double scale = 1.0;
};

struct InterestPoint {
    double u = 0.0;
    double v = 0.0;
    double scale = 1.0;      // detection scale s
    double cornerness = 0.0; // s^4-weighted cornerness at the detected maximum
    std::optional<std::array<double, 7>> descriptor;
};

/// Detection output; `too_small` flags an image that cannot hold the kernel
/// border margin at the requested scale (the point list is then empty).
struct DetectResult {
    std::vector<InterestPoint> points;
    bool too_small = false;
};

/// Autocorrelation field at detection scale s: gradients at s*sigma, weighted
/// by a Gaussian window of s*sigma_tilde, multiplied by s^2. At s = 1 this is
/// the plain Harris matrix.
AutoCorrField autocorrelation(const GrayImage& img, const DetectorParams& params, double s);

/// Per-pixel cornerness det(M) - alpha * trace(M)^2. The s^4 scale weighting
/// is applied by detect().
GrayImage cornerness(const AutoCorrField& field, double alpha);

/// Interest points at scale s: local maxima of the s^4-weighted cornerness
/// above rel_threshold * max, refined to sub-pixel accuracy by a quadratic
/// fit, with a discarded border of ceil(3 * s * sigma_tilde) pixels. Points
/// are returned strongest first.
DetectResult detect(const GrayImage& img, const DetectorParams& params, double s);

/// Independent detection at each scale, in the given order.
std::vector<DetectResult> detect_scale_space(const GrayImage& img, const DetectorParams& params,
                                             std::span<const double> scales);

/// Border margin inside which detect() discards points.
int detection_margin(const DetectorParams& params, double s);

} // namespace resmatch
