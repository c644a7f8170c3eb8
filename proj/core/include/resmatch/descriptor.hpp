#pragma once

#include <array>
#include <span>

#include "resmatch/detector.hpp"
#include "resmatch/image.hpp"

namespace resmatch {

/// Gaussian-derivative jet up to third order at a point, computed at
/// derivation scale s * sigma. Each order-n entry carries the scale
/// normalization factor (s * sigma)^n.
struct LocalJet {
    double l = 0.0;
    double lu = 0.0, lv = 0.0;
    double luu = 0.0, luv = 0.0, lvv = 0.0;
    double luuu = 0.0, luuv = 0.0, luvv = 0.0, lvvv = 0.0;
    double s = 1.0;     // detection scale
    double sigma = 1.0; // base derivation scale
};

/// Seven rotation-invariant combinations of the jet (see invariants()).
struct InvariantVector {
    std::array<double, 7> v{};
    double scale = 1.0;
};

/// Diagonal descriptor covariance for the Mahalanobis distance.
struct CovarianceModel {
    std::array<double, 7> diag;

    static CovarianceModel unit() {
        CovarianceModel c;
        c.diag.fill(1.0);
        return c;
    }
};

/// Regularizer for the gradient normalization of the jet.
inline constexpr double kGradientEpsilon = 1e-6;

/// Precomputes the ten jet planes of an image at one scale so that many
/// points can be sampled cheaply (bilinear interpolation per plane).
class JetExtractor {
public:
    JetExtractor(const GrayImage& img, double s, double sigma);

    /// Margin inside which jets can be sampled.
    int margin() const { return margin_; }
    bool inside(const Point& p) const;

    /// Jet at p; throws BorderError if p is closer than margin() to the border.
    LocalJet at(const Point& p) const;

private:
    std::array<GrayImage, 10> planes_;
    double s_;
    double sigma_;
    int margin_;
    int width_;
    int height_;
};

/// Single-point convenience wrapper around JetExtractor; prefer the extractor
/// when sampling more than a handful of points.
LocalJet local_jet(const GrayImage& img, const Point& p, double s, double sigma);

/// Rotation-invariant descriptor of a jet. The derivative entries are first
/// normalized by the gradient magnitude (max(sqrt(E), epsilon) with
/// E = lu^2 + lv^2), making v[1..6] invariant to affine intensity changes;
/// v[0] = log(E + epsilon) keeps the absolute contrast, to be absorbed by the
/// covariance weighting.
InvariantVector invariants(const LocalJet& jet);

/// Component-wise population variances over at least 8 descriptors, floored
/// at 1e-8.
CovarianceModel estimate_covariance(std::span<const InvariantVector> vectors);

double mahalanobis(const InvariantVector& v1, const InvariantVector& v2,
                   const CovarianceModel& cov);

/// Detects interest points and attaches descriptors (points whose jet window
/// would cross the border keep an empty descriptor).
DetectResult extract_features(const GrayImage& img, const DetectorParams& params, double s);

} // namespace resmatch
