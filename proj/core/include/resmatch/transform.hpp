#pragma once

#include <array>
#include <span>

#include "resmatch/image.hpp"

namespace resmatch {

/// Similarity transform x' = h R(theta) x + (a, b). Parametrized either by
/// (h, theta, a, b) or by the linear parameters p = h cos(theta),
/// q = h sin(theta), in which all estimation problems are linear.
struct SimilarityTransform {
    double h = 1.0;     // similitude factor, > 0
    double theta = 0.0; // rotation, radians
    double a = 0.0;     // translation u
    double b = 0.0;     // translation v

    static SimilarityTransform identity() { return {}; }
    static SimilarityTransform from_linear(double p, double q, double a, double b);

    double p() const;
    double q() const;

    Point apply(const Point& x) const;
    SimilarityTransform inverse() const;
    /// Composition: (this o inner)(x) = this(inner(x)).
    SimilarityTransform compose(const SimilarityTransform& inner) const;
};

enum class ModelKind { Similarity, Affine, Homography };

/// A fitted geometric model, stored as a row-major 3x3 matrix. Similarity and
/// affine models have last row (0, 0, 1); homographies are normalized so that
/// the entry of largest magnitude in the last row is well conditioned and
/// m[8] == 1 whenever possible.
struct TransformModel {
    ModelKind kind = ModelKind::Similarity;
    std::array<double, 9> m = {1, 0, 0, 0, 1, 0, 0, 0, 1};

    static TransformModel from_similarity(const SimilarityTransform& t);

    Point apply(const Point& x) const;
    /// Similarity parameters; valid only for kind == Similarity.
    SimilarityTransform similarity() const;
    /// Isotropic scale of the linear part: sqrt(|det|) of the upper 2x2 block.
    double scale_hint() const;
};

int minimal_matches(ModelKind kind); // 2, 3, 4

/// Least-squares similarity from point correspondences src[i] -> dst[i].
/// Exact for two non-degenerate pairs. Throws DegenerateError when all source
/// points coincide.
SimilarityTransform estimate_similarity(std::span<const Point> src, std::span<const Point> dst);

/// Least-squares affine fit or a normalized-DLT homography fit (Hartley
/// isotropic normalization). Throws DegenerateError on rank-deficient
/// configurations such as collinear source points for a homography.
TransformModel estimate_model(std::span<const Point> src, std::span<const Point> dst,
                              ModelKind kind);

} // namespace resmatch
