#pragma once

#include <cstdint>
#include <vector>

#include "resmatch/image.hpp"
#include "resmatch/transform.hpp"

namespace resmatch {

enum class SceneKind { Checkerboard, RandomBlobs, TexturedNoise };

/// A deterministic synthetic scene, evaluable at any continuous coordinate.
/// The same seed and parameters always produce the same scene.
struct SyntheticScene {
    SceneKind kind = SceneKind::TexturedNoise;
    int size = 256;
    std::uint64_t seed = 1;

    // checkerboard
    int square = 8;

    // textured noise
    double base_wavelength = 48.0;
    int octaves = 6;
    double persistence = 0.55;

    // random blobs (filled by blobs_scene)
    struct Blob {
        double u, v, sigma, amplitude;
    };
    std::vector<Blob> blobs;

    /// Scene intensity at a continuous location, in [0, 1].
    double value(double x, double y) const;

    /// Checkerboard corner lattice interior to the scene; empty for other kinds.
    std::vector<Point> ground_truth_corners() const;
};

SyntheticScene checkerboard_scene(int size, int square = 8);
SyntheticScene blobs_scene(int size, std::uint64_t seed, int count = 60);
SyntheticScene noise_scene(int size, std::uint64_t seed, double base_wavelength = 48.0,
                           int octaves = 6, double persistence = 0.55);

/// Renders the scene through a pixel -> scene coordinate map, averaging
/// supersample^2 subsamples per pixel (supersample = 1 point-samples pixel
/// centres).
GrayImage render_scene(const SyntheticScene& scene, int width, int height,
                       const SimilarityTransform& pixel_to_scene, int supersample = 4);

/// Anti-aliased (4x supersampled) rendering of the scene at its natural size.
GrayImage generate(const SyntheticScene& scene);

/// A high/low image pair with known geometry. `truth` maps high-resolution
/// pixel coordinates to low-resolution pixel coordinates.
struct ImagePair {
    GrayImage high;
    GrayImage low;
    SimilarityTransform truth;
};

/// Transform (low -> high) that magnifies `crop` by h with rotation theta and
/// places its bounding box at the origin of the high image.
SimilarityTransform zoom_transform(double h, double theta, const Rect& crop);

/// Dimensions of the high image produced by make_pair for this transform.
void zoomed_extent(const SimilarityTransform& low_to_high, const Rect& crop, int& width,
                   int& height);

/// Builds a synthetic acquisition: `low` is the input image, `high` is the
/// crop rendered at factor t.h (bilinear for magnification, box supersampling
/// for minification). t maps low coordinates to high coordinates and must
/// place the crop at non-negative high coordinates.
ImagePair make_pair(const GrayImage& img, const SimilarityTransform& low_to_high,
                    const Rect& crop);

/// Box-filtered downsampling by an integer factor (exact block mean), with
/// the high -> low coordinate map.
ImagePair downsample_pair(const GrayImage& img, int factor);

} // namespace resmatch
