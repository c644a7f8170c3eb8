#pragma once

#include <cstdint>
#include <vector>

#include "resmatch/error.hpp"

namespace resmatch {

/// A 2-D point in pixel coordinates. Pixel (u, v) is centred at the
/// continuous location (u, v); pixel u covers [u - 0.5, u + 0.5).
struct Point {
    double u = 0.0;
    double v = 0.0;
};

/// Axis-aligned rectangle in pixel coordinates (x0, y0 inclusive).
struct Rect {
    int x0 = 0;
    int y0 = 0;
    int width = 0;
    int height = 0;
};

/// Single-channel intensity image, row major, intensities nominally in [0, 1].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<double> data; // width * height entries, data[v * width + u]

    GrayImage() = default;
    GrayImage(int w, int h, double fill = 0.0);

    double& at(int u, int v) { return data[static_cast<size_t>(v) * width + u]; }
    double at(int u, int v) const { return data[static_cast<size_t>(v) * width + u]; }

    bool in_bounds(int u, int v) const { return u >= 0 && u < width && v >= 0 && v < height; }

    /// True when (u, v) has a full bilinear footprint inside the image.
    bool bilinear_safe(double u, double v) const {
        return u >= 0.0 && v >= 0.0 && u <= width - 1.0 && v <= height - 1.0;
    }

    /// Bilinear interpolation; coordinates are clamped to the valid range.
    double bilinear(double u, double v) const;

    double min_value() const;
    double max_value() const;
    double mean() const;
    double stddev() const; // population
    bool all_finite() const;
};

/// Interleaved 8-bit RGB image used for overlays and annotated output.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data; // 3 * width * height, r g b

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

    std::uint8_t* pixel(int u, int v) { return &data[(static_cast<size_t>(v) * width + u) * 3]; }
    const std::uint8_t* pixel(int u, int v) const {
        return &data[(static_cast<size_t>(v) * width + u) * 3];
    }
};

/// Remaps intensities affinely to mean 0.5 and standard deviation 0.2,
/// clamped to [0, 1]. Invariant to affine intensity changes a*I + b, a > 0.
/// Throws DegenerateError for a zero-variance image.
GrayImage normalize_photometric(const GrayImage& img);

/// Lossless 90-degree counter-clockwise rotation.
GrayImage rotate90_ccw(const GrayImage& img);

/// Maps a point of `img` to its location in rotate90_ccw(img).
Point rotate90_ccw_point(const Point& p, int width, int height);

/// Per-pixel scaling, used for intensity-equivariance checks.
GrayImage scale_intensity(const GrayImage& img, double gamma);

} // namespace resmatch
