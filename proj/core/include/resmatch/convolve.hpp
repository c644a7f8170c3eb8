#pragma once

#include <span>

#include "resmatch/image.hpp"

namespace resmatch {

/// Pair of derivative images I_u, I_v computed at derivation scale sigma.
struct GradientPair {
    GrayImage iu;
    GrayImage iv;
    double sigma = 0.0;
};

/// Separable convolution with mirror-reflected borders. `horizontal` is
/// applied along u, `vertical` along v; output size equals input size.
/// Kernel radii must be smaller than the corresponding image dimension.
GrayImage convolve_separable(const GrayImage& img, std::span<const double> horizontal,
                             std::span<const double> vertical);

/// Gaussian smoothing by sigma along both axes.
GrayImage smooth(const GrayImage& img, double sigma);

/// I_u = I * G_u(sigma), I_v = I * G_v(sigma).
GradientPair gradients(const GrayImage& img, double sigma);

/// Mixed Gaussian-derivative image of order `order_u` along u and `order_v`
/// along v, both at scale sigma. Orders 0..3.
GrayImage derivative_image(const GrayImage& img, int order_u, int order_v, double sigma);

/// Mirror reflection (edge repeated) of an index into [0, n).
inline int reflect_index(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

} // namespace resmatch
