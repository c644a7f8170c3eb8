#include "resmatch/convolve.hpp"

#include "resmatch/kernels.hpp"

namespace resmatch {

namespace {

// One separable pass. Accumulation runs in fixed tap order so that results
// are reproducible regardless of how callers schedule rows.
GrayImage convolve_axis(const GrayImage& img, std::span<const double> taps, bool along_u) {
    const int n = along_u ? img.width : img.height;
    const int radius = (static_cast<int>(taps.size()) - 1) / 2;
    if (static_cast<int>(taps.size()) % 2 == 0)
        throw ParameterError("convolve: kernel must have odd length");
    if (radius >= n) throw ParameterError("convolve: kernel radius exceeds image dimension");

    GrayImage out(img.width, img.height);
    if (along_u) {
        for (int v = 0; v < img.height; ++v) {
            const double* row = &img.data[static_cast<size_t>(v) * img.width];
            double* orow = &out.data[static_cast<size_t>(v) * img.width];
            for (int u = 0; u < img.width; ++u) {
                double acc = 0.0;
                if (u - radius >= 0 && u + radius < img.width) {
                    for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * row[u - k];
                } else {
                    for (int k = -radius; k <= radius; ++k)
                        acc += taps[k + radius] * row[reflect_index(u - k, img.width)];
                }
                orow[u] = acc;
            }
        }
    } else {
        for (int v = 0; v < img.height; ++v) {
            const bool interior = v - radius >= 0 && v + radius < img.height;
            double* orow = &out.data[static_cast<size_t>(v) * img.width];
            for (int u = 0; u < img.width; ++u) {
                double acc = 0.0;
                if (interior) {
                    for (int k = -radius; k <= radius; ++k) acc += taps[k + radius] * img.at(u, v - k);
                } else {
                    for (int k = -radius; k <= radius; ++k)
                        acc += taps[k + radius] * img.at(u, reflect_index(v - k, img.height));
                }
                orow[u] = acc;
            }
        }
    }
    return out;
}

} // namespace

GrayImage convolve_separable(const GrayImage& img, std::span<const double> horizontal,
                             std::span<const double> vertical) {
    GrayImage tmp = convolve_axis(img, horizontal, /*along_u=*/true);
    return convolve_axis(tmp, vertical, /*along_u=*/false);
}

GrayImage smooth(const GrayImage& img, double sigma) {
    const std::vector<double> taps = gaussian_taps(sigma, 0);
    return convolve_separable(img, taps, taps);
}

GradientPair gradients(const GrayImage& img, double sigma) {
    const std::vector<double> g = gaussian_taps(sigma, 0);
    const std::vector<double> d = gaussian_taps(sigma, 1);
    GradientPair out;
    out.iu = convolve_separable(img, d, g);
    out.iv = convolve_separable(img, g, d);
    out.sigma = sigma;
    return out;
}

GrayImage derivative_image(const GrayImage& img, int order_u, int order_v, double sigma) {
    const std::vector<double> ku = gaussian_taps(sigma, order_u);
    const std::vector<double> kv = gaussian_taps(sigma, order_v);
    return convolve_separable(img, ku, kv);
}

} // namespace resmatch
