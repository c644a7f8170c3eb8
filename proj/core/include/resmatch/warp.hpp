#pragma once

#include "resmatch/image.hpp"
#include "resmatch/transform.hpp"

namespace resmatch {

/// Warped image plus a per-pixel validity mask (1 where the source sample had
/// a full bilinear footprint inside the source image, 0 where the output was
/// filled with 0).
struct WarpResult {
    GrayImage image;
    std::vector<std::uint8_t> valid;

    bool valid_at(int u, int v) const { return valid[static_cast<size_t>(v) * image.width + u]; }
};

/// Inverse-mapping warp with bilinear interpolation: output pixel x' samples
/// the source at t^-1(x'), where t maps source coordinates to output
/// coordinates. Throws ParameterError when t.h <= 0.
WarpResult warp_similarity(const GrayImage& src, const SimilarityTransform& t, int out_width,
                           int out_height);

} // namespace resmatch
