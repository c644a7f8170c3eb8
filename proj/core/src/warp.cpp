#include "resmatch/warp.hpp"

namespace resmatch {

WarpResult warp_similarity(const GrayImage& src, const SimilarityTransform& t, int out_width,
                           int out_height) {
    if (!(t.h > 0.0)) throw ParameterError("warp_similarity: scale factor h must be positive");
    if (out_width < 1 || out_height < 1)
        throw ParameterError("warp_similarity: output dimensions must be positive");

    const SimilarityTransform inv = t.inverse();
    const double p = inv.p();
    const double q = inv.q();

    WarpResult out;
    out.image = GrayImage(out_width, out_height, 0.0);
    out.valid.assign(static_cast<size_t>(out_width) * out_height, 0);

    for (int v = 0; v < out_height; ++v) {
        const double base_u = -q * v + inv.a;
        const double base_v = p * v + inv.b;
        for (int u = 0; u < out_width; ++u) {
            const double su = p * u + base_u;
            const double sv = q * u + base_v;
            if (src.bilinear_safe(su, sv)) {
                out.image.at(u, v) = src.bilinear(su, sv);
                out.valid[static_cast<size_t>(v) * out_width + u] = 1;
            }
        }
    }
    return out;
}

} // namespace resmatch
