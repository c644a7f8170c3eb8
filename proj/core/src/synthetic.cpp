#include "resmatch/synthetic.hpp"

#include <algorithm>
#include <cmath>

namespace resmatch {

namespace {

// splitmix64 finalizer; the basis of all scene determinism.
std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double hash_unit(std::uint64_t seed, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    std::uint64_t h = mix64(seed ^ mix64(a));
    h = mix64(h ^ mix64(b + 0x7f4a7c15ULL));
    h = mix64(h ^ mix64(c + 0x94d049bbULL));
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0); // [0, 1)
}

// Quintic fade: zero first and second derivative at the lattice, so the
// interpolated noise is C2.
double fade(double t) { return t * t * t * (t * (6.0 * t - 15.0) + 10.0); }

double lattice_value(std::uint64_t seed, int octave, std::int64_t xi, std::int64_t yi) {
    return 2.0 * hash_unit(seed, static_cast<std::uint64_t>(octave) * 0x632be59bd9b4e019ULL,
                           static_cast<std::uint64_t>(xi), static_cast<std::uint64_t>(yi)) -
           1.0;
}

double value_noise(std::uint64_t seed, int octave, double x, double y) {
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const auto xi = static_cast<std::int64_t>(fx);
    const auto yi = static_cast<std::int64_t>(fy);
    const double tx = fade(x - fx);
    const double ty = fade(y - fy);
    const double v00 = lattice_value(seed, octave, xi, yi);
    const double v10 = lattice_value(seed, octave, xi + 1, yi);
    const double v01 = lattice_value(seed, octave, xi, yi + 1);
    const double v11 = lattice_value(seed, octave, xi + 1, yi + 1);
    const double top = v00 * (1.0 - tx) + v10 * tx;
    const double bot = v01 * (1.0 - tx) + v11 * tx;
    return top * (1.0 - ty) + bot * ty;
}

} // namespace

double SyntheticScene::value(double x, double y) const {
    switch (kind) {
        case SceneKind::Checkerboard: {
            const auto cx = static_cast<std::int64_t>(std::floor(x / square));
            const auto cy = static_cast<std::int64_t>(std::floor(y / square));
            return ((cx + cy) & 1) ? 0.85 : 0.15;
        }
        case SceneKind::RandomBlobs: {
            double acc = 0.0;
            for (const Blob& b : blobs) {
                const double d2 = (x - b.u) * (x - b.u) + (y - b.v) * (y - b.v);
                acc += b.amplitude * std::exp(-0.5 * d2 / (b.sigma * b.sigma));
            }
            return 0.5 + 0.45 * std::tanh(acc);
        }
        case SceneKind::TexturedNoise: {
            double acc = 0.0;
            double amp_sum = 0.0;
            double amp = 1.0;
            double wavelength = base_wavelength;
            for (int o = 0; o < octaves; ++o) {
                acc += amp * value_noise(seed, o, x / wavelength, y / wavelength);
                amp_sum += amp;
                amp *= persistence;
                wavelength *= 0.5;
            }
            return 0.5 + 0.45 * acc / amp_sum;
        }
    }
    return 0.0;
}

std::vector<Point> SyntheticScene::ground_truth_corners() const {
    std::vector<Point> corners;
    if (kind != SceneKind::Checkerboard) return corners;
    for (int y = square; y < size; y += square)
        for (int x = square; x < size; x += square)
            corners.push_back({static_cast<double>(x), static_cast<double>(y)});
    return corners;
}

SyntheticScene checkerboard_scene(int size, int square) {
    if (size < 64) throw ParameterError("checkerboard_scene: size must be at least 64");
    SyntheticScene scene;
    scene.kind = SceneKind::Checkerboard;
    scene.size = size;
    scene.square = square;
    return scene;
}

SyntheticScene blobs_scene(int size, std::uint64_t seed, int count) {
    if (size < 64) throw ParameterError("blobs_scene: size must be at least 64");
    SyntheticScene scene;
    scene.kind = SceneKind::RandomBlobs;
    scene.size = size;
    scene.seed = seed;
    scene.blobs.reserve(count);
    for (int i = 0; i < count; ++i) {
        SyntheticScene::Blob b;
        const auto id = static_cast<std::uint64_t>(i);
        b.u = (0.1 + 0.8 * hash_unit(seed, 11, id, 0)) * size;
        b.v = (0.1 + 0.8 * hash_unit(seed, 13, id, 1)) * size;
        b.sigma = 2.5 + 3.5 * hash_unit(seed, 17, id, 2);
        b.amplitude = (hash_unit(seed, 19, id, 3) < 0.5 ? -1.0 : 1.0) *
                      (0.4 + 0.6 * hash_unit(seed, 23, id, 4));
        scene.blobs.push_back(b);
    }
    return scene;
}

SyntheticScene noise_scene(int size, std::uint64_t seed, double base_wavelength, int octaves,
                           double persistence) {
    if (size < 64) throw ParameterError("noise_scene: size must be at least 64");
    SyntheticScene scene;
    scene.kind = SceneKind::TexturedNoise;
    scene.size = size;
    scene.seed = seed;
    scene.base_wavelength = base_wavelength;
    scene.octaves = octaves;
    scene.persistence = persistence;
    return scene;
}

GrayImage render_scene(const SyntheticScene& scene, int width, int height,
                       const SimilarityTransform& pixel_to_scene, int supersample) {
    if (supersample < 1) throw ParameterError("render_scene: supersample must be >= 1");
    GrayImage out(width, height);
    const double inv_ss = 1.0 / supersample;
    for (int v = 0; v < height; ++v) {
        for (int u = 0; u < width; ++u) {
            double acc = 0.0;
            for (int sv = 0; sv < supersample; ++sv) {
                for (int su = 0; su < supersample; ++su) {
                    const double du = (su + 0.5) * inv_ss - 0.5;
                    const double dv = (sv + 0.5) * inv_ss - 0.5;
                    const Point p = pixel_to_scene.apply({u + du, v + dv});
                    acc += scene.value(p.u, p.v);
                }
            }
            out.at(u, v) = acc * inv_ss * inv_ss;
        }
    }
    return out;
}

GrayImage generate(const SyntheticScene& scene) {
    return render_scene(scene, scene.size, scene.size, SimilarityTransform::identity(), 4);
}

SimilarityTransform zoom_transform(double h, double theta, const Rect& crop) {
    if (!(h > 0.0)) throw ParameterError("zoom_transform: h must be positive");
    SimilarityTransform t;
    t.h = h;
    t.theta = theta;
    // Shift so that the transformed crop's bounding box starts at -0.5.
    double min_u = 0.0, min_v = 0.0;
    bool first = true;
    const double xs[2] = {crop.x0 - 0.5, crop.x0 + crop.width - 0.5};
    const double ys[2] = {crop.y0 - 0.5, crop.y0 + crop.height - 0.5};
    for (double y : ys) {
        for (double x : xs) {
            const Point p = t.apply({x, y});
            if (first || p.u < min_u) min_u = p.u;
            if (first || p.v < min_v) min_v = p.v;
            first = false;
        }
    }
    t.a = -min_u - 0.5;
    t.b = -min_v - 0.5;
    return t;
}

void zoomed_extent(const SimilarityTransform& low_to_high, const Rect& crop, int& width,
                   int& height) {
    double max_u = 0.0, max_v = 0.0;
    bool first = true;
    const double xs[2] = {crop.x0 - 0.5, crop.x0 + crop.width - 0.5};
    const double ys[2] = {crop.y0 - 0.5, crop.y0 + crop.height - 0.5};
    for (double y : ys) {
        for (double x : xs) {
            const Point p = low_to_high.apply({x, y});
            if (p.u < -0.5 - 1e-9 || p.v < -0.5 - 1e-9)
                throw ParameterError("make_pair: crop maps to negative high coordinates");
            if (first || p.u > max_u) max_u = p.u;
            if (first || p.v > max_v) max_v = p.v;
            first = false;
        }
    }
    width = static_cast<int>(std::ceil(max_u + 0.5 - 1e-9));
    height = static_cast<int>(std::ceil(max_v + 0.5 - 1e-9));
}

ImagePair make_pair(const GrayImage& img, const SimilarityTransform& low_to_high,
                    const Rect& crop) {
    if (!(low_to_high.h > 0.0)) throw ParameterError("make_pair: h must be positive");
    if (crop.x0 < 0 || crop.y0 < 0 || crop.width < 1 || crop.height < 1 ||
        crop.x0 + crop.width > img.width || crop.y0 + crop.height > img.height)
        throw ParameterError("make_pair: crop rectangle out of image bounds");

    int hw = 0, hh = 0;
    zoomed_extent(low_to_high, crop, hw, hh);

    ImagePair pair;
    pair.truth = low_to_high.inverse();
    pair.low = img;
    pair.high = GrayImage(hw, hh);

    // Magnification needs no anti-aliasing; minification is box supersampled.
    const int ss = low_to_high.h >= 1.0
                       ? 1
                       : static_cast<int>(std::ceil(2.0 / low_to_high.h));
    const double inv_ss = 1.0 / ss;
    for (int v = 0; v < hh; ++v) {
        for (int u = 0; u < hw; ++u) {
            double acc = 0.0;
            for (int sv = 0; sv < ss; ++sv) {
                for (int su = 0; su < ss; ++su) {
                    const double du = ss == 1 ? 0.0 : (su + 0.5) * inv_ss - 0.5;
                    const double dv = ss == 1 ? 0.0 : (sv + 0.5) * inv_ss - 0.5;
                    const Point p = pair.truth.apply({u + du, v + dv});
                    acc += img.bilinear(p.u, p.v);
                }
            }
            pair.high.at(u, v) = acc * inv_ss * inv_ss;
        }
    }
    return pair;
}

ImagePair downsample_pair(const GrayImage& img, int factor) {
    if (factor < 1) throw ParameterError("downsample_pair: factor must be >= 1");
    ImagePair pair;
    pair.high = img;
    if (factor == 1) {
        pair.low = img;
        pair.truth = SimilarityTransform::identity();
        return pair;
    }
    const int w = img.width / factor;
    const int h = img.height / factor;
    if (w < 1 || h < 1) throw ParameterError("downsample_pair: factor exceeds image size");
    pair.low = GrayImage(w, h);
    const double norm = 1.0 / (factor * factor);
    for (int v = 0; v < h; ++v) {
        for (int u = 0; u < w; ++u) {
            double acc = 0.0;
            for (int dv = 0; dv < factor; ++dv)
                for (int du = 0; du < factor; ++du) acc += img.at(u * factor + du, v * factor + dv);
            pair.low.at(u, v) = acc * norm;
        }
    }
    // Low pixel i is centred at high coordinate factor * i + (factor - 1) / 2.
    pair.truth.h = 1.0 / factor;
    pair.truth.theta = 0.0;
    pair.truth.a = -(factor - 1.0) / (2.0 * factor);
    pair.truth.b = pair.truth.a;
    return pair;
}

} // namespace resmatch
