#include "resmatch/repeatability.hpp"

#include <algorithm>
#include <cmath>

namespace resmatch {

RepeatabilityResult repeatability(std::span<const InterestPoint> ref,
                                  std::span<const InterestPoint> test,
                                  const SimilarityTransform& ref_to_test, double epsilon,
                                  int ref_width, int ref_height, int test_width,
                                  int test_height) {
    if (!(epsilon > 0.0)) throw ParameterError("repeatability: epsilon must be positive");
    const SimilarityTransform inv = ref_to_test.inverse();

    std::vector<int> ref_common;
    std::vector<Point> ref_mapped(ref.size());
    for (size_t i = 0; i < ref.size(); ++i) {
        const Point mapped = ref_to_test.apply({ref[i].u, ref[i].v});
        ref_mapped[i] = mapped;
        if (mapped.u >= 0.0 && mapped.u <= test_width - 1.0 && mapped.v >= 0.0 &&
            mapped.v <= test_height - 1.0)
            ref_common.push_back(static_cast<int>(i));
    }
    std::vector<int> test_common;
    for (size_t j = 0; j < test.size(); ++j) {
        const Point back = inv.apply({test[j].u, test[j].v});
        if (back.u >= 0.0 && back.u <= ref_width - 1.0 && back.v >= 0.0 &&
            back.v <= ref_height - 1.0)
            test_common.push_back(static_cast<int>(j));
    }

    RepeatabilityResult result;
    result.n_ref = static_cast<int>(ref_common.size());
    result.n_test = static_cast<int>(test_common.size());
    if (ref_common.empty() || test_common.empty()) {
        result.undefined = true;
        return result;
    }

    // Greedy one-to-one assignment by increasing distance.
    struct Cand {
        double d2;
        int i, j;
    };
    std::vector<Cand> cands;
    const double eps2 = epsilon * epsilon;
    for (int i : ref_common) {
        for (int j : test_common) {
            const double du = ref_mapped[i].u - test[j].u;
            const double dv = ref_mapped[i].v - test[j].v;
            const double d2 = du * du + dv * dv;
            if (d2 <= eps2) cands.push_back({d2, i, j});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.d2 != b.d2) return a.d2 < b.d2;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    std::vector<char> used_ref(ref.size(), 0), used_test(test.size(), 0);
    int repeated = 0;
    for (const Cand& c : cands) {
        if (used_ref[c.i] || used_test[c.j]) continue;
        used_ref[c.i] = 1;
        used_test[c.j] = 1;
        ++repeated;
    }
    result.n_repeated = repeated;
    result.rate = static_cast<double>(repeated) / std::min(result.n_ref, result.n_test);
    return result;
}

namespace {

SweepRow make_row(double factor, DetectorMode mode, const RepeatabilityResult& r) {
    SweepRow row;
    row.factor = factor;
    row.mode = mode;
    row.n_ref = r.n_ref;
    row.n_test = r.n_test;
    row.repeated = r.n_repeated;
    row.rate = r.undefined ? 0.0 : r.rate;
    return row;
}

} // namespace

std::vector<SweepRow> sweep_repeatability(const GrayImage& img, std::span<const double> factors,
                                          const DetectorParams& params, double epsilon) {
    std::vector<SweepRow> rows;
    for (double f : factors) {
        if (!(f >= 1.0)) throw ParameterError("sweep_repeatability: factors must be >= 1");
        const int int_factor = static_cast<int>(std::lround(f));
        if (std::abs(f - int_factor) > 1e-9)
            throw ParameterError("sweep_repeatability: image sweeps support integer factors");
        const ImagePair pair = downsample_pair(img, int_factor);
        const DetectResult low = detect(pair.low, params, 1.0);

        const DetectResult std_high = detect(pair.high, params, 1.0);
        rows.push_back(make_row(
            f, DetectorMode::Standard,
            repeatability(std_high.points, low.points, pair.truth, epsilon, pair.high.width,
                          pair.high.height, pair.low.width, pair.low.height)));

        const DetectResult ada_high = f == 1.0 ? std_high : detect(pair.high, params, f);
        rows.push_back(make_row(
            f, DetectorMode::Adapted,
            repeatability(ada_high.points, low.points, pair.truth, epsilon, pair.high.width,
                          pair.high.height, pair.low.width, pair.low.height)));
    }
    return rows;
}

std::vector<SweepRow> sweep_repeatability(const SyntheticScene& scene, int base_size,
                                          std::span<const double> factors,
                                          const DetectorParams& params, double epsilon) {
    std::vector<SweepRow> rows;
    const GrayImage low_img =
        render_scene(scene, base_size, base_size, SimilarityTransform::identity(), 4);
    const DetectResult low = detect(low_img, params, 1.0);

    for (double f : factors) {
        if (!(f >= 1.0)) throw ParameterError("sweep_repeatability: factors must be >= 1");
        const int hs = static_cast<int>(std::lround(base_size * f));
        SimilarityTransform pixel_to_scene;
        pixel_to_scene.h = 1.0 / f;
        const GrayImage high_img = render_scene(scene, hs, hs, pixel_to_scene, 4);
        SimilarityTransform truth; // high -> low
        truth.h = 1.0 / f;

        const DetectResult std_high = detect(high_img, params, 1.0);
        rows.push_back(make_row(f, DetectorMode::Standard,
                                repeatability(std_high.points, low.points, truth, epsilon,
                                              high_img.width, high_img.height, low_img.width,
                                              low_img.height)));

        const DetectResult ada_high = f == 1.0 ? std_high : detect(high_img, params, f);
        rows.push_back(make_row(f, DetectorMode::Adapted,
                                repeatability(ada_high.points, low.points, truth, epsilon,
                                              high_img.width, high_img.height, low_img.width,
                                              low_img.height)));
    }
    return rows;
}

} // namespace resmatch
