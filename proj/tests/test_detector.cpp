#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "resmatch/detector.hpp"
#include "resmatch/image.hpp"
#include "resmatch/synthetic.hpp"
#include "support/oracles.hpp"

using namespace resmatch;

namespace {

GrayImage ramp_u(int w, int h) {
    GrayImage img(w, h);
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) img.at(u, v) = static_cast<double>(u);
    return img;
}

double field_max_abs(const GrayImage& img) {
    return std::max(std::abs(img.max_value()), std::abs(img.min_value()));
}

} // namespace

TEST_CASE("autocorrelation of a constant image vanishes") {
    const GrayImage img(32, 32, 0.7);
    const AutoCorrField field = autocorrelation(img, DetectorParams{}, 1.0);
    CHECK(field_max_abs(field.a) < 1e-12);
    CHECK(field_max_abs(field.b) < 1e-12);
    CHECK(field_max_abs(field.c) < 1e-12);
}

TEST_CASE("autocorrelation of a ramp carries the s^2 weighting") {
    const GrayImage img = ramp_u(64, 64);
    for (double s : {1.0, 2.0}) {
        const AutoCorrField field = autocorrelation(img, DetectorParams{}, s);
        const int m = detection_margin(DetectorParams{}, s) + 2;
        for (int v = m; v < 64 - m; v += 5) {
            for (int u = m; u < 64 - m; u += 5) {
                CHECK(field.a.at(u, v) == doctest::Approx(s * s).epsilon(0.02));
                CHECK(std::abs(field.b.at(u, v)) < 0.02 * s * s);
                CHECK(std::abs(field.c.at(u, v)) < 0.02 * s * s);
            }
        }
    }
}

TEST_CASE("autocorrelation at s=1 equals the plain Harris matrix") {
    const GrayImage img = oracle::random_image(32, 32, 17);
    const DetectorParams params{};
    const AutoCorrField field = autocorrelation(img, params, 1.0);
    const oracle::PlainAutoCorr ref =
        oracle::harris_autocorrelation(img, params.sigma, params.sigma_tilde);
    for (size_t i = 0; i < field.a.data.size(); ++i) {
        CHECK(std::abs(field.a.data[i] - ref.a.data[i]) < 1e-10);
        CHECK(std::abs(field.b.data[i] - ref.b.data[i]) < 1e-10);
        CHECK(std::abs(field.c.data[i] - ref.c.data[i]) < 1e-10);
    }
}

TEST_CASE("autocorrelation matrices are positive semi-definite") {
    const GrayImage img = oracle::random_image(48, 48, 23);
    const AutoCorrField field = autocorrelation(img, DetectorParams{}, 2.0);
    for (size_t i = 0; i < field.a.data.size(); ++i) {
        CHECK(field.a.data[i] >= -1e-12);
        CHECK(field.c.data[i] >= -1e-12);
        CHECK(field.a.data[i] * field.c.data[i] - field.b.data[i] * field.b.data[i] >= -1e-9);
    }
}

TEST_CASE("cornerness algebra on hand-built fields") {
    AutoCorrField field;
    field.a = GrayImage(1, 1, 1.0);
    field.b = GrayImage(1, 1, 0.0);
    field.c = GrayImage(1, 1, 1.0);
    CHECK(cornerness(field, 0.04).at(0, 0) == doctest::Approx(0.84).epsilon(1e-12));

    // Ideal edge: rank-one matrix diag(lambda, 0).
    const double lambda = 2.5;
    field.a = GrayImage(1, 1, lambda);
    field.c = GrayImage(1, 1, 0.0);
    CHECK(cornerness(field, 0.04).at(0, 0) ==
          doctest::Approx(-0.04 * lambda * lambda).epsilon(1e-12));
}

TEST_CASE("determinant and trace are invariant under rotation conjugation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        // Random SPD 2x2.
        const double x = unit(rng), y = unit(rng), z = unit(rng), w = unit(rng);
        const double a = x * x + y * y + 0.1, b = x * z + y * w, c = z * z + w * w + 0.1;
        const double phi = unit(rng) * std::numbers::pi;
        const double cs = std::cos(phi), sn = std::sin(phi);
        // R M R^T
        const double ra = cs * (cs * a - sn * b) - sn * (cs * b - sn * c);
        const double rb = cs * (cs * b - sn * c) + sn * (cs * a - sn * b);
        const double rc = sn * (sn * a + cs * b) + cs * (sn * b + cs * c);
        CHECK(std::abs((ra * rc - rb * rb) - (a * c - b * b)) < 1e-12);
        CHECK(std::abs((ra + rc) - (a + c)) < 1e-12);
    }
}

TEST_CASE("detection on a constant image is empty") {
    const DetectResult result = detect(GrayImage(64, 64, 0.5), DetectorParams{}, 1.0);
    CHECK(result.points.empty());
    CHECK(!result.too_small);
}

TEST_CASE("too-small images are flagged, not an error") {
    const DetectResult result = detect(GrayImage(10, 10, 0.5), DetectorParams{}, 1.0);
    CHECK(result.points.empty());
    CHECK(result.too_small);
}

TEST_CASE("checkerboard corners are found on the interior lattice") {
    const SyntheticScene scene = checkerboard_scene(64, 8);
    const GrayImage img = generate(scene);
    const DetectResult result = detect(img, DetectorParams{}, 1.0);
    const std::vector<Point> truth = scene.ground_truth_corners();
    CHECK(truth.size() == 49);
    CHECK(result.points.size() == truth.size());
    for (const Point& corner : truth) {
        double best = 1e9;
        for (const InterestPoint& p : result.points)
            best = std::min(best, std::hypot(p.u - corner.u, p.v - corner.v));
        CHECK(best <= 0.5);
    }
}

TEST_CASE("cornerness maxima coincide with generator corners") {
    const SyntheticScene scene = checkerboard_scene(64, 8);
    const GrayImage img = generate(scene);
    DetectorParams params;
    params.sigma = 1.0;
    params.sigma_tilde = 2.0;
    const AutoCorrField field = autocorrelation(img, params, 1.0);
    const GrayImage c = cornerness(field, params.alpha);
    for (const Point& corner : scene.ground_truth_corners()) {
        const int cu = static_cast<int>(corner.u);
        const int cv = static_cast<int>(corner.v);
        // The strongest response within a 3-pixel box sits within 1 pixel of
        // the lattice corner.
        double best = -1e18;
        int bu = 0, bv = 0;
        for (int v = cv - 3; v <= cv + 3; ++v) {
            for (int u = cu - 3; u <= cu + 3; ++u) {
                if (c.at(u, v) > best) {
                    best = c.at(u, v);
                    bu = u;
                    bv = v;
                }
            }
        }
        CHECK(std::abs(bu - corner.u) <= 1.0);
        CHECK(std::abs(bv - corner.v) <= 1.0);
    }
}

TEST_CASE("upsampled checkerboard detected at s=2 maps onto the s=1 set") {
    const SyntheticScene scene = checkerboard_scene(96, 8);
    const GrayImage low = generate(scene);
    const Rect full{0, 0, low.width, low.height};
    const ImagePair pair = make_pair(low, zoom_transform(2.0, 0.0, full), full);

    const DetectResult base = detect(low, DetectorParams{}, 1.0);
    const DetectResult scaled = detect(pair.high, DetectorParams{}, 2.0);
    CHECK(!base.points.empty());
    CHECK(!scaled.points.empty());

    int repeated = 0;
    int countable = 0;
    for (const InterestPoint& p : scaled.points) {
        const Point mapped = pair.truth.apply({p.u, p.v});
        if (mapped.u < 8 || mapped.v < 8 || mapped.u > low.width - 9 || mapped.v > low.height - 9)
            continue;
        ++countable;
        double best = 1e9;
        for (const InterestPoint& q : base.points)
            best = std::min(best, std::hypot(q.u - mapped.u, q.v - mapped.v));
        if (best <= 1.0) ++repeated;
    }
    CHECK(countable > 0);
    CHECK(static_cast<double>(repeated) / countable >= 0.9);
}

TEST_CASE("prop 1: cornerness scales by 1/h^4 under rotation and rescaling") {
    const SyntheticScene scene = noise_scene(192, 99, 32.0, 3, 0.6);
    // Point-sampled band-limited renderings keep I'(x') = I(x) exact.
    const GrayImage img =
        render_scene(scene, 192, 192, SimilarityTransform::identity(), 1);

    for (double h : {2.0, 3.0}) {
        const double theta = 30.0 * std::numbers::pi / 180.0;
        const SimilarityTransform to_big = zoom_transform(h, theta, Rect{0, 0, 192, 192});
        int bw = 0, bh = 0;
        zoomed_extent(to_big, Rect{0, 0, 192, 192}, bw, bh);
        const GrayImage big = render_scene(scene, bw, bh, to_big.inverse(), 1);

        DetectorParams small_params; // sigma 1, sigma_tilde 2
        DetectorParams big_params;
        big_params.sigma = small_params.sigma * h;
        big_params.sigma_tilde = small_params.sigma_tilde * h;

        const AutoCorrField mf = autocorrelation(img, small_params, 1.0);
        const AutoCorrField mf_big = autocorrelation(big, big_params, 1.0);
        const GrayImage cf = cornerness(mf, small_params.alpha);
        const GrayImage cf_big = cornerness(mf_big, big_params.alpha);

        DetectResult det = detect(img, small_params, 1.0);
        const int margin_big = detection_margin(big_params, 1.0) + 2;
        std::vector<InterestPoint> corners;
        for (const InterestPoint& p : det.points) {
            const Point q = to_big.apply({p.u, p.v});
            if (q.u >= margin_big && q.v >= margin_big && q.u <= bw - 1 - margin_big &&
                q.v <= bh - 1 - margin_big)
                corners.push_back(p);
            if (corners.size() == 20) break;
        }
        REQUIRE(corners.size() == 20);

        int ratio_ok = 0;
        int matrix_ok = 0;
        const double cth = std::cos(theta), sth = std::sin(theta);
        for (const InterestPoint& p : corners) {
            const Point q = to_big.apply({p.u, p.v});
            const double c_small = cf.bilinear(p.u, p.v);
            const double c_big = cf_big.bilinear(q.u, q.v);
            if (std::abs(c_big * h * h * h * h / c_small - 1.0) <= 0.10) ++ratio_ok;

            const double a = mf.a.bilinear(p.u, p.v);
            const double b = mf.b.bilinear(p.u, p.v);
            const double c = mf.c.bilinear(p.u, p.v);
            // (1/h^2) R M R^T
            const double ea = (cth * (cth * a - sth * b) - sth * (cth * b - sth * c)) / (h * h);
            const double eb = (cth * (cth * b - sth * c) + sth * (cth * a - sth * b)) / (h * h);
            const double ec = (sth * (sth * a + cth * b) + cth * (sth * b + cth * c)) / (h * h);
            const double ma = mf_big.a.bilinear(q.u, q.v);
            const double mb = mf_big.b.bilinear(q.u, q.v);
            const double mc = mf_big.c.bilinear(q.u, q.v);
            const double err = std::sqrt((ma - ea) * (ma - ea) + 2 * (mb - eb) * (mb - eb) +
                                         (mc - ec) * (mc - ec));
            const double ref = std::sqrt(ea * ea + 2 * eb * eb + ec * ec);
            if (err <= 0.10 * ref) ++matrix_ok;
        }
        CHECK(ratio_ok >= 18);
        CHECK(matrix_ok >= 18);
    }
}

TEST_CASE("detection commutes with lossless 90-degree rotation") {
    const GrayImage img = generate(blobs_scene(128, 31));
    const GrayImage rot = rotate90_ccw(img);
    const DetectResult base = detect(img, DetectorParams{}, 1.0);
    const DetectResult rotated = detect(rot, DetectorParams{}, 1.0);
    REQUIRE(!base.points.empty());
    CHECK(base.points.size() == rotated.points.size());
    for (const InterestPoint& p : base.points) {
        const Point mapped = rotate90_ccw_point({p.u, p.v}, img.width, img.height);
        double best = 1e9;
        for (const InterestPoint& q : rotated.points)
            best = std::min(best, std::hypot(q.u - mapped.u, q.v - mapped.v));
        CHECK(best <= 0.5);
    }
}

TEST_CASE("intensity scaling by a power of two is exactly equivariant") {
    const GrayImage img = generate(blobs_scene(96, 8));
    const GrayImage bright = scale_intensity(img, 2.0);
    const DetectResult base = detect(img, DetectorParams{}, 1.0);
    const DetectResult scaled = detect(bright, DetectorParams{}, 1.0);
    REQUIRE(base.points.size() == scaled.points.size());
    for (size_t i = 0; i < base.points.size(); ++i) {
        CHECK(base.points[i].u == scaled.points[i].u);
        CHECK(base.points[i].v == scaled.points[i].v);
        CHECK(scaled.points[i].cornerness == 16.0 * base.points[i].cornerness);
    }
}

TEST_CASE("generic intensity scaling preserves the point set") {
    const GrayImage img = generate(blobs_scene(96, 12));
    const GrayImage bright = scale_intensity(img, 3.0);
    const DetectResult base = detect(img, DetectorParams{}, 1.0);
    const DetectResult scaled = detect(bright, DetectorParams{}, 1.0);
    REQUIRE(base.points.size() == scaled.points.size());
    for (size_t i = 0; i < base.points.size(); ++i) {
        CHECK(std::abs(base.points[i].u - scaled.points[i].u) < 1e-9);
        CHECK(std::abs(base.points[i].v - scaled.points[i].v) < 1e-9);
        CHECK(scaled.points[i].cornerness ==
              doctest::Approx(81.0 * base.points[i].cornerness).epsilon(1e-9));
    }
}

TEST_CASE("scale-space detection preserves order and matches single detects") {
    const GrayImage img = generate(checkerboard_scene(128, 8));
    const double single[] = {1.0};
    const auto one = detect_scale_space(img, DetectorParams{}, single);
    const DetectResult direct = detect(img, DetectorParams{}, 1.0);
    REQUIRE(one.size() == 1);
    CHECK(one[0].points.size() == direct.points.size());

    const double scales[] = {1, 2, 3, 4, 5, 6, 7, 8};
    const auto results = detect_scale_space(img, DetectorParams{}, scales);
    REQUIRE(results.size() == 8);
    // On this self-similar pattern the count is non-increasing beyond s = 2.
    for (size_t i = 2; i + 1 < results.size(); ++i)
        CHECK(results[i + 1].points.size() <= results[i].points.size());
}

TEST_CASE("max_points keeps the strongest points") {
    const GrayImage img = generate(checkerboard_scene(96, 8));
    DetectorParams capped;
    capped.max_points = 10;
    const DetectResult full = detect(img, DetectorParams{}, 1.0);
    const DetectResult top = detect(img, capped, 1.0);
    REQUIRE(full.points.size() > 10);
    REQUIRE(top.points.size() == 10);
    for (size_t i = 0; i < 10; ++i) CHECK(top.points[i].cornerness == full.points[i].cornerness);
}

TEST_CASE("detector parameter validation") {
    DetectorParams params;
    params.alpha = 0.3;
    CHECK_THROWS_AS(detect(GrayImage(64, 64, 0.5), params, 1.0), ParameterError);
    CHECK_THROWS_AS(detect(GrayImage(64, 64, 0.5), DetectorParams{}, 0.5), ParameterError);
    const double empty_scales[] = {};
    CHECK_THROWS_AS(
        detect_scale_space(GrayImage(64, 64, 0.5), DetectorParams{},
                           std::span<const double>(empty_scales, size_t{0})),
        ParameterError);
}
