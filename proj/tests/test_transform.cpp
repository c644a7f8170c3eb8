#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "resmatch/transform.hpp"

using namespace resmatch;

namespace {

SimilarityTransform random_similarity(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    SimilarityTransform t;
    t.h = 0.3 + 4.0 * unit(rng);
    t.theta = (2.0 * unit(rng) - 1.0) * std::numbers::pi;
    t.a = (2.0 * unit(rng) - 1.0) * 50.0;
    t.b = (2.0 * unit(rng) - 1.0) * 50.0;
    return t;
}

} // namespace

TEST_CASE("two-pair similarity estimation is exact") {
    const Point src[2] = {{0, 0}, {1, 0}};
    const Point dst[2] = {{3, 4}, {3, 6}};
    const SimilarityTransform t = estimate_similarity(src, dst);
    CHECK(t.p() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(t.q() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(t.h == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(t.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-12));
    CHECK(t.a == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(t.b == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("identity pairs give the identity transform") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> unit(-20.0, 20.0);
    std::vector<Point> pts(10);
    for (Point& p : pts) p = {unit(rng), unit(rng)};
    const SimilarityTransform t = estimate_similarity(pts, pts);
    CHECK(std::abs(t.h - 1.0) < 1e-12);
    CHECK(std::abs(t.theta) < 1e-12);
    CHECK(std::abs(t.a) < 1e-12);
    CHECK(std::abs(t.b) < 1e-12);
}

TEST_CASE("noiseless pairs recover a random similarity") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> unit(-30.0, 30.0);
    for (int trial = 0; trial < 20; ++trial) {
        const SimilarityTransform truth = random_similarity(rng);
        std::vector<Point> src(20), dst(20);
        for (int i = 0; i < 20; ++i) {
            src[i] = {unit(rng), unit(rng)};
            dst[i] = truth.apply(src[i]);
        }
        const SimilarityTransform est = estimate_similarity(src, dst);
        CHECK(std::abs(est.h - truth.h) < 1e-9 * truth.h);
        CHECK(std::abs(std::remainder(est.theta - truth.theta, 2 * std::numbers::pi)) < 1e-9);
        CHECK(std::abs(est.a - truth.a) < 1e-7);
        CHECK(std::abs(est.b - truth.b) < 1e-7);
    }
}

TEST_CASE("coincident source points are degenerate") {
    const Point src[3] = {{2, 3}, {2, 3}, {2, 3}};
    const Point dst[3] = {{0, 0}, {1, 1}, {2, 2}};
    CHECK_THROWS_AS(estimate_similarity(src, dst), DegenerateError);
}

TEST_CASE("compose and inverse cancel") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const SimilarityTransform t = random_similarity(rng);
        const SimilarityTransform id = t.compose(t.inverse());
        CHECK(std::abs(id.h - 1.0) < 1e-9);
        CHECK(std::abs(std::remainder(id.theta, 2 * std::numbers::pi)) < 1e-9);
        CHECK(std::abs(id.a) < 1e-9 * std::max(1.0, std::abs(t.a)) * 100);
        CHECK(std::abs(id.b) < 1e-9 * std::max(1.0, std::abs(t.b)) * 100);
    }
}

TEST_CASE("estimation is equivariant under source rotation") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(-10.0, 10.0);
    const SimilarityTransform truth = random_similarity(rng);
    SimilarityTransform rot;
    rot.theta = 0.6;
    std::vector<Point> src(12), dst(12), src_rot(12);
    for (int i = 0; i < 12; ++i) {
        src[i] = {unit(rng), unit(rng)};
        dst[i] = truth.apply(src[i]);
        src_rot[i] = rot.apply(src[i]);
    }
    // Estimating from pre-rotated sources must give truth composed with the
    // inverse rotation.
    const SimilarityTransform est = estimate_similarity(src_rot, dst);
    const SimilarityTransform expected = truth.compose(rot.inverse());
    CHECK(std::abs(est.h - expected.h) < 1e-9);
    CHECK(std::abs(std::remainder(est.theta - expected.theta, 2 * std::numbers::pi)) < 1e-9);
    CHECK(std::abs(est.a - expected.a) < 1e-7);
    CHECK(std::abs(est.b - expected.b) < 1e-7);
}

TEST_CASE("homography of a pure scaling is diag(2,2,1)") {
    const Point src[4] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const Point dst[4] = {{0, 0}, {2, 0}, {2, 2}, {0, 2}};
    const TransformModel model = estimate_model(src, dst, ModelKind::Homography);
    const double scale = model.m[8];
    const double expected[9] = {2, 0, 0, 0, 2, 0, 0, 0, 1};
    for (int i = 0; i < 9; ++i) CHECK(std::abs(model.m[i] / scale - expected[i]) < 1e-9);
}

TEST_CASE("noiseless affine recovery is exact") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-15.0, 15.0);
    const double truth[6] = {1.4, -0.3, 5.0, 0.2, 0.9, -7.0};
    std::vector<Point> src(10), dst(10);
    for (int i = 0; i < 10; ++i) {
        src[i] = {unit(rng), unit(rng)};
        dst[i] = {truth[0] * src[i].u + truth[1] * src[i].v + truth[2],
                  truth[3] * src[i].u + truth[4] * src[i].v + truth[5]};
    }
    const TransformModel model = estimate_model(src, dst, ModelKind::Affine);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(model.m[i] - truth[i]) < 1e-9);
    CHECK(model.scale_hint() ==
          doctest::Approx(std::sqrt(std::abs(truth[0] * truth[4] - truth[1] * truth[3])))
              .epsilon(1e-9));
}

TEST_CASE("collinear source points are rejected for a homography") {
    const Point src[4] = {{0, 0}, {1, 1}, {2, 2}, {3, 3}};
    const Point dst[4] = {{0, 0}, {1, 0}, {2, 0}, {3, 0}};
    CHECK_THROWS_AS(estimate_model(src, dst, ModelKind::Homography), DegenerateError);
}

TEST_CASE("homography agrees with an embedded similarity") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> unit(-25.0, 25.0);
    const SimilarityTransform truth = random_similarity(rng);
    std::vector<Point> src(12), dst(12);
    for (int i = 0; i < 12; ++i) {
        src[i] = {unit(rng), unit(rng)};
        dst[i] = truth.apply(src[i]);
    }
    const TransformModel hom = estimate_model(src, dst, ModelKind::Homography);
    const TransformModel sim = TransformModel::from_similarity(truth);
    // Compare after normalizing both by m[8].
    for (int i = 0; i < 9; ++i)
        CHECK(std::abs(hom.m[i] / hom.m[8] - sim.m[i]) < 1e-6 * std::max(1.0, std::abs(sim.m[i])));
    // The projective part must vanish.
    CHECK(std::abs(hom.m[6] / hom.m[8]) < 1e-9);
    CHECK(std::abs(hom.m[7] / hom.m[8]) < 1e-9);
}

TEST_CASE("model kinds report their minimal sample sizes") {
    CHECK(minimal_matches(ModelKind::Similarity) == 2);
    CHECK(minimal_matches(ModelKind::Affine) == 3);
    CHECK(minimal_matches(ModelKind::Homography) == 4);
}
