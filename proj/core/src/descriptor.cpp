#include "resmatch/descriptor.hpp"

#include <algorithm>
#include <cmath>

#include "resmatch/convolve.hpp"

namespace resmatch {

namespace {

// Plane order: l, lu, lv, luu, luv, lvv, luuu, luuv, luvv, lvvv.
constexpr int kOrdersU[10] = {0, 1, 0, 2, 1, 0, 3, 2, 1, 0};
constexpr int kOrdersV[10] = {0, 0, 1, 0, 1, 2, 0, 1, 2, 3};

} // namespace

JetExtractor::JetExtractor(const GrayImage& img, double s, double sigma)
    : s_(s), sigma_(sigma), width_(img.width), height_(img.height) {
    if (!(sigma > 0.0)) throw ParameterError("JetExtractor: sigma must be positive");
    if (!(s >= 1.0)) throw ParameterError("JetExtractor: scale must be >= 1");
    margin_ = static_cast<int>(std::ceil(3.0 * s * sigma));
    const double sd = s * sigma;
    for (int i = 0; i < 10; ++i) {
        planes_[i] = derivative_image(img, kOrdersU[i], kOrdersV[i], sd);
        const int order = kOrdersU[i] + kOrdersV[i];
        if (order > 0) {
            const double norm = std::pow(sd, order);
            for (double& x : planes_[i].data) x *= norm;
        }
    }
}

bool JetExtractor::inside(const Point& p) const {
    return p.u >= margin_ && p.v >= margin_ && p.u <= width_ - 1 - margin_ &&
           p.v <= height_ - 1 - margin_;
}

LocalJet JetExtractor::at(const Point& p) const {
    if (!inside(p))
        throw BorderError("local_jet: point is closer than ceil(3 s sigma) to the border");
    LocalJet jet;
    double* entries[10] = {&jet.l,    &jet.lu,   &jet.lv,   &jet.luu,  &jet.luv,
                           &jet.lvv,  &jet.luuu, &jet.luuv, &jet.luvv, &jet.lvvv};
    for (int i = 0; i < 10; ++i) *entries[i] = planes_[i].bilinear(p.u, p.v);
    jet.s = s_;
    jet.sigma = sigma_;
    return jet;
}

LocalJet local_jet(const GrayImage& img, const Point& p, double s, double sigma) {
    return JetExtractor(img, s, sigma).at(p);
}

InvariantVector invariants(const LocalJet& jet) {
    const double energy = jet.lu * jet.lu + jet.lv * jet.lv;
    const double norm = std::max(std::sqrt(energy), kGradientEpsilon);

    const double lu = jet.lu / norm, lv = jet.lv / norm;
    const double luu = jet.luu / norm, luv = jet.luv / norm, lvv = jet.lvv / norm;
    const double luuu = jet.luuu / norm, luuv = jet.luuv / norm;
    const double luvv = jet.luvv / norm, lvvv = jet.lvvv / norm;

    InvariantVector out;
    out.scale = jet.s;
    out.v[0] = std::log(energy + kGradientEpsilon);
    // L_i L_ij L_j
    out.v[1] = lu * lu * luu + 2.0 * lu * lv * luv + lv * lv * lvv;
    // Laplacian L_ii
    out.v[2] = luu + lvv;
    // L_ij L_ji
    out.v[3] = luu * luu + 2.0 * luv * luv + lvv * lvv;
    // eps_ij L_jkl L_i L_k L_l
    out.v[4] = lu * (luuv * lu * lu + 2.0 * luvv * lu * lv + lvvv * lv * lv) -
               lv * (luuu * lu * lu + 2.0 * luuv * lu * lv + luvv * lv * lv);
    // L_iij L_j
    out.v[5] = (luuu + luvv) * lu + (luuv + lvvv) * lv;
    // L_ijk L_i L_j L_k
    out.v[6] = luuu * lu * lu * lu + 3.0 * luuv * lu * lu * lv + 3.0 * luvv * lu * lv * lv +
               lvvv * lv * lv * lv;
    return out;
}

CovarianceModel estimate_covariance(std::span<const InvariantVector> vectors) {
    if (vectors.size() < 8)
        throw ParameterError("estimate_covariance: at least 8 descriptors required");
    const double n = static_cast<double>(vectors.size());
    CovarianceModel cov;
    for (int i = 0; i < 7; ++i) {
        double mean = 0.0;
        for (const auto& vec : vectors) mean += vec.v[i];
        mean /= n;
        double var = 0.0;
        for (const auto& vec : vectors) var += (vec.v[i] - mean) * (vec.v[i] - mean);
        cov.diag[i] = std::max(var / n, 1e-8);
    }
    return cov;
}

double mahalanobis(const InvariantVector& v1, const InvariantVector& v2,
                   const CovarianceModel& cov) {
    double acc = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double d = v1.v[i] - v2.v[i];
        acc += d * d / cov.diag[i];
    }
    return std::sqrt(acc);
}

DetectResult extract_features(const GrayImage& img, const DetectorParams& params, double s) {
    DetectResult result = detect(img, params, s);
    if (result.points.empty()) return result;
    const JetExtractor jets(img, s, params.sigma);
    for (InterestPoint& pt : result.points) {
        const Point p{pt.u, pt.v};
        if (jets.inside(p)) pt.descriptor = invariants(jets.at(p)).v;
    }
    return result;
}

} // namespace resmatch
