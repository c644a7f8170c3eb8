#include "resmatch/detector.hpp"

#include <algorithm>
#include <cmath>

#include "resmatch/convolve.hpp"
#include "resmatch/kernels.hpp"

namespace resmatch {

void DetectorParams::validate() const {
    if (!(sigma > 0.0)) throw ParameterError("DetectorParams: sigma must be positive");
    if (!(sigma_tilde > 0.0)) throw ParameterError("DetectorParams: sigma_tilde must be positive");
    if (!(alpha > 0.0 && alpha < 0.25))
        throw ParameterError("DetectorParams: alpha must lie in (0, 0.25)");
    if (!(rel_threshold > 0.0 && rel_threshold < 1.0))
        throw ParameterError("DetectorParams: rel_threshold must lie in (0, 1)");
    if (!(nms_radius > 0.0)) throw ParameterError("DetectorParams: nms_radius must be positive");
    if (max_points < 0) throw ParameterError("DetectorParams: max_points must be non-negative");
}

int detection_margin(const DetectorParams& params, double s) {
    return static_cast<int>(std::ceil(3.0 * s * params.sigma_tilde));
}

AutoCorrField autocorrelation(const GrayImage& img, const DetectorParams& params, double s) {
    params.validate();
    if (!(s >= 1.0)) throw ParameterError("autocorrelation: scale s must be >= 1");

    const GradientPair g = gradients(img, s * params.sigma);

    GrayImage a2(img.width, img.height);
    GrayImage ab(img.width, img.height);
    GrayImage b2(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const double iu = g.iu.data[i];
        const double iv = g.iv.data[i];
        a2.data[i] = iu * iu;
        ab.data[i] = iu * iv;
        b2.data[i] = iv * iv;
    }

    const std::vector<double> w = gaussian_taps(s * params.sigma_tilde, 0);
    AutoCorrField field;
    field.a = convolve_separable(a2, w, w);
    field.b = convolve_separable(ab, w, w);
    field.c = convolve_separable(b2, w, w);
    field.scale = s;

    const double s2 = s * s;
    for (size_t i = 0; i < field.a.data.size(); ++i) {
        field.a.data[i] *= s2;
        field.b.data[i] *= s2;
        field.c.data[i] *= s2;
    }
    return field;
}

GrayImage cornerness(const AutoCorrField& field, double alpha) {
    GrayImage out(field.a.width, field.a.height);
    for (size_t i = 0; i < out.data.size(); ++i) {
        const double a = field.a.data[i];
        const double b = field.b.data[i];
        const double c = field.c.data[i];
        out.data[i] = (a * c - b * b) - alpha * (a + c) * (a + c);
    }
    return out;
}

namespace {

// Offsets of a Euclidean disc, excluding the centre; used for non-max
// suppression after the cheap 3x3 pre-test.
std::vector<std::pair<int, int>> disc_offsets(double radius) {
    std::vector<std::pair<int, int>> offs;
    const int r = static_cast<int>(std::floor(radius));
    for (int dv = -r; dv <= r; ++dv)
        for (int du = -r; du <= r; ++du)
            if ((du != 0 || dv != 0) && du * du + dv * dv <= radius * radius)
                offs.emplace_back(du, dv);
    return offs;
}

// Quadratic 3x3 refinement; returns the sub-pixel offset clamped to +-0.5.
std::pair<double, double> subpixel_offset(const GrayImage& r, int u, int v) {
    const double gx = 0.5 * (r.at(u + 1, v) - r.at(u - 1, v));
    const double gy = 0.5 * (r.at(u, v + 1) - r.at(u, v - 1));
    const double hxx = r.at(u + 1, v) - 2.0 * r.at(u, v) + r.at(u - 1, v);
    const double hyy = r.at(u, v + 1) - 2.0 * r.at(u, v) + r.at(u, v - 1);
    const double hxy = 0.25 * (r.at(u + 1, v + 1) - r.at(u + 1, v - 1) - r.at(u - 1, v + 1) +
                               r.at(u - 1, v - 1));
    const double det = hxx * hyy - hxy * hxy;
    if (std::abs(det) < 1e-300) return {0.0, 0.0};
    double du = -(hyy * gx - hxy * gy) / det;
    double dv = -(hxx * gy - hxy * gx) / det;
    du = std::clamp(du, -0.5, 0.5);
    dv = std::clamp(dv, -0.5, 0.5);
    return {du, dv};
}

} // namespace

DetectResult detect(const GrayImage& img, const DetectorParams& params, double s) {
    params.validate();
    if (!(s >= 1.0)) throw ParameterError("detect: scale s must be >= 1");

    DetectResult result;
    const int margin = detection_margin(params, s);
    if (img.width <= 2 * margin || img.height <= 2 * margin) {
        result.too_small = true;
        return result;
    }

    const AutoCorrField field = autocorrelation(img, params, s);
    GrayImage response = cornerness(field, params.alpha);
    const double s4 = s * s * s * s;
    for (double& x : response.data) x *= s4;

    double cmax = 0.0;
    for (int v = margin; v < img.height - margin; ++v)
        for (int u = margin; u < img.width - margin; ++u) cmax = std::max(cmax, response.at(u, v));
    if (cmax <= 0.0) return result;

    const double threshold = params.rel_threshold * cmax;
    const auto offs = disc_offsets(params.nms_radius * s);

    for (int v = margin; v < img.height - margin; ++v) {
        for (int u = margin; u < img.width - margin; ++u) {
            const double r = response.at(u, v);
            if (r <= threshold) continue;
            // cheap 3x3 pre-test
            if (r <= response.at(u - 1, v) || r <= response.at(u + 1, v) ||
                r <= response.at(u, v - 1) || r <= response.at(u, v + 1) ||
                r <= response.at(u - 1, v - 1) || r <= response.at(u + 1, v - 1) ||
                r <= response.at(u - 1, v + 1) || r <= response.at(u + 1, v + 1))
                continue;
            bool is_max = true;
            for (const auto& [du, dv] : offs) {
                const int nu = u + du;
                const int nv = v + dv;
                if (!response.in_bounds(nu, nv)) continue;
                if (response.at(nu, nv) >= r) {
                    is_max = false;
                    break;
                }
            }
            if (!is_max) continue;

            const auto [du, dv] = subpixel_offset(response, u, v);
            InterestPoint pt;
            pt.u = u + du;
            pt.v = v + dv;
            pt.scale = s;
            pt.cornerness = r;
            result.points.push_back(pt);
        }
    }

    std::sort(result.points.begin(), result.points.end(),
              [](const InterestPoint& lhs, const InterestPoint& rhs) {
                  if (lhs.cornerness != rhs.cornerness) return lhs.cornerness > rhs.cornerness;
                  if (lhs.v != rhs.v) return lhs.v < rhs.v;
                  return lhs.u < rhs.u;
              });
    if (params.max_points > 0 && static_cast<int>(result.points.size()) > params.max_points)
        result.points.resize(params.max_points);
    return result;
}

std::vector<DetectResult> detect_scale_space(const GrayImage& img, const DetectorParams& params,
                                             std::span<const double> scales) {
    if (scales.empty()) throw ParameterError("detect_scale_space: scale list is empty");
    std::vector<DetectResult> out;
    out.reserve(scales.size());
    for (double s : scales) out.push_back(detect(img, params, s));
    return out;
}

} // namespace resmatch
