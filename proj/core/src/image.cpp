#include "resmatch/image.hpp"

#include <algorithm>
#include <cmath>

namespace resmatch {

GrayImage::GrayImage(int w, int h, double fill) : width(w), height(h) {
    if (w < 1 || h < 1) throw ParameterError("image dimensions must be at least 1x1");
    data.assign(static_cast<size_t>(w) * h, fill);
}

double GrayImage::bilinear(double u, double v) const {
    u = std::clamp(u, 0.0, static_cast<double>(width - 1));
    v = std::clamp(v, 0.0, static_cast<double>(height - 1));
    const int u0 = std::min(static_cast<int>(u), width - 2 >= 0 ? width - 2 : 0);
    const int v0 = std::min(static_cast<int>(v), height - 2 >= 0 ? height - 2 : 0);
    const int u1 = std::min(u0 + 1, width - 1);
    const int v1 = std::min(v0 + 1, height - 1);
    const double fu = u - u0;
    const double fv = v - v0;
    const double top = at(u0, v0) * (1.0 - fu) + at(u1, v0) * fu;
    const double bot = at(u0, v1) * (1.0 - fu) + at(u1, v1) * fu;
    return top * (1.0 - fv) + bot * fv;
}

double GrayImage::min_value() const { return *std::min_element(data.begin(), data.end()); }

double GrayImage::max_value() const { return *std::max_element(data.begin(), data.end()); }

double GrayImage::mean() const {
    double sum = 0.0;
    for (double x : data) sum += x;
    return sum / static_cast<double>(data.size());
}

double GrayImage::stddev() const {
    const double mu = mean();
    double acc = 0.0;
    for (double x : data) acc += (x - mu) * (x - mu);
    return std::sqrt(acc / static_cast<double>(data.size()));
}

bool GrayImage::all_finite() const {
    for (double x : data)
        if (!std::isfinite(x)) return false;
    return true;
}

RgbImage::RgbImage(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h) {
    data.resize(static_cast<size_t>(w) * h * 3);
    for (size_t i = 0; i < data.size(); i += 3) {
        data[i] = r;
        data[i + 1] = g;
        data[i + 2] = b;
    }
}

GrayImage normalize_photometric(const GrayImage& img) {
    const double sigma = img.stddev();
    if (sigma <= 0.0)
        throw DegenerateError("normalize_photometric: image has zero intensity variance");
    const double mu = img.mean();
    GrayImage out(img.width, img.height);
    const double gain = 0.2 / sigma;
    for (size_t i = 0; i < img.data.size(); ++i) {
        out.data[i] = std::clamp((img.data[i] - mu) * gain + 0.5, 0.0, 1.0);
    }
    return out;
}

GrayImage rotate90_ccw(const GrayImage& img) {
    GrayImage out(img.height, img.width);
    for (int v = 0; v < img.height; ++v)
        for (int u = 0; u < img.width; ++u)
            out.at(v, img.width - 1 - u) = img.at(u, v);
    return out;
}

Point rotate90_ccw_point(const Point& p, int width, int /*height*/) {
    return {p.v, static_cast<double>(width - 1) - p.u};
}

GrayImage scale_intensity(const GrayImage& img, double gamma) {
    GrayImage out = img;
    for (double& x : out.data) x *= gamma;
    return out;
}

} // namespace resmatch
