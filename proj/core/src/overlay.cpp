#include "resmatch/overlay.hpp"

#include <algorithm>
#include <cmath>

namespace resmatch {

namespace {

std::uint8_t quantize8(double x) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
}

void put_pixel(RgbImage& img, int u, int v, Rgb c) {
    if (u < 0 || u >= img.width || v < 0 || v >= img.height) return;
    std::uint8_t* px = img.pixel(u, v);
    px[0] = c.r;
    px[1] = c.g;
    px[2] = c.b;
}

// Row-major 3x3 inverse by adjugate.
std::array<double, 9> invert3(const std::array<double, 9>& m) {
    const double det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                       m[2] * (m[3] * m[7] - m[4] * m[6]);
    if (std::abs(det) < 1e-300) throw DegenerateError("overlay: transform is not invertible");
    const double inv = 1.0 / det;
    return {(m[4] * m[8] - m[5] * m[7]) * inv, (m[2] * m[7] - m[1] * m[8]) * inv,
            (m[1] * m[5] - m[2] * m[4]) * inv, (m[5] * m[6] - m[3] * m[8]) * inv,
            (m[0] * m[8] - m[2] * m[6]) * inv, (m[2] * m[3] - m[0] * m[5]) * inv,
            (m[3] * m[7] - m[4] * m[6]) * inv, (m[1] * m[6] - m[0] * m[7]) * inv,
            (m[0] * m[4] - m[1] * m[3]) * inv};
}

Point apply3(const std::array<double, 9>& m, ModelKind kind, const Point& x) {
    const double X = m[0] * x.u + m[1] * x.v + m[2];
    const double Y = m[3] * x.u + m[4] * x.v + m[5];
    if (kind != ModelKind::Homography) return {X, Y};
    const double W = m[6] * x.u + m[7] * x.v + m[8];
    return {X / W, Y / W};
}

} // namespace

RgbImage to_rgb(const GrayImage& img) {
    RgbImage out(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        const std::uint8_t g = quantize8(img.data[i]);
        out.data[3 * i] = g;
        out.data[3 * i + 1] = g;
        out.data[3 * i + 2] = g;
    }
    return out;
}

void draw_cross(RgbImage& img, const Point& p, int radius, Rgb color) {
    const int u = static_cast<int>(std::lround(p.u));
    const int v = static_cast<int>(std::lround(p.v));
    for (int d = -radius; d <= radius; ++d) {
        put_pixel(img, u + d, v, color);
        put_pixel(img, u, v + d, color);
    }
}

void draw_line(RgbImage& img, const Point& p0, const Point& p1, Rgb color) {
    int x0 = static_cast<int>(std::lround(p0.u));
    int y0 = static_cast<int>(std::lround(p0.v));
    const int x1 = static_cast<int>(std::lround(p1.u));
    const int y1 = static_cast<int>(std::lround(p1.v));
    const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    while (true) {
        put_pixel(img, x0, y0, color);
        if (x0 == x1 && y0 == y1) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

RgbImage render_overlay(const GrayImage& low, const GrayImage& high,
                        const TransformModel& low_to_high, std::span<const InlierPair> inliers) {
    RgbImage out = to_rgb(low);
    for (int v = 0; v < low.height; ++v) {
        for (int u = 0; u < low.width; ++u) {
            const Point q = apply3(low_to_high.m, low_to_high.kind, {double(u), double(v)});
            if (!high.bilinear_safe(q.u, q.v)) continue;
            const std::uint8_t blended =
                quantize8(0.5 * low.at(u, v) + 0.5 * high.bilinear(q.u, q.v));
            std::uint8_t* px = out.pixel(u, v);
            px[0] = blended;
            px[1] = blended;
            px[2] = blended;
        }
    }

    const std::array<double, 9> high_to_low = invert3(low_to_high.m);
    for (const InlierPair& pair : inliers) {
        const Point mapped = apply3(high_to_low, low_to_high.kind, pair.high);
        draw_line(out, pair.low, mapped, {240, 220, 60});
        draw_cross(out, mapped, 3, {230, 60, 50});
        draw_cross(out, pair.low, 3, {70, 220, 70});
    }
    return out;
}

RgbImage render_detections(const GrayImage& img, std::span<const DetectResult> detections) {
    RgbImage out = to_rgb(img);
    for (const DetectResult& det : detections) {
        for (const InterestPoint& p : det.points) {
            const int radius = std::max(2, static_cast<int>(std::lround(3.0 * p.scale)));
            draw_cross(out, {p.u, p.v}, radius, {70, 220, 70});
        }
    }
    return out;
}

} // namespace resmatch
