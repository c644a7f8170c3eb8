#pragma once

#include <span>

#include "resmatch/detector.hpp"
#include "resmatch/image.hpp"
#include "resmatch/matching.hpp"

namespace resmatch {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

RgbImage to_rgb(const GrayImage& img);

void draw_cross(RgbImage& img, const Point& p, int radius, Rgb color);
void draw_line(RgbImage& img, const Point& p0, const Point& p1, Rgb color);

/// The high-resolution image warped by the fitted model onto the low-res
/// canvas at 50% opacity, with the inlier matches drawn (green: low point,
/// red: mapped high point). `low_to_high` maps low pixel coordinates into the
/// high image.
RgbImage render_overlay(const GrayImage& low, const GrayImage& high,
                        const TransformModel& low_to_high, std::span<const InlierPair> inliers);

/// Detected points drawn as crosses with radius proportional to scale.
RgbImage render_detections(const GrayImage& img, std::span<const DetectResult> detections);

} // namespace resmatch
