// Independent reference implementations used as test oracles. Everything here
// is deliberately written as plain loops, separate from the library's
// optimized paths.
#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "resmatch/convolve.hpp"
#include "resmatch/descriptor.hpp"
#include "resmatch/detector.hpp"
#include "resmatch/image.hpp"
#include "resmatch/kernels.hpp"

namespace oracle {

using resmatch::GrayImage;

// Brute-force 2-D convolution with the outer-product kernel of two 1-D tap
// lists and mirror-reflected borders.
inline GrayImage convolve2d(const GrayImage& img, const std::vector<double>& horizontal,
                            const std::vector<double>& vertical) {
    const int rh = (static_cast<int>(horizontal.size()) - 1) / 2;
    const int rv = (static_cast<int>(vertical.size()) - 1) / 2;
    GrayImage out(img.width, img.height);
    for (int v = 0; v < img.height; ++v) {
        for (int u = 0; u < img.width; ++u) {
            double acc = 0.0;
            for (int kv = -rv; kv <= rv; ++kv) {
                for (int ku = -rh; ku <= rh; ++ku) {
                    const int su = resmatch::reflect_index(u - ku, img.width);
                    const int sv = resmatch::reflect_index(v - kv, img.height);
                    acc += horizontal[ku + rh] * vertical[kv + rv] * img.at(su, sv);
                }
            }
            out.at(u, v) = acc;
        }
    }
    return out;
}

// Direct implementation of the plain (scale-free) Harris autocorrelation
// matrix: gradients at sigma, Gaussian window at sigma_tilde, no s factors.
struct PlainAutoCorr {
    GrayImage a, b, c;
};

inline PlainAutoCorr harris_autocorrelation(const GrayImage& img, double sigma,
                                            double sigma_tilde) {
    const std::vector<double> g = resmatch::gaussian_taps(sigma, 0);
    const std::vector<double> d = resmatch::gaussian_taps(sigma, 1);
    const GrayImage iu = convolve2d(img, d, g);
    const GrayImage iv = convolve2d(img, g, d);
    GrayImage a2(img.width, img.height), ab(img.width, img.height), b2(img.width, img.height);
    for (size_t i = 0; i < img.data.size(); ++i) {
        a2.data[i] = iu.data[i] * iu.data[i];
        ab.data[i] = iu.data[i] * iv.data[i];
        b2.data[i] = iv.data[i] * iv.data[i];
    }
    const std::vector<double> w = resmatch::gaussian_taps(sigma_tilde, 0);
    PlainAutoCorr out;
    out.a = convolve2d(a2, w, w);
    out.b = convolve2d(ab, w, w);
    out.c = convolve2d(b2, w, w);
    return out;
}

// Exhaustive nearest-neighbour assignment under a diagonal Mahalanobis
// distance.
inline std::vector<int> nearest_neighbours(const std::vector<std::array<double, 7>>& from,
                                           const std::vector<std::array<double, 7>>& to,
                                           const std::array<double, 7>& diag) {
    std::vector<int> nn(from.size(), -1);
    for (size_t i = 0; i < from.size(); ++i) {
        double best = 0.0;
        for (size_t j = 0; j < to.size(); ++j) {
            double acc = 0.0;
            for (int k = 0; k < 7; ++k) {
                const double dd = from[i][k] - to[j][k];
                acc += dd * dd / diag[k];
            }
            if (nn[i] < 0 || acc < best) {
                nn[i] = static_cast<int>(j);
                best = acc;
            }
        }
    }
    return nn;
}

// Rotates a local jet as a tensor family: first order as a vector, second
// order as a symmetric bilinear form, third order as a totally symmetric
// 3-tensor. Index 0 = u, 1 = v.
inline resmatch::LocalJet rotate_jet(const resmatch::LocalJet& jet, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double R[2][2] = {{c, -s}, {s, c}};

    const double d1[2] = {jet.lu, jet.lv};
    double d2[2][2] = {{jet.luu, jet.luv}, {jet.luv, jet.lvv}};
    double d3[2][2][2];
    d3[0][0][0] = jet.luuu;
    d3[0][0][1] = d3[0][1][0] = d3[1][0][0] = jet.luuv;
    d3[0][1][1] = d3[1][0][1] = d3[1][1][0] = jet.luvv;
    d3[1][1][1] = jet.lvvv;

    resmatch::LocalJet out = jet;
    out.lu = R[0][0] * d1[0] + R[0][1] * d1[1];
    out.lv = R[1][0] * d1[0] + R[1][1] * d1[1];

    double r2[2][2] = {};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) r2[a][b] += R[a][i] * R[b][j] * d2[i][j];
    out.luu = r2[0][0];
    out.luv = r2[0][1];
    out.lvv = r2[1][1];

    double r3[2][2][2] = {};
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int cc = 0; cc < 2; ++cc)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        for (int k = 0; k < 2; ++k)
                            r3[a][b][cc] += R[a][i] * R[b][j] * R[cc][k] * d3[i][j][k];
    out.luuu = r3[0][0][0];
    out.luuv = r3[0][0][1];
    out.luvv = r3[0][1][1];
    out.lvvv = r3[1][1][1];
    return out;
}

inline GrayImage random_image(int width, int height, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    GrayImage img(width, height);
    for (double& x : img.data) x = dist(rng);
    return img;
}

} // namespace oracle
