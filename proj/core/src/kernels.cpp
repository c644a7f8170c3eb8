#include "resmatch/kernels.hpp"

#include <cmath>
#include <cstdlib>

namespace resmatch {

int kernel_radius(double sigma) { return static_cast<int>(std::ceil(3.0 * sigma)); }

namespace {

double hermite_sample(double x, double sigma, int order) {
    const double s2 = sigma * sigma;
    const double g = std::exp(-0.5 * x * x / s2);
    switch (order) {
        case 0: return g;
        case 1: return -x / s2 * g;
        case 2: return (x * x / (s2 * s2) - 1.0 / s2) * g;
        case 3: return (3.0 * x / (s2 * s2) - x * x * x / (s2 * s2 * s2)) * g;
        default: throw ParameterError("gaussian_taps: derivative order must be 0..3");
    }
}

} // namespace

std::vector<double> gaussian_taps(double sigma, int order, int radius) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian_taps: sigma must be positive");
    if (order < 0 || order > 3) throw ParameterError("gaussian_taps: derivative order must be 0..3");
    if (radius <= 0) radius = kernel_radius(sigma);

    const int n = 2 * radius + 1;
    std::vector<double> taps(n);
    for (int k = -radius; k <= radius; ++k) taps[k + radius] = hermite_sample(k, sigma, order);

    if (order == 0) {
        double sum = 0.0;
        for (double t : taps) sum += t;
        for (double& t : taps) t /= sum;
        return taps;
    }

    // Zero the DC response exactly, then calibrate so that the convolution
    // response to x^order / order! equals 1. For order 1 this makes the
    // response to the unit ramp exactly 1.
    double sum = 0.0;
    for (double t : taps) sum += t;
    for (double& t : taps) t -= sum / n;

    double factorial = 1.0;
    for (int i = 2; i <= order; ++i) factorial *= i;
    double response = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        response += taps[k + radius] * std::pow(static_cast<double>(-k), order) / factorial;
    }
    if (std::abs(response) < 1e-300)
        throw ParameterError("gaussian_taps: degenerate kernel, radius too small");
    for (double& t : taps) t /= response;
    return taps;
}

std::vector<double> gaussian_kernel(const KernelSpec& spec) {
    const int order = spec.kind == KernelKind::Smooth ? 0 : 1;
    return gaussian_taps(spec.sigma, order, spec.radius);
}

} // namespace resmatch
