#pragma once

#include <vector>

#include "resmatch/error.hpp"

namespace resmatch {

enum class KernelKind {
    Smooth,      // order-0 Gaussian, taps sum to 1
    DerivativeU, // first derivative of Gaussian, applied along u
    DerivativeV, // first derivative of Gaussian, applied along v
};

/// Description of a 1-D Gaussian (derivative) kernel.
/// radius 0 means the default ceil(3 * sigma).
struct KernelSpec {
    double sigma = 1.0;
    KernelKind kind = KernelKind::Smooth;
    int radius = 0;
};

/// Taps of a sampled Gaussian or Gaussian-derivative kernel, indexed by
/// offset -radius..radius. Smooth taps are renormalized to sum to 1.
/// Derivative taps of order n sum to 0 and are calibrated so that the
/// convolution response to x^n / n! is exactly 1 (for n = 1: convolving the
/// unit ramp yields slope 1). Supported orders: 0..3.
std::vector<double> gaussian_taps(double sigma, int order, int radius = 0);

/// Spec-level entry point; DerivativeU and DerivativeV produce the same taps,
/// the direction is chosen when the kernel is applied.
std::vector<double> gaussian_kernel(const KernelSpec& spec);

/// Default truncation radius, ceil(3 * sigma).
int kernel_radius(double sigma);

} // namespace resmatch
