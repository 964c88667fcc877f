// SPDX-License-Identifier: Apache-2.0
//
// Shared grayscale primitives: histogram equalization, adaptive Wiener
// filtering, Gaussian kernels, convolution and gradients. All windowed
// operations replicate edge pixels at the border.
#pragma once

#include <array>
#include <optional>
#include <string>

#include "biokey/image.hpp"

namespace biokey {

struct HistogramMapping {
    static constexpr int kLevels = 256;
    // cdf[k] = sum_{j<=k} n_j / n
    std::array<double, kLevels> cdf{};
    // r_k -> s_k
    std::array<std::uint8_t, kLevels> mapping{};
};

struct EqualizeResult {
    GrayImage image;
    HistogramMapping mapping;
};

EqualizeResult histogram_equalize(const GrayImage& img);

struct WienerParams {
    // Noise variance v^2. Estimated as the mean local variance when empty.
    std::optional<double> noise_variance;
};

GrayImage wiener_filter(const GrayImage& img, const WienerParams& params = {});

// Mean of the 3x3 local variances; the default noise estimate.
double estimate_noise_variance(const GrayImage& img);

struct GaussianKernel {
    double sigma = 0.0;
    int radius = 0;
    Kernel2D weights;
};

GaussianKernel gaussian_kernel(double sigma);

// 2D convolution (kernel flipped) with edge replication. The real variant
// keeps full precision; the gray variant rounds and clamps on output.
RealImage convolve(const RealImage& img, const Kernel2D& kernel);
GrayImage convolve(const GrayImage& img, const Kernel2D& kernel);

// 3x3 Sobel derivatives, x to the right and y downwards.
struct Gradient {
    RealImage gx;
    RealImage gy;
};
Gradient sobel(const RealImage& img);

}  // namespace biokey
