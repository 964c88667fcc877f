// SPDX-License-Identifier: Apache-2.0
#include "biokey/imaging.hpp"

#include <cmath>

namespace biokey {

EqualizeResult histogram_equalize(const GrayImage& img) {
    if (img.empty()) throw InvalidInput("histogram_equalize: empty image");

    std::array<std::uint64_t, HistogramMapping::kLevels> counts{};
    for (auto p : img.pixels()) ++counts[p];

    const std::uint64_t n = img.size();
    HistogramMapping hm;
    std::uint64_t cumulative = 0;
    for (int k = 0; k < HistogramMapping::kLevels; ++k) {
        cumulative += counts[k];
        hm.cdf[k] = static_cast<double>(cumulative) / static_cast<double>(n);
        // round_half_up(255 * c / n), evaluated exactly in integers
        hm.mapping[k] = static_cast<std::uint8_t>((2 * 255 * cumulative + n) / (2 * n));
    }

    GrayImage out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = hm.mapping[src[i]];
    return {std::move(out), hm};
}

namespace {

struct LocalStats {
    double mean;
    double variance;
};

LocalStats window_stats(const GrayImage& img, int x, int y) {
    double sum = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) sum += img.clamped(x + dx, y + dy);
    const double mean = sum / 9.0;
    double sq = 0.0;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const double d = img.clamped(x + dx, y + dy) - mean;
            sq += d * d;
        }
    return {mean, sq / 9.0};
}

}  // namespace

double estimate_noise_variance(const GrayImage& img) {
    if (img.empty()) return 0.0;
    double total = 0.0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) total += window_stats(img, x, y).variance;
    return total / static_cast<double>(img.size());
}

GrayImage wiener_filter(const GrayImage& img, const WienerParams& params) {
    if (img.width() < 3 || img.height() < 3) {
        throw InvalidInput("wiener_filter: image must be at least 3x3");
    }
    const double noise = params.noise_variance ? *params.noise_variance : estimate_noise_variance(img);
    if (!(noise >= 0.0)) throw InvalidParameter("wiener_filter: noise variance must be >= 0");

    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const auto [mean, var] = window_stats(img, x, y);
            double value = mean;
            if (var > 0.0) {
                // Gain floored at zero: where the local variance is below the
                // noise level the pixel collapses to the local mean.
                const double gain = std::max(0.0, (var - noise) / var);
                value = mean + gain * (img.at(x, y) - mean);
            }
            out.at(x, y) = to_pixel(value);
        }
    }
    return out;
}

GaussianKernel gaussian_kernel(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidParameter("gaussian_kernel: sigma must be positive");
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int size = 2 * radius + 1;
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    double total = 0.0;
    for (int y = -radius; y <= radius; ++y)
        for (int x = -radius; x <= radius; ++x) {
            const double v = std::exp(-static_cast<double>(x * x + y * y) / (2.0 * sigma * sigma));
            w[static_cast<std::size_t>(y + radius) * size + (x + radius)] = v;
            total += v;
        }
    for (auto& v : w) v /= total;
    return {sigma, radius, Kernel2D(size, size, std::move(w))};
}

RealImage convolve(const RealImage& img, const Kernel2D& kernel) {
    const int rx = kernel.radius_x();
    const int ry = kernel.radius_y();
    RealImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int ky = -ry; ky <= ry; ++ky)
                for (int kx = -rx; kx <= rx; ++kx)
                    acc += kernel.at(kx, ky) * img.clamped(x - kx, y - ky);
            out.at(x, y) = acc;
        }
    }
    return out;
}

GrayImage convolve(const GrayImage& img, const Kernel2D& kernel) {
    return materialize(convolve(RealImage(img), kernel));
}

Gradient sobel(const RealImage& img) {
    Gradient g{RealImage(img.width(), img.height()), RealImage(img.width(), img.height())};
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const double a = img.clamped(x - 1, y - 1), b = img.clamped(x, y - 1), c = img.clamped(x + 1, y - 1);
            const double d = img.clamped(x - 1, y), f = img.clamped(x + 1, y);
            const double e = img.clamped(x - 1, y + 1), h = img.clamped(x, y + 1), i = img.clamped(x + 1, y + 1);
            g.gx.at(x, y) = (c + 2.0 * f + i) - (a + 2.0 * d + e);
            g.gy.at(x, y) = (e + 2.0 * h + i) - (a + 2.0 * b + c);
        }
    }
    return g;
}

}  // namespace biokey
