// SPDX-License-Identifier: Apache-2.0
#include "biokey/fingerprint.hpp"

#include <cmath>
#include <numbers>

#include "biokey/imaging.hpp"

namespace biokey::fingerprint {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

double population_stddev(double sum, double sum_sq, double n) {
    const double mean = sum / n;
    return std::sqrt(std::max(0.0, sum_sq / n - mean * mean));
}

}  // namespace

SegmentationMask::SegmentationMask(int image_width, int image_height, double threshold)
    : image_width_(image_width), image_height_(image_height),
      blocks_x_(ceil_div(image_width, kBlockSize)), blocks_y_(ceil_div(image_height, kBlockSize)),
      threshold_(threshold),
      flags_(static_cast<std::size_t>(blocks_x_) * static_cast<std::size_t>(blocks_y_), 0) {}

std::size_t SegmentationMask::foreground_count() const {
    return static_cast<std::size_t>(std::count(flags_.begin(), flags_.end(), 1));
}

double block_gradient_deviation(const GrayImage& img, int bx, int by) {
    const int x0 = bx * kBlockSize, y0 = by * kBlockSize;
    const int x1 = std::min(x0 + kBlockSize, img.width());
    const int y1 = std::min(y0 + kBlockSize, img.height());
    double sx = 0, sxx = 0, sy = 0, syy = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const double gx = (img.clamped(x + 1, y) - img.clamped(x - 1, y)) / 2.0;
            const double gy = (img.clamped(x, y + 1) - img.clamped(x, y - 1)) / 2.0;
            sx += gx;
            sxx += gx * gx;
            sy += gy;
            syy += gy * gy;
        }
    }
    const double n = static_cast<double>((x1 - x0) * (y1 - y0));
    return population_stddev(sx, sxx, n) + population_stddev(sy, syy, n);
}

SegmentationMask segment(const GrayImage& img, double threshold) {
    if (img.width() < kBlockSize || img.height() < kBlockSize) {
        throw InvalidInput("segment: image smaller than one 16x16 block");
    }
    SegmentationMask mask(img.width(), img.height(), threshold);
    for (int by = 0; by < mask.blocks_y(); ++by)
        for (int bx = 0; bx < mask.blocks_x(); ++bx)
            mask.set_foreground(bx, by, block_gradient_deviation(img, bx, by) > threshold);
    return mask;
}

double default_segment_threshold(const GrayImage& img, double factor) {
    if (img.empty()) return 0.0;
    double s = 0, ss = 0;
    for (auto p : img.pixels()) {
        s += p;
        ss += static_cast<double>(p) * p;
    }
    return factor * population_stddev(s, ss, static_cast<double>(img.size()));
}

OrientationField estimate_orientation(const GrayImage& img, const SegmentationMask& mask) {
    if (mask.image_width() != img.width() || mask.image_height() != img.height()) {
        throw InvalidInput("estimate_orientation: mask does not match image");
    }
    const Gradient g = sobel(RealImage(img));
    OrientationField field(mask.blocks_x(), mask.blocks_y());
    for (int by = 0; by < mask.blocks_y(); ++by) {
        for (int bx = 0; bx < mask.blocks_x(); ++bx) {
            if (!mask.foreground(bx, by)) continue;
            double vx = 0, vy = 0, energy = 0;
            const int x1 = std::min((bx + 1) * kBlockSize, img.width());
            const int y1 = std::min((by + 1) * kBlockSize, img.height());
            for (int y = by * kBlockSize; y < y1; ++y) {
                for (int x = bx * kBlockSize; x < x1; ++x) {
                    const double gx = g.gx.at(x, y), gy = g.gy.at(x, y);
                    vx += 2.0 * gx * gy;
                    vy += gx * gx - gy * gy;
                    energy += gx * gx + gy * gy;
                }
            }
            // No dominant direction: flat block or perfectly isotropic gradients.
            if (energy == 0.0 || std::hypot(vx, vy) <= 1e-9 * energy) continue;
            double theta = 0.5 * std::atan2(vx, vy) + std::numbers::pi / 2.0;
            theta = std::fmod(theta, std::numbers::pi);
            if (theta < 0.0) theta += std::numbers::pi;
            if (theta >= std::numbers::pi) theta -= std::numbers::pi;
            field.set(bx, by, theta);
        }
    }
    return field;
}

double gabor_value(double x, double y, const GaborParams& p) {
    const double s = std::sin(p.theta), c = std::cos(p.theta);
    const double xt = s * x + c * y;
    const double yt = -c * x + s * y;
    const double envelope =
        std::exp(-0.5 * (xt * xt / (p.sigma_x * p.sigma_x) + yt * yt / (p.sigma_y * p.sigma_y)));
    return envelope * std::cos(2.0 * std::numbers::pi * p.f0 * xt);
}

Kernel2D gabor_kernel(const GaborParams& p) {
    if (!(p.f0 > 0.0) || !(p.sigma_x > 0.0) || !(p.sigma_y > 0.0)) {
        throw InvalidParameter("gabor: f0, sigma_x and sigma_y must be positive");
    }
    const int r = static_cast<int>(std::ceil(3.0 * std::max(p.sigma_x, p.sigma_y)));
    const int size = 2 * r + 1;
    std::vector<double> w(static_cast<std::size_t>(size) * size);
    double mean = 0.0;
    for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
            // image rows grow downwards; the kernel formula is Cartesian
            const double v = gabor_value(dx, -dy, p);
            w[static_cast<std::size_t>(dy + r) * size + (dx + r)] = v;
            mean += v;
        }
    mean /= static_cast<double>(w.size());
    double l1 = 0.0;
    for (auto& v : w) {
        v -= mean;
        l1 += std::abs(v);
    }
    for (auto& v : w) v /= l1;
    return Kernel2D(size, size, std::move(w));
}

GrayImage gabor_enhance(const GrayImage& img, const OrientationField& field, const EnhanceParams& params) {
    if (field.blocks_x() != ceil_div(img.width(), kBlockSize) ||
        field.blocks_y() != ceil_div(img.height(), kBlockSize)) {
        throw InvalidInput("gabor_enhance: orientation field does not match image");
    }
    const RealImage smoothed = convolve(RealImage(img), gaussian_kernel(params.smoothing_sigma).weights);
    GrayImage out = img;
    for (int by = 0; by < field.blocks_y(); ++by) {
        for (int bx = 0; bx < field.blocks_x(); ++bx) {
            if (!field.valid(bx, by)) continue;
            const Kernel2D k = gabor_kernel({field.angle(bx, by), params.f0, params.sigma_x, params.sigma_y});
            const int rx = k.radius_x(), ry = k.radius_y();
            const int x1 = std::min((bx + 1) * kBlockSize, img.width());
            const int y1 = std::min((by + 1) * kBlockSize, img.height());
            for (int y = by * kBlockSize; y < y1; ++y) {
                for (int x = bx * kBlockSize; x < x1; ++x) {
                    double acc = 0.0;
                    for (int ky = -ry; ky <= ry; ++ky)
                        for (int kx = -rx; kx <= rx; ++kx)
                            acc += k.at(kx, ky) * smoothed.clamped(x - kx, y - ky);
                    // |acc| <= 127.5 for a zero-mean, unit-L1 kernel
                    out.at(x, y) = to_pixel(127.5 + acc);
                }
            }
        }
    }
    return out;
}

BinaryImage binarize(const GrayImage& img, const SegmentationMask& mask) {
    if (mask.image_width() != img.width() || mask.image_height() != img.height()) {
        throw InvalidInput("binarize: mask does not match image");
    }
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (mask.pixel_foreground(x, y)) {
                sum += img.at(x, y);
                ++count;
            }
    BinaryImage out(img.width(), img.height());
    if (count == 0) return out;
    const double threshold = sum / static_cast<double>(count);
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (mask.pixel_foreground(x, y) && img.at(x, y) > threshold) out.set(x, y, true);
    return out;
}

std::array<int, 10> neighbours(const BinaryImage& img, int x, int y) {
    std::array<int, 10> n{};
    n[1] = img.get_or_zero(x + 1, y);
    n[2] = img.get_or_zero(x + 1, y - 1);
    n[3] = img.get_or_zero(x, y - 1);
    n[4] = img.get_or_zero(x - 1, y - 1);
    n[5] = img.get_or_zero(x - 1, y);
    n[6] = img.get_or_zero(x - 1, y + 1);
    n[7] = img.get_or_zero(x, y + 1);
    n[8] = img.get_or_zero(x + 1, y + 1);
    n[9] = n[1];
    return n;
}

namespace {

bool deletable(const std::array<int, 10>& n, bool first_subiteration) {
    int xh = 0;
    for (int i = 1; i <= 4; ++i) xh += (n[2 * i - 1] == 0 && (n[2 * i] == 1 || n[2 * i + 1] == 1)) ? 1 : 0;
    if (xh != 1) return false;

    int n1 = 0, n2 = 0;
    for (int k = 1; k <= 4; ++k) {
        n1 += n[2 * k - 1] | n[2 * k];
        n2 += n[2 * k] | n[2 * k + 1];
    }
    const int m = std::min(n1, n2);
    if (m < 2 || m > 3) return false;

    if (first_subiteration) return ((n[2] | n[3] | (1 - n[8])) & n[1]) == 0;
    return ((n[6] | n[7] | (1 - n[4])) & n[5]) == 0;
}

std::size_t thinning_subiteration(BinaryImage& img, bool first) {
    std::vector<std::pair<int, int>> doomed;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            if (img.at(x, y) && deletable(neighbours(img, x, y), first)) doomed.emplace_back(x, y);
    for (auto [x, y] : doomed) img.set(x, y, false);
    return doomed.size();
}

}  // namespace

BinaryImage thin(const BinaryImage& img) {
    BinaryImage out = img;
    for (;;) {
        std::size_t removed = thinning_subiteration(out, true);
        removed += thinning_subiteration(out, false);
        if (removed == 0) break;
    }
    return out;
}

int crossing_number(const BinaryImage& img, int x, int y) {
    const auto n = neighbours(img, x, y);
    int sum = 0;
    for (int i = 1; i <= 8; ++i) sum += std::abs(n[i] - n[i + 1]);
    return sum / 2;
}

namespace {

// A point is kept only when the whole (2*16+1)^2 window around it lies
// inside the image and on foreground blocks.
bool clear_of_boundary(const SegmentationMask& mask, int x, int y) {
    const int x0 = x - kBlockSize, x1 = x + kBlockSize;
    const int y0 = y - kBlockSize, y1 = y + kBlockSize;
    if (x0 < 0 || y0 < 0 || x1 >= mask.image_width() || y1 >= mask.image_height()) return false;
    for (int by = y0 / kBlockSize; by <= y1 / kBlockSize; ++by)
        for (int bx = x0 / kBlockSize; bx <= x1 / kBlockSize; ++bx)
            if (!mask.foreground(bx, by)) return false;
    return true;
}

}  // namespace

MinutiaeSet extract_minutiae(const BinaryImage& thinned, const SegmentationMask& mask) {
    if (mask.image_width() != thinned.width() || mask.image_height() != thinned.height()) {
        throw InvalidInput("extract_minutiae: mask does not match image");
    }
    if (thin(thinned) != thinned) throw InvalidInput("extract_minutiae: input is not thinned");

    MinutiaeSet out;
    for (int y = 0; y < thinned.height(); ++y) {
        for (int x = 0; x < thinned.width(); ++x) {
            if (!thinned.at(x, y) || !mask.pixel_foreground(x, y)) continue;
            const int cn = crossing_number(thinned, x, y);
            if (cn != 1 && cn != 3) continue;
            if (!clear_of_boundary(mask, x, y)) continue;
            out.minutiae.push_back({x, y, cn == 1 ? MinutiaKind::RidgeEnding : MinutiaKind::Bifurcation});
        }
    }
    return out;
}

}  // namespace biokey::fingerprint
