// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "biokey/error.hpp"

namespace biokey {

// 8-bit grayscale image, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0)
        : width_(width), height_(height), pixels_(checked_size(width, height), fill) {}
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (pixels_.size() != checked_size(width, height)) {
            throw InvalidInput("pixel buffer does not match image dimensions");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    bool empty() const noexcept { return pixels_.empty(); }
    std::size_t size() const noexcept { return pixels_.size(); }

    std::uint8_t at(int x, int y) const { return pixels_[index(x, y)]; }
    std::uint8_t& at(int x, int y) { return pixels_[index(x, y)]; }

    // Edge-replicated access for windowed operations.
    std::uint8_t clamped(int x, int y) const {
        return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
    }

    double normalized(int x, int y) const { return at(x, y) / 255.0; }

    std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }
    std::span<std::uint8_t> pixels() noexcept { return pixels_; }

    bool operator==(const GrayImage&) const = default;

private:
    static std::size_t checked_size(int width, int height) {
        if (width < 0 || height < 0) throw InvalidInput("negative image dimensions");
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

// Two-level image; every stored value is 0 or 1.
class BinaryImage {
public:
    BinaryImage() = default;
    BinaryImage(int width, int height)
        : width_(width), height_(height),
          bits_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), 0) {}

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return bits_.size(); }

    std::uint8_t at(int x, int y) const { return bits_[index(x, y)]; }
    void set(int x, int y, bool v) { bits_[index(x, y)] = v ? 1 : 0; }

    // Zero outside the image.
    std::uint8_t get_or_zero(int x, int y) const {
        if (x < 0 || y < 0 || x >= width_ || y >= height_) return 0;
        return at(x, y);
    }

    std::size_t count() const noexcept {
        return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
    }

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool operator==(const BinaryImage&) const = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

// Real-valued intermediate image used between filtering stages.
class RealImage {
public:
    RealImage() = default;
    RealImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          values_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {}

    explicit RealImage(const GrayImage& img) : RealImage(img.width(), img.height()) {
        auto px = img.pixels();
        std::copy(px.begin(), px.end(), values_.begin());
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }

    double at(int x, int y) const { return values_[index(x, y)]; }
    double& at(int x, int y) { return values_[index(x, y)]; }
    double clamped(int x, int y) const {
        return at(std::clamp(x, 0, width_ - 1), std::clamp(y, 0, height_ - 1));
    }

    std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
};

// Odd-sized 2D weight grid addressed by offsets from its centre.
class Kernel2D {
public:
    Kernel2D() = default;
    Kernel2D(int width, int height, std::vector<double> weights)
        : width_(width), height_(height), weights_(std::move(weights)) {
        if (width <= 0 || height <= 0 || width % 2 == 0 || height % 2 == 0) {
            throw InvalidParameter("kernel dimensions must be odd and positive");
        }
        if (weights_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
            throw InvalidParameter("kernel weight count does not match dimensions");
        }
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    int radius_x() const noexcept { return width_ / 2; }
    int radius_y() const noexcept { return height_ / 2; }

    // Offset access: dx in [-radius_x, radius_x], dy in [-radius_y, radius_y].
    double at(int dx, int dy) const {
        return weights_[static_cast<std::size_t>(dy + radius_y()) * static_cast<std::size_t>(width_) +
                        static_cast<std::size_t>(dx + radius_x())];
    }

    std::span<const double> weights() const noexcept { return weights_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> weights_;
};

// Round half up and clamp into the 8-bit range.
inline std::uint8_t to_pixel(double v) {
    double r = std::floor(v + 0.5);
    if (!(r > 0.0)) return 0;  // also catches NaN
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

inline GrayImage materialize(const RealImage& img) {
    GrayImage out(img.width(), img.height());
    auto src = img.values();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = to_pixel(src[i]);
    return out;
}

}  // namespace biokey
