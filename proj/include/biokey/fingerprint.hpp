// SPDX-License-Identifier: Apache-2.0
//
// Fingerprint minutiae extraction: block segmentation, gradient orientation
// field, Gaussian + oriented Gabor enhancement, global binarization,
// two-subiteration thinning and crossing-number minutiae detection.
#pragma once

#include <array>
#include <vector>

#include "biokey/image.hpp"

namespace biokey::fingerprint {

inline constexpr int kBlockSize = 16;

class SegmentationMask {
public:
    SegmentationMask() = default;
    SegmentationMask(int image_width, int image_height, double threshold);

    int image_width() const noexcept { return image_width_; }
    int image_height() const noexcept { return image_height_; }
    int blocks_x() const noexcept { return blocks_x_; }
    int blocks_y() const noexcept { return blocks_y_; }
    double threshold() const noexcept { return threshold_; }

    bool foreground(int bx, int by) const { return flags_[index(bx, by)] != 0; }
    void set_foreground(int bx, int by, bool fg) { flags_[index(bx, by)] = fg ? 1 : 0; }

    bool pixel_foreground(int x, int y) const {
        return foreground(x / kBlockSize, y / kBlockSize);
    }
    std::size_t foreground_count() const;

private:
    std::size_t index(int bx, int by) const {
        return static_cast<std::size_t>(by) * static_cast<std::size_t>(blocks_x_) +
               static_cast<std::size_t>(bx);
    }

    int image_width_ = 0;
    int image_height_ = 0;
    int blocks_x_ = 0;
    int blocks_y_ = 0;
    double threshold_ = 0.0;
    std::vector<std::uint8_t> flags_;
};

// Per-block ridge direction in [0, pi), measured from the +x axis with the
// image y axis pointing down.
class OrientationField {
public:
    OrientationField() = default;
    OrientationField(int blocks_x, int blocks_y)
        : blocks_x_(blocks_x), blocks_y_(blocks_y),
          angles_(static_cast<std::size_t>(blocks_x) * static_cast<std::size_t>(blocks_y), 0.0),
          valid_(angles_.size(), 0) {}

    int blocks_x() const noexcept { return blocks_x_; }
    int blocks_y() const noexcept { return blocks_y_; }
    int block_size() const noexcept { return kBlockSize; }

    bool valid(int bx, int by) const { return valid_[index(bx, by)] != 0; }
    double angle(int bx, int by) const { return angles_[index(bx, by)]; }
    void set(int bx, int by, double theta) {
        angles_[index(bx, by)] = theta;
        valid_[index(bx, by)] = 1;
    }

private:
    std::size_t index(int bx, int by) const {
        return static_cast<std::size_t>(by) * static_cast<std::size_t>(blocks_x_) +
               static_cast<std::size_t>(bx);
    }

    int blocks_x_ = 0;
    int blocks_y_ = 0;
    std::vector<double> angles_;
    std::vector<std::uint8_t> valid_;
};

struct GaborParams {
    double theta = 0.0;
    double f0 = 1.0 / 9.0;
    double sigma_x = 4.0;
    double sigma_y = 4.0;
};

enum class MinutiaKind { RidgeEnding, Bifurcation };

struct Minutia {
    int x = 0;
    int y = 0;
    MinutiaKind kind = MinutiaKind::RidgeEnding;

    bool operator==(const Minutia&) const = default;
};

// Row-major scan order, unique positions.
struct MinutiaeSet {
    std::vector<Minutia> minutiae;

    std::size_t size() const noexcept { return minutiae.size(); }
    bool empty() const noexcept { return minutiae.empty(); }
};

// Sum of the population standard deviations of the central-difference
// gradients over the pixels of one block.
double block_gradient_deviation(const GrayImage& img, int bx, int by);

SegmentationMask segment(const GrayImage& img, double threshold);

// 0.1 x global intensity standard deviation.
double default_segment_threshold(const GrayImage& img, double factor = 0.1);

OrientationField estimate_orientation(const GrayImage& img, const SegmentationMask& mask);

// G(x, y, theta, f0) in Cartesian kernel coordinates (y up).
double gabor_value(double x, double y, const GaborParams& p);

// Zero-mean, L1-normalised kernel of half-width ceil(3 max(sigma_x, sigma_y)),
// sampled on image offsets (dx, dy) with dy pointing down.
Kernel2D gabor_kernel(const GaborParams& p);

struct EnhanceParams {
    double f0 = 1.0 / 9.0;
    double sigma_x = 4.0;
    double sigma_y = 4.0;
    double smoothing_sigma = 1.0;
};

// Gaussian pre-smoothing, then each block with a defined orientation is
// filtered with the Gabor kernel for its angle. Other blocks keep their
// input values.
GrayImage gabor_enhance(const GrayImage& img, const OrientationField& field,
                        const EnhanceParams& params = {});

BinaryImage binarize(const GrayImage& img, const SegmentationMask& mask);

BinaryImage thin(const BinaryImage& img);

// Neighbour values x1..x8 of (x, y): x1 east, counter-clockwise. Index 0
// unused so that code reads like the conditions it implements.
std::array<int, 10> neighbours(const BinaryImage& img, int x, int y);

int crossing_number(const BinaryImage& img, int x, int y);

MinutiaeSet extract_minutiae(const BinaryImage& thinned, const SegmentationMask& mask);

}  // namespace biokey::fingerprint
