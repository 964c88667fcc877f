// SPDX-License-Identifier: Apache-2.0
//
// Iris texture extraction: Canny edges, circular Hough localisation of the
// pupil and limbus, eyelid/eyelash/reflection masking, rubber-sheet
// unwrapping and 1D log-Gabor filtering of the unwrapped rows.
#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "biokey/image.hpp"

namespace biokey::iris {

using EdgeMap = BinaryImage;

struct Circle {
    int cx = 0;
    int cy = 0;
    int r = 0;

    bool operator==(const Circle&) const = default;
};

struct IrisBoundaries {
    Circle pupil;
    Circle iris;
    // Same size as the source image; 1 marks eyelid, eyelash or reflection.
    BinaryImage noise_mask;
};

struct NormalizedIris {
    int radial_res = 0;
    int angular_res = 0;
    // row = radial sample (0 at the pupil), column = angular sample
    std::vector<double> values;
    std::vector<std::uint8_t> mask;

    double value(int row, int col) const { return values[static_cast<std::size_t>(row) * angular_res + col]; }
    bool masked(int row, int col) const { return mask[static_cast<std::size_t>(row) * angular_res + col] != 0; }
};

struct LogGaborParams {
    double f0 = 1.0 / 18.0;
    double sigma_ratio = 0.5;
};

struct IrisTexture {
    std::vector<std::complex<double>> coeffs;

    std::size_t size() const noexcept { return coeffs.size(); }
    bool empty() const noexcept { return coeffs.empty(); }
};

// --- edges -----------------------------------------------------------------

struct CannyThresholds {
    double low = 0.0;
    double high = 0.0;
};

// Gradient magnitude (Sobel on the Gaussian-smoothed image).
RealImage gradient_magnitude(const GrayImage& img, double sigma);

// high = given percentile of the non-zero gradient magnitudes, low = ratio x high.
CannyThresholds canny_auto_thresholds(const GrayImage& img, double sigma, double percentile = 0.7,
                                      double low_ratio = 0.4);

EdgeMap canny_edges(const GrayImage& img, double low, double high, double sigma);

// --- circles -----------------------------------------------------------------

// Inclusive bounds on candidate centres.
struct CentreWindow {
    int x0, y0, x1, y1;
};

struct CircleFit {
    Circle circle;
    int votes = 0;
    // votes divided by the number of lattice points on the voting ring
    double support = 0.0;
};

// Offsets (dx, dy) with r - 0.5 <= sqrt(dx^2 + dy^2) < r + 0.5.
std::vector<std::pair<int, int>> ring_offsets(int r);

CircleFit hough_circle_fit(const EdgeMap& edges, int r_min, int r_max,
                           std::optional<CentreWindow> window = std::nullopt);
Circle hough_circle(const EdgeMap& edges, int r_min, int r_max,
                    std::optional<CentreWindow> window = std::nullopt);

struct LocalizeParams {
    int pupil_r_min = 15;
    int pupil_r_max = 35;
    int iris_r_min = 40;
    int iris_r_max = 80;
    // iris centre searched within this Chebyshev distance of the pupil centre
    int centre_tolerance = 10;
    double min_circle_support = 0.3;
    double canny_sigma = 2.0;
    double canny_percentile = 0.7;
    double canny_low_ratio = 0.4;
};

EdgeMap detect_edges(const GrayImage& img, const LocalizeParams& params);

IrisBoundaries locate_boundaries(const EdgeMap& edges, const LocalizeParams& params);
IrisBoundaries locate_boundaries(const GrayImage& img, const LocalizeParams& params);

// --- noise -------------------------------------------------------------------

struct Line {
    // x cos(theta) + y sin(theta) = rho, image coordinates
    double theta = 0.0;
    double rho = 0.0;
    int votes = 0;
};

// Strongest line through the given edge points (1 degree, 1 pixel bins).
std::optional<Line> hough_line(const std::vector<std::pair<int, int>>& points, int min_votes);

struct NoiseParams {
    double eyelash_threshold = 60.0;
    double reflection_threshold = 250.0;
    // eyelid line needs votes >= fraction x iris diameter
    double eyelid_min_fraction = 0.4;
    double canny_sigma = 2.0;
    double canny_percentile = 0.7;
    double canny_low_ratio = 0.4;
};

IrisBoundaries mask_noise(const GrayImage& img, const IrisBoundaries& bounds, const NoiseParams& params = {});

// --- unwrapping and texture ---------------------------------------------------

NormalizedIris normalize(const GrayImage& img, const IrisBoundaries& bounds, int radial_res, int angular_res);

// Frequency response G(f); G(0) = 0.
double log_gabor_response(double f, const LogGaborParams& params);

IrisTexture log_gabor_features(const NormalizedIris& norm, const LogGaborParams& params = {});

}  // namespace biokey::iris
